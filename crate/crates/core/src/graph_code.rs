//! External code: the `[[5,1,3]]` graph code of a 3-regular graph.
//!
//! The encoder is the isometry whose column for input label `dx` carries the
//! sign `(-1)^γ(dx, dy)` at every output label `dy`, where `γ` is the
//! quadratic form of the adjacency matrix. The decoder is the unitary `𝒯`
//! given by an explicit quadratic phase `θ` over the codeword bits, the
//! syndrome bits and the recovered data bit. Its output register is
//! `l0 l1 l3 l4 x̂0`: four syndrome qubits followed by the data qubit.
//!
//! Error and correction labels use operator-product notation: `BS5` is the
//! operator `B·S` on qubit 5, i.e. the phase flip is applied first.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::CMatrix;
use crate::statevec::{Gate, StateVector};
use crate::{Error, Result, DEFAULT_TOLERANCE, ISOMETRY_TOLERANCE};

/// Largest supported number of output vertices.
pub const MAX_OUTPUTS: usize = 8;

/// Qubit count of the five-qubit code.
pub const CODE_LENGTH: usize = 5;

/// Number of syndrome qubits produced by the five-qubit decoder.
pub const SYNDROME_BITS: usize = 4;

/// 1-based label of the decoded data qubit in error/correction names.
pub const DATA_QUBIT_LABEL: usize = 5;

/// Symmetric, zero-diagonal adjacency matrix over input vertices followed by
/// output vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphAdjacency {
    n_input: usize,
    n_output: usize,
    matrix: Vec<bool>,
}

impl GraphAdjacency {
    /// `rows` is the full `(n_input + n_output)²` matrix, row-major, entries 0/1.
    pub fn new(n_input: usize, n_output: usize, rows: &[u8]) -> Result<Self> {
        let n = n_input + n_output;
        if n_output == 0 || n_output > MAX_OUTPUTS {
            return Err(Error::InvalidGraph(alloc::format!(
                "{n_output} output vertices, supported range is 1..={MAX_OUTPUTS}"
            )));
        }
        if n_input == 0 || n_input > n_output {
            return Err(Error::InvalidGraph(alloc::format!(
                "{n_input} input vertices for {n_output} outputs"
            )));
        }
        if rows.len() != n * n {
            return Err(Error::InvalidGraph(alloc::format!(
                "{} matrix entries, expected {}",
                rows.len(),
                n * n
            )));
        }
        let mut matrix = Vec::with_capacity(n * n);
        for (k, &e) in rows.iter().enumerate() {
            match e {
                0 => matrix.push(false),
                1 => matrix.push(true),
                _ => {
                    return Err(Error::InvalidGraph(alloc::format!(
                        "entry ({}, {}) is {e}, not 0/1",
                        k / n,
                        k % n
                    )))
                }
            }
        }
        for u in 0..n {
            if matrix[u * n + u] {
                return Err(Error::InvalidGraph(alloc::format!(
                    "nonzero diagonal at vertex {u}"
                )));
            }
            for v in 0..u {
                if matrix[u * n + v] != matrix[v * n + u] {
                    return Err(Error::InvalidGraph(alloc::format!(
                        "matrix not symmetric at ({u}, {v})"
                    )));
                }
            }
        }
        Ok(Self {
            n_input,
            n_output,
            matrix,
        })
    }

    /// The 3-regular graph of the `[[5,1,3]]` code, vertices `x0, y0..y4`.
    pub fn five_qubit_code() -> Self {
        #[rustfmt::skip]
        const GAMMA: [u8; 36] = [
            0, 1, 1, 1, 0, 0,
            1, 0, 1, 0, 1, 0,
            1, 1, 0, 0, 0, 1,
            1, 0, 0, 0, 1, 1,
            0, 1, 0, 1, 0, 1,
            0, 0, 1, 1, 1, 0,
        ];
        Self::new(1, 5, &GAMMA).expect("bundled graph is valid")
    }

    pub fn n_input(&self) -> usize {
        self.n_input
    }

    pub fn n_output(&self) -> usize {
        self.n_output
    }

    pub fn vertex_count(&self) -> usize {
        self.n_input + self.n_output
    }

    pub fn edge(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.vertex_count() + v]
    }

    /// Row `u` as 0/1 entries.
    pub fn row(&self, u: usize) -> impl Iterator<Item = u8> + '_ {
        let n = self.vertex_count();
        self.matrix[u * n..(u + 1) * n].iter().map(|&b| b as u8)
    }

    /// `γ = ½ dᵀΓd mod 2`, written as the sum of `d_u d_v` over edges `u < v`.
    pub fn phase(&self) -> QuadraticPhase<usize> {
        let n = self.vertex_count();
        let monomials = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.edge(u, v))
            .collect();
        QuadraticPhase::new(monomials)
    }
}

/// Sum of products of bit-valued variables, evaluated mod 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPhase<V> {
    monomials: Vec<(V, V)>,
}

impl<V: Copy + PartialEq> QuadraticPhase<V> {
    pub fn new(monomials: Vec<(V, V)>) -> Self {
        Self { monomials }
    }

    pub fn monomials(&self) -> &[(V, V)] {
        &self.monomials
    }

    /// Parity of the number of monomials whose two variables are both 1.
    pub fn evaluate(&self, value: impl Fn(V) -> bool) -> bool {
        self.monomials
            .iter()
            .fold(false, |acc, &(u, v)| acc ^ (value(u) && value(v)))
    }

    /// `e^{iπ·θ}` as ±1.
    pub fn sign(&self, value: impl Fn(V) -> bool) -> f64 {
        if self.evaluate(value) {
            -1.0
        } else {
            1.0
        }
    }
}

/// Variables of the decoder phase `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecoderVar {
    /// `y_i`: codeword bit `i` (decoder input).
    Codeword(usize),
    /// `l_i`: syndrome vertex attached to `y_i` (decoder output).
    Syndrome(usize),
    /// `x̂_i`: recovered input bit (decoder output).
    Recovered(usize),
}

impl fmt::Display for DecoderVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderVar::Codeword(i) => write!(f, "y{i}"),
            DecoderVar::Syndrome(i) => write!(f, "l{i}"),
            DecoderVar::Recovered(i) => write!(f, "x̂{i}"),
        }
    }
}

/// Output register of the five-qubit decoder, most significant first.
pub const DECODER_OUTPUTS: [DecoderVar; 5] = [
    DecoderVar::Syndrome(0),
    DecoderVar::Syndrome(1),
    DecoderVar::Syndrome(3),
    DecoderVar::Syndrome(4),
    DecoderVar::Recovered(0),
];

/// `θ` of the five-qubit decoder. No `l2` term: vertex `y2` has no syndrome
/// vertex.
pub fn five_qubit_decoder_phase() -> QuadraticPhase<DecoderVar> {
    use DecoderVar::{Codeword as Y, Recovered as X, Syndrome as L};
    QuadraticPhase::new(vec![
        (X(0), Y(0)),
        (X(0), Y(1)),
        (X(0), Y(2)),
        (Y(0), Y(1)),
        (Y(0), Y(3)),
        (Y(1), Y(4)),
        (Y(2), Y(3)),
        (Y(2), Y(4)),
        (Y(3), Y(4)),
        (Y(0), L(0)),
        (Y(1), L(1)),
        (Y(3), L(3)),
        (Y(4), L(4)),
    ])
}

#[inline]
fn label_bit(label: usize, i: usize, width: usize) -> bool {
    (label >> (width - 1 - i)) & 1 == 1
}

/// Encoder isometry `V: C^(2^k) -> C^(2^n)` of a graph code.
#[derive(Clone, Debug)]
pub struct GraphEncoder {
    graph: GraphAdjacency,
    matrix: CMatrix,
}

/// Builds the encoder isometry of `graph` and checks `V†V = I`.
pub fn build_encoder(graph: &GraphAdjacency) -> Result<GraphEncoder> {
    let (k, n) = (graph.n_input(), graph.n_output());
    let gamma = graph.phase();
    let scale = 1.0 / libm::sqrt((1usize << n) as f64);
    let matrix = CMatrix::from_fn(1 << n, 1 << k, |dy, dx| {
        let s = gamma.sign(|v| {
            if v < k {
                label_bit(dx, v, k)
            } else {
                label_bit(dy, v - k, n)
            }
        });
        Complex64::new(s * scale, 0.0)
    });
    let deviation = matrix.isometry_deviation();
    if deviation > ISOMETRY_TOLERANCE {
        return Err(Error::Construction {
            what: "graph encoder",
            deviation,
        });
    }
    Ok(GraphEncoder {
        graph: graph.clone(),
        matrix,
    })
}

impl GraphEncoder {
    pub fn graph(&self) -> &GraphAdjacency {
        &self.graph
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn input_qubits(&self) -> usize {
        self.graph.n_input()
    }

    pub fn output_qubits(&self) -> usize {
        self.graph.n_output()
    }

    pub fn encode(&self, input: &StateVector) -> Result<StateVector> {
        if input.num_qubits() != self.input_qubits() {
            return Err(Error::InvalidArgument(alloc::format!(
                "encoder takes {} qubit(s), got {}",
                self.input_qubits(),
                input.num_qubits()
            )));
        }
        self.matrix.apply(input)
    }
}

/// 4-bit syndrome `q1 q2 q3 q4` read off the decoder output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(u8);

impl Syndrome {
    pub fn new(value: u8) -> Result<Self> {
        if value >> SYNDROME_BITS != 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "syndrome value {value} exceeds 4 bits"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = Syndrome> {
        (0..1u8 << SYNDROME_BITS).map(Syndrome)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04b}", self.0)
    }
}

impl FromStr for Syndrome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != SYNDROME_BITS || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidArgument(alloc::format!(
                "malformed syndrome {s:?}"
            )));
        }
        Syndrome::new(u8::from_str_radix(s, 2).expect("checked binary digits"))
    }
}

/// Serde through the `Display`/`FromStr` text forms.
macro_rules! serde_as_text {
    ($($t:ty),*) => {$(
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    )*};
}

serde_as_text!(Syndrome, ErrorLabel, CorrectionOp, DataStateForm);

/// The syndrome-extraction unitary `𝒯` of the five-qubit graph code.
#[derive(Clone, Debug)]
pub struct SyndromeDecoder {
    theta: QuadraticPhase<DecoderVar>,
    matrix: CMatrix,
}

/// Builds `𝒯` with entries `e^{-iπθ}/√32` from codeword label `y` to output
/// label `(l0 l1 l3 l4 x̂0)`, and verifies unitarity.
pub fn build_syndrome_decoder(theta: &QuadraticPhase<DecoderVar>) -> Result<SyndromeDecoder> {
    for &(u, v) in theta.monomials() {
        for var in [u, v] {
            let known = match var {
                DecoderVar::Codeword(i) => i < CODE_LENGTH,
                _ => DECODER_OUTPUTS.contains(&var),
            };
            if !known {
                return Err(Error::InvalidArgument(alloc::format!(
                    "θ references unknown variable {var}"
                )));
            }
        }
    }
    let dim = 1usize << CODE_LENGTH;
    let scale = 1.0 / libm::sqrt(dim as f64);
    let matrix = CMatrix::from_fn(dim, dim, |out, y| {
        // e^{-iπθ} = e^{iπθ} for integer θ
        let s = theta.sign(|var| match var {
            DecoderVar::Codeword(i) => label_bit(y, i, CODE_LENGTH),
            other => {
                let pos = DECODER_OUTPUTS
                    .iter()
                    .position(|&o| o == other)
                    .expect("checked above");
                label_bit(out, pos, CODE_LENGTH)
            }
        });
        Complex64::new(s * scale, 0.0)
    });
    let deviation = matrix.isometry_deviation();
    if deviation > ISOMETRY_TOLERANCE {
        return Err(Error::Construction {
            what: "syndrome decoder",
            deviation,
        });
    }
    Ok(SyndromeDecoder {
        theta: theta.clone(),
        matrix,
    })
}

impl SyndromeDecoder {
    pub fn theta(&self) -> &QuadraticPhase<DecoderVar> {
        &self.theta
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, state5: &StateVector) -> Result<StateVector> {
        if state5.num_qubits() != CODE_LENGTH {
            return Err(Error::InvalidArgument(alloc::format!(
                "decoder takes {CODE_LENGTH} qubits, got {}",
                state5.num_qubits()
            )));
        }
        self.matrix.apply(state5)
    }

    /// Applies `𝒯`, measures the four syndrome qubits and returns the
    /// syndrome with the residual data-qubit state (global phase preserved).
    pub fn decode_and_extract(&self, state5: &StateVector) -> Result<(Syndrome, StateVector)> {
        let decoded = self.apply(state5)?;
        let (bits, post) = decoded.measure_deterministic(&[0, 1, 2, 3])?;
        let base = (bits.value() as usize) << 1;
        let data = vec![post.amplitude(base), post.amplitude(base | 1)];
        Ok((
            Syndrome(bits.value() as u8),
            StateVector::from_amplitudes(1, data)?,
        ))
    }
}

/// Single-qubit bit flip `B` (σx) or phase flip `S` (σz).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flip {
    Bit,
    Phase,
}

impl Flip {
    fn gate(self, qubit: usize) -> Gate {
        match self {
            Flip::Bit => Gate::X(qubit),
            Flip::Phase => Gate::Z(qubit),
        }
    }

    fn matrix(self) -> [[i8; 2]; 2] {
        match self {
            Flip::Bit => [[0, 1], [1, 0]],
            Flip::Phase => [[1, 0], [0, -1]],
        }
    }

    fn letter(self) -> char {
        match self {
            Flip::Bit => 'B',
            Flip::Phase => 'S',
        }
    }
}

fn mat_mul(a: [[i8; 2]; 2], b: [[i8; 2]; 2]) -> [[i8; 2]; 2] {
    let mut c = [[0i8; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Single-qubit error on the 5-qubit codeword, qubits labelled 1..=5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorLabel {
    None,
    Bit(usize),
    Phase(usize),
    /// The operator `B·S`: phase flip first, then bit flip.
    BitPhase(usize),
}

impl ErrorLabel {
    /// `None`, then `B_i`, `S_i`, `BS_i` for `i = 1..=n`.
    pub fn single_qubit_errors(n: usize) -> Vec<ErrorLabel> {
        let mut v = vec![ErrorLabel::None];
        v.extend((1..=n).map(ErrorLabel::Bit));
        v.extend((1..=n).map(ErrorLabel::Phase));
        v.extend((1..=n).map(ErrorLabel::BitPhase));
        v
    }

    /// Gates in application order on 0-based qubits.
    pub fn gates(&self) -> Vec<Gate> {
        match *self {
            ErrorLabel::None => vec![],
            ErrorLabel::Bit(i) => vec![Gate::X(i - 1)],
            ErrorLabel::Phase(i) => vec![Gate::Z(i - 1)],
            ErrorLabel::BitPhase(i) => vec![Gate::Z(i - 1), Gate::X(i - 1)],
        }
    }
}

impl fmt::Display for ErrorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorLabel::None => f.write_str("None"),
            ErrorLabel::Bit(i) => write!(f, "B{i}"),
            ErrorLabel::Phase(i) => write!(f, "S{i}"),
            ErrorLabel::BitPhase(i) => write!(f, "BS{i}"),
        }
    }
}

impl FromStr for ErrorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "None" {
            return Ok(ErrorLabel::None);
        }
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (kind, num) = s.split_at(split);
        let qubit: usize = num
            .parse()
            .map_err(|_| Error::InvalidArgument(alloc::format!("malformed error label {s:?}")))?;
        if qubit == 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "qubit labels start at 1: {s:?}"
            )));
        }
        match kind {
            "B" => Ok(ErrorLabel::Bit(qubit)),
            "S" => Ok(ErrorLabel::Phase(qubit)),
            "BS" => Ok(ErrorLabel::BitPhase(qubit)),
            _ => Err(Error::InvalidArgument(alloc::format!(
                "malformed error label {s:?}"
            ))),
        }
    }
}

/// Local correction on the decoded data qubit, as an operator product in
/// written order: `SBS` means `S·B·S`, applied right to left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CorrectionOp {
    factors: Vec<Flip>,
}

impl CorrectionOp {
    pub const MAX_LEN: usize = 3;

    pub fn new(factors: Vec<Flip>) -> Result<Self> {
        if factors.len() > Self::MAX_LEN {
            return Err(Error::InvalidArgument(alloc::format!(
                "correction of length {} exceeds {}",
                factors.len(),
                Self::MAX_LEN
            )));
        }
        Ok(Self { factors })
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[Flip] {
        &self.factors
    }

    pub fn is_none(&self) -> bool {
        self.factors.is_empty()
    }

    /// Gates on `qubit` in application order.
    pub fn gates(&self, qubit: usize) -> Vec<Gate> {
        self.factors.iter().rev().map(|f| f.gate(qubit)).collect()
    }

    fn matrix(&self) -> [[i8; 2]; 2] {
        self.factors
            .iter()
            .fold([[1, 0], [0, 1]], |acc, f| mat_mul(acc, f.matrix()))
    }

    /// Every sequence of exactly `len` factors.
    fn all_of_length(len: usize) -> impl Iterator<Item = CorrectionOp> {
        (0..1usize << len).map(move |bits| CorrectionOp {
            factors: (0..len)
                .map(|i| {
                    if label_bit(bits, i, len) {
                        Flip::Phase
                    } else {
                        Flip::Bit
                    }
                })
                .collect(),
        })
    }
}

impl fmt::Display for CorrectionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("None");
        }
        for flip in &self.factors {
            write!(f, "{}", flip.letter())?;
        }
        write!(f, "{DATA_QUBIT_LABEL}")
    }
}

impl FromStr for CorrectionOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "None" {
            return Ok(Self::none());
        }
        let letters = s.strip_suffix(DATA_QUBIT_LABEL_STR).ok_or_else(|| {
            Error::InvalidArgument(alloc::format!("correction {s:?} must act on qubit 5"))
        })?;
        let factors = letters
            .chars()
            .map(|c| match c {
                'B' => Ok(Flip::Bit),
                'S' => Ok(Flip::Phase),
                _ => Err(Error::InvalidArgument(alloc::format!(
                    "malformed correction {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() {
            return Err(Error::InvalidArgument(alloc::format!(
                "malformed correction {s:?}"
            )));
        }
        Self::new(factors)
    }
}

const DATA_QUBIT_LABEL_STR: &str = "5";

/// Applies a correction to a 1-qubit state.
pub fn apply_correction(data_qubit: &StateVector, op: &CorrectionOp) -> Result<StateVector> {
    if data_qubit.num_qubits() != 1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "corrections act on 1 qubit, got {}",
            data_qubit.num_qubits()
        )));
    }
    let mut out = data_qubit.clone();
    out.apply_circuit(&op.gates(0))?;
    Ok(out)
}

/// Residual data-qubit state `Σ_k sign_k · c(k)|image_k>` left after
/// decoding, a signed permutation of `c(0)|0> + c(1)|1>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DataStateForm {
    images: [(u8, i8); 2],
}

impl DataStateForm {
    pub fn identity() -> Self {
        Self {
            images: [(0, 1), (1, 1)],
        }
    }

    fn from_matrix(m: [[i8; 2]; 2]) -> Option<Self> {
        let mut images = [(0u8, 0i8); 2];
        for (k, img) in images.iter_mut().enumerate() {
            let col = [m[0][k], m[1][k]];
            *img = match col {
                [s, 0] if s != 0 => (0, s),
                [0, s] if s != 0 => (1, s),
                _ => return None,
            };
        }
        (images[0].0 != images[1].0).then_some(Self { images })
    }

    fn matrix(&self) -> [[i8; 2]; 2] {
        let mut m = [[0i8; 2]; 2];
        for (k, &(basis, sign)) in self.images.iter().enumerate() {
            m[basis as usize][k] = sign;
        }
        m
    }

    /// Rounds a numerical residual to a signed permutation, if it is one.
    fn from_residual(cols: [[Complex64; 2]; 2], tol: f64) -> Option<Self> {
        let mut m = [[0i8; 2]; 2];
        for (k, col) in cols.iter().enumerate() {
            for (j, z) in col.iter().enumerate() {
                let r = libm::round(z.re);
                if (z - Complex64::new(r, 0.0)).norm() > tol || r.abs() > 1.0 {
                    return None;
                }
                m[j][k] = r as i8;
            }
        }
        Self::from_matrix(m)
    }
}

impl fmt::Display for DataStateForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, &(basis, sign)) in self.images.iter().enumerate() {
            match (k, sign < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "c({k})|{basis}>")?;
        }
        Ok(())
    }
}

impl FromStr for DataStateForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(alloc::format!("malformed data state form {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut images = [(0u8, 0i8); 2];
        let mut rest = compact.as_str();
        for (k, img) in images.iter_mut().enumerate() {
            let sign = if let Some(r) = rest.strip_prefix('-') {
                rest = r;
                -1
            } else {
                if let Some(r) = rest.strip_prefix('+') {
                    if k == 0 {
                        return Err(bad());
                    }
                    rest = r;
                } else if k > 0 {
                    return Err(bad());
                }
                1
            };
            let head = alloc::format!("c({k})|");
            rest = rest.strip_prefix(head.as_str()).ok_or_else(bad)?;
            let basis = match rest.get(..2) {
                Some("0>") => 0,
                Some("1>") => 1,
                _ => return Err(bad()),
            };
            rest = &rest[2..];
            *img = (basis, sign);
        }
        if !rest.is_empty() || images[0].0 == images[1].0 {
            return Err(bad());
        }
        Ok(Self { images })
    }
}

/// One line of the syndrome table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyndromeRow {
    pub syndrome: Syndrome,
    #[serde(rename = "error_label")]
    pub error: ErrorLabel,
    #[serde(rename = "data_state_form")]
    pub data_state: DataStateForm,
    pub correction: CorrectionOp,
}

/// Map from each 4-bit syndrome to the error it identifies and its fix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeTable {
    rows: Vec<SyndromeRow>,
}

impl SyndromeTable {
    /// Sorts rows by syndrome and checks the table invariants: 16 distinct
    /// syndromes, with `None` exactly at `0000`.
    pub fn from_rows(mut rows: Vec<SyndromeRow>) -> Result<Self> {
        rows.sort_by_key(|r| r.syndrome);
        if rows.windows(2).any(|w| w[0].syndrome == w[1].syndrome) {
            return Err(Error::CodeProperty("duplicate syndromes".into()));
        }
        if rows.len() != 1 << SYNDROME_BITS {
            return Err(Error::CodeProperty(alloc::format!(
                "{} rows, expected {}",
                rows.len(),
                1 << SYNDROME_BITS
            )));
        }
        let none_rows: Vec<_> = rows
            .iter()
            .filter(|r| r.error == ErrorLabel::None)
            .collect();
        if none_rows.len() != 1 || none_rows[0].syndrome.value() != 0 {
            return Err(Error::CodeProperty(
                "the error-free row must be the only one at 0000".into(),
            ));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[SyndromeRow] {
        &self.rows
    }

    pub fn lookup(&self, syndrome: Syndrome) -> Option<&SyndromeRow> {
        self.rows.get(syndrome.value() as usize)
    }
}

/// Regenerates the syndrome table by enumeration.
///
/// Each error in `{None} ∪ {B_i, S_i, BS_i}` is applied to the encodings of
/// `|0>` and `(|0>+i|1>)/√2`; together the two residuals fix the 2x2 map left
/// on the data qubit. The correction is the unique shortest `{B,S}` product
/// that undoes that map exactly, global phase included.
pub fn generate_syndrome_table(
    encoder: &GraphEncoder,
    decoder: &SyndromeDecoder,
) -> Result<SyndromeTable> {
    if encoder.input_qubits() != 1 || encoder.output_qubits() != CODE_LENGTH {
        return Err(Error::InvalidArgument(
            "syndrome table generation needs a 1 -> 5 qubit encoder".into(),
        ));
    }
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let probes = [
        StateVector::basis_state(1, "0")?,
        StateVector::from_amplitudes(1, vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)])?,
    ];
    let encoded = probes
        .iter()
        .map(|p| encoder.encode(p))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for error in ErrorLabel::single_qubit_errors(CODE_LENGTH) {
        let mut outcomes = Vec::with_capacity(2);
        for state in &encoded {
            let mut noisy = state.clone();
            noisy.apply_circuit(&error.gates())?;
            outcomes.push(decoder.decode_and_extract(&noisy).map_err(|e| match e {
                Error::NondeterministicMeasurement { max_probability } => {
                    Error::CodeProperty(alloc::format!(
                        "syndrome of {error} is not deterministic (p = {max_probability:.3e})"
                    ))
                }
                other => other,
            })?);
        }
        let syndrome = outcomes[0].0;
        if outcomes[1].0 != syndrome {
            return Err(Error::CodeProperty(alloc::format!(
                "syndrome of {error} depends on the input state"
            )));
        }
        let col0 = [outcomes[0].1.amplitude(0), outcomes[0].1.amplitude(1)];
        let i = Complex64::new(0.0, 1.0);
        let sqrt2 = core::f64::consts::SQRT_2;
        let col1 = [
            -i * (outcomes[1].1.amplitude(0) * sqrt2 - col0[0]),
            -i * (outcomes[1].1.amplitude(1) * sqrt2 - col0[1]),
        ];
        let data_state =
            DataStateForm::from_residual([col0, col1], DEFAULT_TOLERANCE).ok_or_else(|| {
                Error::TableGeneration(alloc::format!(
                    "residual of {error} is not a signed permutation of the data state"
                ))
            })?;
        let correction = shortest_exact_correction(data_state)
            .map_err(|msg| Error::TableGeneration(alloc::format!("{error}: {msg}")))?;
        rows.push(SyndromeRow {
            syndrome,
            error,
            data_state,
            correction,
        });
    }
    SyndromeTable::from_rows(rows)
}

fn shortest_exact_correction(
    residual: DataStateForm,
) -> core::result::Result<CorrectionOp, &'static str> {
    let m = residual.matrix();
    for len in 0..=CorrectionOp::MAX_LEN {
        let mut hits =
            CorrectionOp::all_of_length(len).filter(|c| mat_mul(c.matrix(), m) == [[1, 0], [0, 1]]);
        if let Some(first) = hits.next() {
            if hits.next().is_some() {
                return Err("shortest restoring correction is not unique");
            }
            return Ok(first);
        }
    }
    Err("no correction of length <= 3 restores the data state")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Rows of the published syndrome table, in syndrome order.
    const REFERENCE: [(&str, &str, &str, &str); 16] = [
        ("0000", "None", "c(0)|0> + c(1)|1>", "None"),
        ("0001", "S5", "c(0)|0> + c(1)|1>", "None"),
        ("0010", "S4", "c(0)|0> + c(1)|1>", "None"),
        ("0011", "B3", "c(0)|0> - c(1)|1>", "S5"),
        ("0100", "S2", "c(0)|0> + c(1)|1>", "None"),
        ("0101", "B4", "c(0)|1> + c(1)|0>", "B5"),
        ("0110", "B1", "c(0)|0> - c(1)|1>", "S5"),
        ("0111", "BS4", "-c(0)|1> - c(1)|0>", "SBS5"),
        ("1000", "S1", "c(0)|0> + c(1)|1>", "None"),
        ("1001", "B2", "c(0)|0> - c(1)|1>", "S5"),
        ("1010", "B5", "c(0)|1> + c(1)|0>", "B5"),
        ("1011", "BS5", "-c(0)|1> - c(1)|0>", "SBS5"),
        ("1100", "S3", "c(0)|1> + c(1)|0>", "B5"),
        ("1101", "BS2", "-c(0)|0> + c(1)|1>", "BSB5"),
        ("1110", "BS1", "-c(0)|0> + c(1)|1>", "BSB5"),
        ("1111", "BS3", "-c(0)|1> + c(1)|0>", "BS5"),
    ];

    fn code() -> (GraphEncoder, SyndromeDecoder) {
        (
            build_encoder(&GraphAdjacency::five_qubit_code()).unwrap(),
            build_syndrome_decoder(&five_qubit_decoder_phase()).unwrap(),
        )
    }

    fn sample_qubit() -> StateVector {
        StateVector::from_amplitudes(1, vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)])
            .unwrap()
    }

    fn qubit(c0: Complex64, c1: Complex64) -> StateVector {
        StateVector::from_amplitudes(1, vec![c0, c1]).unwrap()
    }

    /// `½ dᵀΓd mod 2` by plain integer matrix products.
    fn half_quadratic_form(graph: &GraphAdjacency, d: &[u32]) -> u32 {
        let n = graph.vertex_count();
        let mut total = 0u32;
        for u in 0..n {
            let row: Vec<u8> = graph.row(u).collect();
            for v in 0..n {
                total += d[u] * row[v] as u32 * d[v];
            }
        }
        assert_eq!(total % 2, 0, "dᵀΓd is even for symmetric zero-diagonal Γ");
        (total / 2) % 2
    }

    #[test]
    fn gamma_matrix_rows() {
        let g = GraphAdjacency::five_qubit_code();
        assert_eq!((g.n_input(), g.n_output()), (1, 5));
        let rows: Vec<Vec<u8>> = (0..6).map(|u| g.row(u).collect()).collect();
        assert_eq!(rows[0], [0, 1, 1, 1, 0, 0]);
        assert_eq!(rows[3], [1, 0, 0, 0, 1, 1]);
        for row in &rows {
            assert_eq!(
                row.iter().map(|&b| b as usize).sum::<usize>(),
                3,
                "3-regular"
            );
        }
    }

    #[test]
    fn invalid_graphs() {
        let mut m = [0u8; 4];
        m[1] = 1;
        assert!(matches!(
            GraphAdjacency::new(1, 1, &m),
            Err(Error::InvalidGraph(_))
        ));
        let m = [1u8, 0, 0, 0];
        assert!(matches!(
            GraphAdjacency::new(1, 1, &m),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            GraphAdjacency::new(1, 1, &[0, 2, 2, 0]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            GraphAdjacency::new(1, 9, &[0; 100]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn encoder_signs_match_brute_force_quadratic_form() {
        let g = GraphAdjacency::five_qubit_code();
        let enc = build_encoder(&g).unwrap();
        let scale = 1.0 / 32f64.sqrt();
        for dx in 0..2u32 {
            for dy in 0..32u32 {
                let mut d = vec![dx];
                d.extend((0..5).map(|i| (dy >> (4 - i)) & 1));
                let expected = if half_quadratic_form(&g, &d) == 1 {
                    -scale
                } else {
                    scale
                };
                let got = enc.matrix().get(dy as usize, dx as usize);
                assert!(
                    (got - Complex64::new(expected, 0.0)).norm() < 1e-15,
                    "dx={dx} dy={dy:05b}"
                );
            }
        }
    }

    #[test]
    fn encoder_signs_of_listed_codeword_terms() {
        let enc = build_encoder(&GraphAdjacency::five_qubit_code()).unwrap();
        let sign = |dy: usize, dx: usize| enc.matrix().get(dy, dx).re.signum();
        // c(0) branch: +|00000> +|00001> ... -|11110> +|11111>
        assert_eq!(
            [sign(0, 0), sign(1, 0), sign(30, 0), sign(31, 0)],
            [1.0, 1.0, -1.0, 1.0]
        );
        // c(1) branch: +|00000> +|00001> +|11110> ... -|11111>
        assert_eq!(
            [sign(0, 1), sign(1, 1), sign(30, 1), sign(31, 1)],
            [1.0, 1.0, 1.0, -1.0]
        );
        assert!(enc.matrix().isometry_deviation() < 1e-10);
    }

    #[test]
    fn decoder_construction() {
        let dec = build_syndrome_decoder(&five_qubit_decoder_phase()).unwrap();
        assert!(dec.matrix().isometry_deviation() < 1e-10);

        let empty = QuadraticPhase::new(vec![]);
        assert!(matches!(
            build_syndrome_decoder(&empty),
            Err(Error::Construction { .. })
        ));

        let unknown = QuadraticPhase::new(vec![(DecoderVar::Codeword(2), DecoderVar::Syndrome(2))]);
        assert!(matches!(
            build_syndrome_decoder(&unknown),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn decode_examples() {
        let (enc, dec) = code();
        let v = sample_qubit();
        let (c0, c1) = (v.amplitude(0), v.amplitude(1));
        let word = enc.encode(&v).unwrap();

        let (s, data) = dec.decode_and_extract(&word).unwrap();
        assert_eq!(s.to_string(), "0000");
        assert!(data.fidelity(&v).unwrap() > 1.0 - 1e-12);

        let mut x1 = word.clone();
        x1.apply_gate(&Gate::X(0)).unwrap();
        let (s, data) = dec.decode_and_extract(&x1).unwrap();
        assert_eq!(s.to_string(), "0110");
        assert!(data.fidelity(&qubit(c0, -c1)).unwrap() > 1.0 - 1e-12);

        let mut z3 = word;
        z3.apply_gate(&Gate::Z(2)).unwrap();
        let (s, data) = dec.decode_and_extract(&z3).unwrap();
        assert_eq!(s.to_string(), "1100");
        assert!(data.fidelity(&qubit(c1, c0)).unwrap() > 1.0 - 1e-12);

        assert!(dec.decode_and_extract(&v).is_err());
    }

    #[test]
    fn regenerated_table_matches_reference() {
        let (enc, dec) = code();
        let table = generate_syndrome_table(&enc, &dec).unwrap();
        assert_eq!(table.rows().len(), 16);
        for (row, (s, e, form, c)) in table.rows().iter().zip(REFERENCE) {
            assert_eq!(row.syndrome.to_string(), s);
            assert_eq!(row.error.to_string(), e, "syndrome {s}");
            assert_eq!(row.data_state.to_string(), form, "syndrome {s}");
            assert_eq!(row.correction.to_string(), c, "syndrome {s}");
        }
        let bs4 = table.lookup("0111".parse().unwrap()).unwrap();
        assert_eq!(
            (bs4.error, bs4.correction.to_string().as_str()),
            (ErrorLabel::BitPhase(4), "SBS5")
        );
    }

    #[test]
    fn labels_round_trip_through_text() {
        for (_, e, form, c) in REFERENCE {
            assert_eq!(e.parse::<ErrorLabel>().unwrap().to_string(), e);
            assert_eq!(form.parse::<DataStateForm>().unwrap().to_string(), form);
            assert_eq!(c.parse::<CorrectionOp>().unwrap().to_string(), c);
        }
        assert!("c(0)|0> + c(1)|0>".parse::<DataStateForm>().is_err());
        assert!("BX5".parse::<CorrectionOp>().is_err());
        assert!("SBSB5".parse::<CorrectionOp>().is_err());
        assert!("Q3".parse::<ErrorLabel>().is_err());
    }

    #[test]
    fn correction_examples() {
        let v = sample_qubit();
        let (c0, c1) = (v.amplitude(0), v.amplitude(1));
        let s5: CorrectionOp = "S5".parse().unwrap();
        let fixed = apply_correction(&qubit(c0, -c1), &s5).unwrap();
        assert!(fixed.fidelity(&v).unwrap() > 1.0 - 1e-12);
        assert_eq!(apply_correction(&v, &CorrectionOp::none()).unwrap(), v);
        let b5: CorrectionOp = "B5".parse().unwrap();
        let fixed = apply_correction(&qubit(c1, c0), &b5).unwrap();
        assert!(fixed.fidelity(&v).unwrap() > 1.0 - 1e-12);
        // SBS undoes -c(0)|1> - c(1)|0> with the global phase included
        let sbs: CorrectionOp = "SBS5".parse().unwrap();
        let fixed = apply_correction(&qubit(-c1, -c0), &sbs).unwrap();
        assert!((fixed.inner(&v).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn round_trip_and_single_error_correction_on_random_inputs() {
        let (enc, dec) = code();
        let table = generate_syndrome_table(&enc, &dec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v = StateVector::random(1, &mut rng).unwrap();
            let word = enc.encode(&v).unwrap();
            let (s, data) = dec.decode_and_extract(&word).unwrap();
            assert_eq!(s.value(), 0);
            assert!(data.fidelity(&v).unwrap() >= 1.0 - 1e-10);

            for q in 0..5 {
                for gates in [
                    vec![Gate::X(q)],
                    vec![Gate::Z(q)],
                    vec![Gate::Z(q), Gate::X(q)],
                ] {
                    let mut noisy = word.clone();
                    noisy.apply_circuit(&gates).unwrap();
                    let decoded = dec.apply(&noisy).unwrap();
                    let probs = decoded.marginal(&[0, 1, 2, 3]).unwrap();
                    assert!(
                        probs.iter().any(|&p| p >= 1.0 - 1e-9),
                        "syndrome determinism"
                    );
                    let (s, data) = dec.decode_and_extract(&noisy).unwrap();
                    let row = table.lookup(s).unwrap();
                    let fixed = apply_correction(&data, &row.correction).unwrap();
                    assert!(fixed.fidelity(&v).unwrap() >= 1.0 - 1e-10);
                }
            }
        }
    }
}
