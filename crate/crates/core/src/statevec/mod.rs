//! Dense state vectors over at most [`MAX_QUBITS`] qubits.
//!
//! Qubit 0 is the most significant bit of a basis label, so the ket
//! `|b0 b1 ... b(n-1)>` sits at index `b0 * 2^(n-1) + ... + b(n-1)`.

mod gate;
mod sparse;

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

pub use gate::{BitString, Gate, GateQubits, QubitAddress, Unitary2, BLOCK_SIZE};
pub use sparse::SparseState;

use crate::{Error, Result, DEFAULT_TOLERANCE};

pub const MAX_QUBITS: usize = 21;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[derive(Clone, Copy)]
enum MonomialOp {
    Flip { cmask: usize, tmask: usize },
    Sign { mask: usize },
    Y { tmask: usize },
}

/// A run of monomial gates compiled to bit masks: maps a basis index to its
/// image index and phase.
pub(crate) struct MonomialOps(Vec<MonomialOp>);

impl MonomialOps {
    /// `gates` must all be monomial and valid for `num_qubits`.
    pub(crate) fn compile(gates: &[Gate], num_qubits: usize) -> Self {
        let mask = |q: usize| 1usize << (num_qubits - 1 - q);
        Self(
            gates
                .iter()
                .map(|g| match *g {
                    Gate::X(q) => MonomialOp::Flip {
                        cmask: 0,
                        tmask: mask(q),
                    },
                    Gate::Y(q) => MonomialOp::Y { tmask: mask(q) },
                    Gate::Z(q) => MonomialOp::Sign { mask: mask(q) },
                    Gate::Cnot { control, target } => MonomialOp::Flip {
                        cmask: mask(control),
                        tmask: mask(target),
                    },
                    Gate::Cz(a, b) => MonomialOp::Sign {
                        mask: mask(a) | mask(b),
                    },
                    Gate::Toffoli { controls, target } => MonomialOp::Flip {
                        cmask: mask(controls[0]) | mask(controls[1]),
                        tmask: mask(target),
                    },
                    Gate::H(_) | Gate::Unitary { .. } => unreachable!("not a monomial gate"),
                })
                .collect(),
        )
    }

    #[inline]
    pub(crate) fn image(&self, mut j: usize) -> (usize, Complex64) {
        let mut phase = 0u8;
        for op in &self.0 {
            match *op {
                MonomialOp::Flip { cmask, tmask } => {
                    if j & cmask == cmask {
                        j ^= tmask;
                    }
                }
                MonomialOp::Sign { mask } => {
                    if j & mask == mask {
                        phase += 2;
                    }
                }
                MonomialOp::Y { tmask } => {
                    // Y|0> = i|1>, Y|1> = -i|0>
                    phase += if j & tmask == 0 { 1 } else { 3 };
                    j ^= tmask;
                }
            }
        }
        (j, I_POWERS[(phase & 3) as usize])
    }
}

/// Normalized complex amplitudes of an `n`-qubit pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: n,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::from_index(num_qubits, 0)
    }

    pub fn from_index(num_qubits: usize, index: usize) -> Result<Self> {
        check_capacity(num_qubits)?;
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(Error::InvalidArgument(alloc::format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; len];
        amps[index] = ONE;
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state from a `'0'`/`'1'` string, leftmost = qubit 0.
    pub fn basis_state(num_qubits: usize, bits: &str) -> Result<Self> {
        if bits.len() != num_qubits {
            return Err(Error::InvalidArgument(alloc::format!(
                "bitstring {bits:?} has {} entries, expected {num_qubits}",
                bits.len()
            )));
        }
        check_capacity(num_qubits)?;
        let bits: BitString = bits.parse()?;
        Self::from_index(num_qubits, bits.value() as usize)
    }

    /// Builds a state from unnormalized amplitudes; rescales to unit norm.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_capacity(num_qubits)?;
        if amps.len() != 1usize << num_qubits {
            return Err(Error::InvalidArgument(alloc::format!(
                "{} amplitudes given for {num_qubits} qubits",
                amps.len()
            )));
        }
        let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument(
                "amplitudes have zero or non-finite norm".into(),
            ));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { num_qubits, amps })
    }

    /// Haar-random state, Gaussian amplitudes via Box-Muller.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_capacity(num_qubits)?;
        let mut gauss = || {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random::<f64>();
            let r = libm::sqrt(-2.0 * libm::log(u1));
            let t = core::f64::consts::TAU * u2;
            Complex64::new(r * libm::cos(t), r * libm::sin(t))
        };
        let amps = (0..1usize << num_qubits).map(|_| gauss()).collect();
        Self::from_amplitudes(num_qubits, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by a unit-modulus phase.
    pub fn with_global_phase(mut self, phase: Complex64) -> Result<Self> {
        if (phase.norm_sqr() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "global phase must have unit modulus".into(),
            ));
        }
        self.amps.iter_mut().for_each(|a| *a *= phase);
        Ok(self)
    }

    #[inline]
    fn mask(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    /// Applies `gates` in order. Consecutive runs of monomial gates (Pauli,
    /// CNOT, CZ, Toffoli) are fused into a single permutation-with-phase pass.
    pub fn apply_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            g.validate(self.num_qubits)?;
        }
        let mut rest = gates;
        while let Some(first) = rest.first() {
            if first.is_monomial() {
                let run = rest.iter().take_while(|g| g.is_monomial()).count();
                if run == 1 {
                    self.apply_unchecked(first);
                } else {
                    self.apply_monomial_run(&rest[..run]);
                }
                rest = &rest[run..];
            } else {
                self.apply_unchecked(first);
                rest = &rest[1..];
            }
        }
        Ok(())
    }

    fn apply_unchecked(&mut self, gate: &Gate) {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        match *gate {
            Gate::H(q) => self.apply_2x2(
                q,
                0,
                [
                    [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                    [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
                ],
            ),
            Gate::X(q) => self.apply_flip(q, 0),
            Gate::Y(q) => self.apply_2x2(
                q,
                0,
                [
                    [ZERO, Complex64::new(0.0, -1.0)],
                    [Complex64::new(0.0, 1.0), ZERO],
                ],
            ),
            Gate::Z(q) => self.apply_sign(self.mask(q)),
            Gate::Cnot { control, target } => self.apply_flip(target, self.mask(control)),
            Gate::Cz(a, b) => self.apply_sign(self.mask(a) | self.mask(b)),
            Gate::Toffoli { controls, target } => {
                self.apply_flip(target, self.mask(controls[0]) | self.mask(controls[1]))
            }
            Gate::Unitary { target, matrix } => self.apply_2x2(target, 0, *matrix.matrix()),
        }
    }

    /// Visits every index with the target bit clear and all control bits set.
    #[inline]
    fn for_each_pair(len: usize, tmask: usize, cmask: usize, mut f: impl FnMut(usize, usize)) {
        let mut base = 0;
        while base < len {
            for i in base..base + tmask {
                if i & cmask == cmask {
                    f(i, i | tmask);
                }
            }
            base += 2 * tmask;
        }
    }

    fn apply_2x2(&mut self, target: usize, cmask: usize, m: [[Complex64; 2]; 2]) {
        let tmask = self.mask(target);
        let amps = &mut self.amps;
        Self::for_each_pair(amps.len(), tmask, cmask, |i, j| {
            let (a, b) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[j] = m[1][0] * a + m[1][1] * b;
        });
    }

    fn apply_flip(&mut self, target: usize, cmask: usize) {
        let tmask = self.mask(target);
        let amps = &mut self.amps;
        Self::for_each_pair(amps.len(), tmask, cmask, |i, j| amps.swap(i, j));
    }

    fn apply_sign(&mut self, mask: usize) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
    }

    fn apply_monomial_run(&mut self, gates: &[Gate]) {
        let ops = MonomialOps::compile(gates, self.num_qubits);
        let mut out = vec![ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let (j, phase) = ops.image(i);
            out[j] = a * phase;
        }
        self.amps = out;
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &q) in targets.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::InvalidArgument(alloc::format!(
                    "qubit {q} out of range for {} qubits",
                    self.num_qubits
                )));
            }
            if targets[..i].contains(&q) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "qubit {q} listed twice"
                )));
            }
        }
        Ok(())
    }

    /// Bits of `index` at `qubits`, first listed qubit most significant.
    #[inline]
    fn gather(&self, index: usize, qubits: &[usize]) -> usize {
        qubits.iter().fold(0, |acc, &q| {
            (acc << 1) | ((index >> (self.num_qubits - 1 - q)) & 1)
        })
    }

    /// Marginal outcome distribution over `targets`.
    pub fn marginal(&self, targets: &[usize]) -> Result<Vec<f64>> {
        self.check_targets(targets)?;
        let mut probs = vec![0.0; 1usize << targets.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p != 0.0 {
                probs[self.gather(i, targets)] += p;
            }
        }
        Ok(probs)
    }

    fn project(&self, targets: &[usize], outcome: usize, probability: f64) -> StateVector {
        let scale = 1.0 / libm::sqrt(probability);
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if self.gather(i, targets) == outcome {
                    a * scale
                } else {
                    ZERO
                }
            })
            .collect();
        StateVector {
            num_qubits: self.num_qubits,
            amps,
        }
    }

    /// Measures `targets` when one outcome is certain up to `1 - 1e-9`.
    ///
    /// Returns the outcome and the renormalized post-measurement state. Any
    /// other situation is an error rather than a random draw.
    pub fn measure_deterministic(&self, targets: &[usize]) -> Result<(BitString, StateVector)> {
        let probs = self.marginal(targets)?;
        let (outcome, &p) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("at least one outcome");
        if p < 1.0 - DEFAULT_TOLERANCE {
            return Err(Error::NondeterministicMeasurement { max_probability: p });
        }
        let bits = BitString::new(outcome as u64, targets.len())?;
        Ok((bits, self.project(targets, outcome, p)))
    }

    /// Samples a measurement outcome of `targets`. Exploratory use only; the
    /// decoding pipeline relies on [`StateVector::measure_deterministic`].
    pub fn measure_sampled<R: Rng + ?Sized>(
        &self,
        targets: &[usize],
        rng: &mut R,
    ) -> Result<(BitString, StateVector)> {
        let probs = self.marginal(targets)?;
        let mut u: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
        let mut outcome = probs.len() - 1;
        for (k, &p) in probs.iter().enumerate() {
            if u < p {
                outcome = k;
                break;
            }
            u -= p;
        }
        let bits = BitString::new(outcome as u64, targets.len())?;
        Ok((bits, self.project(targets, outcome, probs[outcome])))
    }

    fn check_same_size(&self, other: &StateVector) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::InvalidArgument(alloc::format!(
                "dimension mismatch: {} vs {} qubits",
                self.num_qubits,
                other.num_qubits
            )));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_size(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().min(1.0))
    }

    /// `self ⊗ other`; `self` occupies the leading (most significant) qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        check_capacity(n)?;
        let shift = other.num_qubits;
        let mut amps = vec![ZERO; 1usize << n];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.amps.iter().enumerate() {
                amps[(i << shift) | j] = a * b;
            }
        }
        Ok(StateVector {
            num_qubits: n,
            amps,
        })
    }

    /// Reduced density matrix of `qubits` (row-major, `2^k x 2^k`) together
    /// with the complementary row of largest weight.
    fn reduce(&self, qubits: &[usize]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        self.check_targets(qubits)?;
        let complement: Vec<usize> = (0..self.num_qubits)
            .filter(|q| !qubits.contains(q))
            .collect();
        let k = qubits.len();
        let dim = 1usize << k;
        let rows = 1usize << complement.len();
        let mut table = vec![ZERO; rows * dim];
        let mut weight = vec![0.0f64; rows];
        for (i, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let r = self.gather(i, &complement);
            table[r * dim + self.gather(i, qubits)] = a;
            weight[r] += a.norm_sqr();
        }
        let mut rho = vec![ZERO; dim * dim];
        let mut best = 0;
        for r in 0..rows {
            if weight[r] == 0.0 {
                continue;
            }
            if weight[r] > weight[best] {
                best = r;
            }
            let row = &table[r * dim..(r + 1) * dim];
            for (s, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (t, &b) in row.iter().enumerate() {
                    rho[s * dim + t] += a * b.conj();
                }
            }
        }
        let dominant = table[best * dim..(best + 1) * dim].to_vec();
        Ok((rho, dominant))
    }

    /// `Tr(ρ²)` of the reduced state on `qubits`.
    pub fn subsystem_purity(&self, qubits: &[usize]) -> Result<f64> {
        let (rho, _) = self.reduce(qubits)?;
        Ok(rho.iter().map(|z| z.norm_sqr()).sum())
    }

    fn block_qubits(&self, block: usize) -> Result<Vec<usize>> {
        let start = block * BLOCK_SIZE;
        if start + BLOCK_SIZE > self.num_qubits {
            return Err(Error::InvalidArgument(alloc::format!(
                "block {block} out of range for {} qubits",
                self.num_qubits
            )));
        }
        Ok((start..start + BLOCK_SIZE).collect())
    }

    /// Purity of the reduced state of 5-qubit block `block`.
    pub fn block_purity(&self, block: usize) -> Result<f64> {
        self.subsystem_purity(&self.block_qubits(block)?)
    }

    /// Splits off the state of `qubits`: returns its purity and the
    /// normalized dominant product component. Meaningful as a pure state only
    /// when the purity is 1 within tolerance.
    pub fn extract_subsystem(&self, qubits: &[usize]) -> Result<(StateVector, f64)> {
        let (rho, dominant) = self.reduce(qubits)?;
        let purity = rho.iter().map(|z| z.norm_sqr()).sum();
        Ok((
            StateVector::from_amplitudes(qubits.len(), dominant)?,
            purity,
        ))
    }

    pub fn extract_block(&self, block: usize) -> Result<(StateVector, f64)> {
        self.extract_subsystem(&self.block_qubits(block)?)
    }
}
