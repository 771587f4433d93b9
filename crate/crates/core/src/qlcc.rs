//! Internal code: a measurement-free quantum loss-correcting code.
//!
//! Five data qubits (block 0) are copied into two ancilla blocks and every
//! block is turned into GHZ form, so data basis state `|x1..x5>` becomes
//! `⊗_d (|x1 x2 x3 x4 0> + (-1)^x5 |x̄1 x̄2 x̄3 x̄4 1>)`. Recovery appends a
//! fresh block 3, decodes the undamaged blocks into it, and disentangles each
//! damaged block with gates controlled by block 3. No measurement is ever
//! performed: the circuits are plain [`Gate`] lists.
//!
//! Gate lists are in application order; `C(x, y)` below is a CNOT with
//! control `x` and target `y`, positions written `i(d)` for qubit `i` of
//! block `d`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::statevec::{Gate, QubitAddress, SparseState, StateVector, BLOCK_SIZE};
use crate::{Error, Result, DEFAULT_TOLERANCE};

/// Blocks carrying the encoded register: data block 0 plus two ancilla blocks.
pub const ENCODED_BLOCKS: usize = 3;

/// Fresh block appended during recovery.
pub const RECOVERY_BLOCK: usize = 3;

/// Qubits of the encoded register.
pub const ENCODED_QUBITS: usize = ENCODED_BLOCKS * BLOCK_SIZE;

/// Qubits during recovery (encoded register + recovery block).
pub const RECOVERY_QUBITS: usize = ENCODED_QUBITS + BLOCK_SIZE;

/// Parameters of the internal code. Only `k = 5`, `t = 2` is implemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QlccParams {
    pub data_qubits: usize,
    pub ancilla_blocks: usize,
}

impl Default for QlccParams {
    fn default() -> Self {
        Self {
            data_qubits: BLOCK_SIZE,
            ancilla_blocks: BLOCK_SIZE / 2,
        }
    }
}

impl QlccParams {
    pub fn new(data_qubits: usize, ancilla_blocks: usize) -> Result<Self> {
        let p = Self {
            data_qubits,
            ancilla_blocks,
        };
        if p != Self::default() {
            return Err(Error::UnsupportedConfiguration(alloc::format!(
                "internal code with k={data_qubits}, t={ancilla_blocks}; only k=5, t=2 is implemented"
            )));
        }
        Ok(p)
    }

    /// Erasures the code recovers (one per ancilla block).
    pub fn max_erasures(&self) -> usize {
        self.ancilla_blocks
    }

    pub fn encoded_blocks(&self) -> usize {
        self.ancilla_blocks + 1
    }

    pub fn physical_qubits(&self) -> usize {
        self.encoded_blocks() * self.data_qubits
    }

    pub fn recovery_block(&self) -> usize {
        self.encoded_blocks()
    }
}

/// Decoder-visible erasure locations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ErasureFlagSet {
    flags: Vec<QubitAddress>,
}

impl ErasureFlagSet {
    pub fn new(mut flags: Vec<QubitAddress>) -> Result<Self> {
        for f in &flags {
            if f.block >= ENCODED_BLOCKS || !(1..=BLOCK_SIZE).contains(&f.position) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "erasure flag {f} out of range"
                )));
            }
        }
        flags.sort();
        if flags.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate erasure flag".into()));
        }
        Ok(Self { flags })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn flags(&self) -> &[QubitAddress] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn is_damaged(&self, block: usize) -> bool {
        self.flags.iter().any(|f| f.block == block)
    }

    pub fn damaged_blocks(&self) -> Vec<usize> {
        (0..ENCODED_BLOCKS)
            .filter(|&b| self.is_damaged(b))
            .collect()
    }

    /// At most one flag per block, at most `t` flags, one block left intact.
    pub fn within_capability(&self, params: &QlccParams) -> bool {
        let damaged = self.damaged_blocks().len();
        damaged == self.flags.len() && damaged <= params.max_erasures() && damaged < ENCODED_BLOCKS
    }
}

fn q(block: usize, position: usize) -> QubitAddress {
    QubitAddress { block, position }
}

/// `U_enc` in application order: copy block 0 into blocks 1 and 2, Hadamard
/// on position 5 of each block, then fan position 5 out to positions 1..4.
pub fn encode_circuit() -> Vec<Gate> {
    let mut gates = Vec::new();
    for d in 1..ENCODED_BLOCKS {
        for i in 1..=BLOCK_SIZE {
            gates.push(Gate::cnot(q(0, i), q(d, i)));
        }
    }
    for d in 0..ENCODED_BLOCKS {
        gates.push(Gate::H(q(d, 5).qubit()));
    }
    for d in 0..ENCODED_BLOCKS {
        for i in 1..BLOCK_SIZE {
            gates.push(Gate::cnot(q(d, 5), q(d, i)));
        }
    }
    gates
}

/// Encodes a 5-qubit register into three GHZ-form blocks (15 qubits).
pub fn encode(data5: &StateVector) -> Result<StateVector> {
    if data5.num_qubits() != BLOCK_SIZE {
        return Err(Error::InvalidArgument(alloc::format!(
            "internal encoder takes {BLOCK_SIZE} qubits, got {}",
            data5.num_qubits()
        )));
    }
    let mut state = data5.tensor(&StateVector::zero(ENCODED_QUBITS - BLOCK_SIZE)?)?;
    state.apply_circuit(&encode_circuit())?;
    Ok(state)
}

/// `U_dec` for the given damaged blocks.
///
/// Every undamaged block is taken out of GHZ form (`C(5(d), i(d))` for
/// i = 1..4, then `H 5(d)`). The lowest-index undamaged block is then copied
/// into block 3 with `C(i(d), i(3))`, and finally `C(i(3), i(d))` clears
/// every undamaged block. With a single undamaged block this is exactly the
/// two-stage product over `d ∉ damaged`. Everything after the Hadamards
/// permutes basis states, which [`decode_and_recover`] relies on.
pub fn build_udec(damaged: &[usize]) -> Result<Vec<Gate>> {
    if let Some(&b) = damaged.iter().find(|&&b| b >= ENCODED_BLOCKS) {
        return Err(Error::InvalidArgument(alloc::format!(
            "block {b} out of range"
        )));
    }
    let undamaged: Vec<usize> = (0..ENCODED_BLOCKS)
        .filter(|b| !damaged.contains(b))
        .collect();
    let Some(&source) = undamaged.first() else {
        return Err(Error::UnsupportedConfiguration(
            "all encoded blocks are damaged".into(),
        ));
    };
    let mut gates = Vec::new();
    for &d in &undamaged {
        for i in 1..BLOCK_SIZE {
            gates.push(Gate::cnot(q(d, 5), q(d, i)));
        }
        gates.push(Gate::H(q(d, 5).qubit()));
    }
    for i in 1..=BLOCK_SIZE {
        gates.push(Gate::cnot(q(source, i), q(RECOVERY_BLOCK, i)));
    }
    for &d in &undamaged {
        for i in 1..=BLOCK_SIZE {
            gates.push(Gate::cnot(q(RECOVERY_BLOCK, i), q(d, i)));
        }
    }
    Ok(gates)
}

/// `U_rec` for an erasure at `flag`, disentangling its block from block 3.
///
/// With `W` the unerased positions and `r = max(W \ {5})`:
/// - position 5: `C(i(3), i(b))` for i = 1..4, then `CZ(5(3), r(b))`;
/// - position p ≠ 5: `C(p(3), i(b))` for i ∈ W, then `C(i(3), i(b))` for
///   i ∈ {1..4} \ {p}, then `T(p(3), 5(3), r(b))`, `CZ(5(3), r(b))`,
///   `T(p(3), 5(3), r(b))`.
pub fn build_urec(flag: QubitAddress) -> Result<Vec<Gate>> {
    let (p, b) = (flag.position, flag.block);
    if b >= ENCODED_BLOCKS || !(1..=BLOCK_SIZE).contains(&p) {
        return Err(Error::InvalidArgument(alloc::format!(
            "erasure at {flag} out of range"
        )));
    }
    let w: Vec<usize> = (1..=BLOCK_SIZE).filter(|&i| i != p).collect();
    let r = *w
        .iter()
        .filter(|&&i| i != BLOCK_SIZE)
        .max()
        .expect("W has a non-5 member");
    let rec = RECOVERY_BLOCK;
    let mut gates = Vec::new();
    if p == BLOCK_SIZE {
        for i in 1..BLOCK_SIZE {
            gates.push(Gate::cnot(q(rec, i), q(b, i)));
        }
        gates.push(Gate::cz(q(rec, 5), q(b, r)));
    } else {
        for &i in &w {
            gates.push(Gate::cnot(q(rec, p), q(b, i)));
        }
        for i in (1..BLOCK_SIZE).filter(|&i| i != p) {
            gates.push(Gate::cnot(q(rec, i), q(b, i)));
        }
        let toffoli = Gate::toffoli(q(rec, p), q(rec, 5), q(b, r));
        gates.push(toffoli);
        gates.push(Gate::cz(q(rec, 5), q(b, r)));
        gates.push(toffoli);
    }
    Ok(gates)
}

/// The restoring operation: `U_dec` once, then `U_rec` for each flag in
/// descending block order.
pub fn recovery_circuit(flags: &ErasureFlagSet) -> Result<Vec<Gate>> {
    let mut gates = build_udec(&flags.damaged_blocks())?;
    let mut ordered = flags.flags().to_vec();
    ordered.sort_by(|a, b| b.block.cmp(&a.block).then(a.position.cmp(&b.position)));
    for flag in ordered {
        gates.extend(build_urec(flag)?);
    }
    Ok(gates)
}

/// The encoded image of data basis state `|j>`, built amplitude by
/// amplitude: `(|x1..x4 0> + (-1)^x5 |x̄1..x̄4 1>)` on each of the three blocks.
pub fn logical_basis_state(j: usize) -> Result<StateVector> {
    if j >= 1 << BLOCK_SIZE {
        return Err(Error::InvalidArgument(alloc::format!(
            "logical index {j} out of range"
        )));
    }
    let low = j & !1;
    let sign = if j & 1 == 1 { -1.0 } else { 1.0 };
    let terms = [(low, 1.0), (low ^ ((1 << BLOCK_SIZE) - 1), sign)];
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); 1 << ENCODED_QUBITS];
    for &(a, sa) in &terms {
        for &(b, sb) in &terms {
            for &(c, sc) in &terms {
                amps[(a << (2 * BLOCK_SIZE)) | (b << BLOCK_SIZE) | c] =
                    Complex64::new(sa * sb * sc, 0.0);
            }
        }
    }
    StateVector::from_amplitudes(ENCODED_QUBITS, amps)
}

fn check_encoded(state: &StateVector) -> Result<()> {
    if state.num_qubits() != ENCODED_QUBITS {
        return Err(Error::InvalidArgument(alloc::format!(
            "expected a {ENCODED_QUBITS}-qubit encoded state, got {}",
            state.num_qubits()
        )));
    }
    Ok(())
}

fn recovery_qubits() -> core::ops::Range<usize> {
    RECOVERY_BLOCK * BLOCK_SIZE..RECOVERY_QUBITS
}

fn first_recovery_gate(circuit: &[Gate]) -> usize {
    circuit
        .iter()
        .position(|g| g.qubits().iter().any(|q| recovery_qubits().contains(q)))
        .unwrap_or(circuit.len())
}

/// Appends block 3 in `|00000>` and runs the restoring circuit, returning
/// the full 20-qubit state.
pub fn apply_restoring(state15: &StateVector, flags: &ErasureFlagSet) -> Result<StateVector> {
    check_encoded(state15)?;
    let circuit = recovery_circuit(flags)?;
    // Leading gates that ignore block 3 run before the register is widened.
    let split = first_recovery_gate(&circuit);
    let mut narrow = state15.clone();
    narrow.apply_circuit(&circuit[..split])?;
    let mut wide = narrow.tensor(&StateVector::zero(BLOCK_SIZE)?)?;
    wide.apply_circuit(&circuit[split..])?;
    Ok(wide)
}

/// Output of [`decode_and_recover`].
#[derive(Clone, Debug)]
pub struct Recovered {
    /// State of the recovery block (5 qubits).
    pub state: StateVector,
    /// Purity of the recovery block before extraction.
    pub purity: f64,
}

/// Measurement-free erasure recovery into block 3.
///
/// Fails with [`Error::RecoveryFailure`] when block 3 does not factor out,
/// i.e. the configuration is beyond what the code recovers.
pub fn decode_and_recover(state15: &StateVector, flags: &ErasureFlagSet) -> Result<Recovered> {
    check_encoded(state15)?;
    let circuit = recovery_circuit(flags)?;
    let split = first_recovery_gate(&circuit);
    let (state, purity) = if circuit[split..].iter().all(Gate::is_monomial) {
        let mut narrow = state15.clone();
        narrow.apply_circuit(&circuit[..split])?;
        let mut wide = SparseState::from_dense(&narrow).with_zero_qubits(BLOCK_SIZE)?;
        wide.apply_circuit(&circuit[split..])?;
        wide.extract_subsystem(&recovery_qubits().collect::<Vec<_>>())?
    } else {
        apply_restoring(state15, flags)?.extract_block(RECOVERY_BLOCK)?
    };
    if purity < 1.0 - DEFAULT_TOLERANCE {
        return Err(Error::RecoveryFailure { purity });
    }
    Ok(Recovered { state, purity })
}
