//! Algebraic invariants of the code, each reported with its largest
//! observed deviation.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::concat::ConcatCode;
use crate::qlcc::{self, ErasureFlagSet, ENCODED_BLOCKS, RECOVERY_QUBITS};
use crate::statevec::{Gate, QubitAddress, StateVector, BLOCK_SIZE};
use crate::{Result, ISOMETRY_TOLERANCE};

/// One invariant and how far it was from holding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckLine {
    fn new(name: &str, max_deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_deviation,
            tolerance,
        }
    }

    pub fn ok(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok() { "OK" } else { "FAIL" };
        write!(
            f,
            "{}: {verdict} (max dev {:.0e})",
            self.name, self.max_deviation
        )
    }
}

/// Largest change of norm or pairwise inner product under `circuit`.
fn circuit_unitarity_deviation(circuit: &[Gate], inputs: &[StateVector]) -> Result<f64> {
    let mut images = Vec::with_capacity(inputs.len());
    for s in inputs {
        let mut u = s.clone();
        u.apply_circuit(circuit)?;
        images.push(u);
    }
    let mut dev: f64 = 0.0;
    for i in 0..inputs.len() {
        for j in i..inputs.len() {
            let before = inputs[i].inner(&inputs[j])?;
            let after = images[i].inner(&images[j])?;
            dev = dev.max((before - after).norm());
        }
    }
    Ok(dev)
}

/// Runs every check. `rng` supplies the random states used by the
/// unitarity and round-trip probes.
pub fn run<R: Rng + ?Sized>(code: &ConcatCode, rng: &mut R) -> Result<Vec<CheckLine>> {
    let tol = ISOMETRY_TOLERANCE;
    let mut lines = Vec::new();

    lines.push(CheckLine::new(
        "encoder isometry",
        code.encoder().matrix().isometry_deviation(),
        tol,
    ));
    lines.push(CheckLine::new(
        "syndrome decoder unitarity",
        code.decoder().matrix().isometry_deviation(),
        tol,
    ));

    let small: Vec<StateVector> = (0..3)
        .map(|_| StateVector::random(qlcc::ENCODED_QUBITS, rng))
        .collect::<Result<_>>()?;
    lines.push(CheckLine::new(
        "block encoder unitarity",
        circuit_unitarity_deviation(&qlcc::encode_circuit(), &small)?,
        tol,
    ));

    let wide: Vec<StateVector> = (0..2)
        .map(|_| StateVector::random(RECOVERY_QUBITS, rng))
        .collect::<Result<_>>()?;
    let mut dev: f64 = 0.0;
    for mask in 0u32..(1 << ENCODED_BLOCKS) - 1 {
        let damaged: Vec<usize> = (0..ENCODED_BLOCKS).filter(|b| mask >> b & 1 == 1).collect();
        dev = dev.max(circuit_unitarity_deviation(
            &qlcc::build_udec(&damaged)?,
            &wide,
        )?);
    }
    lines.push(CheckLine::new("U_dec unitarity", dev, tol));

    let mut dev: f64 = 0.0;
    for block in 0..ENCODED_BLOCKS {
        for pos in 1..=BLOCK_SIZE {
            let circuit = qlcc::build_urec(QubitAddress {
                block,
                position: pos,
            })?;
            dev = dev.max(circuit_unitarity_deviation(&circuit, &wide)?);
        }
    }
    lines.push(CheckLine::new("U_rec unitarity", dev, tol));

    let mut dev: f64 = 0.0;
    for j in 0..1 << BLOCK_SIZE {
        let image = qlcc::encode(&StateVector::from_index(BLOCK_SIZE, j)?)?;
        let expected = qlcc::logical_basis_state(j)?;
        let d = image
            .amplitudes()
            .iter()
            .zip(expected.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        dev = dev.max(d);
    }
    lines.push(CheckLine::new("block encoder GHZ forms", dev, tol));

    let mut dev: f64 = 0.0;
    for _ in 0..5 {
        let data = StateVector::random(BLOCK_SIZE, rng)?;
        let out = qlcc::decode_and_recover(&qlcc::encode(&data)?, &ErasureFlagSet::empty())?;
        dev = dev.max(1.0 - out.state.fidelity(&data)?);
    }
    lines.push(CheckLine::new("block code round trip", dev, tol));

    let mut dev: f64 = 0.0;
    for _ in 0..5 {
        let x = StateVector::random(1, rng)?;
        let (_, f) = code.run(&x, &Default::default())?;
        dev = dev.max(1.0 - f);
    }
    lines.push(CheckLine::new("concatenated round trip", dev, tol));

    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_checks_pass() {
        let code = ConcatCode::standard().unwrap();
        let lines = run(&code, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(lines.len(), 8);
        for l in &lines {
            assert!(l.ok(), "{l}");
        }
        assert!(lines[0]
            .to_string()
            .starts_with("encoder isometry: OK (max dev"));
    }

    #[test]
    fn failing_line_renders_fail() {
        let l = CheckLine::new("x", 1e-3, 1e-10);
        assert!(!l.ok());
        assert_eq!(l.to_string(), "x: FAIL (max dev 1e-3)");
    }
}
