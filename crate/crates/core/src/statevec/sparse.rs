//! Sparse states for circuits that only permute and phase basis states.
//!
//! Appending fresh `|0>` qubits to a dense state and running monomial gates
//! keeps the number of nonzero amplitudes fixed, so the wide register never
//! has to be materialized.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{check_capacity, Gate, MonomialOps, StateVector, ZERO};
use crate::{Error, Result};

/// Nonzero `(index, amplitude)` pairs of an `n`-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    num_qubits: usize,
    entries: Vec<(usize, Complex64)>,
}

fn gather(num_qubits: usize, index: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, &q| {
        (acc << 1) | ((index >> (num_qubits - 1 - q)) & 1)
    })
}

impl SparseState {
    pub fn from_dense(state: &StateVector) -> Self {
        Self {
            num_qubits: state.num_qubits(),
            entries: state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| **a != ZERO)
                .map(|(i, &a)| (i, a))
                .collect(),
        }
    }

    /// `self ⊗ |0...0>` with `extra` new least significant qubits.
    pub fn with_zero_qubits(mut self, extra: usize) -> Result<Self> {
        check_capacity(self.num_qubits + extra)?;
        self.num_qubits += extra;
        for e in &mut self.entries {
            e.0 <<= extra;
        }
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Applies monomial gates (Pauli, CNOT, CZ, Toffoli) in order.
    pub fn apply_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            g.validate(self.num_qubits)?;
            if !g.is_monomial() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{g} does not map basis states to basis states"
                )));
            }
        }
        let ops = MonomialOps::compile(gates, self.num_qubits);
        for e in &mut self.entries {
            let (j, phase) = ops.image(e.0);
            *e = (j, e.1 * phase);
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Result<StateVector> {
        check_capacity(self.num_qubits)?;
        let mut amps = vec![ZERO; 1 << self.num_qubits];
        for &(i, a) in &self.entries {
            amps[i] = a;
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amps,
        })
    }

    /// Same contract as [`StateVector::extract_subsystem`]: purity of the
    /// reduced state on `qubits` and the normalized complementary row of
    /// largest weight.
    pub fn extract_subsystem(&self, qubits: &[usize]) -> Result<(StateVector, f64)> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits || qubits[..i].contains(&q) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "bad subsystem qubit {q}"
                )));
            }
        }
        let complement: Vec<usize> = (0..self.num_qubits)
            .filter(|q| !qubits.contains(q))
            .collect();
        let dim = 1usize << qubits.len();
        let mut keyed: Vec<(usize, usize, Complex64)> = self
            .entries
            .iter()
            .map(|&(i, a)| {
                (
                    gather(self.num_qubits, i, &complement),
                    gather(self.num_qubits, i, qubits),
                    a,
                )
            })
            .collect();
        keyed.sort_unstable_by_key(|e| (e.0, e.1));

        let mut rho = vec![ZERO; dim * dim];
        let (mut best, mut best_weight) = (0..0, 0.0);
        let mut start = 0;
        while start < keyed.len() {
            let r = keyed[start].0;
            let end = start + keyed[start..].iter().take_while(|e| e.0 == r).count();
            let group = &keyed[start..end];
            let weight: f64 = group.iter().map(|e| e.2.norm_sqr()).sum();
            if weight > best_weight {
                best_weight = weight;
                best = start..end;
            }
            for &(_, s, a) in group {
                for &(_, t, b) in group {
                    rho[s * dim + t] += a * b.conj();
                }
            }
            start = end;
        }
        let purity = rho.iter().map(|z| z.norm_sqr()).sum();
        let mut dominant = vec![ZERO; dim];
        for &(_, s, a) in &keyed[best] {
            dominant[s] = a;
        }
        Ok((
            StateVector::from_amplitudes(qubits.len(), dominant)?,
            purity,
        ))
    }
}
