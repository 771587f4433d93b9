//! Small dense complex matrices for the graph-code encoder and decoder.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::statevec::StateVector;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    /// `max |(A†A - I)_ij|`; zero for an exact isometry.
    pub fn isometry_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for i in 0..self.cols {
            for j in 0..self.cols {
                let g: Complex64 = (0..self.rows)
                    .map(|r| self.get(r, i).conj() * self.get(r, j))
                    .sum();
                let id = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g - Complex64::new(id, 0.0)).norm());
            }
        }
        dev
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::InvalidArgument(alloc::format!(
                "vector of length {} for a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        Ok(out)
    }

    /// Applies the matrix to a state whose dimension matches the column count.
    /// The result is renormalized, so an isometry is required for the
    /// amplitudes to keep their meaning.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let out = self.mul_vec(state.amplitudes())?;
        let n = self.rows.trailing_zeros() as usize;
        if 1usize << n != self.rows {
            return Err(Error::InvalidArgument(
                "row count is not a power of two".into(),
            ));
        }
        StateVector::from_amplitudes(n, out)
    }
}
