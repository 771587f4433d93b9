//! Dense state-vector simulation of a concatenated quantum code.
//!
//! The external code is the `[[5,1,3]]` graph code built from a 3-regular
//! graph; the internal code is a measurement-free quantum loss-correcting
//! code that spreads the five external qubits over three GHZ-style blocks and
//! recovers located erasures coherently into a fresh fifth block.
//!
//! Modules:
//!
//! - [`statevec`]: amplitudes, gates, deterministic measurement, fidelity.
//! - [`graph_code`]: graph encoder isometry, syndrome decoder, syndrome table.
//! - [`qlcc`]: block encoder and the erasure restoring circuits.
//! - [`channel`]: located erasures, computational errors, scenario spaces.
//! - [`concat`]: the concatenated pipeline and the verification harness.
//! - [`selfcheck`]: algebraic invariants (isometry, unitarity, round trips).
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod checksum;
pub mod concat;
mod error;
pub mod graph_code;
pub mod linalg;
pub mod qlcc;
pub mod selfcheck;
pub mod statevec;

pub use error::{Error, Result};

/// Fidelity/purity tolerance used by the recovery and acceptance checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Tolerance for isometry and unitarity deviations of constructed matrices.
pub const ISOMETRY_TOLERANCE: f64 = 1e-10;

/// Tolerance for algebraic identities (norms, involutions, commutation).
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-12;
