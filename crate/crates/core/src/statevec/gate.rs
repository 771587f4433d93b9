use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, ISOMETRY_TOLERANCE};

/// Number of qubits in one code block.
pub const BLOCK_SIZE: usize = 5;

/// `(block, position)` address of a physical qubit.
///
/// Positions are 1-based inside a block (1..=5); blocks are 0-based. The
/// flattened index is `5 * block + position - 1`, so position 1 of block 0 is
/// qubit 0, the most significant bit of a basis label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitAddress {
    pub block: usize,
    #[serde(rename = "pos")]
    pub position: usize,
}

impl QubitAddress {
    pub fn new(block: usize, position: usize) -> Result<Self> {
        if !(1..=BLOCK_SIZE).contains(&position) {
            return Err(Error::InvalidArgument(alloc::format!(
                "position {position} outside 1..={BLOCK_SIZE}"
            )));
        }
        Ok(Self { block, position })
    }

    pub fn qubit(self) -> usize {
        BLOCK_SIZE * self.block + self.position - 1
    }

    pub fn from_qubit(qubit: usize) -> Self {
        Self {
            block: qubit / BLOCK_SIZE,
            position: qubit % BLOCK_SIZE + 1,
        }
    }
}

impl fmt::Display for QubitAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.position, self.block)
    }
}

/// Short fixed-width bit pattern, first bit most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    len: u8,
}

impl BitString {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len > 64 || (len < 64 && value >> len != 0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "value {value} does not fit in {len} bits"
            )));
        }
        Ok(Self {
            value,
            len: len as u8,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`, counting from the left.
    pub fn bit(&self, i: usize) -> bool {
        (self.value >> (self.len() - 1 - i)) & 1 == 1
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > 64 {
            return Err(Error::InvalidArgument(alloc::format!(
                "bitstring of length {} exceeds 64",
                s.len()
            )));
        }
        let mut value = 0u64;
        for c in s.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => {
                        return Err(Error::InvalidArgument(alloc::format!(
                            "invalid bit character {c:?}"
                        )))
                    }
                };
        }
        Ok(Self {
            value,
            len: s.len() as u8,
        })
    }
}

/// A 2x2 matrix checked to be unitary at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2([[Complex64; 2]; 2]);

impl Unitary2 {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let mut dev = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let g = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let expected = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((g - Complex64::new(expected, 0.0)).norm_sqr());
            }
        }
        let dev = libm::sqrt(dev);
        if dev > ISOMETRY_TOLERANCE {
            return Err(Error::InvalidArgument(alloc::format!(
                "2x2 matrix is not unitary (deviation {dev:.3e})"
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.0
    }
}

/// Gates of the simulator. Qubits are flattened indices (see [`QubitAddress`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    /// Controlled-Z; symmetric in its two qubits.
    Cz(usize, usize),
    Toffoli {
        controls: [usize; 2],
        target: usize,
    },
    Unitary {
        target: usize,
        matrix: Unitary2,
    },
}

/// Up to three qubit indices touched by a gate.
#[derive(Clone, Copy, Debug)]
pub struct GateQubits {
    buf: [usize; 3],
    len: usize,
}

impl core::ops::Deref for GateQubits {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.buf[..self.len]
    }
}

impl Gate {
    pub fn cnot(control: QubitAddress, target: QubitAddress) -> Self {
        Gate::Cnot {
            control: control.qubit(),
            target: target.qubit(),
        }
    }

    pub fn cz(a: QubitAddress, b: QubitAddress) -> Self {
        Gate::Cz(a.qubit(), b.qubit())
    }

    pub fn toffoli(c1: QubitAddress, c2: QubitAddress, target: QubitAddress) -> Self {
        Gate::Toffoli {
            controls: [c1.qubit(), c2.qubit()],
            target: target.qubit(),
        }
    }

    /// All qubits touched, controls first and target last.
    pub fn qubits(&self) -> GateQubits {
        let (buf, len) = match *self {
            Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => ([q, 0, 0], 1),
            Gate::Unitary { target, .. } => ([target, 0, 0], 1),
            Gate::Cnot { control, target } => ([control, target, 0], 2),
            Gate::Cz(a, b) => ([a, b, 0], 2),
            Gate::Toffoli { controls, target } => ([controls[0], controls[1], target], 3),
        };
        GateQubits { buf, len }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{self} addresses qubit {q} of a {num_qubits}-qubit register"
                )));
            }
            if qs[..i].contains(&q) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{self} repeats qubit {q}"
                )));
            }
        }
        Ok(())
    }

    /// True for gates that map basis states to phased basis states.
    pub fn is_monomial(&self) -> bool {
        !matches!(self, Gate::H(_) | Gate::Unitary { .. })
    }

    /// The same gate with every qubit index moved up by `by`.
    pub fn shifted(&self, by: usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(q + by),
            Gate::X(q) => Gate::X(q + by),
            Gate::Y(q) => Gate::Y(q + by),
            Gate::Z(q) => Gate::Z(q + by),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + by,
                target: target + by,
            },
            Gate::Cz(a, b) => Gate::Cz(a + by, b + by),
            Gate::Toffoli { controls, target } => Gate::Toffoli {
                controls: [controls[0] + by, controls[1] + by],
                target: target + by,
            },
            Gate::Unitary { target, matrix } => Gate::Unitary {
                target: target + by,
                matrix,
            },
        }
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.qubits().contains(&qubit)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = |q: usize| QubitAddress::from_qubit(q);
        match *self {
            Gate::H(q) => write!(f, "H {}", a(q)),
            Gate::X(q) => write!(f, "X {}", a(q)),
            Gate::Y(q) => write!(f, "Y {}", a(q)),
            Gate::Z(q) => write!(f, "Z {}", a(q)),
            Gate::Cnot { control, target } => write!(f, "C {},{}", a(control), a(target)),
            Gate::Cz(x, y) => write!(f, "CZ {},{}", a(x), a(y)),
            Gate::Toffoli { controls, target } => {
                write!(f, "T {},{},{}", a(controls[0]), a(controls[1]), a(target))
            }
            Gate::Unitary { target, .. } => write!(f, "U {}", a(target)),
        }
    }
}
