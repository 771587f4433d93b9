//! Noise scenarios: located erasures and unlocated computational errors.
//!
//! Both kinds act on the state as a Pauli at a fixed address. They differ
//! only in what the decoder may see: [`NoiseScenario::decoder_view`] hands out
//! erasure positions and nothing else.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::qlcc::{ErasureFlagSet, ENCODED_BLOCKS};
use crate::statevec::{Gate, QubitAddress, StateVector, BLOCK_SIZE};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn gate(self, qubit: usize) -> Gate {
        match self {
            Pauli::X => Gate::X(qubit),
            Pauli::Y => Gate::Y(qubit),
            Pauli::Z => Gate::Z(qubit),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        })
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            _ => Err(Error::InvalidArgument(alloc::format!(
                "unknown Pauli {s:?}"
            ))),
        }
    }
}

/// A Pauli at `(block, pos)` of the encoded register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocatedPauli {
    pub block: usize,
    pub pos: usize,
    pub pauli: Pauli,
}

impl LocatedPauli {
    pub fn new(block: usize, pos: usize, pauli: Pauli) -> Self {
        Self { block, pos, pauli }
    }

    pub fn address(&self) -> QubitAddress {
        QubitAddress {
            block: self.block,
            position: self.pos,
        }
    }
}

impl fmt::Display for LocatedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.pauli, self.address())
    }
}

/// Erasures plus computational errors, replayable from its fields.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NoiseScenario {
    pub erasures: Vec<LocatedPauli>,
    pub comp_errors: Vec<LocatedPauli>,
    #[serde(default)]
    pub seed: u64,
}

impl NoiseScenario {
    pub fn new(erasures: Vec<LocatedPauli>, comp_errors: Vec<LocatedPauli>) -> Self {
        Self {
            erasures,
            comp_errors,
            seed: 0,
        }
    }

    /// Z erasure at 1(0), X erasure at 5(1), X error at 1(2).
    pub fn reference() -> Self {
        Self::new(
            alloc::vec![
                LocatedPauli::new(0, 1, Pauli::Z),
                LocatedPauli::new(1, 5, Pauli::X)
            ],
            alloc::vec![LocatedPauli::new(2, 1, Pauli::X)],
        )
    }

    fn events(&self) -> impl Iterator<Item = &LocatedPauli> {
        self.erasures.iter().chain(&self.comp_errors)
    }

    /// Range and collision checks.
    pub fn validate(&self) -> Result<()> {
        let mut seen: Vec<QubitAddress> = Vec::new();
        for e in self.events() {
            if e.block >= ENCODED_BLOCKS || !(1..=BLOCK_SIZE).contains(&e.pos) {
                return Err(Error::InvalidScenario(alloc::format!(
                    "address {} out of range",
                    e.address()
                )));
            }
            if seen.contains(&e.address()) {
                return Err(Error::InvalidScenario(alloc::format!(
                    "two events at {}",
                    e.address()
                )));
            }
            seen.push(e.address());
        }
        Ok(())
    }

    /// Erasure positions, the only part of a scenario the decoder sees.
    pub fn decoder_view(&self) -> Result<ErasureFlagSet> {
        self.validate()?;
        ErasureFlagSet::new(self.erasures.iter().map(LocatedPauli::address).collect())
    }

    pub fn gates(&self) -> Result<Vec<Gate>> {
        self.validate()?;
        Ok(self
            .events()
            .map(|e| e.pauli.gate(e.address().qubit()))
            .collect())
    }

    /// Applies every listed Pauli to a 15-qubit encoded state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        out.apply_circuit(&self.gates()?)?;
        Ok(out)
    }

    /// Whether a computational error shares a block with an erasure.
    pub fn error_in_damaged_block(&self) -> bool {
        self.comp_errors
            .iter()
            .any(|c| self.erasures.iter().any(|e| e.block == c.block))
    }

    /// Whether two erasures share a block.
    pub fn has_same_block_erasures(&self) -> bool {
        self.erasures
            .iter()
            .enumerate()
            .any(|(i, a)| self.erasures[i + 1..].iter().any(|b| b.block == a.block))
    }
}

impl fmt::Display for NoiseScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, v: &[LocatedPauli]| -> fmt::Result {
            f.write_str("[")?;
            for (i, e) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")
        };
        f.write_str("erasures=")?;
        list(f, &self.erasures)?;
        f.write_str(" errors=")?;
        list(f, &self.comp_errors)
    }
}

/// Where computational errors may land.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorPlacement {
    /// Only blocks without an erasure.
    #[default]
    #[serde(rename = "error-in-undamaged-block")]
    UndamagedBlock,
    /// Any address not already erased.
    Unconstrained,
}

impl fmt::Display for ErrorPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorPlacement::UndamagedBlock => "error-in-undamaged-block",
            ErrorPlacement::Unconstrained => "unconstrained",
        })
    }
}

impl FromStr for ErrorPlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error-in-undamaged-block" | "undamaged" => Ok(ErrorPlacement::UndamagedBlock),
            "unconstrained" => Ok(ErrorPlacement::Unconstrained),
            _ => Err(Error::InvalidArgument(alloc::format!(
                "unknown constraint {s:?}"
            ))),
        }
    }
}

/// Deterministically ordered set of scenarios with `t` erasures and `s`
/// computational errors.
///
/// Erasures go to distinct blocks unless `same_block` is set, in which case
/// both erasures share one block. Order: erasure blocks, positions, Paulis,
/// then error block, position, Pauli, all ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScenarioSpace {
    t: usize,
    s: usize,
    placement: ErrorPlacement,
    same_block: bool,
}

impl ScenarioSpace {
    pub const MAX_ERASURES: usize = 2;
    pub const MAX_ERRORS: usize = 1;

    pub fn new(t: usize, s: usize, placement: ErrorPlacement, same_block: bool) -> Result<Self> {
        if t > Self::MAX_ERASURES || s > Self::MAX_ERRORS {
            return Err(Error::UnsupportedConfiguration(alloc::format!(
                "t={t}, s={s} exceeds the shipped code (t <= 2, s <= 1)"
            )));
        }
        if same_block && t != 2 {
            return Err(Error::UnsupportedConfiguration(
                "same-block enumeration needs t = 2".into(),
            ));
        }
        Ok(Self {
            t,
            s,
            placement,
            same_block,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn placement(&self) -> ErrorPlacement {
        self.placement
    }

    pub fn same_block(&self) -> bool {
        self.same_block
    }

    fn erasure_sets(&self) -> Vec<Vec<LocatedPauli>> {
        let singles = |b: usize| {
            (1..=BLOCK_SIZE).flat_map(move |p| Pauli::ALL.map(|x| LocatedPauli::new(b, p, x)))
        };
        let mut sets = Vec::new();
        match (self.t, self.same_block) {
            (0, _) => sets.push(Vec::new()),
            (1, _) => {
                for b in 0..ENCODED_BLOCKS {
                    sets.extend(singles(b).map(|e| alloc::vec![e]));
                }
            }
            (_, false) => {
                for b1 in 0..ENCODED_BLOCKS {
                    for b2 in b1 + 1..ENCODED_BLOCKS {
                        for p1 in 1..=BLOCK_SIZE {
                            for p2 in 1..=BLOCK_SIZE {
                                for x1 in Pauli::ALL {
                                    for x2 in Pauli::ALL {
                                        sets.push(alloc::vec![
                                            LocatedPauli::new(b1, p1, x1),
                                            LocatedPauli::new(b2, p2, x2),
                                        ]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            (_, true) => {
                for b in 0..ENCODED_BLOCKS {
                    for p1 in 1..=BLOCK_SIZE {
                        for p2 in p1 + 1..=BLOCK_SIZE {
                            for x1 in Pauli::ALL {
                                for x2 in Pauli::ALL {
                                    sets.push(alloc::vec![
                                        LocatedPauli::new(b, p1, x1),
                                        LocatedPauli::new(b, p2, x2),
                                    ]);
                                }
                            }
                        }
                    }
                }
            }
        }
        sets
    }

    fn error_sets(&self, erasures: &[LocatedPauli]) -> Vec<Vec<LocatedPauli>> {
        if self.s == 0 {
            return alloc::vec![Vec::new()];
        }
        let mut out = Vec::new();
        for b in 0..ENCODED_BLOCKS {
            if self.placement == ErrorPlacement::UndamagedBlock
                && erasures.iter().any(|e| e.block == b)
            {
                continue;
            }
            for p in 1..=BLOCK_SIZE {
                if erasures.iter().any(|e| e.block == b && e.pos == p) {
                    continue;
                }
                out.extend(Pauli::ALL.map(|x| alloc::vec![LocatedPauli::new(b, p, x)]));
            }
        }
        out
    }

    /// All scenarios in enumeration order.
    pub fn scenarios(&self) -> Vec<NoiseScenario> {
        let mut out = Vec::with_capacity(self.len());
        for erasures in self.erasure_sets() {
            for errors in self.error_sets(&erasures) {
                out.push(NoiseScenario::new(erasures.clone(), errors));
            }
        }
        out
    }

    /// Closed-form size of the space.
    pub fn len(&self) -> usize {
        let positions = ENCODED_BLOCKS * BLOCK_SIZE;
        let erasure_count = match (self.t, self.same_block) {
            (0, _) => 1,
            (1, _) => positions * 3,
            (_, false) => 3 * BLOCK_SIZE * BLOCK_SIZE * 9,
            (_, true) => ENCODED_BLOCKS * (BLOCK_SIZE * (BLOCK_SIZE - 1) / 2) * 9,
        };
        let damaged_blocks = if self.same_block { 1 } else { self.t };
        let error_count = match (self.s, self.placement) {
            (0, _) => 1,
            (_, ErrorPlacement::UndamagedBlock) => {
                (ENCODED_BLOCKS - damaged_blocks) * BLOCK_SIZE * 3
            }
            (_, ErrorPlacement::Unconstrained) => (positions - self.t) * 3,
        };
        erasure_count * error_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One scenario drawn uniformly from the space; the seed is recorded so
    /// the draw can be replayed.
    pub fn random(&self, seed: u64) -> NoiseScenario {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = self.scenarios();
        let mut pick = all[rng.random_range(0..all.len())].clone();
        pick.seed = seed;
        pick
    }
}

impl fmt::Display for ScenarioSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} s={} {}", self.t, self.s, self.placement)?;
        if self.same_block {
            f.write_str(" same-block")?;
        }
        Ok(())
    }
}
