//! Counting connected components of the intersection of two opposite open
//! Schubert cells in `SL_n(R)/B`, by three independent combinatorial routes
//! that the library cross-checks against each other:
//!
//! * [`signs::covering_components`] — components of a sign-vector covering of
//!   the graph whose vertices are commutation classes of reduced words of the
//!   longest permutation and whose edges are braid moves;
//! * [`signs::gamma_components`] — components of the flip graph on sign
//!   assignments to the crossings of a single wiring diagram, where an
//!   elementary region may flip all of its boundary crossings whenever its two
//!   horizontal crossings carry opposite signs;
//! * [`fliporbits::count_orbits`] — orbits of the group generated by minor
//!   flips acting on upper-triangular matrices over `F_2`.
//!
//! The equivalence of the three routes rests on a chain of combinatorial
//! facts about canonical lifts of braid moves: the library verifies each of
//! them exhaustively in the ranks where that is feasible (see
//! [`signs::verify_flip_transport`], [`signs::verify_square_lifts`],
//! [`signs::verify_octagon_lifts`], [`signs::verify_cycle_space_span`]), and
//! checks the exact rational parameter transforms behind the sign-transition
//! rules ([`lusztig`]). Conjectured values (the `3 * 2^(n-1)` count and the
//! predicted orbit-size histogram) are always reported as comparisons, never
//! asserted.

pub mod f2;
pub mod fliporbits;
pub mod lusztig;
pub mod signs;
pub mod uf;
pub mod wiring;
pub mod words;

#[cfg(feature = "parallel")]
pub(crate) mod par;

use serde::Serialize;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("letter {letter} out of range 1..={max} for rank {n}")]
    LetterOutOfRange { letter: u8, max: u8, n: u8 },
    #[error("word is not reduced")]
    NotReduced,
    #[error("word has length {got}, expected {expected}")]
    WordLength { expected: usize, got: usize },
    #[error("position {pos} out of bounds for word of length {len}")]
    PositionOutOfBounds { pos: usize, len: usize },
    #[error("no {kind} pattern at position {pos}")]
    MovePatternMismatch { kind: &'static str, pos: usize },
    #[error("rank {n} exceeds the limit {limit}; raise the limit to force the computation")]
    RankLimit { n: u8, limit: u8 },
    #[error("state space needs {bits} bits, more than the supported {limit}")]
    StateSpaceLimit { bits: u32, limit: u32 },
    #[error("computation needs about {needed} bytes, above the cap of {cap}")]
    MemoryCap { needed: u64, cap: u64 },
    #[error("edge {edge} is not incident to class {class}")]
    EdgeNotIncident { edge: usize, class: usize },
    #[error("not a permutation of 1..={n}")]
    BadPermutation { n: usize },
    #[error("parameter t[{index}] is zero; all factorization parameters must be nonzero")]
    ZeroParameter { index: usize },
    #[error("singular braid move: t_i + t_(i+2) = 0")]
    SingularMove,
    #[error("need {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("column set must consist of distinct columns in 1..={n}")]
    BadColumnSet { n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Version stamped into every serialized report so downstream consumers can
/// detect schema changes.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Outcome of one verification sweep: how many cases were examined and a
/// description of every case that violated the property under test.
///
/// An empty `violations` list is the pass condition for theorem-status
/// checks; conjecture-status comparisons report mismatches through their own
/// typed fields instead.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: &'static str,
    pub n: u8,
    pub cases_checked: u64,
    pub violations: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &'static str, n: u8) -> Self {
        CheckReport { check, n, cases_checked: 0, violations: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Record a violating case, keeping at most a small prefix so that a
    /// badly broken sweep cannot balloon the report.
    pub fn violation(&mut self, description: String) {
        if self.violations.len() < 32 {
            self.violations.push(description);
        }
    }
}
