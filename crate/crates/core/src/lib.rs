//! Exact algorithms for Subset-Sum and its variants.
//!
//! The central structure is [`DpTable`], the `(n+1) × p` table counting the
//! subsets of each prefix by residue of their sum. From it any element of a
//! residue bin can be produced by rank in `O(n)` table reads, which the
//! representation-technique solvers use to search a random bin. Alongside sit
//! meet-in-the-middle baselines, deterministic pigeonhole solvers, brute-force
//! oracles, the exponent curves of the analysis and a Monte-Carlo lab for the
//! probabilistic lemmas behind it.
//!
//! Algorithms are generic over the value type ([`Natural`]) and the table
//! entry type ([`Count`]); the aliases below name the usual instantiations.

pub mod bench;
pub mod costmodel;
pub mod dpbins;
pub mod error;
pub mod gen;
pub mod io;
pub mod numtheory;
pub mod oracles;
pub mod pigeonhole;
pub mod problem;
pub mod scalar;
pub mod solve;
pub mod solvers;
pub mod statslab;

pub use dpbins::{BinRef, DpTable};
pub use error::{Error, Result};
pub use problem::{compare_chi, verify, Items, ProblemInstance, Solution, Subset, Variant};
pub use scalar::{Count, Natural};
pub use solvers::{SolveOutcome, SolveResult, SolverBudget, Trace};

use num_bigint::BigUint;

/// Items with arbitrary-precision values.
pub type BigItems = Items<BigUint>;
/// Items whose values and sums fit in 64 bits.
pub type WordItems = Items<u64>;
/// Items whose values and sums fit in 128 bits.
pub type WideItems = Items<u128>;

pub type BigInstance = ProblemInstance<BigUint>;
pub type WordInstance = ProblemInstance<u64>;

/// Exact table for any `n`.
pub type BigTable = DpTable<BigUint>;
/// Table with 64-bit entries, valid up to 63 items.
pub type WordTable = DpTable<u64>;
/// Table with 128-bit entries, valid up to 127 items.
pub type WideTable = DpTable<u128>;

/// Library version embedded in generated artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
