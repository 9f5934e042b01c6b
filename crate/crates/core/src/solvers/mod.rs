//! Randomized and exhaustive solvers for Subset-Sum and Shifted-Sums.
//!
//! Equal-Sums is Shifted-Sums with `s = 0`; Two-Subset-Sum is solved through
//! [`crate::problem::reduce_two_subset_to_shifted`].

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::dpbins::DEFAULT_MEMORY_CAP;
use crate::error::{Error, Result};
use crate::problem::Solution;

mod modular;
mod shifted;
mod subset_sum;
mod two_subset;

pub use modular::solve_modular_subset_sum_mitm;
pub use shifted::{solve_equal_sums, solve_shifted, solve_shifted_mitm, solve_shifted_rep, RepChoice};
pub use subset_sum::{solve_subset_sum_mitm, solve_subset_sum_rep};
pub use two_subset::solve_two_subset_sum;

/// Limits and seed for a randomized solve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverBudget {
    /// Cap on random samples in the sampling pre-filters.
    pub sample_cap: u64,
    /// Cap on `(p, k)` draws (or random splits) per call; `None` means `⌈4n⌉`.
    pub repeat_cap: Option<u64>,
    pub time_cap: Option<Duration>,
    pub seed: u64,
    /// Whether the Shifted-Sums representation solver samples random pairs first.
    pub prefilter: bool,
    /// Ceiling on the estimated memory of tables and sorted lists, in bytes.
    pub memory_cap: u64,
}

impl Default for SolverBudget {
    fn default() -> Self {
        Self {
            sample_cap: u64::MAX,
            repeat_cap: None,
            time_cap: None,
            seed: 0,
            prefilter: true,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

impl SolverBudget {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_cap == 0 || self.repeat_cap == Some(0) || self.memory_cap == 0 {
            return Err(Error::InvalidParameter("budget caps must be at least 1".into()));
        }
        if self.time_cap == Some(Duration::ZERO) {
            return Err(Error::InvalidParameter("time cap must be positive".into()));
        }
        Ok(())
    }

    pub fn repeats(&self, n: usize) -> u64 {
        self.repeat_cap.unwrap_or(4 * n as u64).max(1)
    }

    pub(crate) fn deadline(&self) -> Deadline {
        Deadline {
            start: Instant::now(),
            cap: self.time_cap,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Deadline {
    start: Instant,
    cap: Option<Duration>,
}

impl Deadline {
    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    pub(crate) fn expired(&self) -> bool {
        self.cap.is_some_and(|c| self.start.elapsed() >= c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "solution", rename_all = "snake_case")]
pub enum SolveResult {
    Found(Solution),
    NotFound,
    Inconclusive,
}

impl SolveResult {
    pub fn is_found(&self) -> bool {
        matches!(self, SolveResult::Found(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveResult::Found(s) => Some(s),
            _ => None,
        }
    }
}

/// What a solver did on the way to its result.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Trace {
    pub algorithm: String,
    /// Solution ratio `ℓ` of the last attempted size class.
    pub ratio: Option<f64>,
    /// Exponent `b` of the modulus range `[2^{bn}, 2^{bn+1}]`.
    pub b: Option<f64>,
    /// Last modulus drawn, in decimal.
    pub p: Option<String>,
    /// Last bin residue drawn, in decimal.
    pub k: Option<String>,
    pub samples: u64,
    pub draws: u64,
    /// Bin elements produced by unranking.
    pub enumerated: u64,
    /// Cell updates spent building tables.
    pub table_cells: u64,
    /// Partial sums listed by meet-in-the-middle passes.
    pub list_entries: u64,
    /// Wall time per phase in milliseconds.
    pub timings_ms: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl Trace {
    pub(crate) fn new(algorithm: &str) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            ..Self::default()
        }
    }

    pub(crate) fn time<T>(&mut self, phase: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        *self.timings_ms.entry(phase.to_string()).or_insert(0.0) += start.elapsed().as_secs_f64() * 1e3;
        out
    }

    pub(crate) fn absorb(&mut self, other: &Trace) {
        self.ratio = other.ratio.or(self.ratio);
        self.b = other.b.or(self.b);
        self.p = other.p.clone().or(self.p.take());
        self.k = other.k.clone().or(self.k.take());
        self.samples += other.samples;
        self.draws += other.draws;
        self.enumerated += other.enumerated;
        self.table_cells += other.table_cells;
        self.list_entries += other.list_entries;
        for (k, v) in &other.timings_ms {
            *self.timings_ms.entry(k.clone()).or_insert(0.0) += v;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOutcome {
    pub result: SolveResult,
    pub trace: Trace,
}

impl SolveOutcome {
    pub(crate) fn new(result: SolveResult, trace: Trace) -> Self {
        Self { result, trace }
    }
}

/// `n² · 2^e`, saturating.
pub(crate) fn enumeration_cap(n: usize, exponent: usize) -> u64 {
    let n2 = (n as u64).saturating_mul(n as u64);
    if exponent >= 64 {
        return u64::MAX;
    }
    n2.saturating_mul(1u64 << exponent)
}

/// Uniform random subset of `[1..n]` as a mask.
pub(crate) fn random_mask<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> u128 {
    let m: u128 = rng.gen();
    if n >= 128 {
        m
    } else {
        m & ((1u128 << n) - 1)
    }
}
