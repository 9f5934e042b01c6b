//! Wall-clock scaling measurements over a range of instance sizes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::costmodel::sig9;
use crate::error::{Error, Result};
use crate::gen::{generate, GenSpec};
use crate::numtheory::derive_seed;
use crate::solve::{solve_instance, Algorithm};
use crate::solvers::{SolveResult, SolverBudget};
use crate::VERSION;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub variant: String,
    pub ns: Vec<usize>,
    pub algos: Vec<Algorithm>,
    pub reps: usize,
    pub seed: u64,
    /// Item width; `None` picks [`default_bits`].
    pub bits: Option<u64>,
    pub budget: SolverBudget,
}

impl BenchSpec {
    pub fn new(variant: &str, ns: Vec<usize>, algos: Vec<Algorithm>, reps: usize, seed: u64) -> Self {
        Self {
            variant: variant.to_string(),
            ns,
            algos,
            reps,
            seed,
            bits: None,
            budget: SolverBudget::default(),
        }
    }
}

/// `n` bits, except `n - ⌈log2 n⌉ - 1` for Pigeonhole Equal-Sums so that the
/// total stays below `2^n - 1`.
pub fn default_bits(variant: &str, n: usize) -> u64 {
    if variant == "pigeonhole_equal" {
        let log = (usize::BITS - n.saturating_sub(1).leading_zeros()) as u64;
        (n as u64).saturating_sub(log + 1).max(1)
    } else {
        n as u64
    }
}

fn plants(variant: &str) -> bool {
    !variant.starts_with("pigeonhole")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub algo: String,
    pub reps: usize,
    /// `None` when a run hit a resource limit.
    pub median_ms: Option<f64>,
    pub found_rate: f64,
    pub log2_ms: Option<f64>,
    /// Median of table cell updates, listed partial sums, unranked elements
    /// and samples per run.
    pub median_ops: Option<f64>,
    /// Least-squares slope of `log2_ms` against `n` over this algorithm's rows.
    pub slope: Option<f64>,
    pub seed: u64,
    /// `ok`, `single_sample` or `resource_limit`.
    pub status: String,
    pub version: String,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    })
}

/// Least-squares slope of `y` against `x`; needs two distinct `x`.
pub fn slope(points: &[(f64, f64)]) -> Option<f64> {
    let k = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Times every algorithm on `reps` instances per size.
///
/// Instance `r` at size `n` is generated from `derive_seed(seed, n · 2^16 + r)`
/// and shared by all algorithms; subset-sum-like variants get a solution
/// planted at ratio 1/2. Runs are sequential.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    if spec.reps == 0 || spec.ns.is_empty() || spec.algos.is_empty() {
        return Err(Error::InvalidParameter("bench needs at least one size, algorithm and repetition".into()));
    }
    let mut rows = Vec::new();
    for &n in &spec.ns {
        let bits = spec.bits.unwrap_or_else(|| default_bits(&spec.variant, n));
        let mut instances = Vec::with_capacity(spec.reps);
        for r in 0..spec.reps {
            let seed = derive_seed(spec.seed, ((n as u64) << 16) + r as u64);
            let mut g = GenSpec::new(&spec.variant, n, bits, seed);
            if plants(&spec.variant) {
                g = g.planted(0.5);
            }
            instances.push((seed, generate(&g)?.instance));
        }
        for &algo in &spec.algos {
            let mut times = Vec::with_capacity(spec.reps);
            let mut ops = Vec::with_capacity(spec.reps);
            let mut found = 0usize;
            let mut limited = false;
            for (seed, inst) in &instances {
                let budget = SolverBudget {
                    seed: derive_seed(*seed, 1),
                    ..spec.budget.clone()
                };
                let start = Instant::now();
                match solve_instance(inst, algo, &budget) {
                    Ok(out) => {
                        times.push(start.elapsed().as_secs_f64() * 1e3);
                        let t = &out.trace;
                        ops.push((t.table_cells + t.list_entries + t.enumerated + t.samples) as f64);
                        if matches!(out.result, SolveResult::Found(_)) {
                            found += 1;
                        }
                    }
                    Err(Error::ResourceLimit(_)) => limited = true,
                    Err(e) => return Err(e),
                }
            }
            let median_ms = if limited { None } else { median(&mut times) };
            let status = if limited {
                "resource_limit"
            } else if spec.reps == 1 {
                "single_sample"
            } else {
                "ok"
            };
            rows.push(BenchRow {
                n,
                algo: algo.name().to_string(),
                reps: spec.reps,
                median_ms,
                found_rate: found as f64 / spec.reps as f64,
                log2_ms: median_ms.map(|m| m.max(1e-6).log2()),
                median_ops: if limited { None } else { median(&mut ops) },
                slope: None,
                seed: spec.seed,
                status: status.to_string(),
                version: VERSION.to_string(),
            });
        }
    }
    let mut by_algo: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in &rows {
        if let Some(l) = r.log2_ms {
            by_algo.entry(r.algo.clone()).or_default().push((r.n as f64, l));
        }
    }
    for r in &mut rows {
        r.slope = by_algo.get(&r.algo).and_then(|pts| slope(pts));
    }
    Ok(rows)
}

fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,algo,reps,median_ms,found_rate,log2_ms,median_ops,slope,seed,status,version\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.algo,
            r.reps,
            opt(r.median_ms),
            sig9(r.found_rate),
            opt(r.log2_ms),
            opt(r.median_ops),
            opt(r.slope),
            r.seed,
            r.status,
            r.version
        );
    }
    out
}
