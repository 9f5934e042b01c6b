//! Monte-Carlo checks of the probabilistic statements behind the
//! representation technique: random bin sizes, bin products, hashed collision
//! values, the two-sided birthday bound and the 1:2 random split.
//!
//! Every trial draws from its own generator seeded with
//! `derive_seed(seed, trial)`, so a report is reproducible from its seed and
//! trial count alone. Asymptotic statements are checked as explicit
//! inequalities; the constants used are listed in each report.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use crate::costmodel::entropy;
use crate::dpbins::DpTable;
use crate::error::{Error, Result};
use crate::numtheory::{derive_seed, random_prime_u64, rng_from_seed, SeededRng};
use crate::oracles::{collision_values, count_solution_pairs};
use crate::problem::Items;
use crate::scalar::Natural;

/// Fewest trials any Monte-Carlo report accepts.
pub const MIN_TRIALS: u64 = 30;

/// Largest `n` for checks that enumerate all subsets.
pub const MAX_STAT_ITEMS: usize = 16;

/// Direction of a single inequality in a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value ≤ bound + slack`.
    AtMost,
    /// `value + slack ≥ bound`.
    AtLeast,
    /// `|value - bound| ≤ slack`.
    Within,
}

/// One inequality with the numbers it was decided on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    pub relation: Relation,
}

impl Check {
    fn new(name: &str, value: f64, relation: Relation, bound: f64, slack: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            bound,
            slack,
            relation,
        }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.value <= self.bound + self.slack,
            Relation::AtLeast => self.value + self.slack >= self.bound,
            Relation::Within => (self.value - self.bound).abs() <= self.slack,
        }
    }
}

/// Outcome of one statistical check, with all raw numbers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatReport {
    pub quantity: String,
    pub seed: u64,
    pub trials: u64,
    pub estimate: f64,
    pub bound: f64,
    pub std_error: f64,
    /// `true` exactly when every entry of `checks` holds.
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Constants chosen for this artifact where the statement hides them.
    pub constants: BTreeMap<String, f64>,
    pub raw: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl StatReport {
    fn new(quantity: &str, seed: u64, trials: u64) -> Self {
        Self {
            quantity: quantity.to_string(),
            seed,
            trials,
            estimate: 0.0,
            bound: 0.0,
            std_error: 0.0,
            pass: false,
            checks: Vec::new(),
            constants: BTreeMap::new(),
            raw: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.verdict();
        self
    }

    /// Recomputes the verdict from the stored checks.
    pub fn verdict(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sample mean and standard error of the mean.
#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: u64,
    s1: Sum,
    s2: Sum,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.s1.add(x);
        self.s2.add(x * x);
    }

    fn mean(&self) -> f64 {
        self.s1.value() / self.n as f64
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let n = self.n as f64;
        let var = ((self.s2.value() - self.s1.value() * self.s1.value() / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameter(format!("at least {MIN_TRIALS} trials are required, got {trials}")));
    }
    Ok(())
}

fn check_items(n: usize) -> Result<()> {
    if n > MAX_STAT_ITEMS {
        return Err(Error::ResourceLimit(format!(
            "statistical checks enumerate subsets and take at most {MAX_STAT_ITEMS} items, got {n}"
        )));
    }
    Ok(())
}

fn trial_rng(seed: u64, trial: u64) -> SeededRng {
    rng_from_seed(derive_seed(seed, trial))
}

/// Integer range `[⌈2^{bn}⌉, ⌊2^{bn+1}⌋]` the random prime is drawn from.
pub fn prime_range(n: usize, b: f64) -> Result<(u64, u64)> {
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::InvalidParameter(format!("b = {b} must lie in [0, 1]")));
    }
    let e = b * n as f64;
    if e >= 62.0 {
        return Err(Error::ResourceLimit(format!("modulus 2^{e} is too large for a table")));
    }
    let lo = (e.exp2().ceil() as u64).max(2);
    let hi = (e + 1.0).exp2().floor() as u64;
    Ok((lo, hi.max(lo)))
}

/// Draws `(p, k)` with `p` a random prime in the range and `k` uniform in `[0, p)`.
fn draw_bin(rng: &mut SeededRng, range: (u64, u64)) -> Result<(u64, u64)> {
    let p = random_prime_u64(range.0, range.1, rng)?;
    Ok((p, rng.gen_range(0..p)))
}

/// Tables keyed by modulus, built on first use.
struct TableCache<'a, V> {
    items: &'a Items<V>,
    tables: HashMap<u64, DpTable<u64>>,
}

impl<'a, V: Natural> TableCache<'a, V> {
    fn new(items: &'a Items<V>) -> Self {
        Self {
            items,
            tables: HashMap::new(),
        }
    }

    fn bin(&mut self, p: u64, k: u64) -> Result<u64> {
        if !self.tables.contains_key(&p) {
            self.tables.insert(p, DpTable::build(self.items, p)?);
        }
        Ok(*self.tables[&p].bin_size(k))
    }
}

/// Mean size of a random bin `T_{p,k}` against `2^{(1-b)n}`.
///
/// Passes when the sample mean is at most the bound plus three standard errors.
pub fn bin_mean_check<V: Natural>(items: &Items<V>, b: f64, trials: u64, seed: u64) -> Result<StatReport> {
    check_trials(trials)?;
    let n = items.len();
    check_items(n)?;
    let range = prime_range(n, b)?;
    let mut cache = TableCache::new(items);
    let mut m = Moments::default();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let (p, k) = draw_bin(&mut rng, range)?;
        m.push(cache.bin(p, k)? as f64);
    }
    let mut r = StatReport::new("bin_mean", seed, trials);
    r.estimate = m.mean();
    r.std_error = m.std_error();
    r.bound = ((1.0 - b) * n as f64).exp2();
    r.checks
        .push(Check::new("mean_bin_size", r.estimate, Relation::AtMost, r.bound, 3.0 * r.std_error));
    r.constants.insert("sigmas".into(), 3.0);
    r.raw.insert("n".into(), n as f64);
    r.raw.insert("b".into(), b);
    r.raw.insert("p_lo".into(), range.0 as f64);
    r.raw.insert("p_hi".into(), range.1 as f64);
    r.raw.insert("distinct_moduli".into(), cache.tables.len() as f64);
    Ok(r.finish())
}

/// Mean of `t_{p,k} · t_{p,(k-s) mod p}` over random bins, against
/// `C · 2^{2(1-b)n}` with `C = max(10, n)` standing in for the hidden
/// polylogarithmic factor.
///
/// The instance must have at most `2^{(2-b)n}` ordered pairs `(S1, S2)` with
/// `Σ(S1) = Σ(S2) + s`; this is counted by brute force first. The ratio of the
/// mean to `2^{2(1-b)n}` and the square of the mean bin size are reported.
pub fn bin_product_check<V: Natural>(items: &Items<V>, s: &V, b: f64, trials: u64, seed: u64) -> Result<StatReport> {
    check_trials(trials)?;
    let n = items.len();
    check_items(n)?;
    let range = prime_range(n, b)?;
    let mut pairs = count_solution_pairs(items, s)? as f64;
    if s.is_zero() {
        pairs += (n as f64).exp2();
    }
    let pair_limit = ((2.0 - b) * n as f64).exp2();
    if pairs > pair_limit {
        return Err(Error::InvalidInstance(format!(
            "instance has {pairs} solution pairs, above the 2^((2-b)n) = {pair_limit} the statement assumes"
        )));
    }
    let mut cache = TableCache::new(items);
    let mut prod = Moments::default();
    let mut size = Moments::default();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let (p, k) = draw_bin(&mut rng, range)?;
        let other = (k + p - s.residue(p)) % p;
        let t1 = cache.bin(p, k)? as f64;
        let t2 = cache.bin(p, other)? as f64;
        prod.push(t1 * t2);
        size.push(t1);
    }
    let scale = (2.0 * (1.0 - b) * n as f64).exp2();
    let c = (n as f64).max(10.0);
    let mut r = StatReport::new("bin_product", seed, trials);
    r.estimate = prod.mean();
    r.std_error = prod.std_error();
    r.bound = c * scale;
    r.checks
        .push(Check::new("mean_bin_product", r.estimate, Relation::AtMost, r.bound, 3.0 * r.std_error));
    r.constants.insert("c".into(), c);
    r.constants.insert("sigmas".into(), 3.0);
    r.raw.insert("n".into(), n as f64);
    r.raw.insert("b".into(), b);
    r.raw.insert("solution_pairs".into(), pairs);
    r.raw.insert("pair_limit".into(), pair_limit);
    r.raw.insert("ratio_to_scale".into(), r.estimate / scale);
    r.raw.insert("mean_bin_size_squared".into(), size.mean() * size.mean());
    if r.estimate < size.mean() * size.mean() {
        r.warnings.push("mean product below squared mean size".into());
    }
    Ok(r.finish())
}

/// Frequency with which a random bin receives enough collision values.
///
/// `V` is the set of values `Σ(S1) = Σ(S2) + s` with `S1 ≠ S2`, computed by
/// brute force; it must hold at least `2^{(1-ℓ)n}` values. When `ℓ ≤ 1 - b`
/// the event is `v_{p,k} ≥ 2^{(1-ℓ-b)n-2}` and the frequency must reach
/// `c/n`; otherwise the event is `v_{p,k} ≥ 1` and the frequency must reach
/// `c · min(1/n, 2^{(1-ℓ-b)n})`, with `c = 1/4`. Three standard errors of slack.
pub fn value_hash_check<V: Natural>(
    items: &Items<V>,
    s: &V,
    ell: f64,
    b: f64,
    trials: u64,
    seed: u64,
) -> Result<StatReport> {
    check_trials(trials)?;
    let n = items.len();
    check_items(n)?;
    if !(0.0..=1.0).contains(&ell) {
        return Err(Error::InvalidParameter(format!("ratio {ell} must lie in [0, 1]")));
    }
    let range = prime_range(n, b)?;
    let values = collision_values(items, s)?;
    let need = ((1.0 - ell) * n as f64).exp2();
    if (values.len() as f64) < need {
        return Err(Error::InvalidInstance(format!(
            "only {} collision values, fewer than 2^((1-l)n) = {need}",
            values.len()
        )));
    }
    let nf = n as f64;
    let c = 0.25;
    let low_regime = ell <= 1.0 - b;
    let (threshold, floor) = if low_regime {
        (((1.0 - ell - b) * nf - 2.0).exp2(), c / nf)
    } else {
        (1.0, c * (1.0 / nf).min(((1.0 - ell - b) * nf).exp2()))
    };
    let mut hits = Moments::default();
    let mut per_p: HashMap<u64, HashMap<u64, u64>> = HashMap::new();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let (p, k) = draw_bin(&mut rng, range)?;
        let counts = per_p.entry(p).or_insert_with(|| {
            let mut m = HashMap::new();
            for v in &values {
                *m.entry(v.residue(p)).or_insert(0u64) += 1;
            }
            m
        });
        let v_pk = counts.get(&k).copied().unwrap_or(0) as f64;
        hits.push(if v_pk >= threshold { 1.0 } else { 0.0 });
    }
    let f = hits.mean();
    let mut r = StatReport::new("value_hash", seed, trials);
    r.estimate = f;
    r.std_error = (f * (1.0 - f) / trials as f64).sqrt();
    r.bound = floor;
    r.checks
        .push(Check::new("event_frequency", f, Relation::AtLeast, floor, 3.0 * r.std_error));
    r.constants.insert("c".into(), c);
    r.constants.insert("sigmas".into(), 3.0);
    r.raw.insert("n".into(), nf);
    r.raw.insert("ell".into(), ell);
    r.raw.insert("b".into(), b);
    r.raw.insert("collision_values".into(), values.len() as f64);
    r.raw.insert("event_threshold".into(), threshold);
    r.raw.insert("low_regime".into(), if low_regime { 1.0 } else { 0.0 });
    Ok(r.finish())
}

/// Probability `ε(r)` that `r` uniform draws from `[N]` and `r` from `[M]`
/// contain both ends of one of `K` disjoint marked pairs, planted at `(k, k)`
/// for `k < K`.
///
/// With `x = r²K/(NM)`: when `x ≤ 0.1` the check is `ε ≥ x/2`, otherwise it is
/// the inclusion-exclusion bound
/// `x - 2·C(r,2)²·K²/(NM)² - r·C(r,2)·K·(1/(NM²) + 1/(N²M))`; both one-sided
/// at 95% (1.645 standard errors). The last term counts event pairs sharing
/// an `X` draw and those sharing a `Y` draw separately, since they differ
/// when `N < M`.
pub fn birthday_sim(n: u64, m: u64, k: u64, r: u64, trials: u64, seed: u64) -> Result<StatReport> {
    check_trials(trials)?;
    if !(1 <= k && k <= n && n <= m) {
        return Err(Error::InvalidParameter(format!("need 1 <= K <= N <= M, got K={k} N={n} M={m}")));
    }
    let (nf, mf, kf, rf) = (n as f64, m as f64, k as f64, r as f64);
    if r == 0 || rf * rf * kf > nf * mf {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= sqrt(NM/K), got r={r}")));
    }
    if r > 1 << 24 || k > 1 << 24 {
        return Err(Error::ResourceLimit("r and K are limited to 2^24 per trial".into()));
    }
    let mut hits = Moments::default();
    let mut marked = vec![false; k as usize];
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        marked.iter_mut().for_each(|x| *x = false);
        for _ in 0..r {
            let x = rng.gen_range(0..n);
            if x < k {
                marked[x as usize] = true;
            }
        }
        let mut hit = false;
        for _ in 0..r {
            let y = rng.gen_range(0..m);
            hit |= y < k && marked[y as usize];
        }
        hits.push(if hit { 1.0 } else { 0.0 });
    }
    let f = hits.mean();
    let x = rf * rf * kf / (nf * mf);
    let pairs = rf * (rf - 1.0) / 2.0;
    let inclusion_exclusion =
        x - 2.0 * pairs * pairs * kf * kf / (nf * mf).powi(2) - rf * pairs * kf * (1.0 / (nf * mf * mf) + 1.0 / (nf * nf * mf));
    let small = x <= 0.1;
    let bound = if small { 0.5 * x } else { inclusion_exclusion.max(0.0) };
    let mut rep = StatReport::new("birthday", seed, trials);
    rep.estimate = f;
    rep.std_error = (f * (1.0 - f) / trials as f64).sqrt();
    rep.bound = bound;
    rep.checks.push(Check::new(
        if small { "epsilon_vs_half_x" } else { "epsilon_vs_inclusion_exclusion" },
        f,
        Relation::AtLeast,
        bound,
        1.645 * rep.std_error,
    ));
    rep.constants.insert("half_x_factor".into(), 0.5);
    rep.constants.insert("small_x_limit".into(), 0.1);
    rep.constants.insert("z".into(), 1.645);
    for (name, v) in [("N", nf), ("M", mf), ("K", kf), ("r", rf), ("x", x), ("inclusion_exclusion", inclusion_exclusion)] {
        rep.raw.insert(name.into(), v);
    }
    Ok(rep.finish())
}

fn binom(n: u64, k: u64) -> f64 {
    binomial(BigUint::from(n), BigUint::from(k)).to_f64().unwrap_or(f64::INFINITY)
}

/// Exact probability that a uniform `n/3`-subset `X1` meets a fixed set of
/// size `m` in exactly `m/3` elements. Needs `3 | n` and `3 | m`.
pub fn split_probability(n: u64, m: u64) -> f64 {
    binom(m, m / 3) * binom(n - m, (n - m) / 3) / binom(n, n / 3)
}

/// Frequency of the 1:2 split event for a solution of size `ℓn`.
///
/// `X1` is a uniform subset of size `n/3`; the event is
/// `|(S1 ∪ S2) ∩ X1| = ℓn/3`. When `n` or `ℓn` is not a multiple of three
/// the nearest such grid point is used and a warning recorded. Passes when
/// the frequency is within three standard errors (of the exact Bernoulli
/// law) of the exact ratio, and that ratio is at least `0.1 / √n`.
pub fn split_check(n: u64, ell: f64, trials: u64, seed: u64) -> Result<StatReport> {
    check_trials(trials)?;
    if !(0.0..=1.0).contains(&ell) || n < 3 {
        return Err(Error::InvalidParameter(format!("need n >= 3 and l in [0, 1], got n={n} l={ell}")));
    }
    if n > 3000 {
        return Err(Error::ResourceLimit("split checks are limited to n <= 3000".into()));
    }
    let mut r = StatReport::new("split", seed, trials);
    let n3 = ((n as f64 / 3.0).round() as u64).max(1) * 3;
    if n3 != n {
        r.warnings.push(format!("n = {n} moved to the nearest multiple of three, {n3}"));
    }
    let m = (((ell * n3 as f64) / 3.0).round() as u64 * 3).min(n3);
    if (m as f64 - ell * n3 as f64).abs() > 1e-9 {
        r.warnings
            .push(format!("solution size {} moved to the nearest multiple of three, {m}", ell * n3 as f64));
    }
    let exact = split_probability(n3, m);
    let mut hits = Moments::default();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let x1 = sample(&mut rng, n3 as usize, (n3 / 3) as usize);
        let inside = x1.iter().filter(|&i| (i as u64) < m).count() as u64;
        hits.push(if inside == m / 3 { 1.0 } else { 0.0 });
    }
    let f = hits.mean();
    let se = (exact * (1.0 - exact) / trials as f64).sqrt();
    let c = 0.1;
    let floor = c / (n3 as f64).sqrt();
    r.estimate = f;
    r.std_error = se;
    r.bound = exact;
    r.checks.push(Check::new("frequency_vs_exact", f, Relation::Within, exact, 3.0 * se));
    r.checks.push(Check::new("exact_vs_floor", exact, Relation::AtLeast, floor, 0.0));
    r.constants.insert("c".into(), c);
    r.constants.insert("sigmas".into(), 3.0);
    r.raw.insert("n".into(), n3 as f64);
    r.raw.insert("solution_size".into(), m as f64);
    r.raw.insert("floor".into(), floor);
    Ok(r.finish())
}

/// Checks `2^{nh(ℓ)}/√(8nℓ(1-ℓ)) ≤ C(n, ℓn) < 2^{nh(ℓ)}/√(2πnℓ(1-ℓ))` with exact
/// binomials for every `n ∈ {20, 21, …, 60}` and `ℓ ∈ {0.1, …, 0.9}`. When `ℓn`
/// is not an integer, `k = round(ℓn)` is used with `ℓ = k/n`.
///
/// The estimate is the smallest ratio `C(n,ℓn) / lower` and the bound the
/// largest ratio `C(n,ℓn) / upper`; `trials` counts the grid points.
pub fn binomial_bounds_check() -> Result<StatReport> {
    let mut r = StatReport::new("binomial_entropy_bounds", 0, 0);
    let mut min_low = f64::INFINITY;
    let mut max_high: f64 = 0.0;
    for n in 20u64..=60 {
        for tenth in 1u64..=9 {
            let k = (n * tenth + 5) / 10;
            let nf = n as f64;
            let ell = k as f64 / nf;
            let c = binom(n, k);
            let core = (nf * entropy(ell)?).exp2();
            let var = nf * ell * (1.0 - ell);
            let lower = core / (8.0 * var).sqrt();
            let upper = core / (2.0 * std::f64::consts::PI * var).sqrt();
            min_low = min_low.min(c / lower);
            max_high = max_high.max(c / upper);
            r.trials += 1;
            if !(lower <= c && c < upper) {
                r.warnings.push(format!("n={n} l={ell}: {lower} <= {c} < {upper} fails"));
            }
        }
    }
    r.estimate = min_low;
    r.bound = max_high;
    r.checks.push(Check::new("binomial_over_lower", min_low, Relation::AtLeast, 1.0, 0.0));
    r.checks.push(Check::new("binomial_over_upper", max_high, Relation::AtMost, 1.0 - 1e-12, 0.0));
    Ok(r.finish())
}
