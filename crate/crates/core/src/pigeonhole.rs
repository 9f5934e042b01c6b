//! Deterministic solvers for the two pigeonhole variants of Equal-Sums.
//!
//! Pigeonhole Equal-Sums (`Σ a_i < 2^n - 1`) searches the heaviest residue
//! bin modulo `2^{⌈n/2⌉}`. Pigeonhole Modular Equal-Sums (`q ≤ 2^n - 1`) bins
//! subsets by the quotient `⌊(Σ(S) mod q) / 2^H⌋`, counts those bins through
//! a residue table over the reduced items `⌊a_i / 2^H⌋ mod q1`, and halves a
//! circular interval of quotient classes that holds more subsets than residues.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::dpbins::DpTable;
use crate::error::{Error, Result};
use crate::problem::{pow2_minus_one, Items, Solution, Subset};
use crate::scalar::{Count, Natural};
use crate::solvers::{Deadline, SolveOutcome, SolveResult, SolverBudget, Trace};

/// Largest `n` handled; residues and subset counts are kept in `u128`.
pub const MAX_PIGEONHOLE_ITEMS: usize = 100;

fn check_items(n: usize) -> Result<()> {
    if n > MAX_PIGEONHOLE_ITEMS {
        return Err(Error::ResourceLimit(format!(
            "pigeonhole solvers handle at most {MAX_PIGEONHOLE_ITEMS} items, got {n}"
        )));
    }
    Ok(())
}

fn subset_of(desc: &[usize]) -> Subset {
    let mut v = desc.to_vec();
    v.reverse();
    Subset::from_sorted_unchecked(v)
}

/// `q = q1 · 2^H + q2` with `0 ≤ q2 < 2^H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientDecomposition {
    pub q: u128,
    pub h: usize,
    pub q1: u128,
    pub q2: u128,
}

impl QuotientDecomposition {
    /// Splits `q` with `H = ⌈n/2⌉`.
    pub fn new(q: u128, n: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("modulus must be positive".into()));
        }
        let h = n.div_ceil(2);
        if h >= 127 {
            return Err(Error::ResourceLimit(format!("{n} items is too many for a quotient split")));
        }
        Ok(Self {
            q,
            h,
            q1: q >> h,
            q2: q & ((1u128 << h) - 1),
        })
    }

    /// `2^H`.
    pub fn low(&self) -> u128 {
        1u128 << self.h
    }

    /// Quotient class of a residue `r < q` on the circle of `q1` classes.
    /// The partial class `q1` (the last `q2` residues) is merged into class 0.
    pub fn class_of(&self, r: u128) -> u64 {
        let c = r >> self.h;
        if c >= self.q1 {
            0
        } else {
            c as u64
        }
    }

    /// Number of residues in `[0, q)` whose class is `j`.
    pub fn beta(&self, j: u64) -> u128 {
        if j == 0 {
            self.low() + self.q2
        } else {
            self.low()
        }
    }

    /// Residues in the circular arc of `len` classes starting at `start`.
    pub fn beta_arc(&self, start: u64, len: u64) -> u128 {
        let zero = start == 0 || start as u128 + len as u128 > self.q1;
        len as u128 * self.low() + if zero { self.q2 } else { 0 }
    }
}

/// Reduced items `a'_i = ⌊(a_i mod q) / 2^H⌋`.
pub fn reduced_items<V: Natural>(items: &Items<V>, q: &V) -> Result<Vec<u128>> {
    let d = QuotientDecomposition::new(modulus_u128(q)?, items.len())?;
    Ok(residues_mod(items, d.q)?.iter().map(|r| r >> d.h).collect())
}

fn modulus_u128<V: Natural>(q: &V) -> Result<u128> {
    q.to_big()
        .to_u128()
        .filter(|&q| q > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("modulus {q} must lie in 1..2^128")))
}

fn residues_mod<V: Natural>(items: &Items<V>, q: u128) -> Result<Vec<u128>> {
    let qb = BigUint::from(q);
    Ok(items
        .values()
        .iter()
        .map(|a| (a.to_big() % &qb).to_u128().expect("residue is below q"))
        .collect())
}

/// Residue `k` of a bin holding more subsets than the values it can take.
///
/// Needs `Σ a_i < 2^n - 1` and `p` a power of two dividing `2^n`. Returns the
/// first `k` with `t_{p,k} > 2^n / p`, or else `p - 1`, which then satisfies
/// `t_{p,p-1} ≥ 2^n / p` while its class holds only `2^n / p - 1` values of `[0, W]`.
pub fn find_heavy_bin<V: Natural>(items: &Items<V>, p: u64) -> Result<u64> {
    check_equal_instance(items)?;
    let n = items.len();
    if n <= 63 {
        heavy_bin(&DpTable::<u64>::build(items, p)?)
    } else if n <= 127 {
        heavy_bin(&DpTable::<u128>::build(items, p)?)
    } else {
        heavy_bin(&DpTable::<BigUint>::build(items, p)?)
    }
}

fn check_equal_instance<V: Natural>(items: &Items<V>) -> Result<()> {
    if let Some(limit) = pow2_minus_one::<V>(items.len()) {
        if *items.total() >= limit {
            return Err(Error::InvalidInstance(format!(
                "total {} must be below 2^n - 1 = {limit}",
                items.total()
            )));
        }
    }
    Ok(())
}

fn heavy_bin<C: Count>(table: &DpTable<C>) -> Result<u64> {
    let n = table.n();
    let p = table.modulus();
    if !p.is_power_of_two() || p.trailing_zeros() as usize > n {
        return Err(Error::InvalidParameter(format!("modulus {p} must be a power of two dividing 2^{n}")));
    }
    let quota = C::from_big(&(BigUint::one() << (n - p.trailing_zeros() as usize)))
        .ok_or_else(|| Error::ResourceLimit("bin quota does not fit the count type".into()))?;
    let last = table.row(n);
    if let Some(k) = last.iter().position(|t| *t > quota) {
        return Ok(k as u64);
    }
    if last[p as usize - 1] >= quota {
        return Ok(p - 1);
    }
    Err(Error::ContractViolation("no heavy bin although the total is below 2^n - 1".into()))
}

/// Solves Pigeonhole Equal-Sums deterministically.
///
/// Builds the table modulo `p = 2^{⌈n/2⌉}`, picks the heavy bin and lists it
/// with a sum-to-subset map until two subsets share a sum.
pub fn solve_pigeonhole_equal<V: Natural>(items: &Items<V>) -> Result<Solution> {
    found(solve_pigeonhole_equal_with(items, &SolverBudget::default())?)
}

/// [`solve_pigeonhole_equal`] under a memory and time budget, with a trace.
pub fn solve_pigeonhole_equal_with<V: Natural>(items: &Items<V>, budget: &SolverBudget) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_items(n)?;
    check_equal_instance(items)?;
    let mut trace = Trace::new("pigeonhole_equal");
    let h = n.div_ceil(2);
    trace.b = Some(h as f64 / n as f64);
    let result = if n <= 63 {
        equal_with::<V, u64>(items, budget, &mut trace)?
    } else {
        equal_with::<V, u128>(items, budget, &mut trace)?
    };
    Ok(SolveOutcome::new(result, trace))
}

fn equal_with<V: Natural, C: Count>(items: &Items<V>, budget: &SolverBudget, trace: &mut Trace) -> Result<SolveResult> {
    let n = items.len();
    let p = 1u64 << n.div_ceil(2);
    let deadline = budget.deadline();
    trace.p = Some(p.to_string());
    let table = match trace.time("table", |_| DpTable::<C>::build_with_cap(items, p, budget.memory_cap)) {
        Ok(t) => t,
        Err(Error::ResourceLimit(msg)) => {
            trace.notes.push(msg);
            return Ok(SolveResult::Inconclusive);
        }
        Err(e) => return Err(e),
    };
    trace.table_cells += n as u64 * p;
    let k = heavy_bin(&table)?;
    trace.k = Some(k.to_string());
    let bin = table.bin(k)?;
    trace.time("enumerate", |t| {
        let mut seen: HashMap<V, Vec<usize>> = HashMap::new();
        let mut it = bin.iter();
        while let Some(members) = it.next_members() {
            t.enumerated += 1;
            let mut sum = V::zero();
            for &i in members {
                sum += items.get(i);
            }
            if let Some(prev) = seen.get(&sum) {
                return Ok(SolveResult::Found(Solution::pair(subset_of(members), subset_of(prev))));
            }
            seen.insert(sum, members.to_vec());
            if t.enumerated % 4096 == 0 && deadline.expired() {
                t.notes.push("time cap reached".into());
                return Ok(SolveResult::Inconclusive);
            }
        }
        Err(Error::ContractViolation("heavy bin listed without a repeated sum".into()))
    })
}

fn found(outcome: SolveOutcome) -> Result<Solution> {
    match outcome.result {
        SolveResult::Found(s) => Ok(s),
        _ => Err(Error::ContractViolation(
            outcome.trace.notes.last().cloned().unwrap_or_else(|| "pigeonhole search failed".into()),
        )),
    }
}

/// Outcome of counting a circular interval of quotient classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalCount {
    /// Exact number of subsets whose class lies in the interval.
    Count(u128),
    /// A class holding more subsets than residues, found while listing an
    /// oversized table bin.
    Marked(u64),
}

/// The table of reduced sums modulo `q1`, with the per-item residues mod `q`.
///
/// Bin `C[j]` holds the subsets with `Σ a'_i ≡ j (mod q1)`; bin `B[j]` holds
/// those whose residue `Σ(S) mod q` has quotient class `j`. Every member of
/// `B[j]` lies in some `C[x]` with `x` within circular distance `n - 1` of `j`.
#[derive(Clone, Debug)]
pub struct CArray<C> {
    decomposition: QuotientDecomposition,
    residues: Vec<u128>,
    table: DpTable<C>,
}

/// Builds the reduced table; fails when `q1 = 0`, i.e. `q < 2^H`.
pub fn build_c_array<V: Natural, C: Count>(items: &Items<V>, q: &V) -> Result<CArray<C>> {
    build_c_array_with_cap(items, q, crate::dpbins::DEFAULT_MEMORY_CAP)
}

pub fn build_c_array_with_cap<V: Natural, C: Count>(items: &Items<V>, q: &V, cap_bytes: u64) -> Result<CArray<C>> {
    let n = items.len();
    check_items(n)?;
    let d = QuotientDecomposition::new(modulus_u128(q)?, n)?;
    if d.q1 == 0 {
        return Err(Error::InvalidParameter(format!(
            "modulus {} is below 2^{}, so there are no quotient classes",
            d.q, d.h
        )));
    }
    let q1 = u64::try_from(d.q1).map_err(|_| Error::ResourceLimit("q1 exceeds 64 bits".into()))?;
    let residues = residues_mod(items, d.q)?;
    let reduced = residues.iter().map(|r| ((r >> d.h) % d.q1) as u64).collect();
    let table = DpTable::from_residues(reduced, q1, cap_bytes)?;
    Ok(CArray {
        decomposition: d,
        residues,
        table,
    })
}

impl<C: Count> CArray<C> {
    pub fn decomposition(&self) -> &QuotientDecomposition {
        &self.decomposition
    }

    /// `a_i mod q`.
    pub fn residues(&self) -> &[u128] {
        &self.residues
    }

    pub fn table(&self) -> &DpTable<C> {
        &self.table
    }

    pub fn q1(&self) -> u64 {
        self.table.modulus()
    }

    /// `c[0..q1]`.
    pub fn counts(&self) -> &[C] {
        self.table.row(self.table.n())
    }

    fn c(&self, x: u64) -> u128 {
        self.table.bin_size(x).to_u128().expect("n ≤ 100 keeps counts in u128")
    }

    /// `Σ(S) mod q`.
    pub fn residue_of(&self, subset: &Subset) -> u128 {
        self.residue_members(subset.members())
    }

    fn residue_members(&self, members: &[usize]) -> u128 {
        members.iter().map(|&i| self.residues[i - 1]).sum::<u128>() % self.decomposition.q
    }

    /// Quotient class of `S`, i.e. the `j` with `S ∈ B[j]`.
    pub fn b_class(&self, subset: &Subset) -> u64 {
        self.decomposition.class_of(self.residue_of(subset))
    }

    /// Index `x` with `S ∈ C[x]`.
    pub fn c_index(&self, subset: &Subset) -> u64 {
        let q1 = self.decomposition.q1;
        subset.members().iter().map(|&i| (self.residues[i - 1] >> self.decomposition.h) % q1).sum::<u128>() as u64
            % self.q1()
    }

    /// Listing cap per table bin, `(4n - 1) · 2^H`.
    fn cap(&self) -> u64 {
        let n = self.table.n() as u128;
        ((4 * n - 1) * self.decomposition.low()).min(u64::MAX as u128) as u64
    }

    fn wrap(&self, x: i128) -> u64 {
        x.rem_euclid(self.q1() as i128) as u64
    }

    /// Counts `b[i‥j]` over the circular interval from `i` to `j` inclusive.
    ///
    /// The whole circle is answered as `2^n`. Otherwise the interval and its
    /// `n - 1` neighbours on each side must fit on the circle without overlap.
    /// Table bins well inside the interval count in full; the boundary bins
    /// are listed and each member tested. A boundary bin larger than the
    /// listing cap is only partly listed, and the first class whose tally
    /// exceeds its residue count is returned as marked.
    pub fn count_b_interval(&self, i: u64, j: u64) -> Result<IntervalCount> {
        let q1 = self.q1();
        if i >= q1 || j >= q1 {
            return Err(Error::ContractViolation(format!("interval ends must lie below q1 = {q1}")));
        }
        let len = if j >= i { j - i + 1 } else { q1 - i + j + 1 };
        self.count_arc(i, len)
    }

    fn count_arc(&self, start: u64, len: u64) -> Result<IntervalCount> {
        let q1 = self.q1();
        let n = self.table.n() as u64;
        if len == q1 {
            return Ok(IntervalCount::Count(1u128 << n));
        }
        let reach = n - 1;
        if len == 0 || len as u128 + 2 * reach as u128 > q1 as u128 {
            return Err(Error::ContractViolation(format!(
                "interval of {len} classes with {reach} neighbours per side does not fit {q1} classes"
            )));
        }
        let inner_len = len.saturating_sub(2 * reach);
        let mut total: u128 = 0;
        for off in 0..inner_len {
            total += self.c((start + reach + off) % q1);
        }
        let ext_start = self.wrap(start as i128 - reach as i128);
        let ext_len = len + 2 * reach;
        let cap = self.cap();
        let d = &self.decomposition;
        let in_arc = |y: u64| (y + q1 - start) % q1 < len;
        for off in 0..ext_len {
            if inner_len > 0 && off >= 2 * reach && off < 2 * reach + inner_len {
                continue;
            }
            let x = (ext_start + off) % q1;
            let bin = self.table.bin(x)?;
            let mut it = bin.enumerate(cap);
            if self.c(x) <= cap as u128 {
                while let Some(members) = it.next_members() {
                    if in_arc(d.class_of(self.residue_members(members))) {
                        total += 1;
                    }
                }
            } else {
                let mut tally: HashMap<u64, u128> = HashMap::new();
                while let Some(members) = it.next_members() {
                    let y = d.class_of(self.residue_members(members));
                    let t = tally.entry(y).or_insert(0);
                    *t += 1;
                    if *t > d.beta(y) {
                        return Ok(IntervalCount::Marked(y));
                    }
                }
                return Err(Error::ContractViolation(format!("oversized bin {x} produced no marked class")));
            }
        }
        Ok(IntervalCount::Count(total))
    }

    /// Lists the table bins `x_0, x_0+1, …` (`count` of them, circularly),
    /// at most `cap` members each, until two members share `Σ mod q`.
    fn collide_in(&self, first: u64, count: u64, cap: u64, trace: &mut Trace, deadline: &Deadline) -> Result<SolveResult> {
        let q1 = self.q1();
        let mut seen: HashMap<u128, Vec<usize>> = HashMap::new();
        for off in 0..count.min(q1) {
            let x = (first + off) % q1;
            let bin = self.table.bin(x)?;
            let mut it = bin.enumerate(cap);
            while let Some(members) = it.next_members() {
                trace.enumerated += 1;
                let r = self.residue_members(members);
                if let Some(prev) = seen.get(&r) {
                    return Ok(SolveResult::Found(Solution::pair(subset_of(members), subset_of(prev))));
                }
                seen.insert(r, members.to_vec());
                if trace.enumerated % 4096 == 0 && deadline.expired() {
                    trace.notes.push("time cap reached".into());
                    return Ok(SolveResult::Inconclusive);
                }
            }
        }
        Err(Error::ContractViolation("neighbourhood listed without a repeated residue".into()))
    }
}

/// Solves Pigeonhole Modular Equal-Sums deterministically.
///
/// Returns `S1 ≠ S2` with `Σ(S1) ≡ Σ(S2) (mod q)`. An item divisible by `q`
/// gives `({i}, ∅)` at once.
pub fn solve_pigeonhole_modular<V: Natural>(items: &Items<V>, q: &V) -> Result<Solution> {
    found(solve_pigeonhole_modular_with(items, q, &SolverBudget::default())?)
}

/// [`solve_pigeonhole_modular`] under a memory and time budget, with a trace.
pub fn solve_pigeonhole_modular_with<V: Natural>(items: &Items<V>, q: &V, budget: &SolverBudget) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_items(n)?;
    let qv = modulus_u128(q)?;
    if qv > (1u128 << n) - 1 {
        return Err(Error::InvalidInstance(format!("modulus {qv} exceeds 2^n - 1")));
    }
    let mut trace = Trace::new("pigeonhole_modular");
    let residues = residues_mod(items, qv)?;
    if let Some(i) = residues.iter().position(|r| *r == 0) {
        trace.notes.push(format!("item {} is divisible by the modulus", i + 1));
        let s = Subset::from_sorted_unchecked(vec![i + 1]);
        return Ok(SolveOutcome::new(SolveResult::Found(Solution::pair(s, Subset::empty())), trace));
    }
    let d = QuotientDecomposition::new(qv, n)?;
    let result = if d.q1 < 4 * n as u128 {
        trace.notes.push("few quotient classes: searching residues modulo q directly".into());
        if n <= 63 {
            modular_direct::<u64>(&residues, d.q, budget, &mut trace)?
        } else {
            modular_direct::<u128>(&residues, d.q, budget, &mut trace)?
        }
    } else if n <= 63 {
        modular_quotient::<V, u64>(items, q, budget, &mut trace)?
    } else {
        modular_quotient::<V, u128>(items, q, budget, &mut trace)?
    };
    Ok(SolveOutcome::new(result, trace))
}

fn modular_direct<C: Count>(residues: &[u128], q: u128, budget: &SolverBudget, trace: &mut Trace) -> Result<SolveResult> {
    let q = u64::try_from(q).map_err(|_| Error::ResourceLimit("modulus exceeds 64 bits".into()))?;
    trace.p = Some(q.to_string());
    let table = match trace.time("table", |_| {
        DpTable::<C>::from_residues(residues.iter().map(|&r| r as u64).collect(), q, budget.memory_cap)
    }) {
        Ok(t) => t,
        Err(Error::ResourceLimit(msg)) => {
            trace.notes.push(msg);
            return Ok(SolveResult::Inconclusive);
        }
        Err(e) => return Err(e),
    };
    trace.table_cells += residues.len() as u64 * q;
    let two = C::from_u64_exact(2);
    let k = table
        .row(table.n())
        .iter()
        .position(|t| *t >= two)
        .ok_or_else(|| Error::ContractViolation("every residue class holds at most one subset".into()))?
        as u64;
    trace.k = Some(k.to_string());
    let first: Vec<Subset> = table.bin(k)?.enumerate(2).collect();
    trace.enumerated += 2;
    Ok(SolveResult::Found(Solution::pair(first[1].clone(), first[0].clone())))
}

fn modular_quotient<V: Natural, C: Count>(
    items: &Items<V>,
    q: &V,
    budget: &SolverBudget,
    trace: &mut Trace,
) -> Result<SolveResult> {
    let deadline = budget.deadline();
    let n = items.len() as u64;
    let arr = match trace.time("table", |_| build_c_array_with_cap::<V, C>(items, q, budget.memory_cap)) {
        Ok(a) => a,
        Err(Error::ResourceLimit(msg)) => {
            trace.notes.push(msg);
            return Ok(SolveResult::Inconclusive);
        }
        Err(e) => return Err(e),
    };
    let d = *arr.decomposition();
    let q1 = arr.q1();
    trace.p = Some(q1.to_string());
    trace.table_cells += n * q1;
    let cap = arr.cap();

    let (mut start, mut len) = (0u64, q1);
    let mut b: u128 = 1u128 << n;
    let search = trace.time("search", |t| -> Result<Option<u64>> {
        while len >= 4 * n {
            assert!(b > d.beta_arc(start, len), "interval must hold more subsets than residues");
            if deadline.expired() {
                t.notes.push("time cap reached".into());
                return Ok(None);
            }
            t.draws += 1;
            let half = len / 2;
            match arr.count_arc(start, half)? {
                IntervalCount::Marked(y) => return Ok(Some(y)),
                IntervalCount::Count(left) => {
                    if left > d.beta_arc(start, half) {
                        len = half;
                        b = left;
                    } else {
                        b -= left;
                        start = (start + half) % q1;
                        len -= half;
                    }
                }
            }
        }
        assert!(b > d.beta_arc(start, len), "interval must hold more subsets than residues");
        Ok(None)
    })?;
    if deadline.expired() {
        return Ok(SolveResult::Inconclusive);
    }
    trace.time("extract", |t| match search {
        Some(y) => {
            t.k = Some(y.to_string());
            arr.collide_in(arr.wrap(y as i128 - (n as i128 - 1)), 2 * n - 1, cap, t, &deadline)
        }
        None => {
            t.k = Some(start.to_string());
            arr.collide_in(arr.wrap(start as i128 - (n as i128 - 1)), len + 2 * (n - 1), cap, t, &deadline)
        }
    })
}
