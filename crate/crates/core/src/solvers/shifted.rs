use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use super::subset_sum::check_size;
use super::{enumeration_cap, random_mask, Deadline, SolveOutcome, SolveResult, SolverBudget, Trace};
use crate::costmodel;
use crate::dpbins::DpTable;
use crate::error::{Error, Result};
use crate::numtheory::{derive_seed, octave_prime_u64, rng_from_seed};
use crate::problem::{Items, Solution, Subset};
use crate::scalar::{Count, Natural};

fn check_pair<V: Natural>(items: &Items<V>, s: &V, sol: &Solution) -> Result<()> {
    match sol {
        Solution::Pair { s1, s2 } if s1 != s2 && items.sum(s1) == items.sum(s2) + s.clone() => Ok(()),
        _ => Err(Error::ContractViolation("solver produced an unverified pair".into())),
    }
}

fn check_ratio_size(n: usize, size: usize) -> Result<()> {
    if size == 0 || size > n {
        return Err(Error::InvalidParameter(format!("solution size must lie in 1..={n}, got {size}")));
    }
    Ok(())
}

/// Binomial coefficient, saturating.
fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Calls `f(ΣA, ΣB, A, B)` for every disjoint pair `A, B ⊆ idx` with
/// `|A| + |B| = k`. Stops early when `f` returns `false`.
fn for_each_pair<V: Natural>(
    values: &[V],
    idx: &[usize],
    k: usize,
    f: &mut dyn FnMut(&V, &V, u128, u128) -> bool,
) -> bool {
    fn rec<V: Natural>(
        values: &[V],
        idx: &[usize],
        pos: usize,
        left: usize,
        a: (V, u128),
        b: (V, u128),
        f: &mut dyn FnMut(&V, &V, u128, u128) -> bool,
    ) -> bool {
        if left == 0 {
            return f(&a.0, &b.0, a.1, b.1);
        }
        if idx.len() - pos < left {
            return true;
        }
        let i = idx[pos];
        let v = &values[i];
        rec(values, idx, pos + 1, left - 1, (a.0.clone() + v.clone(), a.1 | 1 << i), b.clone(), f)
            && rec(values, idx, pos + 1, left - 1, a.clone(), (b.0.clone() + v.clone(), b.1 | 1 << i), f)
            && rec(values, idx, pos + 1, left, a, b, f)
    }
    rec(values, idx, 0, k, (V::zero(), 0), (V::zero(), 0), f)
}

/// One meet-in-the-middle pass for a fixed split and fixed class sizes.
/// `Ok(None)` means the pass finished without a match; `Err` carries a
/// resource problem; expiry yields `Ok(Some(None))`.
fn mitm_pass<V: Natural>(
    items: &Items<V>,
    s: &V,
    x1: &[usize],
    x2: &[usize],
    l1: usize,
    l2: usize,
    budget: &SolverBudget,
    deadline: &Deadline,
    trace: &mut Trace,
) -> Result<Option<Option<Solution>>> {
    if l1 > x1.len() || l2 > x2.len() {
        return Ok(None);
    }
    let values = items.values();
    let entries = binomial(x1.len(), l1).saturating_mul(1u64.checked_shl(l1 as u32).unwrap_or(u64::MAX));
    let entry_bytes = (std::mem::size_of::<(V, u128, u128)>() + 16) as u64;
    if entries.saturating_mul(entry_bytes) > budget.memory_cap {
        return Err(Error::ResourceLimit(format!("{entries} partial pairs exceed the memory cap")));
    }
    let w1 = x1.iter().fold(V::zero(), |acc, &i| acc + values[i].clone());
    let mut v1: Vec<(V, u128, u128)> = Vec::with_capacity(entries as usize);
    for_each_pair(values, x1, l1, &mut |a, b, ma, mb| {
        v1.push((w1.clone() + a.clone() - b.clone(), ma, mb));
        true
    });
    trace.list_entries += v1.len() as u64;
    v1.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    v1.dedup_by(|x, y| x.0 == y.0);

    let base = w1 + s.clone();
    let mut found = None;
    let mut expired = false;
    let mut scanned = 0u64;
    for_each_pair(values, x2, l2, &mut |c, d, mc, md| {
        scanned += 1;
        if scanned % 4096 == 0 && deadline.expired() {
            expired = true;
            return false;
        }
        let up = base.clone() + d.clone();
        if *c > up {
            return true;
        }
        let key = up - c.clone();
        if let Ok(pos) = v1.binary_search_by(|e| e.0.cmp(&key)) {
            let (_, ma, mb) = &v1[pos];
            let s1 = Subset::from_mask(ma | mc);
            let s2 = Subset::from_mask(mb | md);
            if s1 != s2 {
                found = Some(Solution::pair(s1, s2));
                return false;
            }
        }
        true
    });
    trace.list_entries += scanned;
    if expired {
        return Ok(Some(None));
    }
    Ok(found.map(Some))
}

/// Meet-in-the-middle for Shifted-Sums restricted to disjoint solutions with
/// `|S1| + |S2| = size` (ratio `ℓ = size / n`).
///
/// Each attempt splits the items at random into `X1` (`⌊n/2⌋` items) and `X2`,
/// lists the differences `Σ(A) − Σ(B)` of disjoint pairs in `X1` of total size
/// `⌊size/2⌋`, and scans pairs of `X2` of the remaining size for a match.
/// After `repeat_cap` splits every other way of dividing `size` between the
/// halves is tried on the last split, so `NotFound` is exact for this size.
pub fn solve_shifted_mitm<V: Natural>(
    items: &Items<V>,
    s: &V,
    size: usize,
    budget: &SolverBudget,
) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_size(n)?;
    check_ratio_size(n, size)?;
    let mut trace = Trace::new("shifted_mitm");
    trace.ratio = Some(size as f64 / n as f64);
    let deadline = budget.deadline();
    let mut rng = rng_from_seed(budget.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let h = n / 2;
    let l1 = size / 2;
    let inconclusive = |mut trace: Trace, note: String| {
        trace.notes.push(note);
        Ok(SolveOutcome::new(SolveResult::Inconclusive, trace))
    };

    for _ in 0..budget.repeats(n) {
        if deadline.expired() {
            return inconclusive(trace, "time cap reached".into());
        }
        trace.draws += 1;
        order.shuffle(&mut rng);
        let (x1, x2) = order.split_at(h);
        let pass = trace.time("mitm", |t| mitm_pass(items, s, x1, x2, l1, size - l1, budget, &deadline, t));
        match pass {
            Ok(Some(Some(sol))) => {
                check_pair(items, s, &sol)?;
                return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
            }
            Ok(Some(None)) => return inconclusive(trace, "time cap reached".into()),
            Ok(None) => {}
            Err(Error::ResourceLimit(msg)) => return inconclusive(trace, msg),
            Err(e) => return Err(e),
        }
    }

    // every solution of this size puts some j of its elements into X1
    let (x1, x2) = order.split_at(h);
    for j in 0..=size.min(h) {
        if j == l1 || size - j > x2.len() {
            continue;
        }
        let pass = trace.time("mitm_sweep", |t| mitm_pass(items, s, x1, x2, j, size - j, budget, &deadline, t));
        match pass {
            Ok(Some(Some(sol))) => {
                check_pair(items, s, &sol)?;
                return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
            }
            Ok(Some(None)) => return inconclusive(trace, "time cap reached".into()),
            Ok(None) => {}
            Err(Error::ResourceLimit(msg)) => return inconclusive(trace, msg),
            Err(e) => return Err(e),
        }
    }
    Ok(SolveOutcome::new(SolveResult::NotFound, trace))
}

/// Parameters of the representation solver for a given solution size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepChoice {
    /// `b = 1 − ℓ` if `ℓ > 1/2`, else `1/2`.
    pub b: f64,
    /// Primes are drawn from `[2^e, 2^{e+1}]` with `e = ⌈bn⌉`.
    pub exponent: usize,
    /// Per-draw enumeration cap is `n² · 2^{cap_exponent}`, `cap_exponent = ⌈(1 − b)n⌉`.
    pub cap_exponent: usize,
}

impl RepChoice {
    pub fn for_size(n: usize, size: usize) -> Self {
        if 2 * size > n {
            // bn = n − size and (1 − b)n = size, both integral
            RepChoice {
                b: 1.0 - size as f64 / n as f64,
                exponent: (n - size).max(1),
                cap_exponent: size,
            }
        } else {
            RepChoice {
                b: 0.5,
                exponent: n.div_ceil(2).max(1),
                cap_exponent: n.div_ceil(2),
            }
        }
    }
}

/// Representation technique for Shifted-Sums, tuned for solutions of size
/// `size` (ratio `ℓ = size / n`).
///
/// Each draw picks a prime `p ∈ [2^{⌈bn⌉}, 2^{⌈bn⌉+1}]` and `k ∈ [0, p−1]`,
/// lists `T_{p,k}` and `T_{p,(k−s) mod p}` (capped at `n² · 2^{(1−b)n}`
/// elements each), sorts the second by sum and looks up `Σ(S1) − s` for every
/// `S1` of the first. Never reports `NotFound`.
pub fn solve_shifted_rep<V: Natural>(
    items: &Items<V>,
    s: &V,
    size: usize,
    budget: &SolverBudget,
) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_size(n)?;
    check_ratio_size(n, size)?;
    if n <= 63 {
        shifted_rep_with::<V, u64>(items, s, size, budget)
    } else if n <= 127 {
        shifted_rep_with::<V, u128>(items, s, size, budget)
    } else {
        shifted_rep_with::<V, BigUint>(items, s, size, budget)
    }
}

fn shifted_rep_with<V: Natural, C: Count>(
    items: &Items<V>,
    s: &V,
    size: usize,
    budget: &SolverBudget,
) -> Result<SolveOutcome> {
    let n = items.len();
    let choice = RepChoice::for_size(n, size);
    let mut trace = Trace::new("shifted_rep");
    trace.ratio = Some(size as f64 / n as f64);
    trace.b = Some(choice.b);
    let deadline = budget.deadline();
    let mut rng = rng_from_seed(budget.seed);

    if budget.prefilter {
        let samples = if choice.exponent >= 64 {
            budget.sample_cap
        } else {
            budget.sample_cap.min(1u64 << choice.exponent)
        };
        let hit = trace.time("sample", |t| {
            for _ in 0..samples {
                t.samples += 1;
                let (m1, m2) = (random_mask(n, &mut rng), random_mask(n, &mut rng));
                if m1 != m2 && items.sum_mask(m1) == items.sum_mask(m2) + s.clone() {
                    return Some(Solution::pair(Subset::from_mask(m1), Subset::from_mask(m2)));
                }
                if t.samples % 4096 == 0 && deadline.expired() {
                    break;
                }
            }
            None
        });
        if let Some(sol) = hit {
            check_pair(items, s, &sol)?;
            return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
        }
    }

    let cap = enumeration_cap(n, choice.cap_exponent);
    for _ in 0..budget.repeats(n) {
        if deadline.expired() {
            trace.notes.push("time cap reached".into());
            break;
        }
        trace.draws += 1;
        let p = octave_prime_u64(choice.exponent, &mut rng)?;
        let k = rng.gen_range(0..p);
        trace.p = Some(p.to_string());
        trace.k = Some(k.to_string());
        let table = match trace.time("table", |_| DpTable::<C>::build_with_cap(items, p, budget.memory_cap)) {
            Ok(t) => t,
            Err(Error::ResourceLimit(msg)) => {
                trace.notes.push(msg);
                return Ok(SolveOutcome::new(SolveResult::Inconclusive, trace));
            }
            Err(e) => return Err(e),
        };
        trace.table_cells += n as u64 * p;
        let k2 = (k + p - s.residue(p)) % p;

        let second_len = table.bin_size(k2).to_u64().map_or(cap, |x| x.min(cap));
        let bytes = second_len.saturating_mul((std::mem::size_of::<(V, Subset)>() + 8 * n) as u64);
        if bytes > budget.memory_cap {
            trace.notes.push(format!("{second_len} bin elements exceed the memory cap"));
            return Ok(SolveOutcome::new(SolveResult::Inconclusive, trace));
        }
        let second: Vec<(V, Subset)> = trace.time("enumerate", |t| {
            let mut v: Vec<(V, Subset)> = table
                .bin(k2)
                .expect("residue below p")
                .enumerate(cap)
                .map(|sub| (items.sum(&sub), sub))
                .collect();
            t.enumerated += v.len() as u64;
            v.sort_unstable_by(|x, y| x.0.cmp(&y.0));
            v
        });

        let hit = trace.time("match", |t| {
            let mut it = table.bin(k).expect("residue below p").enumerate(cap);
            let mut buf = Vec::with_capacity(n);
            while let Some(members) = it.next_members() {
                t.enumerated += 1;
                if t.enumerated % 4096 == 0 && deadline.expired() {
                    return None;
                }
                let sum1 = members.iter().fold(V::zero(), |acc, &i| acc + items.get(i).clone());
                if sum1 < *s {
                    continue;
                }
                let want = sum1 - s.clone();
                let start = second.partition_point(|e| e.0 < want);
                buf.clear();
                buf.extend(members.iter().rev());
                for (v, s2) in &second[start..] {
                    if *v != want {
                        break;
                    }
                    if s2.members() != buf.as_slice() {
                        let s1 = Subset::from_sorted_unchecked(buf.clone());
                        return Some(Solution::pair(s1, s2.clone()));
                    }
                }
            }
            None
        });
        if let Some(sol) = hit {
            check_pair(items, s, &sol)?;
            return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
        }
    }
    Ok(SolveOutcome::new(SolveResult::Inconclusive, trace))
}

/// Shifted-Sums without knowing the solution ratio.
///
/// Tries every size `L = n, n−1, …, 1`. Sizes whose ratio `L/n` lies in
/// `[ℓ1, ℓ2)` (the range where the classical representation bound beats
/// meet-in-the-middle) go to [`solve_shifted_rep`], the others to
/// [`solve_shifted_mitm`]. Sizes the representation solver left open are
/// then settled by the exhaustive meet-in-the-middle sweep, so `NotFound`
/// is returned only when every size has been ruled out.
pub fn solve_shifted<V: Natural>(items: &Items<V>, s: &V, budget: &SolverBudget) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_size(n)?;
    let (l1, l2) = costmodel::classical_crossovers();
    let deadline = budget.deadline();
    let mut trace = Trace::new("shifted_dispatch");
    let mut open = Vec::new();
    let sub_budget = |stream: u64| SolverBudget {
        seed: derive_seed(budget.seed, stream),
        time_cap: budget.time_cap.map(|c| c.saturating_sub(deadline.elapsed()).max(std::time::Duration::from_micros(1))),
        ..budget.clone()
    };
    for size in (1..=n).rev() {
        if deadline.expired() {
            trace.notes.push("time cap reached".into());
            return Ok(SolveOutcome::new(SolveResult::Inconclusive, trace));
        }
        let ratio = size as f64 / n as f64;
        let use_rep = ratio >= l1 && ratio < l2;
        let out = if use_rep {
            solve_shifted_rep(items, s, size, &sub_budget(size as u64))?
        } else {
            solve_shifted_mitm(items, s, size, &sub_budget(size as u64))?
        };
        trace.absorb(&out.trace);
        match out.result {
            SolveResult::Found(sol) => {
                trace.notes.push(format!("found by {} at size {size}", out.trace.algorithm));
                return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
            }
            SolveResult::NotFound => {}
            SolveResult::Inconclusive => open.push(size),
        }
    }
    let mut unsettled = 0;
    for size in open {
        if deadline.expired() {
            unsettled += 1;
            continue;
        }
        let out = solve_shifted_mitm(items, s, size, &sub_budget(size as u64 + n as u64 + 1))?;
        trace.absorb(&out.trace);
        match out.result {
            SolveResult::Found(sol) => {
                trace.notes.push(format!("found by the exhaustive sweep at size {size}"));
                return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
            }
            SolveResult::NotFound => {}
            SolveResult::Inconclusive => unsettled += 1,
        }
    }
    let result = if unsettled == 0 { SolveResult::NotFound } else { SolveResult::Inconclusive };
    Ok(SolveOutcome::new(result, trace))
}

/// Equal-Sums as Shifted-Sums with `s = 0`.
pub fn solve_equal_sums<V: Natural>(items: &Items<V>, budget: &SolverBudget) -> Result<SolveOutcome> {
    solve_shifted(items, &V::zero(), budget)
}
