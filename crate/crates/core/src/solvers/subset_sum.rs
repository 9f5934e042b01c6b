use num_bigint::BigUint;

use super::{enumeration_cap, random_mask, SolveOutcome, SolveResult, SolverBudget, Trace};
use crate::dpbins::DpTable;
use crate::error::{Error, Result};
use crate::numtheory::{octave_prime_u64, rng_from_seed};
use crate::problem::{Items, Solution, Subset};
use crate::scalar::{Count, Natural};

pub(crate) const MAX_SOLVER_ITEMS: usize = 128;

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n > MAX_SOLVER_ITEMS {
        return Err(Error::ResourceLimit(format!(
            "solvers handle at most {MAX_SOLVER_ITEMS} items, got {n}"
        )));
    }
    Ok(())
}

/// Sums of every subset of `values`, sorted, each with its mask.
pub(crate) fn sorted_half_sums<V: Natural>(values: &[V]) -> Vec<(V, u64)> {
    let mut sums: Vec<(V, u64)> = Vec::with_capacity(1 << values.len());
    sums.push((V::zero(), 0));
    for (i, a) in values.iter().enumerate() {
        for idx in 0..sums.len() {
            let (s, m) = &sums[idx];
            let entry = (s.clone() + a.clone(), m | (1 << i));
            sums.push(entry);
        }
    }
    sums.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    sums
}

/// Bytes needed by a half list over `h` items.
pub(crate) fn half_list_bytes<V>(h: usize) -> Option<u64> {
    if h >= 48 {
        return None;
    }
    (1u64 << h).checked_mul(std::mem::size_of::<(V, u64)>() as u64 + 8)
}

/// Meet-in-the-middle: sort the sums of the first half, then look up the
/// complement of every sum of the second half. Deterministic and complete.
pub fn solve_subset_sum_mitm<V: Natural>(items: &Items<V>, m: &V, budget: &SolverBudget) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_size(n)?;
    let mut trace = Trace::new("subset_sum_mitm");
    let deadline = budget.deadline();
    let h = n / 2;
    let too_big = |k: usize| half_list_bytes::<V>(k).is_none_or(|b| b > budget.memory_cap);
    if too_big(h) || too_big(n - h) {
        trace.notes.push("half lists exceed the memory cap".into());
        return Ok(SolveOutcome::new(SolveResult::Inconclusive, trace));
    }
    let values = items.values();
    let left = trace.time("sort", |_| sorted_half_sums(&values[..h]));
    trace.list_entries += left.len() as u64;
    let right = &values[h..];
    let result = trace.time("match", |t| {
        // walk the second half's subsets in Gray-code order, keeping a running sum
        let mut sum = V::zero();
        let mut mask: u64 = 0;
        let total = 1u64 << right.len();
        for step in 0..total {
            if step > 0 {
                let bit = step.trailing_zeros() as usize;
                mask ^= 1 << bit;
                if mask >> bit & 1 == 1 {
                    sum += &right[bit];
                } else {
                    sum -= &right[bit];
                }
            }
            t.list_entries += 1;
            if step % 4096 == 0 && deadline.expired() {
                return SolveResult::Inconclusive;
            }
            if sum > *m {
                continue;
            }
            let need = m.clone() - sum.clone();
            if let Ok(pos) = left.binary_search_by(|e| e.0.cmp(&need)) {
                let full = left[pos].1 as u128 | (mask as u128) << h;
                return SolveResult::Found(Solution::single(Subset::from_mask(full)));
            }
        }
        SolveResult::NotFound
    });
    Ok(SolveOutcome::new(result, trace))
}

/// Representation technique for Subset-Sum.
///
/// Samples `min(sample_cap, ⌈2^{n/2}⌉)` random subsets, then repeatedly draws
/// a prime `p ∈ [2^{⌈n/2⌉}, 2^{⌈n/2⌉+1}]` and searches the bin `T_{p, m mod p}`,
/// listing at most `n² · 2^{⌈n/2⌉}` of its elements per draw. Every solution
/// lies in that bin, so a bin listed completely without a hit proves there is
/// no solution.
pub fn solve_subset_sum_rep<V: Natural>(items: &Items<V>, m: &V, budget: &SolverBudget) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_size(n)?;
    if n <= 63 {
        rep_with::<V, u64>(items, m, budget)
    } else if n <= 127 {
        rep_with::<V, u128>(items, m, budget)
    } else {
        rep_with::<V, BigUint>(items, m, budget)
    }
}

fn rep_with<V: Natural, C: Count>(items: &Items<V>, m: &V, budget: &SolverBudget) -> Result<SolveOutcome> {
    let n = items.len();
    let mut trace = Trace::new("subset_sum_rep");
    trace.b = Some(0.5);
    let deadline = budget.deadline();
    let mut rng = rng_from_seed(budget.seed);
    let half = n.div_ceil(2);

    let samples = if half >= 64 { budget.sample_cap } else { budget.sample_cap.min(1u64 << half) };
    let sampled = trace.time("sample", |t| {
        for _ in 0..samples {
            t.samples += 1;
            let mask = random_mask(n, &mut rng);
            if items.sum_mask(mask) == *m {
                return Some(Subset::from_mask(mask));
            }
            if t.samples % 4096 == 0 && deadline.expired() {
                break;
            }
        }
        None
    });
    if let Some(s) = sampled {
        return Ok(SolveOutcome::new(SolveResult::Found(Solution::single(s)), trace));
    }

    let cap = enumeration_cap(n, half);
    for _ in 0..budget.repeats(n) {
        if deadline.expired() {
            trace.notes.push("time cap reached".into());
            break;
        }
        trace.draws += 1;
        let p = octave_prime_u64(half, &mut rng)?;
        trace.p = Some(p.to_string());
        let table = match trace.time("table", |_| DpTable::<C>::build_with_cap(items, p, budget.memory_cap)) {
            Ok(t) => t,
            Err(Error::ResourceLimit(msg)) => {
                trace.notes.push(msg);
                return Ok(SolveOutcome::new(SolveResult::Inconclusive, trace));
            }
            Err(e) => return Err(e),
        };
        trace.table_cells += n as u64 * p;
        let k = m.residue(p);
        trace.k = Some(k.to_string());
        let bin = table.bin(k)?;
        let complete = bin.size().to_u64().is_some_and(|s| s <= cap);
        let hit = trace.time("enumerate", |t| {
            let mut it = bin.enumerate(cap);
            while let Some(members) = it.next_members() {
                t.enumerated += 1;
                let mut members_sum = V::zero();
                for &i in members {
                    members_sum += items.get(i);
                }
                if members_sum == *m {
                    let mut v = members.to_vec();
                    v.reverse();
                    return Some(Subset::from_sorted_unchecked(v));
                }
                if t.enumerated % 4096 == 0 && deadline.expired() {
                    return None;
                }
            }
            None
        });
        if let Some(s) = hit {
            return Ok(SolveOutcome::new(SolveResult::Found(Solution::single(s)), trace));
        }
        if complete && !deadline.expired() {
            trace.notes.push("target bin listed completely".into());
            return Ok(SolveOutcome::new(SolveResult::NotFound, trace));
        }
    }
    Ok(SolveOutcome::new(SolveResult::Inconclusive, trace))
}
