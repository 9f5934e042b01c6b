use super::subset_sum::{check_size, half_list_bytes, sorted_half_sums};
use super::{SolveOutcome, SolveResult, SolverBudget, Trace};
use crate::error::{Error, Result};
use crate::problem::{Items, Solution, Subset};
use crate::scalar::Natural;

/// Meet-in-the-middle for Modular Subset-Sum: find `S` with `Σ(S) ≡ m (mod q)`.
pub fn solve_modular_subset_sum_mitm<V: Natural>(
    items: &Items<V>,
    m: &V,
    q: &V,
    budget: &SolverBudget,
) -> Result<SolveOutcome> {
    budget.validate()?;
    let n = items.len();
    check_size(n)?;
    if q.is_zero() {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    let mut trace = Trace::new("modular_subset_sum_mitm");
    let h = n / 2;
    if [h, n - h].iter().any(|&k| half_list_bytes::<V>(k).is_none_or(|b| b > budget.memory_cap)) {
        trace.notes.push("half lists exceed the memory cap".into());
        return Ok(SolveOutcome::new(SolveResult::Inconclusive, trace));
    }
    let reduced: Vec<V> = items.values().iter().map(|a| a.clone() % q.clone()).collect();
    let target = m.clone() % q.clone();
    let reduce_list = |part: &[V]| {
        let mut v: Vec<(V, u64)> = sorted_half_sums(part)
            .into_iter()
            .map(|(s, mask)| (s % q.clone(), mask))
            .collect();
        v.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        v
    };
    let left = trace.time("sort", |_| reduce_list(&reduced[..h]));
    let right = trace.time("sort", |_| reduce_list(&reduced[h..]));
    trace.list_entries += (left.len() + right.len()) as u64;
    let hit = trace.time("match", |_| {
        right.iter().find_map(|(r, rm)| {
            let need = if *r <= target { target.clone() - r.clone() } else { target.clone() + q.clone() - r.clone() };
            left.binary_search_by(|e| e.0.cmp(&need))
                .ok()
                .map(|pos| left[pos].1 as u128 | (*rm as u128) << h)
        })
    });
    let result = match hit {
        Some(mask) => SolveResult::Found(Solution::single(Subset::from_mask(mask))),
        None => SolveResult::NotFound,
    };
    Ok(SolveOutcome::new(result, trace))
}
