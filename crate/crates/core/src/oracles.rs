//! Brute-force reference solvers. Slow and simple on purpose.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::{Items, ProblemInstance, Solution, Subset, Variant};
use crate::scalar::Natural;

/// Largest `n` handled by the exhaustive subset scans.
pub const MAX_BRUTE_ITEMS: usize = 26;
/// Largest `n` for the ternary scans (Two-Subset-Sum and solution ratios).
pub const MAX_TERNARY_ITEMS: usize = 18;
pub const MAX_BIN_ITEMS: usize = 22;
pub const MAX_COLLISION_ITEMS: usize = 20;
pub const MAX_PIGEONHOLE_CHECK_ITEMS: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub solvable: bool,
    pub witness: Option<Solution>,
    /// Largest `|S1| + |S2|` over disjoint solution pairs.
    pub max_size: Option<usize>,
    /// Smallest `|S1| + |S2|` over disjoint solution pairs.
    pub min_size: Option<usize>,
    /// `max_size / n`.
    pub max_ratio: Option<f64>,
    /// `min_size / n`.
    pub min_ratio: Option<f64>,
}

impl BruteForceResult {
    fn plain(witness: Option<Solution>) -> Self {
        Self {
            solvable: witness.is_some(),
            witness,
            max_size: None,
            min_size: None,
            max_ratio: None,
            min_ratio: None,
        }
    }
}

fn cap(n: usize, limit: usize, what: &str) -> Result<()> {
    if n > limit {
        Err(Error::ResourceLimit(format!("{what} is limited to n <= {limit}, got {n}")))
    } else {
        Ok(())
    }
}

/// `Σ` of every mask, indexed by mask.
fn all_sums<V: Natural>(values: &[V]) -> Vec<V> {
    let mut sums = Vec::with_capacity(1 << values.len());
    sums.push(V::zero());
    for a in values {
        for m in 0..sums.len() {
            let s = sums[m].clone() + a.clone();
            sums.push(s);
        }
    }
    sums
}

/// Masks sorted by sum, ties by mask.
fn masks_by_sum<V: Natural>(sums: &[V]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..sums.len() as u32).collect();
    order.sort_by(|&x, &y| sums[x as usize].cmp(&sums[y as usize]).then(x.cmp(&y)));
    order
}

fn pair_from_masks(a: u32, b: u32) -> Solution {
    Solution::pair(Subset::from_mask(a as u128), Subset::from_mask(b as u128))
}

/// Exhaustive solver for every variant.
///
/// For Equal-Sums and Shifted-Sums the extremal solution sizes over disjoint
/// pairs are also reported when `n <= 18`.
pub fn brute_solve<V: Natural>(instance: &ProblemInstance<V>) -> Result<BruteForceResult> {
    let items = instance.items();
    let n = items.len();
    match instance.variant() {
        Variant::TwoSubsetSum { target } => {
            cap(n, MAX_TERNARY_ITEMS, "brute-force Two-Subset-Sum")?;
            Ok(BruteForceResult::plain(two_subset_search(items.values(), target)))
        }
        Variant::SubsetSum { target } => {
            cap(n, MAX_BRUTE_ITEMS, "brute force")?;
            let sums = all_sums(items.values());
            let hit = sums.iter().position(|s| s == target);
            Ok(BruteForceResult::plain(
                hit.map(|m| Solution::single(Subset::from_mask(m as u128))),
            ))
        }
        Variant::ModularSubsetSum { target, modulus } => {
            cap(n, MAX_BRUTE_ITEMS, "brute force")?;
            let sums = all_sums(items.values());
            let hit = sums.iter().position(|s| s.clone() % modulus.clone() == *target);
            Ok(BruteForceResult::plain(
                hit.map(|m| Solution::single(Subset::from_mask(m as u128))),
            ))
        }
        Variant::EqualSums | Variant::PigeonholeEqualSums | Variant::ShiftedSums { .. } => {
            cap(n, MAX_BRUTE_ITEMS, "brute force")?;
            let shift = match instance.variant() {
                Variant::ShiftedSums { shift } => shift.clone(),
                _ => V::zero(),
            };
            let sums = all_sums(items.values());
            let witness = shifted_witness(&sums, &shift);
            let mut result = BruteForceResult::plain(witness);
            if n <= MAX_TERNARY_ITEMS {
                if let Some((lo, hi)) = extremal_sizes(items.values(), &shift) {
                    result.min_size = Some(lo);
                    result.max_size = Some(hi);
                    result.min_ratio = Some(lo as f64 / n as f64);
                    result.max_ratio = Some(hi as f64 / n as f64);
                }
            }
            Ok(result)
        }
        Variant::PigeonholeModularEqualSums { modulus } => {
            cap(n, MAX_BRUTE_ITEMS, "brute force")?;
            let sums: Vec<V> = all_sums(items.values())
                .into_iter()
                .map(|s| s % modulus.clone())
                .collect();
            let order = masks_by_sum(&sums);
            let hit = order
                .windows(2)
                .find(|w| sums[w[0] as usize] == sums[w[1] as usize])
                .map(|w| pair_from_masks(w[1], w[0]));
            Ok(BruteForceResult::plain(hit))
        }
    }
}

fn shifted_witness<V: Natural>(sums: &[V], shift: &V) -> Option<Solution> {
    let order = masks_by_sum(sums);
    if shift.is_zero() {
        return order
            .windows(2)
            .find(|w| sums[w[0] as usize] == sums[w[1] as usize])
            .map(|w| pair_from_masks(w[1], w[0]));
    }
    // two pointers over the sorted sums: find x, y with x = y + s
    let (mut lo, mut hi) = (0usize, 0usize);
    while hi < order.len() {
        let big = &sums[order[hi] as usize];
        let small = &sums[order[lo] as usize];
        let want = small.clone() + shift.clone();
        match big.cmp(&want) {
            std::cmp::Ordering::Equal => return Some(pair_from_masks(order[hi], order[lo])),
            std::cmp::Ordering::Less => hi += 1,
            std::cmp::Ordering::Greater => lo += 1,
        }
    }
    None
}

fn to_i128<V: Natural>(v: &V) -> i128 {
    v.to_big().to_i128().expect("caller checked the magnitude")
}

/// Every assignment of `values` to {S1, S2, neither}: `(Σ(S1) − Σ(S2), |S1| + |S2|)`.
fn ternary_diffs(values: &[i128]) -> Vec<(i128, usize)> {
    let mut out = vec![(0i128, 0usize)];
    for &a in values {
        let len = out.len();
        for idx in 0..len {
            let (d, c) = out[idx];
            out.push((d + a, c + 1));
            out.push((d - a, c + 1));
        }
    }
    out
}

#[derive(Clone, Copy)]
struct SizeStats {
    min: usize,
    min_positive: Option<usize>,
    max: usize,
}

fn size_stats(diffs: &[(i128, usize)]) -> HashMap<i128, SizeStats> {
    let mut map: HashMap<i128, SizeStats> = HashMap::new();
    for &(d, c) in diffs {
        let e = map.entry(d).or_insert(SizeStats { min: c, min_positive: None, max: c });
        e.min = e.min.min(c);
        e.max = e.max.max(c);
        if c > 0 {
            e.min_positive = Some(e.min_positive.map_or(c, |m| m.min(c)));
        }
    }
    map
}

/// Min and max of `|S1| + |S2|` over disjoint `(S1, S2) ≠ (∅, ∅)` with
/// `Σ(S1) = Σ(S2) + shift`, split into two halves of the items.
fn extremal_sizes<V: Natural>(values: &[V], shift: &V) -> Option<(usize, usize)> {
    let total: BigUint = values.iter().map(Natural::to_big).sum();
    if total.bits() >= 126 {
        return None;
    }
    let ints: Vec<i128> = values.iter().map(to_i128).collect();
    let s = to_i128(shift);
    let h = ints.len() / 2;
    let left = size_stats(&ternary_diffs(&ints[..h]));
    let right = size_stats(&ternary_diffs(&ints[h..]));
    let mut best: Option<(usize, usize)> = None;
    for (&dl, l) in &left {
        let Some(r) = right.get(&(s - dl)) else { continue };
        let hi = l.max + r.max;
        let mut lo = l.min + r.min;
        if lo == 0 {
            // only the all-empty assignment has size 0; take the next smallest
            let a = l.min_positive.map(|x| x + r.min);
            let b = r.min_positive.map(|x| x + l.min);
            match (a, b) {
                (None, None) => continue,
                (x, y) => lo = x.into_iter().chain(y).min().expect("one side is present"),
            }
        }
        best = Some(match best {
            None => (lo, hi),
            Some((a, b)) => (a.min(lo), b.max(hi)),
        });
    }
    best
}

/// Finds `ē ∈ {0,1,2}^n` with `Σ a_i e_i = m` by matching two halves.
fn two_subset_search<V: Natural>(values: &[V], target: &V) -> Option<Solution> {
    let h = values.len() / 2;
    let ternary = |part: &[V]| -> Vec<(V, Vec<u8>)> {
        let mut out = vec![(V::zero(), Vec::new())];
        for a in part {
            let mut next = Vec::with_capacity(out.len() * 3);
            for (s, e) in &out {
                for k in 0..3u8 {
                    let mut v = s.clone();
                    for _ in 0..k {
                        v += a;
                    }
                    let mut e2 = e.clone();
                    e2.push(k);
                    next.push((v, e2));
                }
            }
            out = next;
        }
        out
    };
    let mut left = ternary(&values[..h]);
    left.sort_by(|x, y| x.0.cmp(&y.0));
    for (rs, re) in ternary(&values[h..]) {
        if rs > *target {
            continue;
        }
        let need = target.clone() - rs;
        if let Ok(pos) = left.binary_search_by(|x| x.0.cmp(&need)) {
            let mut e = left[pos].1.clone();
            e.extend(re);
            return Some(Solution::Multiplicities { e });
        }
    }
    None
}

/// All subsets with `Σ(S) ≡ k (mod p)` in `≺` order.
pub fn brute_bin<V: Natural>(items: &Items<V>, p: u64, k: u64) -> Result<Vec<Subset>> {
    cap(items.len(), MAX_BIN_ITEMS, "brute-force bin listing")?;
    if p == 0 {
        return Err(Error::InvalidParameter("modulus must be at least 1".into()));
    }
    if k >= p {
        return Err(Error::ContractViolation(format!("residue {k} is not below {p}")));
    }
    // ascending masks are ascending in ≺
    Ok(all_sums(items.values())
        .iter()
        .enumerate()
        .filter(|(_, s)| s.residue(p) == k)
        .map(|(m, _)| Subset::from_mask(m as u128))
        .collect())
}

/// `V = {v : ∃ S1 ≠ S2, v = Σ(S1) = Σ(S2) + s}`.
pub fn collision_values<V: Natural>(items: &Items<V>, s: &V) -> Result<BTreeSet<V>> {
    cap(items.len(), MAX_COLLISION_ITEMS, "collision values")?;
    let sums = all_sums(items.values());
    let mut counts: HashMap<&V, u64> = HashMap::new();
    for v in &sums {
        *counts.entry(v).or_insert(0) += 1;
    }
    let mut out = BTreeSet::new();
    for (&v, &c) in &counts {
        let hit = if s.is_zero() {
            c >= 2
        } else {
            v >= s && counts.contains_key(&(v.clone() - s.clone()))
        };
        if hit {
            out.insert(v.clone());
        }
    }
    Ok(out)
}

/// Number of ordered pairs `S1 ≠ S2` with `Σ(S1) = Σ(S2) + s`.
pub fn count_solution_pairs<V: Natural>(items: &Items<V>, s: &V) -> Result<u128> {
    cap(items.len(), MAX_COLLISION_ITEMS, "solution pair counting")?;
    let sums = all_sums(items.values());
    let mut counts: HashMap<&V, u128> = HashMap::new();
    for v in &sums {
        *counts.entry(v).or_insert(0) += 1;
    }
    let mut total = 0u128;
    for (&v, &c) in &counts {
        if v >= s {
            if let Some(&d) = counts.get(&(v.clone() - s.clone())) {
                total += c * d;
            }
        }
    }
    if s.is_zero() {
        total -= sums.len() as u128;
    }
    Ok(total)
}

/// Second deterministic solver for Pigeonhole Modular Equal-Sums.
///
/// Both halves of the items are listed and sorted by `Σ mod q`. The number of
/// subsets whose residue lies in `[l, r]` is counted with binary searches, and
/// the interval holding more subsets than residues is halved until a single
/// residue class with two subsets remains.
pub fn pigeonhole_mitm_check<V: Natural>(items: &Items<V>, q: &V) -> Result<Solution> {
    let n = items.len();
    cap(n, MAX_PIGEONHOLE_CHECK_ITEMS, "the pigeonhole cross-check")?;
    let q = q
        .to_big()
        .to_u64()
        .filter(|&q| q >= 1 && (q as u128) < (1u128 << n))
        .ok_or_else(|| Error::InvalidInstance("modulus must satisfy 1 <= q <= 2^n - 1".into()))?;
    let residues: Vec<u64> = items.values().iter().map(|a| a.residue(q)).collect();
    let h = n / 2;
    let half = |part: &[u64]| -> Vec<(u64, u32)> {
        let mut v = vec![(0u64, 0u32)];
        for (i, &a) in part.iter().enumerate() {
            for idx in 0..v.len() {
                let (s, m) = v[idx];
                v.push((((s as u128 + a as u128) % q as u128) as u64, m | (1 << i)));
            }
        }
        v.sort_unstable();
        v
    };
    let l1 = half(&residues[..h]);
    let l2 = half(&residues[h..]);
    let below = |list: &[(u64, u32)], x: u64| list.partition_point(|e| e.0 < x) as u128;
    let in_range = |list: &[(u64, u32)], lo: u64, hi: u64| below(list, hi + 1) - below(list, lo);
    // pairs (x, y) with (x + y) mod q ∈ [l, r], where 0 <= l <= r < q
    let count = |l: u64, r: u64| -> u128 {
        let mut total = 0u128;
        for &(x, _) in &l1 {
            // y ∈ [l - x, r - x] mod q, possibly wrapping
            let lo = (l + q - x) % q;
            let hi = (r + q - x) % q;
            total += if lo <= hi {
                in_range(&l2, lo, hi)
            } else {
                in_range(&l2, lo, q - 1) + in_range(&l2, 0, hi)
            };
        }
        total
    };
    let (mut l, mut r) = (0u64, q - 1);
    while l < r {
        let mid = l + (r - l) / 2;
        if count(l, mid) > (mid - l + 1) as u128 {
            r = mid;
        } else {
            l = mid + 1;
        }
    }
    let target = l;
    let mut found: Vec<u128> = Vec::with_capacity(2);
    'outer: for &(y, my) in &l2 {
        let need = (target + q - y) % q;
        let start = l1.partition_point(|e| e.0 < need);
        for &(x, mx) in &l1[start..] {
            if x != need {
                break;
            }
            found.push(mx as u128 | ((my as u128) << h));
            if found.len() == 2 {
                break 'outer;
            }
        }
    }
    if found.len() < 2 {
        return Err(Error::ContractViolation("pigeonhole search ended without a collision".into()));
    }
    Ok(Solution::pair(Subset::from_mask(found[1]), Subset::from_mask(found[0])))
}
