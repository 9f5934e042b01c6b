//! Problem instances, solutions and their verification.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Natural;

/// A multiset of positive integers `a_1..a_n` with its exact total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Items<V> {
    values: Vec<V>,
    total: V,
}

impl<V: Natural> Items<V> {
    /// Fails when a value is zero, the list is empty, or the total overflows `V`.
    pub fn new(values: Vec<V>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInstance("at least one item is required".into()));
        }
        let mut total = V::zero();
        for (i, v) in values.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::InvalidInstance(format!("item {} is zero", i + 1)));
            }
            total = total
                .checked_add(v)
                .ok_or_else(|| Error::InvalidInstance("item total overflows the value type".into()))?;
        }
        Ok(Self { values, total })
    }

    pub fn from_u64s(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| V::from_u64_exact(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// `a_i` for a 1-based index.
    pub fn get(&self, index: usize) -> &V {
        &self.values[index - 1]
    }

    /// The exact total `W`.
    pub fn total(&self) -> &V {
        &self.total
    }

    /// `Σ_{i∈S} a_i`.
    pub fn sum(&self, subset: &Subset) -> V {
        let mut acc = V::zero();
        for &i in subset.members() {
            acc += &self.values[i - 1];
        }
        acc
    }

    /// Sum over a bit mask where bit `i` selects item `i + 1`.
    pub fn sum_mask(&self, mask: u128) -> V {
        let mut acc = V::zero();
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            acc += &self.values[i];
            m &= m - 1;
        }
        acc
    }

    pub fn to_big(&self) -> Items<BigUint> {
        Items {
            values: self.values.iter().map(Natural::to_big).collect(),
            total: self.total.to_big(),
        }
    }

    /// Re-expresses the items in another value type when `headroom * W` fits.
    pub fn narrow<U: Natural>(&self, headroom: u64) -> Option<Items<U>> {
        let total = U::from_big(&self.total.to_big())?;
        total.checked_mul(&U::from_u64_exact(headroom))?;
        let values = self
            .values
            .iter()
            .map(|v| U::from_big(&v.to_big()))
            .collect::<Option<Vec<_>>>()?;
        Some(Items { values, total })
    }
}

/// A subset of `[1..n]`, stored as ascending 1-based indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    /// Validates that every index lies in `[1, n]`; duplicates are rejected.
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self> {
        members.sort_unstable();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidParameter(format!("duplicate index {}", w[0])));
            }
        }
        if let Some(&bad) = members.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::InvalidParameter(format!("index {bad} outside 1..={n}")));
        }
        Ok(Subset(members))
    }

    /// Builds a subset from indices already known to be ascending and distinct.
    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subset(members)
    }

    pub fn from_mask(mask: u128) -> Self {
        let mut members = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            members.push(m.trailing_zeros() as usize + 1);
            m &= m - 1;
        }
        Subset(members)
    }

    /// Bit `i - 1` set for every member `i`; `None` above 128 items.
    pub fn to_mask(&self) -> Option<u128> {
        self.0.iter().try_fold(0u128, |acc, &i| (i <= 128).then(|| acc | (1u128 << (i - 1))))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Subset) -> Subset {
        Subset(self.0.iter().copied().filter(|&i| !other.contains(i)).collect())
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut v: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Subset(v)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.0.iter().all(|&i| !other.contains(i))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// The order `≺` on subsets: `S1 ≺ S2` iff the largest index of the symmetric
/// difference belongs to `S2`, i.e. iff `χ(S1) < χ(S2)` with `χ(S) = Σ_{i∈S} 2^i`.
pub fn compare_chi(s1: &Subset, s2: &Subset) -> Ordering {
    let (a, b) = (s1.members(), s2.members());
    let (mut i, mut j) = (a.len(), b.len());
    loop {
        match (i, j) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {
                let (x, y) = (a[i - 1], b[j - 1]);
                match x.cmp(&y) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    // the larger top element lies in the symmetric difference
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                }
            }
        }
    }
}

/// A candidate answer for one of the problem variants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solution {
    Single { subset: Subset },
    Pair { s1: Subset, s2: Subset },
    /// Multiplicity vector `ē ∈ {0,1,2}^n` for Two-Subset-Sum.
    Multiplicities { e: Vec<u8> },
}

impl Solution {
    pub fn single(subset: Subset) -> Self {
        Solution::Single { subset }
    }

    pub fn pair(s1: Subset, s2: Subset) -> Self {
        Solution::Pair { s1, s2 }
    }

    /// Replaces `(S1, S2)` by `(S1 \ S2, S2 \ S1)`; a no-op for other shapes.
    /// The shifted equation `Σ(S1) = s + Σ(S2)` is preserved.
    pub fn canonicalize(&self) -> Solution {
        match self {
            Solution::Pair { s1, s2 } => Solution::pair(s1.difference(s2), s2.difference(s1)),
            other => other.clone(),
        }
    }
}

/// The problem variant with its parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant<V> {
    SubsetSum { target: V },
    TwoSubsetSum { target: V },
    EqualSums,
    ShiftedSums { shift: V },
    PigeonholeEqualSums,
    PigeonholeModularEqualSums { modulus: V },
    ModularSubsetSum { target: V, modulus: V },
}

impl<V> Variant<V> {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::SubsetSum { .. } => "subset_sum",
            Variant::TwoSubsetSum { .. } => "two_subset_sum",
            Variant::EqualSums => "equal_sums",
            Variant::ShiftedSums { .. } => "shifted_sums",
            Variant::PigeonholeEqualSums => "pigeonhole_equal",
            Variant::PigeonholeModularEqualSums { .. } => "pigeonhole_modular",
            Variant::ModularSubsetSum { .. } => "modular_subset_sum",
        }
    }
}

/// A validated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance<V> {
    items: Items<V>,
    variant: Variant<V>,
}

impl<V: Natural> ProblemInstance<V> {
    pub fn new(items: Items<V>, variant: Variant<V>) -> Result<Self> {
        validate(&items, &variant)?;
        Ok(Self { items, variant })
    }

    pub fn items(&self) -> &Items<V> {
        &self.items
    }

    pub fn variant(&self) -> &Variant<V> {
        &self.variant
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn to_big(&self) -> ProblemInstance<BigUint> {
        let b = |v: &V| v.to_big();
        let variant = match &self.variant {
            Variant::SubsetSum { target } => Variant::SubsetSum { target: b(target) },
            Variant::TwoSubsetSum { target } => Variant::TwoSubsetSum { target: b(target) },
            Variant::EqualSums => Variant::EqualSums,
            Variant::ShiftedSums { shift } => Variant::ShiftedSums { shift: b(shift) },
            Variant::PigeonholeEqualSums => Variant::PigeonholeEqualSums,
            Variant::PigeonholeModularEqualSums { modulus } => {
                Variant::PigeonholeModularEqualSums { modulus: b(modulus) }
            }
            Variant::ModularSubsetSum { target, modulus } => Variant::ModularSubsetSum {
                target: b(target),
                modulus: b(modulus),
            },
        };
        ProblemInstance { items: self.items.to_big(), variant }
    }

    /// Re-expresses the instance in `U` when items and parameters fit with
    /// `headroom * W` to spare.
    pub fn narrow<U: Natural>(&self, headroom: u64) -> Option<ProblemInstance<U>> {
        let items = self.items.narrow::<U>(headroom)?;
        let c = |v: &V| U::from_big(&v.to_big());
        let variant = match &self.variant {
            Variant::SubsetSum { target } => Variant::SubsetSum { target: c(target)? },
            Variant::TwoSubsetSum { target } => Variant::TwoSubsetSum { target: c(target)? },
            Variant::EqualSums => Variant::EqualSums,
            Variant::ShiftedSums { shift } => Variant::ShiftedSums { shift: c(shift)? },
            Variant::PigeonholeEqualSums => Variant::PigeonholeEqualSums,
            Variant::PigeonholeModularEqualSums { modulus } => {
                Variant::PigeonholeModularEqualSums { modulus: c(modulus)? }
            }
            Variant::ModularSubsetSum { target, modulus } => Variant::ModularSubsetSum {
                target: c(target)?,
                modulus: c(modulus)?,
            },
        };
        Some(ProblemInstance { items, variant })
    }
}

/// `2^n - 1`, or `None` when it does not fit in `V`.
pub(crate) fn pow2_minus_one<V: Natural>(n: usize) -> Option<V> {
    V::checked_pow2(n).map(|p| p - V::one())
}

fn validate<V: Natural>(items: &Items<V>, variant: &Variant<V>) -> Result<()> {
    let w = items.total();
    let n = items.len();
    let bad = |msg: String| Err(Error::InvalidInstance(msg));
    match variant {
        Variant::SubsetSum { target } if target > w => bad(format!("target {target} exceeds total {w}")),
        Variant::TwoSubsetSum { target } => {
            let two_w = w.checked_add(w);
            if target.is_zero() || two_w.is_some_and(|tw| *target >= tw) {
                bad(format!("two-subset target must satisfy 0 < m < 2W (W = {w})"))
            } else {
                Ok(())
            }
        }
        Variant::ShiftedSums { shift } if shift >= w => bad(format!("shift {shift} must be below total {w}")),
        Variant::PigeonholeEqualSums => match pow2_minus_one::<V>(n) {
            Some(limit) if *w >= limit => bad(format!("total {w} must be below 2^n - 1 = {limit}")),
            _ => Ok(()),
        },
        Variant::PigeonholeModularEqualSums { modulus } => {
            if modulus.is_zero() {
                return bad("modulus must be positive".into());
            }
            match pow2_minus_one::<V>(n) {
                Some(limit) if *modulus > limit => bad(format!("modulus {modulus} exceeds 2^n - 1 = {limit}")),
                _ => Ok(()),
            }
        }
        Variant::ModularSubsetSum { target, modulus } => {
            if modulus.is_zero() {
                bad("modulus must be positive".into())
            } else if target >= modulus {
                bad(format!("target {target} must be below the modulus {modulus}"))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

fn check_indices(subset: &Subset, n: usize) -> Result<()> {
    match subset.max_index() {
        Some(i) if i > n => Err(Error::ShapeMismatch(format!("index {i} outside 1..={n}"))),
        _ => Ok(()),
    }
}

/// Checks that `solution` answers `instance`.
///
/// Pairs need only be distinct, not disjoint. A solution of the wrong shape
/// for the variant is an error rather than `false`.
pub fn verify<V: Natural>(instance: &ProblemInstance<V>, solution: &Solution) -> Result<bool> {
    let items = instance.items();
    let n = items.len();
    match (instance.variant(), solution) {
        (Variant::SubsetSum { target }, Solution::Single { subset }) => {
            check_indices(subset, n)?;
            Ok(items.sum(subset) == *target)
        }
        (Variant::ModularSubsetSum { target, modulus }, Solution::Single { subset }) => {
            check_indices(subset, n)?;
            Ok(items.sum(subset) % modulus.clone() == *target)
        }
        (Variant::TwoSubsetSum { target }, Solution::Multiplicities { e }) => {
            if e.len() != n || e.iter().any(|&x| x > 2) {
                return Err(Error::ShapeMismatch("expected a vector in {0,1,2}^n".into()));
            }
            let mut acc = V::zero();
            for (a, &x) in items.values().iter().zip(e) {
                for _ in 0..x {
                    acc += a;
                }
            }
            Ok(acc == *target)
        }
        (Variant::EqualSums | Variant::PigeonholeEqualSums, Solution::Pair { s1, s2 }) => {
            check_indices(s1, n)?;
            check_indices(s2, n)?;
            Ok(s1 != s2 && items.sum(s1) == items.sum(s2))
        }
        (Variant::ShiftedSums { shift }, Solution::Pair { s1, s2 }) => {
            check_indices(s1, n)?;
            check_indices(s2, n)?;
            Ok(s1 != s2 && items.sum(s1) == items.sum(s2) + shift.clone())
        }
        (Variant::PigeonholeModularEqualSums { modulus }, Solution::Pair { s1, s2 }) => {
            check_indices(s1, n)?;
            check_indices(s2, n)?;
            Ok(s1 != s2 && items.sum(s1) % modulus.clone() == items.sum(s2) % modulus.clone())
        }
        (variant, _) => Err(Error::ShapeMismatch(format!(
            "{} does not accept this solution shape",
            variant.name()
        ))),
    }
}

/// Result of mapping a Two-Subset-Sum instance onto Shifted-Sums.
#[derive(Clone, Debug)]
pub enum TwoSubsetReduction<V> {
    /// `m = W`: the all-ones vector answers directly.
    AllOnes(Vec<u8>),
    /// Solve `shifted`; `complemented` records whether `m` was replaced by `2W - m`.
    Shifted {
        shifted: ProblemInstance<V>,
        complemented: bool,
    },
}

impl<V: Natural> TwoSubsetReduction<V> {
    /// Converts a Shifted-Sums pair into `ē` with `e_i = 1 + [i∈S1] - [i∈S2]`,
    /// undoing the complement transform when it was applied.
    pub fn back_map(&self, solution: &Solution) -> Result<Vec<u8>> {
        match self {
            TwoSubsetReduction::AllOnes(e) => Ok(e.clone()),
            TwoSubsetReduction::Shifted { shifted, complemented } => {
                let Solution::Pair { s1, s2 } = solution else {
                    return Err(Error::ShapeMismatch("back-mapping needs a pair".into()));
                };
                let n = shifted.n();
                check_indices(s1, n)?;
                check_indices(s2, n)?;
                Ok((1..=n)
                    .map(|i| {
                        let e = 1 + u8::from(s1.contains(i)) - u8::from(s2.contains(i));
                        if *complemented {
                            2 - e
                        } else {
                            e
                        }
                    })
                    .collect())
            }
        }
    }
}

/// Maps Two-Subset-Sum `(items, m)` with `0 < m < 2W` onto Shifted-Sums with
/// the same items and `s = m - W` (after replacing `m ≤ W` by `2W - m`).
pub fn reduce_two_subset_to_shifted<V: Natural>(items: &Items<V>, m: &V) -> Result<TwoSubsetReduction<V>> {
    let w = items.total().clone();
    let two_w = w
        .checked_add(&w)
        .ok_or_else(|| Error::InvalidInstance("2W overflows the value type".into()))?;
    if m.is_zero() || *m >= two_w {
        return Err(Error::InvalidInstance(format!("target must satisfy 0 < m < 2W = {two_w}")));
    }
    if *m == w {
        return Ok(TwoSubsetReduction::AllOnes(vec![1; items.len()]));
    }
    let (m, complemented) = if *m < w { (two_w - m.clone(), true) } else { (m.clone(), false) };
    let shifted = ProblemInstance::new(items.clone(), Variant::ShiftedSums { shift: m - w })?;
    Ok(TwoSubsetReduction::Shifted { shifted, complemented })
}

/// Items and parameter reduced modulo a sampled prime.
#[derive(Clone, Debug)]
pub struct ModularReduction {
    /// `a_i mod p`, with a zero residue replaced by `p` to keep items positive.
    pub items: Items<BigUint>,
    /// `m mod p` or `s mod p`.
    pub parameter: BigUint,
    pub prime: BigUint,
    /// Whether the source was Subset-Sum (single subsets) or Shifted-Sums (pairs).
    pub pairs: bool,
}

impl ModularReduction {
    /// Whether `solution` satisfies the reduced equation modulo `p`.
    pub fn holds(&self, solution: &Solution) -> Result<bool> {
        let p = &self.prime;
        match (self.pairs, solution) {
            (false, Solution::Single { subset }) => {
                check_indices(subset, self.items.len())?;
                Ok(self.items.sum(subset) % p == self.parameter.clone() % p)
            }
            (true, Solution::Pair { s1, s2 }) => {
                check_indices(s1, self.items.len())?;
                check_indices(s2, self.items.len())?;
                let lhs = self.items.sum(s1) % p;
                let rhs = (self.items.sum(s2) + &self.parameter) % p;
                Ok(s1 != s2 && lhs == rhs)
            }
            _ => Err(Error::ShapeMismatch("solution shape does not match the reduced variant".into())),
        }
    }

    /// The Subset-Sum case as a Modular Subset-Sum instance over `p`.
    pub fn to_modular_instance(&self) -> Option<ProblemInstance<BigUint>> {
        if self.pairs {
            return None;
        }
        ProblemInstance::new(
            self.items.clone(),
            Variant::ModularSubsetSum {
                target: self.parameter.clone(),
                modulus: self.prime.clone(),
            },
        )
        .ok()
    }
}

/// Reduces a Subset-Sum or Shifted-Sums instance modulo `prime`.
///
/// Every solution of the original satisfies the reduced congruence; a
/// reduced solution must be re-verified against the original.
pub fn reduce_modulo(instance: &ProblemInstance<BigUint>, prime: &BigUint) -> Result<ModularReduction> {
    let (parameter, pairs) = match instance.variant() {
        Variant::SubsetSum { target } => (target % prime, false),
        Variant::ShiftedSums { shift } => (shift % prime, true),
        Variant::EqualSums => (BigUint::default(), true),
        other => {
            return Err(Error::InvalidParameter(format!(
                "modular reduction applies to subset_sum or shifted_sums, not {}",
                other.name()
            )))
        }
    };
    let values = instance
        .items()
        .values()
        .iter()
        .map(|a| {
            let r = a % prime;
            if r == BigUint::default() {
                prime.clone()
            } else {
                r
            }
        })
        .collect();
    Ok(ModularReduction {
        items: Items::new(values)?,
        parameter,
        prime: prime.clone(),
        pairs,
    })
}

/// Samples a prime of `bits` bits (default `4n`) and reduces the instance modulo it.
pub fn reduce_modulo_prime<R: rand::Rng + ?Sized>(
    instance: &ProblemInstance<BigUint>,
    bits: Option<usize>,
    rng: &mut R,
) -> Result<ModularReduction> {
    let bits = bits.unwrap_or(4 * instance.n());
    if bits < 2 {
        return Err(Error::InvalidParameter(format!("a {bits}-bit range holds no prime")));
    }
    let lo = BigUint::from(1u8) << (bits - 1);
    let hi = (BigUint::from(1u8) << bits) - 1u8;
    let p = crate::numtheory::random_prime(&lo, &hi, rng)?;
    reduce_modulo(instance, &p)
}
