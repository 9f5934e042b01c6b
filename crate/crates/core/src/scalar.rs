//! Numeric traits the algorithms are generic over.
//!
//! Item values and subset sums implement [`Natural`]; entries of the count
//! table implement [`Count`]. Both are provided for `u64`, `u128` and
//! [`BigUint`]. Machine-word instantiations are exact as long as the values
//! they hold fit, which the constructors check.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, Rem, Sub, SubAssign};

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, One, ToPrimitive, Zero};

/// An exact non-negative integer used for item values and sums.
pub trait Natural:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Rem<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
{
    /// `self mod m` for a word-sized modulus.
    fn residue(&self, m: u64) -> u64;

    fn from_big(value: &BigUint) -> Option<Self>;

    fn to_big(&self) -> BigUint;

    fn from_u64_exact(value: u64) -> Self {
        Self::from_u64(value).expect("every Natural holds a u64")
    }

    /// `2^exp`, or `None` when it does not fit.
    fn checked_pow2(exp: usize) -> Option<Self> {
        let two = Self::from_u64_exact(2);
        num_traits::checked_pow(two, exp)
    }
}

macro_rules! natural_word {
    ($t:ty) => {
        impl Natural for $t {
            #[inline]
            fn residue(&self, m: u64) -> u64 {
                (*self % (m as $t)) as u64
            }

            fn from_big(value: &BigUint) -> Option<Self> {
                <$t>::try_from(value).ok()
            }

            fn to_big(&self) -> BigUint {
                BigUint::from(*self)
            }
        }
    };
}

natural_word!(u64);
natural_word!(u128);

impl Natural for BigUint {
    fn residue(&self, m: u64) -> u64 {
        (self % m).to_u64().expect("remainder is below the modulus")
    }

    fn from_big(value: &BigUint) -> Option<Self> {
        Some(value.clone())
    }

    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

/// Entry type of the dynamic-programming count table.
///
/// Entries reach `2^n`, so a word type is only usable up to
/// [`Count::MAX_ITEMS`] items.
pub trait Count:
    Clone
    + Ord
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + FromPrimitive
    + ToPrimitive
{
    /// Largest `n` for which `2^n` is representable; `None` means unbounded.
    const MAX_ITEMS: Option<usize>;

    /// Memory estimate for one entry in a table over `n` items.
    fn entry_bytes(n: usize) -> usize;

    fn to_big(&self) -> BigUint;

    fn from_big(value: &BigUint) -> Option<Self>;

    fn from_u64_exact(value: u64) -> Self {
        Self::from_u64(value).expect("every Count holds a u64")
    }
}

impl Count for u64 {
    const MAX_ITEMS: Option<usize> = Some(63);

    fn entry_bytes(_n: usize) -> usize {
        8
    }

    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }

    fn from_big(value: &BigUint) -> Option<Self> {
        u64::try_from(value).ok()
    }
}

impl Count for u128 {
    const MAX_ITEMS: Option<usize> = Some(127);

    fn entry_bytes(_n: usize) -> usize {
        16
    }

    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }

    fn from_big(value: &BigUint) -> Option<Self> {
        u128::try_from(value).ok()
    }
}

impl Count for BigUint {
    const MAX_ITEMS: Option<usize> = None;

    fn entry_bytes(n: usize) -> usize {
        // n-bit magnitude plus the vector header
        n.div_ceil(8) + std::mem::size_of::<BigUint>()
    }

    fn to_big(&self) -> BigUint {
        self.clone()
    }

    fn from_big(value: &BigUint) -> Option<Self> {
        Some(value.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_agree_across_types() {
        let v: u64 = 1_000_000_007;
        assert_eq!(v.residue(97), (v as u128).residue(97));
        assert_eq!(v.residue(97), BigUint::from(v).residue(97));
    }

    #[test]
    fn pow2_overflow_is_reported() {
        assert_eq!(u64::checked_pow2(63), Some(1u64 << 63));
        assert_eq!(u64::checked_pow2(64), None);
        assert!(BigUint::checked_pow2(200).is_some());
    }

    #[test]
    fn big_conversion_round_trips() {
        let b = BigUint::from(u64::MAX) + 1u32;
        assert_eq!(<u64 as Natural>::from_big(&b), None);
        assert_eq!(<u128 as Natural>::from_big(&b), Some(1u128 << 64));
    }
}
