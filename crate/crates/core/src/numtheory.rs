//! Seeded randomness, primality testing and prime sampling.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The generator used everywhere in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed for stream `stream` of a master seed (splitmix64 finalizer).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin; the first twelve primes as witnesses are exact below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with `rounds` random bases.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rounds: usize, rng: &mut R) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let r = n_minus_one.trailing_zeros().expect("n - 1 is positive");
    let d = &n_minus_one >> r;
    let two = BigUint::from(2u8);
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_one);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exact below 2^64, 40 Miller-Rabin rounds above (error below 4^-40).
pub fn is_prime(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => {
            let mut rng = rng_from_seed(derive_seed(0x5eed, n.bits()));
            is_probable_prime(n, 40, &mut rng)
        }
    }
}

/// Intervals at most this wide are sieved exhaustively.
const EXHAUSTIVE_WIDTH: u64 = 4096;

/// A prime drawn from `[lo, hi]`.
///
/// Narrow intervals are scanned completely and a prime is picked uniformly
/// among those present. Wider intervals use rejection sampling with
/// `100 * bits(hi) + 100` draws before giving up.
pub fn random_prime<R: Rng + ?Sized>(lo: &BigUint, hi: &BigUint, rng: &mut R) -> Result<BigUint> {
    let two = BigUint::from(2u8);
    if lo < &two || hi < lo {
        return Err(Error::InvalidParameter(format!(
            "prime interval [{lo}, {hi}] needs hi >= lo >= 2"
        )));
    }
    let no_prime = || Error::NoPrimeFound {
        lo: lo.to_string(),
        hi: hi.to_string(),
    };
    let width = hi - lo;
    if width.to_u64().is_some_and(|w| w < EXHAUSTIVE_WIDTH) {
        let w = width.to_u64().unwrap_or(0);
        let primes: Vec<BigUint> = (0..=w)
            .map(|d| lo + d)
            .filter(is_prime)
            .collect();
        if primes.is_empty() {
            return Err(no_prime());
        }
        let pick = rng.gen_range(0..primes.len());
        return Ok(primes[pick].clone());
    }
    let draws = 100 * hi.bits() + 100;
    let upper = hi + 1u8;
    for _ in 0..draws {
        let candidate = rng.gen_biguint_range(lo, &upper);
        if is_probable_prime(&candidate, 40, rng) {
            return Ok(candidate);
        }
    }
    Err(no_prime())
}

/// [`random_prime`] on word-sized bounds.
pub fn random_prime_u64<R: Rng + ?Sized>(lo: u64, hi: u64, rng: &mut R) -> Result<u64> {
    random_prime(&BigUint::from(lo), &BigUint::from(hi), rng)
        .map(|p| p.to_u64().expect("prime lies below hi"))
}

/// Seeded form of [`random_prime`].
pub fn random_prime_seeded(lo: &BigUint, hi: &BigUint, seed: u64) -> Result<BigUint> {
    random_prime(lo, hi, &mut rng_from_seed(seed))
}

/// Uniform residue in `[0, p - 1]`.
pub fn random_residue<R: Rng + ?Sized>(p: &BigUint, rng: &mut R) -> Result<BigUint> {
    if p.is_zero() {
        return Err(Error::InvalidParameter("modulus must be at least 1".into()));
    }
    Ok(rng.gen_biguint_below(p))
}

pub fn random_residue_seeded(p: &BigUint, seed: u64) -> Result<BigUint> {
    random_residue(p, &mut rng_from_seed(seed))
}

/// A prime drawn from `[2^e, 2^(e+1)]` together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSample {
    #[serde(with = "crate::io::decimal")]
    pub p: BigUint,
    #[serde(with = "crate::io::decimal")]
    pub range_lo: BigUint,
    #[serde(with = "crate::io::decimal")]
    pub range_hi: BigUint,
    pub seed: u64,
}

impl PrimeSample {
    /// Samples from `[2^exponent, 2^(exponent+1)]`; `exponent` must be at least 1.
    pub fn in_octave(exponent: usize, seed: u64) -> Result<Self> {
        let range_lo = BigUint::one() << exponent;
        let range_hi = BigUint::one() << (exponent + 1);
        let p = random_prime_seeded(&range_lo, &range_hi, seed)?;
        Ok(Self { p, range_lo, range_hi, seed })
    }
}

/// Draws a word-sized prime in `[2^e, 2^(e+1)]`.
pub(crate) fn octave_prime_u64<R: Rng + ?Sized>(exponent: usize, rng: &mut R) -> Result<u64> {
    if exponent >= 63 {
        return Err(Error::ResourceLimit(format!("modulus 2^{exponent} is too large for a table")));
    }
    random_prime_u64(1u64 << exponent, 1u64 << (exponent + 1), rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut is = vec![true; limit + 1];
        is[0] = false;
        if limit >= 1 {
            is[1] = false;
        }
        let mut i = 2;
        while i * i <= limit {
            if is[i] {
                let mut j = i * i;
                while j <= limit {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let table = sieve(20_000);
        for (n, &expected) in table.iter().enumerate() {
            assert_eq!(is_prime_u64(n as u64), expected, "n = {n}");
        }
    }

    #[test]
    fn known_large_values() {
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        let m127 = (BigUint::one() << 127u32) - 1u8;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(m127.clone() * 3u8)));
    }

    #[test]
    fn single_prime_interval() {
        let two = BigUint::from(2u8);
        assert_eq!(random_prime_seeded(&two, &two, 9).unwrap(), two);
    }

    #[test]
    fn small_interval_hits_only_primes() {
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..64 {
            let p = random_prime_seeded(&BigUint::from(8u8), &BigUint::from(16u8), seed).unwrap();
            seen.insert(p.to_u64().unwrap());
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![11, 13]);
    }

    #[test]
    fn interval_without_prime_fails() {
        let r = random_prime_seeded(&BigUint::from(24u8), &BigUint::from(28u8), 1);
        assert!(matches!(r, Err(Error::NoPrimeFound { .. })));
        assert!(random_prime_seeded(&BigUint::from(1u8), &BigUint::from(1u8), 1).is_err());
    }

    #[test]
    fn wide_interval_prime_is_in_range() {
        let lo = BigUint::one() << 20u32;
        let hi = BigUint::one() << 21u32;
        let p = random_prime_seeded(&lo, &hi, 3).unwrap();
        assert!(p >= lo && p <= hi);
        assert!(sieve(1 << 21)[p.to_usize().unwrap()]);
        let same = random_prime_seeded(&lo, &hi, 3).unwrap();
        assert_eq!(p, same);
    }

    #[test]
    fn residues() {
        assert_eq!(random_residue_seeded(&BigUint::one(), 4).unwrap(), BigUint::zero());
        assert!(random_residue_seeded(&BigUint::zero(), 4).is_err());
        let mut rng = rng_from_seed(11);
        let p = BigUint::from(7u8);
        let mut counts = [0f64; 7];
        let draws = 100_000;
        for _ in 0..draws {
            counts[random_residue(&p, &mut rng).unwrap().to_usize().unwrap()] += 1.0;
        }
        let expected = draws as f64 / 7.0;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // 6 degrees of freedom, 0.999 quantile
        assert!(chi2 < 22.46, "chi2 = {chi2}");
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|s| derive_seed(7, s)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(a.len(), b.len());
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
    }

    #[test]
    fn prime_sample_records_range() {
        let s = PrimeSample::in_octave(10, 2).unwrap();
        assert!(s.p >= s.range_lo && s.p <= s.range_hi);
        assert!(is_prime(&s.p));
    }
}
