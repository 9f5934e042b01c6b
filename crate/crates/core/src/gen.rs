//! Random instance generation with optional planted solutions.
//!
//! A planted witness is written next to the instance file rather than inside
//! it, so solvers never see it.

use std::path::{Path, PathBuf};

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{write_instance, InstanceFile};
use crate::numtheory::{rng_from_seed, SeededRng};
use crate::problem::{verify, Items, ProblemInstance, Solution, Subset, Variant};
use crate::VERSION;

/// Variant names accepted by [`GenSpec`], as written in instance files.
pub const VARIANT_NAMES: [&str; 7] = [
    "subset_sum",
    "two_subset_sum",
    "equal_sums",
    "shifted_sums",
    "pigeonhole_equal",
    "pigeonhole_modular",
    "modular_subset_sum",
];

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub variant: String,
    pub n: usize,
    /// Items are drawn uniformly from `[1, 2^bits)`.
    pub bits: u64,
    /// Planted solution size as a fraction of `n`.
    pub plant: Option<f64>,
    /// Modulus for the modular variants; drawn at random when absent.
    pub modulus: Option<BigUint>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(variant: &str, n: usize, bits: u64, seed: u64) -> Self {
        Self {
            variant: variant.to_string(),
            n,
            bits,
            plant: None,
            modulus: None,
            seed,
        }
    }

    pub fn planted(mut self, ratio: f64) -> Self {
        self.plant = Some(ratio);
        self
    }
}

/// Sidecar record of a planted solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub variant: String,
    pub seed: u64,
    pub version: String,
    pub plant: f64,
    pub solution: Solution,
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: ProblemInstance<BigUint>,
    pub witness: Option<Witness>,
}

/// `instance.json` → `instance.witness.json`.
pub fn witness_path(instance_path: &Path) -> PathBuf {
    instance_path.with_extension("witness.json")
}

fn random_items(rng: &mut SeededRng, n: usize, bits: u64) -> Vec<BigUint> {
    let one = BigUint::one();
    let hi = BigUint::one() << bits;
    (0..n).map(|_| rng.gen_biguint_range(&one, &hi)).collect()
}

fn random_below(rng: &mut SeededRng, hi: &BigUint) -> BigUint {
    if hi.is_zero() {
        BigUint::zero()
    } else {
        rng.gen_biguint_below(hi)
    }
}

fn plant_size(n: usize, ratio: f64, least: usize) -> Result<usize> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidParameter(format!("plant ratio {ratio} must lie in [0, 1]")));
    }
    let size = (ratio * n as f64).round() as usize;
    if size < least {
        return Err(Error::InvalidParameter(format!(
            "plant ratio {ratio} gives {size} planted items for n = {n}; at least {least} are needed"
        )));
    }
    Ok(size)
}

fn subset_of(mut members: Vec<usize>) -> Subset {
    members.sort_unstable();
    Subset::from_sorted_unchecked(members)
}

fn sum(values: &[BigUint], members: &[usize]) -> BigUint {
    members.iter().map(|&i| &values[i - 1]).sum()
}

/// Draws disjoint `S1`, `S2`, both non-empty, with `|S1| + |S2| = size`.
fn disjoint_pair(rng: &mut SeededRng, n: usize, size: usize) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.shuffle(rng);
    let k1 = size.div_ceil(2);
    (idx[..k1].to_vec(), idx[k1..size].to_vec())
}

/// Raises one item of the lighter side so that `Σ(S1) = Σ(S2) + s`.
fn balance(values: &mut [BigUint], s1: &[usize], s2: &[usize], s: &BigUint) {
    let left = sum(values, s1);
    let right = sum(values, s2) + s;
    if left > right {
        values[s2[0] - 1] += left - right;
    } else {
        values[s1[0] - 1] += right - left;
    }
}

/// Generates an instance, planting a solution of size `plant · n` when asked.
///
/// Items are uniform in `[1, 2^bits)`; planting a pair raises one item, which
/// may then exceed `2^bits`. Pigeonhole variants take no plant and are
/// rejected when their existence condition fails.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if spec.bits == 0 || spec.bits > 4096 {
        return Err(Error::InvalidParameter(format!("bits = {} must lie in 1..=4096", spec.bits)));
    }
    let mut rng = rng_from_seed(spec.seed);
    let mut values = random_items(&mut rng, n, spec.bits);
    let mut solution = None;
    let variant = match spec.variant.as_str() {
        "subset_sum" => {
            let target = match spec.plant {
                Some(r) => {
                    let mut idx: Vec<usize> = (1..=n).collect();
                    idx.shuffle(&mut rng);
                    idx.truncate(plant_size(n, r, 0)?);
                    let s = subset_of(idx);
                    let t = sum(&values, s.members());
                    solution = Some(Solution::single(s));
                    t
                }
                None => {
                    let w: BigUint = values.iter().sum();
                    random_below(&mut rng, &(w + 1u8))
                }
            };
            Variant::SubsetSum { target }
        }
        "two_subset_sum" => {
            let w: BigUint = values.iter().sum();
            let target = match spec.plant {
                Some(r) => {
                    let size = plant_size(n, r, 1)?;
                    let mut idx: Vec<usize> = (0..n).collect();
                    idx.shuffle(&mut rng);
                    let mut e = vec![0u8; n];
                    for &i in &idx[..size] {
                        e[i] = rng.gen_range(1..=2);
                    }
                    if e.iter().all(|&x| x == 2) {
                        e[idx[0]] = 1;
                    }
                    let t = values.iter().zip(&e).map(|(a, &x)| a * x).sum();
                    solution = Some(Solution::Multiplicities { e });
                    t
                }
                None => rng.gen_biguint_range(&BigUint::one(), &(w * 2u8)),
            };
            Variant::TwoSubsetSum { target }
        }
        "equal_sums" | "shifted_sums" => {
            let shifted = spec.variant == "shifted_sums";
            let w: BigUint = values.iter().sum();
            let mut shift = if shifted { random_below(&mut rng, &w) } else { BigUint::zero() };
            if let Some(r) = spec.plant {
                let (s1, s2) = disjoint_pair(&mut rng, n, plant_size(n, r, 2)?);
                if shifted {
                    shift = random_below(&mut rng, &(BigUint::one() << spec.bits));
                }
                balance(&mut values, &s1, &s2, &shift);
                solution = Some(Solution::pair(subset_of(s1), subset_of(s2)));
            }
            if shifted {
                Variant::ShiftedSums { shift }
            } else {
                Variant::EqualSums
            }
        }
        "pigeonhole_equal" | "pigeonhole_modular" if spec.plant.is_some() => {
            return Err(Error::InvalidParameter("pigeonhole instances always have solutions; drop the plant".into()));
        }
        "pigeonhole_equal" => Variant::PigeonholeEqualSums,
        "pigeonhole_modular" => {
            let modulus = match &spec.modulus {
                Some(q) => q.clone(),
                None => {
                    let hi = BigUint::one() << n;
                    rng.gen_biguint_range(&(BigUint::one() << (n - 1)), &hi)
                }
            };
            Variant::PigeonholeModularEqualSums { modulus }
        }
        "modular_subset_sum" => {
            let modulus = match &spec.modulus {
                Some(q) => q.clone(),
                None => rng.gen_biguint_range(&BigUint::from(2u8), &((BigUint::one() << spec.bits) + 1u8)),
            };
            if modulus.is_zero() {
                return Err(Error::InvalidParameter("modulus must be positive".into()));
            }
            let target = match spec.plant {
                Some(r) => {
                    let mut idx: Vec<usize> = (1..=n).collect();
                    idx.shuffle(&mut rng);
                    idx.truncate(plant_size(n, r, 0)?);
                    let s = subset_of(idx);
                    let t = sum(&values, s.members()) % &modulus;
                    solution = Some(Solution::single(s));
                    t
                }
                None => random_below(&mut rng, &modulus),
            };
            Variant::ModularSubsetSum { target, modulus }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown variant {other:?}; expected one of {}",
                VARIANT_NAMES.join(", ")
            )))
        }
    };
    let instance = ProblemInstance::new(Items::new(values)?, variant)?;
    let witness = match solution {
        Some(sol) => {
            if !verify(&instance, &sol)? {
                return Err(Error::ContractViolation("planted solution does not verify".into()));
            }
            Some(Witness {
                variant: spec.variant.clone(),
                seed: spec.seed,
                version: VERSION.to_string(),
                plant: spec.plant.unwrap_or_default(),
                solution: sol,
            })
        }
        None => None,
    };
    Ok(Generated { instance, witness })
}

/// Writes the instance and, when planted, its sidecar witness.
pub fn write_generated(path: &Path, generated: &Generated) -> Result<()> {
    write_instance(path, &generated.instance)?;
    if let Some(w) = &generated.witness {
        std::fs::write(witness_path(path), serde_json::to_string_pretty(w)? + "\n")?;
    }
    Ok(())
}

pub fn read_witness(path: &Path) -> Result<Witness> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

/// The instance in file form with the generator's seed and version, for
/// embedding in reports.
pub fn describe(generated: &Generated) -> serde_json::Value {
    serde_json::json!({
        "instance": InstanceFile::from_instance(&generated.instance),
        "planted": generated.witness.is_some(),
        "version": VERSION,
    })
}
