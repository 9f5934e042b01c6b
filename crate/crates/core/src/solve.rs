//! One entry point over every variant and algorithm family.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::derive_seed;
use crate::oracles::brute_solve;
use crate::pigeonhole::{solve_pigeonhole_equal_with, solve_pigeonhole_modular_with};
use crate::problem::{Items, ProblemInstance, Variant};
use crate::scalar::Natural;
use crate::solvers::{
    solve_modular_subset_sum_mitm, solve_shifted, solve_shifted_mitm, solve_shifted_rep, solve_subset_sum_mitm,
    solve_subset_sum_rep, solve_two_subset_sum, SolveOutcome, SolveResult, SolverBudget, Trace,
};

/// Algorithm family requested for a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// The default for the variant: the ratio-driven dispatcher for
    /// Equal/Shifted/Two-Subset, meet-in-the-middle for Subset-Sum, the
    /// deterministic solvers for the pigeonhole variants.
    Auto,
    Mitm,
    Rep,
    Brute,
    Pigeonhole,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Auto,
        Algorithm::Mitm,
        Algorithm::Rep,
        Algorithm::Brute,
        Algorithm::Pigeonhole,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Mitm => "mitm",
            Algorithm::Rep => "rep",
            Algorithm::Brute => "brute",
            Algorithm::Pigeonhole => "pigeonhole",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// Solves an arbitrary-precision instance, narrowing to `u64` or `u128`
/// arithmetic when every sum fits with room to spare.
pub fn solve_instance(instance: &ProblemInstance<BigUint>, algo: Algorithm, budget: &SolverBudget) -> Result<SolveOutcome> {
    if let Some(small) = instance.narrow::<u64>(4) {
        solve_with(&small, algo, budget)
    } else if let Some(wide) = instance.narrow::<u128>(4) {
        solve_with(&wide, algo, budget)
    } else {
        solve_with(instance, algo, budget)
    }
}

fn unsupported<V>(variant: &Variant<V>, algo: Algorithm) -> Error {
    Error::InvalidParameter(format!("algorithm {algo} is not available for {}", variant.name()))
}

/// [`solve_instance`] for any value type.
pub fn solve_with<V: Natural>(instance: &ProblemInstance<V>, algo: Algorithm, budget: &SolverBudget) -> Result<SolveOutcome> {
    let items = instance.items();
    let variant = instance.variant();
    if algo == Algorithm::Brute {
        return brute(instance);
    }
    match (variant, algo) {
        (Variant::SubsetSum { target }, Algorithm::Auto | Algorithm::Mitm) => solve_subset_sum_mitm(items, target, budget),
        (Variant::SubsetSum { target }, Algorithm::Rep) => solve_subset_sum_rep(items, target, budget),
        (Variant::TwoSubsetSum { target }, Algorithm::Auto) => solve_two_subset_sum(items, target, budget),
        (Variant::EqualSums | Variant::PigeonholeEqualSums, Algorithm::Mitm | Algorithm::Rep) => {
            sweep_sizes(items, &V::zero(), budget, algo == Algorithm::Rep)
        }
        (Variant::EqualSums, Algorithm::Auto) => solve_shifted(items, &V::zero(), budget),
        (Variant::ShiftedSums { shift }, Algorithm::Auto) => solve_shifted(items, shift, budget),
        (Variant::ShiftedSums { shift }, Algorithm::Mitm | Algorithm::Rep) => {
            sweep_sizes(items, shift, budget, algo == Algorithm::Rep)
        }
        (Variant::PigeonholeEqualSums, Algorithm::Auto | Algorithm::Pigeonhole) => {
            solve_pigeonhole_equal_with(items, budget)
        }
        (Variant::PigeonholeModularEqualSums { modulus }, Algorithm::Auto | Algorithm::Pigeonhole) => {
            solve_pigeonhole_modular_with(items, modulus, budget)
        }
        (Variant::ModularSubsetSum { target, modulus }, Algorithm::Auto | Algorithm::Mitm) => {
            solve_modular_subset_sum_mitm(items, target, modulus, budget)
        }
        _ => Err(unsupported(variant, algo)),
    }
}

/// Runs one Shifted-Sums solver on every size `L = n, …, 1`.
///
/// With meet-in-the-middle every size is settled, so the sweep ends in
/// `Found` or `NotFound`; the representation solver never rules a size out,
/// so its sweep ends in `Found` or `Inconclusive`.
fn sweep_sizes<V: Natural>(items: &Items<V>, s: &V, budget: &SolverBudget, rep: bool) -> Result<SolveOutcome> {
    let n = items.len();
    let mut trace = Trace::new(if rep { "shifted_rep_sweep" } else { "shifted_mitm_sweep" });
    let deadline = budget.deadline();
    let mut open = 0;
    for size in (1..=n).rev() {
        if deadline.expired() {
            trace.notes.push("time cap reached".into());
            return Ok(SolveOutcome::new(SolveResult::Inconclusive, trace));
        }
        let sub = SolverBudget {
            seed: derive_seed(budget.seed, size as u64),
            ..budget.clone()
        };
        let out = if rep {
            solve_shifted_rep(items, s, size, &sub)?
        } else {
            solve_shifted_mitm(items, s, size, &sub)?
        };
        trace.absorb(&out.trace);
        match out.result {
            SolveResult::Found(sol) => {
                trace.notes.push(format!("found at size {size}"));
                return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
            }
            SolveResult::NotFound => {}
            SolveResult::Inconclusive => open += 1,
        }
    }
    let result = if open == 0 { SolveResult::NotFound } else { SolveResult::Inconclusive };
    Ok(SolveOutcome::new(result, trace))
}

fn brute<V: Natural>(instance: &ProblemInstance<V>) -> Result<SolveOutcome> {
    let mut trace = Trace::new("brute_force");
    let r = trace.time("search", |_| brute_solve(instance))?;
    trace.ratio = r.max_ratio;
    let result = match r.witness {
        Some(w) => SolveResult::Found(w),
        None => SolveResult::NotFound,
    };
    Ok(SolveOutcome::new(result, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::verify;

    fn big(v: &[u64]) -> Items<BigUint> {
        Items::new(v.iter().map(|&x| BigUint::from(x)).collect()).unwrap()
    }

    #[test]
    fn parse_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("fast".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_supported_pair_verifies() {
        let items = big(&[3, 5, 7, 9, 11, 2]);
        let cases = vec![
            (Variant::SubsetSum { target: BigUint::from(16u8) }, vec![Algorithm::Auto, Algorithm::Mitm, Algorithm::Rep]),
            (Variant::TwoSubsetSum { target: BigUint::from(50u8) }, vec![Algorithm::Auto]),
            (Variant::EqualSums, vec![Algorithm::Auto, Algorithm::Mitm, Algorithm::Rep]),
            (Variant::ShiftedSums { shift: BigUint::from(4u8) }, vec![Algorithm::Auto, Algorithm::Mitm, Algorithm::Rep]),
            (
                Variant::PigeonholeModularEqualSums { modulus: BigUint::from(40u8) },
                vec![Algorithm::Auto, Algorithm::Pigeonhole],
            ),
            (
                Variant::ModularSubsetSum { target: BigUint::from(5u8), modulus: BigUint::from(13u8) },
                vec![Algorithm::Auto, Algorithm::Mitm],
            ),
        ];
        for (variant, algos) in cases {
            let inst = ProblemInstance::new(items.clone(), variant).unwrap();
            for algo in algos.into_iter().chain([Algorithm::Brute]) {
                let out = solve_instance(&inst, algo, &SolverBudget::with_seed(1)).unwrap();
                let sol = out.result.solution().unwrap_or_else(|| panic!("{} {algo}", inst.variant().name()));
                assert!(verify(&inst, sol).unwrap());
            }
        }
        let pe = ProblemInstance::new(big(&[1, 2, 3, 4, 5]), Variant::PigeonholeEqualSums).unwrap();
        for algo in [Algorithm::Auto, Algorithm::Pigeonhole, Algorithm::Mitm, Algorithm::Rep, Algorithm::Brute] {
            let out = solve_instance(&pe, algo, &SolverBudget::default()).unwrap();
            assert!(verify(&pe, out.result.solution().unwrap()).unwrap());
        }
    }

    #[test]
    fn mitm_sweep_proves_absence() {
        let inst = ProblemInstance::new(big(&[1, 2, 4, 8, 16]), Variant::EqualSums).unwrap();
        let out = solve_instance(&inst, Algorithm::Mitm, &SolverBudget::default()).unwrap();
        assert_eq!(out.result, SolveResult::NotFound);
    }

    #[test]
    fn unsupported_pairs() {
        let inst = ProblemInstance::new(big(&[1, 2]), Variant::SubsetSum { target: BigUint::from(3u8) }).unwrap();
        assert!(matches!(
            solve_instance(&inst, Algorithm::Pigeonhole, &SolverBudget::default()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn huge_values_stay_exact() {
        let base = BigUint::from(1u8) << 200u32;
        let items = Items::new(vec![base.clone() + 1u8, base.clone() + 2u8, BigUint::from(1u8), base.clone()]).unwrap();
        let inst = ProblemInstance::new(items, Variant::EqualSums).unwrap();
        let out = solve_instance(&inst, Algorithm::Auto, &SolverBudget::default()).unwrap();
        assert!(verify(&inst, out.result.solution().unwrap()).unwrap());
    }
}
