use proptest::prelude::*;
use subsum::oracles::brute_solve;
use subsum::solve::{solve_with, Algorithm};
use subsum::{verify, Items, ProblemInstance, SolveResult, SolverBudget, Variant, WordInstance};

fn instance(values: Vec<u64>, variant: Variant<u64>) -> Option<WordInstance> {
    ProblemInstance::new(Items::new(values).ok()?, variant).ok()
}

/// Checks one solver answer against the exhaustive oracle. An inconclusive
/// answer is accepted only on unsolvable instances.
fn agrees(inst: &WordInstance, algo: Algorithm, seed: u64) -> Result<(), TestCaseError> {
    let truth = brute_solve(inst).unwrap().solvable;
    let outcome = solve_with(inst, algo, &SolverBudget::with_seed(seed)).unwrap();
    match outcome.result {
        SolveResult::Found(s) => {
            prop_assert!(truth);
            prop_assert!(verify(inst, &s).unwrap());
        }
        SolveResult::NotFound => prop_assert!(!truth),
        SolveResult::Inconclusive => prop_assert!(!truth),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subset_sum_matches_oracle(values in prop::collection::vec(1u64..4096, 1..13), pick in any::<u16>(), seed in any::<u64>()) {
        // target is either a subset sum or an arbitrary value
        let target = if pick % 2 == 0 {
            values.iter().enumerate().filter(|(i, _)| pick >> (i % 16) & 1 == 1).map(|(_, v)| v).sum()
        } else {
            u64::from(pick) % values.iter().sum::<u64>().max(1)
        };
        if let Some(inst) = instance(values, Variant::SubsetSum { target }) {
            for algo in [Algorithm::Auto, Algorithm::Mitm, Algorithm::Rep] {
                agrees(&inst, algo, seed)?;
            }
        }
    }

    #[test]
    fn equal_sums_matches_oracle(values in prop::collection::vec(1u64..2048, 2..12), seed in any::<u64>()) {
        if let Some(inst) = instance(values, Variant::EqualSums) {
            for algo in [Algorithm::Auto, Algorithm::Mitm, Algorithm::Rep] {
                agrees(&inst, algo, seed)?;
            }
        }
    }

    #[test]
    fn shifted_sums_matches_oracle(values in prop::collection::vec(1u64..512, 2..11), shift in 0u64..600, seed in any::<u64>()) {
        if let Some(inst) = instance(values, Variant::ShiftedSums { shift }) {
            for algo in [Algorithm::Auto, Algorithm::Mitm, Algorithm::Rep] {
                agrees(&inst, algo, seed)?;
            }
        }
    }

    #[test]
    fn two_subset_sum_matches_oracle(values in prop::collection::vec(1u64..256, 1..9), target in 0u64..2000, seed in any::<u64>()) {
        if let Some(inst) = instance(values, Variant::TwoSubsetSum { target }) {
            agrees(&inst, Algorithm::Auto, seed)?;
        }
    }

    #[test]
    fn pigeonhole_modular_always_solved(values in prop::collection::vec(1u64..10_000, 1..14), q in 1u64..200, seed in any::<u64>()) {
        let n = values.len() as u32;
        let q = q.min((1u64 << n) - 1).max(1);
        if let Some(inst) = instance(values, Variant::PigeonholeModularEqualSums { modulus: q }) {
            let outcome = solve_with(&inst, Algorithm::Pigeonhole, &SolverBudget::with_seed(seed)).unwrap();
            let s = outcome.result.solution().cloned().expect("pigeonhole instances are always solvable");
            prop_assert!(verify(&inst, &s).unwrap());
        }
    }
}
