use super::{solve_shifted, SolveOutcome, SolveResult, SolverBudget, Trace};
use crate::error::Result;
use crate::problem::{reduce_two_subset_to_shifted, Items, Solution, TwoSubsetReduction, Variant};
use crate::scalar::Natural;

/// Two-Subset-Sum through Shifted-Sums: reduce, run the dispatcher, and map
/// the pair back to a multiplicity vector `ē ∈ {0,1,2}^n`.
pub fn solve_two_subset_sum<V: Natural>(items: &Items<V>, m: &V, budget: &SolverBudget) -> Result<SolveOutcome> {
    let reduction = reduce_two_subset_to_shifted(items, m)?;
    let shifted = match &reduction {
        TwoSubsetReduction::AllOnes(e) => {
            let mut trace = Trace::new("two_subset_via_shifted");
            trace.notes.push("target equals the total".into());
            let sol = Solution::Multiplicities { e: e.clone() };
            return Ok(SolveOutcome::new(SolveResult::Found(sol), trace));
        }
        TwoSubsetReduction::Shifted { shifted, .. } => shifted,
    };
    let Variant::ShiftedSums { shift } = shifted.variant() else {
        unreachable!("the reduction produces a Shifted-Sums instance")
    };
    let mut out = solve_shifted(items, shift, budget)?;
    out.trace.algorithm = format!("two_subset_via_{}", out.trace.algorithm);
    if let SolveResult::Found(pair) = &out.result {
        let e = reduction.back_map(pair)?;
        out.result = SolveResult::Found(Solution::Multiplicities { e });
    }
    Ok(out)
}
