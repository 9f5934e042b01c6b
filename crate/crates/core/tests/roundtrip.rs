use subsum::gen::{generate, read_witness, witness_path, write_generated, GenSpec, VARIANT_NAMES};
use subsum::io::{instance_from_json, instance_to_json, read_instance};
use subsum::oracles::brute_solve;
use subsum::solve::{solve_instance, Algorithm};
use subsum::{verify, SolveResult, SolverBudget};

fn bits_for(variant: &str, n: usize) -> u64 {
    match variant {
        // keeps n · (2^bits - 1) below 2^n - 1
        "pigeonhole_equal" => (n as u64) - 4,
        _ => 2 * n as u64,
    }
}

#[test]
fn generate_write_read_solve() {
    let dir = tempfile::tempdir().unwrap();
    for (i, variant) in VARIANT_NAMES.iter().enumerate() {
        let n = 12;
        let mut spec = GenSpec::new(variant, n, bits_for(variant, n), 100 + i as u64);
        if !variant.starts_with("pigeonhole") {
            spec = spec.planted(0.5);
        }
        let generated = generate(&spec).unwrap();
        let path = dir.path().join(format!("{variant}.json"));
        write_generated(&path, &generated).unwrap();

        let instance = read_instance(&path).unwrap();
        assert_eq!(instance, generated.instance, "{variant}");
        assert_eq!(instance_from_json(&instance_to_json(&instance)).unwrap(), instance);
        if let Some(w) = &generated.witness {
            let read = read_witness(&witness_path(&path)).unwrap();
            assert_eq!(read.solution, w.solution);
            assert!(verify(&instance, &read.solution).unwrap(), "{variant}");
        }

        let outcome = solve_instance(&instance, Algorithm::Auto, &SolverBudget::with_seed(7)).unwrap();
        match outcome.result {
            SolveResult::Found(solution) => assert!(verify(&instance, &solution).unwrap(), "{variant}"),
            other => panic!("{variant}: expected a solution, got {other:?}"),
        }
        assert!(brute_solve(&instance).unwrap().solvable);
    }
}

#[test]
fn generation_is_reproducible() {
    let spec = GenSpec::new("shifted_sums", 16, 30, 42).planted(0.4);
    let a = generate(&spec).unwrap();
    let b = generate(&spec).unwrap();
    assert_eq!(a.instance, b.instance);
    assert_eq!(a.witness.unwrap().solution, b.witness.unwrap().solution);
    let c = generate(&GenSpec::new("shifted_sums", 16, 30, 43).planted(0.4)).unwrap();
    assert_ne!(a.instance, c.instance);
}
