//! Acceptance checks, one printed line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use coherent_risk::selftest::{run_check, CheckOutcome};

fn check(id: usize) -> CheckOutcome {
    let outcome = run_check(id).expect("known check");
    println!("{outcome}");
    outcome
}

macro_rules! criterion {
    ($name:ident, $id:expr) => {
        #[test]
        fn $name() {
            let outcome = check($id);
            assert!(outcome.passed, "{outcome}");
        }
    };
}

criterion!(c01_coherence_axioms, 1);
criterion!(c02_choquet_equals_spectral, 2);
criterion!(c03_sandwich_and_equivalence_chain, 3);
criterion!(c04_cvar_type_collapse, 4);
criterion!(c05_rim_collapse, 5);
criterion!(c06_dutch_representations, 6);
criterion!(c07_rim_variational_form, 7);
criterion!(c08_comonotone_additivity, 8);
criterion!(c09_hardy_littlewood_brute_force, 9);
criterion!(c10_evaluation_suite, 10);
criterion!(c11_heavy_tail_experiment, 11);
criterion!(c12_optimizer, 12);
criterion!(c13_combination, 13);
