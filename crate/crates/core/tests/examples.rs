//! Every example is also a smoke test: its `run` must complete without error.

macro_rules! example_test {
    ($name:ident, $path:literal) => {
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run().unwrap();
        }
    };
}

example_test!(equation_of_state, "../examples/equation_of_state.rs");
example_test!(relative_energy, "../examples/relative_energy.rs");
example_test!(nsf_run, "../examples/nsf_run.rs");
example_test!(brenner_run, "../examples/brenner_run.rs");
example_test!(young_measure, "../examples/young_measure.rs");
example_test!(dmv_verify, "../examples/dmv_verify.rs");
example_test!(sweep, "../examples/sweep.rs");
example_test!(weak_strong, "../examples/weak_strong.rs");
