macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        #[path = $file]
        mod $name;
    };
}

example!(aldous_scan, "../examples/aldous_scan.rs");
example!(batch_run, "../examples/batch_run.rs");
example!(certify_noise, "../examples/certify_noise.rs");
example!(energy_balance, "../examples/energy_balance.rs");
example!(exact_dynamics, "../examples/exact_dynamics.rs");
example!(invariant_measure, "../examples/invariant_measure.rs");
example!(weak_continuity, "../examples/weak_continuity.rs");

#[test]
fn examples_run() {
    aldous_scan::run_example().unwrap();
    batch_run::run_example().unwrap();
    certify_noise::run_example().unwrap();
    energy_balance::run_example().unwrap();
    exact_dynamics::run_example().unwrap();
    invariant_measure::run_example().unwrap();
    weak_continuity::run_example().unwrap();
}
