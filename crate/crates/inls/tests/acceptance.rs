//! Acceptance gate: runs the built-in verification suite and prints one
//! pass/fail line per criterion with the measured values.

use inls::harness;

#[test]
fn acceptance_criteria() {
    let results = harness::verify();
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.name)
        .collect();
    assert!(
        failed.is_empty(),
        "failed criteria: {failed:?} — see lines above for measured values"
    );
}

/// Fault injection: a base step 10x too large must break the
/// conservation bound, demonstrating the suite detects regressions.
#[test]
fn oversized_step_fails_conservation() {
    use inls::config::RunConfig;
    let mut cfg = RunConfig::default();
    cfg.controls.dt0 = 1e-2;
    cfg.controls.record_every = 1;
    cfg.controls.t_end = 1.0;
    let rec = harness::run_scenario(&cfg, None, false).unwrap();
    let e0 = rec.records[0].energy;
    let drift = rec
        .records
        .iter()
        .map(|r| ((r.energy - e0) / e0).abs())
        .fold(0.0, f64::max);
    assert!(
        drift > 1e-6,
        "energy drift {drift:.2e} should exceed the 1e-6 bound at dt = 1e-2"
    );
}

/// Parameter validation failures surface as reported errors, not panics.
#[test]
fn out_of_range_b_is_reported() {
    use inls::config::RunConfig;
    let mut cfg = RunConfig::default();
    cfg.params.b = 2.0;
    let err = harness::run_scenario(&cfg, None, false).unwrap_err();
    assert!(err.to_string().contains("params"), "{err}");
}
