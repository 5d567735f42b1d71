//! Acceptance suite: the full verification battery, one test per
//! criterion, each printing its pass/fail line. Run with
//! `cargo test -p sqrtlab-cli --test acceptance` (release recommended);
//! add `-- --nocapture` to see the lines for passing criteria too.

use sqrtlab_cli::verify::{self, Level};

fn run(criterion: fn(Level) -> verify::CriterionOutcome) {
    let outcome = criterion(Level::Full);
    println!("{}", outcome.line());
    assert!(outcome.passed, "{}", outcome.line());
}

#[test]
fn criterion_01_root_oracle_equivalence() {
    run(verify::criterion_root_oracle);
}

#[test]
fn criterion_02_energy_engine_agreement() {
    run(verify::criterion_energy_engines);
}

#[test]
fn criterion_03_spectral_identity() {
    run(verify::criterion_spectral_identity);
}

#[test]
fn criterion_04_first_moment_identity() {
    run(verify::criterion_first_moment);
}

#[test]
fn criterion_05_inequality_chain() {
    run(verify::criterion_inequality_chain);
}

#[test]
fn criterion_06_lattice_certificates() {
    run(verify::criterion_lattice_certificates);
}

#[test]
fn criterion_07_reduction_tiling() {
    run(verify::criterion_reduction_tiling);
}

#[test]
fn criterion_08_bilinear_dual_path() {
    run(verify::criterion_bilinear_dual_path);
}

#[test]
fn criterion_09_weyl_sanity() {
    run(verify::criterion_weyl_sanity);
}

#[test]
fn criterion_10_large_sieve_certificate() {
    run(verify::criterion_large_sieve);
}

#[test]
fn criterion_11_energy_growth_baseline() {
    run(verify::criterion_growth_baseline);
}

#[test]
fn full_suite_within_budget() {
    // The whole battery must stay within the 15-minute envelope; on a
    // typical desktop it finishes in well under a minute.
    let started = std::time::Instant::now();
    let outcomes = verify::run_all(Level::Full);
    let elapsed = started.elapsed().as_secs_f64();
    for o in &outcomes {
        println!("{}", o.line());
        assert!(o.passed, "{}", o.line());
    }
    assert!(elapsed <= 900.0, "suite took {elapsed:.1}s, budget is 900s");
}
