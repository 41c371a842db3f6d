//! Reduced-size end-to-end runs of the phase pipeline and the Evans oracle:
//! the full-size protocol lives in the CLI crate's acceptance suite, these
//! keep the whole chain honest at a few hundred contour samples.

use hopfwind_core::contour::ContourSpec;
use hopfwind_core::model::{SystemParams, PRESET_HOCKING_STEWARTSON};
use hopfwind_core::odeint::IntegratorConfig;
use hopfwind_core::oracle::{count_eigenvalues, evans_function};
use hopfwind_core::phase::{phase_transition_series, transport_loop, Quadrature};
use hopfwind_core::Complex64;

fn preset() -> SystemParams {
    SystemParams::preset(PRESET_HOCKING_STEWARTSON).unwrap()
}

fn reduced_cfg() -> IntegratorConfig {
    IntegratorConfig { rel_tol: 1e-6, abs_tol: 1e-8, ..Default::default() }
}

fn run_relative_phase(center: f64, x1: f64, n: usize) -> (f64, f64, Vec<f64>) {
    let params = preset();
    let spec = ContourSpec::new(Complex64::new(center, 0.0), 0.1, n).unwrap();
    let field = transport_loop(&spec, &params, -10.0, x1, &reduced_cfg()).unwrap();
    let series = phase_transition_series(&field, Quadrature::Euler);
    (series.terminal_relative(), series.gp_initial, series.relative)
}

#[test]
fn simple_eigenvalue_transition() {
    let (terminal, gp_initial, relative) = run_relative_phase(15.0, 10.0, 400);
    assert!((terminal - 1.0).abs() < 0.02, "terminal {terminal}");
    assert!(gp_initial.abs() < 0.05, "initial phase {gp_initial}");
    assert_eq!(relative[0], 0.0);
    // the accumulation is continuous in the endpoint
    for pair in relative.windows(2) {
        assert!((pair[1] - pair[0]).abs() < 0.5);
    }
}

#[test]
fn double_eigenvalue_transition() {
    let (terminal, gp_initial, _) = run_relative_phase(0.0, 10.0, 400);
    assert!((terminal - 2.0).abs() < 0.02, "terminal {terminal}");
    assert!(gp_initial.abs() < 0.05);
}

#[test]
fn empty_contour_stays_flat() {
    let (terminal, _, relative) = run_relative_phase(5.0, 10.0, 200);
    assert!(terminal.abs() < 0.02, "terminal {terminal}");
    for r in relative {
        assert!(r.abs() < 0.25, "spurious phase accumulation {r}");
    }
}

#[test]
fn oracle_counts_match_known_spectrum() {
    let params = preset();
    let cfg = reduced_cfg();
    let count = |center: f64, n: usize| {
        let spec = ContourSpec::new(Complex64::new(center, 0.0), 0.1, n).unwrap();
        count_eigenvalues(&spec, &params, -10.0, 10.0, &cfg).unwrap()
    };
    assert_eq!(count(15.0, 400), 1);
    assert_eq!(count(5.0, 200), 0);
}

#[test]
fn evans_value_away_from_spectrum_is_nonzero() {
    let params = preset();
    let (value, _log_mag) =
        evans_function(Complex64::new(5.0, 0.0), &params, -10.0, 10.0, &reduced_cfg()).unwrap();
    assert!(value.norm() > 1e-6, "Evans value {value} suspiciously small at lambda = 5");
}
