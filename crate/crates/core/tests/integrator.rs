//! Integrator checks against the eigenvector-flow closed form: seeding the
//! constant asymptotic field with its dominant eigenvector gives a pure
//! exponential, so direction and log growth are known exactly.

use hopfwind_core::model::{asymptotic_pair, field6_infinity, SystemParams, PRESET_HOCKING_STEWARTSON};
use hopfwind_core::odeint::{integrate_linear, IntegratorConfig};
use hopfwind_core::xalg::Vec6;

fn preset() -> SystemParams {
    SystemParams::preset(PRESET_HOCKING_STEWARTSON).unwrap()
}

/// Worst relative error of the reconstructed trajectory against
/// y0 * exp(sigma x) over the storage grid.
fn eigenflow_error(rel_tol: f64) -> f64 {
    let params = preset();
    let pair = asymptotic_pair(15.0.into(), &params).unwrap();
    let a_inf = field6_infinity(15.0.into(), &params);
    let y0 = pair.x_plus.normalized();
    let cfg = IntegratorConfig { rel_tol, abs_tol: rel_tol * 1e-2, ..Default::default() };
    let traj = integrate_linear(|_x, y: &Vec6| a_inf.mul_vec(y), &y0, 0.0, 1.0, &cfg).unwrap();
    let sigma = pair.sigma_plus;
    let mut worst = 0.0f64;
    for (k, &x) in traj.x_grid.iter().enumerate() {
        let exact = y0.scale((sigma * x).exp());
        let err = (traj.reconstructed(k) - exact).norm() / exact.norm();
        worst = worst.max(err);
    }
    worst
}

#[test]
fn eigenvector_flow_direction_and_growth() {
    let params = preset();
    let pair = asymptotic_pair(15.0.into(), &params).unwrap();
    assert!((pair.sigma_plus.re - 4.0).abs() < 1e-12);
    let a_inf = field6_infinity(15.0.into(), &params);
    let y0 = pair.x_plus.normalized();
    let traj = integrate_linear(
        |_x, y: &Vec6| a_inf.mul_vec(y),
        &y0,
        0.0,
        1.0,
        &IntegratorConfig::default(),
    )
    .unwrap();
    // sigma+ is real here, so the normalized state never moves
    for state in traj.states.iter() {
        assert!((*state - y0).norm() < 1e-6);
    }
    assert!((traj.last_log_scale() - 4.0).abs() < 1e-6);
}

#[test]
fn tightening_tolerance_does_not_increase_error() {
    let mut previous = f64::INFINITY;
    for rel_tol in [1e-4, 5e-5, 2.5e-5, 1.25e-5, 1e-6, 1e-8] {
        let err = eigenflow_error(rel_tol);
        assert!(
            err <= previous * 1.0 + 1e-13,
            "error {err:e} at rel_tol {rel_tol:e} exceeds previous {previous:e}"
        );
        previous = err;
    }
    assert!(eigenflow_error(1e-8) <= 1e-6);
}
