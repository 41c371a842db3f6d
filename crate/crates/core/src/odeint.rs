//! Adaptive Dormand-Prince 5(4) integration of non-autonomous linear complex
//! systems, with fourth-order dense output on a fixed storage grid and
//! overflow-safe rescaling of the running state.

use alloc::vec::Vec;

#[allow(unused_imports)] // needed by no_std builds, shadowed when std is linked
use num_traits::Float;
use thiserror::Error;

use crate::xalg::CVec;

#[derive(Debug, Error, PartialEq)]
pub enum IntegrateError {
    #[error("integration span must satisfy x0 < x1")]
    InvalidSpan,
    #[error("initial state must be nonzero")]
    ZeroInitialState,
    #[error("tolerances and storage step must be positive")]
    InvalidConfig,
    #[error("step budget exhausted near x = {x}")]
    StepBudgetExceeded { x: f64 },
    #[error("state became non-finite near x = {x} (rescaling disabled?)")]
    NonFiniteState { x: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Spacing of the storage grid the trajectory is reported on.
    pub h_store: f64,
    /// Budget on attempted (accepted + rejected) steps.
    pub max_steps: usize,
    /// Divide stored states by their norm, accumulating log scales.
    pub rescale: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            h_store: 0.04,
            max_steps: 1_000_000,
            rescale: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AdaptiveStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// A trajectory sampled on the storage grid.
///
/// With rescaling on, `states[k]` has unit norm and the underlying solution
/// at grid point k is `states[k] * exp(log_scale[k])`; with rescaling off,
/// `states` hold the raw solution and `log_scale` is identically zero.
#[derive(Clone, Debug)]
pub struct GridTrajectory<const N: usize> {
    pub x_grid: Vec<f64>,
    pub states: Vec<CVec<N>>,
    pub log_scale: Vec<f64>,
    pub stats: AdaptiveStats,
}

impl<const N: usize> GridTrajectory<N> {
    /// The unscaled solution at grid index k.
    pub fn reconstructed(&self, k: usize) -> CVec<N> {
        self.states[k].scale_re(self.log_scale[k].exp())
    }

    pub fn last_state(&self) -> &CVec<N> {
        self.states.last().expect("trajectory has at least one grid point")
    }

    pub fn last_log_scale(&self) -> f64 {
        *self.log_scale.last().expect("trajectory has at least one grid point")
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 7] =
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
// b - b_hat; weighting the stage values by these yields the embedded error
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// dense-output weights of the quartic interpolant
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 10.0;

fn linear_combination<const N: usize>(
    base: &CVec<N>,
    h: f64,
    stages: &[CVec<N>; 7],
    weights: &[f64],
) -> CVec<N> {
    let mut out = *base;
    for (k, &w) in stages.iter().zip(weights) {
        if w != 0.0 {
            for i in 0..N {
                out.0[i] += k.0[i] * (h * w);
            }
        }
    }
    out
}

/// Integrate `y' = field(x, y)` from x0 to x1 with an embedded 5(4) pair and
/// error-controlled steps, reporting the state at every storage grid point
/// `x0 + k * h_store` through the pair's quartic dense interpolant.
pub fn integrate_linear<const N: usize, F>(
    field: F,
    y0: &CVec<N>,
    x0: f64,
    x1: f64,
    cfg: &IntegratorConfig,
) -> Result<GridTrajectory<N>, IntegrateError>
where
    F: Fn(f64, &CVec<N>) -> CVec<N>,
{
    if !(x0 < x1) || !x0.is_finite() || !x1.is_finite() {
        return Err(IntegrateError::InvalidSpan);
    }
    if y0.norm_sqr() == 0.0 {
        return Err(IntegrateError::ZeroInitialState);
    }
    if !(cfg.rel_tol > 0.0 && cfg.abs_tol > 0.0 && cfg.h_store > 0.0) {
        return Err(IntegrateError::InvalidConfig);
    }

    let span = x1 - x0;
    let n_grid = ((span / cfg.h_store) + 1e-9).floor() as usize + 1;
    let x_grid: Vec<f64> = (0..n_grid).map(|k| x0 + k as f64 * cfg.h_store).collect();

    let mut states = Vec::with_capacity(n_grid);
    let mut log_scale = Vec::with_capacity(n_grid);
    let mut stats = AdaptiveStats::default();

    let mut x = x0;
    let mut y = *y0;
    let mut scale_log = 0.0f64;
    let mut k1 = field(x, &y);

    let store = |y_at: &CVec<N>,
                 scale_log: f64,
                 states: &mut Vec<CVec<N>>,
                 log_scale: &mut Vec<f64>| {
        if cfg.rescale {
            let norm = y_at.norm();
            states.push(y_at.scale_re(1.0 / norm));
            log_scale.push(scale_log + norm.ln());
        } else {
            states.push(*y_at);
            log_scale.push(0.0);
        }
    };

    store(&y, scale_log, &mut states, &mut log_scale);
    let mut next_store = 1usize;

    let mut h = (1e-3 * span).min(cfg.h_store).min(span);
    let mut rejected_last = false;
    let mut attempts = 0usize;

    while x < x1 - 1e-12 * span.max(1.0) {
        if attempts >= cfg.max_steps {
            return Err(IntegrateError::StepBudgetExceeded { x });
        }
        attempts += 1;
        if x + h > x1 {
            h = x1 - x;
        }

        // stages (k1 carried over: first-same-as-last)
        let mut k = [CVec::zero(); 7];
        k[0] = k1;
        k[1] = field(x + C[1] * h, &linear_combination(&y, h, &k, &A2));
        k[2] = field(x + C[2] * h, &linear_combination(&y, h, &k, &A3));
        k[3] = field(x + C[3] * h, &linear_combination(&y, h, &k, &A4));
        k[4] = field(x + C[4] * h, &linear_combination(&y, h, &k, &A5));
        k[5] = field(x + C[5] * h, &linear_combination(&y, h, &k, &A6));
        let y_new = linear_combination(&y, h, &k, &B);
        k[6] = field(x + h, &y_new);

        if !y_new.is_finite() {
            return Err(IntegrateError::NonFiniteState { x });
        }

        // weighted rms error of the embedded difference
        let mut err_sq = 0.0f64;
        for i in 0..N {
            let mut e = num_complex::Complex64::new(0.0, 0.0);
            for (stage, &w) in k.iter().zip(&E) {
                if w != 0.0 {
                    e += stage.0[i] * (h * w);
                }
            }
            let tol = cfg.abs_tol + cfg.rel_tol * y.0[i].norm().max(y_new.0[i].norm());
            err_sq += (e.norm() / tol).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();

        if !err.is_finite() {
            return Err(IntegrateError::NonFiniteState { x });
        }

        if err <= 1.0 {
            stats.accepted += 1;
            // dense output for grid points inside this step
            if next_store < n_grid && x_grid[next_store] <= x + h + 1e-12 {
                let dy = y_new - y;
                let cont3 = k[0].scale_re(h) - dy;
                let cont4 = dy - k[6].scale_re(h) - cont3;
                let mut cont5 = CVec::zero();
                for (stage, &w) in k.iter().zip(&D) {
                    if w != 0.0 {
                        for i in 0..N {
                            cont5.0[i] += stage.0[i] * (h * w);
                        }
                    }
                }
                while next_store < n_grid && x_grid[next_store] <= x + h + 1e-12 {
                    let theta = ((x_grid[next_store] - x) / h).clamp(0.0, 1.0);
                    let mut interp = cont4 + cont5.scale_re(1.0 - theta);
                    interp = cont3 + interp.scale_re(theta);
                    interp = dy + interp.scale_re(1.0 - theta);
                    interp = y + interp.scale_re(theta);
                    store(&interp, scale_log, &mut states, &mut log_scale);
                    next_store += 1;
                }
            }
            x += h;
            y = y_new;
            k1 = k[6];
            if cfg.rescale {
                // linear field: dividing the state and its derivative by a
                // positive scalar leaves the flow invariant
                let norm = y.norm();
                if norm > 0.0 && norm.is_finite() {
                    y = y.scale_re(1.0 / norm);
                    k1 = k1.scale_re(1.0 / norm);
                    scale_log += norm.ln();
                }
            }
            let grow = if rejected_last { 1.0 } else { MAX_SCALE };
            h *= (SAFETY * err.max(1e-16).powf(-0.2)).clamp(MIN_SCALE, grow);
            rejected_last = false;
        } else {
            stats.rejected += 1;
            rejected_last = true;
            h *= (SAFETY * err.powf(-0.2)).clamp(MIN_SCALE, 1.0);
        }
    }

    // floating-point slack can leave the final grid point unharvested
    while next_store < n_grid {
        store(&y, scale_log, &mut states, &mut log_scale);
        next_store += 1;
    }

    Ok(GridTrajectory { x_grid, states, log_scale, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xalg::Vec6;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_field_is_constant() {
        let y0 = Vec6::basis(0);
        let traj = integrate_linear(
            |_x, _y: &Vec6| Vec6::zero(),
            &y0,
            0.0,
            1.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert_eq!(traj.x_grid.len(), 26);
        for (state, log) in traj.states.iter().zip(&traj.log_scale) {
            assert!((*state - y0).norm() < 1e-12);
            assert!(log.abs() < 1e-12);
        }
    }

    #[test]
    fn scalar_field_is_exact_exponential() {
        let lam = c(0.5, 2.0);
        let y0 = Vec6::basis(2);
        let traj = integrate_linear(
            |_x, y: &Vec6| y.scale(lam),
            &y0,
            0.0,
            1.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        // direction constant up to the accumulated phase, log growth = Re(lam)
        assert!((traj.last_log_scale() - lam.re).abs() < 1e-6);
        let expect = y0.scale((lam.im * c(0.0, 1.0)).exp());
        assert!((*traj.last_state() - expect).norm() < 1e-6);
    }

    #[test]
    fn grid_spacing_is_h_store() {
        let cfg = IntegratorConfig { h_store: 0.04, ..Default::default() };
        let traj =
            integrate_linear(|_x, y: &Vec6| *y, &Vec6::basis(0), -10.0, 10.0, &cfg).unwrap();
        assert_eq!(traj.x_grid.len(), 501);
        for pair in traj.x_grid.windows(2) {
            assert!((pair[1] - pair[0] - 0.04).abs() < 1e-12);
        }
        assert!((traj.x_grid[500] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn linearity_in_initial_state() {
        let lam = c(1.3, -0.7);
        let alpha = c(2.0, -3.0);
        let run = |y0: &Vec6| {
            integrate_linear(
                |x, y: &Vec6| y.scale(lam * c(x.cos(), 0.0)),
                y0,
                0.0,
                1.0,
                &IntegratorConfig::default(),
            )
            .unwrap()
        };
        let y0 = Vec6::from_re([0.3, -0.2, 0.9, 0.1, 0.0, 0.5]);
        let base = run(&y0);
        let scaled = run(&y0.scale(alpha));
        let k = base.states.len() - 1;
        let lhs = scaled.reconstructed(k);
        let rhs = base.reconstructed(k).scale(alpha);
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-8);
    }

    #[test]
    fn rescale_neutrality() {
        let lam = c(2.0, 5.0);
        let field = |x: f64, y: &Vec6| y.scale(lam * c(1.0 + 0.2 * x, 0.0));
        let y0 = Vec6::from_re([1.0, 0.5, 0.0, -0.3, 0.0, 0.2]).normalized();
        let cfg_tight = IntegratorConfig { rel_tol: 1e-10, abs_tol: 1e-12, ..Default::default() };
        let on = integrate_linear(field, &y0, 0.0, 1.0, &cfg_tight).unwrap();
        let off = integrate_linear(field, &y0, 0.0, 1.0, &IntegratorConfig {
            rescale: false,
            ..cfg_tight
        })
        .unwrap();
        for k in 0..on.states.len() {
            let a = on.reconstructed(k);
            let b = off.reconstructed(k);
            assert!((a - b).norm() / b.norm().max(1e-30) < 1e-8, "mismatch at grid {k}");
            assert_eq!(off.log_scale[k], 0.0);
        }
    }

    #[test]
    fn step_budget_error() {
        let cfg = IntegratorConfig { max_steps: 3, ..Default::default() };
        let err = integrate_linear(|_x, y: &Vec6| y.scale(c(40.0, 0.0)), &Vec6::basis(0), 0.0, 50.0, &cfg)
            .unwrap_err();
        assert!(matches!(err, IntegrateError::StepBudgetExceeded { .. }));
    }

    #[test]
    fn overflow_detected_without_rescaling() {
        let cfg = IntegratorConfig { rescale: false, ..Default::default() };
        let err = integrate_linear(
            |_x, y: &Vec6| y.scale(c(900.0, 0.0)),
            &Vec6::basis(0),
            0.0,
            1.0,
            &cfg,
        )
        .unwrap_err();
        assert!(matches!(err, IntegrateError::NonFiniteState { .. }));
    }

    #[test]
    fn invalid_inputs_rejected() {
        let cfg = IntegratorConfig::default();
        let field = |_x: f64, y: &Vec6| *y;
        assert_eq!(
            integrate_linear(field, &Vec6::basis(0), 1.0, 0.0, &cfg).unwrap_err(),
            IntegrateError::InvalidSpan
        );
        assert_eq!(
            integrate_linear(field, &Vec6::zero(), 0.0, 1.0, &cfg).unwrap_err(),
            IntegrateError::ZeroInitialState
        );
        let bad = IntegratorConfig { rel_tol: 0.0, ..cfg };
        assert_eq!(
            integrate_linear(field, &Vec6::basis(0), 0.0, 1.0, &bad).unwrap_err(),
            IntegrateError::InvalidConfig
        );
    }
}
