//! Independent eigenvalue count by the classical Evans-function argument
//! principle: transport the unstable 2-form from the left and the stable
//! 2-form from the right to the matching point x = 0, pair them into a
//! scalar with the 4-form pairing, and read off the winding of that scalar
//! around the contour.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed by no_std builds, shadowed when std is linked
use num_traits::Float;
use thiserror::Error;

use crate::contour::ContourSpec;
use crate::model::{asymptotic_pair, field6_apply, SpectralPoint, SystemParams};
use crate::odeint::{integrate_linear, GridTrajectory, IntegrateError, IntegratorConfig};
use crate::phase::{eigenvector_loop, PhaseError, BRANCH_POINT_TOL};
use crate::xalg::{wedge4_pair, Vec6};

/// Winding numbers are rejected when the total argument is farther than
/// this from an integer multiple of 2 pi.
pub const WINDING_RESIDUAL_TOL: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum EvansError {
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error("Evans matching requires x0 < 0 < x1")]
    InvalidMatchingSpan,
    #[error("integration failed at contour sample {index}: {source}")]
    Integration {
        index: usize,
        #[source]
        source: IntegrateError,
    },
    #[error("Evans value vanished at contour sample {index}: eigenvalue on the contour")]
    ZeroOnContour { index: usize },
    #[error("argument jump of at least pi after contour sample {index}: contour under-resolved")]
    ArgumentJump { index: usize },
    #[error("winding residual {residual} exceeds {WINDING_RESIDUAL_TOL}: increase n_samples")]
    IllConditionedWinding { residual: f64 },
}

/// Evans-function values around a contour, in the integrator's rescaled
/// gauge, with unwrapped arguments for winding extraction.
///
/// `unwrapped_arg` has one entry per sample plus a closing entry for the
/// return to sample 0, so the winding is
/// `(unwrapped_arg[n] - unwrapped_arg[0]) / 2 pi`.
#[derive(Clone, Debug)]
pub struct EvansTrace {
    pub lambdas: Vec<Complex64>,
    pub values: Vec<Complex64>,
    /// Accumulated log scales; `|values[j]| * exp(log_magnitudes[j])`
    /// reconstructs the unscaled magnitude.
    pub log_magnitudes: Vec<f64>,
    pub unwrapped_arg: Vec<f64>,
}

/// The loop of dominant stable eigenvectors (most negative real part) over
/// the contour: Grassmann coordinates of the stable subspace at the right
/// end, used to seed the backward transport.
pub fn stable_initial_loop(
    spec: &ContourSpec,
    params: &SystemParams,
) -> Result<Vec<Vec6>, PhaseError> {
    eigenvector_loop(spec, params, |pair| pair.x_minus)
}

fn half_grid_config(cfg: &IntegratorConfig, span: f64) -> IntegratorConfig {
    // Evans legs only need their endpoint; a two-interval grid guarantees
    // the matching point is hit exactly whatever the span divisibility.
    IntegratorConfig { h_store: span / 2.0, ..*cfg }
}

/// One Evans evaluation from precomputed seed vectors.
///
/// Returns the paired value in the rescaled gauge and the accumulated log
/// magnitude. The stable leg runs backward from x1 to the matching point 0
/// as a forward integration in the reflected variable.
pub fn evans_sample_from_seeds(
    lambda: Complex64,
    unstable_seed: &Vec6,
    stable_seed: &Vec6,
    params: &SystemParams,
    x0: f64,
    x1: f64,
    cfg: &IntegratorConfig,
) -> Result<(Complex64, f64), IntegrateError> {
    let point = SpectralPoint(lambda);
    let forward: GridTrajectory<6> = integrate_linear(
        |x, y: &Vec6| field6_apply(x, point, params, y),
        unstable_seed,
        x0,
        0.0,
        &half_grid_config(cfg, -x0),
    )?;
    let backward: GridTrajectory<6> = integrate_linear(
        |t, y: &Vec6| -field6_apply(x1 - t, point, params, y),
        stable_seed,
        0.0,
        x1,
        &half_grid_config(cfg, x1),
    )?;
    let value = wedge4_pair(forward.last_state(), backward.last_state());
    let log_mag = forward.last_log_scale() + backward.last_log_scale();
    Ok((value, log_mag))
}

/// Evans value at a single spectral point (seeds built from the analytic
/// eigenvectors at that point).
pub fn evans_function(
    lambda: Complex64,
    params: &SystemParams,
    x0: f64,
    x1: f64,
    cfg: &IntegratorConfig,
) -> Result<(Complex64, f64), EvansError> {
    if !(x0 < 0.0 && 0.0 < x1) {
        return Err(EvansError::InvalidMatchingSpan);
    }
    let pair = asymptotic_pair(SpectralPoint(lambda), params)
        .map_err(|e| EvansError::Phase(PhaseError::from_model(e, 0)))?;
    if pair.sigma_plus.norm() < BRANCH_POINT_TOL {
        return Err(EvansError::Phase(PhaseError::BranchPointProximity {
            index: 0,
            sigma_abs: pair.sigma_plus.norm(),
        }));
    }
    evans_sample_from_seeds(lambda, &pair.x_plus, &pair.x_minus, params, x0, x1, cfg)
        .map_err(|source| EvansError::Integration { index: 0, source })
}

/// Build a trace from per-sample values, unwrapping arguments and checking
/// the nonvanishing and continuity invariants.
pub fn trace_from_parts(
    lambdas: Vec<Complex64>,
    values: Vec<Complex64>,
    log_magnitudes: Vec<f64>,
) -> Result<EvansTrace, EvansError> {
    let n = values.len();
    debug_assert_eq!(lambdas.len(), n);
    debug_assert_eq!(log_magnitudes.len(), n);
    for (j, v) in values.iter().enumerate() {
        if v.norm_sqr() == 0.0 {
            return Err(EvansError::ZeroOnContour { index: j });
        }
    }
    let mut unwrapped = Vec::with_capacity(n + 1);
    unwrapped.push(values[0].arg());
    for j in 0..n {
        let next = values[(j + 1) % n];
        let increment = (next / values[j]).arg();
        if increment.abs() >= core::f64::consts::PI - 1e-9 {
            return Err(EvansError::ArgumentJump { index: j });
        }
        let prev = unwrapped[j];
        unwrapped.push(prev + increment);
    }
    Ok(EvansTrace { lambdas, values, log_magnitudes, unwrapped_arg: unwrapped })
}

/// Synthetic trace from bare values (zero log magnitudes); test and
/// validation helper.
pub fn trace_from_values(
    lambdas: Vec<Complex64>,
    values: Vec<Complex64>,
) -> Result<EvansTrace, EvansError> {
    let zeros = alloc::vec![0.0; values.len()];
    trace_from_parts(lambdas, values, zeros)
}

/// Evans trace over a whole contour.
pub fn evans_trace(
    spec: &ContourSpec,
    params: &SystemParams,
    x0: f64,
    x1: f64,
    cfg: &IntegratorConfig,
) -> Result<EvansTrace, EvansError> {
    if !(x0 < 0.0 && 0.0 < x1) {
        return Err(EvansError::InvalidMatchingSpan);
    }
    let unstable = eigenvector_loop(spec, params, |p| p.x_plus)?;
    let stable = eigenvector_loop(spec, params, |p| p.x_minus)?;
    let lambdas: Vec<Complex64> = spec.samples().collect();
    let mut values = Vec::with_capacity(lambdas.len());
    let mut log_mags = Vec::with_capacity(lambdas.len());
    for (j, lambda) in lambdas.iter().enumerate() {
        let (value, log_mag) =
            evans_sample_from_seeds(*lambda, &unstable[j], &stable[j], params, x0, x1, cfg)
                .map_err(|source| EvansError::Integration { index: j, source })?;
        values.push(value);
        log_mags.push(log_mag);
    }
    trace_from_parts(lambdas, values, log_mags)
}

/// Fractional winding of the trace: total unwrapped argument over 2 pi.
pub fn winding_turns(trace: &EvansTrace) -> f64 {
    let total = trace.unwrapped_arg[trace.unwrapped_arg.len() - 1] - trace.unwrapped_arg[0];
    total / (2.0 * core::f64::consts::PI)
}

/// Winding number of the trace: total unwrapped argument over 2 pi, rounded
/// to the nearest integer with the rounding residual checked.
pub fn winding_number(trace: &EvansTrace) -> Result<i64, EvansError> {
    let turns = winding_turns(trace);
    let rounded = turns.round();
    let residual = (turns - rounded).abs();
    if residual >= WINDING_RESIDUAL_TOL {
        return Err(EvansError::IllConditionedWinding { residual });
    }
    Ok(rounded as i64)
}

/// Number of eigenvalues enclosed by the contour, counted with multiplicity
/// by the argument principle on the Evans trace.
pub fn count_eigenvalues(
    spec: &ContourSpec,
    params: &SystemParams,
    x0: f64,
    x1: f64,
    cfg: &IntegratorConfig,
) -> Result<i64, EvansError> {
    winding_number(&evans_trace(spec, params, x0, x1, cfg)?)
}
