//! The geometric-phase pipeline: eigenvector loops over a spectral contour,
//! their transport under the 6x6 field, the natural-connection integrand,
//! phase quadrature around closed loops, and the relative-phase transition
//! series as a function of the integration endpoint.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed by no_std builds, shadowed when std is linked
use num_traits::Float;
use thiserror::Error;

pub use crate::contour::{discretize_contour, ContourSpec};

use crate::model::{asymptotic_pair, field6_apply, ModelError, SpectralPoint, SystemParams};
use crate::odeint::{integrate_linear, AdaptiveStats, GridTrajectory, IntegrateError, IntegratorConfig};
use crate::xalg::{hermitian_inner, Vec6};

/// Loops are rejected when |sigma+| drops below this anywhere on the
/// contour: the analytic eigenvector formula degenerates near its branch
/// locus and principal-branch continuity is no longer guaranteed.
pub const BRANCH_POINT_TOL: f64 = 1e-3;

/// Maximum projective angle between adjacent loop samples before the loop is
/// declared open (under-resolved or crossing a branch cut).
pub const LOOP_CLOSURE_TOL: f64 = 1e-2;

#[derive(Debug, Error, PartialEq)]
pub enum PhaseError {
    #[error("branch point proximity at contour sample {index}: |sigma+| = {sigma_abs:e}")]
    BranchPointProximity { index: usize, sigma_abs: f64 },
    #[error("eigenvector loop not closed: direction jump {angle:e} rad after sample {index}")]
    LoopNotClosed { index: usize, angle: f64 },
    #[error("degenerate spectral point at contour sample {index}")]
    Degenerate { index: usize },
    #[error("integration failed at contour sample {index}: {source}")]
    Integration {
        index: usize,
        #[source]
        source: IntegrateError,
    },
}

impl PhaseError {
    pub(crate) fn from_model(err: ModelError, index: usize) -> Self {
        match err {
            ModelError::DegenerateSpectralPoint { .. } => PhaseError::Degenerate { index },
        }
    }
}

/// Quadrature rule for the phase integral over the loop parameter.
///
/// On a closed loop with uniform weights the two rules agree up to float
/// summation order; both are provided so results can be cross-checked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Quadrature {
    #[default]
    Euler,
    Trapezoid,
}

/// The transported loop: for every contour sample, the trajectory on a
/// shared storage grid, unit-norm when rescaling is on.
#[derive(Clone, Debug)]
pub struct LoopField {
    pub contour: ContourSpec,
    pub x_grid: Vec<f64>,
    /// `samples[j][k]` is the state of the j-th contour sample at grid
    /// point k. Index arithmetic in j is modulo `contour.n_samples`.
    pub samples: Vec<Vec<Vec6>>,
    pub log_scale: Vec<Vec<f64>>,
    pub stats: AdaptiveStats,
}

/// Geometric phase and relative phase as functions of the integration
/// endpoint.
#[derive(Clone, Debug)]
pub struct PhaseSeries {
    pub x_grid: Vec<f64>,
    /// Phase of the (normalized) initial-condition loop.
    pub gp_initial: f64,
    pub gp_at_x: Vec<f64>,
    /// `gp_at_x[k] - gp_at_x[0]`; zero at the first grid point by
    /// construction.
    pub relative: Vec<f64>,
}

impl PhaseSeries {
    pub fn terminal_relative(&self) -> f64 {
        *self.relative.last().expect("non-empty series")
    }

    /// Value of the relative phase at the grid point nearest to x.
    pub fn relative_at(&self, x: f64) -> f64 {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (k, &g) in self.x_grid.iter().enumerate() {
            let d = (g - x).abs();
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        self.relative[best]
    }

    /// First grid index from which the relative phase stays within `tol` of
    /// its terminal value: a plateau detector for judging whether the
    /// transition has terminated before the endpoint. The transition onset
    /// varies strongly between eigenvalues, so fixed integration endpoints
    /// remain the reference protocol.
    pub fn settled_from(&self, tol: f64) -> Option<usize> {
        let terminal = self.terminal_relative();
        let mut start = None;
        for (k, &r) in self.relative.iter().enumerate().rev() {
            if (r - terminal).abs() <= tol {
                start = Some(k);
            } else {
                break;
            }
        }
        start
    }
}

pub(crate) fn eigenvector_loop<F>(
    spec: &ContourSpec,
    params: &SystemParams,
    pick: F,
) -> Result<Vec<Vec6>, PhaseError>
where
    F: Fn(&crate::model::AsymptoticPair) -> Vec6,
{
    let n = spec.n_samples;
    let mut seeds = Vec::with_capacity(n);
    for (j, lambda) in spec.samples().enumerate() {
        let pair = asymptotic_pair(SpectralPoint(lambda), params)
            .map_err(|e| PhaseError::from_model(e, j))?;
        let sigma_abs = pair.sigma_plus.norm();
        if sigma_abs < BRANCH_POINT_TOL {
            return Err(PhaseError::BranchPointProximity { index: j, sigma_abs });
        }
        seeds.push(pick(&pair));
    }
    // closure check, wrapping around
    for j in 0..n {
        let a = &seeds[j];
        let b = &seeds[(j + 1) % n];
        let cosine =
            (hermitian_inner(a, b).norm() / (a.norm() * b.norm())).min(1.0);
        let angle = cosine.acos();
        if angle > LOOP_CLOSURE_TOL {
            return Err(PhaseError::LoopNotClosed { index: j, angle });
        }
    }
    Ok(seeds)
}

/// The loop of dominant unstable eigenvectors over the contour, used as
/// initial conditions at the left end of the integration range.
pub fn initial_loop(spec: &ContourSpec, params: &SystemParams) -> Result<Vec<Vec6>, PhaseError> {
    eigenvector_loop(spec, params, |pair| pair.x_plus)
}

/// Transport a single contour sample from x0 to x1 under the 6x6 field.
///
/// Accepts x1 == x0, returning the degenerate single-point trajectory.
pub fn transport_sample(
    lambda: Complex64,
    seed: &Vec6,
    params: &SystemParams,
    x0: f64,
    x1: f64,
    cfg: &IntegratorConfig,
) -> Result<GridTrajectory<6>, IntegrateError> {
    if x1 == x0 {
        let (state, log) = if cfg.rescale {
            (seed.normalized(), seed.norm().ln())
        } else {
            (*seed, 0.0)
        };
        return Ok(GridTrajectory {
            x_grid: alloc::vec![x0],
            states: alloc::vec![state],
            log_scale: alloc::vec![log],
            stats: AdaptiveStats::default(),
        });
    }
    let point = SpectralPoint(lambda);
    integrate_linear(|x, y: &Vec6| field6_apply(x, point, params, y), seed, x0, x1, cfg)
}

/// Assemble per-sample trajectories (in contour order) into a [`LoopField`].
pub fn assemble_loop_field(spec: &ContourSpec, trajectories: Vec<GridTrajectory<6>>) -> LoopField {
    debug_assert_eq!(trajectories.len(), spec.n_samples);
    let x_grid = trajectories[0].x_grid.clone();
    let mut stats = AdaptiveStats::default();
    let mut samples = Vec::with_capacity(trajectories.len());
    let mut log_scale = Vec::with_capacity(trajectories.len());
    for traj in trajectories {
        debug_assert_eq!(traj.x_grid.len(), x_grid.len());
        stats.accepted += traj.stats.accepted;
        stats.rejected += traj.stats.rejected;
        samples.push(traj.states);
        log_scale.push(traj.log_scale);
    }
    LoopField { contour: *spec, x_grid, samples, log_scale, stats }
}

/// Transport the whole eigenvector loop from x0 to x1 on a shared grid.
pub fn transport_loop(
    spec: &ContourSpec,
    params: &SystemParams,
    x0: f64,
    x1: f64,
    cfg: &IntegratorConfig,
) -> Result<LoopField, PhaseError> {
    let seeds = initial_loop(spec, params)?;
    let mut trajectories = Vec::with_capacity(spec.n_samples);
    for (j, (lambda, seed)) in spec.samples().zip(&seeds).enumerate() {
        let traj = transport_sample(lambda, seed, params, x0, x1, cfg)
            .map_err(|source| PhaseError::Integration { index: j, source })?;
        trajectories.push(traj);
    }
    Ok(assemble_loop_field(spec, trajectories))
}

/// Central-difference derivative of a closed loop with periodic wraparound,
/// loop parameter step 1/n.
pub fn loop_derivative(samples: &[Vec6]) -> Vec<Vec6> {
    let n = samples.len();
    debug_assert!(n >= 3, "central differences need at least 3 samples");
    let half_n = 0.5 * n as f64;
    (0..n)
        .map(|j| {
            let next = samples[(j + 1) % n];
            let prev = samples[(j + n - 1) % n];
            (next - prev).scale_re(half_n)
        })
        .collect()
}

/// The natural-connection integrand `Im<u', u> / <u, u>` of a path through
/// u with velocity u'. Scale-invariant under positive real rescaling of
/// both arguments; zero when the inner product is real.
pub fn connection_integrand(u_prime: &Vec6, u: &Vec6) -> f64 {
    let norm_sqr = u.norm_sqr();
    assert!(norm_sqr > 0.0, "connection integrand requires a nonzero basepoint");
    hermitian_inner(u_prime, u).im / norm_sqr
}

/// Geometric phase of a closed loop: quadrature of the connection integrand
/// over one period, divided by 2 pi.
pub fn geometric_phase_quad(samples: &[Vec6], quadrature: Quadrature) -> f64 {
    let n = samples.len();
    let derivative = loop_derivative(samples);
    let integrand: Vec<f64> = derivative
        .iter()
        .zip(samples)
        .map(|(up, u)| connection_integrand(up, u))
        .collect();
    let sum: f64 = match quadrature {
        Quadrature::Euler => integrand.iter().sum(),
        Quadrature::Trapezoid => {
            (0..n).map(|j| 0.5 * (integrand[j] + integrand[(j + 1) % n])).sum()
        }
    };
    sum / n as f64 / (2.0 * core::f64::consts::PI)
}

/// [`geometric_phase_quad`] with the default Euler rule.
pub fn geometric_phase(samples: &[Vec6]) -> f64 {
    geometric_phase_quad(samples, Quadrature::Euler)
}

/// Relative phase of a transported loop against a reference loop,
/// `GP(transported) - GP(reference)`. The transition series below is the
/// special case where the reference is the transported loop's own initial
/// condition; this general form supports systems whose two asymptotic
/// limits differ.
pub fn relative_phase_two_loops(
    transported: &[Vec6],
    reference: &[Vec6],
    quadrature: Quadrature,
) -> f64 {
    geometric_phase_quad(transported, quadrature) - geometric_phase_quad(reference, quadrature)
}

/// Geometric phase of the loop at every storage grid point, and the
/// relative phase against the initial grid point.
///
/// Per-sample positive rescaling (the integrator's gauge) leaves every
/// value unchanged up to quadrature discretization error.
///
/// Sweeps contour rows once, accumulating all grid points together; the
/// summation order per grid point matches [`geometric_phase_quad`] on the
/// gathered column exactly.
pub fn phase_transition_series(field: &LoopField, quadrature: Quadrature) -> PhaseSeries {
    let n_grid = field.x_grid.len();
    let n = field.samples.len();
    let half_n = 0.5 * n as f64;

    let integrand_row = |j: usize, out: &mut Vec<f64>| {
        let prev = &field.samples[(j + n - 1) % n];
        let cur = &field.samples[j];
        let next = &field.samples[(j + 1) % n];
        out.clear();
        out.extend((0..n_grid).map(|k| {
            let u_prime = (next[k] - prev[k]).scale_re(half_n);
            connection_integrand(&u_prime, &cur[k])
        }));
    };

    let mut sums = alloc::vec![0.0f64; n_grid];
    let mut row = Vec::with_capacity(n_grid);
    match quadrature {
        Quadrature::Euler => {
            for j in 0..n {
                integrand_row(j, &mut row);
                for (sum, f) in sums.iter_mut().zip(&row) {
                    *sum += f;
                }
            }
        }
        Quadrature::Trapezoid => {
            let mut first = Vec::with_capacity(n_grid);
            integrand_row(0, &mut first);
            let mut previous = first.clone();
            for j in 1..n {
                integrand_row(j, &mut row);
                for ((sum, f), g) in sums.iter_mut().zip(&row).zip(&previous) {
                    *sum += 0.5 * (g + f);
                }
                core::mem::swap(&mut previous, &mut row);
            }
            for ((sum, f), g) in sums.iter_mut().zip(&previous).zip(&first) {
                *sum += 0.5 * (f + g);
            }
        }
    }

    let gp_at_x: Vec<f64> =
        sums.into_iter().map(|s| s / n as f64 / (2.0 * core::f64::consts::PI)).collect();
    let gp_initial = gp_at_x[0];
    let relative = gp_at_x.iter().map(|gp| gp - gp_initial).collect();
    PhaseSeries { x_grid: field.x_grid.clone(), gp_initial, gp_at_x, relative }
}
