//! Orchestration: resolve a config, fan the per-sample work out over a
//! worker pool, and assemble outcomes. Results are independent of the
//! parallelism degree: per-sample computations are pure and are collected
//! in contour order.

use std::time::Instant;

use anyhow::{anyhow, Result};
use rayon::prelude::*;
use serde::Serialize;

use hopfwind_core::contour::ContourSpec;
use hopfwind_core::model::{contour_clearance_scan, essential_spectrum, Branch, SystemParams};
use hopfwind_core::oracle::{
    evans_sample_from_seeds, stable_initial_loop, trace_from_parts, winding_number, winding_turns,
    EvansTrace,
};
use hopfwind_core::phase::{
    assemble_loop_field, initial_loop, phase_transition_series, transport_sample, LoopField,
    PhaseSeries,
};

use crate::config::RunConfig;
use crate::error::AppError;

fn run_in_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| anyhow!("building worker pool: {e}"))?;
    Ok(pool.install(work))
}

pub struct PhaseOutcome {
    pub series: PhaseSeries,
    pub field: LoopField,
    pub clearance: f64,
    pub runtime_seconds: f64,
}

impl PhaseOutcome {
    pub fn rounded_count(&self) -> i64 {
        self.series.terminal_relative().round() as i64
    }

    pub fn rounding_residual(&self) -> f64 {
        let terminal = self.series.terminal_relative();
        (terminal - terminal.round()).abs()
    }
}

pub struct EvansOutcome {
    pub trace: EvansTrace,
    pub winding: i64,
    pub residual: f64,
    pub clearance: f64,
    pub runtime_seconds: f64,
}

pub struct SpectrumOutcome {
    pub rows: Vec<(f64, char, f64, f64)>,
    pub clearance: f64,
    pub runtime_seconds: f64,
}

fn resolve(config: &RunConfig) -> Result<(SystemParams, ContourSpec), AppError> {
    config.validate().map_err(AppError::Config)?;
    let params = config.system_params().map_err(AppError::Config)?;
    let spec = config.contour_spec().map_err(AppError::Config)?;
    Ok((params, spec))
}

fn clearance_of(config: &RunConfig, spec: &ContourSpec, params: &SystemParams) -> f64 {
    contour_clearance_scan(spec, params, config.s_max, config.s_step)
}

/// Transport the eigenvector loop and compute the phase-transition series.
pub fn run_phase(config: &RunConfig) -> Result<PhaseOutcome, AppError> {
    let (params, spec) = resolve(config)?;
    let started = Instant::now();
    let clearance = clearance_of(config, &spec, &params);
    if clearance < config.clearance_warn_threshold() {
        eprintln!(
            "warning: contour clearance {clearance:.6} below threshold {:.6}; \
             the contour may be too close to the essential spectrum",
            config.clearance_warn_threshold()
        );
    }

    let seeds = initial_loop(&spec, &params).map_err(AppError::numerical)?;
    let integrator = config.integrator();
    let (x0, x1) = (config.x0, config.x1);
    let lambdas: Vec<_> = spec.samples().collect();
    let trajectories = run_in_pool(config.jobs, || {
        lambdas
            .par_iter()
            .zip(seeds.par_iter())
            .enumerate()
            .map(|(index, (lambda, seed))| {
                transport_sample(*lambda, seed, &params, x0, x1, &integrator)
                    .map_err(|source| hopfwind_core::phase::PhaseError::Integration { index, source })
            })
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(AppError::Config)?
    .map_err(AppError::numerical)?;

    let field = assemble_loop_field(&spec, trajectories);
    let series = phase_transition_series(&field, config.quadrature());
    Ok(PhaseOutcome {
        series,
        field,
        clearance,
        runtime_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Evans-function trace and winding count over the contour.
pub fn run_evans(config: &RunConfig) -> Result<EvansOutcome, AppError> {
    let (params, spec) = resolve(config)?;
    if !(config.x0 < 0.0 && 0.0 < config.x1) {
        return Err(AppError::Config(anyhow!(
            "the Evans matching point is x = 0, so x0 < 0 < x1 is required \
             (got x0 = {}, x1 = {})",
            config.x0,
            config.x1
        )));
    }
    let started = Instant::now();
    let clearance = clearance_of(config, &spec, &params);

    let unstable = initial_loop(&spec, &params).map_err(AppError::numerical)?;
    let stable = stable_initial_loop(&spec, &params).map_err(AppError::numerical)?;
    let integrator = config.integrator();
    let (x0, x1) = (config.x0, config.x1);
    let lambdas: Vec<_> = spec.samples().collect();
    let samples = run_in_pool(config.jobs, || {
        lambdas
            .par_iter()
            .enumerate()
            .map(|(index, lambda)| {
                evans_sample_from_seeds(
                    *lambda,
                    &unstable[index],
                    &stable[index],
                    &params,
                    x0,
                    x1,
                    &integrator,
                )
                .map_err(|source| hopfwind_core::oracle::EvansError::Integration { index, source })
            })
            .collect::<Result<Vec<_>, _>>()
    })
    .map_err(AppError::Config)?
    .map_err(AppError::numerical)?;

    let (values, log_mags): (Vec<_>, Vec<_>) = samples.into_iter().unzip();
    let trace = trace_from_parts(lambdas, values, log_mags).map_err(AppError::numerical)?;
    let winding = winding_number(&trace).map_err(AppError::numerical)?;
    let turns = winding_turns(&trace);
    Ok(EvansOutcome {
        trace,
        winding,
        residual: (turns - turns.round()).abs(),
        clearance,
        runtime_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Essential-spectrum locus samples and the contour clearance.
pub fn run_spectrum(config: &RunConfig) -> Result<SpectrumOutcome, AppError> {
    let (params, spec) = resolve(config)?;
    let started = Instant::now();
    let steps = (config.s_max / config.s_step).round() as usize;
    let mut rows = Vec::with_capacity(2 * (steps + 1));
    for (branch, tag) in [(Branch::Plus, '+'), (Branch::Minus, '-')] {
        for k in 0..=steps {
            let s = k as f64 * config.s_step;
            let z = essential_spectrum(s, branch, &params);
            rows.push((s, tag, z.re, z.im));
        }
    }
    let clearance = clearance_of(config, &spec, &params);
    Ok(SpectrumOutcome { rows, clearance, runtime_seconds: started.elapsed().as_secs_f64() })
}

#[derive(Serialize)]
pub struct PhaseSummary<'a> {
    pub command: &'static str,
    pub terminal_relative_phase: f64,
    pub rounded_count: i64,
    pub rounding_residual: f64,
    pub gp_initial: f64,
    pub clearance: f64,
    pub runtime_seconds: f64,
    pub config: &'a RunConfig,
}

#[derive(Serialize)]
pub struct EvansSummary<'a> {
    pub command: &'static str,
    pub winding: i64,
    pub residual: f64,
    pub clearance: f64,
    pub runtime_seconds: f64,
    pub config: &'a RunConfig,
}

#[derive(Serialize)]
pub struct SpectrumSummary<'a> {
    pub command: &'static str,
    pub rows: usize,
    pub clearance: f64,
    pub runtime_seconds: f64,
    pub config: &'a RunConfig,
}
