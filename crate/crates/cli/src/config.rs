//! Run configuration: a TOML file plus command-line overrides, validated
//! before anything is computed and echoed verbatim into every summary so a
//! run can be replayed exactly.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use hopfwind_core::contour::{ContourSpec, MIN_SAMPLES};
use hopfwind_core::model::SystemParams;
use hopfwind_core::odeint::IntegratorConfig;
use hopfwind_core::phase::Quadrature;
use hopfwind_core::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadratureChoice {
    Euler,
    Trapezoid,
}

impl From<QuadratureChoice> for Quadrature {
    fn from(q: QuadratureChoice) -> Quadrature {
        match q {
            QuadratureChoice::Euler => Quadrature::Euler,
            QuadratureChoice::Trapezoid => Quadrature::Trapezoid,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourConfig {
    /// Center as [re, im].
    pub center: [f64; 2],
    pub radius: f64,
    pub n_samples: usize,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig { center: [15.0, 0.0], radius: 0.1, n_samples: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub rho: f64,
    pub psi: f64,
    pub omega: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmitFlags {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags { csv: true, json: true, svg: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Named parameter preset; ignored when explicit `params` are given.
    pub preset: String,
    /// Explicit wave parameters overriding the preset.
    pub params: Option<ParamsConfig>,
    pub contour: ContourConfig,
    pub x0: f64,
    pub x1: f64,
    pub h_store: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub quadrature: QuadratureChoice,
    pub rescale: bool,
    pub out_dir: PathBuf,
    pub emit: EmitFlags,
    /// Worker threads for per-sample work; 0 picks the machine default.
    pub jobs: usize,
    /// Essential-spectrum scan range and step (spectrum command and
    /// clearance checks).
    pub s_max: f64,
    pub s_step: f64,
    /// Emit a clearance warning below this distance; defaults to the
    /// contour radius when not set.
    pub clearance_warn: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: hopfwind_core::model::PRESET_HOCKING_STEWARTSON.to_string(),
            params: None,
            contour: ContourConfig::default(),
            x0: -10.0,
            x1: 10.0,
            h_store: 0.04,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            quadrature: QuadratureChoice::Euler,
            rescale: true,
            out_dir: PathBuf::from("out"),
            emit: EmitFlags::default(),
            jobs: 0,
            s_max: 100.0,
            s_step: 0.01,
            clearance_warn: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        let config: RunConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config file {}", path.display()))?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.contour.radius > 0.0) {
            bail!("contour.radius must be positive, got {}", self.contour.radius);
        }
        if self.contour.n_samples < MIN_SAMPLES {
            bail!("contour.n_samples must be at least {MIN_SAMPLES}, got {}", self.contour.n_samples);
        }
        if !(self.x0 < self.x1) {
            bail!("x0 must be less than x1, got x0 = {}, x1 = {}", self.x0, self.x1);
        }
        if !(self.h_store > 0.0) {
            bail!("h_store must be positive, got {}", self.h_store);
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            bail!("tolerances must be positive, got rel_tol = {}, abs_tol = {}", self.rel_tol, self.abs_tol);
        }
        if !(self.s_max > 0.0 && self.s_step > 0.0) {
            bail!("spectrum scan needs s_max > 0 and s_step > 0");
        }
        if let Some(p) = &self.params {
            if !(p.rho > 0.0) {
                bail!("params.rho must be positive, got {}", p.rho);
            }
        } else if SystemParams::preset(&self.preset).is_none() {
            bail!(
                "unknown preset {:?}; available: {}",
                self.preset,
                SystemParams::preset_names().join(", ")
            );
        }
        for (name, value) in [
            ("contour.center.re", self.contour.center[0]),
            ("contour.center.im", self.contour.center[1]),
            ("x0", self.x0),
            ("x1", self.x1),
        ] {
            if !value.is_finite() {
                bail!("{name} must be finite");
            }
        }
        Ok(())
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        match &self.params {
            Some(p) => Ok(SystemParams::new(p.rho, p.psi, p.omega)),
            None => SystemParams::preset(&self.preset)
                .ok_or_else(|| anyhow!("unknown preset {:?}", self.preset)),
        }
    }

    pub fn contour_spec(&self) -> Result<ContourSpec> {
        ContourSpec::new(
            Complex64::new(self.contour.center[0], self.contour.center[1]),
            self.contour.radius,
            self.contour.n_samples,
        )
        .map_err(|e| anyhow!("{e}"))
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_store: self.h_store,
            rescale: self.rescale,
            ..Default::default()
        }
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature.into()
    }

    pub fn clearance_warn_threshold(&self) -> f64 {
        self.clearance_warn.unwrap_or(self.contour.radius)
    }

    /// The quick profile: coarse contour and relaxed tolerance.
    pub fn apply_fast_profile(&mut self) {
        self.contour.n_samples = 1_000;
        self.rel_tol = 1e-6;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let config = RunConfig::default();
        let text = toml::to_string(&config).unwrap();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(config, back);
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        c.contour.radius = -1.0;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.x1 = c.x0;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.contour.n_samples = 4;
        assert!(c.validate().is_err());

        let mut c = RunConfig::default();
        c.preset = "no-such-preset".into();
        assert!(c.validate().is_err());
    }

    #[test]
    fn explicit_params_override_preset() {
        let mut c = RunConfig::default();
        c.preset = "ignored-when-params-present".into();
        c.params = Some(ParamsConfig { rho: 0.5, psi: 0.3, omega: 2.0 });
        c.validate().unwrap();
        let p = c.system_params().unwrap();
        assert_eq!(p.rho, 0.5);
    }
}
