//! Circular spectral contours and their discretization.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed by no_std builds, shadowed when std is linked
use num_traits::Float;
use thiserror::Error;

use crate::model::SpectralPoint;

/// Minimum number of contour samples accepted.
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum ContourError {
    #[error("contour radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("contour needs at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error("contour center must be finite")]
    NonFiniteCenter,
}

/// A circle in the spectral plane with an even counterclockwise
/// discretization: sample j sits at `center + radius * exp(2 pi i j / n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub n_samples: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64, n_samples: usize) -> Result<Self, ContourError> {
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(ContourError::NonFiniteCenter);
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(ContourError::NonPositiveRadius(radius));
        }
        if n_samples < MIN_SAMPLES {
            return Err(ContourError::TooFewSamples(n_samples));
        }
        Ok(ContourSpec { center, radius, n_samples })
    }

    pub fn sample(&self, j: usize) -> Complex64 {
        let angle = 2.0 * core::f64::consts::PI * (j as f64) / (self.n_samples as f64);
        let (sin, cos) = angle.sin_cos();
        self.center + Complex64::new(self.radius * cos, self.radius * sin)
    }

    pub fn samples(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n_samples).map(move |j| self.sample(j))
    }
}

/// The contour samples as spectral points, counterclockwise from angle 0.
pub fn discretize_contour(spec: &ContourSpec) -> Vec<SpectralPoint> {
    spec.samples().map(SpectralPoint).collect()
}
