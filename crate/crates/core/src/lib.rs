//! Counts eigenvalues of the linearization of the complex Ginzburg-Landau
//! equation about its hyperbolic-secant pulse by transporting a loop of
//! asymptotic eigenvectors along a spectral contour and measuring the
//! geometric phase the loop accumulates in the Hopf bundle. A classical
//! Evans-function winding count over the same contour serves as an
//! independent oracle.
//!
//! The crate is `no_std` (with `alloc`); all IO, parallel drivers, and file
//! formats live in the companion `hopfwind` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod contour;
pub mod model;
pub mod odeint;
pub mod oracle;
pub mod phase;
pub mod xalg;

#[cfg(test)]
pub(crate) mod testutil;

pub use num_complex::Complex64;
