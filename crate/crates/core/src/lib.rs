//! Numerical laboratory for non-separable free-particle wavepackets.
//!
//! The crate evaluates the Hermite-Gauss and Laguerre-Gauss solutions of the
//! free Schrödinger equation in 2+1 dimensions (plus the 1D Hermite packet),
//! measures densities, probability currents, continuity residuals, and
//! expectation values on sampling grids, and cross-validates every analytic
//! solution against an exact FFT propagator. Streamline tracing of the
//! current field reproduces the rotation structure of the vortex packets.
//!
//! Module map:
//! - [`math`]: special functions and quadrature primitives
//! - [`grid`]: sampling windows and real grid functions
//! - [`states`]: analytic wavefunctions, gradients, closed-form moments
//! - [`observables`]: sampling, density, current, continuity, measurement
//! - [`propagator`]: spectral propagation and the correctness oracle
//! - [`streamlines`]: current streamline tracing and handedness

pub mod error;
pub mod grid;
pub mod math;
pub mod observables;
pub mod propagator;
pub mod states;
pub mod streamlines;

pub use error::{Error, Result};
pub use grid::{Grid1D, Grid2D, RealGridFunction};
pub use observables::{
    ComplexField, ComplexField1D, CurrentMethod, FieldWarning, ObservableReport, VectorField2D,
};
pub use states::{Mode, MomentReport, PhysicalParams};

/// Format a float with 17 significant digits, the fixed CSV convention of the
/// whole project (round-trippable and byte-stable across runs).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    #[test]
    fn g17_round_trip() {
        for v in [0.0, -0.0, 1.5, std::f64::consts::PI, 1e-300, -2.625e17] {
            let s = super::fmt_g17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }
}
