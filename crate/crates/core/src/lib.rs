//! Numerics for the incompressible Navier-Stokes equations on the periodic
//! torus [0,2π)³, viewed through the velocity-deformed metric connection.
//!
//! * [`spectral`]: Fourier fields, differential operators, Leray projection,
//!   Biot-Savart inversion and the `NSRH1` snapshot format.
//! * [`flow`]: integrating-factor RK4 for velocity and co-evolved vorticity,
//!   plus the heat-semigroup mollified scheme.
//! * [`geometry`]: pointwise tensor calculus on a periodic metric chart.
//! * [`stochastic`]: frame-bundle SDEs, resolvents, Feynman-Kac and Bismut
//!   Monte Carlo estimators.
//! * [`diagnostics`]: energy, enstrophy and helicity balance residuals.

pub mod diagnostics;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod spectral;
pub mod stochastic;

pub use error::{Error, Result};
pub use flow::{FlowState, FluidParams, Scheme};
pub use geometry::{Christoffel, FormValue, MetricChart};
pub use spectral::{Grid, SpectralScalarField, SpectralVectorField, StrainField};
pub use stochastic::{DriftField, FrameState, McConfig, McEstimate};

/// Dense 3×3 matrix used for all pointwise tensors.
pub type Mat3 = nalgebra::Matrix3<f64>;
/// Tangent vector or covector components at a point.
pub type Vec3 = nalgebra::Vector3<f64>;
