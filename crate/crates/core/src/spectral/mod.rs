//! Periodic-grid field arithmetic on [0,2π)³.
//!
//! Coefficients follow û(k) = N⁻³ Σ_x u(x) e^{-ik·x}, so a physical field is
//! u(x) = Σ_k û(k) e^{ik·x}. Arrays are x-fastest: `i + n*(j + n*k)`.
//! The Nyquist wavenumber has no well-defined real derivative and every
//! differential operator treats it as wavenumber zero.

pub(crate) mod fft;
pub(crate) mod field;
mod grid;
pub mod ops;
mod random;
pub mod snapshot;

pub use field::{SpectralScalarField, SpectralVectorField, StrainField, SYM_PAIRS};
pub use grid::Grid;
pub use ops::{
    biot_savart, curl, dealias, dealias_scalar, divergence, fft_roundtrip, gradient,
    hodge_laplacian_flat, laplacian, leray_project, strain,
};
pub use random::random_divfree;
pub use snapshot::{Snapshot, SnapshotHeader};

pub(crate) use fft::{forward_real, forward_real_pair, inverse_real, inverse_real_pair};

/// Relative tolerance of the divergence-free check on |k·û(k)|.
pub const DIVERGENCE_TOL: f64 = 1e-12;

/// (2π)³, the torus volume.
pub const VOLUME: f64 = 8.0 * std::f64::consts::PI * std::f64::consts::PI * std::f64::consts::PI;
