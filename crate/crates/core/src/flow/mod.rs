//! Time integration on the flat torus: velocity with co-evolved vorticity
//! (integrating-factor RK4) and the heat-semigroup mollified scheme.

mod fused;
mod rhs;
mod stepper;

pub use rhs::{mollified_rhs, nonlinear_velocity, nonlinear_vorticity, ns_rhs, pressure, vorticity_rhs};
pub use stepper::{run, step};

use crate::spectral::{curl, SpectralScalarField, SpectralVectorField};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    IfRk4,
    Mollified,
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "if_rk4" => Ok(Scheme::IfRk4),
            "mollified" => Ok(Scheme::Mollified),
            other => Err(format!("unknown scheme {other:?} (expected if_rk4 or mollified)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FluidParams {
    pub nu: f64,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Mollifier time ε; ignored by [`Scheme::IfRk4`].
    pub epsilon: f64,
}

impl FluidParams {
    pub fn new(nu: f64, dt: f64, t_end: f64) -> Result<Self> {
        let p = FluidParams { nu, dt, t_end, scheme: Scheme::IfRk4, epsilon: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn mollified(nu: f64, dt: f64, t_end: f64, epsilon: f64) -> Result<Self> {
        let p = FluidParams { nu, dt, t_end, scheme: Scheme::Mollified, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::param("nu", format!("{} must be positive", self.nu)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dt", format!("{} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::param("t_end", format!("{} must be non-negative", self.t_end)));
        }
        if self.scheme == Scheme::Mollified && !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::param("epsilon", format!("{} must be positive", self.epsilon)));
        }
        Ok(())
    }

    /// dt·ν·(n/2)², the viscous step ratio at the highest resolved mode.
    pub fn stability_ratio(&self, n: usize) -> f64 {
        let kmax = (n / 2) as f64;
        self.dt * self.nu * kmax * kmax
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

#[derive(Clone, Debug)]
pub struct FlowState {
    pub time: f64,
    pub u: SpectralVectorField,
    pub xi: SpectralVectorField,
}

impl FlowState {
    /// State at t = 0 with ξ = curl u.
    pub fn new(u: SpectralVectorField) -> Result<Self> {
        u.require_divergence_free()?;
        if !u.is_mean_free() {
            let c = u.coeffs();
            let magnitude = (c[0][0].norm_sqr() + c[1][0].norm_sqr() + c[2][0].norm_sqr()).sqrt();
            return Err(Error::NonzeroMean { magnitude });
        }
        let xi = curl(&u);
        Ok(FlowState { time: 0.0, u, xi })
    }

    /// Pressure reconstructed from the current velocity; it plays no part
    /// in the time stepping.
    pub fn pressure(&self) -> Result<SpectralScalarField> {
        pressure(&self.u)
    }

    /// ‖curl u − ξ‖₂ / ‖ξ‖₂, or the absolute gap when ξ = 0.
    pub fn vorticity_consistency(&self) -> f64 {
        let gap = curl(&self.u).sub(&self.xi).expect("same grid").norm();
        let scale = self.xi.norm();
        if scale > 0.0 {
            gap / scale
        } else {
            gap
        }
    }
}
