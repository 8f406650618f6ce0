//! Divergence of the intrinsic Ricci field on the flat torus.

use num_complex::Complex64;

use crate::spectral::ops::advection;
use crate::spectral::{laplacian, SpectralScalarField, SpectralVectorField};
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Both sides of the flat divergence relation for Ric-hat = (1/2ν²)u⊗u − (1/ν)∇^s u.
#[derive(Clone, Debug)]
pub struct DivRicciHat {
    /// ∂_j Ric-hat_ij, evaluated spectrally.
    pub divergence: SpectralVectorField,
    /// (1/2ν²)∇_u u − (1/ν)Ric⁰u with Ric⁰ = 0.
    pub claimed: SpectralVectorField,
    /// −(1/2ν)Δu, the value of `divergence − claimed` implied by
    /// div(∇^s u) = ½(Δu + ∇ div u).
    pub viscous_term: SpectralVectorField,
}

impl DivRicciHat {
    /// Max-norm of `divergence − claimed` in physical space.
    pub fn claimed_gap(&self) -> f64 {
        max_abs_physical(&self.divergence.sub(&self.claimed).expect("same grid"))
    }

    /// Max-norm of `divergence − claimed − viscous_term`.
    pub fn corrected_gap(&self) -> f64 {
        let d = self.divergence.sub(&self.claimed).and_then(|d| d.sub(&self.viscous_term)).expect("same grid");
        max_abs_physical(&d)
    }
}

fn max_abs_physical(u: &SpectralVectorField) -> f64 {
    u.to_physical().iter().flat_map(|c| c.iter()).fold(0.0, |m, v| m.max(v.abs()))
}

pub fn div_ricci_hat(u: &SpectralVectorField, nu: f64) -> Result<DivRicciHat> {
    if !(nu > 0.0) {
        return Err(Error::param("nu", format!("{nu} must be positive")));
    }
    u.require_divergence_free()?;
    let grid = *u.grid();
    let up = u.to_physical();
    let c = u.coeffs();
    let mut div: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::default(); grid.len()]);
    for i in 0..3 {
        for j in 0..3 {
            let prod: Vec<f64> = up[i].iter().zip(&up[j]).map(|(a, b)| a * b).collect();
            let hat = SpectralScalarField::from_physical(grid, &prod)?;
            let h = hat.coeffs();
            grid.for_each_mode(|idx, k| {
                // ∂_j of (1/2ν²) u_i u_j
                div[i][idx] += I * k[j] * h[idx] / (2.0 * nu * nu);
                // ∂_j of −(1/ν) S_ij, S_ij = (∂_i u_j + ∂_j u_i)/2
                div[i][idx] += 0.5 * (k[i] * k[j] * c[j][idx] + k[j] * k[j] * c[i][idx]) / nu;
            });
        }
    }
    let divergence = SpectralVectorField::from_coeffs(grid, div)?;
    let claimed = advection(u, u)?.scale(1.0 / (2.0 * nu * nu));
    let viscous_term = laplacian(u).scale(-1.0 / (2.0 * nu));
    Ok(DivRicciHat { divergence, claimed, viscous_term })
}
