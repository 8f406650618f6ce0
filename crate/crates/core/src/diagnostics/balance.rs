//! Integral functionals of one (u, ξ) snapshot.

use num_complex::Complex64;

use crate::spectral::ops::padded_physical;
use crate::spectral::{SpectralVectorField, StrainField, VOLUME};
use crate::{Error, Mat3, Result, Vec3};

/// H = ∫ u·ξ dx by Parseval.
pub fn helicity(u: &SpectralVectorField, xi: &SpectralVectorField) -> Result<f64> {
    u.inner(xi)
}

/// Ric-hat^t = (1/2ν²) u⊗u − (1/ν) ∇^s u at every grid point.
pub fn ricci_hat_field(u: &SpectralVectorField, nu: f64) -> Result<StrainField> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::param("nu", format!("{nu} must be positive")));
    }
    u.require_divergence_free()?;
    let s = crate::spectral::strain(u);
    let up = u.to_physical();
    let comps: [Vec<f64>; 6] = std::array::from_fn(|slot| {
        let (i, j) = crate::spectral::SYM_PAIRS[slot];
        (0..u.grid().len())
            .map(|idx| up[i][idx] * up[j][idx] / (2.0 * nu * nu) - s.components()[slot][idx] / nu)
            .collect()
    });
    StrainField::new(*u.grid(), comps)
}

/// Every integral entering the energy, enstrophy and helicity balances at
/// one time, plus the largest pointwise gaps between the two algebraic
/// forms of the enstrophy and helicity right-hand sides.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BalanceTerms {
    pub time: f64,
    pub nu: f64,
    /// ½‖u‖₂²
    pub energy: f64,
    /// ‖∇u‖₂²
    pub grad_u_sq: f64,
    /// ½‖ξ‖₂²
    pub enstrophy: f64,
    /// ‖∇ξ‖₂²
    pub grad_xi_sq: f64,
    /// ∫ ξ·u
    pub helicity: f64,
    /// ∫ (ξ·u)²
    pub helical_density_sq: f64,
    /// ∫ (Ric-hat ξ)·ξ
    pub ric_hat_quad: f64,
    /// ∫ (Sξ)·ξ
    pub strain_quad: f64,
    /// ∫ (∇×ξ)·ξ
    pub curl_xi_xi: f64,
    /// ∫ ∇ξ:∇u
    pub grad_xi_grad_u: f64,
    /// ∫ ξ·(Ric-hat u)
    pub xi_ric_hat_u: f64,
    /// ∫ (ξ·u)|u|²
    pub helicity_flux: f64,
    /// ∫ ξ·(S u)
    pub xi_strain_u: f64,
    /// max_x |[−ν Ric-hat ξ·ξ + (ξ·u)²/2ν] − Sξ·ξ| relative to the largest term
    pub enstrophy_form_gap: f64,
    /// max_x |[−ν ξ·Ric-hat u + (ξ·u)|u|²/2ν] − ξ·Su| relative to the largest term
    pub helicity_form_gap: f64,
}

fn k2(k: [f64; 3]) -> f64 {
    k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
}

impl BalanceTerms {
    /// Only `energy` and `grad_u_sq` (plus time and ν); every other field is
    /// left at zero. Cheap enough to record at every step.
    pub fn energy_only(u: &SpectralVectorField, nu: f64, time: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::param("nu", format!("{nu} must be positive")));
        }
        let c = u.coeffs();
        let (mut energy, mut grad_u_sq) = (0.0, 0.0);
        u.grid().for_each_mode(|idx, k| {
            let e = c[0][idx].norm_sqr() + c[1][idx].norm_sqr() + c[2][idx].norm_sqr();
            energy += e;
            grad_u_sq += k2(k) * e;
        });
        Ok(Self { time, nu, energy: 0.5 * VOLUME * energy, grad_u_sq: VOLUME * grad_u_sq, ..Self::default() })
    }

    /// Quadratic terms use Parseval; products of three or four fields are
    /// integrated on a grid twice as fine, where they are alias-free.
    pub fn compute(u: &SpectralVectorField, xi: &SpectralVectorField, nu: f64, time: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::param("nu", format!("{nu} must be positive")));
        }
        if u.grid().n() != xi.grid().n() {
            return Err(Error::GridMismatch { left: u.grid().n(), right: xi.grid().n() });
        }
        let grid = *u.grid();
        let (cu, cx) = (u.coeffs(), xi.coeffs());
        let mut grad_u_sq = 0.0;
        let mut grad_xi_sq = 0.0;
        let mut curl_xi_xi = 0.0;
        let mut grad_xi_grad_u = 0.0;
        grid.for_each_mode(|idx, k| {
            let kk = k2(k);
            let (a, b) = ([cu[0][idx], cu[1][idx], cu[2][idx]], [cx[0][idx], cx[1][idx], cx[2][idx]]);
            for d in 0..3 {
                grad_u_sq += kk * a[d].norm_sqr();
                grad_xi_sq += kk * b[d].norm_sqr();
                grad_xi_grad_u += kk * (b[d] * a[d].conj()).re;
            }
            // (∇×ξ)^ = i k × ξ̂
            let i = Complex64::i();
            let c = [
                i * (k[1] * b[2] - k[2] * b[1]),
                i * (k[2] * b[0] - k[0] * b[2]),
                i * (k[0] * b[1] - k[1] * b[0]),
            ];
            curl_xi_xi += (0..3).map(|d| (c[d] * b[d].conj()).re).sum::<f64>();
        });

        // u, ξ and ∂_i u_j on the padded grid
        let m = 2 * grid.n();
        let mut arrays: Vec<Vec<Complex64>> = Vec::with_capacity(15);
        for c in cu.iter().chain(cx.iter()) {
            arrays.push(c.clone());
        }
        for e in 0..9 {
            let (i, j) = (e / 3, e % 3);
            let mut out = vec![Complex64::default(); grid.len()];
            grid.for_each_mode(|idx, k| out[idx] = Complex64::i() * k[i] * cu[j][idx]);
            arrays.push(out);
        }
        let refs: Vec<&[Complex64]> = arrays.iter().map(|v| v.as_slice()).collect();
        let p = padded_physical(&grid, &refs, m);

        let npts = m * m * m;
        let mut sums = [0.0; 6];
        let mut gap_e: f64 = 0.0;
        let mut gap_h: f64 = 0.0;
        let mut scale_e: f64 = 0.0;
        let mut scale_h: f64 = 0.0;
        for q in 0..npts {
            let uv = Vec3::new(p[0][q], p[1][q], p[2][q]);
            let xv = Vec3::new(p[3][q], p[4][q], p[5][q]);
            let grad = Mat3::from_fn(|i, j| p[6 + 3 * i + j][q]);
            let s = (grad + grad.transpose()) * 0.5;
            let ric_hat = uv * uv.transpose() / (2.0 * nu * nu) - s / nu;
            let xu = xv.dot(&uv);
            let u2 = uv.norm_squared();
            let rxx = xv.dot(&(ric_hat * xv));
            let sxx = xv.dot(&(s * xv));
            let xru = xv.dot(&(ric_hat * uv));
            let xsu = xv.dot(&(s * uv));
            sums[0] += xu * xu;
            sums[1] += rxx;
            sums[2] += sxx;
            sums[3] += xru;
            sums[4] += xu * u2;
            sums[5] += xsu;
            let (e1, e2) = (-nu * rxx, xu * xu / (2.0 * nu));
            gap_e = gap_e.max((e1 + e2 - sxx).abs());
            scale_e = scale_e.max(e1.abs()).max(e2.abs()).max(sxx.abs());
            let (h1, h2) = (-nu * xru, xu * u2 / (2.0 * nu));
            gap_h = gap_h.max((h1 + h2 - xsu).abs());
            scale_h = scale_h.max(h1.abs()).max(h2.abs()).max(xsu.abs());
        }
        let cell = VOLUME / npts as f64;
        let rel = |gap: f64, scale: f64| gap / scale.max(1e-14);
        Ok(BalanceTerms {
            time,
            nu,
            energy: 0.5 * u.norm_sq(),
            grad_u_sq: VOLUME * grad_u_sq,
            enstrophy: 0.5 * xi.norm_sq(),
            grad_xi_sq: VOLUME * grad_xi_sq,
            helicity: helicity(u, xi)?,
            helical_density_sq: sums[0] * cell,
            ric_hat_quad: sums[1] * cell,
            strain_quad: sums[2] * cell,
            curl_xi_xi: VOLUME * curl_xi_xi,
            grad_xi_grad_u: VOLUME * grad_xi_grad_u,
            xi_ric_hat_u: sums[3] * cell,
            helicity_flux: sums[4] * cell,
            xi_strain_u: sums[5] * cell,
            enstrophy_form_gap: rel(gap_e, scale_e),
            helicity_form_gap: rel(gap_h, scale_h),
        })
    }

    pub fn is_finite(&self) -> bool {
        [
            self.energy,
            self.grad_u_sq,
            self.enstrophy,
            self.grad_xi_sq,
            self.helicity,
            self.helical_density_sq,
            self.ric_hat_quad,
            self.strain_quad,
            self.curl_xi_xi,
            self.grad_xi_grad_u,
            self.xi_ric_hat_u,
            self.helicity_flux,
            self.xi_strain_u,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}
