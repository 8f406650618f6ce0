use num_complex::Complex64;

use super::fused::coupled_nonlinear;
use super::{FluidParams, Scheme};
use crate::spectral::field::{to_physical_many, to_spectral_many, SYM_PAIRS};
use crate::spectral::ops::spectral_from_physical;
use crate::spectral::{
    curl, dealias, dealias_scalar, leray_project, SpectralScalarField, SpectralVectorField,
};
use crate::{Error, Result};

fn k2(k: [f64; 3]) -> f64 {
    k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
}

fn cross_at(a: &[Vec<f64>], b: &[Vec<f64>], idx: usize) -> [f64; 3] {
    [
        a[1][idx] * b[2][idx] - a[2][idx] * b[1][idx],
        a[2][idx] * b[0][idx] - a[0][idx] * b[2][idx],
        a[0][idx] * b[1][idx] - a[1][idx] * b[0][idx],
    ]
}

/// −P(dealias((u·∇)u)), evaluated as P(dealias(u × curl u)): the two differ
/// by the gradient ∇|u|²/2, which the projection removes.
pub fn nonlinear_velocity(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    let grid = *u.grid();
    let w = curl(u);
    let (uc, wc) = (u.coeffs(), w.coeffs());
    let phys = to_physical_many(grid.n(), &[&uc[0], &uc[1], &uc[2], &wc[0], &wc[1], &wc[2]]);
    let (up, wp) = phys.split_at(3);
    let mut out = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for idx in 0..grid.len() {
        let v = cross_at(up, wp, idx);
        for c in 0..3 {
            out[c][idx] = v[c];
        }
    }
    Ok(leray_project(&dealias(&spectral_from_physical(grid, out)?)))
}

/// dealias(−(u·∇)ξ + S(u)ξ), evaluated through the identity
/// −(u·∇)ξ + Sξ = curl(u × ξ) − u div ξ + ξ div u − ½ (curl u) × ξ,
/// which needs five physical fields instead of twenty-four.
pub fn nonlinear_vorticity(xi: &SpectralVectorField, u: &SpectralVectorField) -> Result<SpectralVectorField> {
    Ok(coupled_nonlinear(u, xi)?.1)
}

/// Both nonlinear terms from one set of physical fields:
/// (−P(dealias((u·∇)u)), dealias(−(u·∇)ξ + S(u)ξ)). Field-level reference
/// for the fused version the stepper uses.
#[cfg(test)]
pub(crate) fn coupled_nonlinear_fields(
    u: &SpectralVectorField,
    xi: &SpectralVectorField,
) -> Result<(SpectralVectorField, SpectralVectorField)> {
    if xi.grid().n() != u.grid().n() {
        return Err(Error::GridMismatch { left: xi.grid().n(), right: u.grid().n() });
    }
    let grid = *u.grid();
    let w = curl(u);
    let (dx, du) = (crate::spectral::divergence(xi), crate::spectral::divergence(u));
    let (uc, xc, wc) = (u.coeffs(), xi.coeffs(), w.coeffs());
    let phys = to_physical_many(
        grid.n(),
        &[&uc[0], &uc[1], &uc[2], &xc[0], &xc[1], &xc[2], &wc[0], &wc[1], &wc[2], dx.coeffs(), du.coeffs()],
    );
    let (up, rest) = phys.split_at(3);
    let (xp, rest) = rest.split_at(3);
    let (wp, divs) = rest.split_at(3);
    let len = grid.len();
    let mut flux = vec![vec![0.0; len]; 9];
    for idx in 0..len {
        let lamb = cross_at(up, wp, idx);
        let a = cross_at(up, xp, idx);
        let b = cross_at(wp, xp, idx);
        for c in 0..3 {
            flux[c][idx] = lamb[c];
            flux[3 + c][idx] = a[c];
            flux[6 + c][idx] = -up[c][idx] * divs[0][idx] + xp[c][idx] * divs[1][idx] - 0.5 * b[c];
        }
    }
    let refs: Vec<&[f64]> = flux.iter().map(|v| v.as_slice()).collect();
    let mut hats = to_spectral_many(grid.n(), &refs).into_iter();
    let mut next = || hats.next().expect("nine components");
    let lamb = SpectralVectorField::from_parts(grid, [next(), next(), next()]);
    let transport = SpectralVectorField::from_parts(grid, [next(), next(), next()]);
    let local = SpectralVectorField::from_parts(grid, [next(), next(), next()]);
    let velocity = leray_project(&dealias(&lamb));
    let vorticity = dealias(&curl(&transport).add(&local)?);
    Ok((velocity, vorticity))
}

/// −P(∇_u u) − ν□u.
pub fn ns_rhs(u: &SpectralVectorField, nu: f64) -> Result<SpectralVectorField> {
    u.require_divergence_free()?;
    let n = nonlinear_velocity(u)?;
    n.lincomb(1.0, &u.multiply(k2), -nu)
}

/// −∇_u ξ + νΔξ + S(u)ξ.
pub fn vorticity_rhs(xi: &SpectralVectorField, u: &SpectralVectorField, nu: f64) -> Result<SpectralVectorField> {
    let n = nonlinear_vorticity(xi, u)?;
    xi.require_divergence_free()?;
    u.require_divergence_free()?;
    n.lincomb(1.0, &xi.multiply(k2), -nu)
}

/// T_ε = e^{−ε|k|²/2}.
pub(crate) fn mollifier(eps: f64) -> impl Fn([f64; 3]) -> f64 {
    move |k| (-0.5 * eps * k2(k)).exp()
}

/// −T_ε P(dealias((T_ε u)·∇(T_ε u))).
pub(crate) fn mollified_nonlinear(u: &SpectralVectorField, eps: f64) -> Result<SpectralVectorField> {
    let w = u.multiply(mollifier(eps));
    Ok(nonlinear_velocity(&w)?.multiply(mollifier(eps)))
}

/// F_ε(u) = −T_ε P(∇_{T_ε u}(T_ε u)) − ν T_ε □ T_ε u.
pub fn mollified_rhs(u: &SpectralVectorField, params: &FluidParams) -> Result<SpectralVectorField> {
    if params.scheme != Scheme::Mollified {
        return Err(Error::param("scheme", "mollified_rhs needs the mollified scheme"));
    }
    params.validate()?;
    u.require_divergence_free()?;
    let eps = params.epsilon;
    let n = mollified_nonlinear(u, eps)?;
    n.lincomb(1.0, &u.multiply(|k| k2(k) * (-eps * k2(k)).exp()), -params.nu)
}

/// p̂(k) = −k_i k_j (u_i u_j)^(k) / |k|², dealiased, zero mean.
pub fn pressure(u: &SpectralVectorField) -> Result<SpectralScalarField> {
    let grid = *u.grid();
    let up = u.to_physical();
    let prods: Vec<Vec<f64>> = SYM_PAIRS
        .iter()
        .map(|&(i, j)| up[i].iter().zip(&up[j]).map(|(a, b)| a * b).collect())
        .collect();
    let refs: Vec<&[f64]> = prods.iter().map(|v| v.as_slice()).collect();
    let hats = to_spectral_many(grid.n(), &refs);
    let mut acc = vec![Complex64::default(); grid.len()];
    for (&(i, j), c) in SYM_PAIRS.iter().zip(&hats) {
        let w = if i == j { 1.0 } else { 2.0 };
        grid.for_each_mode(|idx, k| {
            let kk = k2(k);
            if kk > 0.0 {
                acc[idx] -= w * k[i] * k[j] * c[idx] / kk;
            }
        });
    }
    Ok(dealias_scalar(&SpectralScalarField::from_coeffs_unchecked(grid, acc)))
}
