use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::{dealias, leray_project, Grid, SpectralVectorField, VOLUME};
use crate::stochastic::path_rng;
use crate::{Error, Result};

/// Stream tag for initial-data generation ("RANDFLD").
const RANDOM_FIELD_TAG: u64 = 0x52414E44_464C44;

/// Leray-projected Gaussian field with modes 1 ≤ |k|_∞ ≤ `kmax`, spectrum
/// |û(k)|² ∝ e^{−|k|²/kmax²}, rescaled so ½‖u‖²/(2π)³ = `energy_density`.
/// Bit-reproducible from `seed`.
pub fn random_divfree(grid: Grid, seed: u64, kmax: usize, energy_density: f64) -> Result<SpectralVectorField> {
    let limit = grid.n() / 2 - 1;
    if kmax == 0 || kmax > limit {
        return Err(Error::param("kmax", format!("{kmax} outside 1..={limit}")));
    }
    if !(energy_density > 0.0 && energy_density.is_finite()) {
        return Err(Error::param("energy_density", format!("{energy_density} must be positive")));
    }
    let mut rng = path_rng(seed, RANDOM_FIELD_TAG, 0);
    let kk = (kmax * kmax) as f64;
    let mut coeffs: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::default(); grid.len()]);
    for idx in 0..grid.len() {
        let k = grid.int_wavevector(idx);
        let inf = k.iter().map(|m| m.unsigned_abs() as usize).max().unwrap_or(0);
        // Draw for every slot so the stream position never depends on kmax.
        let draws: [f64; 6] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        if inf == 0 || inf > kmax {
            continue;
        }
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        let amp = (-0.5 * k2 / kk).exp();
        for d in 0..3 {
            coeffs[d][idx] = Complex64::new(draws[2 * d], draws[2 * d + 1]) * amp;
        }
    }
    let raw = SpectralVectorField::from_coeffs(grid, coeffs)?;
    let u = dealias(&leray_project(&raw));
    let e = 0.5 * u.norm_sq() / VOLUME;
    if e == 0.0 {
        return Err(Error::param("kmax", "no resolved modes survive dealiasing"));
    }
    Ok(u.scale((energy_density / e).sqrt()))
}
