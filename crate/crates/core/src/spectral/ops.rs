//! Fourier-multiplier differential operators and pseudo-spectral products.

use num_complex::Complex64;

use super::field::{same_grid, to_physical_many, to_spectral_many, SYM_PAIRS};
use super::{SpectralScalarField, SpectralVectorField, StrainField};
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn k2(k: [f64; 3]) -> f64 {
    k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
}

/// Forward then inverse transform.
pub fn fft_roundtrip(u: &SpectralVectorField) -> SpectralVectorField {
    let phys = u.to_physical();
    SpectralVectorField::from_physical(*u.grid(), [&phys[0], &phys[1], &phys[2]])
        .expect("same grid")
}

pub fn gradient(s: &SpectralScalarField) -> SpectralVectorField {
    let grid = *s.grid();
    let c = s.coeffs();
    let len = grid.len();
    let mut out = [vec![Complex64::default(); len], vec![Complex64::default(); len], vec![Complex64::default(); len]];
    grid.for_each_mode(|idx, k| {
        for j in 0..3 {
            out[j][idx] = I * k[j] * c[idx];
        }
    });
    SpectralVectorField::from_parts(grid, out)
}

pub fn curl(u: &SpectralVectorField) -> SpectralVectorField {
    u.map_modes(|_, k, v| {
        [
            I * (k[1] * v[2] - k[2] * v[1]),
            I * (k[2] * v[0] - k[0] * v[2]),
            I * (k[0] * v[1] - k[1] * v[0]),
        ]
    })
}

pub fn divergence(u: &SpectralVectorField) -> SpectralScalarField {
    let grid = *u.grid();
    let c = u.coeffs();
    let mut out = vec![Complex64::default(); grid.len()];
    grid.for_each_mode(|idx, k| {
        out[idx] = I * (k[0] * c[0][idx] + k[1] * c[1][idx] + k[2] * c[2][idx]);
    });
    SpectralScalarField::from_coeffs_unchecked(grid, out)
}

/// û ← û − k(k·û)/|k|² for k ≠ 0; the mean mode is left alone.
pub fn leray_project(u: &SpectralVectorField) -> SpectralVectorField {
    u.map_modes(|_, k, v| {
        let kk = k2(k);
        if kk == 0.0 {
            return v;
        }
        let dot = (v[0] * k[0] + v[1] * k[1] + v[2] * k[2]) / kk;
        [v[0] - dot * k[0], v[1] - dot * k[1], v[2] - dot * k[2]]
    })
}

/// Δu, the componentwise Laplacian.
pub fn laplacian(u: &SpectralVectorField) -> SpectralVectorField {
    u.multiply(|k| -k2(k))
}

/// Flat Hodge Laplacian □u = −Δu, defined on divergence-free fields.
pub fn hodge_laplacian_flat(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    u.require_divergence_free()?;
    Ok(u.multiply(k2))
}

/// Velocity with curl equal to `xi`: û = i k×ξ̂ / |k|².
pub fn biot_savart(xi: &SpectralVectorField) -> Result<SpectralVectorField> {
    xi.require_divergence_free()?;
    let c = xi.coeffs();
    let mean = (c[0][0].norm_sqr() + c[1][0].norm_sqr() + c[2][0].norm_sqr()).sqrt();
    if mean > 1e-14 * xi.max_coeff().max(1.0) {
        return Err(Error::NonzeroMean { magnitude: mean });
    }
    Ok(xi.map_modes(|_, k, v| {
        let kk = k2(k);
        if kk == 0.0 {
            return [Complex64::default(); 3];
        }
        [
            I * (k[1] * v[2] - k[2] * v[1]) / kk,
            I * (k[2] * v[0] - k[0] * v[2]) / kk,
            I * (k[0] * v[1] - k[1] * v[0]) / kk,
        ]
    }))
}

/// Rate of strain S_ij = (∂_i u_j + ∂_j u_i)/2 in physical space.
pub fn strain(u: &SpectralVectorField) -> StrainField {
    let grid = *u.grid();
    let c = u.coeffs();
    let spectral: Vec<Vec<Complex64>> = SYM_PAIRS
        .iter()
        .map(|&(i, j)| {
            let mut out = vec![Complex64::default(); grid.len()];
            grid.for_each_mode(|idx, k| {
                out[idx] = 0.5 * I * (k[i] * c[j][idx] + k[j] * c[i][idx]);
            });
            out
        })
        .collect();
    let refs: Vec<&[Complex64]> = spectral.iter().map(|v| v.as_slice()).collect();
    let phys = to_physical_many(grid.n(), &refs);
    StrainField::new(grid, phys.try_into().expect("six components")).expect("grid lengths")
}

/// Zeroes every mode with some |k_j| above the dealiasing cutoff.
pub fn dealias(u: &SpectralVectorField) -> SpectralVectorField {
    let mask = u.grid().keep_mask();
    u.map_modes(|idx, _, v| if mask[idx] { v } else { [Complex64::default(); 3] })
}

pub fn dealias_scalar(s: &SpectralScalarField) -> SpectralScalarField {
    let grid = *s.grid();
    let mask = grid.keep_mask();
    let coeffs = s
        .coeffs()
        .iter()
        .zip(&mask)
        .map(|(&c, &keep)| if keep { c } else { Complex64::default() })
        .collect();
    SpectralScalarField::from_coeffs_unchecked(grid, coeffs)
}

/// Physical-space velocity gradient, entry `3*i + j` holding ∂_i u_j.
pub fn gradient_tensor_physical(u: &SpectralVectorField) -> Vec<Vec<f64>> {
    let grid = *u.grid();
    let c = u.coeffs();
    let spectral: Vec<Vec<Complex64>> = (0..9)
        .map(|e| {
            let (i, j) = (e / 3, e % 3);
            let mut out = vec![Complex64::default(); grid.len()];
            grid.for_each_mode(|idx, k| out[idx] = I * k[i] * c[j][idx]);
            out
        })
        .collect();
    let refs: Vec<&[Complex64]> = spectral.iter().map(|v| v.as_slice()).collect();
    to_physical_many(grid.n(), &refs)
}

/// (u·∇)w by pointwise products in physical space, not dealiased.
pub fn advection(u: &SpectralVectorField, w: &SpectralVectorField) -> Result<SpectralVectorField> {
    same_grid(u.grid(), w.grid())?;
    let grid = *u.grid();
    let up = u.to_physical();
    let gw = gradient_tensor_physical(w);
    let mut prod = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for idx in 0..grid.len() {
        for j in 0..3 {
            prod[j][idx] = up[0][idx] * gw[j][idx] + up[1][idx] * gw[3 + j][idx] + up[2][idx] * gw[6 + j][idx];
        }
    }
    spectral_from_physical(grid, prod)
}

/// Physical samples on an m³ grid (m ≥ n) of the trigonometric
/// interpolants of `arrays`, by zero padding. Nyquist modes of the source
/// grid are dropped; dealiased fields have none.
pub(crate) fn padded_physical(grid: &super::Grid, arrays: &[&[Complex64]], m: usize) -> Vec<Vec<f64>> {
    let n = grid.n();
    assert!(m >= n && m % 2 == 0, "padded grid must be even and at least as fine");
    let half = (n / 2) as i64;
    let mut targets = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let k = grid.int_wavevector(idx);
        if k.iter().any(|&c| c == half) {
            continue;
        }
        let f = |c: i64| c.rem_euclid(m as i64) as usize;
        targets.push((idx, f(k[0]) + m * (f(k[1]) + m * f(k[2]))));
    }
    let padded: Vec<Vec<Complex64>> = arrays
        .iter()
        .map(|a| {
            let mut out = vec![Complex64::default(); m * m * m];
            for &(src, dst) in &targets {
                out[dst] = a[src];
            }
            out
        })
        .collect();
    let refs: Vec<&[Complex64]> = padded.iter().map(|v| v.as_slice()).collect();
    to_physical_many(m, &refs)
}

pub(crate) fn spectral_from_physical(
    grid: super::Grid,
    values: [Vec<f64>; 3],
) -> Result<SpectralVectorField> {
    let c = to_spectral_many(grid.n(), &[&values[0], &values[1], &values[2]]);
    Ok(SpectralVectorField::from_parts(grid, c.try_into().expect("three components")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    fn abc(x: [f64; 3]) -> [f64; 3] {
        [x[2].sin() + x[1].cos(), x[0].sin() + x[2].cos(), x[1].sin() + x[0].cos()]
    }

    fn max_diff(a: &SpectralVectorField, f: impl Fn([f64; 3]) -> [f64; 3]) -> f64 {
        let p = a.to_physical();
        let g = a.grid();
        let mut worst: f64 = 0.0;
        for idx in 0..g.len() {
            let e = f(g.point(idx));
            for c in 0..3 {
                worst = worst.max((p[c][idx] - e[c]).abs());
            }
        }
        worst
    }

    #[test]
    fn gradient_of_sines() {
        let g = Grid::new(16).unwrap();
        let s = SpectralScalarField::from_fn(g, |x| x[0].sin() * x[1].sin());
        let gr = gradient(&s);
        let err = max_diff(&gr, |x| [x[0].cos() * x[1].sin(), x[0].sin() * x[1].cos(), 0.0]);
        assert!(err < 1e-13, "{err}");
        let c = SpectralScalarField::from_fn(g, |_| 2.5);
        assert!(gradient(&c).max_coeff() == 0.0);
    }

    #[test]
    fn curl_examples() {
        let g = Grid::new(16).unwrap();
        let u = SpectralVectorField::from_fn(g, abc);
        assert!(max_diff(&curl(&u), abc) < 1e-13);
        let w = SpectralVectorField::from_fn(g, |x| [0.0, 0.0, x[0].sin()]);
        assert!(max_diff(&curl(&w), |x| [0.0, -x[0].cos(), 0.0]) < 1e-13);
        let c = SpectralVectorField::from_fn(g, |_| [1.0, -2.0, 3.0]);
        assert_eq!(curl(&c).max_coeff(), 0.0);
    }

    #[test]
    fn divergence_examples() {
        let g = Grid::new(16).unwrap();
        let u = SpectralVectorField::from_fn(g, abc);
        assert!(divergence(&u).to_physical().iter().all(|v| v.abs() < 1e-13));
        let shear = SpectralVectorField::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
        assert!(divergence(&shear).to_physical().iter().all(|v| v.abs() < 1e-13));
        let s = SpectralScalarField::from_fn(g, |x| x[0].sin());
        let lap = divergence(&gradient(&s)).to_physical();
        for idx in 0..g.len() {
            assert!((lap[idx] + g.point(idx)[0].sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn leray_examples() {
        let g = Grid::new(16).unwrap();
        let s = SpectralScalarField::from_fn(g, |x| x[0].sin() * x[1].sin());
        assert!(leray_project(&gradient(&s)).max_coeff() < 1e-15);
        let u = SpectralVectorField::from_fn(g, abc);
        let pu = leray_project(&u);
        assert!(pu.sub(&u).unwrap().max_coeff() < 1e-15);
        let mixed = u.add(&gradient(&s)).unwrap();
        assert!(leray_project(&mixed).sub(&u).unwrap().max_coeff() < 1e-15);
        assert!(!mixed.is_divergence_free());
        assert!(leray_project(&mixed).is_divergence_free());
    }

    #[test]
    fn hodge_laplacian_examples() {
        let g = Grid::new(16).unwrap();
        let u = SpectralVectorField::from_fn(g, abc);
        let lu = hodge_laplacian_flat(&u).unwrap();
        assert!(lu.sub(&u).unwrap().max_coeff() < 1e-13);
        let m = leray_project(&SpectralVectorField::from_fn(g, |x| [0.0, 0.0, x[0].cos()]));
        let lm = hodge_laplacian_flat(&m).unwrap();
        assert!(lm.sub(&m).unwrap().max_coeff() < 1e-13);
        let c = SpectralVectorField::from_fn(g, |_| [1.0, 1.0, 1.0]);
        assert_eq!(hodge_laplacian_flat(&c).unwrap().max_coeff(), 0.0);
        let s = SpectralScalarField::from_fn(g, |x| x[0].sin());
        assert!(matches!(hodge_laplacian_flat(&gradient(&s)), Err(Error::NotDivergenceFree { .. })));
    }

    #[test]
    fn biot_savart_examples() {
        let g = Grid::new(16).unwrap();
        let u = SpectralVectorField::from_fn(g, abc);
        assert!(biot_savart(&u).unwrap().sub(&u).unwrap().max_coeff() < 1e-15);
        let z = SpectralVectorField::zeros(g);
        assert_eq!(biot_savart(&z).unwrap().max_coeff(), 0.0);
        let with_mean = SpectralVectorField::from_fn(g, |x| {
            let a = abc(x);
            [a[0] + 1.0, a[1], a[2]]
        });
        assert!(matches!(biot_savart(&with_mean), Err(Error::NonzeroMean { .. })));
    }

    #[test]
    fn strain_examples() {
        let g = Grid::new(16).unwrap();
        let gamma = 0.7;
        // Periodic shear: linearization at y = 0 is the linear shear (γy, 0, 0).
        let shear = SpectralVectorField::from_fn(g, |x| [gamma * x[1].sin(), 0.0, 0.0]);
        let s = strain(&shear).at(0);
        let expect = crate::Mat3::new(0.0, gamma / 2.0, 0.0, gamma / 2.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!((s - expect).abs().max() < 1e-13);

        // Rigid rotation on the torus, locally (−y, x, 0) near the origin.
        let rot = SpectralVectorField::from_fn(g, |x| [-x[1].sin(), x[0].sin(), 0.0]);
        assert!(strain(&rot).at(0).abs().max() < 1e-13);

        // ABC at the origin: ∂_x u_y = cos x = 1, ∂_y u_x = −sin y = 0, ∂_y u_z = cos y = 1,
        // ∂_z u_y = −sin z = 0, ∂_z u_x = cos z = 1, ∂_x u_z = −sin x = 0.
        let u = SpectralVectorField::from_fn(g, abc);
        let s = strain(&u);
        let at0 = s.at(0);
        let expect = crate::Mat3::new(0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0);
        assert!((at0 - expect).abs().max() < 1e-13);
        assert!(s.trace_max() < 1e-10);
    }

    #[test]
    fn dealias_examples() {
        let g = Grid::new(12).unwrap();
        let low = SpectralVectorField::from_fn(g, |x| [(4.0 * x[0]).cos(), x[1].sin(), 0.0]);
        let d = dealias(&low);
        for c in 0..3 {
            for idx in 0..g.len() {
                if g.keeps(idx) {
                    assert_eq!(d.component(c)[idx], low.component(c)[idx]);
                } else {
                    assert!(low.component(c)[idx].norm() < 1e-15);
                }
            }
        }
        let high = SpectralVectorField::from_fn(g, |x| [(5.0 * x[2]).cos(), 0.0, 0.0]);
        assert!(dealias(&high).max_coeff() < 1e-15);
        let mut c: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::default(); g.len()]);
        c[1][g.index(0, 5, 0)] = Complex64::new(0.5, 0.0);
        c[1][g.index(0, 7, 0)] = Complex64::new(0.5, 0.0);
        let single = SpectralVectorField::from_coeffs(g, c).unwrap();
        assert_eq!(dealias(&single).max_coeff(), 0.0);
        let mixed = low.add(&high).unwrap();
        let dm = dealias(&mixed);
        for idx in 0..g.len() {
            if g.keeps(idx) {
                assert_eq!(dm.component(0)[idx], mixed.component(0)[idx]);
            }
        }
    }

    #[test]
    fn advection_of_shear_by_constant() {
        let g = Grid::new(16).unwrap();
        let u = SpectralVectorField::from_fn(g, |_| [0.0, 2.0, 0.0]);
        let w = SpectralVectorField::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
        let a = advection(&u, &w).unwrap();
        assert!(max_diff(&a, |x| [2.0 * x[1].cos(), 0.0, 0.0]) < 1e-13);
    }
}
