//! The coupled velocity/vorticity nonlinearity in four sweeps over memory:
//! packed spectral inputs, in-place inverse transforms, pointwise products,
//! in-place forward transforms with a single unpacking pass that also
//! dealiases, projects and takes the curl. Same arithmetic as the
//! field-level version in `rhs`, which the tests compare against.

use num_complex::Complex64;

use crate::spectral::fft::transform;
use crate::spectral::SpectralVectorField;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn zeros(len: usize) -> Vec<Complex64> {
    vec![Complex64::default(); len]
}

pub(crate) fn coupled_nonlinear(
    u: &SpectralVectorField,
    xi: &SpectralVectorField,
) -> Result<(SpectralVectorField, SpectralVectorField)> {
    if xi.grid().n() != u.grid().n() {
        return Err(Error::GridMismatch { left: xi.grid().n(), right: u.grid().n() });
    }
    let grid = *u.grid();
    let n = grid.n();
    let len = grid.len();
    let kd: Vec<f64> = (0..n).map(|m| grid.deriv_wavenumber(m)).collect();
    let keep: Vec<bool> = (0..n).map(|m| grid.keeps_slot(m)).collect();
    let (uc, xc) = (u.coeffs(), xi.coeffs());

    // packed pairs: (u₀,u₁) (u₂,ξ₀) (ξ₁,ξ₂) (ω₀,ω₁) (ω₂,div ξ) (div u, 0)
    let mut p: [Vec<Complex64>; 6] = std::array::from_fn(|_| zeros(len));
    let mut idx = 0;
    for &kz in &kd {
        for &ky in &kd {
            for &kx in &kd {
                let (a, b) = ([uc[0][idx], uc[1][idx], uc[2][idx]], [xc[0][idx], xc[1][idx], xc[2][idx]]);
                let w = [I * (ky * a[2] - kz * a[1]), I * (kz * a[0] - kx * a[2]), I * (kx * a[1] - ky * a[0])];
                let div_xi = I * (kx * b[0] + ky * b[1] + kz * b[2]);
                let div_u = I * (kx * a[0] + ky * a[1] + kz * a[2]);
                p[0][idx] = a[0] + I * a[1];
                p[1][idx] = a[2] + I * b[0];
                p[2][idx] = b[1] + I * b[2];
                p[3][idx] = w[0] + I * w[1];
                p[4][idx] = w[2] + I * div_xi;
                p[5][idx] = div_u;
                idx += 1;
            }
        }
    }
    for a in p.iter_mut() {
        transform(n, a, true);
    }

    // physical fluxes packed in pairs: (λ₀,λ₁) (λ₂,τ₀) (τ₁,τ₂) (ℓ₀,ℓ₁) (ℓ₂,0)
    // with λ = u×ω, τ = u×ξ, ℓ = −u div ξ + ξ div u − ½ ω×ξ
    let mut f: [Vec<Complex64>; 5] = std::array::from_fn(|_| zeros(len));
    for idx in 0..len {
        let up = [p[0][idx].re, p[0][idx].im, p[1][idx].re];
        let xp = [p[1][idx].im, p[2][idx].re, p[2][idx].im];
        let wp = [p[3][idx].re, p[3][idx].im, p[4][idx].re];
        let (dxi, du) = (p[4][idx].im, p[5][idx].re);
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        };
        let lamb = cross(up, wp);
        let tau = cross(up, xp);
        let wx = cross(wp, xp);
        let l: [f64; 3] = std::array::from_fn(|c| -up[c] * dxi + xp[c] * du - 0.5 * wx[c]);
        f[0][idx] = Complex64::new(lamb[0], lamb[1]);
        f[1][idx] = Complex64::new(lamb[2], tau[0]);
        f[2][idx] = Complex64::new(tau[1], tau[2]);
        f[3][idx] = Complex64::new(l[0], l[1]);
        f[4][idx] = Complex64::new(l[2], 0.0);
    }
    for a in f.iter_mut() {
        transform(n, a, false);
    }

    // unpack â = (ẑ(k) + ẑ(−k)*)/2, b̂ = (ẑ(k) − ẑ(−k)*)/2i, then dealias,
    // project λ̂ and form i k × τ̂ + ℓ̂
    let scale = 0.5 / len as f64;
    let mirror = |m: usize| (n - m) % n;
    let mut vel: [Vec<Complex64>; 3] = std::array::from_fn(|_| zeros(len));
    let mut vort: [Vec<Complex64>; 3] = std::array::from_fn(|_| zeros(len));
    for k in 0..n {
        for j in 0..n {
            let row = n * (j + n * k);
            let neg_row = n * (mirror(j) + n * mirror(k));
            for i in 0..n {
                if !(keep[i] && keep[j] && keep[k]) {
                    continue;
                }
                let (idx, neg) = (row + i, neg_row + mirror(i));
                let split = |z: &Vec<Complex64>| {
                    let (a, b) = (z[idx], z[neg].conj());
                    let d = (a - b) * scale;
                    ((a + b) * scale, Complex64::new(d.im, -d.re))
                };
                let (l0, l1) = split(&f[0]);
                let (l2, t0) = split(&f[1]);
                let (t1, t2) = split(&f[2]);
                let (c0, c1) = split(&f[3]);
                let (c2, _) = split(&f[4]);
                let kv = [kd[i], kd[j], kd[k]];
                let kk = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
                let lamb = [l0, l1, l2];
                let dot = if kk > 0.0 { (lamb[0] * kv[0] + lamb[1] * kv[1] + lamb[2] * kv[2]) / kk } else { Complex64::default() };
                for c in 0..3 {
                    vel[c][idx] = lamb[c] - dot * kv[c];
                }
                vort[0][idx] = I * (kv[1] * t2 - kv[2] * t1) + c0;
                vort[1][idx] = I * (kv[2] * t0 - kv[0] * t2) + c1;
                vort[2][idx] = I * (kv[0] * t1 - kv[1] * t0) + c2;
            }
        }
    }
    Ok((SpectralVectorField::from_parts(grid, vel), SpectralVectorField::from_parts(grid, vort)))
}
