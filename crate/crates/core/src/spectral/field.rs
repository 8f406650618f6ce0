use num_complex::Complex64;
use rayon::prelude::*;

use super::{forward_real, forward_real_pair, inverse_real, inverse_real_pair, Grid, DIVERGENCE_TOL, VOLUME};
use crate::{Error, Mat3, Result, Vec3};

fn check_len(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.len() {
        return Err(Error::InvalidGrid(format!("array length {len} != n³ = {}", grid.len())));
    }
    Ok(())
}

/// Averages each coefficient with the conjugate of its mirror mode.
fn symmetrize(grid: &Grid, coeffs: &mut [Complex64]) {
    for idx in 0..coeffs.len() {
        let neg = grid.neg_index(idx);
        if neg < idx {
            continue;
        }
        let avg = 0.5 * (coeffs[idx] + coeffs[neg].conj());
        coeffs[idx] = avg;
        coeffs[neg] = avg.conj();
    }
}

fn hermitian_defect_of(grid: &Grid, coeffs: &[Complex64]) -> f64 {
    (0..coeffs.len())
        .map(|idx| (coeffs[idx] - coeffs[grid.neg_index(idx)].conj()).norm())
        .fold(0.0, f64::max)
}

fn eval_series(grid: &Grid, coeffs: &[Complex64], x: [f64; 3]) -> f64 {
    let n = grid.n();
    let phase = |axis: usize| -> Vec<Complex64> {
        (0..n).map(|m| Complex64::from_polar(1.0, grid.wavenumber(m) as f64 * x[axis])).collect()
    };
    let (px, py, pz) = (phase(0), phase(1), phase(2));
    let mut sum = Complex64::default();
    let mut idx = 0;
    for k in 0..n {
        for j in 0..n {
            let pyz = py[j] * pz[k];
            for i in 0..n {
                sum += coeffs[idx] * px[i] * pyz;
                idx += 1;
            }
        }
    }
    sum.re
}

/// Applies `f` to consecutive pairs (or a trailing single) of `items`,
/// in parallel only when the pool has more than one thread: on a single
/// core the hand-off to the pool costs more than a small transform.
fn paired<T: Sync, R: Send>(items: &[T], f: impl Fn(&[T]) -> Vec<R> + Sync + Send) -> Vec<R> {
    let chunks: Vec<Vec<R>> = if rayon::current_num_threads() > 1 {
        items.par_chunks(2).map(&f).collect()
    } else {
        items.chunks(2).map(&f).collect()
    };
    chunks.into_iter().flatten().collect()
}

/// Inverse transforms of several Hermitian coefficient arrays, two per
/// complex transform.
pub(crate) fn to_physical_many(n: usize, arrays: &[&[Complex64]]) -> Vec<Vec<f64>> {
    paired(arrays, |pair| match pair {
        [a, b] => {
            let (x, y) = inverse_real_pair(n, a, b);
            vec![x, y]
        }
        [a] => vec![inverse_real(n, a)],
        _ => unreachable!(),
    })
}

/// Forward transforms of several physical arrays, two per complex transform.
pub(crate) fn to_spectral_many(n: usize, arrays: &[&[f64]]) -> Vec<Vec<Complex64>> {
    paired(arrays, |pair| match pair {
        [a, b] => {
            let (x, y) = forward_real_pair(n, a, b);
            vec![x, y]
        }
        [a] => vec![forward_real(n, a)],
        _ => unreachable!(),
    })
}

/// Real scalar field stored as Fourier coefficients.
#[derive(Clone, Debug)]
pub struct SpectralScalarField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralScalarField {
    pub fn zeros(grid: Grid) -> Self {
        SpectralScalarField { grid, coeffs: vec![Complex64::default(); grid.len()] }
    }

    pub fn from_physical(grid: Grid, values: &[f64]) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(SpectralScalarField { grid, coeffs: forward_real(grid.n(), values) })
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values: Vec<f64> = (0..grid.len()).map(|idx| f(grid.point(idx))).collect();
        SpectralScalarField { grid, coeffs: forward_real(grid.n(), &values) }
    }

    /// Builds from coefficients, projecting onto Hermitian-symmetric arrays.
    pub fn from_coeffs(grid: Grid, mut coeffs: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, coeffs.len())?;
        symmetrize(&grid, &mut coeffs);
        Ok(SpectralScalarField { grid, coeffs })
    }

    pub(crate) fn from_coeffs_unchecked(grid: Grid, coeffs: Vec<Complex64>) -> Self {
        SpectralScalarField { grid, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn to_physical(&self) -> Vec<f64> {
        inverse_real(self.grid.n(), &self.coeffs)
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn eval_at(&self, x: [f64; 3]) -> f64 {
        eval_series(&self.grid, &self.coeffs, x)
    }

    /// ‖s‖₂² over the torus via Parseval.
    pub fn norm_sq(&self) -> f64 {
        VOLUME * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    pub fn hermitian_defect(&self) -> f64 {
        hermitian_defect_of(&self.grid, &self.coeffs)
    }
}

/// Real vector field stored as three arrays of Fourier coefficients.
///
/// Divergence-free and mean-free status is measured on demand; operations
/// that need a divergence-free input check it through
/// [`SpectralVectorField::require_divergence_free`].
#[derive(Clone, Debug)]
pub struct SpectralVectorField {
    grid: Grid,
    coeffs: [Vec<Complex64>; 3],
}

impl SpectralVectorField {
    pub(crate) fn from_parts(grid: Grid, coeffs: [Vec<Complex64>; 3]) -> Self {
        SpectralVectorField { grid, coeffs }
    }

    pub fn zeros(grid: Grid) -> Self {
        let z = vec![Complex64::default(); grid.len()];
        Self::from_parts(grid, [z.clone(), z.clone(), z])
    }

    pub fn from_physical(grid: Grid, values: [&[f64]; 3]) -> Result<Self> {
        for v in values {
            check_len(&grid, v.len())?;
        }
        let c = to_spectral_many(grid.n(), &values);
        let [a, b, d]: [Vec<Complex64>; 3] = c.try_into().expect("three components");
        Ok(Self::from_parts(grid, [a, b, d]))
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let mut comps = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
        for idx in 0..grid.len() {
            let v = f(grid.point(idx));
            for c in 0..3 {
                comps[c][idx] = v[c];
            }
        }
        Self::from_physical(grid, [&comps[0], &comps[1], &comps[2]]).expect("lengths match grid")
    }

    /// Builds from coefficients, projecting onto Hermitian-symmetric arrays.
    pub fn from_coeffs(grid: Grid, mut coeffs: [Vec<Complex64>; 3]) -> Result<Self> {
        for c in coeffs.iter_mut() {
            check_len(&grid, c.len())?;
            symmetrize(&grid, c);
        }
        Ok(Self::from_parts(grid, coeffs))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>; 3] {
        &self.coeffs
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.coeffs[c]
    }

    pub fn into_coeffs(self) -> [Vec<Complex64>; 3] {
        self.coeffs
    }

    pub fn is_mean_free(&self) -> bool {
        let scale = self.max_coeff();
        self.coeffs.iter().all(|c| c[0].norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE))
    }

    pub fn is_divergence_free(&self) -> bool {
        self.divergence_defect() <= DIVERGENCE_TOL
    }

    /// Largest coefficient magnitude over all components and modes.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().flat_map(|c| c.iter()).map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt()
    }

    /// max_k |k·û(k)| / (|k| · max|û|), zero for the zero field.
    pub fn divergence_defect(&self) -> f64 {
        let scale = self.max_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        self.grid.for_each_mode(|idx, k| {
            let kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            if kk == 0.0 {
                return;
            }
            let dot = self.coeffs[0][idx] * k[0] + self.coeffs[1][idx] * k[1] + self.coeffs[2][idx] * k[2];
            worst = worst.max(dot.norm_sqr() / kk);
        });
        worst.sqrt() / scale
    }

    pub fn require_divergence_free(&self) -> Result<()> {
        let worst = self.divergence_defect();
        if worst <= DIVERGENCE_TOL {
            Ok(())
        } else {
            Err(Error::NotDivergenceFree { worst })
        }
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.coeffs.iter().map(|c| hermitian_defect_of(&self.grid, c)).fold(0.0, f64::max)
    }

    pub fn to_physical(&self) -> [Vec<f64>; 3] {
        let v = to_physical_many(self.grid.n(), &[&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]]);
        v.try_into().expect("three components")
    }

    pub fn eval_at(&self, x: [f64; 3]) -> Vec3 {
        Vec3::new(
            eval_series(&self.grid, &self.coeffs[0], x),
            eval_series(&self.grid, &self.coeffs[1], x),
            eval_series(&self.grid, &self.coeffs[2], x),
        )
    }

    /// ‖u‖₂² = (2π)³ Σ_k |û(k)|².
    pub fn norm_sq(&self) -> f64 {
        VOLUME * self.coeffs.iter().flat_map(|c| c.iter()).map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// ‖u‖₂² by midpoint quadrature of the physical samples.
    pub fn physical_norm_sq(&self) -> f64 {
        let cell = self.grid.dx().powi(3);
        self.to_physical().iter().flat_map(|c| c.iter()).map(|v| v * v).sum::<f64>() * cell
    }

    /// ∫ u·w dx via Parseval.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        same_grid(&self.grid, &other.grid)?;
        let s: f64 = (0..3)
            .map(|c| {
                self.coeffs[c].iter().zip(&other.coeffs[c]).map(|(a, b)| (a * b.conj()).re).sum::<f64>()
            })
            .sum();
        Ok(VOLUME * s)
    }

    /// Applies a per-mode map `f(idx, k, [û₁,û₂,û₃])` returning new coefficients.
    pub fn map_modes(&self, f: impl Fn(usize, [f64; 3], [Complex64; 3]) -> [Complex64; 3]) -> Self {
        let len = self.grid.len();
        let mut out = [Vec::with_capacity(len), Vec::with_capacity(len), Vec::with_capacity(len)];
        self.grid.for_each_mode(|idx, k| {
            let v = f(idx, k, [self.coeffs[0][idx], self.coeffs[1][idx], self.coeffs[2][idx]]);
            for c in 0..3 {
                out[c].push(v[c]);
            }
        });
        Self::from_parts(self.grid, out)
    }

    /// Multiplies every mode by a real scalar `m(k)`.
    pub fn multiply(&self, m: impl Fn([f64; 3]) -> f64) -> Self {
        self.map_modes(|_, k, v| {
            let s = m(k);
            [v[0] * s, v[1] * s, v[2] * s]
        })
    }

    pub fn scale(&self, a: f64) -> Self {
        self.multiply(|_| a)
    }

    /// a·self + b·other.
    pub fn lincomb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        let coeffs = std::array::from_fn(|c| {
            self.coeffs[c].iter().zip(&other.coeffs[c]).map(|(x, y)| x * a + y * b).collect()
        });
        Ok(Self::from_parts(self.grid, coeffs))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lincomb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lincomb(1.0, other, -1.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().flat_map(|c| c.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

pub(crate) fn same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::GridMismatch { left: a.n(), right: b.n() });
    }
    Ok(())
}

/// Symmetric 3×3 tensor per grid point, stored as (xx, yy, zz, xy, xz, yz).
#[derive(Clone, Debug)]
pub struct StrainField {
    grid: Grid,
    components: [Vec<f64>; 6],
}

/// Storage order of the six independent entries.
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

impl StrainField {
    pub fn new(grid: Grid, components: [Vec<f64>; 6]) -> Result<Self> {
        for c in &components {
            check_len(&grid, c.len())?;
        }
        Ok(StrainField { grid, components })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>; 6] {
        &self.components
    }

    pub fn get(&self, i: usize, j: usize, idx: usize) -> f64 {
        let slot = SYM_PAIRS.iter().position(|&p| p == (i.min(j), i.max(j))).expect("index < 3");
        self.components[slot][idx]
    }

    pub fn at(&self, idx: usize) -> Mat3 {
        Mat3::from_fn(|i, j| self.get(i, j, idx))
    }

    /// max over the grid of |tr S|.
    pub fn trace_max(&self) -> f64 {
        (0..self.grid.len())
            .map(|idx| (self.components[0][idx] + self.components[1][idx] + self.components[2][idx]).abs())
            .fold(0.0, f64::max)
    }
}
