//! Bismut-type estimator of (□T_tφ, v) on the flat torus, the quadratic
//! variation of its martingale, and the L² bound on □T_tφ.

use rayon::prelude::*;

use crate::spectral::{SpectralVectorField, VOLUME};
use crate::{Error, Result, Vec3};

use super::feynman_kac::point_tag;
use super::rng::{gaussian_increment, path_rng};
use super::stats::{run_paths, scalar_estimate, McConfig, ScalarEstimate};

const TAG_BISMUT: u64 = 0x6269_736d;
const TAG_QV: u64 = 0x7176_6172;

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// ⟨A, ε_k∧ε_j⟩ for a 2-vector in the pair basis.
fn pair_component(a: &Vec3, k: usize, j: usize) -> f64 {
    if k == j {
        return 0.0;
    }
    let (lo, hi, sign) = if k < j { (k, j, 1.0) } else { (j, k, -1.0) };
    sign * a[PAIRS.iter().position(|&p| p == (lo, hi)).expect("pair")]
}

/// dW ∧ w in the pair basis.
fn wedge(a: &Vec3, b: &Vec3) -> Vec3 {
    Vec3::from_fn(|p, _| {
        let (i, j) = PAIRS[p];
        a[i] * b[j] - a[j] * b[i]
    })
}

/// Per-path Itô sums on the flat torus, where Q¹ = Q² = Id and // = Id.
struct BismutPath {
    /// x_t − x₀
    displacement: Vec3,
    /// ∫_{t/2}^t dM_s(v)
    integral: Vec3,
}

fn bismut_path(v: &Vec3, steps: usize, h: f64, seed: u64, tag: u64, i: u64) -> BismutPath {
    let mut rng = path_rng(seed, tag, i);
    let mut disp = Vec3::zeros();
    let mut a = Vec3::zeros();
    let mut x_term = 0.0;
    for _ in 0..steps / 2 {
        let db = gaussian_increment(&mut rng, h);
        a += wedge(&db, v);
        x_term += v.dot(&db);
        disp += db;
    }
    let mut integral = Vec3::zeros();
    for _ in steps / 2..steps {
        let db = gaussian_increment(&mut rng, h);
        for k in 0..3 {
            // a_k = Σ_j ⟨A, ε_k∧ε_j⟩ ε_j and b_k = X ε_k
            let mut coeff = Vec3::from_fn(|j, _| pair_component(&a, k, j));
            coeff[k] += x_term;
            integral += coeff * db[k];
        }
        disp += db;
    }
    BismutPath { displacement: disp, integral }
}

fn even_steps(cfg: &McConfig, t: f64) -> Result<(usize, f64)> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    let (n, _) = cfg.steps_for(t);
    let n = n.max(2) + n % 2;
    Ok((n, t / n as f64))
}

/// Estimates (□T_tφ, v)(x₀) by −(4/t²) E⟨φ(x_t), ∫_{t/2}^t dM_s(v)⟩ with
/// dM_s(v) = Σ_k (a_k + b_k) dB^k, on the flat torus with T_t = e^{−t□/2}.
pub fn bismut_square_estimator(
    phi: &(dyn Fn(&Vec3) -> Vec3 + Sync),
    x0: &Vec3,
    v: &Vec3,
    t: f64,
    cfg: &McConfig,
) -> Result<ScalarEstimate> {
    cfg.validate()?;
    let (steps, h) = even_steps(cfg, t)?;
    let tag = point_tag(TAG_BISMUT, x0);
    let scale = -4.0 / (t * t);
    let values: Vec<Option<f64>> = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|i| {
            let p = bismut_path(v, steps, h, cfg.seed, tag, i);
            let val = scale * phi(&(x0 + p.displacement)).dot(&p.integral);
            val.is_finite().then_some(val)
        })
        .collect();
    let (samples, exploded) = run_paths(values.len(), |i| values[i as usize].map(|s| Vec3::new(s, 0.0, 0.0)))?;
    let samples: Vec<f64> = samples.iter().map(|s| s[0]).collect();
    Ok(scalar_estimate(&samples, exploded))
}

/// Sample statistics of the second quadratic-variation term,
/// (∫₀^{t/2}⟨v, dB⟩)², against its Itô-isometry value t|v|²/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticVariation {
    pub sample_variance: f64,
    pub expected: f64,
    /// Mean of 2‖∫₀^{t/2} dB∧v‖² (first term), for reference.
    pub first_term_mean: f64,
}

impl QuadraticVariation {
    pub fn relative_error(&self) -> f64 {
        (self.sample_variance - self.expected).abs() / self.expected
    }
}

pub fn quadratic_variation(v: &Vec3, t: f64, cfg: &McConfig) -> Result<QuadraticVariation> {
    cfg.validate()?;
    let (steps, h) = even_steps(cfg, t)?;
    let samples: Vec<(f64, f64)> = (0..cfg.paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, TAG_QV, i);
            let mut a = Vec3::zeros();
            let mut x = 0.0;
            for _ in 0..steps / 2 {
                let db = gaussian_increment(&mut rng, h);
                a += wedge(&db, v);
                x += v.dot(&db);
            }
            (x, 2.0 * a.norm_squared())
        })
        .collect();
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let est = scalar_estimate(&xs, 0);
    let sample_variance = est.stderr * est.stderr * n;
    let first_term_mean = samples.iter().map(|s| s.1).sum::<f64>() / n;
    Ok(QuadraticVariation { sample_variance, expected: t * v.norm_squared() / 2.0, first_term_mean })
}

/// Spectral L² norm of □T_tφ against (2/t)e^{3κ⁺t/2}√(2(n−1)e^{3κ₂⁺t/2}+1)‖φ‖₂.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormBound {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl NormBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// `phi` holds the components of a 1-form on the flat torus.
pub fn verify_norm_bound(phi: &SpectralVectorField, t: f64, kappa: f64, kappa2: f64) -> Result<NormBound> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("must be positive, got {t}")));
    }
    let grid = *phi.grid();
    let c = phi.coeffs();
    let mut lhs_sq = 0.0;
    for idx in 0..grid.len() {
        // □ on the trigonometric interpolant, Nyquist modes included
        let k2 = grid.int_wavevector(idx).iter().map(|&m| (m * m) as f64).sum::<f64>();
        let m = k2 * (-t * k2 / 2.0).exp();
        lhs_sq += m * m * (0..3).map(|d| c[d][idx].norm_sqr()).sum::<f64>();
    }
    let lhs = (VOLUME * lhs_sq).sqrt();
    let n = 3.0;
    let (kp, k2p) = (kappa.max(0.0), kappa2.max(0.0));
    let rhs = 2.0 / t * (1.5 * kp * t).exp() * (2.0 * (n - 1.0) * (1.5 * k2p * t).exp() + 1.0).sqrt() * phi.norm();
    Ok(NormBound { t, lhs, rhs })
}
