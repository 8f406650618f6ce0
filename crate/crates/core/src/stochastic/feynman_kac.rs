//! Path-space representations of the vorticity and of the heat semigroup on
//! 1-forms.

use crate::geometry::{ricci_lc, MetricChart};
use crate::{Mat3, Result, Vec3};

use super::drift::DriftField;
use super::frame::{frame_ricci, frame_strain, step_frame_sde, step_heat_resolvent, step_resolvent, FrameState};
use super::rng::{gaussian_increment, mix64, path_rng};
use super::stats::{run_paths, vector_estimate, McConfig, McEstimate};

const TAG_VORTICITY: u64 = 0x766f_7274;
const TAG_HEAT: u64 = 0x6865_6174;

/// Stream tag that also separates probe points.
pub(crate) fn point_tag(base: u64, x: &Vec3) -> u64 {
    x.iter().fold(base, |h, c| mix64(h ^ c.to_bits()))
}

fn frame_ric(chart: &MetricChart, s: &FrameState, g: &Mat3) -> Result<Mat3> {
    if chart.is_flat() {
        Ok(Mat3::zeros())
    } else {
        Ok(frame_ricci(&s.r, g, &ricci_lc(chart, &s.x)?))
    }
}

/// Monte Carlo estimate of the vorticity ω_t(x) from initial vorticity ω₀
/// (given as a vector field) and a drift u_s, s ∈ [0, t].
///
/// Each path runs the frame SDE backwards in flow time: at path time σ the
/// drift is −u_{t−σ} and the resolvent is driven by J = K − ν ric evaluated
/// at flow time t − σ. The path value is r₀·q₁·F_{ω₀}(r_t), with
/// F_ω(r) = r⁻¹ω. Result components are in chart coordinates.
pub fn feynman_kac_vorticity(
    x: &Vec3,
    t: f64,
    drift: &DriftField,
    omega0: &(dyn Fn(&Vec3) -> Vec3 + Sync),
    chart: &MetricChart,
    cfg: &McConfig,
) -> Result<McEstimate> {
    cfg.validate()?;
    if t == 0.0 {
        return Ok(McEstimate { mean: omega0(x), stderr: Vec3::zeros(), paths: cfg.paths, exploded: 0 });
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(crate::Error::param("t", format!("must be non-negative, got {t}")));
    }
    let (steps, h) = cfg.steps_for(t);
    let start = FrameState::start(chart, *x)?;
    let tag = point_tag(TAG_VORTICITY, x);
    let nu = cfg.nu;
    let back = |sigma: f64, y: &Vec3| -drift.velocity(t - sigma, y);
    let path = |i: u64| -> Option<Vec3> {
        let mut rng = path_rng(cfg.seed, tag, i);
        let mut s = start;
        let mut g = chart.g(&s.x);
        let mut k = frame_strain(&s.r, &g, &drift.strain(t, &s.x));
        let mut ric = frame_ric(chart, &s, &g).ok()?;
        for _ in 0..steps {
            let dw = gaussian_increment(&mut rng, h);
            let next = step_frame_sde(&s, chart, back, &dw, h, nu).ok()?.state;
            let g1 = chart.g(&next.x);
            let k1 = frame_strain(&next.r, &g1, &drift.strain(t - next.time, &next.x));
            let ric1 = frame_ric(chart, &next, &g1).ok()?;
            s = step_resolvent(&next, &((k + k1) * 0.5), &((ric + ric1) * 0.5), nu, h);
            (g, k, ric) = (g1, k1, ric1);
        }
        let f = s.r.transpose() * g * omega0(&s.x);
        Some(start.r * (s.q1 * f))
    };
    let (samples, exploded) = run_paths(cfg.paths, path)?;
    Ok(vector_estimate(&samples, exploded))
}

/// Monte Carlo estimate of (T_tφ)(r₀ε_i), T_t = e^{−t□/2}, for a 1-form φ
/// given by its chart components. The SDE is driftless with generator ½Δ
/// (so `cfg.nu` is not used) and the resolvent solves dQ̂/dt = −½ ric Q̂.
/// Components are in the orthonormal frame r₀ at x₀.
pub fn heat_semigroup_form(
    phi: &(dyn Fn(&Vec3) -> Vec3 + Sync),
    x0: &Vec3,
    t: f64,
    chart: &MetricChart,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(heat_semigroup_paths(phi, x0, t, chart, cfg)?.0)
}

/// Contraction data collected alongside the heat-semigroup estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatRun {
    /// Largest operator norm of Q̂¹_t over all paths.
    pub max_q1_norm: f64,
    /// Smallest Ricci eigenvalue seen along all paths.
    pub min_ricci: f64,
}

/// Heat-semigroup estimate together with resolvent and curvature extremes.
pub fn heat_semigroup_paths(
    phi: &(dyn Fn(&Vec3) -> Vec3 + Sync),
    x0: &Vec3,
    t: f64,
    chart: &MetricChart,
    cfg: &McConfig,
) -> Result<(McEstimate, HeatRun)> {
    cfg.validate()?;
    let start = FrameState::start(chart, *x0)?;
    if t == 0.0 {
        let v = start.r.transpose() * phi(x0);
        let est = McEstimate { mean: v, stderr: Vec3::zeros(), paths: cfg.paths, exploded: 0 };
        return Ok((est, HeatRun { max_q1_norm: 1.0, min_ricci: f64::INFINITY }));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(crate::Error::param("t", format!("must be non-negative, got {t}")));
    }
    let (steps, h) = cfg.steps_for(t);
    let tag = point_tag(TAG_HEAT, x0);
    let none = |_: f64, _: &Vec3| Vec3::zeros();
    // value, ‖q1‖, min eigenvalue of ric packed into one reduction
    let results: Vec<Option<(Vec3, f64, f64)>> = {
        use rayon::prelude::*;
        (0..cfg.paths as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = path_rng(cfg.seed, tag, i);
                let mut s = start;
                let mut ric = frame_ric(chart, &s, &chart.g(&s.x)).ok()?;
                let mut min_ric = ric.symmetric_eigenvalues().min();
                for _ in 0..steps {
                    let dw = gaussian_increment(&mut rng, h);
                    let next = step_frame_sde(&s, chart, none, &dw, h, 0.5).ok()?.state;
                    let g1 = chart.g(&next.x);
                    let ric1 = frame_ric(chart, &next, &g1).ok()?;
                    min_ric = min_ric.min(ric1.symmetric_eigenvalues().min());
                    s = step_heat_resolvent(&next, &((ric + ric1) * 0.5), h);
                    ric = ric1;
                }
                let f = s.r.transpose() * phi(&s.x);
                Some((s.q1.transpose() * f, (s.q1.transpose() * s.q1).symmetric_eigenvalues().max().sqrt(), min_ric))
            })
            .collect()
    };
    let finite: Vec<(Vec3, f64, f64)> =
        results.into_iter().flatten().filter(|r| r.0.iter().all(|c| c.is_finite())).collect();
    let exploded = cfg.paths - finite.len();
    if exploded * 1000 > cfg.paths || finite.is_empty() {
        return Err(crate::Error::PathExplosion { exploded, paths: cfg.paths });
    }
    let samples: Vec<Vec3> = finite.iter().map(|r| r.0).collect();
    let max_q1_norm = finite.iter().fold(0.0_f64, |m, r| m.max(r.1));
    let min_ricci = finite.iter().fold(f64::INFINITY, |m, r| m.min(r.2));
    Ok((vector_estimate(&samples, exploded), HeatRun { max_q1_norm, min_ricci }))
}

/// Smallest eigenvalue of the frame Ricci matrix over a uniform n³ sample
/// of the periodic cell.
pub fn ricci_lower_bound(chart: &MetricChart, n: usize) -> Result<f64> {
    let h = std::f64::consts::TAU / n as f64;
    let mut min = f64::INFINITY;
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let x = Vec3::new(i as f64 * h, j as f64 * h, k as f64 * h);
                let r = chart.frame(&x)?;
                let ric = frame_ricci(&r, &chart.g(&x), &ricci_lc(chart, &x)?);
                min = min.min(ric.symmetric_eigenvalues().min());
            }
        }
    }
    Ok(min)
}

/// sup over a uniform n³ sample of the pointwise norm |φ|_g of a 1-form.
pub fn form_sup_norm(phi: &dyn Fn(&Vec3) -> Vec3, chart: &MetricChart, n: usize) -> Result<f64> {
    let h = std::f64::consts::TAU / n as f64;
    let mut sup: f64 = 0.0;
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let x = Vec3::new(i as f64 * h, j as f64 * h, k as f64 * h);
                let p = phi(&x);
                sup = sup.max(p.dot(&(chart.g_inv(&x)? * p)).sqrt());
            }
        }
    }
    Ok(sup)
}
