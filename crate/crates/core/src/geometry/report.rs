//! Randomized identity checks on one chart, as used by `geometry-check`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::stochastic::derive_seed;
use crate::{Mat3, Result, Vec3};

const REPORT_TAG: u64 = 0x47454F_434845434B;

/// Largest residual of one identity over the sampled points.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.max_residual.is_finite() && self.max_residual <= self.tolerance
    }
}

fn unit_box(rng: &mut ChaCha8Rng) -> Vec3 {
    Vec3::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

fn unit_mat(rng: &mut ChaCha8Rng) -> Mat3 {
    Mat3::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

/// Sup-norm of a matrix gap relative to 1 + the larger side.
fn rel(a: &Mat3, b: &Mat3) -> f64 {
    (a - b).abs().max() / (1.0 + a.abs().max().max(b.abs().max()))
}

/// Checks every pointwise identity at `samples` random (x, v, ∇v) draws.
///
/// Intrinsic-Ricci comparisons use 1e-5 when the chart has analytic metric
/// derivatives and 1e-3 when they come from finite differences; the purely
/// algebraic form identities use 1e-12.
pub fn identity_report(chart: &MetricChart, samples: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, REPORT_TAG));
    let ricci_tol = if chart.has_analytic_derivatives() { 1e-5 } else { 1e-3 };
    let mut worst = [0.0_f64; 8];
    for _ in 0..samples {
        let x = Vec3::from_fn(|_, _| rng.random_range(0.0..std::f64::consts::TAU));
        let (v, dv) = (unit_box(&mut rng), unit_mat(&mut rng));
        let (a, b, dy) = (unit_box(&mut rng), unit_box(&mut rng), unit_mat(&mut rng));
        let nu = rng.random_range(0.1..2.0);

        let lc = christoffel_lc(chart, &x)?;
        worst[0] = worst[0].max(torsion_of(&lc).max_abs());

        let gv = christoffel_v(chart, &x, &v)?;
        let direct = covariant_derivative(&gv, &a, &b, &dy);
        let formula = covariant_derivative_v_formula(chart, &x, &v, &a, &b, &dy)?;
        worst[1] = worst[1].max((direct - formula).abs().max() / (1.0 + direct.abs().max()));

        worst[2] = worst[2].max(rel(&ricci_v(chart, &x, &v, &dv)?, &ricci_v_curvature(chart, &x, &v, &dv)?));

        let ir = intrinsic_ricci(chart, &x, &v, &dv)?;
        worst[3] = worst[3].max(rel(&ir.assembled, &ir.closed_form));

        // u with v = −u/2ν reproduces the time-dependent form
        let (u, du) = (v * (-2.0 * nu), dv * (-2.0 * nu));
        let it = intrinsic_ricci_t(chart, &x, &u, &du, nu)?;
        worst[4] = worst[4].max(rel(&it, &ir.closed_form));

        // make ∇⁰u trace-free so div u = 0 at x
        let div = du.trace() + (0..3).map(|i| (0..3).map(|m| lc.get(i, i, m) * u[m]).sum::<f64>()).sum::<f64>();
        let du0 = du - Mat3::identity() * (div / 3.0);
        let tr = intrinsic_ricci_t(chart, &x, &u, &du0, nu)?.trace();
        let sh = scalar_hat(chart, &x, &u, nu)?;
        worst[5] = worst[5].max((tr - sh).abs() / (1.0 + sh.abs()));

        worst[6] = worst[6].max(skew_contraction_residual(&unit_mat(&mut rng)));

        let m = unit_mat(&mut rng);
        let s = (m + m.transpose()) * 0.5 - Mat3::identity() * (m.trace() / 3.0);
        let omega = FormValue::two_form(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        worst[7] = worst[7].max(star_strain_residual(&omega, &s)?);
    }
    let names_tols: [(&'static str, f64); 8] = [
        ("levi_civita_torsion_free", 1e-12),
        ("deformed_covariant_derivative", 1e-12),
        ("deformed_ricci_closed_form", ricci_tol),
        ("intrinsic_ricci_closed_form", ricci_tol),
        ("intrinsic_ricci_time_form", 1e-12),
        ("intrinsic_ricci_trace", 1e-12),
        ("skew_gradient_contraction", 1e-12),
        ("hodge_star_strain", 1e-12),
    ];
    Ok(names_tols
        .iter()
        .zip(worst)
        .map(|(&(name, tolerance), max_residual)| IdentityCheck { name, max_residual, tolerance, samples })
        .collect())
}
