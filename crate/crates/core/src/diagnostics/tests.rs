use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::flow::{FlowState, FluidParams};
use crate::geometry::{intrinsic_ricci_t, scalar_hat, MetricChart};
use crate::spectral::{curl, random_divfree, Grid, SpectralVectorField, VOLUME};
use crate::{Mat3, Vec3};

fn abc(x: [f64; 3]) -> [f64; 3] {
    [x[2].sin() + x[1].cos(), x[0].sin() + x[2].cos(), x[1].sin() + x[0].cos()]
}

fn taylor_green(x: [f64; 3]) -> [f64; 3] {
    [x[0].sin() * x[1].cos() * x[2].cos(), -x[0].cos() * x[1].sin() * x[2].cos(), 0.0]
}

fn series_for(u0: SpectralVectorField, nu: f64, dt: f64, t_end: f64, every: usize) -> Vec<BalanceTerms> {
    let params = FluidParams::new(nu, dt, t_end).unwrap();
    record_run(FlowState::new(u0).unwrap(), &params, every).unwrap().1
}

fn max(v: &[f64]) -> f64 {
    v.iter().cloned().fold(0.0, f64::max)
}

#[test]
fn helicity_of_standard_fields() {
    let g = Grid::new(16).unwrap();
    let u = SpectralVectorField::from_fn(g, abc);
    let h = helicity(&u, &curl(&u)).unwrap();
    assert!((h - 3.0 * VOLUME).abs() < 1e-10 * h, "{h}");
    assert!((h - 744.152).abs() < 2e-3);

    let tg = SpectralVectorField::from_fn(g, taylor_green);
    assert!(helicity(&tg, &curl(&tg)).unwrap().abs() < 1e-10);

    let z = SpectralVectorField::zeros(g);
    assert_eq!(helicity(&z, &z).unwrap(), 0.0);
    assert!(helicity(&z, &SpectralVectorField::zeros(Grid::new(8).unwrap())).is_err());
}

#[test]
fn helicity_is_even_under_sign_flip() {
    let g = Grid::new(16).unwrap();
    let u = random_divfree(g, 3, 4, 1.0).unwrap();
    let m = u.scale(-1.0);
    let (a, b) = (helicity(&u, &curl(&u)).unwrap(), helicity(&m, &curl(&m)).unwrap());
    assert_eq!(a, b);
}

#[test]
fn ricci_hat_shear_and_trace() {
    let g = Grid::new(16).unwrap();
    let gamma = 0.7;
    // (γ sin y, 0, 0) has gradient γ e₂⊗e₁ at y = 0, where u vanishes
    let u = SpectralVectorField::from_fn(g, |x| [gamma * x[1].sin(), 0.0, 0.0]);
    let r = ricci_hat_field(&u, 1.0).unwrap();
    let idx = g.index(3, 0, 5);
    let mut expect = Mat3::zeros();
    expect[(0, 1)] = -gamma / 2.0;
    expect[(1, 0)] = -gamma / 2.0;
    assert!((r.at(idx) - expect).abs().max() < 1e-12);
    // away from y = 0: ½u⊗u − ∇^s u
    let idx = g.index(0, 3, 0);
    let y = g.point(idx)[1];
    let mut expect = Mat3::zeros();
    expect[(0, 0)] = 0.5 * (gamma * y.sin()).powi(2);
    expect[(0, 1)] = -gamma * y.cos() / 2.0;
    expect[(1, 0)] = expect[(0, 1)];
    assert!((r.at(idx) - expect).abs().max() < 1e-12);

    assert!(ricci_hat_field(&u, 0.0).is_err());
    let zero = ricci_hat_field(&SpectralVectorField::zeros(g), 0.3).unwrap();
    assert_eq!(zero.trace_max(), 0.0);
}

#[test]
fn ricci_hat_matches_pointwise_geometry() {
    let g = Grid::new(16).unwrap();
    let nu = 0.3;
    let u = random_divfree(g, 11, 4, 1.0).unwrap();
    let r = ricci_hat_field(&u, nu).unwrap();
    let up = u.to_physical();
    let grads: Vec<[Vec<f64>; 3]> = (0..3)
        .map(|i| {
            let d = u.multiply(|_| 1.0).map_modes(|_, k, v| {
                let ik = num_complex::Complex64::new(0.0, k[i]);
                [v[0] * ik, v[1] * ik, v[2] * ik]
            });
            d.to_physical()
        })
        .collect();
    let chart = MetricChart::flat();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let idx = rng.random_range(0..g.len());
        let x = Vec3::from(g.point(idx));
        let uv = Vec3::new(up[0][idx], up[1][idx], up[2][idx]);
        // du[(j, i)] = ∂_i u_j
        let du = Mat3::from_fn(|j, i| grads[i][j][idx]);
        let geo = intrinsic_ricci_t(&chart, &x, &uv, &du, nu).unwrap();
        assert!((geo - r.at(idx)).abs().max() < 1e-10 * (1.0 + geo.abs().max()));
        let tr = r.at(idx).trace();
        let sh = scalar_hat(&chart, &x, &uv, nu).unwrap();
        assert!((tr - sh).abs() < 1e-12 * (1.0 + sh.abs()), "{tr} {sh}");
    }
}

#[test]
fn pointwise_forms_agree_on_random_data() {
    let g = Grid::new(16).unwrap();
    let u = random_divfree(g, 21, 5, 1.0).unwrap();
    let t = BalanceTerms::compute(&u, &curl(&u), 0.2, 0.0).unwrap();
    assert!(t.enstrophy_form_gap < 1e-12, "{}", t.enstrophy_form_gap);
    assert!(t.helicity_form_gap < 1e-12, "{}", t.helicity_form_gap);
    // integrated versions of the same identities
    let lhs = -t.nu * t.ric_hat_quad + t.helical_density_sq / (2.0 * t.nu);
    assert!((lhs - t.strain_quad).abs() < 1e-10 * t.helical_density_sq / t.nu);
    let lhs = -t.nu * t.xi_ric_hat_u + t.helicity_flux / (2.0 * t.nu);
    assert!((lhs - t.xi_strain_u).abs() < 1e-10 * t.helicity_flux.abs().max(1.0) / t.nu);
}

#[test]
fn quartic_integrals_match_fine_quadrature() {
    // ABC: ξ = u, |u|² = 3 + 2(sin z cos y + sin x cos z + sin y cos x)
    // ∫(ξ·u)² = ∫|u|⁴ = (2π)³(9 + 4·¾) = 12(2π)³
    let g = Grid::new(8).unwrap();
    let u = SpectralVectorField::from_fn(g, abc);
    let t = BalanceTerms::compute(&u, &curl(&u), 1.0, 0.0).unwrap();
    assert!((t.helical_density_sq - 12.0 * VOLUME).abs() < 1e-10 * VOLUME);
    assert!((t.helicity_flux - 12.0 * VOLUME).abs() < 1e-10 * VOLUME);
    // curl ξ = ξ, ∇ξ:∇u = ‖∇u‖² = 3(2π)³ (|k| = 1)
    assert!((t.curl_xi_xi - 3.0 * VOLUME).abs() < 1e-10 * VOLUME);
    assert!((t.grad_xi_grad_u - 3.0 * VOLUME).abs() < 1e-10 * VOLUME);
}

#[test]
fn energy_only_agrees_with_full_terms() {
    let u = random_divfree(Grid::new(16).unwrap(), 5, 4, 0.7).unwrap();
    let full = BalanceTerms::compute(&u, &curl(&u), 0.3, 1.5).unwrap();
    let cheap = BalanceTerms::energy_only(&u, 0.3, 1.5).unwrap();
    assert!((cheap.energy - full.energy).abs() < 1e-12 * full.energy);
    assert!((cheap.grad_u_sq - full.grad_u_sq).abs() < 1e-12 * full.grad_u_sq);
    assert_eq!((cheap.time, cheap.nu, cheap.enstrophy, cheap.helicity), (1.5, 0.3, 0.0, 0.0));
}

#[test]
fn zero_field_has_zero_residuals() {
    let g = Grid::new(8).unwrap();
    let z = SpectralVectorField::zeros(g);
    let series: Vec<_> = (0..4).map(|i| BalanceTerms::compute(&z, &z, 0.1, i as f64 * 0.1).unwrap()).collect();
    for r in [
        energy_residual(&series).unwrap(),
        enstrophy_residual(&series).unwrap(),
        helicity_residual(&series).unwrap(),
    ] {
        assert_eq!(r, vec![0.0, 0.0]);
    }
    assert!(matches!(energy_residual(&series[..2]), Err(crate::Error::TooFewSamples { needed: 3, got: 2 })));
}

#[test]
fn heat_flow_enstrophy_decay() {
    // u = 0, ξ solves the heat equation exactly mode by mode
    let g = Grid::new(16).unwrap();
    let nu = 0.2;
    let xi0 = curl(&random_divfree(g, 4, 5, 1.0).unwrap());
    let z = SpectralVectorField::zeros(g);
    let dt = 1e-4;
    let series: Vec<_> = (0..5)
        .map(|i| {
            let t = i as f64 * dt;
            let xi = xi0.multiply(|k| (-nu * t * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2])).exp());
            BalanceTerms::compute(&z, &xi, nu, t).unwrap()
        })
        .collect();
    assert!(max(&enstrophy_residual(&series).unwrap()) < 1e-6);
    assert!(max(&enstrophy_strain_residual(&series).unwrap()) < 1e-6);
}

#[test]
fn abc_run_balances_close() {
    let g = Grid::new(16).unwrap();
    let nu = 0.1;
    let series = series_for(SpectralVectorField::from_fn(g, abc), nu, 1e-3, 0.5, 10);
    assert!(max(&energy_residual(&series).unwrap()) < 1e-4);
    assert!(max(&enstrophy_residual(&series).unwrap()) < 1e-3);
    assert!(max(&enstrophy_strain_residual(&series).unwrap()) < 1e-3);
    assert!(max(&helicity_residual(&series).unwrap()) < 1e-3);
    assert!(max(&helicity_strain_residual(&series).unwrap()) < 1e-3);
    let h0 = 3.0 * VOLUME;
    for s in &series {
        let exact = h0 * (-2.0 * nu * s.time).exp();
        assert!((s.helicity - exact).abs() < 1e-3 * exact);
    }
    let recs = records(&series).unwrap();
    assert_eq!(recs.len(), series.len() - 2);
    let summary = ResidualSummary::of(&recs);
    assert!(summary.enstrophy_form_gap < 1e-10 && summary.helicity_form_gap < 1e-10);
    assert_eq!(recs[0].csv_row().split(',').count(), DiagnosticsRecord::CSV_HEADER.split(',').count());
    assert_eq!(summary.csv_row().split(',').count(), DiagnosticsRecord::CSV_HEADER.split(',').count());
}

#[test]
fn mirror_symmetric_run_keeps_zero_helicity() {
    let g = Grid::new(16).unwrap();
    let series = series_for(SpectralVectorField::from_fn(g, taylor_green), 0.05, 2e-3, 0.2, 5);
    for s in &series {
        let scale = s.enstrophy.max(1.0);
        assert!(s.helicity.abs() < 1e-8 * scale);
        // every helicity-balance term is parity odd and vanishes on its own
        let sum = s.nu * s.curl_xi_xi + s.nu * s.grad_xi_grad_u + s.nu * s.xi_ric_hat_u - s.helicity_flux / (2.0 * s.nu);
        assert!(sum.abs() < 1e-8 * scale);
    }
}

#[test]
fn residuals_converge_at_second_order() {
    let g = Grid::new(16).unwrap();
    let u0 = random_divfree(g, 9, 3, 0.5).unwrap();
    let probe = 0.008;
    let at_probe = |dt: f64| {
        let series = series_for(u0.clone(), 0.05, dt, 0.016, 1);
        let i = series.iter().position(|s| (s.time - probe).abs() < 1e-9).unwrap() - 1;
        [
            energy_residual(&series).unwrap()[i],
            enstrophy_residual(&series).unwrap()[i],
            enstrophy_strain_residual(&series).unwrap()[i],
            helicity_residual(&series).unwrap()[i],
            helicity_strain_residual(&series).unwrap()[i],
        ]
    };
    let r: Vec<[f64; 5]> = [2e-3, 1e-3, 5e-4].iter().map(|&dt| at_probe(dt)).collect();
    for q in 0..5 {
        for w in r.windows(2) {
            let ratio = w[0][q] / w[1][q];
            assert!((3.0..5.0).contains(&ratio), "quantity {q}: ratio {ratio} ({:e} -> {:e})", w[0][q], w[1][q]);
        }
    }
}

#[test]
fn mollified_energy_stays_below_initial() {
    let g = Grid::new(16).unwrap();
    let nu = 0.1;
    let eps = 0.05;
    let params = FluidParams::mollified(nu, 1e-3, 0.2, eps).unwrap();
    let mut series = Vec::new();
    crate::flow::run(FlowState::new(random_divfree(g, 2, 4, 0.5).unwrap()).unwrap(), &params, 1, |s| {
        series.push(MollifiedEnergy::compute(&s.u, eps, s.time));
        Ok(())
    })
    .unwrap();
    let excess = mollified_energy_excess(&series, nu);
    assert_eq!(excess[0], 0.0);
    assert!(max(&excess) <= 1e-4, "{:e}", max(&excess));
    // equality up to the time discretization
    assert!(excess.iter().all(|e| e.abs() < 1e-4));
}

#[test]
fn relative_residual_floor() {
    assert_eq!(relative_residual(&[0.0, 0.0]), 0.0);
    assert!((relative_residual(&[1.0, -0.999]) - 1e-3).abs() < 1e-12);
    assert_eq!(relative_residual(&[1e-20, 0.0]), 1e-20 / RESIDUAL_FLOOR);
}
