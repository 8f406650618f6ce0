//! Balance-law residuals over a time series of snapshots.

use crate::flow::{run, FlowState, FluidParams};
use crate::spectral::{SpectralVectorField, VOLUME};
use crate::{Error, Result};

use super::balance::BalanceTerms;

/// Absolute floor for the residual denominators.
pub const RESIDUAL_FLOOR: f64 = 1e-14;

/// |Σ terms| relative to the largest |term|.
pub fn relative_residual(terms: &[f64]) -> f64 {
    let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    terms.iter().sum::<f64>().abs() / scale.max(RESIDUAL_FLOOR)
}

/// Second-order three-point derivative at interior sample i (uneven spacing allowed).
fn centered(times: &[f64], values: &[f64], i: usize) -> f64 {
    let (h1, h2) = (times[i] - times[i - 1], times[i + 1] - times[i]);
    -h2 / (h1 * (h1 + h2)) * values[i - 1] + (h2 - h1) / (h1 * h2) * values[i] + h1 / (h2 * (h1 + h2)) * values[i + 1]
}

fn interior<F>(series: &[BalanceTerms], quantity: impl Fn(&BalanceTerms) -> f64, terms: F) -> Result<Vec<f64>>
where
    F: Fn(f64, &BalanceTerms) -> Vec<f64>,
{
    if series.len() < 3 {
        return Err(Error::TooFewSamples { needed: 3, got: series.len() });
    }
    let times: Vec<f64> = series.iter().map(|s| s.time).collect();
    let values: Vec<f64> = series.iter().map(quantity).collect();
    Ok((1..series.len() - 1)
        .map(|i| relative_residual(&terms(centered(&times, &values, i), &series[i])))
        .collect())
}

/// d/dt(½‖u‖²) + ν‖∇u‖² = 0 (flat torus, Ric = 0).
pub fn energy_residual(series: &[BalanceTerms]) -> Result<Vec<f64>> {
    interior(series, |s| s.energy, |d, s| vec![d, s.nu * s.grad_u_sq])
}

/// d/dt(½‖ξ‖²) + ν‖∇ξ‖² − (1/2ν)∫(ξ·u)² + ν∫(Ric-hat ξ)·ξ = 0.
pub fn enstrophy_residual(series: &[BalanceTerms]) -> Result<Vec<f64>> {
    interior(series, |s| s.enstrophy, |d, s| {
        vec![d, s.nu * s.grad_xi_sq, -s.helical_density_sq / (2.0 * s.nu), s.nu * s.ric_hat_quad]
    })
}

/// d/dt(½‖ξ‖²) + ν‖∇ξ‖² − ∫(Sξ)·ξ = 0.
pub fn enstrophy_strain_residual(series: &[BalanceTerms]) -> Result<Vec<f64>> {
    interior(series, |s| s.enstrophy, |d, s| vec![d, s.nu * s.grad_xi_sq, -s.strain_quad])
}

/// dH/dt + ν∫(∇×ξ)·ξ + ν∫∇ξ:∇u + ν∫ξ·(Ric-hat u) − (1/2ν)∫(ξ·u)|u|² = 0.
pub fn helicity_residual(series: &[BalanceTerms]) -> Result<Vec<f64>> {
    interior(series, |s| s.helicity, |d, s| {
        vec![
            d,
            s.nu * s.curl_xi_xi,
            s.nu * s.grad_xi_grad_u,
            s.nu * s.xi_ric_hat_u,
            -s.helicity_flux / (2.0 * s.nu),
        ]
    })
}

/// dH/dt + ν∫(∇×ξ)·ξ + ν∫∇ξ:∇u − ∫ξ·(S u) = 0.
pub fn helicity_strain_residual(series: &[BalanceTerms]) -> Result<Vec<f64>> {
    interior(series, |s| s.helicity, |d, s| {
        vec![d, s.nu * s.curl_xi_xi, s.nu * s.grad_xi_grad_u, -s.xi_strain_u]
    })
}

/// One interior time sample with its functionals and residuals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub energy: f64,
    pub enstrophy_grad: f64,
    pub helicity: f64,
    pub helical_density_sq: f64,
    pub ric_hat_quad: f64,
    pub residual_energy: f64,
    pub residual_enstrophy: f64,
    pub residual_enstrophy_strain: f64,
    pub residual_helicity: f64,
    pub residual_helicity_strain: f64,
    pub enstrophy_form_gap: f64,
    pub helicity_form_gap: f64,
}

impl DiagnosticsRecord {
    pub const CSV_HEADER: &'static str = "time,energy,enstrophy_grad,helicity,helical_density_sq,ric_hat_quad,\
residual_energy,residual_enstrophy,residual_enstrophy_strain,residual_helicity,residual_helicity_strain,\
enstrophy_form_gap,helicity_form_gap";

    pub fn csv_row(&self) -> String {
        [
            self.time,
            self.energy,
            self.enstrophy_grad,
            self.helicity,
            self.helical_density_sq,
            self.ric_hat_quad,
            self.residual_energy,
            self.residual_enstrophy,
            self.residual_enstrophy_strain,
            self.residual_helicity,
            self.residual_helicity_strain,
            self.enstrophy_form_gap,
            self.helicity_form_gap,
        ]
        .iter()
        .map(|v| format!("{v:.12e}"))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Records for every interior sample of the series.
pub fn records(series: &[BalanceTerms]) -> Result<Vec<DiagnosticsRecord>> {
    let e = energy_residual(series)?;
    let z = enstrophy_residual(series)?;
    let zs = enstrophy_strain_residual(series)?;
    let h = helicity_residual(series)?;
    let hs = helicity_strain_residual(series)?;
    Ok((1..series.len() - 1)
        .map(|i| {
            let s = &series[i];
            let j = i - 1;
            DiagnosticsRecord {
                time: s.time,
                energy: s.energy,
                enstrophy_grad: s.grad_xi_sq,
                helicity: s.helicity,
                helical_density_sq: s.helical_density_sq,
                ric_hat_quad: s.ric_hat_quad,
                residual_energy: e[j],
                residual_enstrophy: z[j],
                residual_enstrophy_strain: zs[j],
                residual_helicity: h[j],
                residual_helicity_strain: hs[j],
                enstrophy_form_gap: s.enstrophy_form_gap,
                helicity_form_gap: s.helicity_form_gap,
            }
        })
        .collect())
}

/// Largest value of every residual and gap over a set of records.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ResidualSummary {
    pub energy: f64,
    pub enstrophy: f64,
    pub enstrophy_strain: f64,
    pub helicity: f64,
    pub helicity_strain: f64,
    pub enstrophy_form_gap: f64,
    pub helicity_form_gap: f64,
}

impl ResidualSummary {
    pub fn of(records: &[DiagnosticsRecord]) -> Self {
        records.iter().fold(ResidualSummary::default(), |m, r| ResidualSummary {
            energy: m.energy.max(r.residual_energy),
            enstrophy: m.enstrophy.max(r.residual_enstrophy),
            enstrophy_strain: m.enstrophy_strain.max(r.residual_enstrophy_strain),
            helicity: m.helicity.max(r.residual_helicity),
            helicity_strain: m.helicity_strain.max(r.residual_helicity_strain),
            enstrophy_form_gap: m.enstrophy_form_gap.max(r.enstrophy_form_gap),
            helicity_form_gap: m.helicity_form_gap.max(r.helicity_form_gap),
        })
    }

    /// Summary row in the same column layout as [`DiagnosticsRecord::csv_row`].
    pub fn csv_row(&self) -> String {
        let cells = [
            "max".to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            format!("{:.12e}", self.energy),
            format!("{:.12e}", self.enstrophy),
            format!("{:.12e}", self.enstrophy_strain),
            format!("{:.12e}", self.helicity),
            format!("{:.12e}", self.helicity_strain),
            format!("{:.12e}", self.enstrophy_form_gap),
            format!("{:.12e}", self.helicity_form_gap),
        ];
        cells.join(",")
    }
}

/// Runs the flow and collects balance terms at every `diag_every` steps.
pub fn record_run(initial: FlowState, params: &FluidParams, diag_every: usize) -> Result<(FlowState, Vec<BalanceTerms>)> {
    let mut series = Vec::new();
    let last = run(initial, params, diag_every, |s| {
        let terms = BalanceTerms::compute(&s.u, &s.xi, params.nu, s.time)?;
        if !terms.is_finite() {
            return Err(Error::NonFinite { what: "diagnostics", time: s.time });
        }
        series.push(terms);
        Ok(())
    })?;
    Ok((last, series))
}

/// ½‖u‖² and ‖∇T_ε u‖² for the mollified energy inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MollifiedEnergy {
    pub time: f64,
    pub energy: f64,
    pub grad_mollified_sq: f64,
}

impl MollifiedEnergy {
    pub fn compute(u: &SpectralVectorField, epsilon: f64, time: f64) -> Self {
        let grid = *u.grid();
        let c = u.coeffs();
        let mut g = 0.0;
        grid.for_each_mode(|idx, k| {
            let kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            g += kk * (-epsilon * kk).exp() * (0..3).map(|d| c[d][idx].norm_sqr()).sum::<f64>();
        });
        MollifiedEnergy { time, energy: 0.5 * u.norm_sq(), grad_mollified_sq: VOLUME * g }
    }
}

/// For each sample, ½‖u_t‖² + ν∫₀ᵗ‖∇T_εu_s‖²ds − ½‖u₀‖² (trapezoidal time
/// integral), divided by ½‖u₀‖². The flat-torus inequality says ≤ 0.
pub fn mollified_energy_excess(series: &[MollifiedEnergy], nu: f64) -> Vec<f64> {
    let Some(first) = series.first() else {
        return Vec::new();
    };
    let e0 = first.energy.max(RESIDUAL_FLOOR);
    let mut integral = 0.0;
    let mut out = Vec::with_capacity(series.len());
    for (i, s) in series.iter().enumerate() {
        if i > 0 {
            let p = &series[i - 1];
            integral += 0.5 * (s.time - p.time) * (s.grad_mollified_sq + p.grad_mollified_sq);
        }
        out.push((s.energy + nu * integral - first.energy) / e0);
    }
    out
}
