use std::io::Write;
use std::str::FromStr;

use nsgeom::spectral::{random_divfree, Grid};
use nsgeom::stochastic::{bismut_square_estimator, quadratic_variation, verify_norm_bound, McConfig};
use nsgeom::Vec3;

use super::fmt_e;
use crate::error::{CliError, CliResult, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BismutMode {
    /// Single-mode estimate of (□T_tφ, v)(x₀) and the quadratic-variation check.
    Square,
    /// Spectral check of the ‖□T_tφ‖₂ bound at each requested time.
    Bound,
}

impl FromStr for BismutMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "square" => Ok(BismutMode::Square),
            "bound" => Ok(BismutMode::Bound),
            other => Err(format!("unknown mode {other:?} (expected square or bound)")),
        }
    }
}

/// Relative tolerance of the quadratic-variation identity.
const QV_TOL: f64 = 0.05;

pub fn bismut(mode: BismutMode, times: &[f64], paths: usize, dt: f64, seed: u64, w: &mut dyn Write) -> CliResult {
    if times.is_empty() || times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(CliError::Usage("times must be positive".into()));
    }
    match mode {
        BismutMode::Square => {
            // generator ½Δ, so the diffusion coefficient ν plays no role
            let cfg = McConfig::new(paths, dt, seed, 0.5).map_err(CliError::Input)?;
            let k = Vec3::new(1.0, 1.0, 0.0);
            let amp = Vec3::new(0.3, -0.2, 1.0);
            let phi = move |x: &Vec3| amp * (k.dot(x) + 0.4).sin();
            let x0 = Vec3::new(0.7, 0.2, 1.1);
            let v = Vec3::new(1.0, 0.5, -0.5);
            writeln!(w, "phi = (0.3,-0.2,1) sin(x+y+0.4), x0 = (0.7,0.2,1.1), v = (1,0.5,-0.5), {paths} paths")?;
            writeln!(w, "{:>6} {:>14} {:>12} {:>14} {:>6} {:>10} {:>6}", "t", "estimate", "stderr", "oracle", "3se", "qv error", "qv")?;
            let mut pass = true;
            for &t in times {
                let est = bismut_square_estimator(&phi, &x0, &v, t, &cfg).map_err(CliError::Run)?;
                let k2 = k.norm_squared();
                let oracle = k2 * (-t * k2 / 2.0).exp() * phi(&x0).dot(&v);
                let ok = est.agrees_with(oracle, 3.0);
                let qv = quadratic_variation(&v, t, &cfg).map_err(CliError::Run)?;
                let qv_ok = qv.relative_error() <= QV_TOL;
                pass &= ok && qv_ok;
                writeln!(
                    w,
                    "{t:>6} {:>14} {:>12} {:>14} {:>6} {:>10} {:>6}",
                    fmt_e(est.mean),
                    fmt_e(est.stderr),
                    fmt_e(oracle),
                    if ok { "PASS" } else { "FAIL" },
                    format!("{:.4}", qv.relative_error()),
                    if qv_ok { "PASS" } else { "FAIL" }
                )?;
            }
            Ok(Outcome::from_pass(pass))
        }
        BismutMode::Bound => {
            let grid = Grid::new(16).map_err(CliError::Input)?;
            let phi = random_divfree(grid, seed, 5, 0.5).map_err(CliError::Input)?;
            writeln!(w, "random 1-form (seed {seed}) on the flat torus, kappa = kappa2 = 0")?;
            writeln!(w, "{:>6} {:>14} {:>14}  result", "t", "lhs", "rhs")?;
            let mut pass = true;
            for &t in times {
                let b = verify_norm_bound(&phi, t, 0.0, 0.0).map_err(CliError::Run)?;
                pass &= b.holds();
                writeln!(w, "{t:>6} {:>14} {:>14}  {}", fmt_e(b.lhs), fmt_e(b.rhs), if b.holds() { "PASS" } else { "FAIL" })?;
            }
            Ok(Outcome::from_pass(pass))
        }
    }
}
