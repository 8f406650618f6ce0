mod bismut;
mod diagnose;
mod dump;
mod feynman_kac;
mod geometry;
mod simulate;

pub use bismut::{bismut, BismutMode};
pub use diagnose::diagnose;
pub use dump::snapshot_dump;
pub use feynman_kac::feynman_kac;
pub use geometry::{chart_by_name, geometry_check};
pub use simulate::simulate;

use std::path::Path;

use nsgeom::diagnostics::BalanceTerms;

use crate::config::{parse_config, RunConfig};
use crate::error::CliError;

/// Default relative tolerance for balance-law residuals.
pub const RESIDUAL_TOL: f64 = 1e-3;
/// Allowed pointwise gap between the two algebraic forms of each balance.
pub const FORM_GAP_TOL: f64 = 1e-10;

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

/// The helicity balance is void when every term is at round-off level
/// relative to the enstrophy (mirror-symmetric data); its relative
/// residual is then noise and is not checked.
pub(crate) fn helicity_balance_is_void(s: &BalanceTerms) -> bool {
    let scale = 1e-8 * s.enstrophy.max(1.0);
    [
        s.helicity,
        s.nu * s.curl_xi_xi,
        s.nu * s.grad_xi_grad_u,
        s.nu * s.xi_ric_hat_u,
        s.helicity_flux / (2.0 * s.nu),
    ]
    .iter()
    .all(|t| t.abs() <= scale)
}

pub(crate) fn fmt_e(v: f64) -> String {
    format!("{v:.6e}")
}
