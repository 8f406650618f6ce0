use std::io::Write;

use nsgeom::geometry::{identity_report, MetricChart};

use super::fmt_e;
use crate::error::{CliError, CliResult, Outcome};

pub fn chart_by_name(name: &str, amplitude: f64) -> Result<MetricChart, CliError> {
    if !(amplitude > 0.0 && amplitude < 1.0) {
        return Err(CliError::Usage(format!("amplitude {amplitude} must lie in (0, 1)")));
    }
    match name {
        "flat" => Ok(MetricChart::flat()),
        "conformal" => Ok(MetricChart::conformal(amplitude)),
        "diagonal" => Ok(MetricChart::diagonal(amplitude)),
        other => Err(CliError::Usage(format!("unknown metric {other:?} (expected flat, conformal or diagonal)"))),
    }
}

pub fn geometry_check(metric: &str, amplitude: f64, samples: usize, seed: u64, w: &mut dyn Write) -> CliResult {
    if samples == 0 {
        return Err(CliError::Usage("need at least one sample".into()));
    }
    let chart = chart_by_name(metric, amplitude)?;
    let report = identity_report(&chart, samples, seed).map_err(CliError::Run)?;
    writeln!(w, "metric {metric}, {samples} samples, seed {seed}")?;
    writeln!(w, "{:<32} {:>14} {:>12}  result", "identity", "max residual", "tolerance")?;
    for c in &report {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(w, "{:<32} {:>14} {:>12}  {status}", c.name, fmt_e(c.max_residual), fmt_e(c.tolerance))?;
    }
    Ok(Outcome::from_pass(report.iter().all(|c| c.passed())))
}
