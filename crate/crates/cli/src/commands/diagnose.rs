use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nsgeom::diagnostics::{records, BalanceTerms, DiagnosticsRecord, ResidualSummary};
use nsgeom::spectral::Snapshot;
use nsgeom::Error;
use rayon::prelude::*;

use super::{fmt_e, helicity_balance_is_void, FORM_GAP_TOL};
use crate::error::{CliError, CliResult, Outcome};

/// Snapshot files (`*.nsrh`) in a directory, unordered.
fn snapshot_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let p = entry?.path();
        if p.extension().is_some_and(|e| e == "nsrh") {
            files.push(p);
        }
    }
    Ok(files)
}

/// Reads every snapshot in `dir` (fields `u` and `xi`), evaluates the
/// balance laws and writes `identities.csv` (to `out` if given).
pub fn diagnose(dir: &Path, out: Option<&Path>, tolerance: f64, w: &mut dyn Write) -> CliResult {
    let files = snapshot_files(dir)?;
    let mut series: Vec<BalanceTerms> = files
        .par_iter()
        .map(|p| {
            let snap = Snapshot::read(p)?;
            let u = snap.spectral("u")?;
            let xi = snap.spectral("xi")?;
            BalanceTerms::compute(&u, &xi, snap.header.nu, snap.header.time)
        })
        .collect::<Result<_, Error>>()
        .map_err(CliError::Input)?;
    series.sort_by(|a, b| a.time.total_cmp(&b.time));
    if let Some(s) = series.iter().find(|s| s.nu != series[0].nu) {
        return Err(CliError::Input(Error::InvalidParameter {
            name: "nu",
            reason: format!("snapshots disagree on viscosity ({} vs {})", series[0].nu, s.nu),
        }));
    }
    let recs = records(&series).map_err(CliError::Input)?;
    let summary = ResidualSummary::of(&recs);

    let mut csv = String::from(DiagnosticsRecord::CSV_HEADER);
    csv.push('\n');
    for r in &recs {
        csv.push_str(&r.csv_row());
        csv.push('\n');
    }
    csv.push_str(&summary.csv_row());
    csv.push('\n');
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| dir.join("identities.csv"));
    fs::write(&path, csv)?;

    let void = series[1..series.len() - 1].iter().all(helicity_balance_is_void);
    let checks = [
        ("energy", summary.energy, tolerance, false),
        ("enstrophy", summary.enstrophy, tolerance, false),
        ("enstrophy (strain form)", summary.enstrophy_strain, tolerance, false),
        ("helicity", summary.helicity, tolerance, void),
        ("helicity (strain form)", summary.helicity_strain, tolerance, void),
        ("enstrophy form gap", summary.enstrophy_form_gap, FORM_GAP_TOL, false),
        ("helicity form gap", summary.helicity_form_gap, FORM_GAP_TOL, false),
    ];
    writeln!(w, "{} snapshots, {} interior samples -> {}", series.len(), recs.len(), path.display())?;
    let mut pass = true;
    for (name, value, tol, skipped) in checks {
        let status = if skipped {
            "SKIP (terms at round-off)"
        } else if value <= tol {
            "PASS"
        } else {
            pass = false;
            "FAIL"
        };
        writeln!(w, "{name:<26} {:>14}  tol {:>12}  {status}", fmt_e(value), fmt_e(tol))?;
    }
    Ok(Outcome::from_pass(pass))
}
