use std::io::Write;
use std::path::PathBuf;

use nsgeom::spectral::snapshot::read_header;

use crate::error::{CliError, CliResult, Outcome};

/// Prints the NSRH1 header of every file.
pub fn snapshot_dump(files: &[PathBuf], w: &mut dyn Write) -> CliResult {
    if files.is_empty() {
        return Err(CliError::Usage("no snapshot files given".into()));
    }
    for f in files {
        let h = read_header(f).map_err(CliError::Input)?;
        writeln!(w, "{}: NSRH1 n={} time={} nu={} fields={}", f.display(), h.n, h.time, h.nu, h.names.join(","))?;
    }
    Ok(Outcome::Pass)
}
