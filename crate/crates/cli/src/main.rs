use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nsgeom::Vec3;
use nsgeom_cli::commands::{self, BismutMode, RESIDUAL_TOL};
use nsgeom_cli::CliResult;

#[derive(Parser)]
#[command(name = "nsgeom", version, about = "Navier-Stokes geometry and stochastic representation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the flow solver, writing snapshots and diagnostics.csv
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = RESIDUAL_TOL)]
        tolerance: f64,
    },
    /// Evaluate balance-law residuals over a snapshot directory
    Diagnose {
        #[arg(long)]
        snapshots: PathBuf,
        /// Output file, default <snapshots>/identities.csv
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = RESIDUAL_TOL)]
        tolerance: f64,
    },
    /// Check pointwise geometric identities at random samples
    GeometryCheck {
        #[arg(long, value_parser = ["flat", "conformal", "diagonal"])]
        metric: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Deformation amplitude of the conformal and diagonal metrics
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
    },
    /// Monte Carlo vorticity at probe points
    FeynmanKac {
        #[arg(long)]
        config: PathBuf,
        /// Probe point as x,y,z; repeatable
        #[arg(long = "probe", value_parser = parse_point, required = true)]
        probes: Vec<Vec3>,
        #[arg(long)]
        t: f64,
    },
    /// Bismut-type estimator and norm-bound checks
    Bismut {
        #[arg(long)]
        mode: BismutMode,
        /// Comma-separated times
        #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.5, 1.0])]
        t: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 0.01)]
        dt: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print NSRH1 snapshot headers
    SnapshotDump {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn parse_point(s: &str) -> Result<Vec3, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
        _ => Err(format!("expected x,y,z, got {s:?}")),
    }
}

fn dispatch(command: Command, w: &mut dyn Write) -> CliResult {
    match command {
        Command::Simulate { config, out, tolerance } => commands::simulate(&config, &out, tolerance, w),
        Command::Diagnose { snapshots, out, tolerance } => commands::diagnose(&snapshots, out.as_deref(), tolerance, w),
        Command::GeometryCheck { metric, samples, seed, amplitude } => {
            commands::geometry_check(&metric, amplitude, samples, seed, w)
        }
        Command::FeynmanKac { config, probes, t } => commands::feynman_kac(&config, &probes, t, w),
        Command::Bismut { mode, t, paths, dt, seed } => commands::bismut(mode, &t, paths, dt, seed, w),
        Command::SnapshotDump { files } => commands::snapshot_dump(&files, w),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let code = match dispatch(cli.command, &mut lock) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    let _ = lock.flush();
    ExitCode::from(code as u8)
}
