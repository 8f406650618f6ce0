use std::io::Write;
use std::path::Path;

use nsgeom::flow::{run, FlowState, FluidParams};
use nsgeom::geometry::MetricChart;
use nsgeom::spectral::Grid;
use nsgeom::stochastic::{abc_velocity, feynman_kac_vorticity, DriftField, McConfig};
use nsgeom::Vec3;

use super::{fmt_e, load_config};
use crate::config::InitKind;
use crate::error::{CliError, CliResult, Outcome};
use crate::init::init_field;

/// Stderr multiple for the oracle comparison.
const AGREEMENT: f64 = 3.0;

/// Monte Carlo vorticity ω_t at each probe on the flat torus. ABC data use
/// the exact decaying drift and report the oracle e^{−νt}u₀(x); other data
/// first run the flow solver to `t` and interpolate its snapshots.
pub fn feynman_kac(config: &Path, probes: &[Vec3], t: f64, w: &mut dyn Write) -> CliResult {
    if probes.is_empty() {
        return Err(CliError::Usage("need at least one --probe".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("t = {t} must be non-negative")));
    }
    let cfg = load_config(config)?;
    let mc = McConfig::new(cfg.mc_paths, cfg.mc_dt, cfg.seed, cfg.nu).map_err(CliError::Input)?;
    let chart = MetricChart::flat();

    type Omega = Box<dyn Fn(&Vec3) -> Vec3 + Sync>;
    let (drift, omega0, oracle): (DriftField, Omega, Option<Omega>) = match cfg.init {
        InitKind::Abc { a, b, c } => {
            let nu = cfg.nu;
            let decay = (-nu * t).exp();
            (
                DriftField::decaying_abc(a, b, c, nu),
                Box::new(move |x| abc_velocity(a, b, c, x)),
                Some(Box::new(move |x| abc_velocity(a, b, c, x) * decay)),
            )
        }
        ref kind => {
            let grid = Grid::new(cfg.n).map_err(CliError::Input)?;
            let u0 = init_field(kind, grid).map_err(CliError::Input)?;
            let state = FlowState::new(u0).map_err(CliError::Input)?;
            let xi0 = DriftField::from_snapshots(&[(0.0, state.xi.clone())]).map_err(CliError::Run)?;
            let params = FluidParams { nu: cfg.nu, dt: cfg.dt, t_end: t, scheme: cfg.scheme, epsilon: cfg.epsilon };
            params.validate().map_err(CliError::Input)?;
            let mut frames = Vec::new();
            run(state, &params, cfg.diag_every, |s| {
                frames.push((s.time, s.u.clone()));
                Ok(())
            })
            .map_err(CliError::Run)?;
            let drift = DriftField::from_snapshots(&frames).map_err(CliError::Run)?;
            (drift, Box::new(move |x| xi0.velocity(0.0, x)), None)
        }
    };

    writeln!(
        w,
        "x,y,z,t,omega_x,omega_y,omega_z,stderr_x,stderr_y,stderr_z,paths,exploded,oracle_x,oracle_y,oracle_z,within_3se"
    )?;
    let mut pass = true;
    for x in probes {
        let est = feynman_kac_vorticity(x, t, &drift, omega0.as_ref(), &chart, &mc).map_err(CliError::Run)?;
        let mut row = format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            x[0],
            x[1],
            x[2],
            t,
            fmt_e(est.mean[0]),
            fmt_e(est.mean[1]),
            fmt_e(est.mean[2]),
            fmt_e(est.stderr[0]),
            fmt_e(est.stderr[1]),
            fmt_e(est.stderr[2]),
            est.paths,
            est.exploded
        );
        match &oracle {
            Some(f) => {
                let o = f(x);
                let ok = est.agrees_with(&o, AGREEMENT);
                pass &= ok;
                row.push_str(&format!(",{},{},{},{}", fmt_e(o[0]), fmt_e(o[1]), fmt_e(o[2]), ok));
            }
            None => row.push_str(",,,,"),
        }
        writeln!(w, "{row}")?;
    }
    Ok(Outcome::from_pass(pass))
}
