use nsgeom::spectral::{random_divfree, Grid, Snapshot, SpectralVectorField};
use nsgeom::stochastic::abc_velocity;
use nsgeom::{Error, Vec3};

use crate::config::InitKind;

/// Energy density ½‖u‖²/(2π)³ of `random_divfree` initial data.
pub const RANDOM_ENERGY_DENSITY: f64 = 0.5;

/// Band limit of `random_divfree` initial data: a quarter of the grid.
pub fn random_band(n: usize) -> usize {
    (n / 4).max(1)
}

/// Initial velocity; always divergence-free and mean-free on success.
pub fn init_field(kind: &InitKind, grid: Grid) -> Result<SpectralVectorField, Error> {
    let u = match kind {
        InitKind::Abc { a, b, c } => {
            let (a, b, c) = (*a, *b, *c);
            SpectralVectorField::from_fn(grid, move |x| abc_velocity(a, b, c, &Vec3::from(x)).into())
        }
        InitKind::TaylorGreen => SpectralVectorField::from_fn(grid, |x| {
            [x[0].sin() * x[1].cos() * x[2].cos(), -x[0].cos() * x[1].sin() * x[2].cos(), 0.0]
        }),
        InitKind::RandomDivfree { seed } => random_divfree(grid, *seed, random_band(grid.n()), RANDOM_ENERGY_DENSITY)?,
        InitKind::File(path) => {
            let snap = Snapshot::read(path)?;
            if snap.header.n as usize != grid.n() {
                return Err(Error::GridMismatch { left: grid.n(), right: snap.header.n as usize });
            }
            snap.spectral("u")?
        }
    };
    u.require_divergence_free()?;
    if !u.is_mean_free() {
        let c = u.coeffs();
        let magnitude = (c[0][0].norm_sqr() + c[1][0].norm_sqr() + c[2][0].norm_sqr()).sqrt();
        return Err(Error::NonzeroMean { magnitude });
    }
    Ok(u)
}
