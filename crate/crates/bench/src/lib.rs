//! Shared inputs for the criterion benchmarks.

use nsgeom::flow::FlowState;
use nsgeom::spectral::{Grid, SpectralVectorField};
use nsgeom::stochastic::abc_velocity;
use nsgeom::Vec3;

pub fn abc_field(n: usize) -> SpectralVectorField {
    let grid = Grid::new(n).expect("even n >= 4");
    SpectralVectorField::from_fn(grid, |x| abc_velocity(1.0, 1.0, 1.0, &Vec3::from(x)).into())
}

pub fn abc_state(n: usize) -> FlowState {
    FlowState::new(abc_field(n)).expect("ABC is divergence-free")
}
