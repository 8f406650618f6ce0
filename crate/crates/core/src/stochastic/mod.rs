//! Monte Carlo engines on the orthonormal frame bundle: the frame SDE with
//! stochastic parallel transport, resolvent transport, the Feynman–Kac
//! representation of the vorticity, the heat semigroup on 1-forms and a
//! Bismut-type estimator of □T_tφ.
//!
//! Paths run in parallel with one random stream per path index and are
//! reduced with a pairwise sum in path order, so results depend only on
//! the seed, never on the thread count.

mod bismut;
mod drift;
mod feynman_kac;
mod frame;
mod rng;
mod stats;

pub use bismut::{bismut_square_estimator, quadratic_variation, verify_norm_bound, NormBound, QuadraticVariation};
pub use drift::{abc_strain, abc_velocity, DriftField, DriftSource};
pub use feynman_kac::{
    feynman_kac_vorticity, form_sup_norm, heat_semigroup_form, heat_semigroup_paths, ricci_lower_bound, HeatRun,
};
pub use frame::{
    frame_ricci, frame_strain, metric_gram_schmidt, step_frame_sde, step_heat_resolvent, step_resolvent,
    weitzenbock_two, FrameState, FrameStep,
};
pub use rng::{derive_seed, gaussian_increment, mix64, path_rng};
pub use stats::{
    pairwise_sum, run_paths, scalar_estimate, vector_estimate, McConfig, McEstimate, ScalarEstimate, SdeScheme,
};
