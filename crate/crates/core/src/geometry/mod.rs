//! Pointwise tensor calculus on a single periodic chart of the 3-torus.
//!
//! Index conventions: `Tensor3::get(k, i, j)` is Γ^k_{ij} with
//! ∇_{∂_i} ∂_j = Γ^k_{ij} ∂_k. Ricci-type tensors are returned as (1,1)
//! endomorphisms `M` with Ric(X) = M·X in coordinate components. A vector
//! field derivative `dv` is the Jacobian `dv[(l, c)] = ∂_c v^l`.

mod chart;
mod connection;
mod flat_field;
mod forms;
mod report;

pub use chart::MetricChart;
pub use connection::{
    christoffel_lc, christoffel_lc_derivative, christoffel_v, christoffel_v_derivative,
    covariant_derivative, covariant_derivative_v_formula, intrinsic_ricci, intrinsic_ricci_t,
    k_v, lower, ricci_from_connection, ricci_lc, ricci_v, ricci_v_curvature, ricci_v_n3,
    scalar_curvature, scalar_hat, torsion_divergence, torsion_of, torsion_v, Christoffel,
    ConnectionTensors, IntrinsicRicci, Tensor3, Torsion, DIM,
};
pub use flat_field::{div_ricci_hat, DivRicciHat};
pub use report::{identity_report, IdentityCheck};
pub use forms::{contract_form, hodge_star, skew_contraction_residual, star_strain_residual, FormValue, Orientation};

#[cfg(test)]
mod tests;
