//! Energy, enstrophy and helicity functionals and the residuals of their
//! balance laws on the flat torus.
//!
//! The enstrophy and helicity balances are checked in two algebraically
//! equivalent forms: one through the intrinsic Ricci tensor
//! Ric-hat = (1/2ν²)u⊗u − (1/ν)∇^s u and one through the strain directly.
//! Time derivatives are centered differences, so residuals exist only at
//! interior samples.

mod balance;
mod residual;

pub use balance::{helicity, ricci_hat_field, BalanceTerms};
pub use residual::{
    energy_residual, enstrophy_residual, enstrophy_strain_residual, helicity_residual, helicity_strain_residual,
    mollified_energy_excess, record_run, records, relative_residual, DiagnosticsRecord, MollifiedEnergy,
    ResidualSummary, RESIDUAL_FLOOR,
};

#[cfg(test)]
mod tests;
