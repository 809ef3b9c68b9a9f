//! Two-level dynamics in the rotating field.
//!
//! The canonical Hamiltonian is the matrix form
//!
//! ```text
//! H(t) = (ω₀/2) [ cosθ            e^{-iωt} sinθ ]
//!               [ e^{iωt} sinθ   -cosθ         ]
//! ```
//!
//! whose eigenvalues are `±ω₀/2` at every instant. In the frame co-rotating
//! with the drive the problem becomes time independent with effective field
//! `(ω₀ − ω cosθ, 0, ω sinθ)` of magnitude `ω̄`, the Rabi frequency; the
//! closed-form coefficients of [`analytic_coefficients`] follow from that.
//! [`ode_propagate`] integrates the Schrödinger equation in the lab frame
//! without using any of it.

mod adiabaticity;
mod basis;
mod coefficients;
mod hamiltonian;
mod ode;

pub use adiabaticity::{
    adiabaticity_parameter, adiabaticity_ratio_numeric, adiabaticity_report, AdiabaticityReport,
};
pub use basis::{basis_sweep, instantaneous_basis, project, BasisError, BasisMode, EigenPair, ORTHOGONALITY_TOL};
pub use coefficients::{
    analytic_coefficients, coefficient_series, propagator_in_basis, rabi_frequency,
    BranchCoefficients,
};
pub use hamiltonian::{hamiltonian, hamiltonian_derivative, hermitian_eigen};
pub use ode::{ode_propagate, ode_trajectory, ode_trajectory_partial, OdeError, OdeOptions, Propagation};
