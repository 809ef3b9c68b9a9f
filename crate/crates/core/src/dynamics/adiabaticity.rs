#[allow(unused_imports)]
use num_traits::Float;

use super::basis::{instantaneous_basis, BasisMode};
use super::hamiltonian::hamiltonian_derivative;
use crate::ControlParams;

/// Closed-form adiabaticity parameter `(ω/2ω₀)·sinθ`.
pub fn adiabaticity_parameter(params: &ControlParams) -> f64 {
    params.omega() / (2.0 * params.omega0()) * params.theta().sin()
}

/// `|⟨0(t)|Ḣ(t)|1(t)⟩| / (E₀ − E₁)²` evaluated with the numerically
/// diagonalized basis and the analytic `Ḣ(t)`.
pub fn adiabaticity_ratio_numeric(params: &ControlParams, t: f64) -> f64 {
    let basis = instantaneous_basis(params, t, BasisMode::ExactDiagonalized);
    let hdot = hamiltonian_derivative(params, t);
    let elem = hdot.matrix_element(&basis.state0.amplitudes(), &basis.state1.amplitudes());
    let gap = basis.e0 - basis.e1;
    elem.norm() / (gap * gap)
}

/// Closed-form and sampled adiabaticity diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiabaticityReport {
    /// `(ω/2ω₀)·sinθ`
    pub closed_form: f64,
    /// Largest [`adiabaticity_ratio_numeric`] over the sampled times.
    pub numeric_max: f64,
    /// `closed_form < threshold`
    pub is_adiabatic: bool,
    /// Cutoff standing in for "much less than one".
    pub threshold: f64,
}

/// Builds an [`AdiabaticityReport`] from the given sample times.
pub fn adiabaticity_report(params: &ControlParams, times: &[f64], threshold: f64) -> AdiabaticityReport {
    let closed_form = adiabaticity_parameter(params);
    let numeric_max = times
        .iter()
        .map(|&t| adiabaticity_ratio_numeric(params, t))
        .fold(0.0, f64::max);
    AdiabaticityReport {
        closed_form,
        numeric_max,
        is_adiabatic: closed_form < threshold,
        threshold,
    }
}
