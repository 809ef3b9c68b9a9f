use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;

use crate::{Branch, ControlParams, Mat2};

/// Rabi frequency `ω̄ = √(ω₀² + ω² − 2ω₀ω cosθ)`.
///
/// Evaluated as the norm of the rotating-frame field
/// `(ω₀ − ω cosθ, ω sinθ)`, which is the same quantity without the
/// cancellation of the expanded form near `ω = ω₀, θ = 0`.
pub fn rabi_frequency(params: &ControlParams) -> f64 {
    let (detuning, transverse) = params.rotating_frame_field();
    detuning.hypot(transverse)
}

/// Closed-form expansion coefficients in the instantaneous eigenbasis.
///
/// `Up` starts from `|0(0)⟩` and returns `(α₀, α₁)`:
///
/// ```text
/// α₀ = cos(ω̄t/2) − i (ω₀ − ω cosθ)/ω̄ · sin(ω̄t/2)
/// α₁ = i ω sinθ/ω̄ · sin(ω̄t/2)
/// ```
///
/// `Down` starts from `|1(0)⟩` and returns `(β₀, β₁) = (α₁, conj α₀)`.
/// At `ω̄ = 0` the limit `sin(ω̄t/2)/ω̄ → t/2` is taken, which gives
/// `(1, 0)` and `(0, 1)`.
pub fn analytic_coefficients(params: &ControlParams, t: f64, branch: Branch) -> (C64, C64) {
    let (detuning, transverse) = params.rotating_frame_field();
    let half_angle = 0.5 * rabi_frequency(params) * t;
    // One sin_cos call keeps the bits independent of whether the compiler
    // fuses separate sin and cos calls.
    let (s, c) = half_angle.sin_cos();
    // sin(ω̄t/2)/ω̄ without dividing by ω̄.
    let s_over = if half_angle == 0.0 { 0.5 * t } else { 0.5 * t * (s / half_angle) };
    let diag = C64::new(c, -detuning * s_over);
    let off = C64::new(0.0, transverse * s_over);
    match branch {
        Branch::Up => (diag, off),
        Branch::Down => (off, diag.conj()),
    }
}

/// Unitary propagator in instantaneous-eigenbasis coordinates,
/// `[[α₀, β₀], [α₁, β₁]]`: column `k` is the evolution of `|k(0)⟩`.
pub fn propagator_in_basis(params: &ControlParams, t: f64) -> Mat2 {
    let (a0, a1) = analytic_coefficients(params, t, Branch::Up);
    let (b0, b1) = analytic_coefficients(params, t, Branch::Down);
    Mat2([[a0, b0], [a1, b1]])
}

/// Sampled closed-form coefficients for one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCoefficients {
    /// Sample times, in the order given.
    pub times: Vec<f64>,
    /// `α₀` or `β₀` at each time.
    pub c0: Vec<C64>,
    /// `α₁` or `β₁` at each time.
    pub c1: Vec<C64>,
    /// Which initial condition the series belongs to.
    pub branch: Branch,
}

/// Evaluates [`analytic_coefficients`] on a time grid.
pub fn coefficient_series(params: &ControlParams, times: &[f64], branch: Branch) -> BranchCoefficients {
    let (c0, c1) = times
        .iter()
        .map(|&t| analytic_coefficients(params, t, branch))
        .unzip();
    BranchCoefficients {
        times: times.to_vec(),
        c0,
        c1,
        branch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn rabi_frequency_examples() {
        let p = ControlParams::new(3.0, 4.0, FRAC_PI_2).unwrap();
        assert!((rabi_frequency(&p) - 5.0).abs() < 1e-12);
        let p = ControlParams::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(rabi_frequency(&p), 0.0);
        let p = ControlParams::new(1.0, 2.0, PI / 3.0).unwrap();
        assert!((rabi_frequency(&p) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn initial_conditions() {
        let p = ControlParams::new(1.3, 0.2, 0.9).unwrap();
        assert_eq!(
            analytic_coefficients(&p, 0.0, Branch::Up),
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        );
        assert_eq!(
            analytic_coefficients(&p, 0.0, Branch::Down),
            (C64::new(0.0, 0.0), C64::new(1.0, 0.0))
        );
    }

    #[test]
    fn full_flip_on_manifold() {
        let p = ControlParams::new(1.0, 2.0, PI / 3.0).unwrap();
        let (a0, a1) = analytic_coefficients(&p, PI / 3f64.sqrt(), Branch::Up);
        assert!(a0.norm() < 1e-12);
        assert!((a1 - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_drive_is_identity() {
        let p = ControlParams::new(1.0, 1.0, 0.0).unwrap();
        for t in [0.0, 1.0, 100.0] {
            assert_eq!(
                analytic_coefficients(&p, t, Branch::Up),
                (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
            );
            assert_eq!(
                analytic_coefficients(&p, t, Branch::Down),
                (C64::new(0.0, 0.0), C64::new(1.0, 0.0))
            );
        }
    }

    #[test]
    fn down_branch_sign_pattern() {
        let p = ControlParams::new(1.0, 0.5, PI / 4.0).unwrap();
        let t = 2.0;
        let wbar = rabi_frequency(&p);
        let (s, c) = (0.5 * wbar * t).sin_cos();
        let k = (1.0 - 0.5 * (PI / 4.0).cos()) / wbar;
        let m = 0.5 * (PI / 4.0).sin() / wbar;
        let (a0, a1) = analytic_coefficients(&p, t, Branch::Up);
        let (b0, b1) = analytic_coefficients(&p, t, Branch::Down);
        assert!((a0 - C64::new(c, -k * s)).norm() < 1e-15);
        assert!((a1 - C64::new(0.0, m * s)).norm() < 1e-15);
        assert!((b0 - C64::new(0.0, m * s)).norm() < 1e-15);
        assert!((b1 - C64::new(c, k * s)).norm() < 1e-15);
        assert!((a0.norm_sqr() + a1.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn propagator_is_unitary() {
        let p = ControlParams::new(0.7, 2.3, 1.9).unwrap();
        let u = propagator_in_basis(&p, 4.1);
        assert!((u * u.adjoint()).max_abs_diff(&Mat2::identity()) < 1e-14);
        assert!((u.det() - C64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn series_matches_pointwise() {
        let p = ControlParams::new(1.0, 0.5, 1.0).unwrap();
        let times = [0.0, 0.5, 1.5];
        let s = coefficient_series(&p, &times, Branch::Down);
        assert_eq!(s.c0.len(), 3);
        assert_eq!((s.c0[2], s.c1[2]), analytic_coefficients(&p, 1.5, Branch::Down));
    }
}
