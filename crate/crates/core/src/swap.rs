//! Two-qubit states of particles 2 and 3 after entanglement swapping, and
//! their extension by a local non-adiabatic drive.

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::dynamics::propagator_in_basis;
use crate::{ControlParams, Mat2, NORM_TOL};

/// Failure of [`build_swap_outputs`].
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SwapError {
    /// `|a|² + |b|² ≠ 1`.
    #[error("|a|^2 + |b|^2 = {0}, expected 1")]
    NotNormalized(f64),
}

/// Amplitudes over `|00⟩, |01⟩, |10⟩, |11⟩`; the first label is particle 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    /// Amplitudes in the order `00, 01, 10, 11`.
    pub amps: [C64; 4],
}

impl TwoQubitState {
    /// `Σ|amp|²`
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `u` to one particle.
    pub fn apply_local(&self, u: &Mat2, particle: Particle) -> Self {
        let [a00, a01, a10, a11] = self.amps;
        let m = &u.0;
        let amps = match particle {
            // first index
            Particle::Two => [
                m[0][0] * a00 + m[0][1] * a10,
                m[0][0] * a01 + m[0][1] * a11,
                m[1][0] * a00 + m[1][1] * a10,
                m[1][0] * a01 + m[1][1] * a11,
            ],
            Particle::Three => [
                m[0][0] * a00 + m[0][1] * a01,
                m[1][0] * a00 + m[1][1] * a01,
                m[0][0] * a10 + m[0][1] * a11,
                m[1][0] * a10 + m[1][1] * a11,
            ],
        };
        Self { amps }
    }
}

/// Particle carrying the rotating-field drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Particle {
    /// Particle 2, the first tensor factor.
    #[default]
    Two,
    /// Particle 3, the second tensor factor.
    Three,
}

/// The two swap outputs `a|00⟩ + b|11⟩` and `a|00⟩ − b|11⟩`.
pub fn build_swap_outputs(a: C64, b: C64) -> Result<(TwoQubitState, TwoQubitState), SwapError> {
    let n = a.norm_sqr() + b.norm_sqr();
    if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
        return Err(SwapError::NotNormalized(n));
    }
    let z = C64::new(0.0, 0.0);
    Ok((
        TwoQubitState { amps: [a, z, z, b] },
        TwoQubitState { amps: [a, z, z, -b] },
    ))
}

/// Four states obtained by driving particle 2 of both swap outputs.
///
/// Each base state gets two local maps built from the closed-form propagator
/// `U = [[α₀, β₀], [α₁, β₁]]`: `U` itself, where `|0⟩` follows the up-branch
/// solution, and `XUX`, where the roles of the two initial conditions are
/// exchanged. Output order: `[base1·U, base1·XUX, base2·U, base2·XUX]`.
pub fn extend_swap_family(
    params: &ControlParams,
    t: f64,
    a: C64,
    b: C64,
) -> Result<[TwoQubitState; 4], SwapError> {
    extend_swap_family_on(params, t, a, b, Particle::Two)
}

/// [`extend_swap_family`] driving the chosen particle.
pub fn extend_swap_family_on(
    params: &ControlParams,
    t: f64,
    a: C64,
    b: C64,
    particle: Particle,
) -> Result<[TwoQubitState; 4], SwapError> {
    let (s1, s2) = build_swap_outputs(a, b)?;
    let u = propagator_in_basis(params, t);
    let x = Mat2([
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    ]);
    let swapped = x * u * x;
    Ok([
        s1.apply_local(&u, particle),
        s1.apply_local(&swapped, particle),
        s2.apply_local(&u, particle),
        s2.apply_local(&swapped, particle),
    ])
}

/// Pure-state concurrence `2|a₀₀a₁₁ − a₀₁a₁₀|`.
pub fn concurrence(s: &TwoQubitState) -> f64 {
    let [a00, a01, a10, a11] = s.amps;
    (2.0 * (a00 * a11 - a01 * a10).norm()).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn bell_like_outputs() {
        let (s1, s2) = build_swap_outputs(r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)).unwrap();
        assert_eq!(s1.amps, [r(FRAC_1_SQRT_2), r(0.0), r(0.0), r(FRAC_1_SQRT_2)]);
        assert_eq!(s2.amps[3], r(-FRAC_1_SQRT_2));
        assert!((concurrence(&s1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_endpoint() {
        let (s1, s2) = build_swap_outputs(r(1.0), r(0.0)).unwrap();
        assert_eq!(s1.amps[0], r(1.0));
        assert_eq!(s2.amps[0], r(1.0));
        assert_eq!(concurrence(&s1), 0.0);
    }

    #[test]
    fn real_amplitude_instance() {
        let (s1, s2) = build_swap_outputs(r(0.6), r(0.8)).unwrap();
        assert_eq!(s1.amps, [r(0.6), r(0.0), r(0.0), r(0.8)]);
        assert_eq!(s2.amps, [r(0.6), r(0.0), r(0.0), r(-0.8)]);
        assert!((concurrence(&s1) - 0.96).abs() < 1e-12);
        assert!((concurrence(&s2) - 0.96).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            build_swap_outputs(r(0.6), r(0.6)),
            Err(SwapError::NotNormalized(_))
        ));
    }

    #[test]
    fn family_at_t0_duplicates_base() {
        let p = ControlParams::new(1.0, 2.0, 1.0).unwrap();
        let fam = extend_swap_family(&p, 0.0, r(0.6), r(0.8)).unwrap();
        let (s1, s2) = build_swap_outputs(r(0.6), r(0.8)).unwrap();
        assert_eq!(fam[0], s1);
        assert_eq!(fam[1], s1);
        assert_eq!(fam[2], s2);
        assert_eq!(fam[3], s2);
    }

    #[test]
    fn full_flip_moves_support() {
        let p = ControlParams::new(1.0, 2.0, PI / 3.0).unwrap();
        let t = PI / 3f64.sqrt();
        let fam = extend_swap_family(&p, t, r(0.6), r(0.8)).unwrap();
        // α₀ = 0, α₁ = i: a|00⟩ + b|11⟩ → i·a|10⟩ + i·b|01⟩
        let s = fam[0].amps;
        assert!(s[0].norm() < 1e-12 && s[3].norm() < 1e-12);
        assert!((s[2] - C64::new(0.0, 0.6)).norm() < 1e-12);
        assert!((s[1] - C64::new(0.0, 0.8)).norm() < 1e-12);
    }

    #[test]
    fn particle_three_mirrors_particle_two() {
        let p = ControlParams::new(1.0, 2.0, 0.7).unwrap();
        let on2 = extend_swap_family_on(&p, 1.3, r(0.6), r(0.8), Particle::Two).unwrap();
        let on3 = extend_swap_family_on(&p, 1.3, r(0.6), r(0.8), Particle::Three).unwrap();
        // The base states are symmetric under exchange, so the results are
        // exchanges of each other.
        for (x, y) in on2.iter().zip(&on3) {
            assert!((x.amps[1] - y.amps[2]).norm() < 1e-15);
            assert!((x.amps[0] - y.amps[0]).norm() < 1e-15);
        }
    }
}
