use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;
use thiserror::Error;

use super::hamiltonian::{hamiltonian, hermitian_eigen};
use crate::state::{cis, inner};
use crate::{ControlParams, Mat2, QubitState, Spinor};

/// Largest `|⟨state0|state1⟩|` accepted by [`project`].
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Component magnitudes closer than this count as tied when choosing which
/// component carries the real positive phase.
const PHASE_TIE_TOL: f64 = 1e-12;

/// How the instantaneous eigenvectors are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisMode {
    /// The half-angle vectors `(e^{−iωt/2} sin θ/2, e^{iωt/2} cos θ/2)` and
    /// `(e^{iωt/2} sin θ/2, −e^{−iωt/2} cos θ/2)`, verbatim. They are not
    /// eigenvectors of `H(t)` for general `θ`; see [`EigenPair::residual`].
    Literal,
    /// Numerically diagonalized, `E0 = +ω₀/2` first. Each vector has its
    /// larger component real and positive.
    ExactDiagonalized,
    /// The eigenvectors at `t = 0` carried along by the drive rotation
    /// `exp(−iωtσ_z/2)`. In this gauge the closed-form coefficients are the
    /// exact expansion amplitudes, global phase included.
    Corotating,
}

/// Pair of instantaneous eigenvectors with their energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    /// Eigenvector labelled `|0(t)⟩`.
    pub state0: QubitState,
    /// Eigenvector labelled `|1(t)⟩`.
    pub state1: QubitState,
    /// Energy of `state0`, `+ω₀/2`.
    pub e0: f64,
    /// Energy of `state1`, `−ω₀/2`.
    pub e1: f64,
    /// How the pair was built.
    pub mode: BasisMode,
}

impl EigenPair {
    /// `max_k ‖H·state_k − E_k·state_k‖`.
    pub fn residual(&self, h: &Mat2) -> f64 {
        let r = |s: &QubitState, e: f64| {
            let v = s.amplitudes();
            let hv = h.apply(&v);
            ((hv[0] - v[0] * e).norm_sqr() + (hv[1] - v[1] * e).norm_sqr()).sqrt()
        };
        r(&self.state0, self.e0).max(r(&self.state1, self.e1))
    }

    /// `⟨state0|state1⟩`
    pub fn overlap(&self) -> C64 {
        self.state0.inner(&self.state1)
    }

    /// `c0·state0 + c1·state1`
    pub fn compose(&self, c0: C64, c1: C64) -> Spinor {
        let s0 = self.state0.amplitudes();
        let s1 = self.state1.amplitudes();
        [c0 * s0[0] + c1 * s1[0], c0 * s0[1] + c1 * s1[1]]
    }
}

/// Error from [`project`].
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BasisError {
    /// The basis vectors overlap by more than [`ORTHOGONALITY_TOL`].
    #[error("basis is not orthogonal: |<state0|state1>| = {0}")]
    NonOrthogonalBasis(f64),
}

/// Instantaneous eigenbasis of `H(t)` in the requested mode.
pub fn instantaneous_basis(params: &ControlParams, t: f64, mode: BasisMode) -> EigenPair {
    let half = 0.5 * params.omega0();
    let (sh, ch) = (0.5 * params.theta()).sin_cos();
    let phase = cis(0.5 * params.azimuth(t));
    let (state0, state1) = match mode {
        BasisMode::Literal => (
            [phase.conj() * sh, phase * ch],
            [phase * sh, -(phase.conj() * ch)],
        ),
        BasisMode::Corotating => (
            [phase.conj() * ch, phase * sh],
            [phase.conj() * sh, -(phase * ch)],
        ),
        BasisMode::ExactDiagonalized => {
            // ω₀ > 0 is enforced by ControlParams, so the spectrum is split.
            let [(_, v0), (_, v1)] = hermitian_eigen(&hamiltonian(params, t))
                .expect("H(t) has eigenvalues ±ω₀/2 with ω₀ > 0");
            (real_positive_gauge(v0), real_positive_gauge(v1))
        }
    };
    EigenPair {
        state0: QubitState::from_unitary_image(state0),
        state1: QubitState::from_unitary_image(state1),
        e0: half,
        e1: -half,
        mode,
    }
}

/// Evaluates the basis on a grid of times. In `ExactDiagonalized` mode each
/// vector's sign is aligned with the previous sample so that projections
/// vary continuously along the sweep.
pub fn basis_sweep(params: &ControlParams, times: &[f64], mode: BasisMode) -> Vec<EigenPair> {
    let mut out: Vec<EigenPair> = Vec::with_capacity(times.len());
    for &t in times {
        let mut pair = instantaneous_basis(params, t, mode);
        if let (BasisMode::ExactDiagonalized, Some(prev)) = (mode, out.last()) {
            pair.state0 = align_sign(&prev.state0, pair.state0);
            pair.state1 = align_sign(&prev.state1, pair.state1);
        }
        out.push(pair);
    }
    out
}

/// Expansion coefficients `(⟨state0|ψ⟩, ⟨state1|ψ⟩)`.
pub fn project(state: &QubitState, basis: &EigenPair) -> Result<(C64, C64), BasisError> {
    let overlap = basis.overlap().norm();
    if overlap > ORTHOGONALITY_TOL {
        return Err(BasisError::NonOrthogonalBasis(overlap));
    }
    Ok((basis.state0.inner(state), basis.state1.inner(state)))
}

fn real_positive_gauge(v: Spinor) -> Spinor {
    let pivot = if v[1].norm() > v[0].norm() + PHASE_TIE_TOL {
        v[1]
    } else {
        v[0]
    };
    let rot = pivot.conj() / pivot.norm();
    let mut out = [v[0] * rot, v[1] * rot];
    // The pivot is now real up to rounding; make that exact.
    if v[1].norm() > v[0].norm() + PHASE_TIE_TOL {
        out[1] = C64::new(out[1].norm(), 0.0);
    } else {
        out[0] = C64::new(out[0].norm(), 0.0);
    }
    out
}

fn align_sign(prev: &QubitState, cur: QubitState) -> QubitState {
    let a = cur.amplitudes();
    if inner(&prev.amplitudes(), &a).re < 0.0 {
        QubitState::from_unitary_image([-a[0], -a[1]])
    } else {
        cur
    }
}
