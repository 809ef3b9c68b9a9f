#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Tolerance on `|a0|² + |a1|² = 1` for a [`QubitState`].
pub const NORM_TOL: f64 = 1e-12;

/// A raw two-component amplitude vector, not necessarily normalized.
pub type Spinor = [C64; 2];

/// Rejected qubit amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum StateError {
    /// `|a0|² + |a1|²` differs from one by more than [`NORM_TOL`].
    #[error("state is not normalized: |a0|^2 + |a1|^2 = {0}")]
    NotNormalized(f64),
    /// Cannot normalize the zero vector (or a non-finite one).
    #[error("cannot normalize a zero or non-finite vector")]
    Degenerate,
}

/// Normalized qubit `a0|0⟩ + a1|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    a0: C64,
    a1: C64,
}

impl QubitState {
    /// `|0⟩`
    pub const ZERO: Self = Self {
        a0: C64::new(1.0, 0.0),
        a1: C64::new(0.0, 0.0),
    };
    /// `|1⟩`
    pub const ONE: Self = Self {
        a0: C64::new(0.0, 0.0),
        a1: C64::new(1.0, 0.0),
    };

    /// Builds a state from amplitudes that are already normalized.
    pub fn new(a0: C64, a1: C64) -> Result<Self, StateError> {
        let n = a0.norm_sqr() + a1.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(StateError::NotNormalized(n));
        }
        Ok(Self { a0, a1 })
    }

    /// Builds a state by rescaling arbitrary non-zero amplitudes.
    pub fn normalized(a0: C64, a1: C64) -> Result<Self, StateError> {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(StateError::Degenerate);
        }
        Ok(Self {
            a0: a0 / n,
            a1: a1 / n,
        })
    }

    /// Builds a state from real amplitudes, which must be normalized.
    pub fn real(a0: f64, a1: f64) -> Result<Self, StateError> {
        Self::new(C64::new(a0, 0.0), C64::new(a1, 0.0))
    }

    /// Wraps a spinor that the caller guarantees to be normalized up to
    /// rounding (e.g. the image of a normalized state under a unitary).
    pub(crate) fn from_unitary_image(v: Spinor) -> Self {
        Self { a0: v[0], a1: v[1] }
    }

    /// Amplitude of `|0⟩`.
    pub fn a0(&self) -> C64 {
        self.a0
    }

    /// Amplitude of `|1⟩`.
    pub fn a1(&self) -> C64 {
        self.a1
    }

    /// Both amplitudes as a spinor.
    pub fn amplitudes(&self) -> Spinor {
        [self.a0, self.a1]
    }

    /// Measurement probabilities `(|a0|², |a1|²)`.
    pub fn populations(&self) -> (f64, f64) {
        (self.a0.norm_sqr(), self.a1.norm_sqr())
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        inner(&self.amplitudes(), &other.amplitudes())
    }

    /// `|a0|² + |a1|²`, which is one up to rounding.
    pub fn norm_sqr(&self) -> f64 {
        self.a0.norm_sqr() + self.a1.norm_sqr()
    }
}

impl From<QubitState> for Spinor {
    fn from(q: QubitState) -> Self {
        q.amplitudes()
    }
}

/// `⟨u|v⟩` for raw spinors.
pub(crate) fn inner(u: &Spinor, v: &Spinor) -> C64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

/// `e^{iφ}` from a single `sin_cos` call, so results do not depend on
/// whether the optimizer fuses separate `sin` and `cos` calls.
pub(crate) fn cis(phi: f64) -> C64 {
    let (s, c) = phi.sin_cos();
    C64::new(c, s)
}

/// Global-phase-insensitive overlap `|⟨ψ|φ⟩|`, clamped to `[0, 1]`.
pub fn fidelity(psi: &QubitState, phi: &QubitState) -> f64 {
    psi.inner(phi).norm().min(1.0)
}

/// Overlap of the population profiles `Σ_k |p_k||q_k|`.
///
/// Equals one iff the two amplitude vectors have the same populations, so it
/// compares states expressed in bases whose phase conventions differ.
pub fn population_fidelity(p: &Spinor, q: &Spinor) -> f64 {
    (p[0].norm() * q[0].norm() + p[1].norm() * q[1].norm()).min(1.0)
}
