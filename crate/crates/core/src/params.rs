use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

/// Rejected drive configuration.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ParamError {
    /// The Larmor frequency must be finite and strictly positive.
    #[error("omega0 must be finite and > 0, got {0}")]
    Omega0(f64),
    /// The rotation rate must be finite and non-negative.
    #[error("omega must be finite and >= 0, got {0}")]
    Omega(f64),
    /// The polar angle must lie in `[0, π]`.
    #[error("theta must lie in [0, pi], got {0}")]
    Theta(f64),
}

/// Drive configuration of the rotating field.
///
/// `omega0` is the Larmor frequency `γB`, `omega` the rotation rate of the
/// field in the x-y plane and `theta` its polar angle. All frequencies are
/// in radians per unit time; the library does not fix the time unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlParams {
    omega0: f64,
    omega: f64,
    theta: f64,
}

impl ControlParams {
    /// Validates and builds a drive configuration.
    pub fn new(omega0: f64, omega: f64, theta: f64) -> Result<Self, ParamError> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(ParamError::Omega0(omega0));
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(ParamError::Omega(omega));
        }
        if !(theta.is_finite() && (0.0..=PI).contains(&theta)) {
            return Err(ParamError::Theta(theta));
        }
        Ok(Self {
            omega0,
            omega,
            theta,
        })
    }

    /// Larmor frequency `ω₀`.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Field rotation rate `ω`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Polar angle `θ` of the field.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Azimuth of the field at time `t`, `φ(t) = ωt`.
    pub fn azimuth(&self, t: f64) -> f64 {
        self.omega * t
    }

    /// Components `(ω₀ − ω cosθ, ω sinθ)` of the effective field seen in the
    /// frame co-rotating with the drive. Their norm is the Rabi frequency.
    pub(crate) fn rotating_frame_field(&self) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        (self.omega0 - self.omega * c, self.omega * s)
    }
}
