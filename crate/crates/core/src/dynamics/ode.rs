//! Adaptive Dormand-Prince 5(4) integration of `i dψ/dt = H(t) ψ`.
//!
//! This is the numerical ground truth the closed forms are checked against,
//! so it only ever touches `H(t)` through [`hamiltonian`]. The state is never
//! renormalized while integrating; the norm drift is part of the result.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;
use thiserror::Error;

use super::hamiltonian::hamiltonian;
use crate::{ControlParams, QubitState, Spinor};

/// Integrator failure.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OdeError {
    /// The controller asked for a step below [`OdeOptions::min_step`].
    #[error("step size {step:e} fell below the minimum at t = {t}")]
    StepUnderflow {
        /// Time reached.
        t: f64,
        /// Rejected step size.
        step: f64,
    },
    /// Tolerance outside `(0, 1e-4]`.
    #[error("tolerance must lie in (0, 1e-4], got {0}")]
    InvalidTolerance(f64),
    /// Negative, non-finite or decreasing output time.
    #[error("invalid output time {0}")]
    InvalidTime(f64),
    /// [`OdeOptions::max_steps`] exhausted.
    #[error("step budget exhausted at t = {0}")]
    TooManySteps(f64),
}

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Bound on the norm of the local error vector per step.
    pub tol: f64,
    /// Smallest step the controller may take.
    pub min_step: f64,
    /// Upper bound on attempted steps per call.
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            min_step: 1e-12,
            max_steps: 10_000_000,
        }
    }
}

impl OdeOptions {
    /// Default options with a different tolerance.
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Result of [`ode_propagate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagation {
    /// Raw integrated amplitudes at `t`.
    pub amplitudes: Spinor,
    /// Final time.
    pub t: f64,
    /// Accepted steps.
    pub steps: usize,
    /// Rejected step attempts.
    pub rejected: usize,
}

impl Propagation {
    /// `‖ψ(t)‖`
    pub fn norm(&self) -> f64 {
        (self.amplitudes[0].norm_sqr() + self.amplitudes[1].norm_sqr()).sqrt()
    }

    /// The final amplitudes rescaled to unit norm.
    pub fn state(&self) -> QubitState {
        QubitState::normalized(self.amplitudes[0], self.amplitudes[1])
            .expect("integrated state has norm close to one")
    }
}

/// Propagates `psi0` from `t = 0` to `t_end`.
pub fn ode_propagate(
    params: &ControlParams,
    psi0: &QubitState,
    t_end: f64,
    opts: &OdeOptions,
) -> Result<Propagation, OdeError> {
    let mut stepper = Stepper::new(params, psi0.amplitudes(), opts)?;
    stepper.advance_to(t_end)?;
    Ok(Propagation {
        amplitudes: stepper.y,
        t: stepper.t,
        steps: stepper.steps,
        rejected: stepper.rejected,
    })
}

/// Propagates `psi0` from `t = 0` through the non-decreasing `times`,
/// returning the raw amplitudes at each of them.
pub fn ode_trajectory(
    params: &ControlParams,
    psi0: &QubitState,
    times: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<Spinor>, OdeError> {
    match ode_trajectory_partial(params, psi0, times, opts) {
        (out, None) => Ok(out),
        (_, Some(e)) => Err(e),
    }
}

/// [`ode_trajectory`] that keeps the samples reached before a failure.
pub fn ode_trajectory_partial(
    params: &ControlParams,
    psi0: &QubitState,
    times: &[f64],
    opts: &OdeOptions,
) -> (Vec<Spinor>, Option<OdeError>) {
    let mut stepper = match Stepper::new(params, psi0.amplitudes(), opts) {
        Ok(s) => s,
        Err(e) => return (Vec::new(), Some(e)),
    };
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if let Err(e) = stepper.advance_to(t) {
            return (out, Some(e));
        }
        out.push(stepper.y);
    }
    (out, None)
}

// Dormand-Prince tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MAX_GROWTH: f64 = 5.0;
const MIN_SHRINK: f64 = 0.2;

struct Stepper<'a> {
    params: &'a ControlParams,
    opts: &'a OdeOptions,
    t: f64,
    y: Spinor,
    h: f64,
    k1: Spinor,
    steps: usize,
    rejected: usize,
}

impl<'a> Stepper<'a> {
    fn new(params: &'a ControlParams, y0: Spinor, opts: &'a OdeOptions) -> Result<Self, OdeError> {
        if !(opts.tol > 0.0 && opts.tol <= 1e-4) {
            return Err(OdeError::InvalidTolerance(opts.tol));
        }
        let rate = 0.5 * params.omega0() + params.omega();
        let h = (0.5 * opts.tol.powf(0.2) / rate.max(f64::MIN_POSITIVE)).max(opts.min_step);
        let k1 = rhs(params, 0.0, &y0);
        Ok(Self {
            params,
            opts,
            t: 0.0,
            y: y0,
            h,
            k1,
            steps: 0,
            rejected: 0,
        })
    }

    fn advance_to(&mut self, target: f64) -> Result<(), OdeError> {
        if !(target.is_finite() && target >= self.t) {
            return Err(OdeError::InvalidTime(target));
        }
        while self.t < target {
            if self.steps + self.rejected >= self.opts.max_steps {
                return Err(OdeError::TooManySteps(self.t));
            }
            let remaining = target - self.t;
            let clipped = self.h >= remaining;
            let h = if clipped { remaining } else { self.h };
            let (y_new, k7, err) = self.attempt(h);
            let factor = if err == 0.0 {
                MAX_GROWTH
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_SHRINK, MAX_GROWTH)
            };
            if err <= 1.0 {
                self.t = if clipped { target } else { self.t + h };
                self.y = y_new;
                self.k1 = k7;
                self.steps += 1;
                // A clipped final step says nothing about the natural size.
                if !clipped {
                    self.h = h * factor;
                } else {
                    self.h = self.h.max(h * factor);
                }
            } else {
                self.rejected += 1;
                let next = h * factor.min(1.0);
                if next < self.opts.min_step {
                    return Err(OdeError::StepUnderflow {
                        t: self.t,
                        step: next,
                    });
                }
                self.h = next;
            }
        }
        Ok(())
    }

    fn attempt(&self, h: f64) -> (Spinor, Spinor, f64) {
        let zero = C64::new(0.0, 0.0);
        let mut k = [[zero; 2]; 7];
        k[0] = self.k1;
        for s in 1..7 {
            let mut ys = self.y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += kj[0] * (h * a);
                    ys[1] += kj[1] * (h * a);
                }
            }
            k[s] = rhs(self.params, self.t + C[s] * h, &ys);
        }
        // Stage 7 is evaluated at the fifth-order solution (FSAL).
        let mut y_new = self.y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new[0] += kj[0] * (h * A[6][j]);
            y_new[1] += kj[1] * (h * A[6][j]);
        }
        // The state has unit norm, so an absolute bound on the error vector
        // is also a relative one.
        let mut err_sq = 0.0;
        for i in 0..2 {
            let mut e = zero;
            for (s, ks) in k.iter().enumerate() {
                e += ks[i] * (h * E[s]);
            }
            err_sq += e.norm_sqr();
        }
        (y_new, k[6], err_sq.sqrt() / self.opts.tol)
    }
}

/// `dψ/dt = −i H(t) ψ`
fn rhs(params: &ControlParams, t: f64, y: &Spinor) -> Spinor {
    let hy = hamiltonian(params, t).apply(y);
    let minus_i = C64::new(0.0, -1.0);
    [hy[0] * minus_i, hy[1] * minus_i]
}
