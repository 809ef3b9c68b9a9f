//! Spin-1/2 qubits driven by a rotating magnetic field inside an ideal
//! Stern-Gerlach device.
//!
//! The crate is split along the physics:
//!
//! * [`dynamics`] holds the time-dependent two-level Hamiltonian
//!   `H(t) = (ω₀/2)·n̂(t)·σ` with `n̂(t) = (sinθ cos ωt, sinθ sin ωt, cosθ)`,
//!   its instantaneous eigenbasis, the adiabaticity diagnostics, the
//!   closed-form Rabi coefficients and an adaptive Runge-Kutta integrator that
//!   serves as an independent oracle for all of the above.
//! * [`ensemble`] does the path-spin bookkeeping of the device: branch
//!   probabilities, cluster counts, the branch-selecting converter and its
//!   inverse, and the non-adiabatic qubit multiplier with its `2^n` cascade.
//! * [`gates`] solves the gate-timing conditions (NOT, Z, Hadamard) on the
//!   manifold `cosθ = ω₀/ω` and provides a general parameter search.
//! * [`swap`] builds the two-qubit swap-output states, extends them with a
//!   local non-adiabatic drive and measures their concurrence.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature to use
//! the platform math library instead of `libm`.
#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod dynamics;
pub mod ensemble;
pub mod gates;
mod matrix;
mod optimize;
mod params;
mod state;
pub mod swap;

pub use matrix::Mat2;
pub use num_complex::Complex64 as C64;
pub use params::{ControlParams, ParamError};
pub use state::{fidelity, population_fidelity, QubitState, Spinor, StateError, NORM_TOL};

/// Which Stern-Gerlach output stream a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// The upward stream, fed by the `|0⟩` component.
    Up,
    /// The downward stream, fed by the `|1⟩` component.
    Down,
}
