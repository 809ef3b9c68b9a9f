//! Gate timing on the manifold `cosθ = ω₀/ω` and general parameter search.
//!
//! On the manifold the up-branch coefficients reduce to
//! `α₀ = cos(ω̄t/2)`, `α₁ = i sin(ω̄t/2)` with `ω̄ = √(ω² − ω₀²)`. Each named
//! gate fixes both of them from the input amplitudes:
//!
//! | gate     | `cos(ω̄τ/2)`       | `i sin(ω̄τ/2)`     |
//! |----------|-------------------|-------------------|
//! | NOT      | `a1`              | `a0`              |
//! | Z        | `a0`              | `−a1`             |
//! | Hadamard | `(a0 + a1)/√2`    | `(a0 − a1)/√2`    |
//!
//! so a real `τ` exists only for inputs where the first target is real, the
//! second is imaginary and the two lie on the unit circle. Infeasible inputs
//! are reported with the condition that fails.

use alloc::boxed::Box;
use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::dynamics::{
    analytic_coefficients, hamiltonian, instantaneous_basis, ode_propagate, propagator_in_basis,
    rabi_frequency, BasisMode, OdeError, OdeOptions,
};
use crate::optimize::{golden_section, linspace};
use crate::state::{cis, inner};
use crate::{fidelity, population_fidelity, Branch, ControlParams, Mat2, QubitState};

/// Slack on "real", "imaginary", "in [−1, 1]" and `cos² + sin² = 1`.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Largest condition violation accepted for a solved gate.
pub const RESIDUAL_TOL: f64 = 1e-9;

/// Infidelity below which [`synthesize_general`] reports success.
pub const SYNTHESIS_TARGET: f64 = 1e-6;

/// Single-qubit gates with closed-form timing conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Bit flip, output `a1|0⟩ + a0|1⟩`.
    Not,
    /// Phase flip, output `a0|0⟩ − a1|1⟩`.
    Z,
    /// Hadamard, output `a0|+⟩ + a1|−⟩`.
    Hadamard,
}

/// A gate applied to a particular input qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    /// Which gate.
    pub kind: GateKind,
    /// The qubit `a0|0⟩ + a1|1⟩` entering the device.
    pub input: QubitState,
}

impl GateSpec {
    /// The two timing targets `(cos(ω̄τ/2), i sin(ω̄τ/2))`, which are also the
    /// gate output amplitudes.
    pub fn targets(&self) -> (C64, C64) {
        let (a0, a1) = (self.input.a0(), self.input.a1());
        match self.kind {
            GateKind::Not => (a1, a0),
            GateKind::Z => (a0, -a1),
            GateKind::Hadamard => ((a0 + a1) * FRAC_1_SQRT_2, (a0 - a1) * FRAC_1_SQRT_2),
        }
    }

    /// The ideal gate output.
    pub fn output(&self) -> QubitState {
        let (c, s) = self.targets();
        QubitState::from_unitary_image([c, s])
    }
}

/// How the timing conditions treat the global phase of the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PhaseMode {
    /// Conditions hold on the amplitudes exactly as given.
    #[default]
    Literal,
    /// Conditions hold up to a global phase of the output.
    Relaxed,
}

/// Why a named gate has no real timing solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Infeasibility {
    /// The cosine target has an imaginary part.
    CosineNotReal(C64),
    /// The cosine target is real but outside `[−1, 1]`.
    CosineOutOfRange(f64),
    /// The sine target is not of the form `i·s` with real `s`.
    SineNotImaginary(C64),
    /// The sine target is `i·s` with `|s| > 1`.
    SineOutOfRange(f64),
    /// `cos² + s² ≠ 1`.
    InconsistentPair {
        /// Cosine target.
        cos: f64,
        /// Sine target.
        sin: f64,
    },
}

impl core::fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Infeasibility::CosineNotReal(c) => {
                write!(f, "cosine target {} + {}i is not real", c.re, c.im)
            }
            Infeasibility::CosineOutOfRange(c) => write!(f, "cosine target {c} lies outside [-1, 1]"),
            Infeasibility::SineNotImaginary(s) => {
                write!(f, "sine target {} + {}i is not purely imaginary", s.re, s.im)
            }
            Infeasibility::SineOutOfRange(s) => write!(f, "sine target {s}i has modulus above 1"),
            Infeasibility::InconsistentPair { cos, sin } => {
                write!(f, "cos^2 + sin^2 = {} is not 1 (cos = {cos}, sin = {sin})", cos * cos + sin * sin)
            }
        }
    }
}

/// Failure of the gate solvers.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GateError {
    /// `cosθ = ω₀/ω` has no solution.
    #[error("no manifold angle for omega0 = {omega0}, omega = {omega}")]
    InvalidManifold {
        /// Larmor frequency.
        omega0: f64,
        /// Rotation rate.
        omega: f64,
    },
    /// `ω̄ = 0`: the coefficients never change.
    #[error("Rabi frequency vanishes, the drive cannot realize any gate")]
    DegenerateDrive,
    /// No real gate time exists for this input.
    #[error("gate is infeasible for this input: {0}")]
    Infeasible(Infeasibility),
}

/// A drive and duration realizing a target state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisResult {
    /// Drive parameters.
    pub params: ControlParams,
    /// Gate time.
    pub tau: f64,
    /// Eigenbasis coordinates of the state propagated from `t = 0`
    /// (`|0⟩` for the named gates, which act on the up stream).
    pub initial: QubitState,
    /// The state the drive is meant to produce.
    pub target: QubitState,
    /// Closed-form evolution of `initial` at `tau`, in eigenbasis coordinates.
    pub predicted_output: QubitState,
    /// Largest timing-condition violation for named gates; infidelity for
    /// [`synthesize_general`].
    pub residual: f64,
    /// `H(τ)`, held fixed once the gate completes.
    pub hold_hamiltonian: Mat2,
}

/// `θ = arccos(ω₀/ω)`, on which `ω sinθ = ω̄`.
pub fn manifold_theta(omega0: f64, omega: f64) -> Result<f64, GateError> {
    if !(omega0 > 0.0 && omega0.is_finite() && omega.is_finite() && omega0 <= omega) {
        return Err(GateError::InvalidManifold { omega0, omega });
    }
    Ok((omega0 / omega).acos())
}

/// Smallest `τ ≥ 0` meeting the literal timing conditions of `spec`.
pub fn solve_gate_time(spec: &GateSpec, omega0: f64, omega: f64) -> Result<SynthesisResult, GateError> {
    solve_gate_time_with(spec, omega0, omega, PhaseMode::Literal)
}

/// [`solve_gate_time`] with a choice of phase convention.
pub fn solve_gate_time_with(
    spec: &GateSpec,
    omega0: f64,
    omega: f64,
    mode: PhaseMode,
) -> Result<SynthesisResult, GateError> {
    let theta = manifold_theta(omega0, omega)?;
    let params = ControlParams::new(omega0, omega, theta).map_err(|_| GateError::InvalidManifold { omega0, omega })?;
    let wbar = rabi_frequency(&params);
    if wbar <= f64::EPSILON * omega {
        return Err(GateError::DegenerateDrive);
    }
    let (c, z) = spec.targets();
    let target = spec.output();
    match mode {
        PhaseMode::Literal => solve_targets(&params, wbar, c, z, target),
        PhaseMode::Relaxed => {
            // Global phases that make the cosine target real, or the sine
            // target imaginary when the cosine target vanishes.
            let base = if c.norm() > FEASIBILITY_TOL {
                -c.arg()
            } else {
                PI / 2.0 - z.arg()
            };
            let mut best: Option<SynthesisResult> = None;
            let mut first_err = None;
            for phi in [base, base + PI] {
                let rot = cis(phi);
                match solve_targets(&params, wbar, c * rot, z * rot, target) {
                    Ok(r) if best.is_none_or(|b| r.tau < b.tau) => best = Some(r),
                    Ok(_) => {}
                    Err(e) => {
                        first_err.get_or_insert(e);
                    }
                }
            }
            best.ok_or_else(|| first_err.expect("one candidate failed"))
        }
    }
}

fn solve_targets(
    params: &ControlParams,
    wbar: f64,
    c: C64,
    z: C64,
    target: QubitState,
) -> Result<SynthesisResult, GateError> {
    let infeasible = |why| Err(GateError::Infeasible(why));
    if c.im.abs() > FEASIBILITY_TOL {
        return infeasible(Infeasibility::CosineNotReal(c));
    }
    if c.re.abs() > 1.0 + FEASIBILITY_TOL {
        return infeasible(Infeasibility::CosineOutOfRange(c.re));
    }
    if z.re.abs() > FEASIBILITY_TOL {
        return infeasible(Infeasibility::SineNotImaginary(z));
    }
    if z.im.abs() > 1.0 + FEASIBILITY_TOL {
        return infeasible(Infeasibility::SineOutOfRange(z.im));
    }
    let (cos, sin) = (c.re, z.im);
    if (cos * cos + sin * sin - 1.0).abs() > FEASIBILITY_TOL {
        return infeasible(Infeasibility::InconsistentPair { cos, sin });
    }
    let mut half_angle = sin.atan2(cos);
    if half_angle < 0.0 {
        half_angle += TAU;
    }
    if TAU - half_angle < FEASIBILITY_TOL {
        half_angle = 0.0;
    }
    let tau = 2.0 * half_angle / wbar;
    let (a0, a1) = analytic_coefficients(params, tau, Branch::Up);
    let residual = (a0 - c).norm().max((a1 - z).norm());
    if residual > RESIDUAL_TOL {
        return infeasible(Infeasibility::InconsistentPair { cos, sin });
    }
    Ok(SynthesisResult {
        params: *params,
        tau,
        initial: QubitState::ZERO,
        target,
        predicted_output: QubitState::from_unitary_image([a0, a1]),
        residual,
        hold_hamiltonian: hamiltonian(params, tau),
    })
}

/// Search box for [`synthesize_general`]; each entry is `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamBounds {
    /// Larmor frequency range, `min > 0`.
    pub omega0: (f64, f64),
    /// Rotation rate range, `min ≥ 0`.
    pub omega: (f64, f64),
    /// Polar angle range within `[0, π]`.
    pub theta: (f64, f64),
    /// Gate time range, `min ≥ 0`.
    pub t: (f64, f64),
}

/// Knobs of the coarse-to-fine search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Grid points per drive parameter.
    pub grid: usize,
    /// Coordinate refinement sweeps after the grid.
    pub refine_rounds: usize,
    /// Infidelity regarded as success.
    pub target_infidelity: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            grid: 7,
            refine_rounds: 6,
            target_infidelity: SYNTHESIS_TARGET,
        }
    }
}

/// Failure of [`synthesize_general`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    /// Empty or out-of-domain search box.
    #[error("invalid parameter bounds")]
    InvalidBounds,
    /// Best point found misses the target infidelity.
    #[error("no drive reaches the target; best infidelity {}", .0.residual)]
    NotFound(Box<SynthesisResult>),
}

/// Minimizes `1 − |⟨target|U(ω₀, ω, θ, t) input⟩|²` over `bounds`, with
/// `input` and `target` in eigenbasis coordinates at the start and end.
///
/// Deterministic: a lexicographic grid over `(ω₀, ω, θ)` with a resolved
/// time scan and golden-section polish for `t` at each node, followed by
/// golden-section coordinate sweeps with shrinking brackets. Ties keep the
/// lexicographically first grid point.
pub fn synthesize_general(
    input: &QubitState,
    target: &QubitState,
    bounds: &ParamBounds,
    opts: &SearchOptions,
) -> Result<SynthesisResult, SynthesisError> {
    validate_bounds(bounds)?;
    let problem = Problem {
        input: *input,
        target: *target,
        t_range: bounds.t,
    };
    let ranges = [bounds.omega0, bounds.omega, bounds.theta];
    let mut best: Option<([f64; 3], f64, f64)> = None;
    for w0 in linspace(ranges[0].0, ranges[0].1, opts.grid) {
        for w in linspace(ranges[1].0, ranges[1].1, opts.grid) {
            for th in linspace(ranges[2].0, ranges[2].1, opts.grid) {
                let x = [w0, w, th];
                let (t, f) = problem.best_time(&x);
                if best.is_none_or(|b| f < b.2) {
                    best = Some((x, t, f));
                }
            }
        }
    }
    let (mut x, mut t, mut f) = best.expect("grid has at least one node");
    let mut widths: [f64; 3] = core::array::from_fn(|i| {
        (ranges[i].1 - ranges[i].0) / (opts.grid.max(2) - 1) as f64
    });
    for _ in 0..opts.refine_rounds {
        if f <= opts.target_infidelity * 1e-6 {
            break;
        }
        // θ first: it controls the reachable transition amplitude.
        for dim in [2, 1, 0] {
            if widths[dim] <= 0.0 {
                continue;
            }
            let lo = (x[dim] - widths[dim]).max(ranges[dim].0);
            let hi = (x[dim] + widths[dim]).min(ranges[dim].1);
            let mut probe = x;
            let (xd, fd) = golden_section(
                |v| {
                    probe[dim] = v;
                    problem.best_time(&probe).1
                },
                lo,
                hi,
                1e-12 * (1.0 + x[dim].abs()),
                200,
            );
            if fd < f {
                x[dim] = xd;
                let (tt, ff) = problem.best_time(&x);
                t = tt;
                f = ff;
            }
        }
        for w in widths.iter_mut() {
            *w *= 0.5;
        }
    }
    let params = problem.params(&x);
    let out = propagator_in_basis(&params, t).apply(&input.amplitudes());
    let result = SynthesisResult {
        params,
        tau: t,
        initial: *input,
        target: *target,
        predicted_output: QubitState::from_unitary_image(out),
        residual: f,
        hold_hamiltonian: hamiltonian(&params, t),
    };
    if f <= opts.target_infidelity {
        Ok(result)
    } else {
        Err(SynthesisError::NotFound(Box::new(result)))
    }
}

fn validate_bounds(b: &ParamBounds) -> Result<(), SynthesisError> {
    let ordered = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo <= hi;
    let ok = ordered(b.omega0)
        && ordered(b.omega)
        && ordered(b.theta)
        && ordered(b.t)
        && b.omega0.0 > 0.0
        && b.omega.0 >= 0.0
        && b.theta.0 >= 0.0
        && b.theta.1 <= PI
        && b.t.0 >= 0.0;
    if ok {
        Ok(())
    } else {
        Err(SynthesisError::InvalidBounds)
    }
}

struct Problem {
    input: QubitState,
    target: QubitState,
    t_range: (f64, f64),
}

impl Problem {
    fn params(&self, x: &[f64; 3]) -> ControlParams {
        ControlParams::new(x[0], x[1], x[2]).expect("search stays inside validated bounds")
    }

    fn infidelity(&self, params: &ControlParams, t: f64) -> f64 {
        let out = propagator_in_basis(params, t).apply(&self.input.amplitudes());
        1.0 - inner(&self.target.amplitudes(), &out).norm_sqr()
    }

    /// Best gate time for fixed drive parameters.
    fn best_time(&self, x: &[f64; 3]) -> (f64, f64) {
        let params = self.params(x);
        let (lo, hi) = self.t_range;
        let wbar = rabi_frequency(&params);
        // Sixteen samples per Rabi period, at least 33 overall.
        let n = (((hi - lo) * wbar / (TAU / 16.0)).ceil() as usize + 1).clamp(33, 4097);
        let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
        let mut best = (lo, self.infidelity(&params, lo));
        let mut best_k = 0;
        for k in 1..n {
            let t = lo + step * k as f64;
            let f = self.infidelity(&params, t);
            if f < best.1 {
                best = (t, f);
                best_k = k;
            }
        }
        if step > 0.0 {
            let a = lo + step * best_k.saturating_sub(1) as f64;
            let b = (lo + step * (best_k + 1) as f64).min(hi);
            let polished = golden_section(|t| self.infidelity(&params, t), a, b, 1e-14 * (1.0 + b), 200);
            if polished.1 < best.1 {
                best = polished;
            }
        }
        best
    }
}

/// Cross-check of a [`SynthesisResult`] against the closed form and the ODE
/// oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateVerification {
    /// `|⟨target|U(τ)·initial⟩|` from the closed-form propagator.
    pub analytic_fidelity: f64,
    /// Population overlap between the target and the ODE state projected on
    /// the numerically diagonalized basis at `τ`.
    pub ode_fidelity: f64,
    /// `|⟨target|ψ_ode(τ)⟩|` with the target built in the co-rotating gauge.
    pub ode_phase_fidelity: f64,
    /// `arg⟨target|ψ_ode(τ)⟩` in that gauge.
    pub global_phase_offset: f64,
}

/// Forward-evaluates a synthesis result both ways.
pub fn verify_gate(result: &SynthesisResult, opts: &OdeOptions) -> Result<GateVerification, OdeError> {
    let params = &result.params;
    let tau = result.tau;
    let analytic = propagator_in_basis(params, tau).apply(&result.initial.amplitudes());
    let analytic_fidelity = fidelity(&result.target, &QubitState::from_unitary_image(analytic));

    let start = instantaneous_basis(params, 0.0, BasisMode::Corotating)
        .compose(result.initial.a0(), result.initial.a1());
    let psi0 = QubitState::from_unitary_image(start);
    let psi = ode_propagate(params, &psi0, tau, opts)?.amplitudes;

    let exact = instantaneous_basis(params, tau, BasisMode::ExactDiagonalized);
    let projected = [
        inner(&exact.state0.amplitudes(), &psi),
        inner(&exact.state1.amplitudes(), &psi),
    ];
    let ode_fidelity = population_fidelity(&result.target.amplitudes(), &projected);

    let target_lab = instantaneous_basis(params, tau, BasisMode::Corotating)
        .compose(result.target.a0(), result.target.a1());
    let overlap = inner(&target_lab, &psi);
    Ok(GateVerification {
        analytic_fidelity,
        ode_fidelity,
        ode_phase_fidelity: overlap.norm().min(1.0),
        global_phase_offset: overlap.arg(),
    })
}
