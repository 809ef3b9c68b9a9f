//! Path-spin bookkeeping for an ideal Stern-Gerlach device.
//!
//! Spatial wave packets are reduced to scalar branch weights
//! `w = ∫|φ|² dX`; the ideal device has `w_up = w_down = 1`.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::dynamics::{adiabaticity_parameter, analytic_coefficients, instantaneous_basis, BasisMode};
use crate::state::cis;
use crate::{Branch, ControlParams, QubitState, Spinor, NORM_TOL};

/// Below this adiabaticity parameter the multiplier flags the drive as too
/// slow to be useful.
pub const DEFAULT_NONADIABATIC_THRESHOLD: f64 = 0.1;

/// Branches whose probability falls below this are treated as empty.
pub const EMPTY_BRANCH_TOL: f64 = 1e-15;

/// Errors from the ensemble operations.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EnsembleError {
    /// A branch weight outside `[0, 1]`.
    #[error("branch weight must lie in [0, 1], got {0}")]
    InvalidWeight(f64),
    /// The branch selected by the converter carries no probability.
    #[error("selected branch is empty (probability {0:e})")]
    EmptyBranch(f64),
    /// A conversion record whose amplitudes do not add up to a unit vector.
    #[error("conversion record is inconsistent: reassembled norm^2 = {0}")]
    InconsistentRecord(f64),
}

/// Spin states riding the two spatial branches.
///
/// The branch-local phases `e^{∓iω₀t}` of the adiabatic split are kept in
/// `branch_phase` (`= ω₀t`) instead of being folded into the amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpinState {
    /// Spin state in the upward branch.
    pub up_spin: QubitState,
    /// Spin state in the downward branch.
    pub down_spin: QubitState,
    /// Amplitude of the upward branch.
    pub up_amp: C64,
    /// Amplitude of the downward branch.
    pub down_amp: C64,
    /// `∫φ_u² dX`
    pub w_up: f64,
    /// `∫φ_d² dX`
    pub w_down: f64,
    /// `ω₀t`; the up branch carries `e^{−i·branch_phase}`, the down branch
    /// `e^{+i·branch_phase}`.
    pub branch_phase: f64,
}

impl PathSpinState {
    /// Branch amplitude with its branch-local phase applied.
    pub fn phased_amplitude(&self, branch: Branch) -> C64 {
        match branch {
            Branch::Up => self.up_amp * cis(-self.branch_phase),
            Branch::Down => self.down_amp * cis(self.branch_phase),
        }
    }

    /// Spin state riding the given branch.
    pub fn spin(&self, branch: Branch) -> QubitState {
        match branch {
            Branch::Up => self.up_spin,
            Branch::Down => self.down_spin,
        }
    }

    /// `P_up + P_down`, one in the ideal device.
    pub fn total_probability(&self) -> f64 {
        branch_probability(self, Branch::Up) + branch_probability(self, Branch::Down)
    }
}

/// Adiabatic passage through the ideal device: `|0⟩` goes up with amplitude
/// `a0`, `|1⟩` goes down with amplitude `a1`.
pub fn adiabatic_split(q: &QubitState, w_up: f64, w_down: f64) -> Result<PathSpinState, EnsembleError> {
    adiabatic_split_at(q, w_up, w_down, 0.0)
}

/// [`adiabatic_split`] recording the branch-local phase `ω₀t`.
pub fn adiabatic_split_at(
    q: &QubitState,
    w_up: f64,
    w_down: f64,
    branch_phase: f64,
) -> Result<PathSpinState, EnsembleError> {
    for w in [w_up, w_down] {
        if !(0.0..=1.0).contains(&w) {
            return Err(EnsembleError::InvalidWeight(w));
        }
    }
    Ok(PathSpinState {
        up_spin: QubitState::ZERO,
        down_spin: QubitState::ONE,
        up_amp: q.a0(),
        down_amp: q.a1(),
        w_up,
        w_down,
        branch_phase,
    })
}

/// `|amp|²·w` for the chosen branch.
pub fn branch_probability(s: &PathSpinState, branch: Branch) -> f64 {
    match branch {
        Branch::Up => s.up_amp.norm_sqr() * s.w_up,
        Branch::Down => s.down_amp.norm_sqr() * s.w_down,
    }
}

/// Particle counts accumulated in each branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterReport {
    /// Particles collected in the upward branch.
    pub n_up: u64,
    /// Particles collected in the downward branch.
    pub n_down: u64,
    /// Logical state of the upward cluster.
    pub logical_up: QubitState,
    /// Logical state of the downward cluster.
    pub logical_down: QubitState,
}

/// Deterministic counts `N·P` rounded half-to-even.
///
/// When the branch probabilities add up to one (the ideal device) the
/// downward count is `N − n_up`, so no particle is lost to rounding.
pub fn cluster_counts(s: &PathSpinState, n: u64) -> ClusterReport {
    let p_up = branch_probability(s, Branch::Up);
    let p_down = branch_probability(s, Branch::Down);
    let n_up = round_half_even(n as f64 * p_up).min(n);
    let n_down = if (p_up + p_down - 1.0).abs() <= NORM_TOL {
        n - n_up
    } else {
        round_half_even(n as f64 * p_down).min(n - n_up)
    };
    ClusterReport {
        n_up,
        n_down,
        logical_up: s.up_spin,
        logical_down: s.down_spin,
    }
}

/// Counts drawn from a multinomial over {up, down, lost} with the given
/// generator.
pub fn cluster_counts_sampled<R: Rng + ?Sized>(s: &PathSpinState, n: u64, rng: &mut R) -> ClusterReport {
    let p_up = branch_probability(s, Branch::Up).clamp(0.0, 1.0);
    let p_down = branch_probability(s, Branch::Down).clamp(0.0, 1.0 - p_up);
    let n_up = draw_binomial(n, p_up, rng);
    let rest = n - n_up;
    let n_down = if p_up >= 1.0 {
        0
    } else {
        draw_binomial(rest, (p_down / (1.0 - p_up)).min(1.0), rng)
    };
    ClusterReport {
        n_up,
        n_down,
        logical_up: s.up_spin,
        logical_down: s.down_spin,
    }
}

fn draw_binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    Binomial::new(n, p)
        .expect("probability clamped to [0, 1]")
        .sample(rng)
}

fn round_half_even(x: f64) -> u64 {
    let floor = x.floor();
    let frac = x - floor;
    let base = floor as u64;
    if frac > 0.5 || (frac == 0.5 && base % 2 == 1) {
        base + 1
    } else {
        base
    }
}

/// What the converter threw away, enough to undo it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionRecord {
    /// The qubit that entered the device.
    pub input: QubitState,
    /// Branch that was released.
    pub selected_branch: Branch,
    /// Phased amplitude of the released branch.
    pub kept_amp: C64,
    /// Phased amplitude of the blocked branch.
    pub discarded_amp: C64,
    /// Spin state of the blocked branch.
    pub discarded_state: QubitState,
    /// Branch-local phase `ω₀t` at conversion time.
    pub branch_phase: f64,
}

/// Releases one branch only, turning a superposed qubit into the definite
/// spin state of that branch.
pub fn converter_oracle(s: &PathSpinState, keep: Branch) -> Result<(QubitState, ConversionRecord), EnsembleError> {
    let p = branch_probability(s, keep);
    if p < EMPTY_BRANCH_TOL {
        return Err(EnsembleError::EmptyBranch(p));
    }
    let other = match keep {
        Branch::Up => Branch::Down,
        Branch::Down => Branch::Up,
    };
    let input = recombine(
        s.up_amp,
        &s.up_spin.amplitudes(),
        s.down_amp,
        &s.down_spin.amplitudes(),
    );
    let record = ConversionRecord {
        input: QubitState::normalized(input[0], input[1]).expect("kept branch is non-empty"),
        selected_branch: keep,
        kept_amp: s.phased_amplitude(keep),
        discarded_amp: s.phased_amplitude(other),
        discarded_state: s.spin(other),
        branch_phase: s.branch_phase,
    };
    Ok((s.spin(keep), record))
}

/// Recombines the released branch with the stored complement, restoring the
/// qubit that entered the converter.
pub fn reverse_converter(rec: &ConversionRecord, kept_output: &QubitState) -> Result<QubitState, EnsembleError> {
    let kept_phase = match rec.selected_branch {
        Branch::Up => cis(rec.branch_phase),
        Branch::Down => cis(-rec.branch_phase),
    };
    let kept = rec.kept_amp * kept_phase;
    let discarded = rec.discarded_amp * kept_phase.conj();
    let v = recombine(
        kept,
        &kept_output.amplitudes(),
        discarded,
        &rec.discarded_state.amplitudes(),
    );
    let n = v[0].norm_sqr() + v[1].norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(EnsembleError::InconsistentRecord(n));
    }
    Ok(QubitState::from_unitary_image(v))
}

fn recombine(ca: C64, a: &Spinor, cb: C64, b: &Spinor) -> Spinor {
    [ca * a[0] + cb * b[0], ca * a[1] + cb * b[1]]
}

/// Output of one non-adiabatic multiplier stage.
///
/// `up` and `down` are coordinates in the instantaneous eigenbasis at the
/// exit time, exact in the [`BasisMode::Corotating`] gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierOutput {
    /// `α₀|0(t)⟩ + α₁|1(t)⟩`, the cluster collected upward.
    pub up: QubitState,
    /// `β₀|0(t)⟩ + β₁|1(t)⟩`, the cluster collected downward.
    pub down: QubitState,
    /// `(|a0|², |a1|²)`, the share of particles in each cluster.
    pub probs: (f64, f64),
    /// Set when the drive is slower than the configured threshold.
    pub adiabatic_warning: bool,
}

impl MultiplierOutput {
    /// Both cluster states as lab-frame spinors at exit time `t`.
    pub fn lab_states(&self, params: &ControlParams, t: f64) -> (Spinor, Spinor) {
        let basis = instantaneous_basis(params, t, BasisMode::Corotating);
        (
            basis.compose(self.up.a0(), self.up.a1()),
            basis.compose(self.down.a0(), self.down.a1()),
        )
    }
}

/// One multiplier stage with the default warning threshold.
pub fn nonadiabatic_multiply(params: &ControlParams, q: &QubitState, t: f64) -> MultiplierOutput {
    nonadiabatic_multiply_with_threshold(params, q, t, DEFAULT_NONADIABATIC_THRESHOLD)
}

/// One multiplier stage: the `|0⟩` part of `q` leaves upward and evolves
/// from `|0(0)⟩`, the `|1⟩` part leaves downward and evolves from `|1(0)⟩`.
pub fn nonadiabatic_multiply_with_threshold(
    params: &ControlParams,
    q: &QubitState,
    t: f64,
    threshold: f64,
) -> MultiplierOutput {
    let (a0, a1) = analytic_coefficients(params, t, Branch::Up);
    let (b0, b1) = analytic_coefficients(params, t, Branch::Down);
    MultiplierOutput {
        up: QubitState::from_unitary_image([a0, a1]),
        down: QubitState::from_unitary_image([b0, b1]),
        probs: q.populations(),
        adiabatic_warning: adiabaticity_parameter(params) < threshold,
    }
}

/// A logical qubit carried by a cluster, with its share of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// Logical state.
    pub state: QubitState,
    /// Fraction of the original ensemble.
    pub weight: f64,
}

/// Chains multiplier stages. Stage `k` splits every cluster of stage `k − 1`
/// into an up and a down child, so `n` stages give `2^n` clusters, ordered
/// up-before-down within each parent.
pub fn cascade(stages: &[(ControlParams, f64)], q: &QubitState) -> Vec<Cluster> {
    let mut clusters = alloc::vec![Cluster {
        state: *q,
        weight: 1.0,
    }];
    for (params, t) in stages {
        let mut next = Vec::with_capacity(clusters.len() * 2);
        for c in &clusters {
            let out = nonadiabatic_multiply(params, &c.state, *t);
            next.push(Cluster {
                state: out.up,
                weight: c.weight * out.probs.0,
            });
            next.push(Cluster {
                state: out.down,
                weight: c.weight * out.probs.1,
            });
        }
        clusters = next;
    }
    clusters
}
