//! Closed forms checked against independent routes: nalgebra's Hermitian
//! eigensolver, central finite differences and the Runge-Kutta integrator.

use std::f64::consts::PI;

use nalgebra::{Complex, Matrix2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgq_core::dynamics::{
    adiabaticity_parameter, adiabaticity_ratio_numeric, analytic_coefficients, hamiltonian,
    hamiltonian_derivative, instantaneous_basis, ode_propagate, ode_trajectory, rabi_frequency,
    BasisMode, OdeOptions,
};
use sgq_core::ensemble::nonadiabatic_multiply;
use sgq_core::{population_fidelity, Branch, ControlParams, QubitState, C64};

fn random_params(rng: &mut impl Rng) -> ControlParams {
    ControlParams::new(
        rng.random_range(0.2..5.0),
        rng.random_range(0.0..8.0),
        rng.random_range(0.0..=PI),
    )
    .unwrap()
}

fn inner(u: &[C64; 2], v: &[C64; 2]) -> C64 {
    u[0].conj() * v[0] + u[1].conj() * v[1]
}

#[test]
fn spectrum_matches_nalgebra_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let t = rng.random_range(0.0..20.0);
        let h = hamiltonian(&p, t);
        let m = Matrix2::new(
            Complex::new(h[(0, 0)].re, h[(0, 0)].im),
            Complex::new(h[(0, 1)].re, h[(0, 1)].im),
            Complex::new(h[(1, 0)].re, h[(1, 0)].im),
            Complex::new(h[(1, 1)].re, h[(1, 1)].im),
        );
        let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((ev[0] - 0.5 * p.omega0()).abs() < 1e-12);
        assert!((ev[1] + 0.5 * p.omega0()).abs() < 1e-12);
        assert!(h.max_abs_diff(&h.adjoint()) == 0.0);
    }
}

#[test]
fn worked_example_eigenvalues() {
    let p = ControlParams::new(1.0, 2.0, PI / 3.0).unwrap();
    let h = hamiltonian(&p, 0.7);
    let m = Matrix2::from_fn(|i, j| Complex::new(h[(i, j)].re, h[(i, j)].im));
    let ev = m.symmetric_eigen().eigenvalues;
    let (lo, hi) = (ev[0].min(ev[1]), ev[0].max(ev[1]));
    assert!((hi - 0.5).abs() < 1e-12 && (lo + 0.5).abs() < 1e-12);
}

#[test]
fn exact_basis_eigen_residual_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let p = random_params(&mut rng);
        let t = rng.random_range(0.0..50.0);
        let b = instantaneous_basis(&p, t, BasisMode::ExactDiagonalized);
        assert!(b.residual(&hamiltonian(&p, t)) <= 1e-12);
        assert!(b.overlap().norm() <= 1e-12);
        assert_eq!((b.e0, b.e1), (0.5 * p.omega0(), -0.5 * p.omega0()));
    }
}

#[test]
fn adiabaticity_ratio_by_brute_force_matrix_element() {
    // ⟨0|Ḣ|1⟩ from a finite-difference Ḣ and the nalgebra eigenvectors.
    let p = ControlParams::new(1.0, 0.1, PI / 2.0).unwrap();
    for &t in &[0.0, 1.0, 4.2] {
        let dt = 1e-5;
        let hp = hamiltonian(&p, t + dt);
        let hm = hamiltonian(&p, t - dt);
        let h = hamiltonian(&p, t);
        let m = Matrix2::from_fn(|i, j| Complex::new(h[(i, j)].re, h[(i, j)].im));
        let eig = m.symmetric_eigen();
        let (ihi, ilo) = if eig.eigenvalues[0] > eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
        let v0 = eig.eigenvectors.column(ihi);
        let v1 = eig.eigenvectors.column(ilo);
        let mut elem = Complex::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                let d = (hp[(i, j)] - hm[(i, j)]) / (2.0 * dt);
                elem += v0[i].conj() * Complex::new(d.re, d.im) * v1[j];
            }
        }
        let ratio = elem.norm() / 1.0;
        assert!((ratio - 0.05).abs() < 1e-9, "{ratio}");
        assert!((adiabaticity_ratio_numeric(&p, t) - 0.05).abs() < 1e-10);
        let hd = hamiltonian_derivative(&p, t);
        for i in 0..2 {
            for j in 0..2 {
                assert!(((hp[(i, j)] - hm[(i, j)]) / (2.0 * dt) - hd[(i, j)]).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn adiabaticity_ratio_is_time_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let t = rng.random_range(0.0..100.0);
        assert!((adiabaticity_ratio_numeric(&p, t) - adiabaticity_parameter(&p)).abs() < 1e-10);
    }
}

#[test]
fn adiabatic_suppression_bound() {
    let p = ControlParams::new(1.0, 1e-3, PI / 2.0).unwrap();
    let m2 = (p.omega() / rabi_frequency(&p)).powi(2);
    assert!(m2 <= 1.1e-6);
    // max over t of |α₁|² is reached at ω̄t = π
    let (_, a1) = analytic_coefficients(&p, PI / rabi_frequency(&p), Branch::Up);
    assert!((a1.norm_sqr() - m2).abs() < 1e-18);
}

#[test]
fn closed_form_matches_ode_on_a_grid() {
    let opts = OdeOptions::default();
    for &(w0, w, th) in &[(1.0, 2.0, PI / 3.0), (0.5, 0.05, 1.0), (4.0, 20.0, 2.6), (2.0, 2.0, 0.1)] {
        let p = ControlParams::new(w0, w, th).unwrap();
        let wbar = rabi_frequency(&p);
        let times: Vec<f64> = (1..=40).map(|k| k as f64 * 20.0 / wbar / 40.0).collect();
        for branch in [Branch::Up, Branch::Down] {
            let b0 = instantaneous_basis(&p, 0.0, BasisMode::ExactDiagonalized);
            let psi0 = match branch {
                Branch::Up => b0.state0,
                Branch::Down => b0.state1,
            };
            let traj = ode_trajectory(&p, &psi0, &times, &opts).unwrap();
            for (&t, y) in times.iter().zip(&traj) {
                let b = instantaneous_basis(&p, t, BasisMode::ExactDiagonalized);
                let (c0, c1) = analytic_coefficients(&p, t, branch);
                let d0 = inner(&b.state0.amplitudes(), y);
                let d1 = inner(&b.state1.amplitudes(), y);
                assert!((d0.norm_sqr() - c0.norm_sqr()).abs() < 1e-6);
                assert!((d1.norm_sqr() - c1.norm_sqr()).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn corotating_gauge_is_phase_exact() {
    // ψ(t) = α₀|0(t)⟩ + α₁|1(t)⟩ holds with phases in the co-rotating gauge.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let t = rng.random_range(0.0..5.0);
        let b0 = instantaneous_basis(&p, 0.0, BasisMode::Corotating);
        let y = ode_propagate(&p, &b0.state0, t, &OdeOptions::with_tol(1e-11))
            .unwrap()
            .amplitudes;
        let (a0, a1) = analytic_coefficients(&p, t, Branch::Up);
        let expected = instantaneous_basis(&p, t, BasisMode::Corotating).compose(a0, a1);
        assert!((y[0] - expected[0]).norm() < 1e-7 && (y[1] - expected[1]).norm() < 1e-7);
    }
}

#[test]
fn multiplier_outputs_match_ode() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = QubitState::real(0.6, 0.8).unwrap();
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let t = rng.random_range(0.0..6.0);
        let out = nonadiabatic_multiply(&p, &q, t);
        let b0 = instantaneous_basis(&p, 0.0, BasisMode::ExactDiagonalized);
        let bt = instantaneous_basis(&p, t, BasisMode::ExactDiagonalized);
        for (start, cluster) in [(b0.state0, out.up), (b0.state1, out.down)] {
            let y = ode_propagate(&p, &start, t, &OdeOptions::default()).unwrap().amplitudes;
            let proj = [inner(&bt.state0.amplitudes(), &y), inner(&bt.state1.amplitudes(), &y)];
            assert!(population_fidelity(&cluster.amplitudes(), &proj) >= 1.0 - 1e-6);
        }
        let (up_lab, _) = out.lab_states(&p, t);
        assert!((up_lab[0].norm_sqr() + up_lab[1].norm_sqr() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn ode_norm_stays_within_ten_tol() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let opts = OdeOptions::default();
    for _ in 0..30 {
        let p = random_params(&mut rng);
        let psi0 = QubitState::normalized(
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        )
        .unwrap();
        let out = ode_propagate(&p, &psi0, 50.0 / p.omega0(), &opts).unwrap();
        assert!((out.norm() - 1.0).abs() <= 10.0 * opts.tol, "{p:?}: {}", out.norm());
    }
}
