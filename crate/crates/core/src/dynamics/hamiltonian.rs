#[allow(unused_imports)]
use num_traits::Float;
use num_complex::Complex64 as C64;

use crate::state::cis;
use crate::{ControlParams, Mat2, Spinor};

/// `H(t) = (ω₀/2)·[[cosθ, e^{−iωt} sinθ], [e^{iωt} sinθ, −cosθ]]`.
pub fn hamiltonian(params: &ControlParams, t: f64) -> Mat2 {
    let half = 0.5 * params.omega0();
    let (s, c) = params.theta().sin_cos();
    let rot = cis(params.azimuth(t));
    Mat2([
        [C64::new(half * c, 0.0), rot.conj() * (half * s)],
        [rot * (half * s), C64::new(-half * c, 0.0)],
    ])
}

/// Analytic time derivative
/// `Ḣ(t) = (ω₀ω/2) sinθ·[[0, −i e^{−iωt}], [i e^{iωt}, 0]]`.
pub fn hamiltonian_derivative(params: &ControlParams, t: f64) -> Mat2 {
    let amp = 0.5 * params.omega0() * params.omega() * params.theta().sin();
    let rot = cis(params.azimuth(t));
    let zero = C64::new(0.0, 0.0);
    Mat2([
        [zero, rot.conj() * C64::new(0.0, -amp)],
        [rot * C64::new(0.0, amp), zero],
    ])
}

/// Eigen-decomposition of a 2×2 Hermitian matrix.
///
/// Returns `[(λ₊, v₊), (λ₋, v₋)]`, larger eigenvalue first, with unit
/// eigenvectors in an arbitrary phase. Returns `None` for a degenerate
/// spectrum, where the eigenvectors are not determined.
pub fn hermitian_eigen(h: &Mat2) -> Option<[(f64, Spinor); 2]> {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = h[(0, 1)];
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    if radius.is_nan() || radius <= 0.0 {
        return None;
    }
    let eig = |lambda: f64| -> Spinor {
        // Null vector of H − λ, taken from whichever row is better conditioned.
        let from_row0 = [b, C64::new(lambda - a, 0.0)];
        let from_row1 = [C64::new(lambda - d, 0.0), b.conj()];
        let n0 = from_row0[0].norm_sqr() + from_row0[1].norm_sqr();
        let n1 = from_row1[0].norm_sqr() + from_row1[1].norm_sqr();
        let (v, n) = if n0 >= n1 {
            (from_row0, n0)
        } else {
            (from_row1, n1)
        };
        let n = n.sqrt();
        [v[0] / n, v[1] / n]
    };
    let hi = mean + radius;
    let lo = mean - radius;
    Some([(hi, eig(hi)), (lo, eig(lo))])
}
