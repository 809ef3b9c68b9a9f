//! Deterministic 1-D minimization helpers.

#[allow(unused_imports)]
use num_traits::Float;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))` for the best point seen, endpoints included.
pub(crate) fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut best = {
        let (fa, fb) = (f(a), f(b));
        if fb < fa { (b, fb) } else { (a, fa) }
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// `n` evenly spaced points on `[lo, hi]`; a single point when the interval
/// is degenerate or `n < 2`.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let n = if hi > lo { n.max(2) } else { 1 };
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |k| if k + 1 == n && n > 1 { hi } else { lo + step * k as f64 })
}
