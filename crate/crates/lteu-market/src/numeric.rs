//! Small numeric toolbox shared by the solvers: bisection, golden-section
//! maximization, adaptive Simpson quadrature, and central finite differences.
//!
//! Everything here is deterministic and allocation-free so that parallel
//! sweeps reproduce bit-identical results regardless of scheduling.

use crate::error::MarketError;

/// Invariant golden ratio constant, (sqrt(5) - 1) / 2.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Find a root of `f` on `[lo, hi]` by bisection.
///
/// Requires `f(lo)` and `f(hi)` to have opposite signs (a zero endpoint is
/// accepted as the root). Stops when the bracket width is at most `tol`.
pub fn bisect_root<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64, MarketError> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(MarketError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let neg_low = f_lo < 0.0;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == neg_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(MarketError::SolverNoConverge {
        iterations: max_iter,
        context: format!("bisection bracket still [{lo}, {hi}]"),
    })
}

/// Maximize a unimodal `f` on `[lo, hi]` by golden-section search.
///
/// Returns `(argmax, max)`. Stops when the bracket width is at most `tol`;
/// errors if `max_iter` evaluations do not get there.
pub fn golden_max<F: Fn(f64) -> f64>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, f64), MarketError> {
    if !(hi >= lo) {
        return Err(MarketError::InvalidConfig(format!(
            "golden-section interval [{lo}, {hi}] is empty"
        )));
    }
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..max_iter {
        if hi - lo <= tol {
            let mid = 0.5 * (lo + hi);
            return Ok((mid, f(mid)));
        }
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    Err(MarketError::SolverNoConverge {
        iterations: max_iter,
        context: format!("golden-section bracket still [{lo}, {hi}]"),
    })
}

/// Invert a nondecreasing function: smallest `x >= 0` with `f(x) >= target`.
///
/// Expands the bracket geometrically from `hi_guess`, then bisects. Used for
/// congestion inverses, so `f(0) <= target` is expected; if even huge
/// arguments stay below `target` the function is flat and the inverse is
/// unbounded, reported as an error.
pub fn inverse_nondecreasing<F: Fn(f64) -> f64>(
    f: F,
    target: f64,
    hi_guess: f64,
    tol: f64,
) -> Result<f64, MarketError> {
    if f(0.0) >= target {
        return Ok(0.0);
    }
    let mut hi = hi_guess.max(tol);
    let mut tries = 0;
    while f(hi) < target {
        hi *= 2.0;
        tries += 1;
        if tries > 200 {
            return Err(MarketError::SolverNoConverge {
                iterations: tries,
                context: format!("no upper bracket for inverse at target {target}"),
            });
        }
    }
    bisect_root(|x| f(x) - target, 0.0, hi, tol, 400)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)] // plain recursion state, not an API
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Central finite-difference first derivative, relative step 1e-6.
pub fn fd_deriv<F: Fn(f64) -> f64>(f: &F, x: f64) -> f64 {
    let h = 1e-6 * x.abs().max(1.0);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central finite-difference second derivative. A wider relative step
/// (1e-4) keeps the cancellation error of the second difference small.
pub fn fd_deriv2<F: Fn(f64) -> f64>(f: &F, x: f64) -> f64 {
    let h = 1e-4 * x.abs().max(1.0);
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}
