//! Scalar special functions: the conjugate pair `f`/`f*`, `Ψ`, and the
//! inverse of `Ψ` through the lower real branch of the Lambert W function.

const FRAC_1_E: f64 = 0.367_879_441_171_442_33;

use crate::error::{Error, Result};

/// Stopping rule for the iterative solvers in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-12,
            max_iter: 100,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::Config(format!("abs_tol must be > 0, got {abs_tol}")));
        }
        if max_iter == 0 {
            return Err(Error::Config("max_iter must be >= 1".into()));
        }
        Ok(Tolerance { abs_tol, max_iter })
    }
}

/// `f(η) = −log(1 − |η|) − |η|` on `[−1, 1]`; `+∞` at `|η| = 1`.
pub fn f(eta: f64) -> Result<f64> {
    let a = eta.abs();
    if !(a <= 1.0) {
        return Err(Error::domain("f", eta, "[-1, 1]"));
    }
    if a == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-(-a).ln_1p() - a)
}

/// Convex conjugate of [`f`]: `f*(x) = |x| − log(|x| + 1)`.
pub fn f_conjugate(x: f64) -> f64 {
    let a = x.abs();
    a - a.ln_1p()
}

/// Maximiser of `η·x − f(η)`.
pub fn eta_star(x: f64) -> f64 {
    x / (x.abs() + 1.0)
}

/// `Ψ(x) = x − log(1 + x)` for `x > −1`.
pub fn psi(x: f64) -> Result<f64> {
    if !(x > -1.0) {
        return Err(Error::domain("psi", x, "(-1, inf)"));
    }
    Ok(x - x.ln_1p())
}

/// Lower real branch `W₋₁` of the Lambert function on `(−1/e, 0)`.
pub fn lambert_w_minus1(x: f64) -> Result<f64> {
    lambert_w_minus1_with(x, Tolerance::default())
}

/// [`lambert_w_minus1`] with an explicit stopping rule.
///
/// Halley iteration on `h(w) = w + log(−w) − log(−x)`, which has the same
/// root as `w·eʷ = x` on `w ≤ −1` but never overflows or underflows. The seed
/// is `−1 − √(2u) − u` with `u = −log(−e·x)`.
pub fn lambert_w_minus1_with(x: f64, tol: Tolerance) -> Result<f64> {
    if !(x > -FRAC_1_E && x < 0.0) {
        return Err(Error::domain("lambert_w_minus1", x, "(-1/e, 0)"));
    }
    let c = (-x).ln();
    let u = (-(1.0 + c)).max(0.0);
    let mut w = -1.0 - (2.0 * u).sqrt() - u;
    if w == -1.0 {
        return Ok(w);
    }

    for _ in 0..tol.max_iter {
        let h = w + (-w).ln() - c;
        // Residual already at rounding level: further steps only chase noise.
        if h.abs() <= 4.0 * f64::EPSILON * (w.abs() + c.abs()) {
            return Ok(w);
        }
        let inv = 1.0 / w;
        let dh = 1.0 + inv;
        let d2h = -inv * inv;
        let step = 2.0 * h * dh / (2.0 * dh * dh - h * d2h);
        // Stay on the branch.
        let next = (w - step).min(-1.0);
        let delta = (next - w).abs();
        w = next;
        if delta <= tol.abs_tol * w.abs() {
            return Ok(w);
        }
    }
    Err(Error::Convergence {
        func: "lambert_w_minus1",
        iterations: tol.max_iter,
    })
}

/// Inverse of [`psi`] on `[0, ∞)`: `Ψ⁻¹(y) = −W₋₁(−e^{−y−1}) − 1`.
///
/// Once `e^{−y−1}` leaves the normal range the Lambert argument is no longer
/// representable and a bracketed bisection on `Ψ` is used instead.
pub fn psi_inv(y: f64) -> Result<f64> {
    if !(y >= 0.0) || y.is_infinite() {
        return Err(Error::domain("psi_inv", y, "[0, inf)"));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let z = (-y - 1.0).exp();
    if z < f64::MIN_POSITIVE {
        return psi_inv_bisect(y, Tolerance::default());
    }
    let x = -lambert_w_minus1(-z)? - 1.0;
    // One Newton polish on Ψ(x) = y; Ψ'(x) = x/(1+x).
    let r = x - x.ln_1p() - y;
    let polished = x - r * (1.0 + x) / x;
    Ok(if polished > 0.0 { polished } else { x })
}

fn psi_inv_bisect(y: f64, tol: Tolerance) -> Result<f64> {
    // Ψ(x) ≤ x gives the lower end; the simple closed-form bound the upper.
    let mut lo = y;
    let mut hi = psi_inv_upper_simple(y);
    for _ in 0..tol.max_iter.max(200) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if mid - mid.ln_1p() < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol.abs_tol * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Convergence {
        func: "psi_inv",
        iterations: tol.max_iter.max(200),
    })
}

/// `y + log(1 + y + √(2y))`, an upper bound on [`psi_inv`].
pub fn psi_inv_upper_log(y: f64) -> f64 {
    y + (y + (2.0 * y).sqrt()).ln_1p()
}

/// `2y + √(2y)`, a looser upper bound on [`psi_inv`].
pub fn psi_inv_upper_simple(y: f64) -> f64 {
    2.0 * y + (2.0 * y).sqrt()
}
