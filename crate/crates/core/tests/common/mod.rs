//! Independent numerical oracles shared by the integration tests.

#![allow(dead_code)]

use coinbet::special::f;

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(h: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        h: &dyn Fn(f64) -> f64,
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
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (h(lm), h(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(h, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(h, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (h(a), h(b), h(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    rec(h, a, b, fa, fm, fb, whole, tol, 50)
}

/// Prior mass of `[a, b] ⊂ (0, 1]` by adaptive quadrature of the density in
/// `u = log β`, where it becomes `(log γ / 2) / (u − log γ)²`.
pub fn prior_mass_numeric(a: f64, b: f64, gamma: f64) -> f64 {
    let lg = gamma.ln();
    let h = |u: f64| 0.5 * lg / ((u - lg) * (u - lg));
    adaptive_simpson(&h, a.ln(), b.ln(), 1e-14)
}

/// Total prior mass: `2 ∫_{−∞}^{0} (log γ / 2)/(u − log γ)² du` mapped to
/// `s ∈ [0, 1)` through `u = −s/(1 − s)`.
pub fn prior_total_mass_numeric(gamma: f64) -> f64 {
    let lg = gamma.ln();
    let h = |s: f64| {
        if s >= 1.0 {
            // limit as s → 1 of 0.5·lg/(s + lg(1−s))²
            return 0.5 * lg;
        }
        let u = -s / (1.0 - s);
        let jac = 1.0 / ((1.0 - s) * (1.0 - s));
        0.5 * lg / ((u - lg) * (u - lg)) * jac
    };
    2.0 * adaptive_simpson(&h, 0.0, 1.0, 1e-14)
}

/// Values of `f` on a uniform grid of `n` points over `[−lim, lim]`.
pub fn f_grid(n: usize, lim: f64) -> (Vec<f64>, Vec<f64>) {
    let etas: Vec<f64> = (0..n)
        .map(|i| -lim + 2.0 * lim * i as f64 / (n - 1) as f64)
        .collect();
    let fs = etas.iter().map(|&e| f(e).unwrap()).collect();
    (etas, fs)
}

/// `max_η η·x − f(η)` over a precomputed grid.
pub fn conjugate_by_grid(x: f64, etas: &[f64], fs: &[f64]) -> f64 {
    etas.iter()
        .zip(fs)
        .fold(f64::NEG_INFINITY, |best, (&e, &fe)| best.max(e * x - fe))
}

/// Root of a monotone function on `[lo, hi]` by plain bisection.
pub fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    let glo = g(lo);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) == (glo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
