//! The betting prior on `[−1, 1]`:
//!
//! ```text
//! P(β) = (log γ / 2) · 1 / (|β| · log²(|β|/γ)),   γ > 1.
//! ```
//!
//! Its mass on `(0, b]` is `0.5·log γ / (log γ − log b)`, so in the quantile
//! coordinate `m ∈ (0, 0.5]` each half of the prior is the uniform measure and
//! `β(m) = γ^{1 − 1/(2m)}`. The singularity at zero is never evaluated.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorParams {
    pub gamma: f64,
}

impl Default for PriorParams {
    fn default() -> Self {
        PriorParams { gamma: E }
    }
}

impl PriorParams {
    pub fn new(gamma: f64) -> Result<Self> {
        let p = PriorParams { gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!(
                "prior gamma must be a finite value > 1, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn ln_gamma(&self) -> f64 {
        self.gamma.ln()
    }

    pub fn density(&self, beta: f64) -> Result<f64> {
        density(beta, self)
    }

    pub fn interval_mass(&self, a: f64, b: f64) -> Result<f64> {
        interval_mass(a, b, self)
    }

    pub fn mass_below(&self, b: f64) -> Result<f64> {
        mass_below(b, self)
    }

    pub fn quantile(&self, m: f64) -> Result<f64> {
        quantile(m, self)
    }
}

pub fn density(beta: f64, p: &PriorParams) -> Result<f64> {
    let a = beta.abs();
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain("density", beta, "[-1, 1] \\ {0}"));
    }
    let l = (a / p.gamma).ln();
    Ok(0.5 * p.ln_gamma() / (a * l * l))
}

/// Prior mass of `(0, b]`.
pub fn mass_below(b: f64, p: &PriorParams) -> Result<f64> {
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::domain("mass_below", b, "(0, 1]"));
    }
    let lg = p.ln_gamma();
    Ok(0.5 * lg / (lg - b.ln()))
}

/// Prior mass of `[a, b]` with `0 < a ≤ b ≤ 1`, in closed form.
pub fn interval_mass(a: f64, b: f64, p: &PriorParams) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("interval_mass", a, "a > 0"));
    }
    if !(b <= 1.0) {
        return Err(Error::domain("interval_mass", b, "b <= 1"));
    }
    if !(a <= b) {
        return Err(Error::domain("interval_mass", a, "a <= b"));
    }
    let lg = p.ln_gamma();
    let (la, lb) = (a.ln(), b.ln());
    Ok(0.5 * lg * (lb - la) / ((lg - lb) * (lg - la)))
}

/// Inverse of [`mass_below`]: the `β` whose positive-half mass below it is `m`.
pub fn quantile(m: f64, p: &PriorParams) -> Result<f64> {
    if !(m > 0.0 && m <= 0.5) {
        return Err(Error::domain("quantile", m, "(0, 0.5]"));
    }
    Ok((p.ln_gamma() * (1.0 - 0.5 / m)).exp())
}

/// `D(Q, P) = −log P([α·β̂, β̂])` where `Q` is `P` restricted to that interval
/// and renormalised.
pub fn restricted_kl(alpha: f64, beta_hat: f64, p: &PriorParams) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain("restricted_kl", alpha, "alpha in (0, 1)"));
    }
    if !(beta_hat > 0.0 && beta_hat <= 1.0) {
        return Err(Error::domain(
            "restricted_kl",
            beta_hat,
            "beta_hat in (0, 1]",
        ));
    }
    Ok(-interval_mass(alpha * beta_hat, beta_hat, p)?.ln())
}

/// Closed-form relaxation of [`restricted_kl`]:
/// `log((log γ − log(α·β̂))² / (0.5·log γ·log(1/α)))`.
pub fn restricted_kl_upper(alpha: f64, beta_hat: f64, p: &PriorParams) -> f64 {
    let lg = p.ln_gamma();
    let num = lg - (alpha * beta_hat).ln();
    (num * num / (0.5 * lg * (1.0 / alpha).ln())).ln()
}
