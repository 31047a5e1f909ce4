//! Guaranteed-wealth lower bound and the time-uniform deviation radii it
//! implies through the maximal inequality for nonnegative martingales.
//!
//! Throughout, `sum_g = Σ g_i` and `sum_g2 = Σ g_i²`.

use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prior::PriorParams;
use crate::special::psi_inv;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            alpha: 0.5,
            gamma: E,
            delta: 0.05,
        }
    }
}

impl BoundParams {
    pub fn new(alpha: f64, gamma: f64, delta: f64) -> Result<Self> {
        let p = BoundParams {
            alpha,
            gamma,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks `alpha` and `gamma`; `delta` is only needed for radii.
    pub fn validate_wealth(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        self.prior().validate()
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_wealth()?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::Config(format!(
                "delta must be in (0, 1), got {}",
                self.delta
            )));
        }
        Ok(())
    }

    pub fn prior(&self) -> PriorParams {
        PriorParams { gamma: self.gamma }
    }

    fn log_denominator(&self) -> f64 {
        0.5 * self.gamma.ln() * (1.0 / self.alpha).ln()
    }
}

/// Which line of the nested radius chain to evaluate. Each is looser than the
/// previous one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundForm {
    /// `max(S·Ψ⁻¹(log(A/δ)/(αS)), √(2S/α))`
    #[serde(rename = "exact")]
    ExactInverse,
    /// `Ψ⁻¹` replaced by `y + log(1 + y + √(2y))`
    #[serde(rename = "log")]
    LogForm,
    /// `(2/α)·log(A/δ) + √((2S/α)·log(A/δ))`
    #[serde(rename = "simple")]
    SimpleForm,
}

impl BoundForm {
    pub const ALL: [BoundForm; 3] = [
        BoundForm::ExactInverse,
        BoundForm::LogForm,
        BoundForm::SimpleForm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundForm::ExactInverse => "exact",
            BoundForm::LogForm => "log",
            BoundForm::SimpleForm => "simple",
        }
    }
}

impl fmt::Display for BoundForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(BoundForm::ExactInverse),
            "log" => Ok(BoundForm::LogForm),
            "simple" => Ok(BoundForm::SimpleForm),
            other => Err(Error::Config(format!(
                "unknown bound form {other:?} (expected exact, log or simple)"
            ))),
        }
    }
}

/// Natural log of [`wealth_lower_bound`]; `−∞` when `sum_g = 0`.
pub fn log_wealth_lower_bound(sum_g: f64, sum_g2: f64, p: &BoundParams) -> Result<f64> {
    p.validate_wealth()?;
    if sum_g == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if !(sum_g2 > 0.0) || !sum_g.is_finite() {
        return Err(Error::domain(
            "wealth_lower_bound",
            sum_g2,
            "sum_g2 > 0 when sum_g != 0",
        ));
    }
    let s = sum_g.abs();
    let x = s / sum_g2;
    let gain = p.alpha * (x - x.ln_1p()) * sum_g2;
    let num = p.gamma.ln() + (1.0 / p.alpha).ln() + (sum_g2 / s).ln_1p();
    Ok(gain - (num * num / p.log_denominator()).ln())
}

/// Wealth guaranteed by the mixture bettor after observing outcomes with the
/// given sums, for every `alpha ∈ (0, 1)`. Zero when `sum_g = 0`.
pub fn wealth_lower_bound(sum_g: f64, sum_g2: f64, p: &BoundParams) -> Result<f64> {
    Ok(log_wealth_lower_bound(sum_g, sum_g2, p)?.exp())
}

/// The logarithmic correction `A_t` of the deviation radius.
pub fn a_t(sum_g2: f64, p: &BoundParams) -> f64 {
    let num = p.gamma.ln() + (1.0 / p.alpha).ln() + (0.5 * p.alpha * sum_g2).sqrt().ln_1p();
    num * num / p.log_denominator()
}

/// Radius `R` with `|Σ g_i| ≤ R` simultaneously for all `t`, with
/// probability at least `1 − δ`.
///
/// At `sum_g2 = 0` the exact and log forms take their limit `log(A/δ)/α`.
pub fn confidence_radius(sum_g2: f64, p: &BoundParams, form: BoundForm) -> Result<f64> {
    p.validate()?;
    if !(sum_g2 >= 0.0) || sum_g2.is_infinite() {
        return Err(Error::domain("confidence_radius", sum_g2, "[0, inf)"));
    }
    let l = (a_t(sum_g2, p) / p.delta).ln();
    let alpha = p.alpha;
    let floor = (2.0 * sum_g2 / alpha).sqrt();
    let r = match form {
        BoundForm::SimpleForm => 2.0 * l / alpha + (2.0 * sum_g2 * l / alpha).sqrt(),
        _ if sum_g2 == 0.0 => l / alpha,
        BoundForm::ExactInverse => {
            let y = l / (alpha * sum_g2);
            (sum_g2 * psi_inv(y)?).max(floor)
        }
        BoundForm::LogForm => {
            let y = l / (alpha * sum_g2);
            (l / alpha + sum_g2 * (y + (2.0 * y).sqrt()).ln_1p()).max(floor)
        }
    };
    Ok(r)
}

/// `β·x + x²·(log(1 − |β|) + |β|)`, a lower bound on `log(1 + β·x)` for
/// `|x| ≤ 1`, `|β| < 1`.
pub fn log_factor_minorant(beta: f64, x: f64) -> f64 {
    let b = beta.abs();
    beta * x + x * x * ((-b).ln_1p() + b)
}

/// `β·S + (log(1 − |β|) + |β|)·V`: the concave surrogate maximised at
/// `β̂ = S/(|S| + V)` with value `Ψ(|S|/V)·V`.
pub fn surrogate_objective(beta: f64, sum_g: f64, sum_g2: f64) -> f64 {
    let b = beta.abs();
    beta * sum_g + ((-b).ln_1p() + b) * sum_g2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn params_validation() {
        assert!(BoundParams::new(0.5, E, 0.05).is_ok());
        assert!(BoundParams::new(1.5, E, 0.05).is_err());
        assert!(BoundParams::new(0.0, E, 0.05).is_err());
        assert!(BoundParams::new(0.5, 1.0, 0.05).is_err());
        assert!(BoundParams::new(0.5, E, 1.0).is_err());
        assert!(BoundParams::new(0.5, E, 0.0).is_err());
    }

    #[test]
    fn form_parsing() {
        for f in BoundForm::ALL {
            assert_eq!(f.as_str().parse::<BoundForm>().unwrap(), f);
        }
        assert!("tight".parse::<BoundForm>().is_err());
    }

    #[test]
    fn degenerate_wealth_bound() {
        let p = BoundParams::default();
        assert_eq!(wealth_lower_bound(0.0, 0.0, &p).unwrap(), 0.0);
        assert_eq!(wealth_lower_bound(0.0, 3.0, &p).unwrap(), 0.0);
        assert!(wealth_lower_bound(1.0, 0.0, &p).is_err());
    }

    #[test]
    fn wealth_bound_values() {
        let p = BoundParams::default();
        let psi01 = 0.1 - 1.1f64.ln();
        assert_abs_diff_eq!(psi01, 0.004_689_820_195_675_065, epsilon = 1e-15);
        let denom = (1.0 + 2f64.ln() + 11f64.ln()).powi(2) / (0.5 * 2f64.ln());
        let direct = (0.5 * psi01 * 100.0 - denom.ln()).exp();
        let v = wealth_lower_bound(10.0, 100.0, &p).unwrap();
        assert_abs_diff_eq!(v, direct, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.026_179_759_010_065_54, epsilon = 1e-14);
        let one = wealth_lower_bound(1.0, 1.0, &p).unwrap();
        assert_abs_diff_eq!(one, 0.070_954_456_620_897_37, epsilon = 1e-14);
        assert!(one <= 1.0);
    }

    #[test]
    fn a_t_values() {
        let p = BoundParams::default();
        assert_abs_diff_eq!(a_t(0.0, &p), 8.271_684_442_897_817, epsilon = 1e-12);
        assert_abs_diff_eq!(a_t(100.0, &p), 35.041_834_399_227_79, epsilon = 1e-11);
        let mut prev = 0.0;
        for i in 0..1000 {
            let v = a_t(i as f64 * 7.3, &p);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn radius_values() {
        let p = BoundParams::default();
        let simple = confidence_radius(100.0, &p, BoundForm::SimpleForm).unwrap();
        assert_abs_diff_eq!(simple, 77.403_923_086_024_32, epsilon = 1e-10);
        let log = confidence_radius(100.0, &p, BoundForm::LogForm).unwrap();
        let exact = confidence_radius(100.0, &p, BoundForm::ExactInverse).unwrap();
        assert!(exact <= log && log <= simple);
    }

    #[test]
    fn radius_at_zero_variance() {
        let p = BoundParams::default();
        let l = (a_t(0.0, &p) / p.delta).ln();
        assert_abs_diff_eq!(
            confidence_radius(0.0, &p, BoundForm::ExactInverse).unwrap(),
            l / p.alpha,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            confidence_radius(0.0, &p, BoundForm::LogForm).unwrap(),
            l / p.alpha,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            confidence_radius(0.0, &p, BoundForm::SimpleForm).unwrap(),
            2.0 * l / p.alpha,
            epsilon = 1e-14
        );
        // continuity of the limit
        let near = confidence_radius(1e-15, &p, BoundForm::ExactInverse).unwrap();
        assert_abs_diff_eq!(near, l / p.alpha, epsilon = 1e-6);
        assert!(confidence_radius(-1.0, &p, BoundForm::SimpleForm).is_err());
    }

    #[test]
    fn variance_floor_never_binds() {
        // A_t ≥ 8 keeps log(A/δ) > 1, and Ψ⁻¹(y) ≥ √(2y), so the first arm of
        // the max already exceeds √(2S/α), even as δ → 1.
        let p = BoundParams::new(0.5, E, 1.0 - 1e-12).unwrap();
        for &s in &[1e-8, 1e-3, 0.5, 1.0, 10.0, 1e4, 1e8] {
            let l = (a_t(s, &p) / p.delta).ln();
            assert!(l > 1.0);
            let first = s * psi_inv(l / (p.alpha * s)).unwrap();
            let floor = (2.0 * s / p.alpha).sqrt();
            assert!(first >= floor);
            let r = confidence_radius(s, &p, BoundForm::ExactInverse).unwrap();
            assert_abs_diff_eq!(r, first, epsilon = 1e-12 * first);
        }
    }

    #[test]
    fn maximiser_of_surrogate() {
        let (s, v) = (7.0, 20.0);
        let bh = s / (s + v);
        let at = surrogate_objective(bh, s, v);
        let x: f64 = s / v;
        assert_abs_diff_eq!(at, (x - x.ln_1p()) * v, epsilon = 1e-12);
        for &d in &[-1e-3, 1e-3] {
            assert!(surrogate_objective(bh + d, s, v) < at);
        }
    }
}
