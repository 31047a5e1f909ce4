//! Monte Carlo harness: martingale difference generators and the three
//! experiments (radius coverage, maximal-inequality exceedance of the wealth,
//! and validity of the wealth lower bound).
//!
//! Every replication draws from its own ChaCha stream keyed by
//! `(seed, rep_index)`, so results do not depend on how replications are
//! scheduled across threads.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{confidence_radius, wealth_lower_bound, BoundForm, BoundParams};
use crate::engine::BettingState;
use crate::error::{Error, Result};
use crate::quadrature::{QuadratureGrid, DEFAULT_NODES, MIN_NODES};

const WILSON_Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MartingaleModel {
    /// ±1 with equal probability.
    Rademacher,
    /// Uniform on `[−1, 1]`.
    UniformCentered,
    /// `1 − p` with probability `p`, `−p` otherwise.
    ScaledBernoulli { p: f64 },
    /// `−sign(S_{t−1})·ε_t·|u_t|` with `ε_t` a fair sign and `u_t` uniform on
    /// `[−1, 1]`.
    AdversarialSignFlip,
    /// Identically zero.
    Zero,
}

impl MartingaleModel {
    pub fn validate(&self) -> Result<()> {
        if let MartingaleModel::ScaledBernoulli { p } = *self {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Config(format!(
                    "bernoulli p must be in (0, 1), got {p}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MartingaleModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MartingaleModel::Rademacher => f.write_str("rademacher"),
            MartingaleModel::UniformCentered => f.write_str("uniform"),
            MartingaleModel::ScaledBernoulli { p } => write!(f, "bernoulli:{p}"),
            MartingaleModel::AdversarialSignFlip => f.write_str("signflip"),
            MartingaleModel::Zero => f.write_str("zero"),
        }
    }
}

impl FromStr for MartingaleModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let model = match s {
            "rademacher" => MartingaleModel::Rademacher,
            "uniform" => MartingaleModel::UniformCentered,
            "signflip" => MartingaleModel::AdversarialSignFlip,
            "zero" => MartingaleModel::Zero,
            _ => match s.strip_prefix("bernoulli:") {
                Some(p) => MartingaleModel::ScaledBernoulli {
                    p: p.parse()
                        .map_err(|_| Error::Config(format!("bad bernoulli parameter {p:?}")))?,
                },
                None => {
                    return Err(Error::Config(format!(
                        "unknown model {s:?} (expected rademacher, uniform, bernoulli:<p>, signflip, zero)"
                    )))
                }
            },
        };
        model.validate()?;
        Ok(model)
    }
}

/// Random stream for replication `rep` of an experiment seeded with `seed`.
pub fn rep_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Lazily generated martingale difference sequence.
pub struct PathGenerator {
    model: MartingaleModel,
    rng: ChaCha8Rng,
    partial_sum: f64,
}

impl PathGenerator {
    pub fn new(model: MartingaleModel, rng: ChaCha8Rng) -> Self {
        PathGenerator {
            model,
            rng,
            partial_sum: 0.0,
        }
    }

    pub fn next_value(&mut self) -> f64 {
        let g = match self.model {
            MartingaleModel::Rademacher => {
                if self.rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            MartingaleModel::UniformCentered => self.rng.random_range(-1.0..=1.0),
            MartingaleModel::ScaledBernoulli { p } => {
                if self.rng.random::<f64>() < p {
                    1.0 - p
                } else {
                    -p
                }
            }
            MartingaleModel::AdversarialSignFlip => {
                let toward = if self.partial_sum >= 0.0 { -1.0 } else { 1.0 };
                let eps = if self.rng.random::<bool>() { 1.0 } else { -1.0 };
                let u: f64 = self.rng.random_range(-1.0..=1.0);
                toward * eps * u.abs()
            }
            MartingaleModel::Zero => 0.0,
        };
        self.partial_sum += g;
        g
    }
}

/// `horizon` draws from `model`, reproducible from `seed`.
pub fn generate(model: MartingaleModel, horizon: usize, seed: u64) -> Vec<f64> {
    let mut gen = PathGenerator::new(model, rep_rng(seed, 0));
    (0..horizon).map(|_| gen.next_value()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: MartingaleModel,
    pub horizon: usize,
    pub reps: usize,
    pub seed: u64,
    pub bound: BoundParams,
    pub form: BoundForm,
    pub node_count: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            model: MartingaleModel::Rademacher,
            horizon: 10_000,
            reps: 2000,
            seed: 0,
            bound: BoundParams::default(),
            form: BoundForm::SimpleForm,
            node_count: DEFAULT_NODES,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be >= 1".into()));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be >= 1".into()));
        }
        if self.node_count < MIN_NODES {
            return Err(Error::Config(format!(
                "node_count must be >= {MIN_NODES}, got {}",
                self.node_count
            )));
        }
        self.model.validate()?;
        self.bound.validate()
    }

    fn grid(&self) -> Result<Arc<QuadratureGrid>> {
        Ok(Arc::new(QuadratureGrid::new(
            self.bound.prior(),
            self.node_count,
        )?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub reps: usize,
    pub violations: usize,
    pub rate: f64,
    pub wilson_lower_95: f64,
    pub wilson_upper_95: f64,
    pub runtime_sec: f64,
}

impl CoverageReport {
    fn from_counts(violations: usize, reps: usize, runtime_sec: f64) -> Self {
        let (lo, hi) = wilson_interval(violations, reps, WILSON_Z95);
        CoverageReport {
            reps,
            violations,
            rate: violations as f64 / reps as f64,
            wilson_lower_95: lo,
            wilson_upper_95: hi,
            runtime_sec,
        }
    }

    /// False only when the violation rate exceeds `delta` significantly,
    /// i.e. the whole Wilson 95% interval lies above it.
    pub fn guarantee_holds(&self, delta: f64) -> bool {
        self.wilson_lower_95 <= delta
    }

    /// Equality up to the wall-clock field.
    pub fn same_counts(&self, other: &Self) -> bool {
        CoverageReport {
            runtime_sec: 0.0,
            ..*self
        } == CoverageReport {
            runtime_sec: 0.0,
            ..*other
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoobReport {
    #[serde(flatten)]
    pub exceedance: CoverageReport,
    pub mean_final_wealth: f64,
    pub final_wealth_std_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WealthBoundReport {
    pub reps: usize,
    pub min_slack: f64,
    /// 1-based round at which the minimum occurred.
    pub argmin_t: usize,
    pub argmin_rep: usize,
    pub runtime_sec: f64,
}

/// Slack below which the wealth bound counts as violated: the quadrature
/// tolerance.
pub const WEALTH_SLACK_TOL: f64 = -1e-8;

impl WealthBoundReport {
    pub fn guarantee_holds(&self) -> bool {
        self.min_slack >= WEALTH_SLACK_TOL
    }
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Cheap lower bound on every radius form: with `L₀ = log(8/δ) ≤ log(A_t/δ)`,
/// each radius is at least `max(L₀/α, √(2·S·L₀/α))`.
fn radius_floor(sum_g2: f64, p: &BoundParams) -> f64 {
    let l0 = (8.0 / p.delta).ln();
    (l0 / p.alpha).max((2.0 * sum_g2 * l0 / p.alpha).sqrt())
}

fn path_violates(cfg: &SimConfig, rep: u64) -> Result<bool> {
    let mut gen = PathGenerator::new(cfg.model, rep_rng(cfg.seed, rep));
    let (mut s, mut v) = (0.0f64, 0.0f64);
    for _ in 0..cfg.horizon {
        let g = gen.next_value();
        s += g;
        v += g * g;
        if s.abs() > radius_floor(v, &cfg.bound)
            && s.abs() > confidence_radius(v, &cfg.bound, cfg.form)?
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Fraction of paths whose partial sum leaves the radius at some `t ≤ T`.
pub fn coverage_experiment(cfg: &SimConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let start = Instant::now();
    let hits = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| path_violates(cfg, rep))
        .collect::<Result<Vec<bool>>>()?;
    let violations = hits.iter().filter(|&&h| h).count();
    Ok(CoverageReport::from_counts(
        violations,
        cfg.reps,
        start.elapsed().as_secs_f64(),
    ))
}

/// Fraction of paths on which the bettor's wealth reaches `1/δ` by time `T`,
/// together with the Monte Carlo mean of the final wealth.
pub fn doob_experiment(cfg: &SimConfig) -> Result<DoobReport> {
    cfg.validate()?;
    let start = Instant::now();
    let grid = cfg.grid()?;
    let threshold = 1.0 / cfg.bound.delta;
    let per_rep = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| -> Result<(bool, f64)> {
            let mut gen = PathGenerator::new(cfg.model, rep_rng(cfg.seed, rep));
            let mut state = BettingState::with_grid(Arc::clone(&grid));
            let mut exceeded = false;
            for _ in 0..cfg.horizon {
                state.observe(gen.next_value())?;
                if !exceeded && state.wealth() >= threshold {
                    exceeded = true;
                }
            }
            Ok((exceeded, state.wealth()))
        })
        .collect::<Result<Vec<_>>>()?;

    let violations = per_rep.iter().filter(|r| r.0).count();
    let n = per_rep.len() as f64;
    let mean = per_rep.iter().map(|r| r.1).sum::<f64>() / n;
    let var = if per_rep.len() > 1 {
        per_rep.iter().map(|r| (r.1 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(DoobReport {
        exceedance: CoverageReport::from_counts(
            violations,
            cfg.reps,
            start.elapsed().as_secs_f64(),
        ),
        mean_final_wealth: mean,
        final_wealth_std_err: (var / n).sqrt(),
    })
}

/// Minimum over paths and rounds of `wealth − wealth_lower_bound`.
pub fn wealth_bound_experiment(cfg: &SimConfig) -> Result<WealthBoundReport> {
    cfg.validate()?;
    let start = Instant::now();
    let grid = cfg.grid()?;
    let per_rep = (0..cfg.reps as u64)
        .into_par_iter()
        .map(|rep| -> Result<(f64, usize)> {
            let mut gen = PathGenerator::new(cfg.model, rep_rng(cfg.seed, rep));
            let mut state = BettingState::with_grid(Arc::clone(&grid));
            let (mut min_slack, mut argmin) = (f64::INFINITY, 0);
            for t in 1..=cfg.horizon {
                state.observe(gen.next_value())?;
                let bound = wealth_lower_bound(state.sum_g(), state.sum_g2(), &cfg.bound)?;
                let slack = state.wealth() - bound;
                if slack < min_slack {
                    min_slack = slack;
                    argmin = t;
                }
            }
            Ok((min_slack, argmin))
        })
        .collect::<Result<Vec<_>>>()?;

    let (argmin_rep, &(min_slack, argmin_t)) = per_rep
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .expect("reps >= 1");
    Ok(WealthBoundReport {
        reps: cfg.reps,
        min_slack,
        argmin_t,
        argmin_rep,
        runtime_sec: start.elapsed().as_secs_f64(),
    })
}
