//! The mixture bettor.
//!
//! The bet for round `t` is `w_t = E_{β∼P}[β ∏_{i<t}(1 + β g_i)]` and the
//! resulting wealth is `E_{β∼P}[∏_{i≤t}(1 + β g_i)]`, a prior-weighted average
//! of constant-fraction bettors. Both expectations are taken on a fixed
//! [`QuadratureGrid`], with the running products kept per node in log form
//! so that each observation costs `O(nodes)`.
//!
//! Since the discretised prior is itself a probability measure, the identity
//! `wealth = 1 + Σ w_i g_i` holds exactly (up to rounding) on any grid.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::prior::PriorParams;
use crate::quadrature::QuadratureGrid;

#[derive(Debug, Clone)]
pub struct BettingState {
    t: u64,
    sum_g: f64,
    sum_g2: f64,
    log_prod_pos: Vec<f64>,
    log_prod_neg: Vec<f64>,
    grid: Arc<QuadratureGrid>,
}

impl BettingState {
    /// Fresh bettor with one dollar on a `node_count`-point grid.
    pub fn init(prior: PriorParams, node_count: usize) -> Result<Self> {
        Ok(Self::with_grid(Arc::new(QuadratureGrid::new(
            prior, node_count,
        )?)))
    }

    /// Fresh bettor sharing an existing grid.
    pub fn with_grid(grid: Arc<QuadratureGrid>) -> Self {
        let n = grid.len();
        BettingState {
            t: 0,
            sum_g: 0.0,
            sum_g2: 0.0,
            log_prod_pos: vec![0.0; n],
            log_prod_neg: vec![0.0; n],
            grid,
        }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn sum_g(&self) -> f64 {
        self.sum_g
    }

    pub fn sum_g2(&self) -> f64 {
        self.sum_g2
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> Arc<QuadratureGrid> {
        Arc::clone(&self.grid)
    }

    /// Per-node `Σ log(1 + β_j g_i)`; `−∞` once a factor has hit zero.
    pub fn log_prod_pos(&self) -> &[f64] {
        &self.log_prod_pos
    }

    /// Per-node `Σ log(1 − β_j g_i)`.
    pub fn log_prod_neg(&self) -> &[f64] {
        &self.log_prod_neg
    }

    /// Bet for the next round given the rounds observed so far.
    pub fn bet(&self) -> f64 {
        self.bet_and_wealth().0
    }

    pub fn wealth(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(self.log_prod_pos.iter().zip(&self.log_prod_neg))
            .map(|(&w, (&lp, &ln))| w * (lp.exp() + ln.exp()))
            .sum()
    }

    /// `(bet, wealth)` in one pass over the grid.
    pub fn bet_and_wealth(&self) -> (f64, f64) {
        let g = &self.grid;
        let mut bet = 0.0;
        let mut wealth = 0.0;
        for j in 0..g.len() {
            let up = self.log_prod_pos[j].exp();
            let down = self.log_prod_neg[j].exp();
            let w = g.weights()[j];
            bet += w * g.nodes_beta()[j] * (up - down);
            wealth += w * (up + down);
        }
        (bet, wealth)
    }

    /// `log(wealth)` computed with a max shift, finite even when the wealth
    /// itself would overflow.
    pub fn log_wealth(&self) -> f64 {
        let max = self
            .log_prod_pos
            .iter()
            .chain(&self.log_prod_neg)
            .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        if max == f64::NEG_INFINITY {
            return max;
        }
        let s: f64 = self
            .grid
            .weights()
            .iter()
            .zip(self.log_prod_pos.iter().zip(&self.log_prod_neg))
            .map(|(&w, (&lp, &ln))| w * ((lp - max).exp() + (ln - max).exp()))
            .sum();
        max + s.ln()
    }

    /// Record outcome `g ∈ [−1, 1]`.
    pub fn observe(&mut self, g: f64) -> Result<()> {
        if !(g.abs() <= 1.0) {
            return Err(Error::domain("observe", g, "[-1, 1]"));
        }
        self.t += 1;
        self.sum_g += g;
        self.sum_g2 += g * g;
        if g == 0.0 {
            return Ok(());
        }
        if g == 1.0 || g == -1.0 {
            let (a, b) = if g > 0.0 {
                (self.grid.ln_up(), self.grid.ln_down())
            } else {
                (self.grid.ln_down(), self.grid.ln_up())
            };
            for (lp, &x) in self.log_prod_pos.iter_mut().zip(a) {
                *lp += x;
            }
            for (ln, &x) in self.log_prod_neg.iter_mut().zip(b) {
                *ln += x;
            }
            return Ok(());
        }
        for ((lp, ln), &b) in self
            .log_prod_pos
            .iter_mut()
            .zip(self.log_prod_neg.iter_mut())
            .zip(self.grid.nodes_beta())
        {
            *lp += (b * g).ln_1p();
            *ln += (-b * g).ln_1p();
        }
        Ok(())
    }

    /// Consuming variant of [`observe`](Self::observe).
    pub fn observed(mut self, g: f64) -> Result<Self> {
        self.observe(g)?;
        Ok(self)
    }

    /// `Σg / (|Σg| + Σg²)`, or zero when `Σg = 0`.
    pub fn beta_hat(&self) -> f64 {
        beta_hat(self.sum_g, self.sum_g2)
    }
}

pub fn beta_hat(sum_g: f64, sum_g2: f64) -> f64 {
    if sum_g == 0.0 {
        0.0
    } else {
        sum_g / (sum_g.abs() + sum_g2)
    }
}

/// Outcome of [`replay_strict`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedWealth {
    pub wealth: f64,
    pub node_count: usize,
    /// Relative change between the last two grid sizes.
    pub rel_change: f64,
}

/// Replays `history` on grids of `start_nodes`, `2·start_nodes`, ... until
/// doubling changes the final wealth by less than `rel_tol`.
pub fn replay_strict(
    history: &[f64],
    prior: PriorParams,
    start_nodes: usize,
    rel_tol: f64,
    max_nodes: usize,
) -> Result<RefinedWealth> {
    let replay = |n: usize| -> Result<f64> {
        let mut s = BettingState::init(prior, n)?;
        for &g in history {
            s.observe(g)?;
        }
        Ok(s.wealth())
    };
    let mut n = start_nodes;
    let mut coarse = replay(n)?;
    while 2 * n <= max_nodes {
        let fine = replay(2 * n)?;
        let rel_change = ((fine - coarse) / fine).abs();
        n *= 2;
        if rel_change < rel_tol {
            return Ok(RefinedWealth {
                wealth: fine,
                node_count: n,
                rel_change,
            });
        }
        coarse = fine;
    }
    Err(Error::Config(format!(
        "quadrature did not stabilise to {rel_tol} within {max_nodes} nodes"
    )))
}
