//! Quadrature over the betting prior in quantile space.
//!
//! Each half of the prior is uniform in `m ∈ (0, 0.5]`, so expectations are
//! `E_P[h(β)] = ∫₀^{0.5} h(β(m)) + h(−β(m)) dm`, discretised here by composite
//! Gauss–Legendre panels on `(0, 0.5)`.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};
use crate::prior::PriorParams;

/// Points per Gauss–Legendre panel.
pub const PANEL_ORDER: usize = 16;
pub const MIN_NODES: usize = 16;
pub const DEFAULT_NODES: usize = 512;

/// Nodes and weights for the positive half of the prior; the negative half is
/// the mirror image `−β_j` with the same weight.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    prior: PriorParams,
    nodes_m: Vec<f64>,
    weights: Vec<f64>,
    nodes_beta: Vec<f64>,
    // log(1 + β_j) and log(1 − β_j), the per-round factors for g = ±1.
    ln_up: Vec<f64>,
    ln_down: Vec<f64>,
}

impl QuadratureGrid {
    /// Composite rule with `node_count` nodes on the positive half: panels of
    /// [`PANEL_ORDER`] points, the last panel absorbing any remainder.
    pub fn new(prior: PriorParams, node_count: usize) -> Result<Self> {
        prior.validate()?;
        if node_count < MIN_NODES {
            return Err(Error::Config(format!(
                "node_count must be >= {MIN_NODES}, got {node_count}"
            )));
        }
        let panels = node_count / PANEL_ORDER;
        let last_order = PANEL_ORDER + node_count % PANEL_ORDER;
        let base = gauss_legendre(PANEL_ORDER);
        let last = gauss_legendre(last_order);

        let width = 0.5 / panels as f64;
        let mut nodes_m = Vec::with_capacity(node_count);
        let mut weights = Vec::with_capacity(node_count);
        for k in 0..panels {
            let rule = if k + 1 == panels { &last } else { &base };
            let lo = k as f64 * width;
            for &(x, w) in rule {
                nodes_m.push(lo + 0.5 * width * (x + 1.0));
                weights.push(0.5 * width * w);
            }
        }
        Self::build(prior, nodes_m, weights)
    }

    /// Grid from explicit quantile-space nodes in `(0, 0.5]` and positive
    /// weights summing to one half.
    pub fn from_parts(prior: PriorParams, nodes_m: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        prior.validate()?;
        if nodes_m.is_empty() || nodes_m.len() != weights.len() {
            return Err(Error::Config(
                "nodes and weights must be non-empty and of equal length".into(),
            ));
        }
        if nodes_m.iter().any(|&m| !(m > 0.0 && m <= 0.5))
            || nodes_m.windows(2).any(|w| !(w[0] < w[1]))
        {
            return Err(Error::Config(
                "nodes must be strictly increasing in (0, 0.5]".into(),
            ));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Config("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 0.5).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "weights must sum to 0.5, got {total}"
            )));
        }
        Self::build(prior, nodes_m, weights)
    }

    fn build(prior: PriorParams, nodes_m: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let nodes_beta = nodes_m
            .iter()
            .map(|&m| prior.quantile(m))
            .collect::<Result<Vec<_>>>()?;
        let ln_up = nodes_beta.iter().map(|b| b.ln_1p()).collect();
        let ln_down = nodes_beta.iter().map(|b| (-b).ln_1p()).collect();
        Ok(QuadratureGrid {
            prior,
            nodes_m,
            weights,
            nodes_beta,
            ln_up,
            ln_down,
        })
    }

    pub fn prior(&self) -> &PriorParams {
        &self.prior
    }

    pub fn len(&self) -> usize {
        self.nodes_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes_m.is_empty()
    }

    pub fn nodes_m(&self) -> &[f64] {
        &self.nodes_m
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nodes_beta(&self) -> &[f64] {
        &self.nodes_beta
    }

    pub(crate) fn ln_up(&self) -> &[f64] {
        &self.ln_up
    }

    pub(crate) fn ln_down(&self) -> &[f64] {
        &self.ln_down
    }

    /// `E_P[h(β)]` over both halves of the prior.
    pub fn expectation(&self, h: impl Fn(f64) -> f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.nodes_beta)
            .map(|(&w, &b)| w * (h(b) + h(-b)))
            .sum()
    }
}

/// Nodes and weights on `[−1, 1]`, ascending.
fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order).expect("order >= 1"));
    let mut pairs = rule.as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_invariants() {
        for &n in &[16, 17, 100, 512, 1024] {
            let g = QuadratureGrid::new(PriorParams::default(), n).unwrap();
            assert_eq!(g.len(), n);
            let total: f64 = g.weights().iter().sum();
            assert_abs_diff_eq!(total, 0.5, epsilon = 1e-12);
            assert!(g.nodes_m().windows(2).all(|w| w[0] < w[1]));
            assert!(g.nodes_m().iter().all(|&m| m > 0.0 && m < 0.5));
            assert!(g.nodes_beta().iter().all(|&b| (0.0..=1.0).contains(&b)));
            assert!(g.weights().iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn rejects_small_grids() {
        assert!(QuadratureGrid::new(PriorParams::default(), 15).is_err());
        assert!(QuadratureGrid::new(PriorParams { gamma: 1.0 }, 512).is_err());
    }

    #[test]
    fn from_parts_validation() {
        let p = PriorParams::default();
        assert!(QuadratureGrid::from_parts(p, vec![0.25, 0.5], vec![0.25, 0.25]).is_ok());
        assert!(QuadratureGrid::from_parts(p, vec![0.5, 0.25], vec![0.25, 0.25]).is_err());
        assert!(QuadratureGrid::from_parts(p, vec![0.25, 0.5], vec![0.25, 0.2]).is_err());
        assert!(QuadratureGrid::from_parts(p, vec![0.0, 0.5], vec![0.25, 0.25]).is_err());
    }

    #[test]
    fn total_mass_and_symmetry() {
        let g = QuadratureGrid::new(PriorParams::new(5.0).unwrap(), 512).unwrap();
        assert_abs_diff_eq!(g.expectation(|_| 1.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.expectation(|b| b), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.expectation(|b| b * b * b), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn second_moment_against_fine_midpoint_rule() {
        // independent oracle: 10⁶-interval midpoint rule in m
        let p = PriorParams::default();
        let n = 1_000_000;
        let h = 0.5 / n as f64;
        let oracle: f64 = 2.0
            * (0..n)
                .map(|i| {
                    let b = p.quantile((i as f64 + 0.5) * h).unwrap();
                    b * b * h
                })
                .sum::<f64>();
        assert_abs_diff_eq!(oracle, 0.277_342_766_223_554_8, epsilon = 1e-9);
        let g = QuadratureGrid::new(p, 512).unwrap();
        assert_abs_diff_eq!(g.expectation(|b| b * b), oracle, epsilon = 1e-9);
    }
}
