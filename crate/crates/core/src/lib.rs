//! Mixture coin betting over a heavy-tailed prior and the time-uniform
//! deviation bounds it implies for bounded martingale difference sequences.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`]: the conjugate pair `f`/`f*`, `Ψ(x) = x − log(1+x)` and its
//!   inverse through the `W₋₁` branch of the Lambert function.
//! * [`prior`]: the betting prior, its closed-form interval mass and quantile map.
//! * [`quadrature`]: the quantile-space Gauss–Legendre grid used for every
//!   expectation over the prior.
//! * [`engine`]: the incremental mixture bettor (bets and wealth).
//! * [`bounds`]: the wealth lower bound and the three nested confidence radii.
//! * [`simulation`]: Monte Carlo harness for coverage, maximal-inequality and
//!   wealth-bound experiments.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod engine;
pub mod error;
pub mod prior;
pub mod quadrature;
pub mod simulation;
pub mod special;

pub use bounds::{a_t, confidence_radius, wealth_lower_bound, BoundForm, BoundParams};
pub use engine::BettingState;
pub use error::{Error, Result};
pub use prior::PriorParams;
pub use quadrature::QuadratureGrid;
pub use simulation::{CoverageReport, DoobReport, MartingaleModel, SimConfig, WealthBoundReport};
