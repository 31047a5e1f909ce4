//! Python bindings: `import pycoinbet`.

use std::f64::consts::E;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use coinbet::simulation::{
    coverage_experiment, doob_experiment, wealth_bound_experiment, CoverageReport,
};
use coinbet::{
    bounds, prior, special, BoundForm, BoundParams, MartingaleModel, PriorParams, SimConfig,
};

fn err(e: coinbet::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn prior_params(gamma: f64) -> PyResult<PriorParams> {
    PriorParams::new(gamma).map_err(err)
}

#[pyfunction]
fn f(eta: f64) -> PyResult<f64> {
    special::f(eta).map_err(err)
}

#[pyfunction]
fn f_conjugate(x: f64) -> f64 {
    special::f_conjugate(x)
}

#[pyfunction]
fn eta_star(x: f64) -> f64 {
    special::eta_star(x)
}

#[pyfunction]
fn psi(x: f64) -> PyResult<f64> {
    special::psi(x).map_err(err)
}

#[pyfunction]
fn psi_inv(y: f64) -> PyResult<f64> {
    special::psi_inv(y).map_err(err)
}

#[pyfunction]
fn psi_inv_upper_log(y: f64) -> f64 {
    special::psi_inv_upper_log(y)
}

#[pyfunction]
fn psi_inv_upper_simple(y: f64) -> f64 {
    special::psi_inv_upper_simple(y)
}

#[pyfunction]
fn lambert_w_minus1(x: f64) -> PyResult<f64> {
    special::lambert_w_minus1(x).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (beta, gamma = E))]
fn prior_density(beta: f64, gamma: f64) -> PyResult<f64> {
    prior::density(beta, &prior_params(gamma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (b, gamma = E))]
fn prior_mass_below(b: f64, gamma: f64) -> PyResult<f64> {
    prior::mass_below(b, &prior_params(gamma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, b, gamma = E))]
fn prior_interval_mass(a: f64, b: f64, gamma: f64) -> PyResult<f64> {
    prior::interval_mass(a, b, &prior_params(gamma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (m, gamma = E))]
fn prior_quantile(m: f64, gamma: f64) -> PyResult<f64> {
    prior::quantile(m, &prior_params(gamma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (alpha, beta_hat, gamma = E))]
fn restricted_kl(alpha: f64, beta_hat: f64, gamma: f64) -> PyResult<f64> {
    prior::restricted_kl(alpha, beta_hat, &prior_params(gamma)?).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (sum_g, sum_g2, alpha = 0.5, gamma = E))]
fn wealth_lower_bound(sum_g: f64, sum_g2: f64, alpha: f64, gamma: f64) -> PyResult<f64> {
    let p = BoundParams {
        alpha,
        gamma,
        delta: 0.5,
    };
    bounds::wealth_lower_bound(sum_g, sum_g2, &p).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (sum_g2, alpha = 0.5, gamma = E))]
fn a_t(sum_g2: f64, alpha: f64, gamma: f64) -> PyResult<f64> {
    let p = BoundParams {
        alpha,
        gamma,
        delta: 0.5,
    };
    p.validate_wealth().map_err(err)?;
    Ok(bounds::a_t(sum_g2, &p))
}

#[pyfunction]
#[pyo3(signature = (sum_g2, delta = 0.05, alpha = 0.5, gamma = E, form = "simple"))]
fn confidence_radius(sum_g2: f64, delta: f64, alpha: f64, gamma: f64, form: &str) -> PyResult<f64> {
    let form: BoundForm = form.parse().map_err(err)?;
    bounds::confidence_radius(
        sum_g2,
        &BoundParams {
            alpha,
            gamma,
            delta,
        },
        form,
    )
    .map_err(err)
}

/// The mixture bettor. Starts with one unit of wealth.
#[pyclass(name = "BettingState")]
struct PyBettingState(coinbet::BettingState);

#[pymethods]
impl PyBettingState {
    #[new]
    #[pyo3(signature = (gamma = E, nodes = 512))]
    fn new(gamma: f64, nodes: usize) -> PyResult<Self> {
        Ok(Self(
            coinbet::BettingState::init(prior_params(gamma)?, nodes).map_err(err)?,
        ))
    }

    fn observe(&mut self, g: f64) -> PyResult<()> {
        self.0.observe(g).map_err(err)
    }

    /// Observes every value in order; returns the bets placed on each.
    fn observe_many(&mut self, gs: Vec<f64>) -> PyResult<Vec<f64>> {
        let mut bets = Vec::with_capacity(gs.len());
        for g in gs {
            bets.push(self.0.bet());
            self.0.observe(g).map_err(err)?;
        }
        Ok(bets)
    }

    fn bet(&self) -> f64 {
        self.0.bet()
    }

    fn wealth(&self) -> f64 {
        self.0.wealth()
    }

    fn log_wealth(&self) -> f64 {
        self.0.log_wealth()
    }

    fn beta_hat(&self) -> f64 {
        self.0.beta_hat()
    }

    #[getter]
    fn t(&self) -> u64 {
        self.0.t()
    }

    #[getter]
    fn sum_g(&self) -> f64 {
        self.0.sum_g()
    }

    #[getter]
    fn sum_g2(&self) -> f64 {
        self.0.sum_g2()
    }

    fn __repr__(&self) -> String {
        format!(
            "BettingState(t={}, sum_g={}, sum_g2={}, wealth={})",
            self.0.t(),
            self.0.sum_g(),
            self.0.sum_g2(),
            self.0.wealth()
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn sim_config(
    model: &str,
    horizon: usize,
    reps: usize,
    seed: u64,
    delta: f64,
    alpha: f64,
    gamma: f64,
    form: &str,
    nodes: usize,
) -> PyResult<SimConfig> {
    let cfg = SimConfig {
        model: model.parse::<MartingaleModel>().map_err(err)?,
        horizon,
        reps,
        seed,
        bound: BoundParams {
            alpha,
            gamma,
            delta,
        },
        form: form.parse().map_err(err)?,
        node_count: nodes,
    };
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

fn coverage_dict<'py>(py: Python<'py>, r: &CoverageReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("reps", r.reps)?;
    d.set_item("violations", r.violations)?;
    d.set_item("rate", r.rate)?;
    d.set_item("wilson_lower_95", r.wilson_lower_95)?;
    d.set_item("wilson_upper_95", r.wilson_upper_95)?;
    d.set_item("runtime_sec", r.runtime_sec)?;
    Ok(d)
}

/// Fraction of simulated paths whose partial sum leaves the radius.
#[pyfunction]
#[pyo3(signature = (model = "rademacher", horizon = 10_000, reps = 2000, seed = 0, delta = 0.05, alpha = 0.5, gamma = E, form = "simple", nodes = 512))]
#[allow(clippy::too_many_arguments)]
fn coverage<'py>(
    py: Python<'py>,
    model: &str,
    horizon: usize,
    reps: usize,
    seed: u64,
    delta: f64,
    alpha: f64,
    gamma: f64,
    form: &str,
    nodes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = sim_config(model, horizon, reps, seed, delta, alpha, gamma, form, nodes)?;
    let r = py.detach(|| coverage_experiment(&cfg)).map_err(err)?;
    coverage_dict(py, &r)
}

/// Fraction of paths on which the wealth reaches `1/delta`, plus the mean
/// final wealth.
#[pyfunction]
#[pyo3(signature = (model = "rademacher", horizon = 10_000, reps = 2000, seed = 0, delta = 0.05, alpha = 0.5, gamma = E, nodes = 512))]
#[allow(clippy::too_many_arguments)]
fn doob<'py>(
    py: Python<'py>,
    model: &str,
    horizon: usize,
    reps: usize,
    seed: u64,
    delta: f64,
    alpha: f64,
    gamma: f64,
    nodes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = sim_config(
        model, horizon, reps, seed, delta, alpha, gamma, "simple", nodes,
    )?;
    let r = py.detach(|| doob_experiment(&cfg)).map_err(err)?;
    let d = coverage_dict(py, &r.exceedance)?;
    d.set_item("mean_final_wealth", r.mean_final_wealth)?;
    d.set_item("final_wealth_std_err", r.final_wealth_std_err)?;
    Ok(d)
}

/// Minimum over paths and rounds of wealth minus its guaranteed lower bound.
#[pyfunction]
#[pyo3(signature = (model = "rademacher", horizon = 300, reps = 500, seed = 0, alpha = 0.5, gamma = E, nodes = 512))]
#[allow(clippy::too_many_arguments)]
fn wealth_bound<'py>(
    py: Python<'py>,
    model: &str,
    horizon: usize,
    reps: usize,
    seed: u64,
    alpha: f64,
    gamma: f64,
    nodes: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = sim_config(
        model, horizon, reps, seed, 0.05, alpha, gamma, "simple", nodes,
    )?;
    let r = py.detach(|| wealth_bound_experiment(&cfg)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("reps", r.reps)?;
    d.set_item("min_slack", r.min_slack)?;
    d.set_item("argmin_t", r.argmin_t)?;
    d.set_item("argmin_rep", r.argmin_rep)?;
    d.set_item("runtime_sec", r.runtime_sec)?;
    Ok(d)
}

#[pymodule]
fn pycoinbet(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(f, m)?)?;
    m.add_function(wrap_pyfunction!(f_conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(eta_star, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(psi_inv, m)?)?;
    m.add_function(wrap_pyfunction!(psi_inv_upper_log, m)?)?;
    m.add_function(wrap_pyfunction!(psi_inv_upper_simple, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_w_minus1, m)?)?;
    m.add_function(wrap_pyfunction!(prior_density, m)?)?;
    m.add_function(wrap_pyfunction!(prior_mass_below, m)?)?;
    m.add_function(wrap_pyfunction!(prior_interval_mass, m)?)?;
    m.add_function(wrap_pyfunction!(prior_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(restricted_kl, m)?)?;
    m.add_function(wrap_pyfunction!(wealth_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(a_t, m)?)?;
    m.add_function(wrap_pyfunction!(confidence_radius, m)?)?;
    m.add_function(wrap_pyfunction!(coverage, m)?)?;
    m.add_function(wrap_pyfunction!(doob, m)?)?;
    m.add_function(wrap_pyfunction!(wealth_bound, m)?)?;
    m.add_class::<PyBettingState>()?;
    Ok(())
}
