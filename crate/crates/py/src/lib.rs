//! Python bindings: the panel/index layer, the unit-root and SV estimators,
//! the six-step CAPM fit, event studies, and the model-lab checkers.
//!
//! Build as a cdylib and import as `marketlab_py`; see python/smoke_test.py.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use marketlab::capm::{self, EstimatorConfig, VolatilityModel};
use marketlab::event::{self, EventSpec, EventType, WindowConfig};
use marketlab::index::{self, IndexVariant, PortfolioSpec};
use marketlab::model;
use marketlab::panel::{self, PanelDataset};
use marketlab::stats;
use marketlab::sv::{self, McmcConfig, SvParams};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn parse_date(s: &str) -> PyResult<chrono::NaiveDate> {
    s.parse()
        .map_err(|_| PyValueError::new_err(format!("bad date `{s}` (expected YYYY-MM-DD)")))
}

/// Validated panel of prices, corporate actions, and call rates.
#[pyclass]
struct Panel {
    inner: PanelDataset,
}

#[pymethods]
impl Panel {
    /// Load and validate the three CSV files.
    #[staticmethod]
    fn load(prices: PathBuf, actions: PathBuf, rates: PathBuf) -> PyResult<Self> {
        let inner = panel::load_panel(&prices, &actions, &rates).map_err(err)?;
        Ok(Self { inner })
    }

    fn n_securities(&self) -> usize {
        self.inner.n_securities()
    }

    fn calendar(&self) -> Vec<String> {
        self.inner
            .calendar
            .dates()
            .iter()
            .map(|d| d.to_string())
            .collect()
    }

    /// Market-capitalization shares per date, in (zm, zn, nm, nn) order.
    fn cap_shares(&self) -> PyResult<(Vec<String>, Vec<[f64; 4]>)> {
        let shares = index::compute_cap_shares(&self.inner).map_err(err)?;
        Ok((
            shares.dates().iter().map(|d| d.to_string()).collect(),
            shares.shares().to_vec(),
        ))
    }

    /// Index levels for one portfolio/variant, rebased to 100.
    fn index_levels(
        &self,
        portfolio: &str,
        variant: &str,
        base_date: &str,
    ) -> PyResult<(Vec<String>, Vec<f64>)> {
        let spec: PortfolioSpec = portfolio.parse().map_err(PyValueError::new_err)?;
        let var: IndexVariant = variant.parse().map_err(PyValueError::new_err)?;
        let idx =
            index::build_index(&self.inner, spec, var, parse_date(base_date)?).map_err(err)?;
        Ok((
            idx.dates().iter().map(|d| d.to_string()).collect(),
            idx.levels().to_vec(),
        ))
    }

    /// Daily excess returns over the call rate for one portfolio/variant.
    fn excess_returns(
        &self,
        portfolio: &str,
        variant: &str,
        base_date: &str,
    ) -> PyResult<(Vec<String>, Vec<f64>)> {
        let spec: PortfolioSpec = portfolio.parse().map_err(PyValueError::new_err)?;
        let var: IndexVariant = variant.parse().map_err(PyValueError::new_err)?;
        let idx =
            index::build_index(&self.inner, spec, var, parse_date(base_date)?).map_err(err)?;
        let raw = index::compute_returns(&idx).map_err(err)?;
        let excess = index::compute_excess_returns(&raw, &self.inner.call_rates).map_err(err)?;
        Ok((
            excess.dates().iter().map(|d| d.to_string()).collect(),
            excess.values().to_vec(),
        ))
    }
}

/// Sample moments: mean, sd, min, max, skewness, kurtosis, n.
#[pyfunction]
fn descriptive_stats<'py>(py: Python<'py>, series: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let d = stats::descriptive_stats(&series).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("mean", d.mean)?;
    out.set_item("sd", d.sd)?;
    out.set_item("min", d.min)?;
    out.set_item("max", d.max)?;
    out.set_item("skewness", d.skewness)?;
    out.set_item("kurtosis", d.kurtosis)?;
    out.set_item("n", d.n)?;
    Ok(out)
}

/// ADF-GLS unit-root test; spec is "constant" or "constant_trend".
#[pyfunction]
#[pyo3(signature = (series, spec="constant_trend", max_lag=None))]
fn adf_gls<'py>(
    py: Python<'py>,
    series: Vec<f64>,
    spec: &str,
    max_lag: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = match spec {
        "constant" => stats::DetrendSpec::Constant,
        "constant_trend" => stats::DetrendSpec::ConstantTrend,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown spec `{other}` (expected constant|constant_trend)"
            )))
        }
    };
    let r = stats::adf_gls(&series, spec, max_lag, stats::LagCriterion::Mbic).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("statistic", r.statistic)?;
    out.set_item("selected_lag", r.selected_lag)?;
    out.set_item("phi_hat", r.phi_hat)?;
    out.set_item("reject_1pct", r.reject_1pct)?;
    Ok(out)
}

/// BIC lag selection for an AR fit of the residual series.
#[pyfunction]
fn select_ar_order(residuals: Vec<f64>, p_max: usize) -> PyResult<usize> {
    stats::select_ar_order_bic(&residuals, p_max).map_err(err)
}

/// Fit the stochastic-volatility model on whitened innovations.
#[pyfunction]
#[pyo3(signature = (innovations, burn_in=2000, draws=3000, seed=0))]
fn fit_sv<'py>(
    py: Python<'py>,
    innovations: Vec<f64>,
    burn_in: usize,
    draws: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = McmcConfig {
        burn_in,
        draws,
        seed,
        ..McmcConfig::default()
    };
    let fit = sv::fit_sv(&innovations, &cfg).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("mu", fit.params.mu)?;
    out.set_item("phi", fit.params.phi)?;
    out.set_item("sigma_tau", fit.params.sigma_tau)?;
    out.set_item("mu_sd", fit.params_sd.mu)?;
    out.set_item("phi_sd", fit.params_sd.phi)?;
    out.set_item("sigma_tau_sd", fit.params_sd.sigma_tau)?;
    out.set_item("sigma2", fit.path.sigma2.clone())?;
    out.set_item("phi_accept_rate", fit.diagnostics.phi_accept_rate)?;
    out.set_item("split_rhat", fit.diagnostics.split_rhat)?;
    Ok(out)
}

/// Conditional-variance forecasts from fitted SV parameters.
#[pyfunction]
fn forecast_volatility(mu: f64, phi: f64, sigma_tau: f64, h_last: f64, horizon: usize) -> Vec<f64> {
    sv::forecast_volatility(
        &SvParams {
            mu,
            phi,
            sigma_tau,
        },
        h_last,
        horizon,
    )
}

fn estimator_config(
    p_max: usize,
    burn_in: usize,
    draws: usize,
    seed: u64,
    constant_volatility: bool,
) -> EstimatorConfig {
    EstimatorConfig {
        p_max,
        volatility: if constant_volatility {
            VolatilityModel::Constant
        } else {
            VolatilityModel::Sv(McmcConfig {
                burn_in,
                draws,
                seed,
                ..McmcConfig::default()
            })
        },
    }
}

/// Six-step CAPM-AR(p)-SV fit on aligned excess returns.
#[pyfunction]
#[pyo3(signature = (ri, rm, p_max=10, burn_in=2000, draws=3000, seed=0, constant_volatility=false))]
#[allow(clippy::too_many_arguments)]
fn estimate_capm<'py>(
    py: Python<'py>,
    ri: Vec<f64>,
    rm: Vec<f64>,
    p_max: usize,
    burn_in: usize,
    draws: usize,
    seed: u64,
    constant_volatility: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = estimator_config(p_max, burn_in, draws, seed, constant_volatility);
    let fit = capm::estimate_capm_arp_sv(&ri, &rm, &cfg).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("alpha", fit.alpha)?;
    out.set_item("beta", fit.beta)?;
    out.set_item("se_alpha", fit.se_alpha)?;
    out.set_item("se_beta", fit.se_beta)?;
    out.set_item("rho", fit.rho.clone())?;
    out.set_item("p", fit.p)?;
    out.set_item("adj_r2", fit.adj_r2)?;
    out.set_item("sigma2", fit.sigma2_path.clone())?;
    Ok(out)
}

/// Event study on aligned excess-return series.
#[pyfunction]
#[pyo3(signature = (dates, ri, rm, event_date, name="event", event_type="Market",
                    estimation_days=120, pre=10, post=10, alpha=0.05,
                    p_max=10, burn_in=2000, draws=3000, seed=0, constant_volatility=false))]
#[allow(clippy::too_many_arguments)]
fn run_event_study<'py>(
    py: Python<'py>,
    dates: Vec<String>,
    ri: Vec<f64>,
    rm: Vec<f64>,
    event_date: &str,
    name: &str,
    event_type: &str,
    estimation_days: usize,
    pre: usize,
    post: usize,
    alpha: f64,
    p_max: usize,
    burn_in: usize,
    draws: usize,
    seed: u64,
    constant_volatility: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let dates: Vec<chrono::NaiveDate> = dates
        .iter()
        .map(|s| parse_date(s))
        .collect::<PyResult<_>>()?;
    let event = EventSpec {
        event_date: parse_date(event_date)?,
        name: name.to_string(),
        event_type: event_type
            .parse::<EventType>()
            .map_err(PyValueError::new_err)?,
    };
    let window = WindowConfig {
        estimation_length: estimation_days,
        pre,
        post,
        significance_alpha: alpha,
    };
    let cfg = estimator_config(p_max, burn_in, draws, seed, constant_volatility);
    let res = event::run_event_study(&dates, &ri, &rm, &event, &window, &cfg).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("mapped_date", res.mapped_date.to_string())?;
    out.set_item(
        "rel_day",
        res.days.iter().map(|d| d.rel_day).collect::<Vec<_>>(),
    )?;
    out.set_item("ar", res.days.iter().map(|d| d.ar).collect::<Vec<_>>())?;
    out.set_item(
        "var_ar",
        res.days.iter().map(|d| d.var_ar).collect::<Vec<_>>(),
    )?;
    out.set_item("car", res.days.iter().map(|d| d.car).collect::<Vec<_>>())?;
    out.set_item(
        "var_car",
        res.days.iter().map(|d| d.var_car).collect::<Vec<_>>(),
    )?;
    out.set_item("scar", res.days.iter().map(|d| d.scar).collect::<Vec<_>>())?;
    out.set_item("ar_flag", res.ar_flag.as_str())?;
    out.set_item("car_flag", res.car_flag.as_str())?;
    out.set_item("scar_flag", res.scar_flag.as_str())?;
    Ok(out)
}

/// Horizon weights (a_h, b_h) of the event-time decomposition.
#[pyfunction]
fn horizon_weights(rho: f64, gross_rf: f64, horizon: usize) -> (f64, f64) {
    let w = model::horizon_weights(rho, gross_rf, horizon);
    (w.a_h, w.b_h)
}

/// Two-day staged-diffusion split of per-group impacts.
#[pyfunction]
fn staged_diffusion<'py>(
    py: Python<'py>,
    theta: [f64; 4],
    pi: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = model::staged_diffusion(&theta, pi).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("ar_day0", s.ar_day0)?;
    out.set_item("ar_day1", s.ar_day1)?;
    out.set_item("car", s.car)?;
    Ok(out)
}

/// Run the proposition sweeps; returns violations per proposition.
#[pyfunction]
#[pyo3(signature = (draws=2000, seed=0))]
fn check_props<'py>(py: Python<'py>, draws: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    let reports = [
        model::sweep_prop1(seed, draws),
        model::sweep_prop2(seed ^ 1, draws, model::Prop2Variant::Escalation),
        model::sweep_prop2(seed ^ 2, draws, model::Prop2Variant::Setback),
        model::sweep_prop4(seed ^ 3, draws),
        model::sweep_prop5(seed ^ 4, draws),
    ];
    for rep in reports {
        out.set_item(rep.name.clone(), rep.violations())?;
    }
    Ok(out)
}

/// Synthetic CAPM-AR(p)-SV series with known ground truth.
#[pyfunction]
#[pyo3(signature = (alpha, beta, rho, sv_mu, sv_phi, sv_sigma_tau, t_len, seed,
                    market_mean=0.0, market_sd=0.01))]
#[allow(clippy::too_many_arguments)]
fn synthetic_series(
    alpha: f64,
    beta: f64,
    rho: Vec<f64>,
    sv_mu: f64,
    sv_phi: f64,
    sv_sigma_tau: f64,
    t_len: usize,
    seed: u64,
    market_mean: f64,
    market_sd: f64,
) -> (Vec<f64>, Vec<f64>) {
    let dgp = model::CapmSvDgp {
        alpha,
        beta,
        rho,
        sv: SvParams {
            mu: sv_mu,
            phi: sv_phi,
            sigma_tau: sv_sigma_tau,
        },
        market_mean,
        market_sd,
        t_len,
    };
    model::generate_capm_sv_series(&dgp, seed)
}

#[pymodule]
fn marketlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Panel>()?;
    m.add_function(wrap_pyfunction!(descriptive_stats, m)?)?;
    m.add_function(wrap_pyfunction!(adf_gls, m)?)?;
    m.add_function(wrap_pyfunction!(select_ar_order, m)?)?;
    m.add_function(wrap_pyfunction!(fit_sv, m)?)?;
    m.add_function(wrap_pyfunction!(forecast_volatility, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_capm, m)?)?;
    m.add_function(wrap_pyfunction!(run_event_study, m)?)?;
    m.add_function(wrap_pyfunction!(horizon_weights, m)?)?;
    m.add_function(wrap_pyfunction!(staged_diffusion, m)?)?;
    m.add_function(wrap_pyfunction!(check_props, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_series, m)?)?;
    Ok(())
}
