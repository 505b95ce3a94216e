//! Descriptive statistics, BIC lag selection, and the ADF-GLS unit-root test.

use crate::error::{Error, Result};
use crate::linalg::least_squares;

/// Sample moments of a series. Kurtosis is non-excess (normal -> 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descriptives {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub n: usize,
}

pub fn descriptive_stats(series: &[f64]) -> Result<Descriptives> {
    let n = series.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { need: 2, got: n });
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in series {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        min = min.min(x);
        max = max.max(x);
    }
    if m2 == 0.0 {
        return Err(Error::DegenerateInput("zero variance".into()));
    }
    let sd = (m2 / (nf - 1.0)).sqrt();
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    Ok(Descriptives {
        mean,
        sd,
        min,
        max,
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
        n,
    })
}

/// Deterministic terms removed by GLS detrending.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetrendSpec {
    Constant,
    ConstantTrend,
}

impl DetrendSpec {
    /// Local-to-unity detrending constant.
    fn c_bar(self) -> f64 {
        match self {
            DetrendSpec::Constant => -7.0,
            DetrendSpec::ConstantTrend => -13.5,
        }
    }

    /// 1% critical value for the DF-GLS statistic.
    pub fn critical_value_1pct(self) -> f64 {
        match self {
            DetrendSpec::Constant => -2.58,
            DetrendSpec::ConstantTrend => -3.42,
        }
    }
}

/// Lag-order selection for the ADF stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagCriterion {
    /// Ng-Perron modified BIC on the common sample.
    Mbic,
    Fixed(usize),
}

/// ADF-GLS test output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfGlsResult {
    /// t-ratio on the level coefficient in the ADF regression.
    pub statistic: f64,
    pub selected_lag: usize,
    /// Implied AR root on the detrended series: one plus the ADF level
    /// coefficient. Reported alongside the statistic, Table-3 style.
    pub phi_hat: f64,
    pub spec: DetrendSpec,
    pub reject_1pct: bool,
}

/// Schwert rule for the maximum ADF lag.
pub fn default_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

fn gls_detrend(y: &[f64], spec: DetrendSpec) -> Result<Vec<f64>> {
    let n = y.len();
    let nf = n as f64;
    let alpha = 1.0 + spec.c_bar() / nf;

    let trend = |t: usize| (t + 1) as f64;
    let mut yd = Vec::with_capacity(n);
    let mut z_const = Vec::with_capacity(n);
    let mut z_trend = Vec::with_capacity(n);
    yd.push(y[0]);
    z_const.push(1.0);
    z_trend.push(trend(0));
    for t in 1..n {
        yd.push(y[t] - alpha * y[t - 1]);
        z_const.push(1.0 - alpha);
        z_trend.push(trend(t) - alpha * trend(t - 1));
    }

    let cols: Vec<&[f64]> = match spec {
        DetrendSpec::Constant => vec![&z_const],
        DetrendSpec::ConstantTrend => vec![&z_const, &z_trend],
    };
    let fit = least_squares(&yd, &cols, None)?;

    let mut detrended = Vec::with_capacity(n);
    for t in 0..n {
        let mut deterministic = fit.coef[0];
        if spec == DetrendSpec::ConstantTrend {
            deterministic += fit.coef[1] * trend(t);
        }
        detrended.push(y[t] - deterministic);
    }
    Ok(detrended)
}

struct AdfFit {
    statistic: f64,
    level_coef: f64,
    rss: f64,
    level_ssq: f64,
}

/// ADF regression with no deterministic terms on rows `t = start..n`:
/// `dy_t = b0 * y_{t-1} + sum_j b_j * dy_{t-j} + e_t`.
fn fit_adf(d: &[f64], p: usize, start: usize) -> Result<AdfFit> {
    let n = d.len();
    debug_assert!(start >= p + 1);
    let rows = n - start;
    if rows <= p + 1 {
        return Err(Error::SeriesTooShort {
            need: start + p + 2,
            got: n,
        });
    }

    let dy: Vec<f64> = (start..n).map(|t| d[t] - d[t - 1]).collect();
    let level: Vec<f64> = (start..n).map(|t| d[t - 1]).collect();
    let mut cols: Vec<Vec<f64>> = vec![level];
    for j in 1..=p {
        cols.push((start..n).map(|t| d[t - j] - d[t - j - 1]).collect());
    }
    let col_refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
    let fit = least_squares(&dy, &col_refs, None)?;

    let dof = rows as f64 - (p as f64 + 1.0);
    let s2 = fit.rss / dof;
    let se = (s2 * fit.xtx_inv[(0, 0)]).sqrt();
    if se == 0.0 || !se.is_finite() {
        return Err(Error::SingularRegression("zero variance ADF regression".into()));
    }
    Ok(AdfFit {
        statistic: fit.coef[0] / se,
        level_coef: fit.coef[0],
        rss: fit.rss,
        level_ssq: cols[0].iter().map(|x| x * x).sum(),
    })
}

/// ADF-GLS unit-root test with MBIC lag selection.
///
/// The series is GLS-demeaned (`c_bar = -7`) or GLS-detrended
/// (`c_bar = -13.5`), and the ADF regression runs on the detrended series
/// without deterministic terms. Candidate lags share the common sample in
/// which the largest candidate is feasible.
pub fn adf_gls(
    series: &[f64],
    spec: DetrendSpec,
    max_lag: Option<usize>,
    criterion: LagCriterion,
) -> Result<AdfGlsResult> {
    let n = series.len();
    let max_lag = max_lag.unwrap_or_else(|| default_max_lag(n));
    if n <= max_lag + 10 {
        return Err(Error::SeriesTooShort {
            need: max_lag + 11,
            got: n,
        });
    }

    let d = gls_detrend(series, spec)?;

    let selected_lag = match criterion {
        LagCriterion::Fixed(p) => p.min(max_lag),
        LagCriterion::Mbic => {
            // common sample across candidates
            let start = max_lag + 1;
            let n_eff = (n - start) as f64;
            let penalty = n_eff.ln();
            let mut best: Option<(usize, f64)> = None;
            for p in 0..=max_lag {
                // a collinear candidate cannot be selected
                let Ok(fit) = fit_adf(&d, p, start) else {
                    continue;
                };
                let sigma2 = fit.rss / n_eff;
                let tau = fit.level_coef * fit.level_coef * fit.level_ssq / sigma2;
                let mbic = sigma2.ln() + penalty * (tau + p as f64) / n_eff;
                if best.map_or(true, |(_, b)| mbic < b) {
                    best = Some((p, mbic));
                }
            }
            best.ok_or_else(|| {
                Error::SingularRegression("every ADF candidate regression is singular".into())
            })?
            .0
        }
    };

    // final statistic on the longest sample available at the selected lag
    let fit = fit_adf(&d, selected_lag, selected_lag + 1)?;
    let statistic = fit.statistic;
    Ok(AdfGlsResult {
        statistic,
        selected_lag,
        phi_hat: 1.0 + fit.level_coef,
        spec,
        reject_1pct: statistic < spec.critical_value_1pct(),
    })
}

/// AR order selection by BIC over `p in 0..=p_max`, Gaussian likelihood from
/// the residual sum of squares, no intercept. All candidates are scored on
/// the common sample that drops the first `p_max` observations; ties go to
/// the smallest order.
pub fn select_ar_order_bic(residuals: &[f64], p_max: usize) -> Result<usize> {
    let n = residuals.len();
    if n <= p_max + 10 {
        return Err(Error::SeriesTooShort {
            need: p_max + 11,
            got: n,
        });
    }
    let rows = n - p_max;
    let nf = rows as f64;
    let mut best = (0usize, f64::INFINITY);
    for p in 0..=p_max {
        let rss = if p == 0 {
            residuals[p_max..].iter().map(|x| x * x).sum::<f64>()
        } else {
            let y = &residuals[p_max..];
            let cols: Vec<Vec<f64>> = (1..=p)
                .map(|j| (p_max..n).map(|t| residuals[t - j]).collect())
                .collect();
            let col_refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
            match least_squares(y, &col_refs, None) {
                Ok(fit) => fit.rss,
                // collinear lag design cannot be selected
                Err(_) => continue,
            }
        };
        let bic = nf * (rss / nf).ln() + (p as f64) * nf.ln();
        if bic < best.1 {
            best = (p, bic);
        }
    }
    Ok(best.0)
}
