//! Bayesian estimation of the log-volatility AR(1) process on whitened
//! residuals.
//!
//! The observation equation `eta_t = exp(h_t / 2) zeta_t` is linearized as
//! `y*_t = log(eta_t^2 + c) = h_t + log zeta_t^2`, and `log chi^2_1` is
//! replaced by its 10-component Gaussian mixture approximation. Conditional
//! on the mixture indicators the model is linear-Gaussian, so the latent
//! path is drawn exactly by forward-filtering backward-sampling; `mu` and
//! `sigma_tau^2` have conjugate draws and `phi` takes a Metropolis-Hastings
//! step with the stationary-initialization term in the target.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};

/// Parameters of the log-volatility AR(1) law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvParams {
    /// Log-variance mean.
    pub mu: f64,
    /// Persistence, inside (-1, 1).
    pub phi: f64,
    /// Volatility of log-volatility, positive.
    pub sigma_tau: f64,
}

/// Prior hyperparameters.
///
/// `mu ~ N(mu_mean, mu_var)`, `(phi+1)/2 ~ Beta(phi_a, phi_b)`,
/// `sigma_tau^2 ~ InverseGamma(sigma2_shape, sigma2_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvPriors {
    pub mu_mean: f64,
    pub mu_var: f64,
    pub phi_a: f64,
    pub phi_b: f64,
    pub sigma2_shape: f64,
    pub sigma2_scale: f64,
}

impl Default for SvPriors {
    fn default() -> Self {
        Self {
            mu_mean: 0.0,
            mu_var: 10.0,
            phi_a: 20.0,
            phi_b: 1.5,
            sigma2_shape: 2.5,
            sigma2_scale: 0.025,
        }
    }
}

/// Sampler configuration. `offset_c = None` uses 1e-6 times the sample
/// variance of the innovations as the linearization offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McmcConfig {
    pub burn_in: usize,
    pub draws: usize,
    pub seed: u64,
    pub offset_c: Option<f64>,
    pub priors: SvPriors,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            burn_in: 5000,
            draws: 5000,
            seed: 0,
            offset_c: None,
            priors: SvPriors::default(),
        }
    }
}

/// Posterior-mean volatility path.
#[derive(Debug, Clone, PartialEq)]
pub struct VolatilityPath {
    /// Posterior mean of `h_t`.
    pub h_mean: Vec<f64>,
    /// Posterior mean of `exp(h_t)`, in variance units.
    pub sigma2: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvDiagnostics {
    /// Metropolis-Hastings acceptance rate of the `phi` step.
    pub phi_accept_rate: f64,
    /// Largest split-chain potential scale reduction over the three
    /// parameters' retained draws.
    pub split_rhat: f64,
}

/// Full sampler output.
#[derive(Debug, Clone)]
pub struct SvFit {
    /// Posterior means of (mu, phi, sigma_tau).
    pub params: SvParams,
    /// Posterior standard deviations, in the same field layout.
    pub params_sd: SvParams,
    pub path: VolatilityPath,
    /// Posterior mean of `h_T`, the anchor for out-of-sample forecasts.
    pub h_last_mean: f64,
    /// Retained (mu, phi, sigma_tau) draws, one row per kept iteration.
    pub draws: Vec<[f64; 3]>,
    pub diagnostics: SvDiagnostics,
}

impl SvFit {
    /// Equal-tailed credible interval for parameter `k` (0 = mu, 1 = phi,
    /// 2 = sigma_tau) at the given mass.
    pub fn credible_interval(&self, k: usize, mass: f64) -> (f64, f64) {
        let mut v: Vec<f64> = self.draws.iter().map(|d| d[k]).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lo_q = (1.0 - mass) / 2.0;
        let at = |q: f64| {
            let idx = ((v.len() as f64 - 1.0) * q).round() as usize;
            v[idx]
        };
        (at(lo_q), at(1.0 - lo_q))
    }
}

/// 10-component Gaussian mixture approximation of `log chi^2_1`:
/// (probability, mean, variance).
pub const LOG_CHI2_MIXTURE: [(f64, f64, f64); 10] = [
    (0.00609, 1.92677, 0.11265),
    (0.04775, 1.34744, 0.17788),
    (0.13057, 0.73504, 0.26768),
    (0.20674, 0.02266, 0.40611),
    (0.22715, -0.85173, 0.62699),
    (0.18842, -1.97278, 0.98583),
    (0.12047, -3.46788, 1.57469),
    (0.05591, -5.55246, 2.54498),
    (0.01575, -8.68384, 4.16591),
    (0.00115, -14.65000, 7.33342),
];

/// Mean of `log chi^2_1`.
pub const LOG_CHI2_MEAN: f64 = -1.2704;
/// Variance of `log chi^2_1` (`pi^2 / 2`).
pub const LOG_CHI2_VAR: f64 = std::f64::consts::PI * std::f64::consts::PI / 2.0;

fn sample_variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

struct GibbsState {
    h: Vec<f64>,
    indicators: Vec<usize>,
    mu: f64,
    phi: f64,
    sigma2_tau: f64,
}

fn sample_indicators(state: &mut GibbsState, ystar: &[f64], rng: &mut ChaCha8Rng) {
    let mut logw = [0.0f64; 10];
    for (t, (&y, &h)) in ystar.iter().zip(&state.h).enumerate() {
        let r = y - h;
        let mut max = f64::NEG_INFINITY;
        for (j, &(p, m, v)) in LOG_CHI2_MIXTURE.iter().enumerate() {
            let z = r - m;
            let lw = p.ln() - 0.5 * v.ln() - 0.5 * z * z / v;
            logw[j] = lw;
            max = max.max(lw);
        }
        let mut total = 0.0;
        let mut w = [0.0f64; 10];
        for j in 0..10 {
            w[j] = (logw[j] - max).exp();
            total += w[j];
        }
        let u: f64 = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = 9;
        for (j, &wj) in w.iter().enumerate() {
            acc += wj;
            if u <= acc {
                pick = j;
                break;
            }
        }
        state.indicators[t] = pick;
    }
}

/// Forward filter, backward sample of the latent log-volatility path.
fn ffbs(state: &mut GibbsState, ystar: &[f64], rng: &mut ChaCha8Rng) {
    let t_len = ystar.len();
    let mu = state.mu;
    let phi = state.phi;
    let q = state.sigma2_tau;

    let mut a_filt = vec![0.0f64; t_len];
    let mut p_filt = vec![0.0f64; t_len];

    let mut a_pred = mu;
    let mut p_pred = q / (1.0 - phi * phi);
    for t in 0..t_len {
        let (_, m, v) = LOG_CHI2_MIXTURE[state.indicators[t]];
        let f = p_pred + v;
        let k = p_pred / f;
        let innov = ystar[t] - (a_pred + m);
        a_filt[t] = a_pred + k * innov;
        p_filt[t] = p_pred * (1.0 - k);
        if t + 1 < t_len {
            a_pred = mu + phi * (a_filt[t] - mu);
            p_pred = phi * phi * p_filt[t] + q;
        }
    }

    let z: f64 = StandardNormal.sample(rng);
    state.h[t_len - 1] = a_filt[t_len - 1] + p_filt[t_len - 1].sqrt() * z;
    for t in (0..t_len - 1).rev() {
        let p_next_pred = phi * phi * p_filt[t] + q;
        let gain = phi * p_filt[t] / p_next_pred;
        let mean = a_filt[t] + gain * (state.h[t + 1] - (mu + phi * (a_filt[t] - mu)));
        let var = p_filt[t] - gain * phi * p_filt[t];
        let z: f64 = StandardNormal.sample(rng);
        state.h[t] = mean + var.max(0.0).sqrt() * z;
    }
}

fn draw_mu(state: &mut GibbsState, priors: &SvPriors, rng: &mut ChaCha8Rng) {
    let t_len = state.h.len() as f64;
    let phi = state.phi;
    let q = state.sigma2_tau;
    let one_minus = 1.0 - phi;
    let stationary_w = 1.0 - phi * phi;

    let mut sum_qd = 0.0;
    for t in 1..state.h.len() {
        sum_qd += state.h[t] - phi * state.h[t - 1];
    }
    let precision = 1.0 / priors.mu_var + (stationary_w + (t_len - 1.0) * one_minus * one_minus) / q;
    let numerator =
        priors.mu_mean / priors.mu_var + (stationary_w * state.h[0] + one_minus * sum_qd) / q;
    let mean = numerator / precision;
    let sd = precision.recip().sqrt();
    let z: f64 = StandardNormal.sample(rng);
    state.mu = mean + sd * z;
}

/// Log target for phi up to the Gaussian AR part absorbed by the proposal:
/// beta prior plus the stationary h_1 term.
fn phi_log_extra(phi: f64, x1: f64, q: f64, priors: &SvPriors) -> f64 {
    (priors.phi_a - 1.0) * ((1.0 + phi) / 2.0).ln()
        + (priors.phi_b - 1.0) * ((1.0 - phi) / 2.0).ln()
        + 0.5 * (1.0 - phi * phi).ln()
        - (1.0 - phi * phi) * x1 * x1 / (2.0 * q)
}

fn draw_phi(state: &mut GibbsState, priors: &SvPriors, rng: &mut ChaCha8Rng) -> bool {
    let x: Vec<f64> = state.h.iter().map(|h| h - state.mu).collect();
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for t in 0..x.len() - 1 {
        sxx += x[t] * x[t];
        sxy += x[t] * x[t + 1];
    }
    if sxx <= 0.0 {
        return false;
    }
    let center = sxy / sxx;
    let sd = (state.sigma2_tau / sxx).sqrt();
    let z: f64 = StandardNormal.sample(rng);
    let proposal = center + sd * z;
    if proposal.abs() >= 1.0 {
        return false;
    }
    let log_ratio = phi_log_extra(proposal, x[0], state.sigma2_tau, priors)
        - phi_log_extra(state.phi, x[0], state.sigma2_tau, priors);
    if log_ratio >= 0.0 || rng.random::<f64>().ln() < log_ratio {
        state.phi = proposal;
        true
    } else {
        false
    }
}

fn draw_sigma2_tau(state: &mut GibbsState, priors: &SvPriors, rng: &mut ChaCha8Rng) {
    let phi = state.phi;
    let x: Vec<f64> = state.h.iter().map(|h| h - state.mu).collect();
    let mut ss = (1.0 - phi * phi) * x[0] * x[0];
    for t in 1..x.len() {
        let e = x[t] - phi * x[t - 1];
        ss += e * e;
    }
    let shape = priors.sigma2_shape + x.len() as f64 / 2.0;
    let scale = priors.sigma2_scale + ss / 2.0;
    // draw Gamma(shape, rate = scale), invert
    let g = Gamma::new(shape, 1.0 / scale).unwrap().sample(rng);
    state.sigma2_tau = (1.0 / g).max(1e-12);
}

fn split_rhat(draws: &[[f64; 3]]) -> f64 {
    let n = draws.len();
    if n < 4 {
        return 1.0;
    }
    let m = n / 2;
    let mut worst: f64 = 1.0;
    for k in 0..3 {
        let half = |range: std::ops::Range<usize>| {
            let vals: Vec<f64> = range.map(|i| draws[i][k]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / (vals.len() as f64 - 1.0);
            (mean, var)
        };
        let (m1, v1) = half(0..m);
        let (m2, v2) = half(m..2 * m);
        let w = 0.5 * (v1 + v2);
        if w <= 0.0 {
            continue;
        }
        let grand = 0.5 * (m1 + m2);
        let b = (m1 - grand).powi(2) + (m2 - grand).powi(2); // * m / (chains-1) = m
        let mf = m as f64;
        let v_hat = (mf - 1.0) / mf * w + b;
        worst = worst.max((v_hat / w).sqrt());
    }
    worst
}

/// Fit the stochastic-volatility model to whitened innovations.
pub fn fit_sv(innovations: &[f64], config: &McmcConfig) -> Result<SvFit> {
    let t_len = innovations.len();
    if t_len < 50 {
        return Err(Error::SeriesTooShort {
            need: 50,
            got: t_len,
        });
    }
    if innovations.iter().any(|x| !x.is_finite()) {
        return Err(Error::DegenerateInput("non-finite innovation".into()));
    }
    if innovations.iter().all(|&x| x == 0.0) {
        return Err(Error::DegenerateInput("all-zero innovations".into()));
    }
    if config.burn_in == 0 || config.draws == 0 {
        return Err(Error::InvalidConfig("burn_in and draws must be positive".into()));
    }

    let offset = config
        .offset_c
        .unwrap_or_else(|| 1e-6 * sample_variance(innovations));
    let ystar: Vec<f64> = innovations.iter().map(|e| (e * e + offset).ln()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let h0: Vec<f64> = ystar.iter().map(|y| y - LOG_CHI2_MEAN).collect();
    let mu0 = h0.iter().sum::<f64>() / t_len as f64;
    let mut state = GibbsState {
        h: h0,
        indicators: vec![4; t_len],
        mu: mu0,
        phi: 0.95,
        sigma2_tau: 0.04,
    };

    let total = config.burn_in + config.draws;
    let mut accepts = 0usize;
    let mut kept: Vec<[f64; 3]> = Vec::with_capacity(config.draws);
    let mut h_sum = vec![0.0f64; t_len];
    let mut exph_sum = vec![0.0f64; t_len];

    for iter in 0..total {
        sample_indicators(&mut state, &ystar, &mut rng);
        ffbs(&mut state, &ystar, &mut rng);
        draw_mu(&mut state, &config.priors, &mut rng);
        if draw_phi(&mut state, &config.priors, &mut rng) {
            accepts += 1;
        }
        draw_sigma2_tau(&mut state, &config.priors, &mut rng);

        if iter >= config.burn_in {
            kept.push([state.mu, state.phi, state.sigma2_tau.sqrt()]);
            for t in 0..t_len {
                h_sum[t] += state.h[t];
                exph_sum[t] += state.h[t].exp();
            }
        }
    }

    let nk = kept.len() as f64;
    let mean_of = |k: usize| kept.iter().map(|d| d[k]).sum::<f64>() / nk;
    let sd_of = |k: usize, mean: f64| {
        (kept.iter().map(|d| (d[k] - mean) * (d[k] - mean)).sum::<f64>() / (nk - 1.0)).sqrt()
    };
    let mu_mean = mean_of(0);
    let phi_mean = mean_of(1);
    let st_mean = mean_of(2);

    let h_mean: Vec<f64> = h_sum.iter().map(|s| s / nk).collect();
    let sigma2: Vec<f64> = exph_sum.iter().map(|s| s / nk).collect();
    let h_last_mean = *h_mean.last().unwrap();

    Ok(SvFit {
        params: SvParams {
            mu: mu_mean,
            phi: phi_mean,
            sigma_tau: st_mean,
        },
        params_sd: SvParams {
            mu: sd_of(0, mu_mean),
            phi: sd_of(1, phi_mean),
            sigma_tau: sd_of(2, st_mean),
        },
        path: VolatilityPath { h_mean, sigma2 },
        h_last_mean,
        diagnostics: SvDiagnostics {
            phi_accept_rate: accepts as f64 / total as f64,
            split_rhat: split_rhat(&kept),
        },
        draws: kept,
    })
}

/// Point forecast of the conditional variance `k` steps ahead, with the
/// lognormal correction:
/// `E[h_{T+k}] = mu + phi^k (h_T - mu)`,
/// `Var[h_{T+k}] = sigma_tau^2 (1 - phi^{2k}) / (1 - phi^2)`,
/// `sigma2_{T+k} = exp(E[h] + Var[h] / 2)`.
pub fn forecast_volatility(params: &SvParams, h_last_mean: f64, horizon: usize) -> Vec<f64> {
    let SvParams {
        mu,
        phi,
        sigma_tau,
    } = *params;
    let s2 = sigma_tau * sigma_tau;
    (1..=horizon)
        .map(|k| {
            let phik = phi.powi(k as i32);
            let eh = mu + phik * (h_last_mean - mu);
            let vh = if phi.abs() < 1.0 {
                s2 * (1.0 - phik * phik) / (1.0 - phi * phi)
            } else {
                s2 * k as f64
            };
            (eh + 0.5 * vh).exp()
        })
        .collect()
}

/// Simulate an SV innovation path (shared by tests and synthetic panels).
pub fn simulate_sv_innovations(
    params: &SvParams,
    t_len: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, Vec<f64>) {
    let mut h = Vec::with_capacity(t_len);
    let mut eta = Vec::with_capacity(t_len);
    let stat_sd = params.sigma_tau / (1.0 - params.phi * params.phi).sqrt();
    let z0: f64 = StandardNormal.sample(rng);
    let mut h_t = params.mu + stat_sd * z0;
    for _ in 0..t_len {
        h.push(h_t);
        let z: f64 = StandardNormal.sample(rng);
        eta.push((h_t / 2.0).exp() * z);
        let w: f64 = StandardNormal.sample(rng);
        h_t = params.mu + params.phi * (h_t - params.mu) + params.sigma_tau * w;
    }
    (eta, h)
}
