//! Run configuration: one TOML file plus a handful of flag overrides.
//! Relative data paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use marketlab::model::{GroupParams, ModelParams};
use marketlab::sv::SvParams;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub index: IndexConfig,
    #[serde(default)]
    pub estimator: EstimatorConfig,
    #[serde(default)]
    pub event_study: EventStudyConfig,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataConfig {
    pub prices: PathBuf,
    pub actions: PathBuf,
    pub rates: PathBuf,
    pub events: Option<PathBuf>,
    /// Synthetic returns table (`estimate --returns`).
    pub returns: Option<PathBuf>,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            prices: "prices.csv".into(),
            actions: "actions.csv".into(),
            rates: "rates.csv".into(),
            events: None,
            returns: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IndexConfig {
    pub variants: Vec<String>,
    pub portfolios: Vec<String>,
    pub base_date: Option<NaiveDate>,
}

impl Default for IndexConfig {
    fn default() -> Self {
        Self {
            variants: vec!["pi".into(), "api".into(), "tri".into()],
            portfolios: vec![
                "market".into(),
                "zm".into(),
                "zn".into(),
                "nm".into(),
                "nn".into(),
            ],
            base_date: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorConfig {
    pub p_max: usize,
    pub burn_in: usize,
    pub draws: usize,
    /// Subsample split date; None estimates the full sample only.
    pub split_date: Option<NaiveDate>,
    /// Freeze the volatility path to a constant (no MCMC).
    pub constant_volatility: bool,
    /// Write a posterior draw dump per estimated cell.
    pub dump_sv_draws: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            p_max: 10,
            burn_in: 2000,
            draws: 3000,
            split_date: None,
            constant_volatility: false,
            dump_sv_draws: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EventStudyConfig {
    pub estimation_days: usize,
    pub pre_days: usize,
    pub post_days: usize,
    pub plots: bool,
}

impl Default for EventStudyConfig {
    fn default() -> Self {
        Self {
            estimation_days: 120,
            pre_days: 10,
            post_days: 10,
            plots: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// Path to a model-parameter TOML; defaults used when absent.
    pub config: Option<PathBuf>,
    pub sweep_draws: usize,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            config: None,
            sweep_draws: 10_000,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub seed: u64,
    pub alpha: f64,
    pub out_dir: PathBuf,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed: 0,
            alpha: 0.05,
            out_dir: "out".into(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<(Self, String), String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&p);
            }
        };
        resolve(&mut cfg.data.prices);
        resolve(&mut cfg.data.actions);
        resolve(&mut cfg.data.rates);
        if let Some(p) = cfg.data.events.as_mut() {
            resolve(p);
        }
        if let Some(p) = cfg.data.returns.as_mut() {
            resolve(p);
        }
        if let Some(p) = cfg.model.config.as_mut() {
            resolve(p);
        }
        Ok((cfg, text))
    }
}

/// TOML schema for model parameters; every field is optional and falls back
/// to the library defaults.
#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ModelConfigFile {
    pub gross_rf: Option<f64>,
    pub risk_tolerance: Option<f64>,
    pub depreciation: Option<f64>,
    pub horizon: Option<usize>,
    pub supply_sd: Option<[f64; 4]>,
    /// Diagonal of the exogenous payoff covariance.
    pub payoff_var: Option<[f64; 4]>,
    pub initial_capital: Option<[f64; 4]>,
    #[serde(default)]
    pub states: StatesSection,
    #[serde(default)]
    pub war: WarSection,
    #[serde(default)]
    pub civilian: CivilianSection,
    #[serde(default)]
    pub wedge: WedgeSection,
    #[serde(default)]
    pub extended_wedge: ExtendedWedgeSection,
    #[serde(default)]
    pub groups: GroupsSection,
    #[serde(default)]
    pub synth: SynthSection,
}

macro_rules! optional_section {
    ($name:ident { $($field:ident: $ty:ty),* $(,)? }) => {
        #[derive(Debug, Clone, Deserialize, Default)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(pub $field: Option<$ty>,)*
        }
    };
}

optional_section!(StatesSection {
    rho_a: f64, rho_w: f64, rho_c: f64, rho_r: f64, rho_e: f64,
    sd_a: f64, sd_w: f64, sd_c: f64, sd_r: f64, sd_e: f64,
    signal_sd_a: f64, signal_sd_w: f64, signal_sd_c: f64,
});

optional_section!(WarSection {
    psi_m: f64, psi_zm: f64, varphi_m: f64, varphi_zm: f64,
});

optional_section!(CivilianSection {
    nu_n: f64, nu_zn: f64, omega_n: f64, omega_zn: f64,
});

optional_section!(WedgeSection {
    mu_bar: f64, mu_z: f64, mu_m: f64, mu_zm: f64,
});

optional_section!(ExtendedWedgeSection {
    mu_w: f64, mu_zw: f64,
});

optional_section!(GroupSection {
    issuance_sensitivity: f64, d_bar: f64, p_bar: f64,
    lambda: f64, chi: f64,
    lambda_r: f64, chi_r: f64, lambda_e: f64, chi_e: f64,
    tau_r: f64, beta_continuation: f64,
});

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GroupsSection {
    #[serde(default)]
    pub zm: GroupSection,
    #[serde(default)]
    pub zn: GroupSection,
    #[serde(default)]
    pub nm: GroupSection,
    #[serde(default)]
    pub nn: GroupSection,
}

/// Synthetic-panel settings for `model synth`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSection {
    /// "dgp" (direct CAPM-AR(p)-SV) or "model" (simulated equilibrium).
    pub mode: String,
    pub t_len: usize,
    pub alpha: [f64; 4],
    pub beta: [f64; 4],
    pub rho: Vec<f64>,
    pub sv_mu: f64,
    pub sv_phi: f64,
    pub sv_sigma_tau: f64,
    pub market_mean: f64,
    pub market_sd: f64,
}

impl Default for SynthSection {
    fn default() -> Self {
        Self {
            mode: "dgp".into(),
            t_len: 3000,
            alpha: [0.0005, 0.0, -0.0005, 0.0002],
            beta: [1.1, 1.0, 0.8, 1.05],
            rho: vec![0.3],
            sv_mu: -9.0,
            sv_phi: 0.95,
            sv_sigma_tau: 0.2,
            market_mean: 0.0,
            market_sd: 0.01,
        }
    }
}

impl SynthSection {
    pub fn sv_params(&self) -> SvParams {
        SvParams {
            mu: self.sv_mu,
            phi: self.sv_phi,
            sigma_tau: self.sv_sigma_tau,
        }
    }
}

impl ModelConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read model config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid model config {}: {e}", path.display()))
    }

    /// Overlay this file onto the library defaults.
    pub fn to_params(&self) -> ModelParams {
        let mut p = ModelParams::default();
        macro_rules! set {
            ($target:expr, $src:expr) => {
                if let Some(v) = $src {
                    $target = v;
                }
            };
        }
        set!(p.gross_rf, self.gross_rf);
        set!(p.risk_tolerance, self.risk_tolerance);
        set!(p.depreciation, self.depreciation);
        set!(p.horizon, self.horizon);
        set!(p.supply_sd, self.supply_sd);
        set!(p.initial_capital, self.initial_capital);
        if let Some(diag) = self.payoff_var {
            let mut cov = [[0.0; 4]; 4];
            for i in 0..4 {
                cov[i][i] = diag[i];
            }
            p.payoff_cov = cov;
        }
        let s = &self.states;
        set!(p.states.rho_a, s.rho_a);
        set!(p.states.rho_w, s.rho_w);
        set!(p.states.rho_c, s.rho_c);
        set!(p.states.rho_r, s.rho_r);
        set!(p.states.rho_e, s.rho_e);
        set!(p.states.sd_a, s.sd_a);
        set!(p.states.sd_w, s.sd_w);
        set!(p.states.sd_c, s.sd_c);
        set!(p.states.sd_r, s.sd_r);
        set!(p.states.sd_e, s.sd_e);
        set!(p.states.signal_sd_a, s.signal_sd_a);
        set!(p.states.signal_sd_w, s.signal_sd_w);
        set!(p.states.signal_sd_c, s.signal_sd_c);
        set!(p.war.psi_m, self.war.psi_m);
        set!(p.war.psi_zm, self.war.psi_zm);
        set!(p.war.varphi_m, self.war.varphi_m);
        set!(p.war.varphi_zm, self.war.varphi_zm);
        set!(p.civilian.nu_n, self.civilian.nu_n);
        set!(p.civilian.nu_zn, self.civilian.nu_zn);
        set!(p.civilian.omega_n, self.civilian.omega_n);
        set!(p.civilian.omega_zn, self.civilian.omega_zn);
        set!(p.wedge.mu_bar, self.wedge.mu_bar);
        set!(p.wedge.mu_z, self.wedge.mu_z);
        set!(p.wedge.mu_m, self.wedge.mu_m);
        set!(p.wedge.mu_zm, self.wedge.mu_zm);
        set!(p.ext_wedge.mu_w, self.extended_wedge.mu_w);
        set!(p.ext_wedge.mu_zw, self.extended_wedge.mu_zw);
        let sections = [
            (&self.groups.zm, 0usize),
            (&self.groups.zn, 1),
            (&self.groups.nm, 2),
            (&self.groups.nn, 3),
        ];
        for (sect, idx) in sections {
            let g: &mut GroupParams = &mut p.groups[idx];
            set!(g.issuance_sensitivity, sect.issuance_sensitivity);
            set!(g.d_bar, sect.d_bar);
            set!(g.p_bar, sect.p_bar);
            set!(g.lambda, sect.lambda);
            set!(g.chi, sect.chi);
            set!(g.lambda_r, sect.lambda_r);
            set!(g.chi_r, sect.chi_r);
            set!(g.lambda_e, sect.lambda_e);
            set!(g.chi_e, sect.chi_e);
            set!(g.tau_r, sect.tau_r);
            set!(g.beta_continuation, sect.beta_continuation);
        }
        p
    }
}
