//! Parameters of the four-portfolio trading-environment model.
//!
//! The four groups are indexed in `Group::ALL` order (ZM, ZN, NM, NN).
//! War-demand and civilian-substitution loadings are assembled from the
//! 2x2 flags; policy-control and extended-block loadings are free per group.

use crate::error::{Error, Result};
use crate::group::Group;

/// Per-group free parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupParams {
    /// Issuance sensitivity (how strongly price premia become capital).
    pub issuance_sensitivity: f64,
    /// Average per-unit dividend.
    pub d_bar: f64,
    /// Average terminal continuation value.
    pub p_bar: f64,
    /// Dividend loading on the policy-control state.
    pub lambda: f64,
    /// Terminal loading on the policy-control state.
    pub chi: f64,
    /// Dividend / terminal loadings on the regime-risk state.
    pub lambda_r: f64,
    pub chi_r: f64,
    /// Dividend / terminal loadings on the embedded-rent state.
    pub lambda_e: f64,
    pub chi_e: f64,
    /// Wedge loading on the regime-risk state (external dependence).
    pub tau_r: f64,
    /// Return-scale loading on the optional group-continuation revision.
    pub beta_continuation: f64,
}

impl Default for GroupParams {
    fn default() -> Self {
        Self {
            issuance_sensitivity: 0.5,
            d_bar: 0.02,
            p_bar: 1.0,
            lambda: 0.0,
            chi: 0.0,
            lambda_r: 0.0,
            chi_r: 0.0,
            lambda_e: 0.0,
            chi_e: 0.0,
            tau_r: 0.0,
            beta_continuation: 0.0,
        }
    }
}

/// War-demand loadings: `psi_g = psi_m M_g + psi_zm Z_g M_g`, and the same
/// shape for the terminal-value counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarDemandParams {
    pub psi_m: f64,
    pub psi_zm: f64,
    pub varphi_m: f64,
    pub varphi_zm: f64,
}

/// Civilian-substitution loadings:
/// `nu_g = nu_n (1-M_g) + nu_zn Z_g (1-M_g)`, same shape for terminals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CivilianParams {
    pub nu_n: f64,
    pub nu_zn: f64,
    pub omega_n: f64,
    pub omega_zn: f64,
}

/// Baseline financing-wedge parameters:
/// `mu_{g,t} = mu_bar - mu_z Z_g - mu_m M_g a_t - mu_zm Z_g M_g a_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeParams {
    pub mu_bar: f64,
    pub mu_z: f64,
    pub mu_m: f64,
    pub mu_zm: f64,
}

/// Extended wedge swaps the military terms onto the war-demand state and
/// adds the regime-risk term `tau_r a^R_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedWedgeParams {
    pub mu_w: f64,
    pub mu_zw: f64,
}

/// AR(1) laws of the aggregate states plus signal-noise SDs for beliefs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateLaws {
    pub rho_a: f64,
    pub rho_w: f64,
    pub rho_c: f64,
    pub rho_r: f64,
    pub rho_e: f64,
    pub sd_a: f64,
    pub sd_w: f64,
    pub sd_c: f64,
    pub sd_r: f64,
    pub sd_e: f64,
    pub signal_sd_a: f64,
    pub signal_sd_w: f64,
    pub signal_sd_c: f64,
}

impl Default for StateLaws {
    fn default() -> Self {
        Self {
            rho_a: 0.9,
            rho_w: 0.9,
            rho_c: 0.85,
            rho_r: 0.8,
            rho_e: 0.8,
            sd_a: 0.01,
            sd_w: 0.01,
            sd_c: 0.01,
            sd_r: 0.0,
            sd_e: 0.0,
            signal_sd_a: 0.0,
            signal_sd_w: 0.0,
            signal_sd_c: 0.0,
        }
    }
}

/// Full model parameterization.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Gross risk-free return, > 1.
    pub gross_rf: f64,
    /// CARA risk tolerance, > 0.
    pub risk_tolerance: f64,
    /// Capital depreciation rate, in (0, 1).
    pub depreciation: f64,
    /// Terminal horizon T; prices run t = 1..T with liquidation at T+1.
    pub horizon: usize,
    pub groups: [GroupParams; 4],
    pub war: WarDemandParams,
    pub civilian: CivilianParams,
    pub wedge: WedgeParams,
    pub ext_wedge: ExtendedWedgeParams,
    pub states: StateLaws,
    /// Noisy-supply covariance (diagonal SDs per group).
    pub supply_sd: [f64; 4],
    /// Exogenous conditional payoff covariance, constant across dates unless
    /// a per-date path is supplied to the pricing recursion.
    pub payoff_cov: [[f64; 4]; 4],
    pub initial_capital: [f64; 4],
}

impl Default for ModelParams {
    fn default() -> Self {
        let mut groups = [GroupParams::default(); 4];
        // mild policy-control exposure pattern: controls help ZM, hurt the
        // others a little
        groups[Group::Zm.index()].lambda = 0.01;
        groups[Group::Zm.index()].chi = 0.02;
        groups[Group::Zn.index()].lambda = -0.01;
        groups[Group::Zn.index()].chi = -0.02;
        groups[Group::Nm.index()].lambda = -0.015;
        groups[Group::Nm.index()].chi = -0.01;
        groups[Group::Nn.index()].lambda = -0.005;
        groups[Group::Nn.index()].chi = 0.0;

        let mut payoff_cov = [[0.0; 4]; 4];
        for (i, row) in payoff_cov.iter_mut().enumerate() {
            row[i] = 1e-4;
        }

        Self {
            gross_rf: 1.02,
            risk_tolerance: 8.0,
            depreciation: 0.05,
            horizon: 40,
            groups,
            war: WarDemandParams {
                psi_m: 0.02,
                psi_zm: 0.01,
                varphi_m: 0.02,
                varphi_zm: 0.02,
            },
            civilian: CivilianParams {
                nu_n: 0.015,
                nu_zn: -0.005,
                omega_n: 0.015,
                omega_zn: -0.005,
            },
            wedge: WedgeParams {
                mu_bar: 0.04,
                mu_z: 0.01,
                mu_m: 0.02,
                mu_zm: 0.01,
            },
            ext_wedge: ExtendedWedgeParams {
                mu_w: 0.02,
                mu_zw: 0.01,
            },
            states: StateLaws::default(),
            supply_sd: [0.0; 4],
            payoff_cov,
            initial_capital: [1.0; 4],
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.gross_rf > 1.0) {
            return bad(format!("gross_rf {} must exceed 1", self.gross_rf));
        }
        if !(self.risk_tolerance > 0.0) {
            return bad("risk_tolerance must be positive".into());
        }
        if !(self.depreciation > 0.0 && self.depreciation < 1.0) {
            return bad("depreciation must lie in (0,1)".into());
        }
        if self.horizon == 0 {
            return bad("horizon must be at least 1".into());
        }
        for (i, g) in self.groups.iter().enumerate() {
            if !(g.issuance_sensitivity > 0.0) {
                return bad(format!(
                    "issuance sensitivity of group {} must be positive",
                    Group::ALL[i].name()
                ));
            }
        }
        if !(self.war.psi_m > 0.0) {
            return bad("psi_m must be strictly positive".into());
        }
        if self.war.psi_zm < 0.0 || self.war.varphi_m < 0.0 || self.war.varphi_zm < 0.0 {
            return bad("war-demand loadings must be nonnegative".into());
        }
        if !(self.wedge.mu_z > 0.0 && self.wedge.mu_m > 0.0 && self.wedge.mu_zm > 0.0) {
            return bad("baseline wedge loadings must be positive".into());
        }
        if !(self.ext_wedge.mu_w > 0.0 && self.ext_wedge.mu_zw > 0.0) {
            return bad("extended wedge loadings must be positive".into());
        }
        let s = &self.states;
        for (name, rho) in [
            ("rho_a", s.rho_a),
            ("rho_w", s.rho_w),
            ("rho_c", s.rho_c),
            ("rho_r", s.rho_r),
            ("rho_e", s.rho_e),
        ] {
            if !((0.0..1.0).contains(&rho)) {
                return bad(format!("{name} = {rho} outside [0,1)"));
            }
        }
        for sd in [
            s.sd_a,
            s.sd_w,
            s.sd_c,
            s.sd_r,
            s.sd_e,
            s.signal_sd_a,
            s.signal_sd_w,
            s.signal_sd_c,
        ] {
            if sd < 0.0 {
                return bad("negative innovation/signal SD".into());
            }
        }
        for k in self.initial_capital {
            if !(k > 0.0) {
                return bad("initial capital must be positive".into());
            }
        }
        Ok(())
    }

    pub fn group(&self, g: Group) -> &GroupParams {
        &self.groups[g.index()]
    }

    /// Dividend loading on war demand.
    pub fn psi(&self, g: Group) -> f64 {
        let m = g.military() as u8 as f64;
        let z = g.zaibatsu() as u8 as f64;
        self.war.psi_m * m + self.war.psi_zm * z * m
    }

    /// Terminal loading on war demand.
    pub fn varphi(&self, g: Group) -> f64 {
        let m = g.military() as u8 as f64;
        let z = g.zaibatsu() as u8 as f64;
        self.war.varphi_m * m + self.war.varphi_zm * z * m
    }

    /// Dividend loading on civilian substitution.
    pub fn nu(&self, g: Group) -> f64 {
        let n = (!g.military()) as u8 as f64;
        let z = g.zaibatsu() as u8 as f64;
        self.civilian.nu_n * n + self.civilian.nu_zn * z * n
    }

    /// Terminal loading on civilian substitution.
    pub fn omega(&self, g: Group) -> f64 {
        let n = (!g.military()) as u8 as f64;
        let z = g.zaibatsu() as u8 as f64;
        self.civilian.omega_n * n + self.civilian.omega_zn * z * n
    }
}

/// Realized aggregate state values on one date.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StateValues {
    pub a: f64,
    pub w: f64,
    pub c: f64,
    pub a_r: f64,
    pub a_e: f64,
}

/// Financing wedge for one group.
///
/// Baseline: `mu_bar - mu_z Z - mu_m M a - mu_zm Z M a`.
/// Extended: the military terms load on `w` instead of `a`, plus
/// `tau_r a^R`.
pub fn wedge(params: &ModelParams, g: Group, states: &StateValues, extended: bool) -> f64 {
    let z = g.zaibatsu() as u8 as f64;
    let m = g.military() as u8 as f64;
    let base = params.wedge.mu_bar - params.wedge.mu_z * z;
    if extended {
        base - params.ext_wedge.mu_w * m * states.w - params.ext_wedge.mu_zw * z * m * states.w
            + params.group(g).tau_r * states.a_r
    } else {
        base - params.wedge.mu_m * m * states.a - params.wedge.mu_zm * z * m * states.a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_validate() {
        ModelParams::default().validate().unwrap();
    }

    #[test]
    fn parameterized_loadings_respect_flags() {
        let p = ModelParams::default();
        // war demand touches only military groups
        assert_eq!(p.psi(Group::Zn), 0.0);
        assert_eq!(p.psi(Group::Nn), 0.0);
        assert!(p.psi(Group::Zm) > p.psi(Group::Nm));
        // civilian substitution touches only non-military groups
        assert_eq!(p.nu(Group::Zm), 0.0);
        assert_eq!(p.nu(Group::Nm), 0.0);
        assert!((p.nu(Group::Nn) - 0.015).abs() < 1e-15);
        assert!((p.nu(Group::Zn) - 0.010).abs() < 1e-15);
    }

    #[test]
    fn wedge_values() {
        let mut p = ModelParams::default();
        p.wedge = WedgeParams {
            mu_bar: 0.1,
            mu_z: 0.02,
            mu_m: 0.03,
            mu_zm: 0.01,
        };
        let s = |a: f64| StateValues {
            a,
            ..StateValues::default()
        };
        // NN baseline: mu_bar exactly
        assert_eq!(wedge(&p, Group::Nn, &s(0.7), false), 0.1);
        // ZM with a = 0: mu_bar - mu_z
        assert!((wedge(&p, Group::Zm, &s(0.0), false) - 0.08).abs() < 1e-15);
        // ZM with a = 1: 0.1 - 0.02 - 0.03 - 0.01 = 0.04
        assert!((wedge(&p, Group::Zm, &s(1.0), false) - 0.04).abs() < 1e-15);
    }

    #[test]
    fn extended_wedge_uses_war_state_and_regime_term() {
        let mut p = ModelParams::default();
        p.groups[Group::Nn.index()].tau_r = 0.5;
        let states = StateValues {
            a: 9.0, // ignored in the extended wedge
            w: 1.0,
            a_r: 0.2,
            ..StateValues::default()
        };
        let got = wedge(&p, Group::Nn, &states, true);
        assert!((got - (p.wedge.mu_bar + 0.5 * 0.2)).abs() < 1e-15);
        let zm = wedge(&p, Group::Zm, &states, true);
        let expected =
            p.wedge.mu_bar - p.wedge.mu_z - p.ext_wedge.mu_w - p.ext_wedge.mu_zw;
        assert!((zm - expected).abs() < 1e-15);
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = ModelParams::default();
        p.gross_rf = 1.0;
        assert!(p.validate().is_err());

        let mut p = ModelParams::default();
        p.states.rho_a = 1.0;
        assert!(p.validate().is_err());

        let mut p = ModelParams::default();
        p.war.psi_m = 0.0;
        assert!(p.validate().is_err());
    }
}
