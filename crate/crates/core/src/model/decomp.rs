//! Closed-form event-time decomposition: horizon weights, exposure
//! coefficients, and the staged-diffusion split of a full-information
//! impact across the announcement day and the day after.

use crate::error::{Error, Result};
use crate::group::Group;
use crate::model::params::ModelParams;

/// Discounted-persistence weights of a state on the price:
/// `a_h = sum_{j=1..H} R^{-j} rho^{j-1}` (dividend channel) and
/// `b_h = R^{-H} rho^{H-1}` (terminal channel), with `0^0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonWeights {
    pub a_h: f64,
    pub b_h: f64,
}

pub fn horizon_weights(rho: f64, gross_rf: f64, horizon: usize) -> HorizonWeights {
    assert!(gross_rf > 1.0, "gross risk-free must exceed 1");
    assert!(horizon >= 1, "horizon must be at least 1");
    assert!((0.0..1.0).contains(&rho), "rho must lie in [0,1)");
    let r_inv = 1.0 / gross_rf;
    let q = rho * r_inv;
    // geometric closed form; q < 1 always since rho < 1 < R
    let a_h = r_inv * (1.0 - q.powi(horizon as i32)) / (1.0 - q);
    let b_h = if horizon == 1 {
        r_inv
    } else {
        r_inv.powi(horizon as i32) * rho.powi(horizon as i32 - 1)
    };
    HorizonWeights { a_h, b_h }
}

/// Which aggregate state an exposure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Policy,
    WarDemand,
    Civilian,
    RegimeRisk,
    EmbeddedRent,
}

impl StateKind {
    fn rho(self, params: &ModelParams) -> f64 {
        match self {
            StateKind::Policy => params.states.rho_a,
            StateKind::WarDemand => params.states.rho_w,
            StateKind::Civilian => params.states.rho_c,
            StateKind::RegimeRisk => params.states.rho_r,
            StateKind::EmbeddedRent => params.states.rho_e,
        }
    }

    /// (dividend loading, terminal loading) of group `g` on this state.
    fn loadings(self, params: &ModelParams, g: Group) -> (f64, f64) {
        let gp = params.group(g);
        match self {
            StateKind::Policy => (gp.lambda, gp.chi),
            StateKind::WarDemand => (params.psi(g), params.varphi(g)),
            StateKind::Civilian => (params.nu(g), params.omega(g)),
            StateKind::RegimeRisk => (gp.lambda_r, gp.chi_r),
            StateKind::EmbeddedRent => (gp.lambda_e, gp.chi_e),
        }
    }
}

/// Return-scale exposure of group `g` to a state revision:
/// `beta = (a_h * dividend_loading + b_h * terminal_loading) / p_pre`.
pub fn exposure_beta(
    params: &ModelParams,
    g: Group,
    kind: StateKind,
    horizon: usize,
    p_pre: f64,
) -> Result<f64> {
    if !(p_pre > 0.0) {
        return Err(Error::DomainExit(format!(
            "pre-event price {p_pre} for group {} not positive",
            g.name()
        )));
    }
    let (l, m) = kind.loadings(params, g);
    let w = horizon_weights(kind.rho(params), params.gross_rf, horizon);
    Ok((w.a_h * l + w.b_h * m) / p_pre)
}

/// Announcement-induced belief revisions. Baseline events move (a, w, c);
/// extended events move (a^R, a^E, w, c) and optionally the
/// group-continuation value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Revisions {
    pub d_a: f64,
    pub d_w: f64,
    pub d_c: f64,
    pub d_ar: f64,
    pub d_ae: f64,
    pub d_g: f64,
}

/// One event experiment: revisions, the early-processor fraction, pre-event
/// prices, and the remaining horizon at the event date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventExperiment {
    pub revisions: Revisions,
    /// Early-processor fraction in (0, 1].
    pub pi: f64,
    pub pre_prices: [f64; 4],
    /// Remaining horizon `H = T + 1 - tau`, at least 1.
    pub horizon: usize,
}

impl EventExperiment {
    pub fn validate(&self) -> Result<()> {
        if !(self.pi > 0.0 && self.pi <= 1.0) {
            return Err(Error::InvalidConfig(format!("pi {} outside (0,1]", self.pi)));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.pre_prices.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::DomainExit("non-positive pre-event price".into()));
        }
        Ok(())
    }
}

/// Which decomposition applies to the event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionMode {
    /// States (a, w, c).
    Baseline,
    /// States (a^R, a^E, w, c), plus the optional group-continuation term.
    Extended,
}

/// Full-information abnormal returns per group implied by the revisions.
pub fn event_decomposition(
    params: &ModelParams,
    experiment: &EventExperiment,
    mode: DecompositionMode,
) -> Result<[f64; 4]> {
    experiment.validate()?;
    let rev = &experiment.revisions;
    let mut out = [0.0f64; 4];
    for g in Group::ALL {
        let p_pre = experiment.pre_prices[g.index()];
        let beta = |kind: StateKind| exposure_beta(params, g, kind, experiment.horizon, p_pre);
        let ar = match mode {
            DecompositionMode::Baseline => {
                beta(StateKind::Policy)? * rev.d_a
                    + beta(StateKind::WarDemand)? * rev.d_w
                    + beta(StateKind::Civilian)? * rev.d_c
            }
            DecompositionMode::Extended => {
                beta(StateKind::RegimeRisk)? * rev.d_ar
                    + beta(StateKind::EmbeddedRent)? * rev.d_ae
                    + beta(StateKind::WarDemand)? * rev.d_w
                    + beta(StateKind::Civilian)? * rev.d_c
                    + params.group(g).beta_continuation * rev.d_g
            }
        };
        out[g.index()] = ar;
    }
    Ok(out)
}

/// Two-day split of a full-information impact under staged diffusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StagedDiffusion {
    pub ar_day0: [f64; 4],
    pub ar_day1: [f64; 4],
    pub car: [f64; 4],
}

/// `AR_day0 = pi * theta`, `AR_day1 = (1 - pi) * theta`, `CAR = theta`.
///
/// The day-1 leg is formed as `theta - ar_day0` and the CAR as the sum of
/// the two legs, so the split identities are bit-exact.
pub fn staged_diffusion(theta: &[f64; 4], pi: f64) -> Result<StagedDiffusion> {
    if !(pi > 0.0 && pi <= 1.0) {
        return Err(Error::InvalidConfig(format!("pi {pi} outside (0,1]")));
    }
    let mut out = StagedDiffusion {
        ar_day0: [0.0; 4],
        ar_day1: [0.0; 4],
        car: [0.0; 4],
    };
    for i in 0..4 {
        out.ar_day0[i] = pi * theta[i];
        out.ar_day1[i] = theta[i] - out.ar_day0[i];
        out.car[i] = out.ar_day0[i] + out.ar_day1[i];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_weights_single_period() {
        for rho in [0.0, 0.3, 0.9] {
            let w = horizon_weights(rho, 1.05, 1);
            assert!((w.a_h - 1.0 / 1.05).abs() < 1e-15);
            assert!((w.b_h - 1.0 / 1.05).abs() < 1e-15);
        }
    }

    #[test]
    fn horizon_weights_zero_persistence() {
        let w = horizon_weights(0.0, 1.05, 3);
        assert!((w.a_h - 1.0 / 1.05).abs() < 1e-15);
        assert_eq!(w.b_h, 0.0);
    }

    #[test]
    fn horizon_weights_match_term_by_term_sum() {
        let cases = [
            (0.7, 1.02, 15usize),
            (0.95, 1.001, 60),
            (0.2, 1.3, 7),
            (0.0, 1.05, 1),
            (0.999, 1.0005, 200),
        ];
        for (rho, r, h) in cases {
            let w = horizon_weights(rho, r, h);
            // compensated term-by-term summation as the oracle
            let mut a_sum = 0.0f64;
            let mut comp = 0.0f64;
            for j in 1..=h {
                let term = r.powi(-(j as i32)) * rho.powi(j as i32 - 1) - comp;
                let acc = a_sum + term;
                comp = (acc - a_sum) - term;
                a_sum = acc;
            }
            let b_direct = r.powi(-(h as i32))
                * if h == 1 { 1.0 } else { rho.powi(h as i32 - 1) };
            let tol = 1e-14 * a_sum.abs().max(1.0);
            assert!(
                (w.a_h - a_sum).abs() < tol,
                "a_h {} vs sum {} at rho={rho}",
                w.a_h,
                a_sum
            );
            assert!((w.b_h - b_direct).abs() < 1e-14 * b_direct.abs().max(1.0));
        }
    }

    #[test]
    fn beta_zero_when_loadings_zero() {
        let params = ModelParams::default();
        // NN has no war-demand loading by construction
        let b = exposure_beta(&params, Group::Nn, StateKind::WarDemand, 10, 1.0).unwrap();
        assert_eq!(b, 0.0);
        let b = exposure_beta(&params, Group::Zn, StateKind::WarDemand, 10, 1.0).unwrap();
        assert_eq!(b, 0.0);
    }

    #[test]
    fn beta_matches_recomputation() {
        let mut params = ModelParams::default();
        params.groups[Group::Nm.index()].lambda = -0.013;
        params.groups[Group::Nm.index()].chi = 0.007;
        let h = 12;
        let p_pre = 1.37;
        let b = exposure_beta(&params, Group::Nm, StateKind::Policy, h, p_pre).unwrap();
        let w = horizon_weights(params.states.rho_a, params.gross_rf, h);
        let direct = (w.a_h * (-0.013) + w.b_h * 0.007) / p_pre;
        assert!((b - direct).abs() < 1e-16);
    }

    #[test]
    fn beta_rejects_nonpositive_price() {
        let params = ModelParams::default();
        assert!(exposure_beta(&params, Group::Zm, StateKind::Policy, 5, 0.0).is_err());
    }

    #[test]
    fn decomposition_zero_revisions() {
        let params = ModelParams::default();
        let exp = EventExperiment {
            revisions: Revisions::default(),
            pi: 1.0,
            pre_prices: [1.0; 4],
            horizon: 10,
        };
        let ar = event_decomposition(&params, &exp, DecompositionMode::Baseline).unwrap();
        assert_eq!(ar, [0.0; 4]);
    }

    #[test]
    fn pure_war_revision_leaves_civilian_groups_flat() {
        let params = ModelParams::default();
        let exp = EventExperiment {
            revisions: Revisions {
                d_w: 0.5,
                ..Revisions::default()
            },
            pi: 1.0,
            pre_prices: [1.0; 4],
            horizon: 10,
        };
        let ar = event_decomposition(&params, &exp, DecompositionMode::Baseline).unwrap();
        assert_eq!(ar[Group::Zn.index()], 0.0);
        assert_eq!(ar[Group::Nn.index()], 0.0);
        assert!(ar[Group::Zm.index()] > 0.0);
        assert!(ar[Group::Nm.index()] > 0.0);
        assert!(ar[Group::Zm.index()] > ar[Group::Nm.index()]);
    }

    #[test]
    fn staged_diffusion_identities() {
        let theta = [0.02, -0.01, 0.005, 0.0];
        let s = staged_diffusion(&theta, 0.4).unwrap();
        assert!((s.ar_day0[0] - 0.008).abs() < 1e-17);
        assert!((s.ar_day1[0] - 0.012).abs() < 1e-17);
        for i in 0..4 {
            // split identities are bit-exact
            assert_eq!(s.ar_day0[i] + s.ar_day1[i], s.car[i]);
            assert_eq!(s.ar_day0[i], 0.4 * theta[i]);
            assert!((s.car[i] - theta[i]).abs() <= f64::EPSILON * theta[i].abs());
        }

        let full = staged_diffusion(&theta, 1.0).unwrap();
        assert_eq!(full.ar_day0, theta);
        assert_eq!(full.ar_day1, [0.0; 4]);
        assert_eq!(full.car, theta);

        assert!(staged_diffusion(&theta, 0.0).is_err());
        assert!(staged_diffusion(&theta, 1.2).is_err());
    }
}
