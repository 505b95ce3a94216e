//! Simulation of the four-portfolio model: state paths, backward-induction
//! pricing, capital accumulation, and synthetic panels for estimator
//! round-trips.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::model::decomp::DecompositionMode;
use crate::model::params::{wedge, ModelParams, StateValues};
use crate::sv::{simulate_sv_innovations, SvParams};

/// Realized states and cohort beliefs on dates t = 1..=T (index t-1).
#[derive(Debug, Clone, PartialEq)]
pub struct StatePath {
    pub states: Vec<StateValues>,
    pub beliefs: Vec<StateValues>,
}

/// Seeded AR(1) state paths started from zero initial states. Beliefs add
/// the configured signal noise (and coincide with states when the signal
/// SDs are zero).
pub fn simulate_states(params: &ModelParams, seed: u64) -> StatePath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_len = params.horizon;
    let s = &params.states;
    let mut prev = StateValues::default();
    let mut states = Vec::with_capacity(t_len);
    let mut beliefs = Vec::with_capacity(t_len);
    for _ in 0..t_len {
        let draw = |rng: &mut ChaCha8Rng, sd: f64| -> f64 {
            if sd == 0.0 {
                0.0
            } else {
                let z: f64 = StandardNormal.sample(rng);
                sd * z
            }
        };
        let cur = StateValues {
            a: s.rho_a * prev.a + draw(&mut rng, s.sd_a),
            w: s.rho_w * prev.w + draw(&mut rng, s.sd_w),
            c: s.rho_c * prev.c + draw(&mut rng, s.sd_c),
            a_r: s.rho_r * prev.a_r + draw(&mut rng, s.sd_r),
            a_e: s.rho_e * prev.a_e + draw(&mut rng, s.sd_e),
        };
        let belief = StateValues {
            a: cur.a + draw(&mut rng, s.signal_sd_a),
            w: cur.w + draw(&mut rng, s.signal_sd_w),
            c: cur.c + draw(&mut rng, s.signal_sd_c),
            a_r: cur.a_r,
            a_e: cur.a_e,
        };
        states.push(cur);
        beliefs.push(belief);
        prev = cur;
    }
    StatePath { states, beliefs }
}

/// Price-function loadings on (constant, states) for one date and group.
#[derive(Debug, Clone, Copy, Default)]
struct PriceCoef {
    constant: f64,
    on_a: f64,
    on_w: f64,
    on_c: f64,
    on_ar: f64,
    on_ae: f64,
}

/// Backward-induct the per-group price coefficients. The date-t dividend
/// and terminal loadings are on the date-(t-1) and date-T states
/// respectively, so the last step propagates without persistence decay.
fn price_coefficients(
    params: &ModelParams,
    mode: DecompositionMode,
) -> Vec<[PriceCoef; 4]> {
    let t_len = params.horizon;
    let r_inv = 1.0 / params.gross_rf;
    let s = &params.states;
    let mut out = vec![[PriceCoef::default(); 4]; t_len];
    for g in Group::ALL {
        let gp = params.group(g);
        let psi = params.psi(g);
        let varphi = params.varphi(g);
        let nu = params.nu(g);
        let omega = params.omega(g);
        // at t = T the next-period payoff is the liquidation value, whose
        // states are already dated T
        let mut next = match mode {
            DecompositionMode::Baseline => PriceCoef {
                constant: gp.p_bar,
                on_a: gp.chi,
                on_w: varphi,
                on_c: omega,
                on_ar: 0.0,
                on_ae: 0.0,
            },
            DecompositionMode::Extended => PriceCoef {
                constant: gp.p_bar,
                on_a: 0.0,
                on_w: varphi,
                on_c: omega,
                on_ar: gp.chi_r,
                on_ae: gp.chi_e,
            },
        };
        for t in (0..t_len).rev() {
            let last = t + 1 == t_len;
            let decay = |rho: f64| if last { 1.0 } else { rho };
            let (div_a, div_ar, div_ae) = match mode {
                DecompositionMode::Baseline => (gp.lambda, 0.0, 0.0),
                DecompositionMode::Extended => (0.0, gp.lambda_r, gp.lambda_e),
            };
            let cur = PriceCoef {
                constant: r_inv * (next.constant + gp.d_bar),
                on_a: r_inv * (div_a + decay(s.rho_a) * next.on_a),
                on_w: r_inv * (psi + decay(s.rho_w) * next.on_w),
                on_c: r_inv * (nu + decay(s.rho_c) * next.on_c),
                on_ar: r_inv * (div_ar + decay(s.rho_r) * next.on_ar),
                on_ae: r_inv * (div_ae + decay(s.rho_e) * next.on_ae),
            };
            out[t][g.index()] = cur;
            next = cur;
        }
    }
    out
}

fn supply_discount(params: &ModelParams, cov: &[[f64; 4]; 4], s: &[f64; 4]) -> [f64; 4] {
    let scale = 1.0 / (params.gross_rf * params.risk_tolerance);
    let mut out = [0.0; 4];
    for (i, row) in cov.iter().enumerate() {
        let mut acc = 0.0;
        for (j, &c) in row.iter().enumerate() {
            acc += c * s[j];
        }
        out[i] = scale * acc;
    }
    out
}

/// Evaluate the pricing recursion along a belief path.
///
/// `payoff_cov` and `supply` must each hold one entry per date (length T).
/// Errors with a diagnostic listing the offending (date, group) pairs when
/// any price leaves the positive domain.
pub fn price_backward(
    params: &ModelParams,
    beliefs: &[StateValues],
    payoff_cov: &[[[f64; 4]; 4]],
    supply: &[[f64; 4]],
    mode: DecompositionMode,
) -> Result<Vec<[f64; 4]>> {
    let t_len = params.horizon;
    if beliefs.len() != t_len || payoff_cov.len() != t_len || supply.len() != t_len {
        return Err(Error::InvalidConfig(format!(
            "pricing inputs must have length {t_len}"
        )));
    }
    let coefs = price_coefficients(params, mode);
    let mut prices = Vec::with_capacity(t_len);
    let mut violations = Vec::new();
    for t in 0..t_len {
        let discount = supply_discount(params, &payoff_cov[t], &supply[t]);
        let b = &beliefs[t];
        let mut row = [0.0f64; 4];
        for g in Group::ALL {
            let c = &coefs[t][g.index()];
            let p = c.constant + c.on_a * b.a + c.on_w * b.w + c.on_c * b.c + c.on_ar * b.a_r
                + c.on_ae * b.a_e
                - discount[g.index()];
            if p <= 0.0 {
                violations.push(format!("t={} group={} price={p:.6}", t + 1, g.name()));
            }
            row[g.index()] = p;
        }
        prices.push(row);
    }
    if !violations.is_empty() {
        return Err(Error::DomainExit(format!(
            "non-positive prices at [{}]",
            violations.join(", ")
        )));
    }
    Ok(prices)
}

/// One capital-accumulation step:
/// `k' = k (1 - delta + Gamma (p - 1 - mu))`. Contraction is allowed;
/// exiting the positive domain is an error.
pub fn step_capital(
    price: f64,
    wedge: f64,
    issuance_sensitivity: f64,
    depreciation: f64,
    capital: f64,
) -> Result<f64> {
    if !(capital > 0.0) {
        return Err(Error::DomainExit(format!("capital {capital} not positive")));
    }
    let investment = issuance_sensitivity * (price - 1.0 - wedge);
    let next = capital * (1.0 - depreciation + investment);
    if next <= 0.0 {
        return Err(Error::DomainExit(format!(
            "capital exits positive domain ({capital} -> {next})"
        )));
    }
    Ok(next)
}

/// Simulated equilibrium objects per date (index t-1), per group.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPath {
    pub prices: Vec<[f64; 4]>,
    pub dividends: Vec<[f64; 4]>,
    pub wedges: Vec<[f64; 4]>,
    pub investment: Vec<[f64; 4]>,
    pub capital: Vec<[f64; 4]>,
    pub market_cap: Vec<[f64; 4]>,
    pub shares: Vec<[f64; 4]>,
}

/// Simulate states, prices, and capital jointly.
pub fn simulate_equilibrium(
    params: &ModelParams,
    seed: u64,
    mode: DecompositionMode,
) -> Result<EquilibriumPath> {
    params.validate()?;
    let t_len = params.horizon;
    let path = simulate_states(params, seed);

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let supply: Vec<[f64; 4]> = (0..t_len)
        .map(|_| {
            let mut s = [0.0f64; 4];
            for (i, sd) in params.supply_sd.iter().enumerate() {
                if *sd > 0.0 {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    s[i] = sd * z;
                }
            }
            s
        })
        .collect();
    let cov = vec![params.payoff_cov; t_len];
    let prices = price_backward(params, &path.beliefs, &cov, &supply, mode)?;

    let mut dividends = Vec::with_capacity(t_len);
    let mut wedges = Vec::with_capacity(t_len);
    let mut investment = Vec::with_capacity(t_len);
    let mut capital = Vec::with_capacity(t_len);
    let mut market_cap = Vec::with_capacity(t_len);
    let mut shares = Vec::with_capacity(t_len);

    let mut k = params.initial_capital;
    for t in 0..t_len {
        let mut div_row = [0.0f64; 4];
        let mut wedge_row = [0.0f64; 4];
        let mut inv_row = [0.0f64; 4];
        let mut mc_row = [0.0f64; 4];
        let extended = mode == DecompositionMode::Extended;
        for g in Group::ALL {
            let gp = params.group(g);
            // date-t dividend loads on the date-(t-1) states; zero initial
            // states make d_1 = d_bar
            let prev = if t == 0 {
                StateValues::default()
            } else {
                path.states[t - 1]
            };
            div_row[g.index()] = match mode {
                DecompositionMode::Baseline => {
                    gp.d_bar
                        + gp.lambda * prev.a
                        + params.psi(g) * prev.w
                        + params.nu(g) * prev.c
                }
                DecompositionMode::Extended => {
                    gp.d_bar
                        + gp.lambda_r * prev.a_r
                        + gp.lambda_e * prev.a_e
                        + params.psi(g) * prev.w
                        + params.nu(g) * prev.c
                }
            };
            wedge_row[g.index()] = wedge(params, g, &path.states[t], extended);
            inv_row[g.index()] = gp.issuance_sensitivity
                * (prices[t][g.index()] - 1.0 - wedge_row[g.index()]);
            mc_row[g.index()] = prices[t][g.index()] * k[g.index()];
        }
        let total: f64 = mc_row.iter().sum();
        let mut share_row = [0.0f64; 4];
        for i in 0..4 {
            share_row[i] = mc_row[i] / total;
        }

        dividends.push(div_row);
        wedges.push(wedge_row);
        investment.push(inv_row);
        capital.push(k);
        market_cap.push(mc_row);
        shares.push(share_row);

        if t + 1 < t_len {
            let mut next_k = [0.0f64; 4];
            for g in Group::ALL {
                next_k[g.index()] = step_capital(
                    prices[t][g.index()],
                    wedge_row[g.index()],
                    params.group(g).issuance_sensitivity,
                    params.depreciation,
                    k[g.index()],
                )
                .map_err(|e| Error::DomainExit(format!("t={}: {e}", t + 1)))?;
            }
            k = next_k;
        }
    }

    Ok(EquilibriumPath {
        prices,
        dividends,
        wedges,
        investment,
        capital,
        market_cap,
        shares,
    })
}

/// Direct CAPM-AR(p)-SV data-generating process for estimator round-trips.
#[derive(Debug, Clone, PartialEq)]
pub struct CapmSvDgp {
    pub alpha: f64,
    pub beta: f64,
    pub rho: Vec<f64>,
    pub sv: SvParams,
    pub market_mean: f64,
    pub market_sd: f64,
    pub t_len: usize,
}

/// Generate one synthetic (portfolio, market) excess-return pair with the
/// stated ground truth.
pub fn generate_capm_sv_series(dgp: &CapmSvDgp, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_len = dgp.t_len;
    let rm: Vec<f64> = (0..t_len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            dgp.market_mean + dgp.market_sd * z
        })
        .collect();
    let (eta, _h) = simulate_sv_innovations(&dgp.sv, t_len, &mut rng);
    let mut eps = vec![0.0f64; t_len];
    for t in 0..t_len {
        let mut e = eta[t];
        for (j, &r) in dgp.rho.iter().enumerate() {
            if t > j {
                e += r * eps[t - 1 - j];
            }
        }
        eps[t] = e;
    }
    let ri: Vec<f64> = (0..t_len)
        .map(|t| dgp.alpha + dgp.beta * rm[t] + eps[t])
        .collect();
    (ri, rm)
}

/// Generate a four-portfolio synthetic panel sharing one market path: the
/// market draw comes from the first entry's market parameters, and each
/// portfolio adds its own AR(p)-SV residual process.
pub fn generate_capm_sv_panel(dgps: &[CapmSvDgp; 4], seed: u64) -> ([Vec<f64>; 4], Vec<f64>) {
    let t_len = dgps[0].t_len;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rm: Vec<f64> = (0..t_len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            dgps[0].market_mean + dgps[0].market_sd * z
        })
        .collect();
    let mut out: [Vec<f64>; 4] = Default::default();
    for (gi, dgp) in dgps.iter().enumerate() {
        assert_eq!(dgp.t_len, t_len, "portfolio DGPs must share t_len");
        let mut grng = ChaCha8Rng::seed_from_u64(seed ^ (0x517c_c1b7_2722_0a95u64.wrapping_mul(gi as u64 + 1)));
        let (eta, _h) = simulate_sv_innovations(&dgp.sv, t_len, &mut grng);
        let mut eps = vec![0.0f64; t_len];
        for t in 0..t_len {
            let mut e = eta[t];
            for (j, &r) in dgp.rho.iter().enumerate() {
                if t > j {
                    e += r * eps[t - 1 - j];
                }
            }
            eps[t] = e;
        }
        out[gi] = (0..t_len)
            .map(|t| dgp.alpha + dgp.beta * rm[t] + eps[t])
            .collect();
    }
    (out, rm)
}

/// Model-implied synthetic panel: per-group and market excess returns from
/// a simulated equilibrium path.
#[derive(Debug, Clone)]
pub struct ModelPanel {
    pub group_excess: [Vec<f64>; 4],
    pub market_excess: Vec<f64>,
    pub path: EquilibriumPath,
}

/// Mode (a) synthetic panel: total returns from the simulated price and
/// dividend paths, cap-share weighted into a market return, in excess of
/// the model risk-free rate. Degenerate (shock-free) paths are rejected.
pub fn generate_model_panel(
    params: &ModelParams,
    seed: u64,
    mode: DecompositionMode,
) -> Result<ModelPanel> {
    let path = simulate_equilibrium(params, seed, mode)?;
    let t_len = params.horizon;
    if t_len < 2 {
        return Err(Error::SeriesTooShort { need: 2, got: t_len });
    }
    let rf = params.gross_rf - 1.0;
    let mut group_excess: [Vec<f64>; 4] = Default::default();
    let mut market_excess = Vec::with_capacity(t_len - 1);
    for t in 1..t_len {
        let mut market = 0.0;
        for g in Group::ALL {
            let i = g.index();
            let r = (path.prices[t][i] + path.dividends[t][i]) / path.prices[t - 1][i] - 1.0;
            group_excess[i].push(r - rf);
            market += path.shares[t - 1][i] * (r - rf);
        }
        market_excess.push(market);
    }
    let mean = market_excess.iter().sum::<f64>() / market_excess.len() as f64;
    let var = market_excess
        .iter()
        .map(|r| (r - mean) * (r - mean))
        .sum::<f64>()
        / market_excess.len() as f64;
    if var < 1e-18 {
        return Err(Error::DegenerateInput(
            "zero excess-return variance in simulated panel".into(),
        ));
    }
    Ok(ModelPanel {
        group_excess,
        market_excess,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::decomp::{
        event_decomposition, DecompositionMode, EventExperiment, Revisions,
    };

    #[test]
    fn zero_innovations_give_zero_states() {
        let mut params = ModelParams::default();
        params.states.sd_a = 0.0;
        params.states.sd_w = 0.0;
        params.states.sd_c = 0.0;
        let path = simulate_states(&params, 42);
        for s in &path.states {
            assert_eq!((s.a, s.w, s.c, s.a_r, s.a_e), (0.0, 0.0, 0.0, 0.0, 0.0));
        }
        assert_eq!(path.states, path.beliefs);
    }

    #[test]
    fn states_are_deterministic_given_seed() {
        let params = ModelParams::default();
        assert_eq!(simulate_states(&params, 7), simulate_states(&params, 7));
    }

    #[test]
    fn ar1_autocorrelation_is_recovered() {
        let mut params = ModelParams::default();
        params.horizon = 20_000;
        params.states.rho_a = 0.9;
        params.states.sd_a = 1.0;
        let path = simulate_states(&params, 3);
        let a: Vec<f64> = path.states.iter().map(|s| s.a).collect();
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        let denom: f64 = a.iter().map(|x| (x - mean) * (x - mean)).sum();
        let num: f64 = (1..a.len())
            .map(|t| (a[t] - mean) * (a[t - 1] - mean))
            .sum();
        let acf1 = num / denom;
        assert!((acf1 - 0.9).abs() < 0.05, "acf1 {acf1}");
    }

    #[test]
    fn annuity_closed_form_at_zero_states() {
        let mut params = ModelParams::default();
        params.states.sd_a = 0.0;
        params.states.sd_w = 0.0;
        params.states.sd_c = 0.0;
        let t_len = params.horizon;
        let beliefs = vec![StateValues::default(); t_len];
        let cov = vec![params.payoff_cov; t_len];
        let supply = vec![[0.0; 4]; t_len];
        let prices =
            price_backward(&params, &beliefs, &cov, &supply, DecompositionMode::Baseline)
                .unwrap();
        let r = params.gross_rf;
        for (t, row) in prices.iter().enumerate() {
            let h = t_len + 1 - (t + 1); // remaining horizon
            for g in Group::ALL {
                let gp = params.group(g);
                let mut expected = 0.0;
                for j in 1..=h {
                    expected += r.powi(-(j as i32)) * gp.d_bar;
                }
                expected += r.powi(-(h as i32)) * gp.p_bar;
                assert!(
                    (row[g.index()] - expected).abs() < 1e-12,
                    "t={t} g={} price {} vs annuity {expected}",
                    g.name(),
                    row[g.index()]
                );
            }
        }
    }

    #[test]
    fn pricing_is_linear_in_beliefs() {
        let params = ModelParams::default();
        let t_len = params.horizon;
        let cov = vec![params.payoff_cov; t_len];
        let supply = vec![[0.0; 4]; t_len];
        let path1 = simulate_states(&params, 11).beliefs;
        let path2 = simulate_states(&params, 12).beliefs;
        let zero = vec![StateValues::default(); t_len];
        let sum_path: Vec<StateValues> = path1
            .iter()
            .zip(&path2)
            .map(|(x, y)| StateValues {
                a: x.a + y.a,
                w: x.w + y.w,
                c: x.c + y.c,
                a_r: x.a_r + y.a_r,
                a_e: x.a_e + y.a_e,
            })
            .collect();
        let mode = DecompositionMode::Baseline;
        let p1 = price_backward(&params, &path1, &cov, &supply, mode).unwrap();
        let p2 = price_backward(&params, &path2, &cov, &supply, mode).unwrap();
        let p0 = price_backward(&params, &zero, &cov, &supply, mode).unwrap();
        let ps = price_backward(&params, &sum_path, &cov, &supply, mode).unwrap();
        for t in 0..t_len {
            for i in 0..4 {
                let superposed = p1[t][i] + p2[t][i] - p0[t][i];
                assert!(
                    (ps[t][i] - superposed).abs() < 1e-10,
                    "superposition violated at t={t} i={i}"
                );
            }
        }
    }

    #[test]
    fn event_price_change_matches_decomposition() {
        let params = ModelParams::default();
        let t_len = params.horizon;
        let cov = vec![params.payoff_cov; t_len];
        let supply = vec![[0.0; 4]; t_len];
        let beliefs = simulate_states(&params, 21).beliefs;

        let tau = 15usize; // 1-based event date
        let rev = Revisions {
            d_a: 0.3,
            d_w: -0.2,
            d_c: 0.15,
            ..Revisions::default()
        };
        let mut shocked = beliefs.clone();
        shocked[tau - 1].a += rev.d_a;
        shocked[tau - 1].w += rev.d_w;
        shocked[tau - 1].c += rev.d_c;

        let mode = DecompositionMode::Baseline;
        let before = price_backward(&params, &beliefs, &cov, &supply, mode).unwrap();
        let after = price_backward(&params, &shocked, &cov, &supply, mode).unwrap();

        let pre_prices = before[tau - 1];
        let exp = EventExperiment {
            revisions: rev,
            pi: 1.0,
            pre_prices,
            horizon: t_len + 1 - tau,
        };
        let ar = event_decomposition(&params, &exp, mode).unwrap();
        for g in Group::ALL {
            let i = g.index();
            let realized = (after[tau - 1][i] - before[tau - 1][i]) / pre_prices[i];
            assert!(
                (realized - ar[i]).abs() < 1e-10,
                "group {} realized {realized} vs decomposition {}",
                g.name(),
                ar[i]
            );
        }
    }

    #[test]
    fn capital_step_cases() {
        // break-even price: i = 0
        let k = step_capital(1.05, 0.05, 2.0, 0.1, 1.0).unwrap();
        assert!((k - 0.9).abs() < 1e-15);
        // zero sensitivity: pure depreciation
        let k = step_capital(5.0, 0.0, 0.0, 0.07, 2.0).unwrap();
        assert!((k - 2.0 * 0.93).abs() < 1e-15);
        // spec arithmetic: i = 0.3, k' = 1.25
        let k = step_capital(1.2, 0.05, 2.0, 0.05, 1.0).unwrap();
        assert!((k - 1.25).abs() < 1e-15);
        // domain exit
        assert!(step_capital(0.01, 0.5, 3.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn equilibrium_shares_sum_to_one() {
        let mut params = ModelParams::default();
        params.states.sd_a = 0.005;
        params.states.sd_w = 0.005;
        params.states.sd_c = 0.005;
        params.supply_sd = [0.001; 4];
        let path = simulate_equilibrium(&params, 5, DecompositionMode::Baseline).unwrap();
        for row in &path.shares {
            let total: f64 = row.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
        for row in &path.capital {
            assert!(row.iter().all(|&k| k > 0.0));
        }
    }

    #[test]
    fn degenerate_panel_is_flagged() {
        let mut params = ModelParams::default();
        params.states.sd_a = 0.0;
        params.states.sd_w = 0.0;
        params.states.sd_c = 0.0;
        params.supply_sd = [0.0; 4];
        let err = generate_model_panel(&params, 1, DecompositionMode::Baseline).unwrap_err();
        assert!(matches!(err, Error::DegenerateInput(_)), "{err}");
    }

    #[test]
    fn synthetic_panel_is_deterministic() {
        let dgp = CapmSvDgp {
            alpha: 0.0005,
            beta: 1.1,
            rho: vec![0.3],
            sv: SvParams {
                mu: -9.0,
                phi: 0.95,
                sigma_tau: 0.2,
            },
            market_mean: 0.0,
            market_sd: 0.01,
            t_len: 500,
        };
        let (ri1, rm1) = generate_capm_sv_series(&dgp, 9);
        let (ri2, rm2) = generate_capm_sv_series(&dgp, 9);
        assert_eq!(ri1, ri2);
        assert_eq!(rm1, rm2);
    }

    #[test]
    fn dgp_without_noise_recovers_alpha_beta_by_ols() {
        let dgp = CapmSvDgp {
            alpha: 0.0004,
            beta: 1.2,
            rho: vec![],
            sv: SvParams {
                mu: -30.0,
                phi: 0.0,
                sigma_tau: 1e-6,
            },
            market_mean: 0.0,
            market_sd: 0.01,
            t_len: 2000,
        };
        let (ri, rm) = generate_capm_sv_series(&dgp, 17);
        let fit = crate::capm::fit_ols(&ri, &rm).unwrap();
        assert!((fit.alpha - dgp.alpha).abs() < 1e-5);
        assert!((fit.beta - dgp.beta).abs() < 1e-2);
    }
}
