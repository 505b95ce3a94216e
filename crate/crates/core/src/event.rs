//! Event studies on top of the CAPM-AR(p)-SV benchmark: abnormal returns,
//! cumulative abnormal returns, standardized CARs, their variances with
//! parameter uncertainty, and sign-classification tables.

use chrono::NaiveDate;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::capm::{estimate_capm_arp_sv, CapmFit, EstimatorConfig};
use crate::error::{Error, Result};

/// Event taxonomy used in the sign tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventType {
    War,
    Politics,
    Regulations,
    Market,
}

impl EventType {
    pub fn as_str(self) -> &'static str {
        match self {
            EventType::War => "War",
            EventType::Politics => "Politics",
            EventType::Regulations => "Regulations",
            EventType::Market => "Market",
        }
    }
}

impl std::str::FromStr for EventType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "War" | "war" => Ok(EventType::War),
            "Politics" | "politics" => Ok(EventType::Politics),
            "Regulations" | "regulations" => Ok(EventType::Regulations),
            "Market" | "market" => Ok(EventType::Market),
            other => Err(format!("unknown event type `{other}`")),
        }
    }
}

/// One event row.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSpec {
    pub event_date: NaiveDate,
    pub name: String,
    pub event_type: EventType,
}

/// Estimation/event window layout, in trading days.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowConfig {
    pub estimation_length: usize,
    pub pre: usize,
    pub post: usize,
    pub significance_alpha: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self {
            estimation_length: 120,
            pre: 10,
            post: 10,
            significance_alpha: 0.05,
        }
    }
}

/// Significance flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Zero => "0",
        }
    }
}

/// Two-sided normal classification of `statistic / sd` at level `alpha`.
pub fn classify_sign(statistic: f64, sd: f64, alpha: f64) -> Result<Sign> {
    if !(sd > 0.0) {
        return Err(Error::DegenerateInput(format!("non-positive sd {sd}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!("alpha {alpha} outside (0,1)")));
    }
    let q = Normal::new(0.0, 1.0).unwrap().inverse_cdf(1.0 - alpha / 2.0);
    let z = statistic / sd;
    Ok(if z > q {
        Sign::Plus
    } else if z < -q {
        Sign::Minus
    } else {
        Sign::Zero
    })
}

/// Var(CAR) over a window: the per-day variances plus the cross terms of
/// parameter uncertainty, computed as
/// `sum sigma2_t + (sum z_t)' M (sum z_t)`.
pub fn car_variance(sigma2: &[f64], kappa_cov: &[[f64; 2]; 2], z: &[[f64; 2]]) -> f64 {
    debug_assert_eq!(sigma2.len(), z.len());
    let sum_s2: f64 = sigma2.iter().sum();
    let mut s = [0.0f64; 2];
    for zt in z {
        s[0] += zt[0];
        s[1] += zt[1];
    }
    let quad = s[0] * (kappa_cov[0][0] * s[0] + kappa_cov[0][1] * s[1])
        + s[1] * (kappa_cov[1][0] * s[0] + kappa_cov[1][1] * s[1]);
    sum_s2 + quad
}

/// Per-day event-window measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventDay {
    /// Day relative to the event date (0 = event day).
    pub rel_day: i64,
    pub ar: f64,
    pub var_ar: f64,
    /// CAR accumulated from the window start (-pre).
    pub car: f64,
    pub var_car: f64,
    pub scar: f64,
    /// Two-sided CI bounds for the CAR.
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Full event-study output for one (event, portfolio) pair.
#[derive(Debug, Clone)]
pub struct EventResult {
    pub event: EventSpec,
    /// Trading day the event mapped to (next trading day when the stated
    /// date is not on the calendar).
    pub mapped_date: NaiveDate,
    pub days: Vec<EventDay>,
    /// Significance flags at t = 0.
    pub ar_flag: Sign,
    pub car_flag: Sign,
    pub scar_flag: Sign,
    /// The benchmark fit over the estimation window.
    pub fit: CapmFit,
}

/// Run one event study: fit the benchmark on the estimation window, then
/// measure AR/CAR/SCAR over `[-pre, +post]` with the volatility path
/// extended into the event window by the fitted log-volatility law.
pub fn run_event_study(
    dates: &[NaiveDate],
    ri: &[f64],
    rm: &[f64],
    event: &EventSpec,
    window: &WindowConfig,
    config: &EstimatorConfig,
) -> Result<EventResult> {
    if dates.len() != ri.len() || dates.len() != rm.len() {
        return Err(Error::InvalidConfig("unaligned series".into()));
    }
    let t0 = dates
        .iter()
        .position(|&d| d >= event.event_date)
        .ok_or_else(|| Error::InvalidConfig(format!(
            "event date {} lies beyond the sample end",
            event.event_date
        )))?;
    let mapped_date = dates[t0];

    let win_len = window.pre + window.post + 1;
    let est_len = window.estimation_length;
    if t0 < window.pre + est_len {
        return Err(Error::SeriesTooShort {
            need: window.pre + est_len,
            got: t0,
        });
    }
    if t0 + window.post >= dates.len() {
        return Err(Error::SeriesTooShort {
            need: t0 + window.post + 1,
            got: dates.len(),
        });
    }

    let est_start = t0 - window.pre - est_len;
    let est_end = t0 - window.pre; // exclusive
    let fit = estimate_capm_arp_sv(&ri[est_start..est_end], &rm[est_start..est_end], config)?;

    let sigma2 = fit.volatility.forecast(win_len);

    let mut days = Vec::with_capacity(win_len);
    let mut car = 0.0;
    let mut z_acc: Vec<[f64; 2]> = Vec::with_capacity(win_len);
    let mut s2_acc: Vec<f64> = Vec::with_capacity(win_len);
    let q = Normal::new(0.0, 1.0)
        .unwrap()
        .inverse_cdf(1.0 - window.significance_alpha / 2.0);

    for j in 0..win_len {
        let t = est_end + j;
        let z = [1.0, rm[t]];
        let ar = ri[t] - (fit.alpha + fit.beta * rm[t]);
        let var_ar = car_variance(&sigma2[j..=j], &fit.kappa_cov, std::slice::from_ref(&z));
        car += ar;
        z_acc.push(z);
        s2_acc.push(sigma2[j]);
        let var_car = car_variance(&s2_acc, &fit.kappa_cov, &z_acc);
        let sd_car = var_car.sqrt();
        days.push(EventDay {
            rel_day: j as i64 - window.pre as i64,
            ar,
            var_ar,
            car,
            var_car,
            scar: car / sd_car,
            ci_lo: car - q * sd_car,
            ci_hi: car + q * sd_car,
        });
    }

    let at0 = days[window.pre];
    let alpha = window.significance_alpha;
    let ar_flag = classify_sign(at0.ar, at0.var_ar.sqrt(), alpha)?;
    let car_flag = classify_sign(at0.car, at0.var_car.sqrt(), alpha)?;
    let scar_flag = classify_sign(at0.scar, 1.0, alpha)?;

    Ok(EventResult {
        event: event.clone(),
        mapped_date,
        days,
        ar_flag,
        car_flag,
        scar_flag,
        fit,
    })
}

/// One cell of a sign table; `None` marks a failed estimation (reported as
/// NA, not fatal).
#[derive(Debug, Clone)]
pub struct SignCell {
    pub flags: Option<(Sign, Sign, Sign)>,
}

/// Sign table over events x portfolios for one index variant.
#[derive(Debug, Clone)]
pub struct SignTable {
    pub events: Vec<EventSpec>,
    pub portfolios: Vec<String>,
    /// `cells[event][portfolio]`.
    pub cells: Vec<Vec<SignCell>>,
}

/// Assemble a sign table by running `run_cell` for every (event, portfolio)
/// pair; per-cell failures become NA cells.
pub fn sign_table<F>(events: &[EventSpec], portfolios: &[String], mut run_cell: F) -> SignTable
where
    F: FnMut(&EventSpec, &str) -> Result<EventResult>,
{
    let mut cells = Vec::with_capacity(events.len());
    for ev in events {
        let mut row = Vec::with_capacity(portfolios.len());
        for pf in portfolios {
            let flags = run_cell(ev, pf)
                .ok()
                .map(|res| (res.ar_flag, res.car_flag, res.scar_flag));
            row.push(SignCell { flags });
        }
        cells.push(row);
    }
    SignTable {
        events: events.to_vec(),
        portfolios: portfolios.to_vec(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capm::VolatilityModel;
    use chrono::Days;
    use rand_chacha::ChaCha8Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn day_range(n: usize) -> Vec<NaiveDate> {
        let start: NaiveDate = "1935-01-01".parse().unwrap();
        (0..n)
            .map(|i| start.checked_add_days(Days::new(i as u64)).unwrap())
            .collect()
    }

    fn constant_vol_config() -> EstimatorConfig {
        EstimatorConfig {
            p_max: 2,
            volatility: VolatilityModel::Constant,
        }
    }

    #[test]
    fn classify_sign_basics() {
        assert_eq!(classify_sign(0.0, 1.0, 0.05).unwrap(), Sign::Zero);
        assert_eq!(classify_sign(3.0, 1.0, 0.05).unwrap(), Sign::Plus);
        // boundary just beyond the 0.975 quantile 1.95996...
        assert_eq!(classify_sign(-1.97, 1.0, 0.05).unwrap(), Sign::Minus);
        assert_eq!(classify_sign(-1.95, 1.0, 0.05).unwrap(), Sign::Zero);
        assert!(classify_sign(1.0, 0.0, 0.05).is_err());
    }

    #[test]
    fn car_variance_degenerate_and_bound() {
        let zero_cov = [[0.0, 0.0], [0.0, 0.0]];
        let z = [[1.0, 0.01], [1.0, -0.02]];
        let s2 = [0.3, 0.4];
        assert!((car_variance(&s2, &zero_cov, &z) - 0.7).abs() < 1e-15);

        // PSD cross term keeps Var(CAR) >= sum sigma2
        let cov = [[2e-6, 1e-7], [1e-7, 4e-5]];
        assert!(car_variance(&s2, &cov, &z) >= 0.7);
    }

    #[test]
    fn car_variance_matches_direct_quadratic_form() {
        let cov = [[3e-6, -2e-7], [-2e-7, 5e-5]];
        let z = [[1.0, 0.013], [1.0, -0.004], [1.0, 0.021]];
        let s2 = [0.1, 0.2, 0.15];
        let compact = car_variance(&s2, &cov, &z);
        let mut direct: f64 = s2.iter().sum();
        for u in 0..3 {
            for v in 0..3 {
                direct += z[u][0] * (cov[0][0] * z[v][0] + cov[0][1] * z[v][1])
                    + z[u][1] * (cov[1][0] * z[v][0] + cov[1][1] * z[v][1]);
            }
        }
        assert!((compact - direct).abs() < 1e-12);
    }

    fn synthetic_series(seed: u64, n: usize) -> (Vec<NaiveDate>, Vec<f64>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rm: Vec<f64> = (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                0.01 * z
            })
            .collect();
        let ri: Vec<f64> = rm
            .iter()
            .map(|&m| {
                let z: f64 = StandardNormal.sample(&mut rng);
                0.0002 + 1.1 * m + 0.008 * z
            })
            .collect();
        (day_range(n), ri, rm)
    }

    #[test]
    fn zero_residual_series_gives_zero_flags() {
        let (dates, _, rm) = synthetic_series(3, 200);
        // Ri exactly on the line the estimation window will fit
        let ri: Vec<f64> = rm.iter().map(|&m| 0.001 + 1.4 * m).collect();
        let event = EventSpec {
            event_date: dates[160],
            name: "null".into(),
            event_type: EventType::Market,
        };
        let window = WindowConfig {
            estimation_length: 120,
            pre: 10,
            post: 10,
            significance_alpha: 0.05,
        };
        // zero residuals make the constant-volatility model degenerate, so
        // perturb one estimation-window point infinitesimally
        let mut ri2 = ri.clone();
        ri2[30] += 1e-9;
        let res = run_event_study(&dates, &ri2, &rm, &event, &window, &constant_vol_config())
            .unwrap();
        for d in &res.days {
            assert!(d.ar.abs() < 1e-9);
        }
        assert_eq!(res.ar_flag, Sign::Zero);
        assert_eq!(res.car_flag, Sign::Zero);
        assert_eq!(res.scar_flag, Sign::Zero);
    }

    #[test]
    fn single_day_window_identities() {
        let (dates, ri, rm) = synthetic_series(5, 220);
        let event = EventSpec {
            event_date: dates[180],
            name: "single".into(),
            event_type: EventType::War,
        };
        let window = WindowConfig {
            estimation_length: 150,
            pre: 0,
            post: 0,
            significance_alpha: 0.05,
        };
        let res =
            run_event_study(&dates, &ri, &rm, &event, &window, &constant_vol_config()).unwrap();
        assert_eq!(res.days.len(), 1);
        let d = res.days[0];
        assert!((d.var_car - d.var_ar).abs() < 1e-15);
        assert!((d.scar - d.ar / d.var_ar.sqrt()).abs() < 1e-12);
        assert!((d.car - d.ar).abs() < 1e-15);
    }

    #[test]
    fn car_is_additive_and_scar_shares_sign() {
        let (dates, ri, rm) = synthetic_series(7, 260);
        let event = EventSpec {
            event_date: dates[200],
            name: "additivity".into(),
            event_type: EventType::Politics,
        };
        let window = WindowConfig::default();
        let res =
            run_event_study(&dates, &ri, &rm, &event, &window, &constant_vol_config()).unwrap();
        let mut acc = 0.0;
        for d in &res.days {
            acc += d.ar;
            assert!((d.car - acc).abs() < 1e-12);
            assert!(d.var_car >= d.var_ar - 1e-15);
            assert_eq!(d.car > 0.0, d.scar > 0.0);
        }
        // classify_sign(CAR, sd) agrees with classify_sign(SCAR, 1)
        let at0 = res.days[window.pre];
        assert_eq!(
            classify_sign(at0.car, at0.var_car.sqrt(), 0.05).unwrap(),
            classify_sign(at0.scar, 1.0, 0.05).unwrap()
        );
    }

    #[test]
    fn insufficient_history_is_an_error() {
        let (dates, ri, rm) = synthetic_series(9, 200);
        let event = EventSpec {
            event_date: dates[40],
            name: "early".into(),
            event_type: EventType::War,
        };
        assert!(run_event_study(
            &dates,
            &ri,
            &rm,
            &event,
            &WindowConfig::default(),
            &constant_vol_config()
        )
        .is_err());
    }

    #[test]
    fn event_on_missing_day_maps_forward() {
        let (mut dates, ri, rm) = synthetic_series(11, 260);
        // open a hole at index 200
        let hole = dates[200];
        for d in dates.iter_mut().skip(200) {
            *d = d.checked_add_days(Days::new(3)).unwrap();
        }
        let event = EventSpec {
            event_date: hole,
            name: "holiday".into(),
            event_type: EventType::Market,
        };
        let res = run_event_study(
            &dates,
            &ri,
            &rm,
            &event,
            &WindowConfig::default(),
            &constant_vol_config(),
        )
        .unwrap();
        assert_eq!(res.mapped_date, dates[200]);
    }

    #[test]
    fn sign_table_reports_na_per_cell() {
        let events = vec![EventSpec {
            event_date: "1936-02-26".parse().unwrap(),
            name: "x".into(),
            event_type: EventType::Politics,
        }];
        let portfolios = vec!["zm".to_string(), "zn".to_string()];
        let table = sign_table(&events, &portfolios, |_, pf| {
            if pf == "zn" {
                Err(Error::DegenerateInput("cell failure".into()))
            } else {
                let (dates, ri, rm) = synthetic_series(13, 260);
                run_event_study(
                    &dates,
                    &ri,
                    &rm,
                    &EventSpec {
                        event_date: dates[200],
                        name: "x".into(),
                        event_type: EventType::Politics,
                    },
                    &WindowConfig::default(),
                    &constant_vol_config(),
                )
            }
        });
        assert!(table.cells[0][0].flags.is_some());
        assert!(table.cells[0][1].flags.is_none());
    }
}
