//! Property tests over randomly generated panels and model inputs.

use chrono::NaiveDate;
use proptest::prelude::*;

use marketlab::calendar::TradingCalendar;
use marketlab::index::{build_index, compute_cap_shares, compute_returns, IndexVariant, PortfolioSpec};
use marketlab::model::staged_diffusion;
use marketlab::panel::{
    load_panel, save_panel, ActionKind, CallRateSeries, CorporateActionEvent, Observation,
    PanelDataset, SecuritySeries,
};

fn day(offset: usize) -> NaiveDate {
    NaiveDate::from_ymd_opt(1932, 1, 4).unwrap() + chrono::Days::new(offset as u64)
}

#[derive(Debug, Clone)]
struct PanelPlan {
    n_days: usize,
    securities: Vec<(bool, bool, usize, usize, Vec<f64>, f64)>,
    dividend: Option<(usize, usize, f64)>,
    rights: Option<(usize, usize, f64, f64)>,
}

fn panel_strategy() -> impl Strategy<Value = PanelPlan> {
    let security = (
        any::<bool>(),
        any::<bool>(),
        0usize..4,  // listing delay
        0usize..3,  // delisting cut from the end
        prop::collection::vec(0.7f64..1.4, 12),
        1.0f64..2000.0,
    );
    let anchor = (
        any::<bool>(),
        any::<bool>(),
        Just(0usize), // spans the whole calendar so every date has a listing
        Just(0usize),
        prop::collection::vec(0.7f64..1.4, 12),
        1.0f64..2000.0,
    );
    (
        anchor,
        prop::collection::vec(security, 0..5),
        prop::option::of((0usize..5, 2usize..10, 0.01f64..5.0)),
        prop::option::of((0usize..5, 2usize..10, 0.1f64..2.0, 1.0f64..80.0)),
    )
        .prop_map(|(anchor, mut securities, dividend, rights)| {
            securities.insert(0, anchor);
            PanelPlan {
                n_days: 12,
                securities,
                dividend,
                rights,
            }
        })
}

fn build_plan(plan: &PanelPlan) -> Option<PanelDataset> {
    let dates: Vec<NaiveDate> = (0..plan.n_days).map(day).collect();
    let mut securities = Vec::new();
    for (i, (z, m, delay, cut, moves, shares)) in plan.securities.iter().enumerate() {
        let first = *delay;
        let last = plan.n_days.saturating_sub(*cut + 1);
        if first > last {
            return None;
        }
        let mut price = 50.0 + 10.0 * i as f64;
        let mut obs = Vec::new();
        for (k, &d) in dates.iter().enumerate().take(last + 1).skip(first) {
            price *= moves[k % moves.len()];
            obs.push((
                d,
                Observation {
                    price,
                    shares_outstanding: *shares,
                },
            ));
        }
        securities.push(SecuritySeries::new(format!("s{i}"), *z, *m, obs));
    }

    let mut actions = Vec::new();
    if let Some((sec, at, cash)) = plan.dividend {
        if let Some(s) = securities.get(sec % securities.len()) {
            let date = day(at);
            if s.is_listed(date) {
                actions.push(CorporateActionEvent {
                    security_id: s.id.clone(),
                    ex_date: date,
                    kind: ActionKind::Dividend,
                    cash_amount: cash,
                    new_shares_per_old: 0.0,
                    subscription_price: 0.0,
                });
            }
        }
    }
    if let Some((sec, at, ratio, sub)) = plan.rights {
        if let Some(s) = securities.get(sec % securities.len()) {
            let date = day(at);
            if s.is_listed(date) {
                actions.push(CorporateActionEvent {
                    security_id: s.id.clone(),
                    ex_date: date,
                    kind: ActionKind::RightsIssue,
                    cash_amount: 0.0,
                    new_shares_per_old: ratio,
                    subscription_price: sub,
                });
            }
        }
    }

    let rates: std::collections::BTreeMap<NaiveDate, f64> =
        dates.iter().map(|&d| (d, 0.0001)).collect();
    PanelDataset::new(
        TradingCalendar::from_dates(dates),
        securities,
        actions,
        CallRateSeries::new(rates),
    )
    .ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// save -> load reproduces the panel (canonical row order).
    #[test]
    fn panel_round_trip(plan in panel_strategy()) {
        let Some(panel) = build_plan(&plan) else { return Ok(()); };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        let a = dir.path().join("a.csv");
        let r = dir.path().join("r.csv");
        save_panel(&panel, &p, &a, &r).unwrap();
        let reloaded = load_panel(&p, &a, &r).unwrap();
        prop_assert_eq!(reloaded, panel);
    }

    /// cap shares always partition the market.
    #[test]
    fn cap_shares_sum_to_one(plan in panel_strategy()) {
        let Some(panel) = build_plan(&plan) else { return Ok(()); };
        let shares = compute_cap_shares(&panel).unwrap();
        for row in shares.shares() {
            let total: f64 = row.iter().sum();
            prop_assert!((total - 1.0).abs() <= 1e-12);
        }
    }

    /// multiplying every price (and per-share cash) by c > 0 leaves index
    /// levels and returns unchanged.
    #[test]
    fn rebasing_invariance(plan in panel_strategy(), scale in 0.1f64..50.0) {
        let Some(panel) = build_plan(&plan) else { return Ok(()); };
        let scaled_secs: Vec<SecuritySeries> = panel
            .securities()
            .map(|s| {
                let obs: Vec<_> = s
                    .observations()
                    .map(|(d, mut o)| {
                        o.price *= scale;
                        (d, o)
                    })
                    .collect();
                SecuritySeries::new(s.id.clone(), s.zaibatsu, s.military, obs)
            })
            .collect();
        let mut actions = panel.actions.clone();
        for act in &mut actions {
            act.cash_amount *= scale;
            act.subscription_price *= scale;
        }
        let scaled = PanelDataset::new(
            panel.calendar.clone(),
            scaled_secs,
            actions,
            panel.call_rates.clone(),
        )
        .unwrap();
        let base = panel.calendar.dates()[0];
        for variant in IndexVariant::ALL {
            let a = build_index(&panel, PortfolioSpec::Market, variant, base);
            let b = build_index(&scaled, PortfolioSpec::Market, variant, base);
            let (Ok(a), Ok(b)) = (a, b) else { return Ok(()); };
            for (x, y) in a.levels().iter().zip(b.levels()) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
            if a.len() >= 2 {
                let ra = compute_returns(&a).unwrap();
                let rb = compute_returns(&b).unwrap();
                for (x, y) in ra.values().iter().zip(rb.values()) {
                    prop_assert!((x - y).abs() <= 1e-9);
                }
            }
        }
    }

    /// staged-diffusion identities hold for arbitrary impacts and splits.
    #[test]
    fn staged_split_identities(
        theta in prop::array::uniform4(-0.5f64..0.5),
        pi in 0.001f64..1.0,
    ) {
        let s = staged_diffusion(&theta, pi).unwrap();
        for i in 0..4 {
            prop_assert_eq!(s.ar_day0[i] + s.ar_day1[i], s.car[i]);
            prop_assert_eq!(s.ar_day0[i], pi * theta[i]);
        }
    }
}
