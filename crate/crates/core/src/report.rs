//! Canonical CSV renderings of the toolkit's outputs. All emitters return
//! strings so callers control file placement; formats are stable so runs
//! with the same seed are byte-identical.

use crate::event::{EventResult, SignTable};
use crate::index::{CapShareSeries, IndexSeries};
use crate::model::SweepReport;
use crate::stats::{AdfGlsResult, Descriptives};

/// `date,level` with six-decimal levels.
pub fn index_csv(index: &IndexSeries) -> String {
    let mut out = String::from("date,level\n");
    for (date, level) in index.dates().iter().zip(index.levels()) {
        out.push_str(&format!("{date},{level:.6}\n"));
    }
    out
}

/// `date,zm,zn,nm,nn` market-capitalization shares.
pub fn shares_csv(shares: &CapShareSeries) -> String {
    let mut out = String::from("date,zm,zn,nm,nn\n");
    for (date, row) in shares.dates().iter().zip(shares.shares()) {
        out.push_str(&format!(
            "{date},{:.6},{:.6},{:.6},{:.6}\n",
            row[0], row[1], row[2], row[3]
        ));
    }
    out
}

/// One row of the descriptive-statistics table.
#[derive(Debug, Clone)]
pub struct StatsRow {
    pub portfolio: String,
    pub descriptives: Descriptives,
    pub adf: AdfGlsResult,
}

/// Per-portfolio descriptive statistics and unit-root results.
pub fn stats_csv(rows: &[StatsRow]) -> String {
    let mut out = String::from("portfolio,mean,sd,min,max,skewness,kurtosis,adf_gls,phi_hat,lag,n\n");
    for r in rows {
        let d = &r.descriptives;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.portfolio,
            d.mean,
            d.sd,
            d.min,
            d.max,
            d.skewness,
            d.kurtosis,
            r.adf.statistic,
            r.adf.phi_hat,
            r.adf.selected_lag,
            d.n
        ));
    }
    out
}

/// One row of a coefficient table; `values` is None when the cell failed.
#[derive(Debug, Clone)]
pub struct EstimateRow {
    pub window: String,
    pub portfolio: String,
    pub fit: Option<EstimateCell>,
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateCell {
    pub alpha: f64,
    pub se_alpha: f64,
    pub beta: f64,
    pub se_beta: f64,
    pub p: usize,
    pub adj_r2: f64,
}

/// Coefficient table shaped like the published estimation tables:
/// one row per (window, portfolio).
pub fn estimates_csv(rows: &[EstimateRow]) -> String {
    let mut out = String::from("window,portfolio,alpha,se_alpha,beta,se_beta,ar_p,adj_r2\n");
    for r in rows {
        match &r.fit {
            Some(c) => out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.window, r.portfolio, c.alpha, c.se_alpha, c.beta, c.se_beta, c.p, c.adj_r2
            )),
            None => out.push_str(&format!(
                "{},{},NA,NA,NA,NA,NA,NA\n",
                r.window, r.portfolio
            )),
        }
    }
    out
}

/// Sign table: per event, a (ar, car, scar) flag triple per portfolio.
pub fn sign_table_csv(table: &SignTable) -> String {
    let mut out = String::from("event_day,event_name,event_type");
    for pf in &table.portfolios {
        out.push_str(&format!(",{pf}_ar,{pf}_car,{pf}_scar"));
    }
    out.push('\n');
    for (ev, row) in table.events.iter().zip(&table.cells) {
        out.push_str(&format!(
            "{},{},{}",
            ev.event_date,
            csv_quote(&ev.name),
            ev.event_type.as_str()
        ));
        for cell in row {
            match &cell.flags {
                Some((ar, car, scar)) => out.push_str(&format!(
                    ",{},{},{}",
                    ar.as_str(),
                    car.as_str(),
                    scar.as_str()
                )),
                None => out.push_str(",NA,NA,NA"),
            }
        }
        out.push('\n');
    }
    out
}

/// Per-event detail: one row per event-window day.
pub fn event_detail_csv(result: &EventResult) -> String {
    let mut out = String::from("rel_day,ar,var_ar,car,var_car,scar,ci_lo,ci_hi\n");
    for d in &result.days {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            d.rel_day, d.ar, d.var_ar, d.car, d.var_car, d.scar, d.ci_lo, d.ci_hi
        ));
    }
    out
}

/// Posterior draw dump for sampler diagnostics:
/// `iteration,mu,phi,sigma_tau`.
pub fn sv_draws_csv(fit: &crate::sv::SvFit) -> String {
    let mut out = String::from("iteration,mu,phi,sigma_tau\n");
    for (i, d) in fit.draws.iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", i, d[0], d[1], d[2]));
    }
    out
}

/// Proposition sweep rows: `draw_id,premise,consequent,consistent`.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from("draw_id,premise,consequent,consistent\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.draw_id, r.premise as u8, r.consequent as u8, r.consistent as u8
        ));
    }
    out
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
