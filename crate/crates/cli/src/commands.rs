//! Command implementations. Every command loads what it needs, runs the
//! core routines (independent cells in parallel with keyed sub-seeds), and
//! writes its reports plus a machine-readable run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;

use marketlab::capm::{estimate_capm_arp_sv, EstimatorConfig, VolatilityModel};
use marketlab::error::Error as CoreError;
use marketlab::event::{run_event_study, sign_table, EventSpec, EventType, WindowConfig};
use marketlab::index::{
    build_index, compute_cap_shares, compute_excess_returns, compute_returns, IndexVariant,
    PortfolioSpec,
};
use marketlab::model::{
    generate_capm_sv_panel, generate_model_panel, simulate_equilibrium, sweep_prop1, sweep_prop2,
    sweep_prop4, sweep_prop5, CapmSvDgp, DecompositionMode, Prop2Variant, SweepReport,
};
use marketlab::panel::{load_panel, PanelDataset};
use marketlab::report;
use marketlab::seed::derive_seed;
use marketlab::stats::{adf_gls, descriptive_stats, DetrendSpec, LagCriterion};
use marketlab::sv::McmcConfig;
use marketlab::Group;

use crate::config::{ModelConfigFile, RunConfig};
use crate::svg;

/// Failures are classified for the process exit code: 2 for input problems,
/// 3 for numerical ones.
#[derive(Debug)]
pub enum CmdError {
    Input(String),
    Numerical(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Input(_) => 2,
            CmdError::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Input(m) | CmdError::Numerical(m) => m,
        }
    }
}

fn classify(err: CoreError) -> CmdError {
    match err {
        CoreError::Io { .. }
        | CoreError::MalformedRow { .. }
        | CoreError::DuplicateRecord { .. }
        | CoreError::UnknownActionTarget { .. }
        | CoreError::InvalidValue { .. }
        | CoreError::CalendarGap { .. }
        | CoreError::SeriesGap { .. }
        | CoreError::MissingRate { .. }
        | CoreError::InvalidConfig(_)
        | CoreError::Csv { .. } => CmdError::Input(err.to_string()),
        _ => CmdError::Numerical(err.to_string()),
    }
}

type CmdResult<T> = Result<T, CmdError>;

/// Shared command context after config resolution.
pub struct Ctx {
    pub cfg: RunConfig,
    pub seed: u64,
    pub alpha: f64,
    pub out_dir: PathBuf,
    pub config_hash: u64,
    outputs: std::sync::Mutex<Vec<String>>,
}

impl Ctx {
    pub fn new(cfg: RunConfig, config_text: &str, seed: Option<u64>, alpha: Option<f64>, out: Option<PathBuf>) -> Self {
        let seed = seed.unwrap_or(cfg.run.seed);
        let alpha = alpha.unwrap_or(cfg.run.alpha);
        let out_dir = out.unwrap_or_else(|| cfg.run.out_dir.clone());
        let mut hash = 0xcbf29ce484222325u64;
        for b in config_text.bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        Self {
            cfg,
            seed,
            alpha,
            out_dir,
            config_hash: hash,
            outputs: std::sync::Mutex::new(Vec::new()),
        }
    }

    fn write_output(&self, name: &str, contents: &str) -> CmdResult<()> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| CmdError::Input(format!("cannot create {}: {e}", self.out_dir.display())))?;
        let path = self.out_dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CmdError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.lock().unwrap().push(name.to_string());
        Ok(())
    }

    fn write_manifest(&self, command: &str) -> CmdResult<()> {
        let outputs = self.outputs.lock().unwrap().clone();
        let manifest = serde_json::json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
            "alpha": self.alpha,
            "config_hash": format!("{:016x}", self.config_hash),
            "outputs": outputs,
        });
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        self.write_output("run_manifest.json", &(text + "\n"))
    }

    fn panel(&self) -> CmdResult<PanelDataset> {
        for path in [&self.cfg.data.prices, &self.cfg.data.actions, &self.cfg.data.rates] {
            if !path.exists() {
                return Err(CmdError::Input(format!(
                    "input file not found: {}",
                    path.display()
                )));
            }
        }
        load_panel(&self.cfg.data.prices, &self.cfg.data.actions, &self.cfg.data.rates)
            .map_err(classify)
    }

    fn variants(&self) -> CmdResult<Vec<IndexVariant>> {
        self.cfg
            .index
            .variants
            .iter()
            .map(|v| v.parse::<IndexVariant>().map_err(CmdError::Input))
            .collect()
    }

    fn portfolios(&self) -> CmdResult<Vec<PortfolioSpec>> {
        self.cfg
            .index
            .portfolios
            .iter()
            .map(|p| p.parse::<PortfolioSpec>().map_err(CmdError::Input))
            .collect()
    }

    fn base_date(&self, panel: &PanelDataset) -> CmdResult<NaiveDate> {
        match self.cfg.index.base_date {
            Some(d) => Ok(d),
            None => panel
                .calendar
                .dates()
                .first()
                .copied()
                .ok_or_else(|| CmdError::Input("empty panel".into())),
        }
    }

    fn estimator_config(&self, seed: u64) -> EstimatorConfig {
        let e = &self.cfg.estimator;
        EstimatorConfig {
            p_max: e.p_max,
            volatility: if e.constant_volatility {
                VolatilityModel::Constant
            } else {
                VolatilityModel::Sv(McmcConfig {
                    burn_in: e.burn_in,
                    draws: e.draws,
                    seed,
                    ..McmcConfig::default()
                })
            },
        }
    }
}

/// Excess-return series for one (portfolio, variant) pair.
fn excess_series(
    panel: &PanelDataset,
    spec: PortfolioSpec,
    variant: IndexVariant,
    base: NaiveDate,
) -> Result<(Vec<NaiveDate>, Vec<f64>), CoreError> {
    let index = build_index(panel, spec, variant, base)?;
    let raw = compute_returns(&index)?;
    let excess = compute_excess_returns(&raw, &panel.call_rates)?;
    Ok((excess.dates().to_vec(), excess.values().to_vec()))
}

/// Restrict the market series to a portfolio's own (sub)span.
fn slice_onto(
    market_dates: &[NaiveDate],
    rm: &[f64],
    sub: &[NaiveDate],
) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(sub.len());
    let mut i = 0usize;
    for &d in sub {
        while i < market_dates.len() && market_dates[i] < d {
            i += 1;
        }
        if i >= market_dates.len() || market_dates[i] != d {
            return None;
        }
        out.push(rm[i]);
    }
    Some(out)
}

pub fn cmd_index(ctx: &Ctx) -> CmdResult<()> {
    let panel = ctx.panel()?;
    let base = ctx.base_date(&panel)?;
    for variant in ctx.variants()? {
        for spec in ctx.portfolios()? {
            let index = build_index(&panel, spec, variant, base).map_err(classify)?;
            let name = format!("index_{}_{}.csv", variant.name(), spec.name());
            ctx.write_output(&name, &report::index_csv(&index))?;
        }
    }
    let shares = compute_cap_shares(&panel).map_err(classify)?;
    ctx.write_output("shares.csv", &report::shares_csv(&shares))?;
    ctx.write_manifest("index")
}

pub fn cmd_stats(ctx: &Ctx) -> CmdResult<()> {
    let panel = ctx.panel()?;
    let base = ctx.base_date(&panel)?;
    for variant in ctx.variants()? {
        let mut rows = Vec::new();
        for spec in ctx.portfolios()? {
            let (_, excess) = excess_series(&panel, spec, variant, base).map_err(classify)?;
            let descriptives = descriptive_stats(&excess).map_err(classify)?;
            let adf = adf_gls(&excess, DetrendSpec::ConstantTrend, None, LagCriterion::Mbic)
                .map_err(classify)?;
            rows.push(report::StatsRow {
                portfolio: spec.name().to_string(),
                descriptives,
                adf,
            });
        }
        ctx.write_output(&format!("stats_{}.csv", variant.name()), &report::stats_csv(&rows))?;
    }
    ctx.write_manifest("stats")
}

struct EstimateJob {
    window: String,
    portfolio: String,
    ri: Vec<f64>,
    rm: Vec<f64>,
    seed: u64,
}

fn estimate_windows(
    ctx: &Ctx,
    dates: &[NaiveDate],
) -> Vec<(String, usize, usize)> {
    let mut windows = vec![("full".to_string(), 0usize, dates.len())];
    if let Some(split) = ctx.cfg.estimator.split_date {
        let cut = dates.partition_point(|&d| d < split);
        windows.push(("pre".into(), 0, cut));
        windows.push(("post".into(), cut, dates.len()));
    }
    windows
}

fn run_estimate_jobs(
    ctx: &Ctx,
    tag: &str,
    jobs: Vec<EstimateJob>,
) -> CmdResult<(Vec<report::EstimateRow>, usize)> {
    let results: Vec<report::EstimateRow> = jobs
        .par_iter()
        .map(|job| {
            let cfg = ctx.estimator_config(job.seed);
            let fit = estimate_capm_arp_sv(&job.ri, &job.rm, &cfg).ok().map(|f| {
                report::EstimateCell {
                    alpha: f.alpha,
                    se_alpha: f.se_alpha,
                    beta: f.beta,
                    se_beta: f.se_beta,
                    p: f.p,
                    adj_r2: f.adj_r2,
                }
            });
            report::EstimateRow {
                window: job.window.clone(),
                portfolio: job.portfolio.clone(),
                fit,
            }
        })
        .collect();
    // optional diagnostics: rebuild the volatility-stage chain (same seed,
    // hence the same draws as inside the estimator) and dump it
    if ctx.cfg.estimator.dump_sv_draws && !ctx.cfg.estimator.constant_volatility {
        for job in &jobs {
            let Ok(ols) = marketlab::capm::fit_ols(&job.ri, &job.rm) else {
                continue;
            };
            let Ok(ar) = marketlab::capm::fit_ar_residuals(&ols.residuals, ctx.cfg.estimator.p_max)
            else {
                continue;
            };
            let mcmc = McmcConfig {
                burn_in: ctx.cfg.estimator.burn_in,
                draws: ctx.cfg.estimator.draws,
                seed: job.seed,
                ..McmcConfig::default()
            };
            if let Ok(fit) = marketlab::sv::fit_sv(&ar.eta_tilde, &mcmc) {
                ctx.write_output(
                    &format!("sv_draws_{tag}_{}_{}.csv", job.window, job.portfolio),
                    &report::sv_draws_csv(&fit),
                )?;
            }
        }
    }
    let failures = results.iter().filter(|r| r.fit.is_none()).count();
    Ok((results, failures))
}

pub fn cmd_estimate(ctx: &Ctx, returns_file: Option<&Path>) -> CmdResult<()> {
    let mut warnings = 0usize;
    let returns_path = returns_file.or(ctx.cfg.data.returns.as_deref());
    if let Some(path) = returns_path {
        let (dates, columns) = load_returns_table(path)?;
        let rm = columns
            .get("rm")
            .ok_or_else(|| CmdError::Input(format!("{} lacks an `rm` column", path.display())))?
            .clone();
        let mut jobs = Vec::new();
        for (window, lo, hi) in estimate_windows(ctx, &dates) {
            for (name, series) in &columns {
                if name == "rm" {
                    continue;
                }
                jobs.push(EstimateJob {
                    window: window.clone(),
                    portfolio: name.clone(),
                    ri: series[lo..hi].to_vec(),
                    rm: rm[lo..hi].to_vec(),
                    seed: derive_seed(ctx.seed, &["estimate", "returns", &window, name]),
                });
            }
        }
        let (rows, failures) = run_estimate_jobs(ctx, "returns", jobs)?;
        warnings += failures;
        ctx.write_output("estimates_returns.csv", &report::estimates_csv(&rows))?;
    } else {
        let panel = ctx.panel()?;
        let base = ctx.base_date(&panel)?;
        for variant in ctx.variants()? {
            let (dates, rm) =
                excess_series(&panel, PortfolioSpec::Market, variant, base).map_err(classify)?;
            let mut jobs = Vec::new();
            let mut na_rows = Vec::new();
            for spec in ctx.portfolios()? {
                if spec == PortfolioSpec::Market {
                    continue; // the market is the benchmark side
                }
                // estimate on the portfolio's own listing span
                let aligned = excess_series(&panel, spec, variant, base)
                    .ok()
                    .and_then(|(pdates, ri)| {
                        slice_onto(&dates, &rm, &pdates).map(|rm_p| (pdates, ri, rm_p))
                    });
                match aligned {
                    Some((pdates, ri, rm_p)) => {
                        for (window, lo, hi) in estimate_windows(ctx, &pdates) {
                            jobs.push(EstimateJob {
                                window: window.clone(),
                                portfolio: spec.name().to_string(),
                                ri: ri[lo..hi].to_vec(),
                                rm: rm_p[lo..hi].to_vec(),
                                seed: derive_seed(
                                    ctx.seed,
                                    &["estimate", variant.name(), &window, spec.name()],
                                ),
                            });
                        }
                    }
                    None => {
                        for (window, _, _) in estimate_windows(ctx, &dates) {
                            na_rows.push(report::EstimateRow {
                                window,
                                portfolio: spec.name().to_string(),
                                fit: None,
                            });
                        }
                    }
                }
            }
            let (mut rows, failures) = run_estimate_jobs(ctx, variant.name(), jobs)?;
            warnings += failures + na_rows.len();
            rows.extend(na_rows);
            rows.sort_by(|a, b| (&a.window, &a.portfolio).cmp(&(&b.window, &b.portfolio)));
            ctx.write_output(
                &format!("estimates_{}.csv", variant.name()),
                &report::estimates_csv(&rows),
            )?;
        }
    }
    if warnings > 0 {
        eprintln!("warning: {warnings} estimation cell(s) recorded as NA");
    }
    ctx.write_manifest("estimate")
}

fn load_returns_table(path: &Path) -> CmdResult<(Vec<NaiveDate>, BTreeMap<String, Vec<f64>>)> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| CmdError::Input(format!("cannot read {}: {e}", path.display())))?;
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| CmdError::Input(e.to_string()))?
        .iter()
        .map(|s| s.to_string())
        .collect();
    if headers.first().map(String::as_str) != Some("date") {
        return Err(CmdError::Input(format!(
            "{} must start with a `date` column",
            path.display()
        )));
    }
    let mut dates = Vec::new();
    let mut columns: BTreeMap<String, Vec<f64>> =
        headers[1..].iter().map(|h| (h.clone(), Vec::new())).collect();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CmdError::Input(e.to_string()))?;
        dates.push(
            rec[0]
                .parse()
                .map_err(|_| CmdError::Input(format!("bad date `{}`", &rec[0])))?,
        );
        for (i, h) in headers[1..].iter().enumerate() {
            let v: f64 = rec[i + 1]
                .parse()
                .map_err(|_| CmdError::Input(format!("bad value `{}`", &rec[i + 1])))?;
            columns.get_mut(h).unwrap().push(v);
        }
    }
    Ok((dates, columns))
}

fn load_events(path: &Path) -> CmdResult<Vec<EventSpec>> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| CmdError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut events = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CmdError::Input(e.to_string()))?;
        if rec.len() != 3 {
            return Err(CmdError::Input(format!(
                "{}: expected `date,name,type` rows",
                path.display()
            )));
        }
        events.push(EventSpec {
            event_date: rec[0]
                .parse()
                .map_err(|_| CmdError::Input(format!("bad event date `{}`", &rec[0])))?,
            name: rec[1].to_string(),
            event_type: rec[2]
                .parse::<EventType>()
                .map_err(CmdError::Input)?,
        });
    }
    Ok(events)
}

pub fn cmd_event(ctx: &Ctx) -> CmdResult<()> {
    let events_path = ctx
        .cfg
        .data
        .events
        .as_ref()
        .ok_or_else(|| CmdError::Input("config lacks [data].events".into()))?;
    let events = load_events(events_path)?;
    let panel = ctx.panel()?;
    let base = ctx.base_date(&panel)?;
    let window = WindowConfig {
        estimation_length: ctx.cfg.event_study.estimation_days,
        pre: ctx.cfg.event_study.pre_days,
        post: ctx.cfg.event_study.post_days,
        significance_alpha: ctx.alpha,
    };
    let mut warnings = 0usize;

    for variant in ctx.variants()? {
        let (dates, rm) =
            excess_series(&panel, PortfolioSpec::Market, variant, base).map_err(classify)?;
        // every non-market portfolio appears in the table; cells on spans
        // the market cannot cover come out as NA
        let mut portfolio_series: Vec<(String, Vec<NaiveDate>, Vec<f64>, Vec<f64>)> = Vec::new();
        let mut portfolio_names = Vec::new();
        for spec in ctx.portfolios()? {
            if spec == PortfolioSpec::Market {
                continue;
            }
            portfolio_names.push(spec.name().to_string());
            if let Ok((pdates, ri)) = excess_series(&panel, spec, variant, base) {
                if let Some(rm_p) = slice_onto(&dates, &rm, &pdates) {
                    portfolio_series.push((spec.name().to_string(), pdates, ri, rm_p));
                }
            }
        }

        // run all cells in parallel, keyed by (event, portfolio)
        let series_ref = &portfolio_series;
        let cells: Vec<((String, String), Result<marketlab::event::EventResult, CoreError>)> =
            events
                .par_iter()
                .flat_map(|ev| {
                    series_ref.par_iter().map(move |(pf, pdates, ri, rm_p)| {
                        let seed = derive_seed(
                            ctx.seed,
                            &["event", variant.name(), pf, &ev.event_date.to_string()],
                        );
                        let cfg = ctx.estimator_config(seed);
                        let res = run_event_study(pdates, ri, rm_p, ev, &window, &cfg);
                        ((ev.event_date.to_string(), pf.clone()), res)
                    })
                })
                .collect();
        let mut by_key = BTreeMap::new();
        for (key, res) in cells {
            by_key.insert(key, res);
        }

        let table = sign_table(&events, &portfolio_names, |ev, pf| {
            match by_key.get(&(ev.event_date.to_string(), pf.to_string())) {
                Some(Ok(res)) => Ok(res.clone()),
                Some(Err(_)) | None => Err(CoreError::DegenerateInput("cell failed".into())),
            }
        });
        warnings += table
            .cells
            .iter()
            .flatten()
            .filter(|c| c.flags.is_none())
            .count();
        ctx.write_output(
            &format!("sign_table_{}.csv", variant.name()),
            &report::sign_table_csv(&table),
        )?;

        for ((date, pf), res) in &by_key {
            if let Ok(res) = res {
                let stem = format!("event_{}_{}_{}", variant.name(), pf, date);
                ctx.write_output(&format!("{stem}.csv"), &report::event_detail_csv(res))?;
                if ctx.cfg.event_study.plots {
                    let title = format!("{} CAR, {} ({})", pf, res.event.name, variant.name());
                    ctx.write_output(&format!("{stem}.svg"), &svg::car_plot(res, &title))?;
                }
            }
        }
    }
    if warnings > 0 {
        eprintln!("warning: {warnings} event cell(s) recorded as NA");
    }
    ctx.write_manifest("event")
}

fn model_params(ctx: &Ctx) -> CmdResult<(marketlab::model::ModelParams, ModelConfigFile)> {
    let file = match &ctx.cfg.model.config {
        Some(path) => ModelConfigFile::load(path).map_err(CmdError::Input)?,
        None => ModelConfigFile::default(),
    };
    let params = file.to_params();
    params.validate().map_err(classify)?;
    Ok((params, file))
}

pub fn cmd_model_simulate(ctx: &Ctx, extended: bool) -> CmdResult<()> {
    let (params, _) = model_params(ctx)?;
    let mode = if extended {
        DecompositionMode::Extended
    } else {
        DecompositionMode::Baseline
    };
    let seed = derive_seed(ctx.seed, &["model", "simulate"]);
    let path = simulate_equilibrium(&params, seed, mode).map_err(classify)?;

    let shock_free = params.states.sd_a == 0.0
        && params.states.sd_w == 0.0
        && params.states.sd_c == 0.0
        && params.states.sd_r == 0.0
        && params.states.sd_e == 0.0
        && params.supply_sd.iter().all(|&s| s == 0.0);
    if shock_free {
        eprintln!("warning: all shock SDs are zero; the simulated path is deterministic");
    }

    let mut out = String::from("t,group,price,dividend,wedge,investment,capital,market_cap,share\n");
    for t in 0..params.horizon {
        for g in Group::ALL {
            let i = g.index();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                t + 1,
                g.name(),
                path.prices[t][i],
                path.dividends[t][i],
                path.wedges[t][i],
                path.investment[t][i],
                path.capital[t][i],
                path.market_cap[t][i],
                path.shares[t][i]
            ));
        }
    }
    ctx.write_output("equilibrium.csv", &out)?;
    ctx.write_manifest("model simulate")
}

pub fn cmd_model_check_props(ctx: &Ctx) -> CmdResult<()> {
    let draws = ctx.cfg.model.sweep_draws;
    let seed = |tag: &str| derive_seed(ctx.seed, &["model", "props", tag]);
    let reports: Vec<SweepReport> = vec![
        sweep_prop1(seed("prop1"), draws),
        sweep_prop2(seed("prop2-escalation"), draws, Prop2Variant::Escalation),
        sweep_prop2(seed("prop2-setback"), draws, Prop2Variant::Setback),
        sweep_prop4(seed("prop4"), draws),
        sweep_prop5(seed("prop5"), draws),
    ];
    let mut total_violations = 0usize;
    for rep in &reports {
        ctx.write_output(&format!("sweep_{}.csv", rep.name), &report::sweep_csv(rep))?;
        let v = rep.violations();
        total_violations += v;
        println!(
            "{}: draws={} premise_hits={} violations={}",
            rep.name,
            rep.rows.len(),
            rep.premise_count(),
            v
        );
    }
    println!("violations: {total_violations}");
    ctx.write_manifest("model check-props")?;
    if total_violations > 0 {
        return Err(CmdError::Numerical(format!(
            "{total_violations} proposition violation(s)"
        )));
    }
    Ok(())
}

pub fn cmd_model_synth(ctx: &Ctx) -> CmdResult<()> {
    let (params, file) = model_params(ctx)?;
    let synth = &file.synth;
    let seed = derive_seed(ctx.seed, &["model", "synth"]);

    let start: NaiveDate = "1930-01-04".parse().unwrap();
    let mut out = String::from("date,rm,zm,zn,nm,nn\n");
    let truth;

    match synth.mode.as_str() {
        "dgp" => {
            let dgps: [CapmSvDgp; 4] = std::array::from_fn(|gi| CapmSvDgp {
                alpha: synth.alpha[gi],
                beta: synth.beta[gi],
                rho: synth.rho.clone(),
                sv: synth.sv_params(),
                market_mean: synth.market_mean,
                market_sd: synth.market_sd,
                t_len: synth.t_len,
            });
            let (columns, rm) = generate_capm_sv_panel(&dgps, seed);
            for t in 0..synth.t_len {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    start + chrono::Days::new(t as u64),
                    rm[t],
                    columns[0][t],
                    columns[1][t],
                    columns[2][t],
                    columns[3][t]
                ));
            }
            truth = serde_json::json!({
                "mode": "dgp",
                "seed": seed,
                "t_len": synth.t_len,
                "alpha": synth.alpha,
                "beta": synth.beta,
                "rho": synth.rho,
                "sv": {"mu": synth.sv_mu, "phi": synth.sv_phi, "sigma_tau": synth.sv_sigma_tau},
            });
        }
        "model" => {
            let panel = generate_model_panel(&params, seed, DecompositionMode::Baseline)
                .map_err(classify)?;
            let n = panel.market_excess.len();
            for t in 0..n {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    start + chrono::Days::new(t as u64),
                    panel.market_excess[t],
                    panel.group_excess[0][t],
                    panel.group_excess[1][t],
                    panel.group_excess[2][t],
                    panel.group_excess[3][t]
                ));
            }
            truth = serde_json::json!({
                "mode": "model",
                "seed": seed,
                "horizon": params.horizon,
            });
        }
        other => {
            return Err(CmdError::Input(format!(
                "unknown synth mode `{other}` (expected dgp|model)"
            )))
        }
    }

    ctx.write_output("synth_returns.csv", &out)?;
    ctx.write_output(
        "synth_truth.json",
        &(serde_json::to_string_pretty(&truth).expect("truth serializes") + "\n"),
    )?;
    ctx.write_manifest("model synth")
}
