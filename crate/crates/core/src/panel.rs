//! Daily panel data: prices, shares outstanding, corporate actions, and the
//! overnight call rate, all validated against a shared trading calendar.
//!
//! CSV contracts (UTF-8, header row required, dates `YYYY-MM-DD`):
//!
//! - `prices.csv`:  `security_id,date,price,shares_outstanding,zaibatsu,military`
//! - `actions.csv`: `security_id,ex_date,kind,cash_amount,new_shares_per_old,subscription_price`
//! - `rates.csv`:   `date,daily_rate` (decimal return per trading day)
//!
//! Missing prices inside a listing span are rejected, never forward-filled.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;

use crate::calendar::TradingCalendar;
use crate::error::{Error, Result};

/// One observed (price, shares) pair for a security on a trading date.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub price: f64,
    pub shares_outstanding: f64,
}

/// Full daily series for one listed security, with its group flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SecuritySeries {
    pub id: String,
    pub zaibatsu: bool,
    pub military: bool,
    observations: BTreeMap<NaiveDate, Observation>,
}

impl SecuritySeries {
    pub fn new(
        id: impl Into<String>,
        zaibatsu: bool,
        military: bool,
        observations: impl IntoIterator<Item = (NaiveDate, Observation)>,
    ) -> Self {
        Self {
            id: id.into(),
            zaibatsu,
            military,
            observations: observations.into_iter().collect(),
        }
    }

    pub fn observation(&self, date: NaiveDate) -> Option<Observation> {
        self.observations.get(&date).copied()
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.observations.keys().next().copied()
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.observations.keys().next_back().copied()
    }

    pub fn observations(&self) -> impl Iterator<Item = (NaiveDate, Observation)> + '_ {
        self.observations.iter().map(|(d, o)| (*d, *o))
    }

    pub fn is_listed(&self, date: NaiveDate) -> bool {
        self.observations.contains_key(&date)
    }
}

/// Corporate action kinds distinguished by the index engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    /// Cash dividend per share; picked up by the total-return index only.
    Dividend,
    /// Rights issue: `new_shares_per_old` new shares at `subscription_price`.
    RightsIssue,
    /// Allocation of shares in another company; `cash_amount` carries the
    /// appraised net value per old share.
    ShareAllocation,
}

impl ActionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ActionKind::Dividend => "dividend",
            ActionKind::RightsIssue => "rights_issue",
            ActionKind::ShareAllocation => "share_allocation",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "dividend" => Some(ActionKind::Dividend),
            "rights_issue" => Some(ActionKind::RightsIssue),
            "share_allocation" => Some(ActionKind::ShareAllocation),
            _ => None,
        }
    }
}

/// One corporate action, effective at the ex-date open.
#[derive(Debug, Clone, PartialEq)]
pub struct CorporateActionEvent {
    pub security_id: String,
    pub ex_date: NaiveDate,
    pub kind: ActionKind,
    pub cash_amount: f64,
    pub new_shares_per_old: f64,
    pub subscription_price: f64,
}

/// Daily risk-free rate series (decimal return per trading day).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CallRateSeries {
    rates: BTreeMap<NaiveDate, f64>,
}

impl CallRateSeries {
    pub fn new(rates: BTreeMap<NaiveDate, f64>) -> Self {
        Self { rates }
    }

    pub fn rate(&self, date: NaiveDate) -> Option<f64> {
        self.rates.get(&date).copied()
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, f64)> + '_ {
        self.rates.iter().map(|(d, r)| (*d, *r))
    }
}

/// Validated panel: securities, actions, and call rates on one calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    pub calendar: TradingCalendar,
    securities: BTreeMap<String, SecuritySeries>,
    pub actions: Vec<CorporateActionEvent>,
    pub call_rates: CallRateSeries,
}

impl PanelDataset {
    /// Assemble a panel from parts, enforcing all invariants.
    pub fn new(
        calendar: TradingCalendar,
        securities: Vec<SecuritySeries>,
        actions: Vec<CorporateActionEvent>,
        call_rates: CallRateSeries,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for s in securities {
            if map.insert(s.id.clone(), s).is_some() {
                return Err(Error::InvalidConfig("duplicate security series".into()));
            }
        }
        let panel = Self {
            calendar,
            securities: map,
            actions,
            call_rates,
        };
        panel.validate()?;
        Ok(panel)
    }

    pub fn securities(&self) -> impl Iterator<Item = &SecuritySeries> {
        self.securities.values()
    }

    pub fn security(&self, id: &str) -> Option<&SecuritySeries> {
        self.securities.get(id)
    }

    pub fn n_securities(&self) -> usize {
        self.securities.len()
    }

    /// Actions with the given ex-date, in input order.
    pub fn actions_on(&self, date: NaiveDate) -> impl Iterator<Item = &CorporateActionEvent> {
        self.actions.iter().filter(move |a| a.ex_date == date)
    }

    fn validate(&self) -> Result<()> {
        for s in self.securities.values() {
            // every observation date on the calendar, contiguous over the span
            let mut prev_idx: Option<usize> = None;
            for (date, obs) in s.observations() {
                let idx = self
                    .calendar
                    .index_of(date)
                    .ok_or_else(|| Error::CalendarGap {
                        date: date.to_string(),
                    })?;
                if let Some(p) = prev_idx {
                    if idx != p + 1 {
                        return Err(Error::SeriesGap {
                            security_id: s.id.clone(),
                            date: self.calendar.dates()[p + 1].to_string(),
                        });
                    }
                }
                prev_idx = Some(idx);
                if !(obs.price > 0.0) || !obs.price.is_finite() {
                    return Err(Error::InvalidValue {
                        security_id: s.id.clone(),
                        date: date.to_string(),
                        message: format!("non-positive price {}", obs.price),
                    });
                }
                if !(obs.shares_outstanding > 0.0) || !obs.shares_outstanding.is_finite() {
                    return Err(Error::InvalidValue {
                        security_id: s.id.clone(),
                        date: date.to_string(),
                        message: format!("non-positive share count {}", obs.shares_outstanding),
                    });
                }
            }
        }

        for a in &self.actions {
            validate_action_shape(a)?;
            let sec = self
                .securities
                .get(&a.security_id)
                .ok_or_else(|| Error::UnknownActionTarget {
                    security_id: a.security_id.clone(),
                    date: a.ex_date.to_string(),
                })?;
            if !sec.is_listed(a.ex_date) {
                return Err(Error::UnknownActionTarget {
                    security_id: a.security_id.clone(),
                    date: a.ex_date.to_string(),
                });
            }
        }

        for (date, rate) in self.call_rates.iter() {
            if !self.calendar.contains(date) {
                return Err(Error::CalendarGap {
                    date: date.to_string(),
                });
            }
            if !rate.is_finite() {
                return Err(Error::InvalidValue {
                    security_id: "<call-rate>".into(),
                    date: date.to_string(),
                    message: "non-finite rate".into(),
                });
            }
        }
        Ok(())
    }
}

fn validate_action_shape(a: &CorporateActionEvent) -> Result<()> {
    let bad = |message: String| Error::InvalidValue {
        security_id: a.security_id.clone(),
        date: a.ex_date.to_string(),
        message,
    };
    if a.cash_amount < 0.0 || a.new_shares_per_old < 0.0 || a.subscription_price < 0.0 {
        return Err(bad("negative action field".into()));
    }
    match a.kind {
        ActionKind::Dividend => {
            if a.new_shares_per_old != 0.0 {
                return Err(bad("dividend carries share ratio".into()));
            }
        }
        ActionKind::RightsIssue => {
            if a.new_shares_per_old <= 0.0 {
                return Err(bad("rights issue without share ratio".into()));
            }
        }
        ActionKind::ShareAllocation => {}
    }
    Ok(())
}

fn parse_date(s: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
}

fn parse_flag(s: &str) -> Option<bool> {
    match s {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

struct RowReader {
    file: String,
    reader: csv::Reader<std::fs::File>,
}

impl RowReader {
    fn open(path: &Path, expected_header: &[&str]) -> Result<Self> {
        let file = path.display().to_string();
        let f = std::fs::File::open(path).map_err(|source| Error::Io {
            path: file.clone(),
            source,
        })?;
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(f);
        let headers = reader.headers().map_err(|source| Error::Csv {
            file: file.clone(),
            source,
        })?;
        let got: Vec<&str> = headers.iter().collect();
        if got != expected_header {
            return Err(Error::MalformedRow {
                file,
                line: 1,
                message: format!("expected header {expected_header:?}, got {got:?}"),
            });
        }
        Ok(Self { file, reader })
    }

    fn rows(&mut self) -> Result<Vec<(u64, csv::StringRecord)>> {
        let mut out = Vec::new();
        for rec in self.reader.records() {
            let rec = rec.map_err(|source| Error::Csv {
                file: self.file.clone(),
                source,
            })?;
            let line = rec.position().map_or(0, |p| p.line());
            out.push((line, rec));
        }
        Ok(out)
    }

    fn malformed(&self, line: u64, message: impl Into<String>) -> Error {
        Error::MalformedRow {
            file: self.file.clone(),
            line,
            message: message.into(),
        }
    }
}

/// Load and validate a panel from the three CSV files.
pub fn load_panel(
    prices_path: &Path,
    actions_path: &Path,
    rates_path: &Path,
) -> Result<PanelDataset> {
    let mut prices = RowReader::open(
        prices_path,
        &[
            "security_id",
            "date",
            "price",
            "shares_outstanding",
            "zaibatsu",
            "military",
        ],
    )?;

    let mut securities: BTreeMap<String, SecuritySeries> = BTreeMap::new();
    let mut dates: Vec<NaiveDate> = Vec::new();
    for (line, rec) in prices.rows()? {
        if rec.len() != 6 {
            return Err(prices.malformed(line, format!("expected 6 fields, got {}", rec.len())));
        }
        let id = rec[0].to_string();
        let date =
            parse_date(&rec[1]).ok_or_else(|| prices.malformed(line, "unparseable date"))?;
        let price: f64 = rec[2]
            .parse()
            .map_err(|_| prices.malformed(line, "unparseable price"))?;
        let shares: f64 = rec[3]
            .parse()
            .map_err(|_| prices.malformed(line, "unparseable share count"))?;
        let zaibatsu =
            parse_flag(&rec[4]).ok_or_else(|| prices.malformed(line, "zaibatsu flag not 0/1"))?;
        let military =
            parse_flag(&rec[5]).ok_or_else(|| prices.malformed(line, "military flag not 0/1"))?;

        if !(price > 0.0) || !price.is_finite() {
            return Err(Error::InvalidValue {
                security_id: id,
                date: date.to_string(),
                message: format!("non-positive price {price}"),
            });
        }
        if !(shares > 0.0) || !shares.is_finite() {
            return Err(Error::InvalidValue {
                security_id: id,
                date: date.to_string(),
                message: format!("non-positive share count {shares}"),
            });
        }

        let entry = securities.entry(id.clone()).or_insert_with(|| {
            SecuritySeries::new(id.clone(), zaibatsu, military, std::iter::empty())
        });
        if entry.zaibatsu != zaibatsu || entry.military != military {
            return Err(Error::InvalidValue {
                security_id: id,
                date: date.to_string(),
                message: "group flags change over time".into(),
            });
        }
        let obs = Observation {
            price,
            shares_outstanding: shares,
        };
        if entry.observations.insert(date, obs).is_some() {
            return Err(Error::DuplicateRecord {
                security_id: id,
                date: date.to_string(),
            });
        }
        dates.push(date);
    }

    let mut actions_rdr = RowReader::open(
        actions_path,
        &[
            "security_id",
            "ex_date",
            "kind",
            "cash_amount",
            "new_shares_per_old",
            "subscription_price",
        ],
    )?;
    let mut actions = Vec::new();
    for (line, rec) in actions_rdr.rows()? {
        if rec.len() != 6 {
            return Err(
                actions_rdr.malformed(line, format!("expected 6 fields, got {}", rec.len()))
            );
        }
        let kind = ActionKind::parse(&rec[2])
            .ok_or_else(|| actions_rdr.malformed(line, format!("unknown action kind `{}`", &rec[2])))?;
        let action = CorporateActionEvent {
            security_id: rec[0].to_string(),
            ex_date: parse_date(&rec[1])
                .ok_or_else(|| actions_rdr.malformed(line, "unparseable ex_date"))?,
            kind,
            cash_amount: rec[3]
                .parse()
                .map_err(|_| actions_rdr.malformed(line, "unparseable cash_amount"))?,
            new_shares_per_old: rec[4]
                .parse()
                .map_err(|_| actions_rdr.malformed(line, "unparseable new_shares_per_old"))?,
            subscription_price: rec[5]
                .parse()
                .map_err(|_| actions_rdr.malformed(line, "unparseable subscription_price"))?,
        };
        actions.push(action);
    }

    let mut rates_rdr = RowReader::open(rates_path, &["date", "daily_rate"])?;
    let mut rates = BTreeMap::new();
    for (line, rec) in rates_rdr.rows()? {
        if rec.len() != 2 {
            return Err(rates_rdr.malformed(line, format!("expected 2 fields, got {}", rec.len())));
        }
        let date =
            parse_date(&rec[0]).ok_or_else(|| rates_rdr.malformed(line, "unparseable date"))?;
        let rate: f64 = rec[1]
            .parse()
            .map_err(|_| rates_rdr.malformed(line, "unparseable rate"))?;
        if rates.insert(date, rate).is_some() {
            return Err(Error::DuplicateRecord {
                security_id: "<call-rate>".into(),
                date: date.to_string(),
            });
        }
    }

    // the trading calendar covers every date carrying a price or a rate
    dates.extend(rates.keys().copied());
    let calendar = TradingCalendar::from_dates(dates);

    PanelDataset::new(
        calendar,
        securities.into_values().collect(),
        actions,
        CallRateSeries::new(rates),
    )
}

/// Write a panel back to the three CSV files (canonical row order:
/// security id, then date).
pub fn save_panel(
    panel: &PanelDataset,
    prices_path: &Path,
    actions_path: &Path,
    rates_path: &Path,
) -> Result<()> {
    let open = |p: &Path| -> Result<std::io::BufWriter<std::fs::File>> {
        Ok(std::io::BufWriter::new(std::fs::File::create(p).map_err(
            |source| Error::Io {
                path: p.display().to_string(),
                source,
            },
        )?))
    };
    let io_err = |p: &Path, source: std::io::Error| Error::Io {
        path: p.display().to_string(),
        source,
    };

    let mut w = open(prices_path)?;
    writeln!(w, "security_id,date,price,shares_outstanding,zaibatsu,military")
        .map_err(|e| io_err(prices_path, e))?;
    for s in panel.securities() {
        for (date, obs) in s.observations() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                s.id,
                date,
                obs.price,
                obs.shares_outstanding,
                s.zaibatsu as u8,
                s.military as u8
            )
            .map_err(|e| io_err(prices_path, e))?;
        }
    }

    let mut w = open(actions_path)?;
    writeln!(
        w,
        "security_id,ex_date,kind,cash_amount,new_shares_per_old,subscription_price"
    )
    .map_err(|e| io_err(actions_path, e))?;
    for a in &panel.actions {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            a.security_id,
            a.ex_date,
            a.kind.as_str(),
            a.cash_amount,
            a.new_shares_per_old,
            a.subscription_price
        )
        .map_err(|e| io_err(actions_path, e))?;
    }

    let mut w = open(rates_path)?;
    writeln!(w, "date,daily_rate").map_err(|e| io_err(rates_path, e))?;
    for (date, rate) in panel.call_rates.iter() {
        writeln!(w, "{date},{rate}").map_err(|e| io_err(rates_path, e))?;
    }
    Ok(())
}

/// Re-index a panel onto a (super)calendar. Listing gaps before/after a
/// security's span stay absent; nothing is interpolated.
pub fn align_to_calendar(panel: &PanelDataset, calendar: &TradingCalendar) -> Result<PanelDataset> {
    for date in panel.calendar.dates() {
        let any_priced = panel.securities().any(|s| s.is_listed(*date));
        if any_priced && !calendar.contains(*date) {
            return Err(Error::CalendarGap {
                date: date.to_string(),
            });
        }
    }
    PanelDataset::new(
        calendar.clone(),
        panel.securities().cloned().collect(),
        panel.actions.clone(),
        panel.call_rates.clone(),
    )
}
