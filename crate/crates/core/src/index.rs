//! Capitalization-weighted index construction.
//!
//! Three variants are built from the same panel:
//!
//! - PI:  observed closes only; ex-rights price drops hit the index.
//! - API: PI with ex-rights effects neutralized via the theoretical ex price
//!   folded into the divisor.
//! - TRI: API with cash dividends reinvested at the ex-date close.
//!
//! Levels are chain-linked day by day over the basket of securities priced on
//! both days, so listings and delistings adjust the divisor at the next open
//! and never create a return jump.

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::panel::{ActionKind, PanelDataset, SecuritySeries};

/// Index flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexVariant {
    Pi,
    Api,
    Tri,
}

impl IndexVariant {
    pub const ALL: [IndexVariant; 3] = [IndexVariant::Pi, IndexVariant::Api, IndexVariant::Tri];

    pub fn name(self) -> &'static str {
        match self {
            IndexVariant::Pi => "pi",
            IndexVariant::Api => "api",
            IndexVariant::Tri => "tri",
        }
    }
}

impl std::str::FromStr for IndexVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pi" => Ok(IndexVariant::Pi),
            "api" => Ok(IndexVariant::Api),
            "tri" => Ok(IndexVariant::Tri),
            other => Err(format!("unknown index variant `{other}`")),
        }
    }
}

/// Portfolio membership predicate over the 2x2 flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PortfolioSpec {
    /// Every listed security.
    Market,
    /// One cell of the 2x2 sort; the four cells partition the market.
    Group(Group),
}

impl PortfolioSpec {
    pub const ALL: [PortfolioSpec; 5] = [
        PortfolioSpec::Market,
        PortfolioSpec::Group(Group::Zm),
        PortfolioSpec::Group(Group::Zn),
        PortfolioSpec::Group(Group::Nm),
        PortfolioSpec::Group(Group::Nn),
    ];

    pub fn name(self) -> &'static str {
        match self {
            PortfolioSpec::Market => "market",
            PortfolioSpec::Group(g) => g.name(),
        }
    }

    pub fn matches(self, security: &SecuritySeries) -> bool {
        match self {
            PortfolioSpec::Market => true,
            PortfolioSpec::Group(g) => {
                security.zaibatsu == g.zaibatsu() && security.military == g.military()
            }
        }
    }
}

impl std::str::FromStr for PortfolioSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "market" {
            return Ok(PortfolioSpec::Market);
        }
        s.parse::<Group>().map(PortfolioSpec::Group)
    }
}

/// Divisor-adjusted index levels for one (portfolio, variant) pair.
#[derive(Debug, Clone)]
pub struct IndexSeries {
    pub variant: IndexVariant,
    pub portfolio: PortfolioSpec,
    pub base_date: NaiveDate,
    dates: Vec<NaiveDate>,
    levels: Vec<f64>,
    divisors: Vec<f64>,
}

impl IndexSeries {
    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn divisors(&self) -> &[f64] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn level_on(&self, date: NaiveDate) -> Option<f64> {
        self.dates
            .binary_search(&date)
            .ok()
            .map(|i| self.levels[i])
    }
}

/// Simple or excess daily returns derived from an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReturnFlavor {
    Raw,
    Excess,
}

#[derive(Debug, Clone)]
pub struct ReturnSeries {
    pub flavor: ReturnFlavor,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(flavor: ReturnFlavor, dates: Vec<NaiveDate>, values: Vec<f64>) -> Self {
        assert_eq!(dates.len(), values.len());
        Self {
            flavor,
            dates,
            values,
        }
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Per-date market-capitalization shares of the four sub-portfolios,
/// in `Group::ALL` order.
#[derive(Debug, Clone)]
pub struct CapShareSeries {
    dates: Vec<NaiveDate>,
    shares: Vec<[f64; 4]>,
}

impl CapShareSeries {
    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn shares(&self) -> &[[f64; 4]] {
        &self.shares
    }
}

/// Per-(date, security) aggregation of the corporate actions the index link
/// needs: rights terms, allocation value, and dividend cash.
#[derive(Debug, Clone, Copy, Default)]
struct ActionEffect {
    ratio_sum: f64,
    rights_cash: f64,
    alloc_value: f64,
    dividend_cash: f64,
}

type ActionTable = std::collections::HashMap<String, std::collections::HashMap<NaiveDate, ActionEffect>>;

fn action_table(panel: &PanelDataset) -> ActionTable {
    let mut table = ActionTable::new();
    for a in &panel.actions {
        let e = table
            .entry(a.security_id.clone())
            .or_default()
            .entry(a.ex_date)
            .or_default();
        match a.kind {
            ActionKind::RightsIssue => {
                e.ratio_sum += a.new_shares_per_old;
                e.rights_cash += a.new_shares_per_old * a.subscription_price;
            }
            ActionKind::ShareAllocation => e.alloc_value += a.cash_amount,
            ActionKind::Dividend => e.dividend_cash += a.cash_amount,
        }
    }
    table
}

/// Reference price for the day-over-day link of one security: the previous
/// close, action-adjusted for API/TRI.
fn reference_price(
    prev_close: f64,
    security_id: &str,
    date: NaiveDate,
    effect: Option<&ActionEffect>,
    variant: IndexVariant,
) -> Result<f64> {
    let Some(e) = effect else {
        return Ok(prev_close);
    };
    if variant == IndexVariant::Pi {
        return Ok(prev_close);
    }
    let adjusted = (prev_close + e.rights_cash) / (1.0 + e.ratio_sum) - e.alloc_value;
    if adjusted <= 0.0 {
        return Err(Error::InvalidValue {
            security_id: security_id.to_string(),
            date: date.to_string(),
            message: format!("action-adjusted reference price {adjusted} not positive"),
        });
    }
    Ok(adjusted)
}

/// Build a capitalization-weighted index level series, rebased to 100 on
/// `base_date`.
pub fn build_index(
    panel: &PanelDataset,
    spec: PortfolioSpec,
    variant: IndexVariant,
    base_date: NaiveDate,
) -> Result<IndexSeries> {
    let members: Vec<&SecuritySeries> = panel.securities().filter(|s| spec.matches(s)).collect();

    let listed_on = |date: NaiveDate| members.iter().filter(move |s| s.is_listed(date));

    if listed_on(base_date).next().is_none() {
        return Err(Error::EmptyConstituents {
            portfolio: spec.name().to_string(),
            date: base_date.to_string(),
        });
    }

    // span = the calendar stretch on which the portfolio exists
    let all_dates = panel.calendar.dates();
    let first = all_dates
        .iter()
        .position(|&d| listed_on(d).next().is_some());
    let last = all_dates.iter().rposition(|&d| listed_on(d).next().is_some());
    let (first, last) = match (first, last) {
        (Some(f), Some(l)) => (f, l),
        _ => {
            return Err(Error::EmptyConstituents {
                portfolio: spec.name().to_string(),
                date: "<span>".to_string(),
            })
        }
    };
    let span = &all_dates[first..=last];

    let mut dates = Vec::with_capacity(span.len());
    let mut levels = Vec::with_capacity(span.len());
    let mut divisors = Vec::with_capacity(span.len());

    let market_value = |date: NaiveDate| -> f64 {
        listed_on(date)
            .map(|s| {
                let o = s.observation(date).unwrap();
                o.price * o.shares_outstanding
            })
            .sum()
    };

    let actions = action_table(panel);

    let mut level = 100.0;
    for (k, &date) in span.iter().enumerate() {
        if k > 0 {
            let prev_date = span[k - 1];
            let mut num = 0.0;
            let mut den = 0.0;
            for s in &members {
                let (Some(prev), Some(cur)) = (s.observation(prev_date), s.observation(date))
                else {
                    continue;
                };
                let effect = actions.get(s.id.as_str()).and_then(|m| m.get(&date));
                let reference = reference_price(prev.price, &s.id, date, effect, variant)?;
                let mut value = cur.price;
                if variant == IndexVariant::Tri {
                    value += effect.map_or(0.0, |e| e.dividend_cash);
                }
                num += value * cur.shares_outstanding;
                den += reference * cur.shares_outstanding;
            }
            if den <= 0.0 {
                return Err(Error::EmptyConstituents {
                    portfolio: spec.name().to_string(),
                    date: date.to_string(),
                });
            }
            level *= num / den;
        }
        dates.push(date);
        levels.push(level);
        divisors.push(market_value(date) / level);
    }

    // rebase so level(base_date) = 100
    let base_idx = dates
        .binary_search(&base_date)
        .map_err(|_| Error::EmptyConstituents {
            portfolio: spec.name().to_string(),
            date: base_date.to_string(),
        })?;
    let scale = 100.0 / levels[base_idx];
    for (lv, dv) in levels.iter_mut().zip(divisors.iter_mut()) {
        *lv *= scale;
        *dv /= scale;
    }

    Ok(IndexSeries {
        variant,
        portfolio: spec,
        base_date,
        dates,
        levels,
        divisors,
    })
}

/// Daily simple returns of an index: `r_t = level_t / level_{t-1} - 1`.
pub fn compute_returns(index: &IndexSeries) -> Result<ReturnSeries> {
    if index.len() < 2 {
        return Err(Error::SeriesTooShort {
            need: 2,
            got: index.len(),
        });
    }
    let dates = index.dates()[1..].to_vec();
    let values = index
        .levels()
        .windows(2)
        .map(|w| w[1] / w[0] - 1.0)
        .collect();
    Ok(ReturnSeries::new(ReturnFlavor::Raw, dates, values))
}

/// Excess returns over the daily call rate.
pub fn compute_excess_returns(
    returns: &ReturnSeries,
    call_rates: &crate::panel::CallRateSeries,
) -> Result<ReturnSeries> {
    let mut values = Vec::with_capacity(returns.len());
    for (date, r) in returns.dates().iter().zip(returns.values()) {
        let rf = call_rates.rate(*date).ok_or_else(|| Error::MissingRate {
            date: date.to_string(),
        })?;
        values.push(r - rf);
    }
    Ok(ReturnSeries::new(
        ReturnFlavor::Excess,
        returns.dates().to_vec(),
        values,
    ))
}

/// Market-capitalization share of each sub-portfolio, per date.
pub fn compute_cap_shares(panel: &PanelDataset) -> Result<CapShareSeries> {
    let mut dates = Vec::new();
    let mut shares = Vec::new();
    for &date in panel.calendar.dates() {
        let mut caps = [0.0f64; 4];
        let mut total = 0.0;
        for s in panel.securities() {
            if let Some(o) = s.observation(date) {
                let mv = o.price * o.shares_outstanding;
                caps[Group::from_flags(s.zaibatsu, s.military).index()] += mv;
                total += mv;
            }
        }
        if total <= 0.0 {
            return Err(Error::EmptyConstituents {
                portfolio: "market".to_string(),
                date: date.to_string(),
            });
        }
        for c in &mut caps {
            *c /= total;
        }
        dates.push(date);
        shares.push(caps);
    }
    Ok(CapShareSeries { dates, shares })
}
