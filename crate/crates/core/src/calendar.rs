//! Trading calendar: the ordered set of dates all series are indexed on.

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// Strictly increasing list of trading dates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradingCalendar {
    dates: Vec<NaiveDate>,
}

impl TradingCalendar {
    /// Build a calendar from dates that must already be strictly increasing.
    pub fn from_sorted(dates: Vec<NaiveDate>) -> Result<Self> {
        for w in dates.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidConfig(format!(
                    "calendar dates not strictly increasing at {}",
                    w[1]
                )));
            }
        }
        Ok(Self { dates })
    }

    /// Build a calendar from arbitrary dates, sorting and deduplicating.
    pub fn from_dates(mut dates: Vec<NaiveDate>) -> Self {
        dates.sort_unstable();
        dates.dedup();
        Self { dates }
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.index_of(date).is_some()
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        self.dates.binary_search(&date).ok()
    }

    /// First trading date on or after `date`. Events falling on non-trading
    /// days map forward with this.
    pub fn on_or_after(&self, date: NaiveDate) -> Option<NaiveDate> {
        match self.dates.binary_search(&date) {
            Ok(i) => Some(self.dates[i]),
            Err(i) => self.dates.get(i).copied(),
        }
    }

    /// True when `other`'s dates are a subset of this calendar.
    pub fn covers(&self, other: &TradingCalendar) -> bool {
        other.dates.iter().all(|&d| self.contains(d))
    }
}
