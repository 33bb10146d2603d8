use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatePrecision {
    Year,
    Month,
    Day,
}

/// A calendar date in the `YYYY`, `YYYY-MM` or `YYYY-MM-DD` profile of ISO 8601.
///
/// Ordering compares the earliest day covered by each date, so `2009`
/// sorts before `2009-01-01` only through the `raw` tie-break.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CalendarDate {
    precision: DatePrecision,
    year: i32,
    month: Option<u8>,
    day: Option<u8>,
    raw: String,
}

impl CalendarDate {
    pub fn parse(input: &str) -> Result<Self, ModelError> {
        let raw = input.trim();
        let bad = || ModelError::InvalidDate(raw.to_string());
        let mut parts = raw.split('-');
        let year_part = parts.next().ok_or_else(bad)?;
        if year_part.len() != 4 || !year_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let year: i32 = year_part.parse().map_err(|_| bad())?;
        let mut two_digits = |max: u8| -> Result<Option<u8>, ModelError> {
            match parts.next() {
                None => Ok(None),
                Some(p) if p.len() == 2 && p.bytes().all(|b| b.is_ascii_digit()) => {
                    let v: u8 = p.parse().map_err(|_| bad())?;
                    if v == 0 || v > max {
                        Err(bad())
                    } else {
                        Ok(Some(v))
                    }
                }
                Some(_) => Err(bad()),
            }
        };
        let month = two_digits(12)?;
        let day = two_digits(31)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        if let (Some(m), Some(d)) = (month, day)
            && d > days_in_month(year, m)
        {
            return Err(bad());
        }
        let precision = match (month, day) {
            (None, _) => DatePrecision::Year,
            (Some(_), None) => DatePrecision::Month,
            (Some(_), Some(_)) => DatePrecision::Day,
        };
        Ok(CalendarDate {
            precision,
            year,
            month,
            day,
            raw: raw.to_string(),
        })
    }

    pub fn ymd(year: i32, month: u8, day: u8) -> Result<Self, ModelError> {
        Self::parse(&format!("{year:04}-{month:02}-{day:02}"))
    }

    pub fn year_only(year: i32) -> Result<Self, ModelError> {
        Self::parse(&format!("{year:04}"))
    }

    pub fn precision(&self) -> DatePrecision {
        self.precision
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> Option<u8> {
        self.month
    }

    pub fn day(&self) -> Option<u8> {
        self.day
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    /// First day covered by this date as `(year, month, day)`.
    pub fn first_day(&self) -> (i32, u8, u8) {
        (self.year, self.month.unwrap_or(1), self.day.unwrap_or(1))
    }

    /// Last day covered by this date as `(year, month, day)`.
    pub fn last_day(&self) -> (i32, u8, u8) {
        let month = self.month.unwrap_or(12);
        (
            self.year,
            month,
            self.day.unwrap_or_else(|| days_in_month(self.year, month)),
        )
    }

    /// True when the whole span of `self` lies within `from..=to`, where
    /// `from` and `to` are widened to their full spans.
    pub fn within(&self, from: &CalendarDate, to: &CalendarDate) -> bool {
        self.first_day() >= from.first_day() && self.first_day() <= to.last_day()
    }
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if (year % 4 == 0 && year % 100 != 0) || year % 400 == 0 => 29,
        2 => 28,
        _ => 0,
    }
}

impl Ord for CalendarDate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.first_day()
            .cmp(&other.first_day())
            .then(self.precision.cmp(&other.precision))
            .then_with(|| self.raw.cmp(&other.raw))
    }
}

impl PartialOrd for CalendarDate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CalendarDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

impl std::str::FromStr for CalendarDate {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl From<CalendarDate> for String {
    fn from(d: CalendarDate) -> String {
        d.raw
    }
}

impl TryFrom<String> for CalendarDate {
    type Error = ModelError;
    fn try_from(s: String) -> Result<Self, ModelError> {
        CalendarDate::parse(&s)
    }
}
