//! CSV ingestion of `date,close` price files.

use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::series::PriceSeries;

/// Reads a `date,close` CSV. Unsorted rows are sorted ascending with a
/// warning; duplicate dates are rejected.
pub fn read_prices<R: Read>(reader: R) -> Result<PriceSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, "header", e))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Parse {
                row: 1,
                column: name.into(),
                message: format!("missing `{name}` column in header"),
            })
    };
    let (date_col, close_col) = (col("date")?, col("close")?);

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        // header is row 1
        let row = i + 2;
        let record = record.map_err(|e| parse_err(row, "record", e))?;
        let field = |c: usize, name: &str| {
            record.get(c).ok_or_else(|| Error::Parse {
                row,
                column: name.into(),
                message: "missing field".into(),
            })
        };
        let date = field(date_col, "date")?
            .parse::<NaiveDate>()
            .map_err(|e| parse_err(row, "date", e))?;
        let close = field(close_col, "close")?
            .parse::<f64>()
            .map_err(|e| parse_err(row, "close", e))?;
        if !(close.is_finite() && close > 0.0) {
            return Err(Error::Parse {
                row,
                column: "close".into(),
                message: format!("close must be a positive number, got {close}"),
            });
        }
        rows.push((date, close));
    }
    if rows.windows(2).any(|w| w[0].0 > w[1].0) {
        log::warn!("input rows are not in ascending date order; sorting");
        rows.sort_by_key(|r| r.0);
    }
    let (dates, values) = rows.into_iter().unzip();
    PriceSeries::new(dates, values)
}

pub fn read_prices_file(path: impl AsRef<Path>) -> Result<PriceSeries> {
    read_prices(std::fs::File::open(path)?)
}

/// Writes a `date,close` CSV readable by [`read_prices`]. Values use the
/// shortest round-tripping decimal form.
pub fn write_prices(prices: &PriceSeries) -> String {
    let mut out = String::from("date,close\n");
    for (d, v) in prices.dates().iter().zip(prices.values()) {
        out.push_str(&format!("{d},{v}\n"));
    }
    out
}

/// Consecutive weekdays starting at `start` (inclusive if it is a weekday).
pub fn trading_days(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    use chrono::Datelike;
    start
        .iter_days()
        .filter(|d| d.weekday().number_from_monday() <= 5)
        .take(n)
        .collect()
}

fn parse_err(row: usize, column: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        row,
        column: column.into(),
        message: e.to_string(),
    }
}
