//! Time-series containers, the log-return transform, sample moments and
//! correlograms.
//!
//! Dates are carried as metadata only. Every statistic assumes equally
//! spaced observations (trading days).

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z_975: f64 = 1.959_963_984_540_054;

/// Index levels with optional calendar dates.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl PriceSeries {
    /// Builds a dated series. Dates must be strictly increasing and every
    /// level strictly positive.
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::Argument(format!(
                "{} dates for {} values",
                dates.len(),
                values.len()
            )));
        }
        if let Some(i) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Argument(format!(
                "dates not strictly increasing at index {} ({} then {})",
                i + 1,
                dates[i],
                dates[i + 1]
            )));
        }
        Self::validate_levels(&values)?;
        Ok(Self { dates, values })
    }

    /// Builds an undated series.
    pub fn from_levels(values: Vec<f64>) -> Result<Self> {
        Self::validate_levels(&values)?;
        Ok(Self {
            dates: Vec::new(),
            values,
        })
    }

    fn validate_levels(values: &[f64]) -> Result<()> {
        if values.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: values.len(),
            });
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NonPositivePrice { index, value });
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Empty when the series was built without dates.
    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Log returns `ln P[t+1] - ln P[t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    values: Vec<f64>,
    /// Date of the later observation in each pair; empty when undated.
    origin_dates: Vec<NaiveDate>,
}

impl ReturnSeries {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self {
            values,
            origin_dates: Vec::new(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origin_dates(&self) -> &[NaiveDate] {
        &self.origin_dates
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl AsRef<[f64]> for ReturnSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

pub fn log_returns(prices: &PriceSeries) -> ReturnSeries {
    let values = prices
        .values
        .windows(2)
        .map(|w| w[1].ln() - w[0].ln())
        .collect();
    let origin_dates = if prices.dates.is_empty() {
        Vec::new()
    } else {
        prices.dates[1..].to_vec()
    };
    ReturnSeries {
        values,
        origin_dates,
    }
}

/// Log returns of raw levels, validating them first.
pub fn log_returns_of(levels: &[f64]) -> Result<Vec<f64>> {
    let prices = PriceSeries::from_levels(levels.to_vec())?;
    Ok(log_returns(&prices).values)
}

/// Sample ACF or PACF with the white-noise confidence band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelogramResult {
    pub lags: Vec<usize>,
    pub coefficients: Vec<f64>,
    /// Half-width of the band `±z/√n`.
    pub band: f64,
}

impl CorrelogramResult {
    /// CSV with header `lag,coefficient,band`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lag,coefficient,band\n");
        for (lag, c) in self.lags.iter().zip(&self.coefficients) {
            out.push_str(&format!("{lag},{c},{}\n", self.band));
        }
        out
    }
}

pub(crate) fn mean(y: &[f64]) -> f64 {
    y.iter().sum::<f64>() / y.len() as f64
}

/// Biased sample autocorrelations for lags `0..=max_lag`.
pub(crate) fn autocorrelations(y: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = y.len();
    if max_lag >= n {
        return Err(Error::Argument(format!(
            "max_lag {max_lag} must be below the series length {n}"
        )));
    }
    let ybar = mean(y);
    let centered: Vec<f64> = y.iter().map(|v| v - ybar).collect();
    let denom: f64 = centered.iter().map(|d| d * d).sum();
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::DegenerateInput(
            "series has zero variance; autocorrelation undefined".into(),
        ));
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                return 1.0;
            }
            let num: f64 = centered[k..]
                .iter()
                .zip(&centered[..n - k])
                .map(|(a, b)| a * b)
                .sum();
            num / denom
        })
        .collect())
}

fn band(n: usize) -> f64 {
    Z_975 / (n as f64).sqrt()
}

fn check_lag(max_lag: usize) -> Result<()> {
    if max_lag == 0 {
        return Err(Error::Argument("max_lag must be positive".into()));
    }
    Ok(())
}

/// Sample autocorrelation function at lags `1..=max_lag`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<CorrelogramResult> {
    check_lag(max_lag)?;
    let rho = autocorrelations(series, max_lag)?;
    Ok(CorrelogramResult {
        lags: (1..=max_lag).collect(),
        coefficients: rho[1..].to_vec(),
        band: band(series.len()),
    })
}

/// Partial autocorrelations from the Durbin-Levinson recursion on the
/// sample ACF.
pub fn pacf(series: &[f64], max_lag: usize) -> Result<CorrelogramResult> {
    check_lag(max_lag)?;
    let rho = autocorrelations(series, max_lag)?;
    Ok(CorrelogramResult {
        lags: (1..=max_lag).collect(),
        coefficients: durbin_levinson(&rho)?,
        band: band(series.len()),
    })
}

/// `rho[0]` must be 1. Returns `phi_kk` for `k = 1..rho.len()-1`.
fn durbin_levinson(rho: &[f64]) -> Result<Vec<f64>> {
    let max_lag = rho.len() - 1;
    let mut out = Vec::with_capacity(max_lag);
    let mut phi: Vec<f64> = Vec::with_capacity(max_lag);
    for k in 1..=max_lag {
        let phi_kk = if k == 1 {
            rho[1]
        } else {
            let num = rho[k] - (1..k).map(|j| phi[j - 1] * rho[k - j]).sum::<f64>();
            let den = 1.0 - (1..k).map(|j| phi[j - 1] * rho[j]).sum::<f64>();
            if den <= 0.0 {
                return Err(Error::Numerical(format!(
                    "Durbin-Levinson breakdown at lag {k}: non-positive prediction variance"
                )));
            }
            num / den
        };
        if !phi_kk.is_finite() || phi_kk.abs() >= 1.0 {
            return Err(Error::Numerical(format!(
                "Durbin-Levinson breakdown at lag {k}: |phi_kk| = {}",
                phi_kk.abs()
            )));
        }
        let prev = phi.clone();
        phi.push(phi_kk);
        for j in 1..k {
            phi[j - 1] = prev[j - 1] - phi_kk * prev[k - j - 1];
        }
        out.push(phi_kk);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Sample variance with divisor `n - 1`.
    pub variance: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryStats {
    /// Spread indistinguishable from rounding noise around the mean.
    pub fn is_constant(&self) -> bool {
        self.std_dev.is_nan() || self.std_dev <= 1e-12 * self.mean.abs()
    }
}

pub fn summary_stats(series: &[f64]) -> Result<SummaryStats> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let m = mean(series);
    let variance = series.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    let (min, max) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(SummaryStats {
        n,
        mean: m,
        variance,
        std_dev: variance.sqrt(),
        min,
        max,
    })
}
