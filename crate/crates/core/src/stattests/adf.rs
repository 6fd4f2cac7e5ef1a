//! Augmented Dickey-Fuller test with constant and linear trend.

use std::collections::BTreeMap;

use super::regression::ols;
use super::{TestName, TestResult};
use crate::error::{Error, Result};

/// Critical values of the trend-inclusive Dickey-Fuller t statistic
/// (Fuller 1976, Table 8.5.2), indexed by sample size and lower-tail
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeyFullerTable {
    pub sample_sizes: [f64; 6],
    pub probabilities: [f64; 8],
    /// `critical[i][j]`: sample size `i`, probability `j`.
    pub critical: [[f64; 8]; 6],
}

impl DickeyFullerTable {
    pub const TREND: DickeyFullerTable = DickeyFullerTable {
        sample_sizes: [25.0, 50.0, 100.0, 250.0, 500.0, 100_000.0],
        probabilities: [0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99],
        critical: [
            [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
            [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
            [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
            [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
            [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
            [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
        ],
    };

    /// Critical values at sample size `n`, linear in `n` between grid rows
    /// and held constant beyond the grid.
    pub fn critical_values(&self, n: f64) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (j, slot) in out.iter_mut().enumerate() {
            let column: Vec<f64> = self.critical.iter().map(|row| row[j]).collect();
            *slot = interp(&self.sample_sizes, &column, n);
        }
        out
    }

    /// Interpolated p-value and whether it was clamped at the table edge.
    pub fn p_value(&self, statistic: f64, n: f64) -> (f64, bool) {
        let cv = self.critical_values(n);
        let (lo, hi) = (self.probabilities[0], self.probabilities[7]);
        if statistic <= cv[0] {
            (lo, statistic < cv[0])
        } else if statistic >= cv[7] {
            (hi, statistic > cv[7])
        } else {
            (interp(&cv, &self.probabilities, statistic), false)
        }
    }
}

/// Piecewise-linear interpolation on increasing `xs`, constant outside.
fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let last = xs.len() - 1;
    if x >= xs[last] {
        return ys[last];
    }
    let i = xs.windows(2).position(|w| x <= w[1]).unwrap_or(last - 1);
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

/// ADF regression `Δy_t = μ + βt + γ y_{t-1} + Σ δ_i Δy_{t-i} + ε_t`; the
/// statistic is the t-ratio of γ. Default lag order is `floor((n-1)^(1/3))`.
pub fn adf_test(series: &[f64], lag_order: Option<usize>) -> Result<TestResult> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let k = lag_order.unwrap_or_else(|| ((n - 1) as f64).cbrt().floor() as usize);
    if n < k + 10 {
        return Err(Error::InsufficientData {
            needed: k + 10,
            got: n,
        });
    }
    let dy: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    let mut rows = Vec::with_capacity(dy.len() - k);
    let mut response = Vec::with_capacity(dy.len() - k);
    for t in k..dy.len() {
        let mut row = Vec::with_capacity(3 + k);
        row.push(1.0);
        row.push((t + 1) as f64);
        row.push(series[t]);
        row.extend((1..=k).map(|i| dy[t - i]));
        rows.push(row);
        response.push(dy[t]);
    }
    let fit = ols(&rows, &response)?;
    let gamma = fit.coef[2];
    let statistic = gamma / fit.std_errors[2];
    if !statistic.is_finite() {
        return Err(Error::DegenerateInput(
            "ADF regression has zero residual variance".into(),
        ));
    }
    let (p_value, p_value_clamped) = DickeyFullerTable::TREND.p_value(statistic, dy.len() as f64);

    let mut extras = BTreeMap::new();
    extras.insert("lag_order".into(), k as f64);
    extras.insert("n_obs".into(), response.len() as f64);
    extras.insert("gamma".into(), gamma);
    Ok(TestResult {
        test_name: TestName::Adf,
        statistic,
        df: None,
        p_value,
        p_value_clamped,
        extras,
    })
}
