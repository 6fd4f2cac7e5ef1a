use std::collections::BTreeMap;

use super::distributions::chi_square_sf;
use super::{TestName, TestResult};
use crate::error::{Error, Result};
use crate::series::autocorrelations;

/// Ljung-Box portmanteau statistic `Q = n(n+2) Σ_{k≤h} ρ̂_k² / (n-k)`
/// against χ²(lags - fitdf).
pub fn ljung_box_test(residuals: &[f64], lags: usize, fitdf: usize) -> Result<TestResult> {
    let n = residuals.len();
    if lags == 0 || lags >= n {
        return Err(Error::Argument(format!(
            "Ljung-Box lags must be in 1..{n}, got {lags}"
        )));
    }
    if fitdf >= lags && fitdf != 0 {
        return Err(Error::Argument(format!(
            "fitdf {fitdf} must be smaller than lags {lags}"
        )));
    }
    let rho = autocorrelations(residuals, lags)?;
    let nf = n as f64;
    let statistic = nf
        * (nf + 2.0)
        * (1..=lags)
            .map(|k| rho[k] * rho[k] / (nf - k as f64))
            .sum::<f64>();
    let df = (lags - fitdf) as f64;
    let mut extras = BTreeMap::new();
    extras.insert("lags".into(), lags as f64);
    Ok(TestResult {
        test_name: TestName::LjungBox,
        statistic,
        df: Some(df),
        p_value: chi_square_sf(statistic, df),
        p_value_clamped: false,
        extras,
    })
}
