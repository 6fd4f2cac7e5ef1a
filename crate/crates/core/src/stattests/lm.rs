use std::collections::BTreeMap;

use super::distributions::chi_square_sf;
use super::regression::ols;
use super::{TestName, TestResult};
use crate::error::{Error, Result};

/// Engle's LM test for ARCH effects: regress `e_t²` on a constant and
/// `lags` of its own lags; the statistic is `rows · R²` against χ²(lags).
pub fn lm_arch_test(residuals: &[f64], lags: usize) -> Result<TestResult> {
    if lags == 0 {
        return Err(Error::Argument("LM test needs at least one lag".into()));
    }
    let n = residuals.len();
    if n <= lags + 1 {
        return Err(Error::InsufficientData {
            needed: lags + 2,
            got: n,
        });
    }
    let sq: Vec<f64> = residuals.iter().map(|e| e * e).collect();
    let rows: Vec<Vec<f64>> = (lags..n)
        .map(|t| {
            std::iter::once(1.0)
                .chain((1..=lags).map(|i| sq[t - i]))
                .collect()
        })
        .collect();
    let response = &sq[lags..];
    let spread = response
        .iter()
        .fold(0.0f64, |m, v| m.max((v - response[0]).abs()));
    if spread == 0.0 {
        return Err(Error::DegenerateInput(
            "squared residuals have zero variance".into(),
        ));
    }
    let fit = ols(&rows, response)?;
    let statistic = response.len() as f64 * fit.r_squared();
    let mut extras = BTreeMap::new();
    extras.insert("n_obs".into(), response.len() as f64);
    extras.insert("r_squared".into(), fit.r_squared());
    Ok(TestResult {
        test_name: TestName::ArchLm,
        statistic,
        df: Some(lags as f64),
        p_value: chi_square_sf(statistic.max(0.0), lags as f64),
        p_value_clamped: false,
        extras,
    })
}
