use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::distributions::{kolmogorov_sf, lilliefors_p, std_normal_cdf};
use super::{TestName, TestResult};
use crate::error::{Error, Result};
use crate::series::summary_stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KsMethod {
    /// Asymptotic Kolmogorov distribution, ignoring parameter estimation.
    #[default]
    Asymptotic,
    /// Lilliefors correction for estimated mean and variance.
    Lilliefors,
}

/// Kolmogorov-Smirnov test of standardized data against N(0,1). The
/// reported statistic is `√n · D`.
pub fn ks_normality_test(residuals: &[f64]) -> Result<TestResult> {
    ks_normality_test_with(residuals, KsMethod::Asymptotic)
}

pub fn ks_normality_test_with(residuals: &[f64], method: KsMethod) -> Result<TestResult> {
    let n = residuals.len();
    if n < 8 {
        return Err(Error::InsufficientData { needed: 8, got: n });
    }
    let stats = summary_stats(residuals)?;
    if stats.is_constant() {
        return Err(Error::DegenerateInput(
            "residuals have zero standard deviation".into(),
        ));
    }
    let mut z: Vec<f64> = residuals
        .iter()
        .map(|v| (v - stats.mean) / stats.std_dev)
        .collect();
    z.sort_by(f64::total_cmp);
    let nf = n as f64;
    let d = z
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = std_normal_cdf(x);
            let above = (i + 1) as f64 / nf - f;
            let below = f - i as f64 / nf;
            above.max(below)
        })
        .fold(0.0f64, f64::max);
    let lambda = nf.sqrt() * d;
    let p_value = match method {
        KsMethod::Asymptotic => kolmogorov_sf(lambda),
        KsMethod::Lilliefors => lilliefors_p(d, n),
    };
    let mut extras = BTreeMap::new();
    extras.insert("d".into(), d);
    extras.insert("mean".into(), stats.mean);
    extras.insert("std_dev".into(), stats.std_dev);
    extras.insert("n".into(), nf);
    Ok(TestResult {
        test_name: TestName::KsNormality,
        statistic: lambda,
        df: None,
        p_value,
        p_value_clamped: false,
        extras,
    })
}
