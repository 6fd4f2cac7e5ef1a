//! Hypothesis tests used for identification and diagnostic checking, and
//! the distribution functions behind their p-values.

mod adf;
mod distributions;
mod ks;
mod ljung_box;
mod lm;
pub(crate) mod regression;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize, Serializer};

pub use adf::{adf_test, DickeyFullerTable};
pub use distributions::{
    chi_square_sf, kolmogorov_sf, lilliefors_p, regularized_gamma_q, std_normal_cdf,
    two_sided_normal_p,
};
pub use ks::{ks_normality_test, ks_normality_test_with, KsMethod};
pub use ljung_box::ljung_box_test;
pub use lm::lm_arch_test;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestName {
    Adf,
    ArchLm,
    LjungBox,
    KsNormality,
}

/// Statistic, degrees of freedom and p-value of one test.
///
/// Serialized with six significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    #[serde(rename = "test")]
    pub test_name: TestName,
    #[serde(serialize_with = "sig6")]
    pub statistic: f64,
    #[serde(serialize_with = "sig6_opt")]
    pub df: Option<f64>,
    #[serde(serialize_with = "sig6")]
    pub p_value: f64,
    /// Set when the p-value was clamped at the edge of an interpolation table.
    #[serde(rename = "clamped")]
    pub p_value_clamped: bool,
    #[serde(
        default,
        skip_serializing_if = "BTreeMap::is_empty",
        serialize_with = "sig6_map"
    )]
    pub extras: BTreeMap<String, f64>,
}

impl TestResult {
    pub fn rejects_at(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// Rounds to six significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if x.is_finite() && x != 0.0 {
        format!("{x:.5e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn sig6<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round_sig6(*x))
    } else {
        s.serialize_none()
    }
}

fn sig6_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => sig6(v, s),
        None => s.serialize_none(),
    }
}

fn sig6_map<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &round_sig6(*v))?;
    }
    map.end()
}
