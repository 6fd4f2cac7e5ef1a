use serde::{Deserialize, Serialize};

use crate::stattests::two_sided_normal_p;

/// One row of an estimate analysis: estimate, standard error, t value and
/// two-sided normal p-value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterRow {
    pub parameter: String,
    pub estimate: f64,
    pub std_error: Option<f64>,
    pub t_value: Option<f64>,
    pub p_value: Option<f64>,
}

impl ParameterRow {
    pub fn new(parameter: impl Into<String>, estimate: f64, std_error: Option<f64>) -> Self {
        let std_error = std_error.filter(|s| s.is_finite() && *s > 0.0);
        let t_value = std_error.map(|s| estimate / s);
        Self {
            parameter: parameter.into(),
            estimate,
            std_error,
            t_value,
            p_value: t_value.map(two_sided_normal_p),
        }
    }
}

pub(crate) fn rows(
    names: Vec<String>,
    estimates: &[f64],
    std_errors: Option<&[f64]>,
) -> Vec<ParameterRow> {
    names
        .into_iter()
        .enumerate()
        .map(|(i, name)| ParameterRow::new(name, estimates[i], std_errors.map(|s| s[i])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_and_p_follow_from_estimate() {
        let r = ParameterRow::new("beta1", 2.588e-1, Some(1.037e-1));
        assert!((r.t_value.unwrap() - 2.588e-1 / 1.037e-1).abs() < 1e-15);
        assert!((r.p_value.unwrap() - 0.01257).abs() < 1e-4);
        let r = ParameterRow::new("c", 1.0, Some(f64::NAN));
        assert_eq!((r.std_error, r.t_value, r.p_value), (None, None, None));
    }
}
