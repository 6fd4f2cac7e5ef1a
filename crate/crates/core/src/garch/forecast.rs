use serde::{Deserialize, Serialize};

use super::{GarchFit, GarchParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceForecast {
    /// `1..=H`.
    pub horizons: Vec<usize>,
    pub variance: Vec<f64>,
    /// `c / (1 - Σα - Σβ)` when persistence is below one.
    pub unconditional_variance: Option<f64>,
    /// Persistence is at least one, so forecasts do not mean-revert.
    pub divergent: bool,
}

impl VarianceForecast {
    /// CSV with header `t,sigma2`, `t` counting steps ahead.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,sigma2\n");
        for (h, v) in self.horizons.iter().zip(&self.variance) {
            out.push_str(&format!("{h},{v}\n"));
        }
        out
    }
}

/// Multi-step variance forecasts from a converged fit.
pub fn forecast_variance(fit: &GarchFit, horizon: usize) -> Result<VarianceForecast> {
    if !fit.converged {
        return Err(Error::Argument(
            "cannot forecast from a non-converged fit".into(),
        ));
    }
    forecast_from(&fit.params, &fit.data, &fit.cond_variance, horizon)
}

/// Iterates the variance equation past the sample end. Squared returns
/// beyond the sample are replaced by their conditional expectation, the
/// forecast variance itself.
pub fn forecast_from(
    params: &GarchParams,
    y: &[f64],
    cond_variance: &[f64],
    horizon: usize,
) -> Result<VarianceForecast> {
    params.validate()?;
    if horizon == 0 {
        return Err(Error::Argument("forecast horizon must be positive".into()));
    }
    let n = y.len();
    if n == 0 || cond_variance.len() != n {
        return Err(Error::Argument(
            "returns and conditional variances must be non-empty and aligned".into(),
        ));
    }
    let init = y.iter().map(|v| v * v).sum::<f64>() / n as f64;
    // index n + h - 1 holds the h-step forecast
    let sq_return = |k: isize, fc: &[f64]| -> f64 {
        if k < 0 {
            init
        } else if (k as usize) < n {
            y[k as usize].powi(2)
        } else {
            fc[k as usize - n]
        }
    };
    let variance_at = |k: isize, fc: &[f64]| -> f64 {
        if k < 0 {
            init
        } else if (k as usize) < n {
            cond_variance[k as usize]
        } else {
            fc[k as usize - n]
        }
    };
    let mut fc: Vec<f64> = Vec::with_capacity(horizon);
    for h in 0..horizon {
        let t = (n + h) as isize;
        let mut v = params.c;
        for (i, a) in params.alphas.iter().enumerate() {
            v += a * sq_return(t - 1 - i as isize, &fc);
        }
        for (j, b) in params.betas.iter().enumerate() {
            v += b * variance_at(t - 1 - j as isize, &fc);
        }
        fc.push(v);
    }
    let unconditional_variance = params.unconditional_variance();
    Ok(VarianceForecast {
        horizons: (1..=horizon).collect(),
        variance: fc,
        unconditional_variance,
        divergent: unconditional_variance.is_none(),
    })
}
