//! Gaussian GARCH(r,s) volatility models.
//!
//! `Y_t = τ_t ε_t` with `τ_t² = c + Σ_{i≤r} α_i Y²_{t-i} + Σ_{j≤s} β_j τ²_{t-j}`.
//! The first order `r` counts ARCH (α) terms and the second order `s` counts
//! GARCH (β) terms, so GARCH(1,2) carries α₁, β₁, β₂.

mod fit;
mod forecast;
mod recursion;
mod select;
mod simulate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fit::{fit_garch, fit_garch_with, unconstrained_objective, GarchFit, GarchOptions};
pub use forecast::{forecast_from, forecast_variance, VarianceForecast};
pub use recursion::{log_likelihood, variance_recursion};
pub use select::{aic, model_select, select_row, ComparisonRow, ModelSelection};
pub use simulate::simulate_garch;

/// Model order: `r` ARCH terms, `s` GARCH terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GarchSpec {
    pub r: usize,
    pub s: usize,
}

impl GarchSpec {
    /// Orders are limited to `1 <= r <= 2` and `s <= 2`.
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::Argument(
                "GARCH needs at least one ARCH term (r >= 1)".into(),
            ));
        }
        if r > 2 || s > 2 {
            return Err(Error::Argument(format!(
                "GARCH orders limited to r <= 2 and s <= 2 for parsimony, got ({r}, {s})"
            )));
        }
        Ok(Self { r, s })
    }

    /// Parameters including the intercept.
    pub fn n_params(&self) -> usize {
        1 + self.r + self.s
    }

    pub fn parameter_names(&self) -> Vec<String> {
        std::iter::once("c".to_string())
            .chain((1..=self.r).map(|i| format!("alpha{i}")))
            .chain((1..=self.s).map(|j| format!("beta{j}")))
            .collect()
    }

    /// The candidate set GARCH(1,0), (1,1), (1,2), (2,1).
    pub fn default_grid() -> Vec<GarchSpec> {
        [(1, 0), (1, 1), (1, 2), (2, 1)]
            .into_iter()
            .map(|(r, s)| GarchSpec { r, s })
            .collect()
    }
}

impl fmt::Display for GarchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GARCH({},{})", self.r, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub c: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl GarchParams {
    /// Checks `c > 0`, `α_i >= 0`, `β_j >= 0` and the order bounds.
    pub fn new(c: f64, alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        let p = Self { c, alphas, betas };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        GarchSpec::new(self.alphas.len(), self.betas.len())?;
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::Constraint(format!(
                "c must be positive, got {}",
                self.c
            )));
        }
        for (name, v) in self.named_coeffs() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Constraint(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn named_coeffs(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        let a = self
            .alphas
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("alpha{}", i + 1), *v));
        let b = self
            .betas
            .iter()
            .enumerate()
            .map(|(j, v)| (format!("beta{}", j + 1), *v));
        a.chain(b)
    }

    pub fn spec(&self) -> GarchSpec {
        GarchSpec {
            r: self.alphas.len(),
            s: self.betas.len(),
        }
    }

    /// `Σα + Σβ`.
    pub fn persistence(&self) -> f64 {
        self.alphas.iter().sum::<f64>() + self.betas.iter().sum::<f64>()
    }

    /// `c / (1 - Σα - Σβ)` when persistence is below one.
    pub fn unconditional_variance(&self) -> Option<f64> {
        let p = self.persistence();
        (p < 1.0).then(|| self.c / (1.0 - p))
    }

    /// `[c, α..., β...]`.
    pub fn to_vec(&self) -> Vec<f64> {
        std::iter::once(self.c)
            .chain(self.alphas.iter().copied())
            .chain(self.betas.iter().copied())
            .collect()
    }

    pub fn from_slice(spec: GarchSpec, x: &[f64]) -> Self {
        Self {
            c: x[0],
            alphas: x[1..1 + spec.r].to_vec(),
            betas: x[1 + spec.r..1 + spec.r + spec.s].to_vec(),
        }
    }
}
