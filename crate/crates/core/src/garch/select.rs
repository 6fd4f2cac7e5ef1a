use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{GarchFit, GarchSpec};
use crate::error::{Error, Result};

/// Akaike information criterion `2k - 2ℓ`.
pub fn aic(loglik: f64, n_params: usize) -> f64 {
    2.0 * n_params as f64 - 2.0 * loglik
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub spec: GarchSpec,
    pub aic: f64,
    pub loglik: f64,
    pub n_params: usize,
    pub converged: bool,
}

impl ComparisonRow {
    pub fn from_fit(fit: &GarchFit) -> Self {
        Self {
            model: fit.spec.to_string(),
            spec: fit.spec,
            aic: fit.aic,
            loglik: fit.loglik,
            n_params: fit.spec.n_params(),
            converged: fit.converged,
        }
    }
}

fn rank(a: &ComparisonRow, b: &ComparisonRow) -> Ordering {
    a.aic
        .total_cmp(&b.aic)
        .then(b.loglik.total_cmp(&a.loglik))
        .then(a.n_params.cmp(&b.n_params))
        .then(a.spec.cmp(&b.spec))
}

/// Index of the converged row with minimum AIC; ties go to the larger
/// log-likelihood, then to fewer parameters.
pub fn select_row(rows: &[ComparisonRow]) -> Option<usize> {
    rows.iter()
        .enumerate()
        .filter(|(_, r)| r.converged && r.aic.is_finite())
        .min_by(|(_, a), (_, b)| rank(a, b))
        .map(|(i, _)| i)
}

#[derive(Debug, Clone)]
pub struct ModelSelection<'a> {
    pub chosen: &'a GarchFit,
    pub index: usize,
    /// One row per input fit, in input order.
    pub table: Vec<ComparisonRow>,
}

pub fn model_select(fits: &[GarchFit]) -> Result<ModelSelection<'_>> {
    if fits.is_empty() {
        return Err(Error::Argument("no fits to select from".into()));
    }
    let table: Vec<ComparisonRow> = fits.iter().map(ComparisonRow::from_fit).collect();
    let index =
        select_row(&table).ok_or_else(|| Error::Argument("none of the fits converged".into()))?;
    Ok(ModelSelection {
        chosen: &fits[index],
        index,
        table,
    })
}
