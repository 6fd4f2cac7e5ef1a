//! ARMA(p,q) with constant, estimated by conditional sum of squares.
//!
//! Residuals follow
//! `e_t = y_t - c - Σ φ_i y_{t-i} - Σ θ_j e_{t-j}` with pre-sample `y` set to
//! the sample mean and pre-sample `e` set to zero.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{self, ParameterRow};
use crate::optim::{
    invert_spd, minimize, numerical_hessian_with_steps, ObjectiveSpec, Tolerances, Transform,
};
use crate::series::{mean, summary_stats};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmaSpec {
    pub p: usize,
    /// Differencing order applied before fitting.
    pub d: usize,
    pub q: usize,
    pub include_mean: bool,
}

impl ArmaSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        let spec = Self {
            p,
            d: 0,
            q,
            include_mean: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p > 2 || self.q > 2 {
            return Err(Error::Argument(format!(
                "ARMA orders limited to p <= 2 and q <= 2 for parsimony, got ({}, {})",
                self.p, self.q
            )));
        }
        if self.p + self.q == 0 && !self.include_mean {
            return Err(Error::Argument(
                "ARMA(0,0) without a mean has no parameters".into(),
            ));
        }
        Ok(())
    }

    fn n_coeffs(&self) -> usize {
        usize::from(self.include_mean) + self.p + self.q
    }

    /// Parameter names in vector order.
    pub fn parameter_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.n_coeffs());
        if self.include_mean {
            names.push("constant".to_string());
        }
        names.extend((1..=self.p).map(|i| format!("ar{i}")));
        names.extend((1..=self.q).map(|j| format!("ma{j}")));
        names
    }
}

impl fmt::Display for ArmaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmaFit {
    pub spec: ArmaSpec,
    pub constant: f64,
    pub ar_coeffs: Vec<f64>,
    pub ma_coeffs: Vec<f64>,
    /// Numerical-Hessian standard errors in parameter order; `None` when the
    /// Hessian was not positive definite.
    pub std_errors: Option<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub css: f64,
    pub start_css: f64,
    /// `css / n`.
    pub sigma2: f64,
    pub loglik: f64,
    pub aic: f64,
    pub converged: bool,
    pub iterations: usize,
    pub ar_nonstationary: bool,
    pub ma_noninvertible: bool,
}

impl ArmaFit {
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Estimates in parameter order (constant, AR, MA).
    pub fn estimates(&self) -> Vec<f64> {
        let mut v = Vec::new();
        if self.spec.include_mean {
            v.push(self.constant);
        }
        v.extend(&self.ar_coeffs);
        v.extend(&self.ma_coeffs);
        v
    }

    /// Number of estimated parameters, counting the innovation variance.
    pub fn n_params(&self) -> usize {
        self.spec.n_coeffs() + 1
    }
}

/// CSS residual recursion for explicit coefficients.
pub fn css_residuals(y: &[f64], constant: f64, ar: &[f64], ma: &[f64]) -> Vec<f64> {
    let ybar = mean(y);
    let mut e = Vec::with_capacity(y.len());
    for t in 0..y.len() {
        let mut v = y[t] - constant;
        for (i, phi) in ar.iter().enumerate() {
            let lag = i + 1;
            v -= phi * if t >= lag { y[t - lag] } else { ybar };
        }
        for (j, theta) in ma.iter().enumerate() {
            let lag = j + 1;
            if t >= lag {
                v -= theta * e[t - lag];
            }
        }
        e.push(v);
    }
    e
}

fn split(spec: &ArmaSpec, x: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let off = usize::from(spec.include_mean);
    let c = if spec.include_mean { x[0] } else { 0.0 };
    (
        c,
        x[off..off + spec.p].to_vec(),
        x[off + spec.p..off + spec.p + spec.q].to_vec(),
    )
}

fn css(spec: &ArmaSpec, y: &[f64], x: &[f64]) -> f64 {
    let (c, ar, ma) = split(spec, x);
    css_residuals(y, c, &ar, &ma).iter().map(|e| e * e).sum()
}

/// Stationarity (or invertibility, with negated coefficients) of a lag
/// polynomial of degree at most two.
fn inside_unit_circle(phi: &[f64]) -> bool {
    match *phi {
        [] => true,
        [a] => a.abs() < 1.0,
        [a, b] => a + b < 1.0 && b - a < 1.0 && b.abs() < 1.0,
        _ => unreachable!("orders above two are rejected"),
    }
}

/// Differences `y` `d` times.
pub fn difference(y: &[f64], d: usize) -> Vec<f64> {
    let mut out = y.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

pub fn fit_arma(series: &[f64], spec: ArmaSpec) -> Result<ArmaFit> {
    fit_arma_with(series, spec, &Tolerances::default(), None)
}

/// Fits with explicit tolerances and an optional start point in parameter
/// order. The default start is `c = ȳ` and all coefficients zero.
pub fn fit_arma_with(
    series: &[f64],
    spec: ArmaSpec,
    tol: &Tolerances,
    start: Option<&[f64]>,
) -> Result<ArmaFit> {
    spec.validate()?;
    let y = difference(series, spec.d);
    let n = y.len();
    let needed = 10 * (spec.p + spec.q + 1) + 1;
    if n < needed {
        return Err(Error::InsufficientData { needed, got: n });
    }
    let stats = summary_stats(&y)?;
    if stats.is_constant() {
        return Err(Error::DegenerateInput("series has zero variance".into()));
    }

    let k = spec.n_coeffs();
    let start: Vec<f64> = match start {
        Some(s) if s.len() == k => s.to_vec(),
        Some(s) => {
            return Err(Error::Argument(format!(
                "start has {} values, {spec} needs {k}",
                s.len()
            )))
        }
        None => {
            let mut s = vec![0.0; k];
            if spec.include_mean {
                s[0] = stats.mean;
            }
            s
        }
    };

    let obj = ObjectiveSpec::new(vec![Transform::Identity; k], |x: &[f64]| css(&spec, &y, x));
    let opt = minimize(&obj, &start, tol)?;

    let (constant, ar_coeffs, ma_coeffs) = split(&spec, &opt.minimizer);
    let residuals = css_residuals(&y, constant, &ar_coeffs, &ma_coeffs);
    let css_value: f64 = residuals.iter().map(|e| e * e).sum();
    let nf = n as f64;
    let sigma2 = css_value / nf;
    let loglik = -0.5 * nf * (LN_2PI + sigma2.ln() + 1.0);
    let n_params = k + 1;

    // concentrated negative log-likelihood; steps scaled to each parameter's
    // natural size because the constant can be far below its standard error
    let neg_profile = |x: &[f64]| 0.5 * nf * (css(&spec, &y, x) / nf).ln();
    let steps: Vec<f64> = opt
        .minimizer
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let scale = if spec.include_mean && i == 0 {
                stats.std_dev
            } else {
                1.0
            };
            1e-4 * x.abs().max(scale)
        })
        .collect();
    let std_errors = numerical_hessian_with_steps(neg_profile, &opt.minimizer, &steps)
        .ok()
        .and_then(|h| invert_spd(&h).ok()?.ok())
        .map(|cov| (0..k).map(|i| cov[(i, i)].sqrt()).collect());

    let ma_neg: Vec<f64> = ma_coeffs.iter().map(|t| -t).collect();
    let ar_nonstationary = !inside_unit_circle(&ar_coeffs);
    let ma_noninvertible = !inside_unit_circle(&ma_neg);
    if ar_nonstationary {
        log::warn!("{spec} estimate {ar_coeffs:?} lies outside the stationarity region");
    }
    if ma_noninvertible {
        log::warn!("{spec} estimate {ma_coeffs:?} is not invertible");
    }

    let fit = ArmaFit {
        spec,
        constant,
        ar_coeffs,
        ma_coeffs,
        std_errors,
        residuals,
        css: css_value,
        start_css: opt.start_value,
        sigma2,
        loglik,
        aic: 2.0 * n_params as f64 - 2.0 * loglik,
        converged: opt.converged,
        iterations: opt.iterations,
        ar_nonstationary,
        ma_noninvertible,
    };
    if fit.converged {
        Ok(fit)
    } else {
        Err(Error::ArmaNotConverged(Box::new(fit)))
    }
}

/// Estimate analysis rows for the constant and coefficients.
pub fn arma_estimate_table(fit: &ArmaFit) -> Vec<ParameterRow> {
    estimate::rows(
        fit.spec.parameter_names(),
        &fit.estimates(),
        fit.std_errors.as_deref(),
    )
}
