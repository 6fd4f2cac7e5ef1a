//! Single-model fit, simulation and forecast commands.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use volcast::arma::arma_estimate_table;
use volcast::estimate::ParameterRow;
use volcast::garch::forecast_from;
use volcast::io::{trading_days, write_prices};
use volcast::stattests::{ks_normality_test_with, KsMethod};
use volcast::{
    fit_arma_with, fit_garch_with, ljung_box_test, lm_arch_test, log_returns, simulate_garch,
    ArmaSpec, Error, GarchFit, GarchOptions, GarchParams, GarchSpec, NaiveDate, PriceSeries,
};

use crate::pipeline::{diagnose, LEVEL};
use crate::report::{Diagnostics, PipelineOptions, SCHEMA};

pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;

/// Parses `a,b` into two non-negative integers.
pub fn parse_order(s: &str) -> Result<[usize; 2]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("order must look like `a,b`, got `{s}`");
    }
    let a = parts[0]
        .parse()
        .with_context(|| format!("bad order `{s}`"))?;
    let b = parts[1]
        .parse()
        .with_context(|| format!("bad order `{s}`"))?;
    Ok([a, b])
}

/// Parses `a,b;c,d;...` into a list of orders.
pub fn parse_grid(s: &str) -> Result<Vec<[usize; 2]>> {
    let grid: Vec<_> = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_order)
        .collect::<Result<_>>()?;
    if grid.is_empty() {
        bail!("empty model grid");
    }
    Ok(grid)
}

/// Parses `c,alpha1..,beta1..`. Without an explicit order, three values
/// mean GARCH(1,1) and two mean GARCH(1,0).
pub fn parse_params(s: &str, order: Option<[usize; 2]>) -> Result<GarchParams> {
    let values: Vec<f64> = s
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number `{v}` in spec"))
        })
        .collect::<Result<_>>()?;
    let [r, s_] = match order {
        Some(o) => o,
        None => match values.len() {
            2 => [1, 0],
            3 => [1, 1],
            n => bail!("{n} parameter values are ambiguous; pass --order r,s"),
        },
    };
    let spec = GarchSpec::new(r, s_)?;
    if values.len() != spec.n_params() {
        bail!(
            "{spec} needs {} values, got {}",
            spec.n_params(),
            values.len()
        );
    }
    Ok(GarchParams::new(
        values[0],
        values[1..=r].to_vec(),
        values[r + 1..].to_vec(),
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Arma,
    Garch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema: String,
    pub input: String,
    pub model: String,
    pub kind: ModelKind,
    pub converged: bool,
    pub n_obs: usize,
    pub estimates: Vec<ParameterRow>,
    pub at_boundary: Vec<String>,
    pub std_errors_reliable: bool,
    pub loglik: f64,
    pub aic: f64,
    /// Innovation variance, ARMA only.
    pub sigma2: Option<f64>,
    pub persistence: Option<f64>,
    pub unconditional_variance: Option<f64>,
    /// Tests on ARMA residuals or GARCH standardized residuals.
    pub diagnostics: Diagnostics,
    pub options: PipelineOptions,
}

/// Fits one model to the log returns of `prices`.
pub fn fit_one(
    prices: &PriceSeries,
    label: &str,
    kind: ModelKind,
    order: [usize; 2],
    opts: &PipelineOptions,
) -> Result<FitReport> {
    let returns = log_returns(prices);
    let y = returns.values();
    match kind {
        ModelKind::Garch => {
            let spec = GarchSpec::new(order[0], order[1])?;
            let fit = garch_fit(y, spec, opts)?;
            let entry = crate::pipeline::garch_entry(&fit);
            Ok(FitReport {
                schema: SCHEMA.into(),
                input: label.into(),
                model: entry.model,
                kind,
                converged: fit.converged,
                n_obs: y.len(),
                estimates: entry.estimates,
                at_boundary: entry.at_boundary,
                std_errors_reliable: entry.std_errors_reliable,
                loglik: fit.loglik,
                aic: fit.aic,
                sigma2: None,
                persistence: entry.persistence,
                unconditional_variance: entry.unconditional_variance,
                diagnostics: diagnose(&fit, opts)?,
                options: opts.clone(),
            })
        }
        ModelKind::Arma => {
            let spec = ArmaSpec::new(order[0], order[1])?;
            let fit = match fit_arma_with(y, spec, &opts.tolerances(), None) {
                Ok(f) => f,
                Err(Error::ArmaNotConverged(f)) => *f,
                Err(e) => return Err(e.into()),
            };
            let e = fit.residuals();
            let method = if opts.ks_lilliefors {
                KsMethod::Lilliefors
            } else {
                KsMethod::Asymptotic
            };
            let lm = lm_arch_test(e, opts.lm_lags)?;
            let ks = ks_normality_test_with(e, method)?;
            let ljung_box = ljung_box_test(e, opts.lb_lags, opts.lb_fitdf)?;
            let all_pass = [&lm, &ks, &ljung_box].iter().all(|t| !t.rejects_at(LEVEL));
            Ok(FitReport {
                schema: SCHEMA.into(),
                input: label.into(),
                model: spec.to_string(),
                kind,
                converged: fit.converged,
                n_obs: y.len(),
                estimates: arma_estimate_table(&fit),
                at_boundary: Vec::new(),
                std_errors_reliable: fit.std_errors.is_some(),
                loglik: fit.loglik,
                aic: fit.aic,
                sigma2: Some(fit.sigma2),
                persistence: None,
                unconditional_variance: None,
                diagnostics: Diagnostics {
                    model: spec.to_string(),
                    lm,
                    ks,
                    ljung_box,
                    level: LEVEL,
                    all_pass,
                },
                options: opts.clone(),
            })
        }
    }
}

/// Returns non-converged fits as well; callers check `converged`.
fn garch_fit(y: &[f64], spec: GarchSpec, opts: &PipelineOptions) -> Result<GarchFit> {
    let gopts = GarchOptions {
        demean: opts.demean,
        tolerances: opts.tolerances(),
        start: None,
    };
    match fit_garch_with(y, spec, &gopts) {
        Ok(f) => Ok(f),
        Err(Error::GarchNotConverged(f)) => Ok(*f),
        Err(e) => Err(e.into()),
    }
}

/// Synthetic prices and the returns that generated them.
#[derive(Debug, Clone)]
pub struct Simulated {
    pub prices: PriceSeries,
    pub returns: Vec<f64>,
}

pub const DEFAULT_START: (i32, u32, u32) = (2011, 1, 3);

pub fn default_start_date() -> NaiveDate {
    let (y, m, d) = DEFAULT_START;
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

/// Simulates `n_prices - 1` returns and compounds them from a level of 100
/// over consecutive weekdays.
pub fn simulate(
    params: &GarchParams,
    n_prices: usize,
    seed: u64,
    start: NaiveDate,
) -> Result<Simulated> {
    if n_prices < 2 {
        bail!("need at least 2 price observations, got {n_prices}");
    }
    let returns = simulate_garch(params, n_prices - 1, seed)?.into_values();
    let mut level = 100.0;
    let mut levels = Vec::with_capacity(n_prices);
    levels.push(level);
    for r in &returns {
        level *= r.exp();
        levels.push(level);
    }
    let prices = PriceSeries::new(trading_days(start, n_prices), levels)?;
    Ok(Simulated { prices, returns })
}

pub fn prices_csv(sim: &Simulated) -> String {
    write_prices(&sim.prices)
}

pub fn returns_csv(sim: &Simulated) -> String {
    let mut out = String::from("date,return\n");
    for (d, r) in sim.prices.dates()[1..].iter().zip(&sim.returns) {
        out.push_str(&format!("{d},{r}\n"));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastTable {
    pub model: String,
    pub converged: bool,
    pub variance: Vec<f64>,
    pub unconditional_variance: Option<f64>,
}

impl ForecastTable {
    /// CSV `h,sigma2,annualized_vol`, closed by an `unconditional` row when
    /// the fit is covariance stationary.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,sigma2,annualized_vol\n");
        for (i, v) in self.variance.iter().enumerate() {
            out.push_str(&format!("{},{v},{}\n", i + 1, annualized_vol(*v)));
        }
        if let Some(u) = self.unconditional_variance {
            out.push_str(&format!("unconditional,{u},{}\n", annualized_vol(u)));
        }
        out
    }
}

pub fn annualized_vol(sigma2: f64) -> f64 {
    (TRADING_DAYS_PER_YEAR * sigma2).sqrt()
}

/// Fits one GARCH model and forecasts `horizon` steps past the sample.
pub fn forecast(
    prices: &PriceSeries,
    order: [usize; 2],
    horizon: usize,
    opts: &PipelineOptions,
) -> Result<ForecastTable> {
    if horizon == 0 {
        bail!("forecast horizon must be positive");
    }
    let spec = GarchSpec::new(order[0], order[1])?;
    let returns = log_returns(prices);
    let fit = garch_fit(returns.values(), spec, opts)?;
    let fc = forecast_from(&fit.params, &fit.data, &fit.cond_variance, horizon)?;
    Ok(ForecastTable {
        model: spec.to_string(),
        converged: fit.converged,
        variance: fc.variance,
        unconditional_variance: fc.unconditional_variance,
    })
}
