//! The end-to-end identify, estimate, diagnose, select and forecast run.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use volcast::arma::arma_estimate_table;
use volcast::garch::ComparisonRow;
use volcast::series::summary_stats;
use volcast::stattests::{ks_normality_test_with, KsMethod};
use volcast::{
    acf, adf_test, fit_arma_with, fit_garch_with, forecast_variance, ljung_box_test, lm_arch_test,
    log_returns, model_select, pacf, ArmaFit, ArmaSpec, Error, GarchFit, GarchOptions, GarchSpec,
    PriceSeries,
};

use crate::report::*;

/// Significance level for ARCH detection and residual diagnostics.
pub const LEVEL: f64 = 0.05;

/// How the run ended, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    DiagnosticFailed,
    NoConvergence,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::DiagnosticFailed => 2,
            Status::NoConvergence => 3,
        }
    }
}

/// A CSV file to be written next to the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Sidecar {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub report: PipelineReport,
    pub sidecars: Vec<Sidecar>,
    pub status: Status,
}

pub const REPORT_FILE: &str = "report.json";

pub fn arma_specs(grid: &[[usize; 2]]) -> Result<Vec<ArmaSpec>> {
    grid.iter()
        .map(|&[p, q]| ArmaSpec::new(p, q).map_err(Into::into))
        .collect()
}

pub fn garch_specs(grid: &[[usize; 2]]) -> Result<Vec<GarchSpec>> {
    grid.iter()
        .map(|&[r, s]| GarchSpec::new(r, s).map_err(Into::into))
        .collect()
}

fn cond_variance_file(spec: GarchSpec) -> String {
    format!("cond_variance_garch_{}_{}.csv", spec.r, spec.s)
}

/// Fits that did not converge still carry their last iterate.
fn garch_attempt(y: &[f64], spec: GarchSpec, opts: &GarchOptions) -> Result<GarchFit, String> {
    match fit_garch_with(y, spec, opts) {
        Ok(fit) => Ok(fit),
        Err(Error::GarchNotConverged(fit)) => Ok(*fit),
        Err(e) => Err(e.to_string()),
    }
}

fn arma_attempt(y: &[f64], spec: ArmaSpec, opts: &PipelineOptions) -> Result<ArmaFit, String> {
    match fit_arma_with(y, spec, &opts.tolerances(), None) {
        Ok(fit) => Ok(fit),
        Err(Error::ArmaNotConverged(fit)) => Ok(*fit),
        Err(e) => Err(e.to_string()),
    }
}

fn arma_entry(spec: ArmaSpec, attempt: Result<ArmaFit, String>, lm_lags: usize) -> ArmaEntry {
    match attempt {
        Ok(fit) => ArmaEntry {
            model: spec.to_string(),
            converged: fit.converged,
            error: None,
            estimates: arma_estimate_table(&fit),
            sigma2: Some(fit.sigma2),
            loglik: Some(fit.loglik),
            aic: Some(fit.aic),
            lm_test: lm_arch_test(fit.residuals(), lm_lags).ok(),
        },
        Err(error) => ArmaEntry {
            model: spec.to_string(),
            converged: false,
            error: Some(error),
            estimates: Vec::new(),
            sigma2: None,
            loglik: None,
            aic: None,
            lm_test: None,
        },
    }
}

pub fn garch_entry(fit: &GarchFit) -> GarchEntry {
    let names = fit.spec.parameter_names();
    GarchEntry {
        model: fit.spec.to_string(),
        converged: fit.converged,
        error: None,
        estimates: fit.estimate_rows(),
        at_boundary: names
            .iter()
            .zip(&fit.at_boundary)
            .filter(|(_, b)| **b)
            .map(|(n, _)| n.clone())
            .collect(),
        std_errors_reliable: fit.std_errors_reliable(),
        loglik: Some(fit.loglik),
        aic: Some(fit.aic),
        persistence: Some(fit.params.persistence()),
        unconditional_variance: fit.params.unconditional_variance(),
        iterations: fit.iterations,
        mean_removed: fit.mean_removed,
        conditional_variance_file: fit.converged.then(|| cond_variance_file(fit.spec)),
    }
}

fn failed_garch_entry(spec: GarchSpec, error: String) -> GarchEntry {
    GarchEntry {
        model: spec.to_string(),
        converged: false,
        error: Some(error),
        estimates: Vec::new(),
        at_boundary: Vec::new(),
        std_errors_reliable: false,
        loglik: None,
        aic: None,
        persistence: None,
        unconditional_variance: None,
        iterations: 0,
        mean_removed: 0.0,
        conditional_variance_file: None,
    }
}

fn cond_variance_csv(fit: &GarchFit) -> String {
    let mut out = String::from("t,sigma2\n");
    for (t, v) in fit.cond_variance.iter().enumerate() {
        out.push_str(&format!("{},{v}\n", t + 1));
    }
    out
}

/// Standardized-residual diagnostics for one fitted model.
pub fn diagnose(fit: &GarchFit, opts: &PipelineOptions) -> Result<Diagnostics> {
    let z = &fit.std_residuals;
    let method = if opts.ks_lilliefors {
        KsMethod::Lilliefors
    } else {
        KsMethod::Asymptotic
    };
    let lm = lm_arch_test(z, opts.lm_lags).context("LM test on standardized residuals")?;
    let ks = ks_normality_test_with(z, method).context("KS test on standardized residuals")?;
    let ljung_box = ljung_box_test(z, opts.lb_lags, opts.lb_fitdf)
        .context("Ljung-Box test on standardized residuals")?;
    let all_pass = [&lm, &ks, &ljung_box].iter().all(|t| !t.rejects_at(LEVEL));
    Ok(Diagnostics {
        model: fit.spec.to_string(),
        lm,
        ks,
        ljung_box,
        level: LEVEL,
        all_pass,
    })
}

/// Runs the procedure on a price series and assembles the report in memory.
pub fn run(
    prices: &PriceSeries,
    file_label: &str,
    opts: &PipelineOptions,
) -> Result<PipelineOutput> {
    let arma_grid = arma_specs(&opts.arma_grid)?;
    let garch_grid = garch_specs(&opts.garch_grid)?;
    if opts.horizon == 0 {
        anyhow::bail!("forecast horizon must be positive");
    }

    let returns = log_returns(prices);
    let y = returns.values();
    let stats = summary_stats(y).context("summarizing log returns")?;
    if stats.is_constant() {
        return Err(Error::DegenerateInput(
            "log returns are constant; the price series carries no variation".into(),
        )
        .into());
    }
    let input = InputDigest {
        file: file_label.to_string(),
        n_prices: prices.len(),
        n_returns: y.len(),
        first_date: prices
            .dates()
            .first()
            .map(|d| d.to_string())
            .unwrap_or_default(),
        last_date: prices
            .dates()
            .last()
            .map(|d| d.to_string())
            .unwrap_or_default(),
    };

    let stationarity = Stationarity {
        levels: adf_test(prices.values(), None).context("ADF test on levels")?,
        returns: adf_test(y, None).context("ADF test on returns")?,
    };

    let acf_res = acf(y, opts.acf_lags).context("sample ACF")?;
    let pacf_res = pacf(y, opts.acf_lags).context("sample PACF")?;
    let mut sidecars = vec![
        Sidecar {
            name: "acf.csv".into(),
            contents: acf_res.to_csv(),
        },
        Sidecar {
            name: "pacf.csv".into(),
            contents: pacf_res.to_csv(),
        },
    ];
    let correlograms = Correlograms {
        max_lag: opts.acf_lags,
        band: acf_res.band,
        acf_file: "acf.csv".into(),
        pacf_file: "pacf.csv".into(),
        acf: acf_res.coefficients,
        pacf: pacf_res.coefficients,
    };

    let mut warnings = Vec::new();

    let arma_fits: Vec<_> = arma_grid
        .par_iter()
        .map(|&spec| arma_attempt(y, spec, opts))
        .collect();
    let arma: Vec<ArmaEntry> = arma_grid
        .iter()
        .zip(arma_fits)
        .map(|(&spec, a)| arma_entry(spec, a, opts.lm_lags))
        .collect();
    for e in &arma {
        if let Some(err) = &e.error {
            warnings.push(format!("{} failed: {err}", e.model));
        } else if !e.converged {
            warnings.push(format!("{} did not converge", e.model));
        }
    }
    let arch_effects_detected = arma
        .iter()
        .filter_map(|e| e.lm_test.as_ref())
        .any(|t| t.rejects_at(LEVEL));
    if !arch_effects_detected {
        warnings.push(format!(
            "no ARMA residual set shows ARCH effects at the {LEVEL} level; GARCH modeling is unjustified"
        ));
    }

    let garch_opts = GarchOptions {
        demean: opts.demean,
        tolerances: opts.tolerances(),
        start: None,
    };
    let attempts: Vec<_> = garch_grid
        .par_iter()
        .map(|&spec| garch_attempt(y, spec, &garch_opts))
        .collect();
    let mut garch = Vec::with_capacity(attempts.len());
    let mut fits = Vec::new();
    for (&spec, attempt) in garch_grid.iter().zip(attempts) {
        match attempt {
            Ok(fit) => {
                if !fit.converged {
                    warnings.push(format!("{spec} did not converge"));
                } else {
                    sidecars.push(Sidecar {
                        name: cond_variance_file(spec),
                        contents: cond_variance_csv(&fit),
                    });
                }
                if fit.converged && !fit.std_errors_reliable() {
                    warnings.push(format!("{spec}: standard errors unreliable"));
                }
                garch.push(garch_entry(&fit));
                fits.push(fit);
            }
            Err(error) => {
                warnings.push(format!("{spec} failed: {error}"));
                garch.push(failed_garch_entry(spec, error));
            }
        }
    }

    let mut report = PipelineReport {
        schema: SCHEMA.into(),
        input,
        options: opts.clone(),
        returns_summary: stats,
        stationarity,
        correlograms,
        arma,
        arch_effects_detected,
        garch,
        selection: None,
        diagnostics: None,
        forecast: None,
        warnings,
    };

    let selected = match model_select(&fits) {
        Ok(sel) => sel,
        Err(_) => {
            report
                .warnings
                .push("no GARCH candidate converged; nothing to select".into());
            return Ok(PipelineOutput {
                report,
                sidecars,
                status: Status::NoConvergence,
            });
        }
    };
    let chosen = selected.chosen;
    report.selection = Some(Selection {
        criterion: "aic".into(),
        chosen: chosen.spec.to_string(),
        table: selected.table.clone(),
    });

    let diagnostics = diagnose(chosen, opts)?;
    if !diagnostics.all_pass {
        report.warnings.push(format!(
            "{} fails at least one residual diagnostic",
            chosen.spec
        ));
    }
    let status = if diagnostics.all_pass {
        Status::Success
    } else {
        Status::DiagnosticFailed
    };
    report.diagnostics = Some(diagnostics);

    let fc = forecast_variance(chosen, opts.horizon).context("variance forecast")?;
    if fc.divergent {
        report.warnings.push(format!(
            "{} is not covariance stationary; forecasts do not mean-revert",
            chosen.spec
        ));
    }
    sidecars.push(Sidecar {
        name: "forecast.csv".into(),
        contents: fc.to_csv(),
    });
    report.forecast = Some(ForecastBlock {
        model: chosen.spec.to_string(),
        horizon: opts.horizon,
        file: "forecast.csv".into(),
        variance: fc.variance,
        unconditional_variance: fc.unconditional_variance,
        divergent: fc.divergent,
    });

    Ok(PipelineOutput {
        report,
        sidecars,
        status,
    })
}

/// Chosen-model row of the selection table.
pub fn chosen_row(report: &PipelineReport) -> Option<&ComparisonRow> {
    let sel = report.selection.as_ref()?;
    sel.table.iter().find(|r| r.model == sel.chosen)
}

pub fn render(report: &PipelineReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// Writes `report.json` and the sidecars into `out_dir`.
pub fn write_output(output: &PipelineOutput, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    for car in &output.sidecars {
        let path = out_dir.join(&car.name);
        fs::write(&path, &car.contents).with_context(|| format!("writing {}", path.display()))?;
    }
    let path = out_dir.join(REPORT_FILE);
    fs::write(&path, render(&output.report)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
