//! Serializable pipeline report, schema `volcast/1`.

use serde::{Deserialize, Serialize};
use volcast::estimate::ParameterRow;
use volcast::garch::ComparisonRow;
use volcast::series::SummaryStats;
use volcast::TestResult;

pub const SCHEMA: &str = "volcast/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema: String,
    pub input: InputDigest,
    pub options: PipelineOptions,
    pub returns_summary: SummaryStats,
    pub stationarity: Stationarity,
    pub correlograms: Correlograms,
    pub arma: Vec<ArmaEntry>,
    /// At least one ARMA residual set shows ARCH effects at the 5% level.
    pub arch_effects_detected: bool,
    pub garch: Vec<GarchEntry>,
    pub selection: Option<Selection>,
    pub diagnostics: Option<Diagnostics>,
    pub forecast: Option<ForecastBlock>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub file: String,
    pub n_prices: usize,
    pub n_returns: usize,
    pub first_date: String,
    pub last_date: String,
}

/// Everything needed to recompute the report from the input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub lm_lags: usize,
    pub lb_lags: usize,
    pub lb_fitdf: usize,
    pub acf_lags: usize,
    pub demean: bool,
    pub horizon: usize,
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_iter: Option<usize>,
    pub ks_lilliefors: bool,
    pub arma_grid: Vec<[usize; 2]>,
    pub garch_grid: Vec<[usize; 2]>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        let tol = volcast::Tolerances::default();
        Self {
            lm_lags: 12,
            lb_lags: 1,
            lb_fitdf: 0,
            acf_lags: 20,
            demean: false,
            horizon: 30,
            f_tol: tol.f_tol,
            x_tol: tol.x_tol,
            max_iter: tol.max_iter,
            ks_lilliefors: false,
            arma_grid: vec![[0, 1], [1, 0], [1, 1]],
            garch_grid: vec![[1, 0], [1, 1], [1, 2], [2, 1]],
        }
    }
}

impl PipelineOptions {
    pub fn tolerances(&self) -> volcast::Tolerances {
        volcast::Tolerances {
            f_tol: self.f_tol,
            x_tol: self.x_tol,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stationarity {
    pub levels: TestResult,
    pub returns: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlograms {
    pub max_lag: usize,
    pub band: f64,
    pub acf_file: String,
    pub pacf_file: String,
    pub acf: Vec<f64>,
    pub pacf: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmaEntry {
    pub model: String,
    pub converged: bool,
    pub error: Option<String>,
    pub estimates: Vec<ParameterRow>,
    pub sigma2: Option<f64>,
    pub loglik: Option<f64>,
    pub aic: Option<f64>,
    pub lm_test: Option<TestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchEntry {
    pub model: String,
    pub converged: bool,
    pub error: Option<String>,
    pub estimates: Vec<ParameterRow>,
    /// Parameter names pinned to the zero bound.
    pub at_boundary: Vec<String>,
    pub std_errors_reliable: bool,
    pub loglik: Option<f64>,
    pub aic: Option<f64>,
    pub persistence: Option<f64>,
    pub unconditional_variance: Option<f64>,
    pub iterations: usize,
    pub mean_removed: f64,
    pub conditional_variance_file: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub criterion: String,
    pub chosen: String,
    pub table: Vec<ComparisonRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub model: String,
    pub lm: TestResult,
    pub ks: TestResult,
    pub ljung_box: TestResult,
    pub level: f64,
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastBlock {
    pub model: String,
    pub horizon: usize,
    pub file: String,
    pub variance: Vec<f64>,
    pub unconditional_variance: Option<f64>,
    pub divergent: bool,
}
