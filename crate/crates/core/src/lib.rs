//! Volatility modeling for daily index returns.
//!
//! The crate covers the full identification/estimation/diagnosis loop:
//! log returns and correlograms ([`series`]), unit-root, ARCH-effect,
//! portmanteau and normality tests ([`stattests`]), conditional-sum-of-squares
//! ARMA fits ([`arma`]), constrained Gaussian GARCH(r,s) maximum likelihood
//! with model selection and variance forecasting ([`garch`]), and the
//! derivative-free optimizer shared by both fitters ([`optim`]).

pub mod arma;
pub mod error;
pub mod estimate;
pub mod garch;
pub mod io;
pub mod optim;
pub mod series;
pub mod stattests;

pub use arma::{fit_arma, fit_arma_with, ArmaFit, ArmaSpec};
pub use chrono::NaiveDate;
pub use error::{Error, Result};
pub use estimate::ParameterRow;
pub use garch::{
    fit_garch, fit_garch_with, forecast_variance, log_likelihood, model_select, simulate_garch,
    variance_recursion, GarchFit, GarchOptions, GarchParams, GarchSpec, VarianceForecast,
};
pub use optim::{invert_spd, minimize, numerical_hessian, OptimResult, Tolerances, Transform};
pub use series::{
    acf, log_returns, pacf, summary_stats, CorrelogramResult, PriceSeries, ReturnSeries,
};
pub use stattests::{
    adf_test, chi_square_sf, ks_normality_test, ljung_box_test, lm_arch_test, std_normal_cdf,
    TestName, TestResult,
};
