use serde::{Deserialize, Serialize};

use super::recursion::loglik_raw;
use super::{select::aic, variance_recursion, GarchParams, GarchSpec};
use crate::error::{Error, Result};
use crate::estimate::{self, ParameterRow};
use crate::optim::{
    invert_spd, minimize, numerical_hessian_with_steps, ObjectiveSpec, Tolerances, Transform,
};
use crate::series::summary_stats;

/// Coefficients closer to zero than this are reported as exactly zero.
pub const BOUNDARY_ZERO: f64 = 1e-8;

/// Minimum series length accepted by [`fit_garch`].
pub const MIN_OBSERVATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GarchOptions {
    /// Subtract the sample mean before fitting. The model itself has no
    /// mean term.
    pub demean: bool,
    pub tolerances: Tolerances,
    /// Start point; defaults to `c = 0.1 var(y)`, `α_i = 0.1/r`, `β_j = 0.7/s`.
    pub start: Option<GarchParams>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GarchFit {
    pub spec: GarchSpec,
    pub params: GarchParams,
    /// `None` when the Hessian at the optimum is not positive definite.
    pub std_errors: Option<Vec<f64>>,
    pub t_values: Option<Vec<f64>>,
    pub p_values: Option<Vec<f64>>,
    /// Per parameter in `[c, α..., β...]` order: estimate pinned to zero.
    pub at_boundary: Vec<bool>,
    pub cond_variance: Vec<f64>,
    pub std_residuals: Vec<f64>,
    pub loglik: f64,
    pub start_loglik: f64,
    pub aic: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Mean removed before fitting (zero unless demeaned).
    pub mean_removed: f64,
    /// The series the model was fitted to.
    pub data: Vec<f64>,
}

impl GarchFit {
    pub fn std_errors_reliable(&self) -> bool {
        self.std_errors.is_some()
    }

    pub fn estimate_rows(&self) -> Vec<ParameterRow> {
        estimate::rows(
            self.spec.parameter_names(),
            &self.params.to_vec(),
            self.std_errors.as_deref(),
        )
    }

    /// The estimate in the optimizer's unconstrained coordinates.
    pub fn unconstrained_point(&self) -> Vec<f64> {
        transforms(self.spec)
            .iter()
            .zip(self.params.to_vec())
            .map(|(t, x)| t.to_unconstrained(x))
            .collect()
    }
}

fn transforms(spec: GarchSpec) -> Vec<Transform> {
    let mut t = vec![Transform::LogPositive];
    t.extend(std::iter::repeat_n(Transform::NonNegative, spec.r + spec.s));
    t
}

fn neg_loglik(spec: GarchSpec, y: &[f64], x: &[f64]) -> f64 {
    -loglik_raw(x[0], &x[1..1 + spec.r], &x[1 + spec.r..], y)
}

/// Negative log-likelihood as a function of unconstrained coordinates.
pub fn unconstrained_objective(spec: GarchSpec, y: &[f64]) -> impl Fn(&[f64]) -> f64 + '_ {
    let t = transforms(spec);
    move |u: &[f64]| {
        let x: Vec<f64> = u
            .iter()
            .zip(&t)
            .map(|(v, t)| t.to_constrained(*v))
            .collect();
        neg_loglik(spec, y, &x)
    }
}

pub fn fit_garch(y: &[f64], spec: GarchSpec) -> Result<GarchFit> {
    fit_garch_with(y, spec, &GarchOptions::default())
}

/// Maximum likelihood under `c > 0`, `α, β >= 0`, searched in transformed
/// coordinates. Standard errors come from the inverse numerical Hessian of
/// the negative log-likelihood in model coordinates.
pub fn fit_garch_with(y: &[f64], spec: GarchSpec, opts: &GarchOptions) -> Result<GarchFit> {
    let spec = GarchSpec::new(spec.r, spec.s)?;
    if y.len() < MIN_OBSERVATIONS {
        return Err(Error::InsufficientData {
            needed: MIN_OBSERVATIONS,
            got: y.len(),
        });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("returns contain non-finite values".into()));
    }
    let stats = summary_stats(y)?;
    if stats.is_constant() {
        return Err(Error::DegenerateInput("returns have zero variance".into()));
    }
    let mean_removed = if opts.demean { stats.mean } else { 0.0 };
    let data: Vec<f64> = y.iter().map(|v| v - mean_removed).collect();

    let start = match &opts.start {
        Some(p) => {
            p.validate()?;
            if p.spec() != spec {
                return Err(Error::Argument(format!(
                    "start point is {} but the model is {spec}",
                    p.spec()
                )));
            }
            p.clone()
        }
        None => GarchParams {
            c: 0.1 * stats.variance,
            alphas: vec![0.1 / spec.r as f64; spec.r],
            betas: vec![if spec.s > 0 { 0.7 / spec.s as f64 } else { 0.0 }; spec.s],
        },
    };

    let obj = ObjectiveSpec::new(transforms(spec), |x: &[f64]| neg_loglik(spec, &data, x));
    let opt = minimize(&obj, &start.to_vec(), &opts.tolerances)?;

    let mut estimate = opt.minimizer.clone();
    let mut at_boundary = vec![false; estimate.len()];
    for (x, flag) in estimate.iter_mut().zip(at_boundary.iter_mut()).skip(1) {
        if *x < BOUNDARY_ZERO {
            *x = 0.0;
            *flag = true;
        }
    }
    let params = GarchParams::from_slice(spec, &estimate);
    let cond_variance = variance_recursion(&params, &data)?;
    let std_residuals: Vec<f64> = data
        .iter()
        .zip(&cond_variance)
        .map(|(v, s2)| v / s2.sqrt())
        .collect();
    let loglik = -neg_loglik(spec, &data, &estimate);

    // dimensionless coefficients get a step floor so that pinned-to-zero
    // estimates still see curvature above rounding noise
    let steps: Vec<f64> = estimate
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let floor = if i == 0 { 1e-10 } else { 1e-5 };
            (1e-5 * x.abs()).max(floor)
        })
        .collect();
    let std_errors =
        numerical_hessian_with_steps(|x| neg_loglik(spec, &data, x), &estimate, &steps)
            .ok()
            .and_then(|h| invert_spd(&h).ok()?.ok())
            .map(|cov| {
                (0..estimate.len())
                    .map(|i| cov[(i, i)].sqrt())
                    .collect::<Vec<_>>()
            })
            .filter(|se| se.iter().all(|s| s.is_finite() && *s > 0.0));
    if std_errors.is_none() {
        log::warn!("{spec}: Hessian not positive definite, standard errors unreliable");
    }
    let t_values: Option<Vec<f64>> = std_errors
        .as_ref()
        .map(|se| estimate.iter().zip(se).map(|(e, s)| e / s).collect());
    let p_values = t_values.as_ref().map(|t| {
        t.iter()
            .map(|v| crate::stattests::two_sided_normal_p(*v))
            .collect()
    });

    let fit = GarchFit {
        spec,
        params,
        std_errors,
        t_values,
        p_values,
        at_boundary,
        cond_variance,
        std_residuals,
        loglik,
        start_loglik: -opt.start_value,
        aic: aic(loglik, spec.n_params()),
        converged: opt.converged,
        iterations: opt.iterations,
        mean_removed,
        data,
    };
    if fit.converged {
        Ok(fit)
    } else {
        Err(Error::GarchNotConverged(Box::new(fit)))
    }
}
