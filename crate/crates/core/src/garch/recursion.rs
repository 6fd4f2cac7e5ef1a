use super::GarchParams;
use crate::error::{Error, Result};

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Pre-sample value used for both `Y²` and `τ²`: the sample mean of `y²`.
pub(crate) fn presample(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64
}

/// Recursion on raw coefficients, without constraint checks.
pub(crate) fn recursion_raw(
    c: f64,
    alphas: &[f64],
    betas: &[f64],
    y: &[f64],
    init: f64,
) -> Vec<f64> {
    let mut tau2: Vec<f64> = Vec::with_capacity(y.len());
    for t in 0..y.len() {
        let mut v = c;
        for (i, a) in alphas.iter().enumerate() {
            let lag = i + 1;
            v += a * if t >= lag {
                y[t - lag] * y[t - lag]
            } else {
                init
            };
        }
        for (j, b) in betas.iter().enumerate() {
            let lag = j + 1;
            v += b * if t >= lag { tau2[t - lag] } else { init };
        }
        tau2.push(v);
    }
    tau2
}

/// Gaussian log-likelihood for raw coefficients; NaN when any variance is
/// not positive.
pub(crate) fn loglik_raw(c: f64, alphas: &[f64], betas: &[f64], y: &[f64]) -> f64 {
    let tau2 = recursion_raw(c, alphas, betas, y, presample(y));
    let mut acc = 0.0;
    for (v, yt) in tau2.iter().zip(y) {
        if *v <= 0.0 || !v.is_finite() {
            return f64::NAN;
        }
        acc += LN_2PI + v.ln() + yt * yt / v;
    }
    -0.5 * acc
}

/// Conditional variances `τ_t²`, t = 1..n, with pre-sample `Y²` and `τ²`
/// set to the sample mean of `y²`.
pub fn variance_recursion(params: &GarchParams, y: &[f64]) -> Result<Vec<f64>> {
    params.validate()?;
    if y.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("returns contain non-finite values".into()));
    }
    Ok(recursion_raw(
        params.c,
        &params.alphas,
        &params.betas,
        y,
        presample(y),
    ))
}

/// `ℓ = -½ Σ_t [ln 2π + ln τ_t² + y_t²/τ_t²]` over all observations.
pub fn log_likelihood(params: &GarchParams, y: &[f64]) -> Result<f64> {
    let tau2 = variance_recursion(params, y)?;
    Ok(-0.5
        * tau2
            .iter()
            .zip(y)
            .map(|(v, yt)| LN_2PI + v.ln() + yt * yt / v)
            .sum::<f64>())
}
