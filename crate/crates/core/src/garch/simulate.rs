use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::GarchParams;
use crate::error::{Error, Result};
use crate::series::ReturnSeries;

const BURN_IN: usize = 500;

/// Draws `n` returns from `Y_t = τ_t ε_t` with standard normal `ε_t`.
/// The first 500 draws are discarded. Output depends only on
/// `(params, n, seed)`.
pub fn simulate_garch(params: &GarchParams, n: usize, seed: u64) -> Result<ReturnSeries> {
    params.validate()?;
    if n == 0 {
        return Err(Error::Argument("simulation length must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = params.unconditional_variance().unwrap_or(params.c);
    let (r, s) = (params.alphas.len(), params.betas.len());
    // most recent first
    let mut sq_hist = vec![init; r];
    let mut var_hist = vec![init; s];
    let mut out = Vec::with_capacity(n);
    for t in 0..BURN_IN + n {
        let tau2 = params.c
            + params
                .alphas
                .iter()
                .zip(&sq_hist)
                .map(|(a, y2)| a * y2)
                .sum::<f64>()
            + params
                .betas
                .iter()
                .zip(&var_hist)
                .map(|(b, v)| b * v)
                .sum::<f64>();
        let eps: f64 = StandardNormal.sample(&mut rng);
        let y = tau2.sqrt() * eps;
        if r > 0 {
            sq_hist.rotate_right(1);
            sq_hist[0] = y * y;
        }
        if s > 0 {
            var_hist.rotate_right(1);
            var_hist[0] = tau2;
        }
        if t >= BURN_IN {
            out.push(y);
        }
    }
    Ok(ReturnSeries::from_values(out))
}
