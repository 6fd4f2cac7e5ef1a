//! Shared inputs for the criterion benchmarks.

use volcast::{simulate_garch, GarchParams};

/// GARCH(1,1) returns with parameters close to a typical daily equity index.
pub fn sample_returns(n: usize, seed: u64) -> Vec<f64> {
    let params = GarchParams::new(1.977e-6, vec![0.1975], vec![0.7151]).expect("valid parameters");
    simulate_garch(&params, n, seed)
        .expect("valid simulation")
        .into_values()
}

/// Price levels built from [`sample_returns`] starting at 100.
pub fn sample_levels(n: usize, seed: u64) -> Vec<f64> {
    let mut level = 100.0;
    std::iter::once(level)
        .chain(sample_returns(n - 1, seed).into_iter().map(|r| {
            level *= r.exp();
            level
        }))
        .collect()
}
