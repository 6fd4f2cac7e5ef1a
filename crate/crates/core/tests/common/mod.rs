#![allow(dead_code, clippy::needless_range_loop)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// `y_t = c + Σ φ_i y_{t-i} + e_t + Σ θ_j e_{t-j}` with unit innovations and
/// a 500-step burn-in.
pub fn simulate_arma(c: f64, ar: &[f64], ma: &[f64], n: usize, seed: u64) -> Vec<f64> {
    let burn = 500;
    let e = normals(n + burn, seed);
    let mut y = vec![0.0; n + burn];
    for t in 0..n + burn {
        let mut v = c + e[t];
        for (i, phi) in ar.iter().enumerate() {
            if t > i {
                v += phi * y[t - i - 1];
            }
        }
        for (j, theta) in ma.iter().enumerate() {
            if t > j {
                v += theta * e[t - j - 1];
            }
        }
        y[t] = v;
    }
    y.split_off(burn)
}

pub fn random_walk(n: usize, seed: u64) -> Vec<f64> {
    normals(n, seed)
        .into_iter()
        .scan(0.0, |acc, e| {
            *acc += e;
            Some(*acc)
        })
        .collect()
}

/// Least squares by normal equations and Gauss-Jordan elimination with
/// partial pivoting.
pub fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = rows[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, yt) in rows.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * yt;
        }
    }
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        for r in 0..p {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=p {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    (0..p).map(|i| a[i][p] / a[i][i]).collect()
}
