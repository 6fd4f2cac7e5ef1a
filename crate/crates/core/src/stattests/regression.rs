//! Ordinary least squares via Householder QR.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct OlsFit {
    pub coef: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub rss: f64,
    /// Total sum of squares about the mean of the response.
    pub tss: f64,
}

impl OlsFit {
    pub fn r_squared(&self) -> f64 {
        1.0 - self.rss / self.tss
    }
}

/// `rows` are regressor rows; `y` the response.
pub(crate) fn ols(rows: &[Vec<f64>], y: &[f64]) -> Result<OlsFit> {
    let n = y.len();
    let p = rows.first().map_or(0, Vec::len);
    if n <= p {
        return Err(Error::InsufficientData {
            needed: p + 1,
            got: n,
        });
    }
    let x = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let yv = DVector::from_column_slice(y);
    let qr = x.clone().qr();
    let r = qr.r();
    let rmax = r.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if r.diagonal().iter().any(|d| d.abs() <= 1e-12 * rmax) || rmax == 0.0 {
        return Err(Error::Numerical("singular regression matrix".into()));
    }
    let qty = qr.q().transpose() * &yv;
    let beta = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Numerical("singular regression matrix".into()))?;
    let resid = &yv - &x * &beta;
    let rss = resid.norm_squared();
    let ybar = y.iter().sum::<f64>() / n as f64;
    let tss = y.iter().map(|v| (v - ybar).powi(2)).sum();
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(|| Error::Numerical("singular regression matrix".into()))?;
    let sigma2 = rss / (n - p) as f64;
    // (X'X)^-1 = R^-1 R^-T, so its diagonal is the row norms of R^-1
    let std_errors = (0..p)
        .map(|j| (sigma2 * r_inv.row(j).norm_squared()).sqrt())
        .collect();
    Ok(OlsFit {
        coef: beta.iter().copied().collect(),
        std_errors,
        rss,
        tss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_line() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![1.0, i as f64]).collect();
        let y: Vec<f64> = (0..5).map(|i| 2.0 + 3.0 * i as f64).collect();
        let fit = ols(&rows, &y).unwrap();
        assert_abs_diff_eq!(fit.coef[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coef[1], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.r_squared(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn textbook_standard_errors() {
        // y = [1,3,2,5,4] on x = 1..5, worked by hand
        let rows: Vec<Vec<f64>> = (1..=5).map(|i| vec![1.0, i as f64]).collect();
        let fit = ols(&rows, &[1.0, 3.0, 2.0, 5.0, 4.0]).unwrap();
        assert_abs_diff_eq!(fit.coef[1], 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.coef[0], 0.6, epsilon = 1e-12);
        // rss = 3.6, sigma2 = 1.2, Sxx = 10 -> se = sqrt(0.12)
        assert_abs_diff_eq!(fit.rss, 3.6, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.std_errors[1], 0.12f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn collinear_is_singular() {
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|i| vec![1.0, i as f64, 2.0 * i as f64])
            .collect();
        let y = [1.0, 2.0, 0.0, 4.0, 3.0, 5.0];
        assert!(matches!(ols(&rows, &y), Err(Error::Numerical(_))));
    }
}
