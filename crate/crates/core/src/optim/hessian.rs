use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn step(x: f64) -> f64 {
    (1e-5 * x.abs()).max(1e-10)
}

/// Central-difference Hessian with per-coordinate step
/// `max(1e-5 |x_i|, 1e-10)`, symmetrized.
pub fn numerical_hessian<F: Fn(&[f64]) -> f64>(f: F, point: &[f64]) -> Result<DMatrix<f64>> {
    let h: Vec<f64> = point.iter().map(|&x| step(x)).collect();
    numerical_hessian_with_steps(f, point, &h)
}

/// Central-difference Hessian with caller-chosen steps.
pub fn numerical_hessian_with_steps<F: Fn(&[f64]) -> f64>(
    f: F,
    point: &[f64],
    h: &[f64],
) -> Result<DMatrix<f64>> {
    let n = point.len();
    if h.len() != n || h.iter().any(|s| s.is_nan() || *s <= 0.0) {
        return Err(Error::Argument(
            "one positive step per coordinate required".into(),
        ));
    }
    let mut x = point.to_vec();
    let eval = |x: &[f64], coord: usize| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!(
                "objective not finite while differencing coordinate {coord}"
            )))
        }
    };
    let f0 = eval(&x, 0)?;
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        x[i] = point[i] + h[i];
        let fp = eval(&x, i)?;
        x[i] = point[i] - h[i];
        let fm = eval(&x, i)?;
        x[i] = point[i];
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);

        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                x[i] = point[i] + si * h[i];
                x[j] = point[j] + sj * h[j];
                let v = eval(&x, i);
                x[i] = point[i];
                x[j] = point[j];
                v
            };
            let fpp = corner(1.0, 1.0)?;
            let fpm = corner(1.0, -1.0)?;
            let fmp = corner(-1.0, 1.0)?;
            let fmm = corner(-1.0, -1.0)?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok((&hess + hess.transpose()) * 0.5)
}

/// Outcome of inverting a symmetric matrix that should be positive definite.
#[derive(Debug, Clone, PartialEq)]
pub enum SpdInverse {
    Inverse(DMatrix<f64>),
    NotPositiveDefinite,
}

impl SpdInverse {
    pub fn ok(self) -> Option<DMatrix<f64>> {
        match self {
            SpdInverse::Inverse(m) => Some(m),
            SpdInverse::NotPositiveDefinite => None,
        }
    }
}

/// Cholesky-based inverse. Matrices that are not positive definite are
/// reported, never patched.
pub fn invert_spd(h: &DMatrix<f64>) -> Result<SpdInverse> {
    if !h.is_square() {
        return Err(Error::Argument(format!(
            "matrix is {}x{}, expected square",
            h.nrows(),
            h.ncols()
        )));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Ok(SpdInverse::NotPositiveDefinite);
    }
    let sym = (h + h.transpose()) * 0.5;
    Ok(match sym.cholesky() {
        Some(chol) if chol.l_dirty().diagonal().iter().all(|d| *d > 0.0) => {
            let inv = chol.inverse();
            SpdInverse::Inverse((&inv + inv.transpose()) * 0.5)
        }
        _ => SpdInverse::NotPositiveDefinite,
    })
}
