use serde::{Deserialize, Serialize};

use super::Transform;
use crate::error::{Error, Result};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

const STEP_REL: f64 = 0.05;
const STEP_ZERO: f64 = 0.000_25;

/// Constrained values closer than this to their bound are flagged.
pub const BOUNDARY_EPS: f64 = 1e-8;

/// Function to minimize together with one coordinate transform per
/// dimension. The function receives model (constrained) coordinates.
pub struct ObjectiveSpec<F> {
    pub transforms: Vec<Transform>,
    pub f: F,
}

impl<F: Fn(&[f64]) -> f64> ObjectiveSpec<F> {
    pub fn new(transforms: Vec<Transform>, f: F) -> Self {
        Self { transforms, f }
    }

    pub fn dim(&self) -> usize {
        self.transforms.len()
    }

    fn to_constrained(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(&self.transforms)
            .map(|(&v, t)| t.to_constrained(v))
            .collect()
    }

    fn eval_unconstrained(&self, u: &[f64]) -> f64 {
        let v = (self.f)(&self.to_constrained(u));
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Function-value spread across the simplex, relative to `1 + |f_best|`.
    pub f_tol: f64,
    /// Vertex spread in unconstrained coordinates.
    pub x_tol: f64,
    /// Iteration budget per run; `None` means `5000 * dim`.
    pub max_iter: Option<usize>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            f_tol: 1e-10,
            x_tol: 1e-8,
            max_iter: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimResult {
    /// Best point in model coordinates.
    pub minimizer: Vec<f64>,
    pub value: f64,
    /// Objective at the start point.
    pub start_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub restarted: bool,
    /// Per coordinate: bounded transform and within [`BOUNDARY_EPS`] of zero.
    pub at_boundary: Vec<bool>,
}

/// Nelder-Mead simplex search in unconstrained coordinates.
///
/// Stops once both the function spread and the vertex spread are within
/// tolerance. When the iteration budget runs out, one restart from the best
/// point with a fresh simplex is attempted before reporting non-convergence.
pub fn minimize<F: Fn(&[f64]) -> f64>(
    obj: &ObjectiveSpec<F>,
    start: &[f64],
    tol: &Tolerances,
) -> Result<OptimResult> {
    let dim = obj.dim();
    if dim == 0 || start.len() != dim {
        return Err(Error::Argument(format!(
            "start point has {} coordinates for a {dim}-dimensional objective",
            start.len()
        )));
    }
    if let Some(i) = start
        .iter()
        .zip(&obj.transforms)
        .position(|(&x, t)| !t.admits(x))
    {
        return Err(Error::Argument(format!(
            "start coordinate {i} = {} violates its constraint",
            start[i]
        )));
    }
    let u0: Vec<f64> = start
        .iter()
        .zip(&obj.transforms)
        .map(|(&x, t)| t.to_unconstrained(x))
        .collect();
    let start_value = obj.eval_unconstrained(&u0);
    if !start_value.is_finite() {
        return Err(Error::Argument(
            "objective is not finite at the start point".into(),
        ));
    }
    let max_iter = tol.max_iter.unwrap_or(5000 * dim);

    let first = run_simplex(obj, &u0, start_value, tol, max_iter);
    let (run, restarted, iterations, evaluations) = if first.converged {
        (first.clone(), false, first.iterations, first.evaluations)
    } else {
        let second = run_simplex(obj, &first.best, first.value, tol, max_iter);
        let its = first.iterations + second.iterations;
        let evals = first.evaluations + second.evaluations;
        (second, true, its, evals)
    };

    let minimizer = obj.to_constrained(&run.best);
    let at_boundary = minimizer
        .iter()
        .zip(&obj.transforms)
        .map(|(&x, t)| t.is_bounded() && x.abs() < BOUNDARY_EPS)
        .collect();
    Ok(OptimResult {
        minimizer,
        value: run.value,
        start_value,
        iterations,
        evaluations,
        converged: run.converged,
        termination: if run.converged {
            Termination::Converged
        } else {
            Termination::MaxIterations
        },
        restarted,
        at_boundary,
    })
}

#[derive(Clone)]
struct Run {
    best: Vec<f64>,
    value: f64,
    iterations: usize,
    evaluations: usize,
    converged: bool,
}

fn run_simplex<F: Fn(&[f64]) -> f64>(
    obj: &ObjectiveSpec<F>,
    u0: &[f64],
    f0: f64,
    tol: &Tolerances,
    max_iter: usize,
) -> Run {
    let dim = u0.len();
    let mut evaluations = 0usize;
    let mut eval = |u: &[f64]| {
        evaluations += 1;
        obj.eval_unconstrained(u)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((u0.to_vec(), f0));
    for i in 0..dim {
        let mut v = u0.to_vec();
        v[i] = if v[i] != 0.0 {
            v[i] * (1.0 + STEP_REL)
        } else {
            STEP_ZERO
        };
        let fv = eval(&v);
        simplex.push((v, fv));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // stable sort keeps the earlier vertex on ties
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_best = simplex[0].1;
        let f_spread = simplex[1..]
            .iter()
            .map(|(_, f)| (f - f_best).abs())
            .fold(0.0, f64::max);
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if f_spread <= tol.f_tol * (1.0 + f_best.abs()) && x_spread <= tol.x_tol {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;

        let worst = &simplex[dim].0;
        let f_worst = simplex[dim].1;
        let f_second = simplex[dim - 1].1.max(f_best);
        let mut centroid = vec![0.0; dim];
        for (v, _) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = eval(&xr);
        if fr < f_best {
            let xe = along(REFLECT * EXPAND);
            let fe = eval(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[dim] = (xr, fr);
            continue;
        }
        if fr < f_worst {
            let xc = along(REFLECT * CONTRACT);
            let fc = eval(&xc);
            if fc <= fr {
                simplex[dim] = (xc, fc);
                continue;
            }
        } else {
            let xcc = along(-CONTRACT);
            let fcc = eval(&xcc);
            if fcc < f_worst {
                simplex[dim] = (xcc, fcc);
                continue;
            }
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let v: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, x)| b + SHRINK * (x - b))
                .collect();
            let fv = eval(&v);
            *vertex = (v, fv);
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (best, value) = simplex.swap_remove(0);
    Run {
        best,
        value,
        iterations,
        evaluations,
        converged,
    }
}
