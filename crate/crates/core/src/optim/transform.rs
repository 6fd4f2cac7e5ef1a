use serde::{Deserialize, Serialize};

/// Smooth bijection between an unconstrained coordinate `u` and the model
/// coordinate `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    /// `x = u`.
    Identity,
    /// `x = exp(u)`, for strictly positive parameters.
    LogPositive,
    /// `x = ln(1 + exp(u))` (softplus), for non-negative parameters. Zero is
    /// only reached in the limit.
    NonNegative,
}

impl Transform {
    pub fn to_constrained(self, u: f64) -> f64 {
        match self {
            Transform::Identity => u,
            Transform::LogPositive => u.exp(),
            Transform::NonNegative => {
                if u > 0.0 {
                    u + (-u).exp().ln_1p()
                } else {
                    u.exp().ln_1p()
                }
            }
        }
    }

    /// Values on or below the boundary map to the smallest representable
    /// interior point.
    pub fn to_unconstrained(self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::LogPositive => x.max(f64::MIN_POSITIVE).ln(),
            Transform::NonNegative => {
                let x = x.max(f64::MIN_POSITIVE);
                if x > 1.0 {
                    x + (-(-x).exp()).ln_1p()
                } else {
                    x.exp_m1().ln()
                }
            }
        }
    }

    pub fn admits(self, x: f64) -> bool {
        match self {
            Transform::Identity => x.is_finite(),
            Transform::LogPositive => x.is_finite() && x > 0.0,
            Transform::NonNegative => x.is_finite() && x >= 0.0,
        }
    }

    pub fn is_bounded(self) -> bool {
        !matches!(self, Transform::Identity)
    }
}
