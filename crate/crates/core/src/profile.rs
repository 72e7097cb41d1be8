//! Closed-form extremal profiles used as oracles for the operator pipeline.
//!
//! Each profile evaluates pointwise by an explicit formula on a stated domain
//! and is used to cross-check sampled operator outputs and weak-norm tails.

use crate::error::{invalid, Result};

/// Tagged closed-form profile.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileFunction {
    /// `c_H * ln(|x-a|/|x-b|)`: the Hilbert transform of `chi_(a,b)`.
    HilbertIndicator { a: f64, b: f64, c_h: f64 },
    /// `Phi(x) = -c_H * ln(x/(1-x))` on `(0, 1/2)`: the decreasing branch of
    /// `|H chi_(0,1)|` near the origin.
    CzPhi { c_h: f64 },
    /// `kappa * (ln(1/x))^2` on `(0, x0)`: commutator blow-up near the origin.
    CommutatorSmallX { kappa: f64, x0: f64 },
    /// `ln(x)/x` on `(e, inf)`: commutator tail.
    CommutatorTail,
    /// `(ln x)^{k-1}/x` on `(e, inf)`: iterated-maximal tail.
    MaximalTail { k: u32 },
    /// `S(chi_(a,b))(x) = ln(b / max(x, a))` for `x < b`, zero beyond.
    AdjointHardyIndicator { a: f64, b: f64 },
}

impl ProfileFunction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ProfileFunction::HilbertIndicator { a, b, c_h } => {
                if !(a < b) {
                    return Err(invalid("profile requires a < b"));
                }
                if !(c_h > 0.0) {
                    return Err(invalid("c_H must be positive"));
                }
            }
            ProfileFunction::CzPhi { c_h } => {
                if !(c_h > 0.0) {
                    return Err(invalid("c_H must be positive"));
                }
            }
            ProfileFunction::CommutatorSmallX { kappa, x0 } => {
                if !(kappa > 0.0) {
                    return Err(invalid("kappa must be positive"));
                }
                if !(x0 > 0.0 && x0 <= 1.0) {
                    return Err(invalid("x0 must lie in (0, 1]"));
                }
            }
            ProfileFunction::MaximalTail { k } => {
                if k < 1 {
                    return Err(invalid("k must be a positive integer"));
                }
            }
            ProfileFunction::AdjointHardyIndicator { a, b } => {
                if !(0.0 <= a && a < b) {
                    return Err(invalid("profile requires 0 <= a < b"));
                }
            }
            ProfileFunction::CommutatorTail => {}
        }
        Ok(())
    }

    /// Pointwise evaluation; zero outside the profile's stated domain.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ProfileFunction::HilbertIndicator { a, b, c_h } => {
                if x == a || x == b {
                    return f64::NAN;
                }
                c_h * ((x - a).abs() / ((x - b).abs())).ln()
            }
            ProfileFunction::CzPhi { c_h } => {
                if x <= 0.0 || x >= 0.5 {
                    0.0
                } else {
                    -c_h * (x / (1.0 - x)).ln()
                }
            }
            ProfileFunction::CommutatorSmallX { kappa, x0 } => {
                if x <= 0.0 || x >= x0 {
                    0.0
                } else {
                    let u = -x.ln();
                    kappa * u * u
                }
            }
            ProfileFunction::CommutatorTail => {
                if x <= std::f64::consts::E {
                    0.0
                } else {
                    x.ln() / x
                }
            }
            ProfileFunction::MaximalTail { k } => {
                if x <= std::f64::consts::E {
                    0.0
                } else {
                    x.ln().powi(k as i32 - 1) / x
                }
            }
            ProfileFunction::AdjointHardyIndicator { a, b } => {
                if x >= b || x <= 0.0 {
                    0.0
                } else {
                    (b / x.max(a)).ln()
                }
            }
        }
    }
}
