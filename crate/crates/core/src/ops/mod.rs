//! Operator actions on step functions: maximal functions and variants,
//! Hilbert transform, the commutator with `b = log|x|`, the adjoint Hardy
//! operator, and sharp maximal functions.

pub mod commutator;
pub mod hardy;
pub mod hilbert;
pub mod maximal;

use crate::error::{invalid, Error, Result};
use std::fmt;
use std::str::FromStr;

pub use maximal::MaximalMode;

/// Identifies an operator for curve sampling and CLI dispatch.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorId {
    Maximal { mode: MaximalMode, eps: f64 },
    IteratedMaximal { k: u32 },
    Hilbert { c_h: f64 },
    CommutatorLogHilbert { c_h: f64 },
    AdjointHardy,
    SharpMaximal { delta: f64, dyadic: bool },
    SparseForm { family: String },
}

impl OperatorId {
    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorId::Maximal { eps, .. } => {
                if !(*eps > 0.0 && *eps <= 1.0) {
                    return Err(invalid("eps must lie in (0, 1]"));
                }
            }
            OperatorId::IteratedMaximal { k } => {
                if *k < 1 {
                    return Err(invalid("k must be >= 1"));
                }
            }
            OperatorId::Hilbert { c_h } | OperatorId::CommutatorLogHilbert { c_h } => {
                if !(*c_h > 0.0) {
                    return Err(invalid("c_H must be positive"));
                }
            }
            OperatorId::SharpMaximal { delta, .. } => {
                if !(*delta > 0.0 && *delta <= 1.0) {
                    return Err(invalid("delta must lie in (0, 1]"));
                }
            }
            OperatorId::AdjointHardy | OperatorId::SparseForm { .. } => {}
        }
        Ok(())
    }
}

/// Canonical string form, e.g. `maximal:uncentered`, `iterated-maximal:k=3`,
/// `hilbert`, `commutator-log-hilbert`, `adjoint-hardy`, `sharp:delta=0.5,dyadic`.
impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorId::Maximal { mode, eps } => {
                write!(f, "maximal:{mode}")?;
                if *eps != 1.0 {
                    write!(f, ",eps={eps}")?;
                }
                Ok(())
            }
            OperatorId::IteratedMaximal { k } => write!(f, "iterated-maximal:k={k}"),
            OperatorId::Hilbert { c_h } => {
                if (*c_h - std::f64::consts::FRAC_1_PI).abs() < 1e-15 {
                    write!(f, "hilbert")
                } else {
                    write!(f, "hilbert:c={c_h}")
                }
            }
            OperatorId::CommutatorLogHilbert { c_h } => {
                if (*c_h - std::f64::consts::FRAC_1_PI).abs() < 1e-15 {
                    write!(f, "commutator-log-hilbert")
                } else {
                    write!(f, "commutator-log-hilbert:c={c_h}")
                }
            }
            OperatorId::AdjointHardy => write!(f, "adjoint-hardy"),
            OperatorId::SharpMaximal { delta, dyadic } => {
                write!(f, "sharp:delta={delta}")?;
                if *dyadic {
                    write!(f, ",dyadic")?;
                }
                Ok(())
            }
            OperatorId::SparseForm { family } => write!(f, "sparse:{family}"),
        }
    }
}

impl FromStr for OperatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let mut kv = |key: &str, default: Option<f64>| -> Result<f64> {
            if let Some(rest) = rest {
                for part in rest.split(',') {
                    if let Some((k, v)) = part.split_once('=') {
                        if k == key {
                            return v
                                .parse::<f64>()
                                .map_err(|e| Error::Parse(format!("bad {key}: {e}")));
                        }
                    }
                }
            }
            default.ok_or_else(|| Error::Parse(format!("missing {key} in `{s}`")))
        };
        let op = match head {
            "maximal" => {
                let rest = rest.unwrap_or("uncentered");
                let mode = if rest.starts_with("dyadic") {
                    MaximalMode::Dyadic
                } else if rest.starts_with("uncentered") {
                    MaximalMode::Uncentered
                } else {
                    return Err(Error::Parse(format!("unknown maximal mode in `{s}`")));
                };
                OperatorId::Maximal {
                    mode,
                    eps: kv("eps", Some(1.0))?,
                }
            }
            "iterated-maximal" => OperatorId::IteratedMaximal {
                k: kv("k", None)? as u32,
            },
            "hilbert" => OperatorId::Hilbert {
                c_h: kv("c", Some(std::f64::consts::FRAC_1_PI))?,
            },
            "commutator-log-hilbert" => OperatorId::CommutatorLogHilbert {
                c_h: kv("c", Some(std::f64::consts::FRAC_1_PI))?,
            },
            "adjoint-hardy" => OperatorId::AdjointHardy,
            "sharp" => OperatorId::SharpMaximal {
                delta: kv("delta", Some(0.5))?,
                dyadic: rest.map(|r| r.contains("dyadic")).unwrap_or(false),
            },
            "sparse" => OperatorId::SparseForm {
                family: rest.unwrap_or("tower").to_string(),
            },
            _ => return Err(Error::Parse(format!("unknown operator `{s}`"))),
        };
        op.validate()?;
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings_round_trip() {
        for s in [
            "maximal:uncentered",
            "maximal:dyadic",
            "iterated-maximal:k=3",
            "hilbert",
            "commutator-log-hilbert",
            "adjoint-hardy",
            "sharp:delta=0.5,dyadic",
        ] {
            let op: OperatorId = s.parse().unwrap();
            let back: OperatorId = op.to_string().parse().unwrap();
            assert_eq!(op, back, "{s}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!("maximal:uncentered,eps=1.5".parse::<OperatorId>().is_err());
        assert!("iterated-maximal:k=0".parse::<OperatorId>().is_err());
        assert!("frobnicate".parse::<OperatorId>().is_err());
    }
}
