//! Grid builders for windowed computations.
//!
//! Tail-sensitive quantities (weak norms of `ln`-type tails) converge slowly
//! in the window size, so the evaluation grids are log-spaced toward 0 and
//! toward the window edge and may span hundreds of e-folds.

use serde::{Deserialize, Serialize};

/// Log-refined symmetric (or positive-axis) grid specification.
///
/// Positive nodes are `exp(u)` for `u` in `[u_min, u_max]` at step `u_step`,
/// a linear bulk covers `[bulk_lo, bulk_hi]` at `bulk_step`, and the mirror
/// image is added when `symmetric` is set.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub u_step: f64,
    pub bulk_lo: f64,
    pub bulk_hi: f64,
    pub bulk_step: f64,
    pub symmetric: bool,
}

impl GridSpec {
    /// Default window for weight computations: `X = 2^20`.
    pub fn window_default() -> Self {
        GridSpec {
            u_min: -10.0,
            u_max: (2.0f64.powi(20)).ln(),
            u_step: 0.1,
            bulk_lo: -4.0,
            bulk_hi: 4.0,
            bulk_step: 0.05,
            symmetric: true,
        }
    }

    /// Wide grid for unweighted asymptotic curves; spans e-folds up to 705,
    /// close to the f64 exponent range.
    pub fn asymptotic_default() -> Self {
        GridSpec {
            u_min: -3.0,
            u_max: 705.0,
            u_step: 0.25,
            bulk_lo: -2.0,
            bulk_hi: 3.0,
            bulk_step: 0.02,
            symmetric: true,
        }
    }

    /// Positive-axis log grid used for power weights and sharpness probes.
    pub fn positive_default() -> Self {
        GridSpec {
            u_min: -120.0,
            u_max: (2.0f64.powi(20)).ln(),
            u_step: 0.05,
            bulk_lo: 0.0,
            bulk_hi: 0.0,
            bulk_step: 0.0,
            symmetric: false,
        }
    }

    pub fn window_x(&self) -> f64 {
        self.u_max.exp()
    }

    /// Materializes the node list (strictly increasing, deduplicated).
    pub fn nodes(&self) -> Vec<f64> {
        let mut nodes = Vec::new();
        let n = ((self.u_max - self.u_min) / self.u_step).round() as usize;
        for i in 0..=n {
            let u = self.u_min + self.u_step * i as f64;
            nodes.push(u.exp());
        }
        if self.symmetric {
            let neg: Vec<f64> = nodes.iter().map(|x| -x).collect();
            nodes.extend(neg);
            nodes.push(0.0);
        } else {
            nodes.push(0.0);
        }
        if self.bulk_step > 0.0 && self.bulk_hi > self.bulk_lo {
            let m = ((self.bulk_hi - self.bulk_lo) / self.bulk_step).round() as usize;
            for i in 0..=m {
                nodes.push(self.bulk_lo + self.bulk_step * i as f64);
            }
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        nodes.dedup();
        nodes
    }
}

/// Log-spaced offsets `e^{-u}` for singularity-resolved sampling,
/// from `e^{-u_lo}` down to `e^{-u_hi}`.
pub fn log_offsets(u_lo: f64, u_hi: f64, step: f64) -> Vec<f64> {
    let n = ((u_hi - u_lo) / step).round() as usize;
    (0..=n).map(|i| (-(u_lo + step * i as f64)).exp()).collect()
}
