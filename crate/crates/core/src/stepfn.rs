//! Compactly supported piecewise-constant functions on the real line.
//!
//! A [`StepFunction1D`] is the universal computable object of this crate:
//! every operator either maps step functions to step functions exactly or is
//! sampled back onto a grid. The function is identically zero outside the
//! span of its breakpoints.

use crate::error::{invalid, Error, Result};
use std::io::{BufRead, Write};

/// Piecewise-constant function: `values[i]` on `[breakpoints[i], breakpoints[i+1])`,
/// zero outside `[first, last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction1D {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

/// Cellwise transforms understood by [`StepFunction1D::transform`].
#[derive(Debug, Clone)]
pub enum Transform<'a> {
    Abs,
    /// Cellwise power `v^r`. Fractional powers require nonnegative cells,
    /// negative powers require strictly positive cells on the support.
    Power(f64),
    Scale(f64),
    Add(&'a StepFunction1D),
}

impl StepFunction1D {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid("need at least two breakpoints"));
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(invalid(format!(
                "values length {} does not match {} breakpoints",
                values.len(),
                breakpoints.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("breakpoints and values must be finite"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    /// Indicator of the interval `(a, b)`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![1.0])
    }

    /// `c * chi_(a,b)`.
    pub fn scaled_indicator(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![c])
    }

    /// Builds a step function from cell lengths laid out left to right from `start`.
    pub fn from_lengths(start: f64, lengths: &[f64], values: &[f64]) -> Result<Self> {
        if lengths.len() != values.len() || lengths.is_empty() {
            return Err(invalid("lengths/values mismatch"));
        }
        let mut b = Vec::with_capacity(lengths.len() + 1);
        b.push(start);
        let mut cur = start;
        for &l in lengths {
            if !(l > 0.0) {
                return Err(invalid("cell lengths must be positive"));
            }
            cur += l;
            b.push(cur);
        }
        Self::new(b, values.to_vec())
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn num_cells(&self) -> usize {
        self.values.len()
    }

    /// `(first, last)` breakpoint; the function vanishes outside.
    pub fn span(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    /// Smallest interval containing `{f != 0}`, or `None` for the zero function.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|v| *v != 0.0)?;
        let last = self.values.iter().rposition(|v| *v != 0.0).unwrap();
        Some((self.breakpoints[first], self.breakpoints[last + 1]))
    }

    /// Iterator over `(lo, hi, value)` cells.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (w[0], w[1], *v))
    }

    pub fn cell_lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.windows(2).map(|w| w[1] - w[0])
    }

    /// Pointwise value with the right-continuous convention `f(x) = values[i]`
    /// on `[b_i, b_{i+1})`; zero outside the span.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.breakpoints[0] || x >= *self.breakpoints.last().unwrap() {
            return 0.0;
        }
        let idx = match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        self.values[idx.min(self.values.len() - 1)]
    }

    /// Exact `\int_a^b f` (sum of cell value times overlap length).
    pub fn integrate(&self, a: f64, b: f64) -> Result<f64> {
        if !a.is_finite() || !b.is_finite() {
            return Err(invalid("integration bounds must be finite"));
        }
        if a > b {
            return Err(invalid("integration bounds must satisfy a <= b"));
        }
        let mut acc = 0.0;
        for (lo, hi, v) in self.cells() {
            if v == 0.0 {
                continue;
            }
            let l = lo.max(a);
            let h = hi.min(b);
            if h > l {
                acc += v * (h - l);
            }
        }
        Ok(acc)
    }

    /// `\int f` over the whole line.
    pub fn total_integral(&self) -> f64 {
        self.cells().map(|(lo, hi, v)| v * (hi - lo)).sum()
    }

    /// `(\int |f|^p)^{1/p}` with Lebesgue measure.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.cells()
            .map(|(lo, hi, v)| v.abs().powf(p) * (hi - lo))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Resamples onto a refined grid that contains all of `self`'s breakpoints
    /// plus the given nodes (exact; cells are only subdivided).
    pub fn refine(&self, extra_nodes: &[f64]) -> StepFunction1D {
        let mut b: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(extra_nodes.iter())
            .copied()
            .collect();
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.dedup();
        let values = b
            .windows(2)
            .map(|w| self.eval(0.5 * (w[0] + w[1])))
            .collect();
        StepFunction1D {
            breakpoints: b,
            values,
        }
    }

    pub fn transform(&self, kind: Transform<'_>) -> Result<StepFunction1D> {
        match kind {
            Transform::Abs => Ok(StepFunction1D {
                breakpoints: self.breakpoints.clone(),
                values: self.values.iter().map(|v| v.abs()).collect(),
            }),
            Transform::Scale(c) => {
                if !c.is_finite() {
                    return Err(invalid("scale factor must be finite"));
                }
                Ok(StepFunction1D {
                    breakpoints: self.breakpoints.clone(),
                    values: self.values.iter().map(|v| c * v).collect(),
                })
            }
            Transform::Power(r) => {
                let integer_power = r.fract() == 0.0 && r > 0.0;
                let mut values = Vec::with_capacity(self.values.len());
                for &v in &self.values {
                    if v < 0.0 && !integer_power {
                        return Err(Error::Domain(format!(
                            "power({r}) of negative cell value {v}"
                        )));
                    }
                    if v == 0.0 && r < 0.0 {
                        return Err(Error::Domain(
                            "power with negative exponent of a zero cell inside the support"
                                .into(),
                        ));
                    }
                    // zero exterior stays zero by convention; a zero cell with
                    // r > 0 also stays zero
                    values.push(if v == 0.0 { 0.0 } else { v.powf(r) });
                }
                Ok(StepFunction1D {
                    breakpoints: self.breakpoints.clone(),
                    values,
                })
            }
            Transform::Add(g) => {
                let mut b: Vec<f64> = self
                    .breakpoints
                    .iter()
                    .chain(g.breakpoints.iter())
                    .copied()
                    .collect();
                b.sort_by(|x, y| x.partial_cmp(y).unwrap());
                b.dedup();
                let values = b
                    .windows(2)
                    .map(|w| {
                        let m = 0.5 * (w[0] + w[1]);
                        self.eval(m) + g.eval(m)
                    })
                    .collect();
                Ok(StepFunction1D {
                    breakpoints: b,
                    values,
                })
            }
        }
    }

    /// Restriction to `[lo, hi]` (cells clipped, outside dropped).
    pub fn restrict(&self, lo: f64, hi: f64) -> Result<StepFunction1D> {
        let mut b = vec![];
        let mut v = vec![];
        for (clo, chi, val) in self.cells() {
            let l = clo.max(lo);
            let h = chi.min(hi);
            if h > l {
                if b.is_empty() {
                    b.push(l);
                }
                b.push(h);
                v.push(val);
            }
        }
        if v.is_empty() {
            return Err(invalid("restriction window does not meet the span"));
        }
        StepFunction1D::new(b, v)
    }

    /// CSV serialization: header `breakpoint,value`, one row per breakpoint,
    /// the last row's value field empty. 17 significant digits round-trip
    /// f64 exactly.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "breakpoint,value")?;
        for i in 0..self.values.len() {
            writeln!(out, "{:.16e},{:.16e}", self.breakpoints[i], self.values[i])?;
        }
        writeln!(out, "{:.16e},", self.breakpoints.last().unwrap())?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<StepFunction1D> {
        let mut lines = reader.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "breakpoint,value" => {}
            _ => return Err(Error::Parse("missing `breakpoint,value` header".into())),
        }
        let mut breakpoints = vec![];
        let mut values = vec![];
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (b, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad row: {line}")))?;
            breakpoints.push(
                b.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad breakpoint `{b}`: {e}")))?,
            );
            if !v.trim().is_empty() {
                values.push(
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad value `{v}`: {e}")))?,
                );
            }
        }
        StepFunction1D::new(breakpoints, values)
    }
}

/// Merges several sorted node lists into one strictly increasing grid.
pub fn merge_nodes(lists: &[&[f64]]) -> Vec<f64> {
    let mut all: Vec<f64> = lists.iter().flat_map(|l| l.iter().copied()).collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn chi01() -> StepFunction1D {
        StepFunction1D::indicator(0.0, 1.0).unwrap()
    }

    #[test]
    fn integrate_indicator_mass() {
        assert_eq!(chi01().integrate(0.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn integrate_partial_overlap() {
        assert_eq!(chi01().integrate(0.5, 3.0).unwrap(), 0.5);
    }

    #[test]
    fn integrate_two_cells_cancel() {
        // 2 chi_(0,1) - chi_(1,3): 2*1 - 1*2 = 0 over (0,3)
        let f = StepFunction1D::new(vec![0.0, 1.0, 3.0], vec![2.0, -1.0]).unwrap();
        assert_eq!(f.integrate(0.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn integrate_rejects_nonfinite_bounds() {
        assert!(chi01().integrate(f64::NAN, 1.0).is_err());
        assert!(chi01().integrate(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn transform_power_of_indicator_is_identity() {
        let f = chi01().transform(Transform::Power(3.0)).unwrap();
        assert_eq!(f.values(), &[1.0]);
    }

    #[test]
    fn transform_abs() {
        let f = StepFunction1D::scaled_indicator(0.0, 1.0, -2.0).unwrap();
        assert_eq!(f.transform(Transform::Abs).unwrap().values(), &[2.0]);
    }

    #[test]
    fn transform_reciprocal_cellwise() {
        let f = StepFunction1D::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap();
        let g = f.transform(Transform::Power(-1.0)).unwrap();
        assert_eq!(g.values(), &[0.5, 1.0]);
    }

    #[test]
    fn transform_power_errors() {
        let f = StepFunction1D::scaled_indicator(0.0, 1.0, -2.0).unwrap();
        assert!(f.transform(Transform::Power(0.5)).is_err());
        let z = StepFunction1D::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0]).unwrap();
        assert!(z.transform(Transform::Power(-1.0)).is_err());
    }

    #[test]
    fn add_merges_grids() {
        let f = chi01();
        let g = StepFunction1D::indicator(0.5, 2.0).unwrap();
        let s = f.transform(Transform::Add(&g)).unwrap();
        assert_eq!(s.breakpoints(), &[0.0, 0.5, 1.0, 2.0]);
        assert_eq!(s.values(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn eval_conventions() {
        let f = chi01();
        assert_eq!(f.eval(0.0), 1.0); // right-continuous at the left edge
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.eval(-0.5), 0.0);
    }

    #[test]
    fn integrate_additive_over_abutting_intervals() {
        let f = StepFunction1D::new(vec![-1.0, 0.25, 1.5, 2.0], vec![0.3, -1.2, 4.0]).unwrap();
        let (a, b, c) = (-0.7, 0.9, 1.8);
        let whole = f.integrate(a, c).unwrap();
        let parts = f.integrate(a, b).unwrap() + f.integrate(b, c).unwrap();
        assert_relative_eq!(whole, parts, max_relative = 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let f = StepFunction1D::new(
            vec![-1.0, 0.1, std::f64::consts::PI, 7.25],
            vec![1.0 / 3.0, -2.5e-17, 4.0],
        )
        .unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let g = StepFunction1D::read_csv(std::io::BufReader::new(&buf[..])).unwrap();
        assert_eq!(f, g);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("breakpoint,value\n"));
        assert!(text.trim_end().ends_with(','), "last row value field empty");
    }

    #[test]
    fn invariants_rejected() {
        assert!(StepFunction1D::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(StepFunction1D::new(vec![0.0], vec![]).is_err());
        assert!(StepFunction1D::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
        assert!(StepFunction1D::new(vec![0.0, 1.0, 0.5], vec![1.0, 1.0]).is_err());
    }
}
