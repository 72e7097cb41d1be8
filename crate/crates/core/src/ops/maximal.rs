//! Hardy–Littlewood maximal functions: uncentered and dyadic, the `eps`
//! variants `M_eps f = M(|f|^eps)^{1/eps}`, iterates `M^k`, and the sharp
//! maximal function.
//!
//! For step input the uncentered supremum over intervals containing a grid
//! cell is attained with endpoints in the breakpoint set (averages are
//! monotone while an endpoint moves through a cell), so the per-cell values
//! are exact. Each cell value is a lower bound for `Mf` on the cell, which
//! keeps every downstream norm a certified lower bound.

use crate::error::{invalid, Result};
use crate::sparse::DyadicLattice;
use crate::stepfn::{merge_nodes, StepFunction1D};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaximalMode {
    Uncentered,
    Dyadic,
}

impl fmt::Display for MaximalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaximalMode::Uncentered => write!(f, "uncentered"),
            MaximalMode::Dyadic => write!(f, "dyadic"),
        }
    }
}

impl FromStr for MaximalMode {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uncentered" => Ok(MaximalMode::Uncentered),
            "dyadic" => Ok(MaximalMode::Dyadic),
            _ => Err(crate::error::Error::Parse(format!(
                "unknown maximal mode `{s}`"
            ))),
        }
    }
}

/// Uncentered maximal function of `|f|` sampled on the grid obtained by
/// merging `f`'s breakpoints with `extra_nodes`.
///
/// Per output cell `C`: `sup { avg_I |f| : I grid interval, I ⊇ C }`,
/// which equals the pointwise supremum over all intervals containing any
/// interior point of `C` with endpoints restricted to the grid.
///
/// Runs in `O(K^2)` for `K` grid nodes. Integrals are accumulated per left
/// endpoint (running sums), never as differences of global prefixes, so cells
/// many orders of magnitude smaller than the window stay accurate.
pub fn maximal_on_grid(f: &StepFunction1D, extra_nodes: &[f64]) -> StepFunction1D {
    let g = f.refine(extra_nodes);
    let b = g.breakpoints();
    let k = b.len();
    let gl: Vec<f64> = g
        .values()
        .iter()
        .zip(g.cell_lengths())
        .map(|(v, l)| v.abs() * l)
        .collect();

    let fold = |mut acc: Vec<f64>, i: usize| {
        // averages over (b[i], b[r]) for r > i, by a running sum from i
        let mut sum = 0.0;
        let mut avgs = Vec::with_capacity(k - 1 - i);
        for r in i + 1..k {
            sum += gl[r - 1];
            avgs.push(sum / (b[r] - b[i]));
        }
        // cell c (>= i) admits every right endpoint r >= c+1, so its
        // candidate from this left endpoint is the suffix max at r = c+1
        let mut suffix = f64::NEG_INFINITY;
        for (ri, avg) in avgs.iter().enumerate().rev() {
            suffix = suffix.max(*avg);
            let c = i + ri;
            if suffix > acc[c] {
                acc[c] = suffix;
            }
        }
        acc
    };

    let merge = |mut a: Vec<f64>, b: Vec<f64>| {
        for (x, y) in a.iter_mut().zip(b) {
            if y > *x {
                *x = y;
            }
        }
        a
    };

    let init = || vec![f64::NEG_INFINITY; k - 1];
    let out: Vec<f64> = if k > 512 {
        (0..k - 1)
            .into_par_iter()
            .fold(init, fold)
            .reduce(init, merge)
    } else {
        (0..k - 1).fold(init(), fold)
    };

    StepFunction1D::new(b.to_vec(), out).expect("grid is valid")
}

/// Exact pointwise uncentered maximal value at `x` (candidate endpoints are
/// the breakpoints and `x` itself, which is exact for step input).
pub fn maximal_at(f: &StepFunction1D, x: f64) -> f64 {
    let mut nodes: Vec<f64> = f.breakpoints().to_vec();
    nodes.push(x);
    nodes.sort_by(|a, c| a.partial_cmp(c).unwrap());
    nodes.dedup();
    let mut best: f64 = 0.0;
    for &l in nodes.iter().take_while(|&&l| l <= x) {
        for &r in nodes.iter().rev().take_while(|&&r| r >= x) {
            if r > l {
                best = best.max(abs_integral(f, l, r) / (r - l));
            }
        }
    }
    best
}

fn abs_integral(f: &StepFunction1D, a: f64, b: f64) -> f64 {
    f.cells()
        .map(|(lo, hi, v)| {
            let l = lo.max(a);
            let h = hi.min(b);
            if h > l {
                v.abs() * (h - l)
            } else {
                0.0
            }
        })
        .sum()
}

/// `M_eps f = M(|f|^eps)^{1/eps}` in the requested mode.
///
/// Dyadic mode restricts intervals to lattice cubes and returns the exact
/// step function on the finest lattice cells (zero outside the root).
pub fn maximal(
    f: &StepFunction1D,
    mode: MaximalMode,
    eps: f64,
    grid: &[f64],
    lattice: &DyadicLattice,
) -> Result<StepFunction1D> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid("eps must lie in (0, 1]"));
    }
    let powed = f
        .transform(crate::stepfn::Transform::Abs)?
        .transform(crate::stepfn::Transform::Power(eps))?;
    let m = match mode {
        MaximalMode::Uncentered => maximal_on_grid(&powed, grid),
        MaximalMode::Dyadic => dyadic_maximal(&powed, lattice),
    };
    m.transform(crate::stepfn::Transform::Power(1.0 / eps))
}

/// Dyadic maximal function: per finest lattice cell, the maximum of
/// `avg_Q |f|` over the ancestor chain of lattice cubes.
pub fn dyadic_maximal(f: &StepFunction1D, lattice: &DyadicLattice) -> StepFunction1D {
    let depth = lattice.max_depth();
    let n = 1usize << depth;
    let (r0, r1) = lattice.root();
    // exact integral of |f| over each finest cell, then cube sums by halving
    let mut level: Vec<f64> = (0..n)
        .map(|i| {
            let (x0, x1) = lattice.cube_interval(depth, i as u64);
            abs_integral(f, x0, x1)
        })
        .collect();
    let finest_width = (r1 - r0) / n as f64;
    let mut best: Vec<f64> = level.iter().map(|s| s / finest_width).collect();
    for d in (0..depth).rev() {
        let m = 1usize << d;
        let width = (r1 - r0) / m as f64;
        let mut next = Vec::with_capacity(m);
        for q in 0..m {
            let s = level[2 * q] + level[2 * q + 1];
            next.push(s);
            let avg = s / width;
            let span = 1usize << (depth - d);
            for c in q * span..(q + 1) * span {
                if avg > best[c] {
                    best[c] = avg;
                }
            }
        }
        level = next;
    }
    let nodes: Vec<f64> = (0..=n).map(|i| lattice.node(depth, i as u64)).collect();
    StepFunction1D::new(nodes, best).expect("lattice grid is valid")
}

/// `M^k f`: k-fold composition of the uncentered maximal function on a fixed
/// grid (the grid is reused per iteration; each iterate is the exact grid
/// sampling of the maximal function of the previous step function).
pub fn iterate_maximal(f: &StepFunction1D, k: u32, grid: &[f64]) -> Result<StepFunction1D> {
    if k < 1 {
        return Err(invalid("k must be >= 1"));
    }
    let mut cur = maximal_on_grid(f, grid);
    for _ in 1..k {
        cur = maximal_on_grid(&cur, &[]);
    }
    Ok(cur)
}

/// Sharp maximal function `M_delta^# f` on the merged grid: per cell, the
/// supremum over grid intervals containing the cell of
/// `(avg_I |f - f_I|^delta)^{1/delta}`.
///
/// Exact for interval endpoints restricted to the grid; refine the grid to
/// tighten toward the full supremum. `O(K^3)`; intended for corpus-sized
/// inputs (a few hundred nodes).
pub fn sharp_maximal_on_grid(f: &StepFunction1D, delta: f64, extra_nodes: &[f64]) -> Result<StepFunction1D> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid("delta must lie in (0, 1]"));
    }
    let g = f.refine(extra_nodes);
    let b = g.breakpoints().to_vec();
    let v = g.values().to_vec();
    let lens: Vec<f64> = g.cell_lengths().collect();
    let k = b.len();
    let pow_delta = |x: f64| -> f64 {
        if delta == 1.0 {
            x
        } else if delta == 0.5 {
            x.sqrt()
        } else {
            x.powf(delta)
        }
    };

    let fold = |mut acc: Vec<f64>, i: usize| {
        let mut sum = 0.0;
        // running mean over (b[i], b[r])
        for r in i + 1..k {
            sum += v[r - 1] * lens[r - 1];
            let mean = sum / (b[r] - b[i]);
            let mut osc = 0.0;
            for c in i..r {
                osc += pow_delta((v[c] - mean).abs()) * lens[c];
            }
            let val = (osc / (b[r] - b[i])).powf(1.0 / delta);
            for c in i..r {
                if val > acc[c] {
                    acc[c] = val;
                }
            }
        }
        acc
    };
    let merge = |mut a: Vec<f64>, o: Vec<f64>| {
        for (x, y) in a.iter_mut().zip(o) {
            if y > *x {
                *x = y;
            }
        }
        a
    };
    let init = || vec![0.0; k - 1];
    let out: Vec<f64> = if k > 192 {
        (0..k - 1)
            .into_par_iter()
            .fold(init, fold)
            .reduce(init, merge)
    } else {
        (0..k - 1).fold(init(), fold)
    };
    StepFunction1D::new(b, out)
}

/// Dyadic sharp maximal function `M_delta^{#,d} f` over lattice cubes.
pub fn sharp_maximal_dyadic(
    f: &StepFunction1D,
    delta: f64,
    lattice: &DyadicLattice,
) -> Result<StepFunction1D> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(invalid("delta must lie in (0, 1]"));
    }
    let depth = lattice.max_depth();
    let n = 1usize << depth;
    let nodes: Vec<f64> = (0..=n).map(|i| lattice.node(depth, i as u64)).collect();
    let g = f.refine(&nodes);
    let b = g.breakpoints();
    let cells: Vec<(f64, f64, f64)> = g.cells().collect();
    let mut best = vec![0.0f64; cells.len()];
    // refined cells nest inside lattice cubes, so each cube owns a contiguous
    // index range found by binary search on the breakpoints
    let range_of = |x0: f64, x1: f64| -> (usize, usize) {
        let lo = b.partition_point(|&e| e < x0);
        let hi = b.partition_point(|&e| e < x1);
        (lo.min(cells.len()), hi.min(cells.len()))
    };
    for d in (0..=depth).rev() {
        let m = 1usize << d;
        for q in 0..m {
            let (x0, x1) = lattice.cube_interval(d, q as u64);
            let qw = x1 - x0;
            let (lo, hi) = range_of(x0, x1);
            if lo >= hi {
                continue;
            }
            let mut sum = 0.0;
            let mut covered = 0.0;
            for &(clo, chi, v) in &cells[lo..hi] {
                sum += v * (chi - clo);
                covered += chi - clo;
            }
            let mean = sum / qw;
            let mut osc = 0.0;
            for &(clo, chi, v) in &cells[lo..hi] {
                osc += (v - mean).abs().powf(delta) * (chi - clo);
            }
            // cube parts outside the refined span carry the zero exterior
            if covered < qw * (1.0 - 1e-12) {
                osc += mean.abs().powf(delta) * (qw - covered);
            }
            let val = (osc / qw).powf(1.0 / delta);
            for slot in &mut best[lo..hi] {
                if val > *slot {
                    *slot = val;
                }
            }
        }
    }
    StepFunction1D::new(b.to_vec(), best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn chi01() -> StepFunction1D {
        StepFunction1D::indicator(0.0, 1.0).unwrap()
    }

    /// Brute-force oracle: maximal value at x by scanning a dense set of
    /// candidate interval endpoints (independent of the sweep).
    fn oracle_maximal_at(f: &StepFunction1D, x: f64) -> f64 {
        let mut cands: Vec<f64> = f.breakpoints().to_vec();
        cands.push(x);
        let (lo, hi) = f.span();
        let width = hi - lo;
        for i in 0..=200 {
            cands.push(lo - width + 3.0 * width * i as f64 / 200.0);
        }
        cands.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cands.dedup();
        let mut best: f64 = 0.0;
        for &l in &cands {
            if l > x {
                break;
            }
            for &r in cands.iter().rev() {
                if r < x || r <= l {
                    break;
                }
                let mass = f
                    .cells()
                    .map(|(clo, chi, v)| {
                        let a = clo.max(l);
                        let b = chi.min(r);
                        if b > a {
                            v.abs() * (b - a)
                        } else {
                            0.0
                        }
                    })
                    .sum::<f64>();
                best = best.max(mass / (r - l));
            }
        }
        best
    }

    #[test]
    fn maximal_of_indicator_at_two() {
        // best interval (0, 2]: average 1/2
        let grid = vec![-1.0, 1.9999999, 2.0000001, 3.0];
        let m = maximal_on_grid(&chi01(), &grid);
        assert_relative_eq!(m.eval(2.0), 0.5, max_relative = 1e-7);
        assert_relative_eq!(oracle_maximal_at(&chi01(), 2.0), 0.5, max_relative = 1e-9);
    }

    #[test]
    fn maximal_on_support_is_one() {
        let m = maximal_on_grid(&chi01(), &[]);
        assert_relative_eq!(m.eval(0.5), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn eps_variant_is_power_of_plain() {
        // |chi|^eps = chi, so M_eps chi = (M chi)^{1/eps}; at x=2 with eps=0.5: 0.25
        let lattice = DyadicLattice::new(-4.0, 4.0, 8).unwrap();
        let grid = vec![-1.0, 1.99999995, 2.00000005, 3.0];
        let m = maximal(&chi01(), MaximalMode::Uncentered, 0.5, &grid, &lattice).unwrap();
        assert_relative_eq!(m.eval(2.0), 0.25, max_relative = 1e-6);
    }

    #[test]
    fn maximal_matches_oracle_on_random_steps() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let mut bp: Vec<f64> = (0..7).map(|_| rng.gen_range(-3.0..3.0)).collect();
            bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
            bp.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            if bp.len() < 3 {
                continue;
            }
            let vals: Vec<f64> = (0..bp.len() - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let f = StepFunction1D::new(bp, vals).unwrap();
            let x = rng.gen_range(-4.0..4.0);
            let eps = 1e-9;
            let grid = vec![x - eps, x + eps, -5.0, 5.0];
            let m = maximal_on_grid(&f, &grid);
            let got = m.eval(x);
            let want = oracle_maximal_at(&f, x);
            assert_relative_eq!(got, want, max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn iterated_maximal_indicator_lower_bound_at_ten() {
        // M^2 chi(10) >= (1 + ln 10)/10; sampled value approaches ~0.367
        let spec = crate::grid::GridSpec {
            u_min: -4.0,
            u_max: 6.0,
            u_step: 0.02,
            bulk_lo: -2.0,
            bulk_hi: 2.0,
            bulk_step: 0.02,
            symmetric: true,
        };
        let m2 = iterate_maximal(&chi01(), 2, &spec.nodes()).unwrap();
        let bound = (1.0 + 10f64.ln()) / 10.0;
        let got = m2.eval(10.0);
        assert!(
            got >= bound,
            "M^2 chi(10) = {got} should exceed {bound}"
        );
        assert!(got < 0.375, "sampled lower bound stays below the true value");
    }

    #[test]
    fn k_one_reduces_to_maximal() {
        let grid = vec![-2.0, -1.0, 0.5, 2.0, 4.0];
        let a = iterate_maximal(&chi01(), 1, &grid).unwrap();
        let b = maximal_on_grid(&chi01(), &grid);
        assert_eq!(a, b);
    }

    #[test]
    fn iterate_rejects_zero() {
        assert!(iterate_maximal(&chi01(), 0, &[]).is_err());
    }

    #[test]
    fn dyadic_below_uncentered() {
        let lattice = DyadicLattice::new(-4.0, 4.0, 10).unwrap();
        let nodes: Vec<f64> = (0..=(1u64 << 10))
            .map(|i| lattice.node(10, i))
            .collect();
        let f = StepFunction1D::new(vec![-1.0, 0.25, 1.0], vec![2.0, 0.5]).unwrap();
        let md = dyadic_maximal(&f, &lattice);
        let mu = maximal_on_grid(&f, &nodes);
        for (lo, hi, v) in md.cells() {
            let x = 0.5 * (lo + hi);
            assert!(
                v <= mu.eval(x) + 1e-12,
                "dyadic must not exceed uncentered at {x}"
            );
        }
    }

    #[test]
    fn sharp_maximal_constant_is_zero() {
        let f = StepFunction1D::scaled_indicator(0.0, 1.0, 3.0).unwrap();
        // restrict attention to intervals inside the support: constant there
        let s = sharp_maximal_on_grid(&f.restrict(0.0, 1.0).unwrap(), 1.0, &[]).unwrap();
        assert!(s.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn sharp_maximal_dyadic_top_cube() {
        // f = chi_[0,1) on lattice [0,2), delta = 1: top cube mean 1/2,
        // oscillation avg |f - 1/2| = 1/2
        let f = StepFunction1D::indicator(0.0, 1.0).unwrap();
        let lattice = DyadicLattice::new(0.0, 2.0, 4).unwrap();
        let s = sharp_maximal_dyadic(&f, 1.0, &lattice).unwrap();
        // every finest cell sees the top cube's oscillation 1/2; cells inside
        // [0,1) see only that (subcubes of [0,1) are constant)
        assert_relative_eq!(s.eval(0.3), 0.5, max_relative = 1e-12);
        assert_relative_eq!(s.eval(1.7), 0.5, max_relative = 1e-12);
    }

    #[test]
    fn sharp_maximal_pointwise_bound_vs_m_delta() {
        // M_delta^# f <= 2^{1/delta} M_delta f on random steps
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let lattice = DyadicLattice::new(-8.0, 8.0, 6).unwrap();
        for _ in 0..5 {
            let mut bp: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
            bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
            bp.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
            if bp.len() < 3 {
                continue;
            }
            let vals: Vec<f64> = (0..bp.len() - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let f = StepFunction1D::new(bp, vals).unwrap();
            let delta = 0.5;
            let grid: Vec<f64> = (-40..=40).map(|i| i as f64 * 0.2).collect();
            let sharp = sharp_maximal_on_grid(&f, delta, &grid).unwrap();
            let mdelta = maximal(
                &f,
                MaximalMode::Uncentered,
                delta,
                &grid,
                &lattice,
            )
            .unwrap();
            let cap = 2f64.powf(1.0 / delta);
            for (lo, hi, v) in sharp.cells() {
                let x = 0.5 * (lo + hi);
                let rhs = cap * mdelta.eval(x);
                assert!(
                    v <= rhs + 1e-9,
                    "sharp {v} vs 2^(1/d) M_d {rhs} at {x}"
                );
            }
        }
    }

    #[test]
    fn sharp_maximal_shift_invariant() {
        let f = StepFunction1D::new(vec![0.0, 0.5, 1.0], vec![2.0, -1.0]).unwrap();
        let g = StepFunction1D::new(vec![0.0, 0.5, 1.0], vec![2.0 + 17.0, -1.0 + 17.0]).unwrap();
        // compare over intervals inside the common span (outside, the zero
        // exterior breaks the shift)
        let sf = sharp_maximal_on_grid(&f.restrict(0.0, 1.0).unwrap(), 0.5, &[]).unwrap();
        let sg = sharp_maximal_on_grid(&g.restrict(0.0, 1.0).unwrap(), 0.5, &[]).unwrap();
        for ((_, _, a), (_, _, b)) in sf.cells().zip(sg.cells()) {
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-12);
        }
    }
}
