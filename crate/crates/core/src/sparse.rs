//! Dyadic lattices, eta-sparse families, and the sparse operators
//! `A_S`, `T_{b,S}`, `T*_{b,S}`.

use crate::error::{invalid, Error, Result};
use crate::stepfn::{merge_nodes, StepFunction1D};
use serde::{Deserialize, Serialize};

/// Binary lattice over a half-open root interval `[r0, r1)`; cubes at depth
/// `d` are the `2^d` equal subintervals, addressed by `(depth, index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicLattice {
    r0: f64,
    r1: f64,
    max_depth: u32,
}

impl DyadicLattice {
    pub fn new(r0: f64, r1: f64, max_depth: u32) -> Result<Self> {
        if !(r0 < r1) || !r0.is_finite() || !r1.is_finite() {
            return Err(invalid("lattice root must satisfy r0 < r1"));
        }
        if max_depth > 52 {
            return Err(invalid("lattice depth beyond f64 resolution"));
        }
        Ok(Self { r0, r1, max_depth })
    }

    pub fn root(&self) -> (f64, f64) {
        (self.r0, self.r1)
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    /// Left endpoint of the `i`-th node at `depth` (exact: division by a
    /// power of two).
    pub fn node(&self, depth: u32, i: u64) -> f64 {
        self.r0 + (self.r1 - self.r0) * (i as f64 / (1u64 << depth) as f64)
    }

    pub fn cube_interval(&self, depth: u32, index: u64) -> (f64, f64) {
        (self.node(depth, index), self.node(depth, index + 1))
    }

    pub fn cube_len(&self, depth: u32) -> f64 {
        (self.r1 - self.r0) / (1u64 << depth) as f64
    }

    pub fn contains_cube(&self, depth: u32, index: u64) -> bool {
        depth <= self.max_depth && index < (1u64 << depth)
    }

    /// All node positions at the lattice's max depth.
    pub fn finest_nodes(&self) -> Vec<f64> {
        (0..=(1u64 << self.max_depth))
            .map(|i| self.node(self.max_depth, i))
            .collect()
    }
}

/// Cube address within a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeId {
    pub depth: u32,
    pub index: u64,
}

/// One sparse cube: the cube and its owned portion `E_Q` as a finite union
/// of lattice cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseCube {
    pub depth: u32,
    pub index: u64,
    pub e_cells: Vec<(u32, u64)>,
}

/// An eta-sparse family: for each cube `Q` a portion `E_Q ⊆ Q`, the portions
/// pairwise disjoint with `|E_Q| >= eta |Q|`.
#[derive(Debug, Clone)]
pub struct SparseFamily {
    pub lattice: DyadicLattice,
    pub cubes: Vec<SparseCube>,
    pub eta: f64,
}

/// Result of [`verify_sparse`].
#[derive(Debug, Clone)]
pub struct SparseReport {
    pub ok: bool,
    pub worst_eta: f64,
    pub violations: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    root: [f64; 2],
    cubes: Vec<SparseCube>,
}

impl SparseFamily {
    pub fn new(lattice: DyadicLattice, cubes: Vec<SparseCube>, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(invalid("eta must lie in (0, 1]"));
        }
        Ok(Self {
            lattice,
            cubes,
            eta,
        })
    }

    /// JSON schema: `{root: [r0, r1], cubes: [{depth, index, e_cells: [[d, i], ...]}, ...]}`.
    pub fn to_json(&self) -> String {
        let doc = FamilyJson {
            root: [self.lattice.r0, self.lattice.r1],
            cubes: self.cubes.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(s: &str, eta: f64) -> Result<Self> {
        let doc: FamilyJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("sparse family json: {e}")))?;
        let max_depth = doc
            .cubes
            .iter()
            .flat_map(|c| std::iter::once(c.depth).chain(c.e_cells.iter().map(|e| e.0)))
            .max()
            .unwrap_or(0);
        let lattice = DyadicLattice::new(doc.root[0], doc.root[1], max_depth)?;
        SparseFamily::new(lattice, doc.cubes, eta)
    }

    /// The `tower` family `{[0, 2^{-j}) : j = 0..depth}` on root `[0, 1)`
    /// with `E_Q` the right halves; eta = 1/2.
    pub fn tower(depth: u32) -> Self {
        let lattice = DyadicLattice::new(0.0, 1.0, depth + 1).unwrap();
        let cubes = (0..=depth)
            .map(|j| SparseCube {
                depth: j,
                index: 0,
                e_cells: vec![(j + 1, 1)],
            })
            .collect();
        SparseFamily {
            lattice,
            cubes,
            eta: 0.5,
        }
    }

    fn e_measure(&self, cube: &SparseCube) -> f64 {
        cube.e_cells
            .iter()
            .map(|&(d, _)| self.lattice.cube_len(d))
            .sum()
    }
}

/// Checks containment, pairwise disjointness of the portions, and the
/// measure ratio `|E_Q| >= eta |Q|`; reports the worst ratio.
pub fn verify_sparse(family: &SparseFamily) -> Result<SparseReport> {
    let lat = &family.lattice;
    let mut violations = Vec::new();
    let mut worst_eta = f64::INFINITY;
    let mut portions: Vec<(f64, f64, usize)> = Vec::new();
    for (ci, cube) in family.cubes.iter().enumerate() {
        if !lat.contains_cube(cube.depth, cube.index) {
            return Err(invalid(format!(
                "cube (depth {}, index {}) outside the lattice",
                cube.depth, cube.index
            )));
        }
        let (q0, q1) = lat.cube_interval(cube.depth, cube.index);
        for &(d, i) in &cube.e_cells {
            if !lat.contains_cube(d, i) {
                return Err(invalid(format!(
                    "portion cell (depth {d}, index {i}) outside the lattice"
                )));
            }
            let (e0, e1) = lat.cube_interval(d, i);
            if e0 < q0 || e1 > q1 {
                violations.push(format!(
                    "E cell ({d},{i}) not contained in cube ({},{})",
                    cube.depth, cube.index
                ));
            }
            portions.push((e0, e1, ci));
        }
        let ratio = family.e_measure(cube) / lat.cube_len(cube.depth);
        worst_eta = worst_eta.min(ratio);
        if ratio < family.eta - 1e-12 {
            violations.push(format!(
                "cube ({},{}) portion ratio {ratio} below eta {}",
                cube.depth, cube.index, family.eta
            ));
        }
    }
    portions.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in portions.windows(2) {
        if w[1].0 < w[0].1 - 1e-15 {
            violations.push(format!(
                "portions of cubes #{} and #{} overlap on [{}, {})",
                w[0].2, w[1].2, w[1].0, w[0].1
            ));
        }
    }
    if !worst_eta.is_finite() {
        worst_eta = 0.0;
    }
    Ok(SparseReport {
        ok: violations.is_empty(),
        worst_eta,
        violations,
    })
}

/// `A_S f = sum_Q avg_Q(f) chi_Q`, exact on the merged grid of cube endpoints
/// and `f`'s breakpoints. Terms are accumulated in lattice order (depth, then
/// index) so repeated runs are bit-identical.
pub fn apply_sparse(family: &SparseFamily, f: &StepFunction1D) -> Result<StepFunction1D> {
    let lat = &family.lattice;
    let mut nodes: Vec<f64> = f.breakpoints().to_vec();
    for cube in &family.cubes {
        let (q0, q1) = lat.cube_interval(cube.depth, cube.index);
        nodes.push(q0);
        nodes.push(q1);
    }
    let grid = merge_nodes(&[&nodes]);
    let mut out = vec![0.0f64; grid.len() - 1];
    let mut order: Vec<&SparseCube> = family.cubes.iter().collect();
    order.sort_by_key(|c| (c.depth, c.index));
    for cube in order {
        let (q0, q1) = lat.cube_interval(cube.depth, cube.index);
        let avg = f.integrate(q0, q1)? / (q1 - q0);
        for (ci, w) in grid.windows(2).enumerate() {
            if w[0] >= q0 && w[1] <= q1 {
                out[ci] += avg;
            }
        }
    }
    StepFunction1D::new(grid, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommutatorVariant {
    /// `T_{b,S} f = sum_Q |b(x) - b_Q| avg_Q|f| chi_Q(x)`
    Direct,
    /// `T*_{b,S} f = sum_Q avg_Q(|b - b_Q| |f|) chi_Q(x)`
    Star,
}

/// Sparse commutator forms; `b` must be explicitly defined on the lattice
/// root (its span must cover it).
pub fn apply_commutator_sparse(
    family: &SparseFamily,
    b: &StepFunction1D,
    f: &StepFunction1D,
    variant: CommutatorVariant,
) -> Result<StepFunction1D> {
    let lat = &family.lattice;
    let (r0, r1) = lat.root();
    let (b_lo, b_hi) = b.span();
    if b_lo > r0 || b_hi < r1 {
        return Err(invalid(
            "symbol b must be explicitly defined on the lattice root",
        ));
    }
    let mut nodes: Vec<f64> = f.breakpoints().to_vec();
    nodes.extend_from_slice(b.breakpoints());
    for cube in &family.cubes {
        let (q0, q1) = lat.cube_interval(cube.depth, cube.index);
        nodes.push(q0);
        nodes.push(q1);
    }
    let grid = merge_nodes(&[&nodes]);
    let mids: Vec<f64> = grid.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let mut out = vec![0.0f64; grid.len() - 1];
    let mut order: Vec<&SparseCube> = family.cubes.iter().collect();
    order.sort_by_key(|c| (c.depth, c.index));
    for cube in order {
        let (q0, q1) = lat.cube_interval(cube.depth, cube.index);
        let len = q1 - q0;
        let b_avg = b.integrate(q0, q1)? / len;
        match variant {
            CommutatorVariant::Direct => {
                let favg = f
                    .transform(crate::stepfn::Transform::Abs)?
                    .integrate(q0, q1)?
                    / len;
                for (ci, (w, m)) in grid.windows(2).zip(&mids).enumerate() {
                    if w[0] >= q0 && w[1] <= q1 {
                        out[ci] += (b.eval(*m) - b_avg).abs() * favg;
                    }
                }
            }
            CommutatorVariant::Star => {
                let mut acc = 0.0;
                for (w, m) in grid.windows(2).zip(&mids) {
                    if w[0] >= q0 && w[1] <= q1 {
                        acc += (b.eval(*m) - b_avg).abs() * f.eval(*m).abs() * (w[1] - w[0]);
                    }
                }
                let avg = acc / len;
                for (ci, w) in grid.windows(2).enumerate() {
                    if w[0] >= q0 && w[1] <= q1 {
                        out[ci] += avg;
                    }
                }
            }
        }
    }
    StepFunction1D::new(grid, out)
}
