//! Q1 elements on a staircase subdomain of a uniform 2-D grid.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::sparse::{pcg, Csr};
use super::tensor::CoefficientTensor;
use crate::error::{invalid, Error, Result};
use crate::funcspace::quadrature::gauss_legendre;
use crate::funcspace::Field;
use crate::geometry::Domain;
use crate::Point;

/// Distance to the Dirichlet part `D`; `f64::INFINITY` for `D = ∅`.
pub type DistanceFn = Arc<dyn Fn(&Point<2>) -> f64 + Send + Sync>;

/// A boundary edge of the active cells with its outward normal.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub normal: [f64; 2],
}

/// Nodes of the cells whose closure lies in `Ω̄`, with the nodes closer
/// than `h` to `D` constrained to 0.
#[derive(Clone, Debug)]
pub struct FemSpace {
    pub lo: [f64; 2],
    pub h: f64,
    pub cells: [usize; 2],
    /// Active cell ids `iy * nx + ix`, ascending.
    pub active: Vec<usize>,
    /// Lattice node id to node index (`usize::MAX` if unused).
    node_of_lattice: Vec<usize>,
    /// Lattice node id of each node.
    pub nodes: Vec<usize>,
    pub constrained: Vec<bool>,
    /// Indices of the unconstrained nodes, ascending.
    pub free: Vec<usize>,
    pub boundary_edges: Vec<BoundaryEdge>,
}

fn in_closure(domain: &dyn Domain<2>, x: &Point<2>, h: f64) -> bool {
    domain.contains(x) || domain.boundary_distance(x) <= 1e-12 * h
}

impl FemSpace {
    pub fn new(domain: &dyn Domain<2>, lo: [f64; 2], hi: [f64; 2], h: f64, d_distance: &DistanceFn) -> Result<Self> {
        if !(h > 0.0) {
            return invalid("grid spacing must be positive");
        }
        let cells = [
            ((hi[0] - lo[0]) / h).round() as usize,
            ((hi[1] - lo[1]) / h).round() as usize,
        ];
        if cells[0] == 0 || cells[1] == 0 {
            return invalid("empty grid");
        }
        let (nx, ny) = (cells[0], cells[1]);
        let corner = |ix: usize, iy: usize| [lo[0] + ix as f64 * h, lo[1] + iy as f64 * h];
        let is_active: Vec<bool> = (0..nx * ny)
            .into_par_iter()
            .map(|c| {
                let (ix, iy) = (c % nx, c / nx);
                let center = [lo[0] + (ix as f64 + 0.5) * h, lo[1] + (iy as f64 + 0.5) * h];
                domain.contains(&center)
                    && [(0, 0), (1, 0), (0, 1), (1, 1)]
                        .iter()
                        .all(|&(a, b)| in_closure(domain, &corner(ix + a, iy + b), h))
            })
            .collect();
        let active: Vec<usize> = (0..nx * ny).filter(|&c| is_active[c]).collect();
        let mut used = vec![false; (nx + 1) * (ny + 1)];
        for &c in &active {
            let (ix, iy) = (c % nx, c / nx);
            for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                used[(iy + b) * (nx + 1) + ix + a] = true;
            }
        }
        let mut node_of_lattice = vec![usize::MAX; used.len()];
        let mut nodes = Vec::new();
        for (l, &u) in used.iter().enumerate() {
            if u {
                node_of_lattice[l] = nodes.len();
                nodes.push(l);
            }
        }
        if nodes.is_empty() {
            return Err(Error::EmptySpace);
        }
        let constrained: Vec<bool> = nodes
            .iter()
            .map(|&l| d_distance(&corner(l % (nx + 1), l / (nx + 1))) < h)
            .collect();
        let free: Vec<usize> = (0..nodes.len()).filter(|&i| !constrained[i]).collect();
        if free.is_empty() {
            return Err(Error::EmptySpace);
        }
        let act = |ix: i64, iy: i64| {
            ix >= 0 && iy >= 0 && (ix as usize) < nx && (iy as usize) < ny && is_active[iy as usize * nx + ix as usize]
        };
        let nid = |ix: usize, iy: usize| node_of_lattice[iy * (nx + 1) + ix];
        let mut boundary_edges = Vec::new();
        for &c in &active {
            let (ix, iy) = (c % nx, c / nx);
            let (x, y) = (ix as i64, iy as i64);
            if !act(x, y - 1) {
                boundary_edges.push(BoundaryEdge {
                    a: nid(ix, iy),
                    b: nid(ix + 1, iy),
                    normal: [0.0, -1.0],
                });
            }
            if !act(x, y + 1) {
                boundary_edges.push(BoundaryEdge {
                    a: nid(ix, iy + 1),
                    b: nid(ix + 1, iy + 1),
                    normal: [0.0, 1.0],
                });
            }
            if !act(x - 1, y) {
                boundary_edges.push(BoundaryEdge {
                    a: nid(ix, iy),
                    b: nid(ix, iy + 1),
                    normal: [-1.0, 0.0],
                });
            }
            if !act(x + 1, y) {
                boundary_edges.push(BoundaryEdge {
                    a: nid(ix + 1, iy),
                    b: nid(ix + 1, iy + 1),
                    normal: [1.0, 0.0],
                });
            }
        }
        Ok(Self {
            lo,
            h,
            cells,
            active,
            node_of_lattice,
            nodes,
            constrained,
            free,
            boundary_edges,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_point(&self, i: usize) -> Point<2> {
        let l = self.nodes[i];
        let nx = self.cells[0] + 1;
        [
            self.lo[0] + (l % nx) as f64 * self.h,
            self.lo[1] + (l / nx) as f64 * self.h,
        ]
    }

    /// Lower-left corner of a cell.
    pub fn cell_origin(&self, c: usize) -> Point<2> {
        let nx = self.cells[0];
        [
            self.lo[0] + (c % nx) as f64 * self.h,
            self.lo[1] + (c / nx) as f64 * self.h,
        ]
    }

    /// Node indices in the order `(0,0), (1,0), (0,1), (1,1)`.
    pub fn cell_nodes(&self, c: usize) -> [usize; 4] {
        let nx = self.cells[0];
        let (ix, iy) = (c % nx, c / nx);
        let l = |a: usize, b: usize| self.node_of_lattice[(iy + b) * (nx + 1) + ix + a];
        [l(0, 0), l(1, 0), l(0, 1), l(1, 1)]
    }

    /// The active cell containing `x`, if any.
    pub fn locate(&self, x: &Point<2>) -> Option<usize> {
        let fx = (x[0] - self.lo[0]) / self.h;
        let fy = (x[1] - self.lo[1]) / self.h;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (ix, iy) = (
            (fx as usize).min(self.cells[0] - 1),
            (fy as usize).min(self.cells[1] - 1),
        );
        if fx > self.cells[0] as f64 || fy > self.cells[1] as f64 {
            return None;
        }
        let c = iy * self.cells[0] + ix;
        self.active.binary_search(&c).ok().map(|_| c)
    }

    /// Nodal interpolant of a field.
    pub fn interpolate(&self, u: &dyn Fn(&Point<2>) -> f64) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                if self.constrained[i] {
                    0.0
                } else {
                    u(&self.node_point(i))
                }
            })
            .collect()
    }
}

/// Shape values and reference gradients at `(s, t)` in `[0, 1]^2`.
pub fn shape(s: f64, t: f64) -> ([f64; 4], [[f64; 2]; 4]) {
    (
        [(1.0 - s) * (1.0 - t), s * (1.0 - t), (1.0 - s) * t, s * t],
        [[-(1.0 - t), -(1.0 - s)], [1.0 - t, -s], [-t, 1.0 - s], [t, s]],
    )
}

/// Tensor Gauss rule on `[0, 1]^2`: `((s, t), weight)`.
pub fn cell_rule(m: usize) -> Vec<([f64; 2], f64)> {
    let (x, w) = gauss_legendre(m);
    let mut out = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            out.push(([0.5 * (x[i] + 1.0), 0.5 * (x[j] + 1.0)], 0.25 * w[i] * w[j]));
        }
    }
    out
}

type DensityFn = Arc<dyn Fn(&Point<2>) -> f64 + Send + Sync>;
type FluxFn = Arc<dyn Fn(&Point<2>) -> [f64; 2] + Send + Sync>;
type BoundaryFn = Arc<dyn Fn(&Point<2>, &[f64; 2]) -> f64 + Send + Sync>;

/// `⟨f, v⟩ = ∫ ρ v + ∫ F·∇v + ∫_{∂Ω_h} g v`.
#[derive(Clone, Default)]
pub struct Load {
    pub density: Option<DensityFn>,
    pub flux: Option<FluxFn>,
    /// `g(x, ν)` on the boundary edges.
    pub boundary: Option<BoundaryFn>,
}

impl Load {
    pub fn density(f: impl Fn(&Point<2>) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            density: Some(Arc::new(f)),
            ..Default::default()
        }
    }

    pub fn with_flux(mut self, f: impl Fn(&Point<2>) -> [f64; 2] + Send + Sync + 'static) -> Self {
        self.flux = Some(Arc::new(f));
        self
    }

    pub fn with_boundary(mut self, g: impl Fn(&Point<2>, &[f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        self.boundary = Some(Arc::new(g));
        self
    }
}

/// `-div(A ∇u) = f` in `Ω`, `u = 0` on `D`, conormal data elsewhere.
#[derive(Clone)]
pub struct WeakProblem {
    pub tensor: CoefficientTensor,
    pub space: FemSpace,
    pub load: Load,
    /// Gauss points per axis for the load.
    pub load_order: usize,
}

impl WeakProblem {
    pub fn new(tensor: CoefficientTensor, space: FemSpace, load: Load) -> Self {
        Self {
            tensor,
            space,
            load,
            load_order: 2,
        }
    }
}

/// The system over all nodes, before constrained rows are removed.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub matrix: Csr,
    pub rhs: Vec<f64>,
}

/// `B_ij = Σ ∫ A∇φ_j·∇φ_i` (2x2 Gauss per cell) and the load vector.
pub fn assemble_full(space: &FemSpace, tensor: &CoefficientTensor, load: &Load, load_order: usize) -> Assembled {
    let h = space.h;
    let rule = cell_rule(2);
    let lrule = cell_rule(load_order);
    let elements: Vec<([[f64; 4]; 4], [f64; 4])> = space
        .active
        .par_iter()
        .map(|&c| {
            let o = space.cell_origin(c);
            let mut k = [[0.0; 4]; 4];
            for ([s, t], w) in &rule {
                let x = [o[0] + s * h, o[1] + t * h];
                let a = tensor.matrix2(&x);
                let (_, g) = shape(*s, *t);
                for i in 0..4 {
                    for j in 0..4 {
                        let ag = [
                            a[0][0] * g[j][0] + a[0][1] * g[j][1],
                            a[1][0] * g[j][0] + a[1][1] * g[j][1],
                        ];
                        // reference gradients scale by 1/h, the area by h^2
                        k[i][j] += w * (ag[0] * g[i][0] + ag[1] * g[i][1]);
                    }
                }
            }
            let mut f = [0.0; 4];
            for ([s, t], w) in &lrule {
                let x = [o[0] + s * h, o[1] + t * h];
                let (v, g) = shape(*s, *t);
                if let Some(rho) = &load.density {
                    let r = rho(&x);
                    for i in 0..4 {
                        f[i] += w * h * h * r * v[i];
                    }
                }
                if let Some(fl) = &load.flux {
                    let q = fl(&x);
                    for i in 0..4 {
                        f[i] += w * h * (q[0] * g[i][0] + q[1] * g[i][1]);
                    }
                }
            }
            (k, f)
        })
        .collect();
    let n = space.len();
    let mut trip = Vec::with_capacity(16 * elements.len());
    let mut rhs = vec![0.0; n];
    for (&c, (k, f)) in space.active.iter().zip(&elements) {
        let ids = space.cell_nodes(c);
        for i in 0..4 {
            rhs[ids[i]] += f[i];
            for j in 0..4 {
                trip.push((ids[i], ids[j], k[i][j]));
            }
        }
    }
    if let Some(g) = &load.boundary {
        let (x, w) = gauss_legendre(load_order);
        for e in &space.boundary_edges {
            let (pa, pb) = (space.node_point(e.a), space.node_point(e.b));
            for (xi, wi) in x.iter().zip(&w) {
                let s = 0.5 * (xi + 1.0);
                let p = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
                let val = g(&p, &e.normal) * 0.5 * wi * h;
                rhs[e.a] += val * (1.0 - s);
                rhs[e.b] += val * s;
            }
        }
    }
    Assembled {
        matrix: Csr::from_triplets(n, trip),
        rhs,
    }
}

/// Full assembly after the sampled ellipticity check.
pub fn assemble(problem: &WeakProblem) -> Result<Assembled> {
    let s = &problem.space;
    let reach = [
        s.lo[0].abs(),
        s.lo[1].abs(),
        s.lo[0] + s.cells[0] as f64 * s.h,
        s.lo[1] + s.cells[1] as f64 * s.h,
    ]
    .iter()
    .fold(0.0f64, |m, v| m.max(v.abs()));
    problem.tensor.check_ellipticity(1000, reach.max(1e-3), 7)?;
    Ok(assemble_full(s, &problem.tensor, &problem.load, problem.load_order))
}

pub const SOLVER_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct SolveDiagnostics {
    pub nodes: usize,
    pub free: usize,
    pub iterations: usize,
    pub relative_residual: f64,
    /// `⟨B u, u⟩`.
    pub energy: f64,
    /// `⟨f, 1⟩` when `D = ∅`.
    pub compatibility: Option<f64>,
    pub conormal_residual: f64,
    /// `max |u|` over the constrained nodes.
    pub d_trace: f64,
    pub asymmetry: f64,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub space: FemSpace,
    /// Values at every node (0 on constrained nodes).
    pub values: Vec<f64>,
    pub diagnostics: SolveDiagnostics,
}

/// Solves the mixed problem with CG; for `D = ∅` the load must satisfy
/// `|⟨f, 1⟩| <= 1e-10` and the solution is taken mean-free.
pub fn solve_mixed(problem: &WeakProblem) -> Result<Solution> {
    let sys = assemble(problem)?;
    let space = &problem.space;
    let neumann = space.free.len() == space.len();
    let compatibility = neumann.then(|| sys.rhs.iter().sum::<f64>());
    if let Some(c) = compatibility {
        if c.abs() > 1e-10 {
            return Err(Error::Incompatible { mean: c });
        }
    }
    let a = sys.matrix.restrict(&space.free);
    let mut b: Vec<f64> = space.free.iter().map(|&i| sys.rhs[i]).collect();
    if neumann {
        let m = b.iter().sum::<f64>() / b.len() as f64;
        b.iter_mut().for_each(|v| *v -= m);
    }
    let out = pcg(&a, &b, SOLVER_TOL, 20 * a.n + 100, neumann)?;
    let mut values = vec![0.0; space.len()];
    for (k, &i) in space.free.iter().enumerate() {
        values[i] = out.x[k];
    }
    let mut bu = vec![0.0; space.len()];
    sys.matrix.matvec(&values, &mut bu);
    let energy = bu.iter().zip(&values).map(|(a, b)| a * b).sum();
    let conormal = crate::trace::conormal::residual_from_system(space, &sys, &values, 2.0);
    let d_trace = (0..space.len())
        .filter(|&i| space.constrained[i])
        .map(|i| values[i].abs())
        .fold(0.0, f64::max);
    Ok(Solution {
        space: space.clone(),
        values,
        diagnostics: SolveDiagnostics {
            nodes: space.len(),
            free: space.free.len(),
            iterations: out.iterations,
            relative_residual: out.relative_residual,
            energy,
            compatibility,
            conormal_residual: conormal.max,
            d_trace,
            asymmetry: sys.matrix.asymmetry(),
        },
    })
}

/// A nodal vector as a field: bilinear on active cells, 0 elsewhere.
pub struct FemField<'a> {
    pub space: &'a FemSpace,
    pub values: &'a [f64],
}

impl FemField<'_> {
    pub fn gradient(&self, x: &Point<2>) -> [f64; 2] {
        let Some(c) = self.space.locate(x) else {
            return [0.0; 2];
        };
        let o = self.space.cell_origin(c);
        let h = self.space.h;
        let (_, g) = shape((x[0] - o[0]) / h, (x[1] - o[1]) / h);
        let ids = self.space.cell_nodes(c);
        let mut out = [0.0; 2];
        for i in 0..4 {
            out[0] += self.values[ids[i]] * g[i][0] / h;
            out[1] += self.values[ids[i]] * g[i][1] / h;
        }
        out
    }
}

impl Field<2> for FemField<'_> {
    fn value(&self, x: &Point<2>) -> f64 {
        let Some(c) = self.space.locate(x) else {
            return 0.0;
        };
        let o = self.space.cell_origin(c);
        let h = self.space.h;
        let (v, _) = shape((x[0] - o[0]) / h, (x[1] - o[1]) / h);
        let ids = self.space.cell_nodes(c);
        (0..4).map(|i| v[i] * self.values[ids[i]]).sum()
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FemError {
    pub l2: f64,
    /// `(‖e‖² + ‖∇e‖²)^{1/2}`; `None` without an exact gradient.
    pub h1: Option<f64>,
}

/// Errors over the active cells, 3x3 Gauss per cell.
pub fn fem_error(
    space: &FemSpace,
    values: &[f64],
    exact: &(dyn Fn(&Point<2>) -> f64 + Sync),
    grad: Option<&(dyn Fn(&Point<2>) -> [f64; 2] + Sync)>,
) -> FemError {
    let rule = cell_rule(3);
    let h = space.h;
    let parts: Vec<(f64, f64)> = space
        .active
        .par_iter()
        .map(|&c| {
            let o = space.cell_origin(c);
            let ids = space.cell_nodes(c);
            let (mut l2, mut g2) = (0.0, 0.0);
            for ([s, t], w) in &rule {
                let x = [o[0] + s * h, o[1] + t * h];
                let (v, g) = shape(*s, *t);
                let mut uh = 0.0;
                let mut gh = [0.0; 2];
                for i in 0..4 {
                    uh += v[i] * values[ids[i]];
                    gh[0] += g[i][0] / h * values[ids[i]];
                    gh[1] += g[i][1] / h * values[ids[i]];
                }
                let e = uh - exact(&x);
                l2 += w * h * h * e * e;
                if let Some(gr) = grad {
                    let q = gr(&x);
                    g2 += w * h * h * ((gh[0] - q[0]).powi(2) + (gh[1] - q[1]).powi(2));
                }
            }
            (l2, g2)
        })
        .collect();
    let l2: f64 = parts.iter().map(|p| p.0).sum();
    let g2: f64 = parts.iter().map(|p| p.1).sum();
    FemError {
        l2: l2.sqrt(),
        h1: grad.map(|_| (l2 + g2).sqrt()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use std::f64::consts::PI;

    fn square_space(h: f64, d: DistanceFn) -> FemSpace {
        FemSpace::new(&Rect::unit(), [0.0, 0.0], [1.0, 1.0], h, &d).unwrap()
    }

    fn whole_boundary() -> DistanceFn {
        Arc::new(|x: &Point<2>| x[0].min(x[1]).min(1.0 - x[0]).min(1.0 - x[1]))
    }

    #[test]
    fn nine_point_stencil() {
        let s = square_space(0.125, whole_boundary());
        let sys = assemble_full(&s, &CoefficientTensor::identity(2, 1), &Load::default(), 2);
        let center = (0..s.len()).find(|&i| s.node_point(i) == [0.5, 0.5]).unwrap();
        let row: Vec<(usize, f64)> = sys.matrix.row(center).collect();
        assert_eq!(row.len(), 9);
        for (j, v) in row {
            let want = if j == center { 8.0 / 3.0 } else { -1.0 / 3.0 };
            assert!((v - want).abs() < 1e-14);
        }
        for i in 0..s.len() {
            assert!(sys.matrix.row(i).map(|(_, v)| v).sum::<f64>().abs() < 1e-14);
        }
        assert_eq!(sys.matrix.asymmetry(), 0.0);
    }

    #[test]
    fn constrained_nodes_follow_the_collar() {
        let left: DistanceFn = Arc::new(|x: &Point<2>| x[0].abs());
        let s = square_space(0.25, left);
        for i in 0..s.len() {
            assert_eq!(s.constrained[i], s.node_point(i)[0] == 0.0);
        }
        assert_eq!(s.boundary_edges.len(), 16);
        let all: DistanceFn = Arc::new(|_: &Point<2>| 0.0);
        assert!(matches!(
            FemSpace::new(&Rect::unit(), [0.0, 0.0], [1.0, 1.0], 0.25, &all),
            Err(Error::EmptySpace)
        ));
    }

    #[test]
    fn dirichlet_manufactured_solution() {
        let exact = |x: &Point<2>| (PI * x[0]).sin() * (PI * x[1]).sin();
        let mut errs = Vec::new();
        for h in [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
            let s = square_space(h, whole_boundary());
            let load = Load::density(move |x| 2.0 * PI * PI * (PI * x[0]).sin() * (PI * x[1]).sin());
            let sol = solve_mixed(&WeakProblem::new(CoefficientTensor::identity(2, 1), s, load)).unwrap();
            assert!(sol.diagnostics.conormal_residual <= 10.0 * SOLVER_TOL);
            errs.push(fem_error(&sol.space, &sol.values, &exact, None).l2);
        }
        assert!(errs[0] / errs[1] >= 3.5 && errs[1] / errs[2] >= 3.5, "{errs:?}");
    }

    #[test]
    fn neumann_needs_compatible_data() {
        let s = square_space(0.125, Arc::new(|_: &Point<2>| f64::INFINITY));
        let p = WeakProblem::new(CoefficientTensor::identity(2, 1), s.clone(), Load::density(|_| 1.0));
        assert!(matches!(solve_mixed(&p), Err(Error::Incompatible { .. })));
        // u = cos(πx) cos(πy): -Δu = 2π² u, zero normal derivative
        let load = Load::density(|x| 2.0 * PI * PI * (PI * x[0]).cos() * (PI * x[1]).cos());
        let mut q = WeakProblem::new(CoefficientTensor::identity(2, 1), s, load);
        q.load_order = 4;
        let sol = solve_mixed(&q).unwrap();
        assert!(sol.diagnostics.compatibility.unwrap().abs() < 1e-12);
        let u = FemField {
            space: &sol.space,
            values: &sol.values,
        };
        assert!((u.value(&[0.0, 0.0]) - 1.0).abs() < 0.05);
    }
}
