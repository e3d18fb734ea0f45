//! Simple polygons with a bucketed segment index for fast membership and
//! distance queries.

use std::sync::Arc;

use super::cube::Aabb;
use super::domain::Domain;
use super::exact::{ExactPoint, ExactSegment, Qs3};
use crate::Point;

/// Where exact vertex coordinates come from.
#[derive(Clone, Debug)]
pub enum ExactVertices {
    /// The f64 vertices are exact (dyadic inputs).
    Dyadic,
    /// Vertices computed in Q(sqrt 3) by a generator.
    Field(Arc<Vec<ExactPoint>>),
}

#[derive(Clone, Debug)]
struct SegmentGrid {
    origin: [f64; 2],
    cell: f64,
    dims: [usize; 2],
    cells: Vec<Vec<u32>>,
}

impl SegmentGrid {
    fn build(verts: &[[f64; 2]], bbox: &Aabb<2>) -> Self {
        let n = verts.len().max(1);
        let ext = (bbox.hi[0] - bbox.lo[0]).max(bbox.hi[1] - bbox.lo[1]).max(1e-12);
        let per_axis = ((n as f64).sqrt().ceil() as usize).clamp(1, 2048);
        let cell = ext / per_axis as f64 * (1.0 + 1e-9);
        let dims = [
            (((bbox.hi[0] - bbox.lo[0]) / cell).ceil() as usize).max(1),
            (((bbox.hi[1] - bbox.lo[1]) / cell).ceil() as usize).max(1),
        ];
        let mut cells = vec![Vec::new(); dims[0] * dims[1]];
        let origin = bbox.lo;
        for s in 0..verts.len() {
            let a = verts[s];
            let b = verts[(s + 1) % verts.len()];
            let cx = |v: f64| (((v - origin[0]) / cell).floor().max(0.0) as usize).min(dims[0] - 1);
            let cy = |v: f64| (((v - origin[1]) / cell).floor().max(0.0) as usize).min(dims[1] - 1);
            let (x0, x1) = (cx(a[0].min(b[0])), cx(a[0].max(b[0])));
            let (y0, y1) = (cy(a[1].min(b[1])), cy(a[1].max(b[1])));
            for iy in y0..=y1 {
                for ix in x0..=x1 {
                    cells[iy * dims[0] + ix].push(s as u32);
                }
            }
        }
        Self {
            origin,
            cell,
            dims,
            cells,
        }
    }

    fn clamp_cell(&self, x: &[f64; 2]) -> [i64; 2] {
        let mut c = [0i64; 2];
        for i in 0..2 {
            let v = ((x[i] - self.origin[i]) / self.cell).floor() as i64;
            c[i] = v.clamp(0, self.dims[i] as i64 - 1);
        }
        c
    }

    fn bucket(&self, ix: i64, iy: i64) -> &[u32] {
        &self.cells[iy as usize * self.dims[0] + ix as usize]
    }
}

/// Closed-curve polygon; the domain is the bounded interior.
#[derive(Clone, Debug)]
pub struct Polygon {
    name: String,
    verts: Vec<[f64; 2]>,
    exact: ExactVertices,
    bbox: Aabb<2>,
    grid: SegmentGrid,
}

impl Polygon {
    pub fn new(name: impl Into<String>, verts: Vec<[f64; 2]>, exact: ExactVertices) -> Self {
        assert!(verts.len() >= 3, "polygon needs at least three vertices");
        let mut bbox = Aabb::new([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for v in &verts {
            for i in 0..2 {
                bbox.lo[i] = bbox.lo[i].min(v[i]);
                bbox.hi[i] = bbox.hi[i].max(v[i]);
            }
        }
        let grid = SegmentGrid::build(&verts, &bbox);
        Self {
            name: name.into(),
            verts,
            exact,
            bbox,
            grid,
        }
    }

    /// `[0,2]^2` minus `[1,2]^2`.
    pub fn l_shape() -> Self {
        Self::new(
            "L-shape",
            vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]],
            ExactVertices::Dyadic,
        )
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.verts
    }

    pub fn edge_count(&self) -> usize {
        self.verts.len()
    }

    fn segment(&self, s: usize) -> ([f64; 2], [f64; 2]) {
        (self.verts[s], self.verts[(s + 1) % self.verts.len()])
    }

    pub fn exact_vertices(&self) -> Vec<ExactPoint> {
        match &self.exact {
            ExactVertices::Dyadic => self
                .verts
                .iter()
                .map(|v| [Qs3::from_f64(v[0]), Qs3::from_f64(v[1])])
                .collect(),
            ExactVertices::Field(v) => v.as_ref().clone(),
        }
    }

    /// Index of the nearest segment and its distance.
    pub fn nearest_segment(&self, x: &[f64; 2]) -> (usize, f64) {
        let g = &self.grid;
        let c = g.clamp_cell(x);
        let off = Aabb::new(
            g.origin,
            [
                g.origin[0] + g.dims[0] as f64 * g.cell,
                g.origin[1] + g.dims[1] as f64 * g.cell,
            ],
        )
        .distance(x);
        let mut best = (usize::MAX, f64::INFINITY);
        let max_ring = g.dims[0].max(g.dims[1]) as i64;
        for k in 0..=max_ring {
            if best.1.is_finite() && (k - 1) as f64 * g.cell - off > best.1 {
                break;
            }
            for iy in (c[1] - k)..=(c[1] + k) {
                if iy < 0 || iy >= g.dims[1] as i64 {
                    continue;
                }
                let ring_row = iy == c[1] - k || iy == c[1] + k;
                let step = if ring_row { 1 } else { (2 * k).max(1) };
                let mut ix = c[0] - k;
                while ix <= c[0] + k {
                    if ix >= 0 && ix < g.dims[0] as i64 {
                        for &s in g.bucket(ix, iy) {
                            let (a, b) = self.segment(s as usize);
                            let d = point_segment_distance(x, &a, &b);
                            if d < best.1 || (d == best.1 && (s as usize) < best.0) {
                                best = (s as usize, d);
                            }
                        }
                    }
                    ix += step;
                }
            }
        }
        best
    }

    /// Rough 1-centre search: minimise the farthest-vertex distance over a
    /// grid of interior points, then refine by pattern search.
    fn search_rad(&self) -> f64 {
        let far = |c: &[f64; 2]| {
            self.verts
                .iter()
                .map(|v| ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2)).sqrt())
                .fold(0.0f64, f64::max)
        };
        let n = 48;
        let mut best = ([0.0; 2], f64::INFINITY);
        for i in 0..n {
            for j in 0..n {
                let c = [
                    self.bbox.lo[0] + (i as f64 + 0.5) / n as f64 * (self.bbox.hi[0] - self.bbox.lo[0]),
                    self.bbox.lo[1] + (j as f64 + 0.5) / n as f64 * (self.bbox.hi[1] - self.bbox.lo[1]),
                ];
                if self.contains(&c) {
                    let r = far(&c);
                    if r < best.1 {
                        best = (c, r);
                    }
                }
            }
        }
        let mut step = (self.bbox.hi[0] - self.bbox.lo[0]).max(self.bbox.hi[1] - self.bbox.lo[1]) / n as f64;
        while step > 1e-10 {
            let mut improved = false;
            for d in [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]] {
                let c = [best.0[0] + step * d[0], best.0[1] + step * d[1]];
                if self.contains(&c) {
                    let r = far(&c);
                    if r < best.1 {
                        best = (c, r);
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best.1
    }
}

pub(crate) fn point_segment_distance(x: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let w = [x[0] - a[0], x[1] - a[1]];
    let len = d[0] * d[0] + d[1] * d[1];
    let t = if len > 0.0 {
        ((w[0] * d[0] + w[1] * d[1]) / len).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let p = [a[0] + t * d[0] - x[0], a[1] + t * d[1] - x[1]];
    (p[0] * p[0] + p[1] * p[1]).sqrt()
}

impl Domain<2> for Polygon {
    fn contains(&self, x: &Point<2>) -> bool {
        if !self.bbox.contains(x) {
            return false;
        }
        // crossing number along the ray to +x, each crossing counted in the
        // bucket that holds its intersection point
        let g = &self.grid;
        let c = g.clamp_cell(x);
        let mut inside = false;
        for ix in c[0]..g.dims[0] as i64 {
            for &s in g.bucket(ix, c[1]) {
                let (a, b) = self.segment(s as usize);
                if (a[1] > x[1]) != (b[1] > x[1]) {
                    let xi = a[0] + (x[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                    if xi > x[0] {
                        let cell = (((xi - g.origin[0]) / g.cell).floor() as i64).clamp(0, g.dims[0] as i64 - 1);
                        if cell == ix {
                            inside = !inside;
                        }
                    }
                }
            }
        }
        inside && self.nearest_segment(x).1 > 0.0
    }

    fn boundary_distance(&self, x: &Point<2>) -> f64 {
        self.nearest_segment(x).1
    }

    fn bounding_box(&self) -> Aabb<2> {
        self.bbox
    }

    fn kind(&self) -> String {
        self.name.clone()
    }

    fn rad(&self) -> Option<f64> {
        Some(self.search_rad())
    }

    fn exact_boundary(&self, _window: &Aabb<2>) -> Option<Vec<ExactSegment>> {
        let v = self.exact_vertices();
        let n = v.len();
        Some(
            (0..n)
                .map(|i| ExactSegment {
                    a: v[i].clone(),
                    b: v[(i + 1) % n].clone(),
                })
                .collect(),
        )
    }
}
