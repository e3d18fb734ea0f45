//! Certification of Whitney distance bounds on polygonal boundaries.
//!
//! Float distances only select candidates: every segment within twice the
//! lower bound, and the near-nearest segments witnessing the upper bound, are
//! decided in `Qs3` arithmetic.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::cube::Aabb;
use super::domain::Domain;
use super::exact::{ExactBox, ExactSegment, Qs3};
use super::polygon::point_segment_distance;
use super::whitney::WhitneyCover;

const FLOAT_GAP: f64 = 1e-6;

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExactReport {
    pub cubes: usize,
    pub truncated: usize,
    pub lower_violations: usize,
    pub upper_violations: usize,
    /// Segment checks done in exact arithmetic.
    pub exact_checks: usize,
    /// Extreme `dist(Q, ∂O) / ℓ(Q)` over non-truncated cubes (float values).
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl ExactReport {
    pub fn passed(&self) -> bool {
        self.lower_violations == 0 && self.upper_violations == 0
    }
}

struct SegIndex {
    segs: Vec<([f64; 2], [f64; 2])>,
    origin: [f64; 2],
    cell: f64,
    dims: [usize; 2],
    cells: Vec<Vec<u32>>,
}

impl SegIndex {
    fn new(segs: Vec<([f64; 2], [f64; 2])>, window: &Aabb<2>) -> Self {
        let ext = (window.hi[0] - window.lo[0]).max(window.hi[1] - window.lo[1]);
        let per_axis = ((segs.len() as f64).sqrt().ceil() as usize * 2).clamp(4, 1024);
        let cell = ext / per_axis as f64;
        let dims = [
            ((window.hi[0] - window.lo[0]) / cell).ceil() as usize + 1,
            ((window.hi[1] - window.lo[1]) / cell).ceil() as usize + 1,
        ];
        let mut cells = vec![Vec::new(); dims[0] * dims[1]];
        let origin = window.lo;
        let mut out = Self {
            segs: Vec::new(),
            origin,
            cell,
            dims,
            cells: Vec::new(),
        };
        for (s, (a, b)) in segs.iter().enumerate() {
            let lo = [a[0].min(b[0]), a[1].min(b[1])];
            let hi = [a[0].max(b[0]), a[1].max(b[1])];
            let (c0, c1) = out.cell_range(&lo, &hi);
            // long segments: only keep cells the segment actually passes near
            for iy in c0[1]..=c1[1] {
                for ix in c0[0]..=c1[0] {
                    let cmid = [
                        origin[0] + (ix as f64 + 0.5) * cell,
                        origin[1] + (iy as f64 + 0.5) * cell,
                    ];
                    if point_segment_distance(&cmid, a, b) <= cell {
                        cells[iy * dims[0] + ix].push(s as u32);
                    }
                }
            }
        }
        out.segs = segs;
        out.cells = cells;
        out
    }

    fn cell_range(&self, lo: &[f64; 2], hi: &[f64; 2]) -> ([usize; 2], [usize; 2]) {
        let mut a = [0; 2];
        let mut b = [0; 2];
        for i in 0..2 {
            let f = |v: f64| (((v - self.origin[i]) / self.cell).floor().max(0.0) as usize).min(self.dims[i] - 1);
            a[i] = f(lo[i]);
            b[i] = f(hi[i]);
        }
        (a, b)
    }

    /// Segments that may lie within `r` of the box.
    fn query(&self, b: &Aabb<2>, r: f64, out: &mut Vec<u32>) {
        out.clear();
        let lo = [b.lo[0] - r, b.lo[1] - r];
        let hi = [b.hi[0] + r, b.hi[1] + r];
        let (c0, c1) = self.cell_range(&lo, &hi);
        for iy in c0[1]..=c1[1] {
            for ix in c0[0]..=c1[0] {
                out.extend_from_slice(&self.cells[iy * self.dims[0] + ix]);
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}

fn box_segment_distance(b: &Aabb<2>, a: &[f64; 2], c: &[f64; 2]) -> f64 {
    if segment_meets_box(b, a, c) {
        return 0.0;
    }
    let corners = [
        [b.lo[0], b.lo[1]],
        [b.hi[0], b.lo[1]],
        [b.hi[0], b.hi[1]],
        [b.lo[0], b.hi[1]],
    ];
    let mut best = f64::INFINITY;
    for p in &corners {
        best = best.min(point_segment_distance(p, a, c));
    }
    best.min(b.distance(a)).min(b.distance(c))
}

fn segment_meets_box(b: &Aabb<2>, a: &[f64; 2], c: &[f64; 2]) -> bool {
    for i in 0..2 {
        if a[i].max(c[i]) < b.lo[i] || a[i].min(c[i]) > b.hi[i] {
            return false;
        }
    }
    let d = [c[0] - a[0], c[1] - a[1]];
    let mut pos = false;
    let mut neg = false;
    for p in [
        [b.lo[0], b.lo[1]],
        [b.hi[0], b.lo[1]],
        [b.hi[0], b.hi[1]],
        [b.lo[0], b.hi[1]],
    ] {
        let s = d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0]);
        if s > 0.0 {
            pos = true;
        } else if s < 0.0 {
            neg = true;
        } else {
            return true;
        }
    }
    pos && neg
}

/// Checks `√2 ℓ <= dist(Q, ∂O)` for every cube and `dist(Q, ∂O) <= 4√2 ℓ`
/// for non-truncated cubes. `None` when the domain has no exact boundary.
pub fn verify_exact(cover: &WhitneyCover<2>, domain: &dyn Domain<2>) -> Option<ExactReport> {
    let window = cover.lattice.bounds();
    let exact = domain.exact_boundary(&window)?;
    let floats: Vec<_> = exact
        .iter()
        .map(|s| ([s.a[0].to_f64(), s.a[1].to_f64()], [s.b[0].to_f64(), s.b[1].to_f64()]))
        .collect();
    let span = (window.hi[0] - window.lo[0]).max(window.hi[1] - window.lo[1]);
    let mut big = window;
    for i in 0..2 {
        big.lo[i] -= 8.0 * span;
        big.hi[i] += 8.0 * span;
    }
    let index = SegIndex::new(floats, &big);

    struct One {
        lower_bad: bool,
        upper_bad: bool,
        exact: usize,
        ratio: f64,
    }

    let per: Vec<One> = (0..cover.len())
        .into_par_iter()
        .map_init(Vec::new, |cand, i| {
            let q = &cover.cubes[i];
            let b = q.bounds(&cover.lattice);
            let l = q.side(&cover.lattice);
            let lower = 2f64.sqrt() * l;
            let upper = 4.0 * 2f64.sqrt() * l;
            let truncated = cover.truncated[i];
            let ebox = ExactBox::from_f64(b.lo, b.hi);
            let lq = Qs3::from_f64(l);
            let l2 = &lq * &lq;
            let lower_sq = &Qs3::int(2) * &l2;
            let upper_sq = &Qs3::int(32) * &l2;
            let mut out = One {
                lower_bad: false,
                upper_bad: false,
                exact: 0,
                ratio: f64::INFINITY,
            };
            // every segment closer than 2*upper matters for one of the bounds
            index.query(&b, 2.0 * upper, cand);
            let mut dists: Vec<(f64, u32)> = cand
                .iter()
                .map(|&s| {
                    let (a, c) = &index.segs[s as usize];
                    (box_segment_distance(&b, a, c), s)
                })
                .collect();
            dists.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            for &(d, s) in &dists {
                // anything beyond twice the bound is decided by the float value
                if d > 2.0 * lower {
                    break;
                }
                out.exact += 1;
                if ebox.cmp_sq_distance(&exact[s as usize], &lower_sq) == Ordering::Less {
                    out.lower_bad = true;
                }
            }
            if let Some(&(d, _)) = dists.first() {
                out.ratio = d / l;
            }
            if !truncated {
                // exact witness for the upper bound among near-nearest segments
                let mut ok = false;
                for &(d, s) in dists.iter().take(4) {
                    if d > upper * (1.0 + FLOAT_GAP) {
                        break;
                    }
                    out.exact += 1;
                    if ebox.cmp_sq_distance(&exact[s as usize], &upper_sq) != Ordering::Greater {
                        ok = true;
                        break;
                    }
                }
                out.upper_bad = !ok;
            }
            out
        })
        .collect();

    let mut rep = ExactReport {
        cubes: cover.len(),
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        ..Default::default()
    };
    for (i, o) in per.iter().enumerate() {
        rep.lower_violations += o.lower_bad as usize;
        rep.upper_violations += o.upper_bad as usize;
        rep.exact_checks += o.exact;
        if cover.truncated[i] {
            rep.truncated += 1;
        } else {
            rep.min_ratio = rep.min_ratio.min(o.ratio);
            rep.max_ratio = rep.max_ratio.max(o.ratio);
        }
    }
    Some(rep)
}

/// Exact-arithmetic certificate for one cube against one segment, exposed
/// for tests.
pub fn exact_sq_distance_cmp(b: &Aabb<2>, s: &ExactSegment, bound: &Qs3) -> Ordering {
    ExactBox::from_f64(b.lo, b.hi).cmp_sq_distance(s, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cube::RootLattice;
    use crate::geometry::domain::Rect;
    use crate::geometry::polygon::Polygon;
    use crate::geometry::whitney::whitney_decompose;

    #[test]
    fn square_and_l_shape_certify() {
        let lat = RootLattice::<2>::cube([0.0, 0.0], 1.0);
        let sq = Rect::<2>::unit();
        let cover = whitney_decompose(&sq, lat, 6).unwrap();
        let rep = verify_exact(&cover, &sq).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.min_ratio >= 2f64.sqrt() - 1e-12);

        let l = Polygon::l_shape();
        let lat = RootLattice::<2>::cube([0.0, 0.0], 2.0);
        let cover = whitney_decompose(&l, lat, 6).unwrap();
        let rep = verify_exact(&cover, &l).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.max_ratio <= 4.0 * 2f64.sqrt());
    }

    #[test]
    fn detects_a_planted_violation() {
        use crate::geometry::cube::DyadicCube;
        let lat = RootLattice::<2>::cube([0.0, 0.0], 1.0);
        // a cube touching the boundary cannot satisfy the lower bound
        let bad = WhitneyCover::from_cubes(lat, vec![DyadicCube::new(2, [0, 1])], 6, "t".into());
        let rep = verify_exact(&bad, &Rect::<2>::unit()).unwrap();
        assert_eq!(rep.lower_violations, 1);
        // a tiny cube far from the boundary breaks the upper bound
        let far = WhitneyCover::from_cubes(lat, vec![DyadicCube::new(5, [15, 15])], 6, "t".into());
        let rep = verify_exact(&far, &Rect::<2>::unit()).unwrap();
        assert_eq!(rep.upper_violations, 1);
    }

    #[test]
    fn float_prefilter_agrees_with_exact() {
        let b = Aabb::new([0.25, 0.25], [0.5, 0.5]);
        let s = ([0.0, 1.0], [1.0, 0.0]);
        let d = box_segment_distance(&b, &s.0, &s.1);
        // corner (0.5, 0.5) lies on x + y = 1
        assert_eq!(d, 0.0);
        let ex = ExactSegment {
            a: [Qs3::int(0), Qs3::int(1)],
            b: [Qs3::int(1), Qs3::int(0)],
        };
        assert_eq!(exact_sq_distance_cmp(&b, &ex, &Qs3::zero()), Ordering::Equal);
    }
}
