//! Membership and boundary-distance oracles for open sets.

use std::fmt::Debug;
use std::sync::Arc;

use super::cube::Aabb;
use super::exact::{ExactSegment, Qs3};
use crate::Point;

/// An open set `O` described by membership and the distance to `∂O`.
///
/// `boundary_distance` must be 1-Lipschitz, and `contains(x)` must imply a
/// positive distance.
pub trait Domain<const N: usize>: Send + Sync + Debug {
    fn contains(&self, x: &Point<N>) -> bool;
    fn boundary_distance(&self, x: &Point<N>) -> f64;
    /// Box containing `∂O` (infinite extents allowed).
    fn bounding_box(&self) -> Aabb<N>;
    fn kind(&self) -> String;

    /// `rad(O)`: infimum over components of the smallest radius of a ball
    /// centred in the component and containing it. `None` when unbounded or
    /// unknown.
    fn rad(&self) -> Option<f64> {
        None
    }

    /// Boundary segments in exact coordinates covering every part of `∂O`
    /// within `window` (two-dimensional polygonal kinds only).
    fn exact_boundary(&self, _window: &Aabb<N>) -> Option<Vec<ExactSegment>> {
        None
    }

    /// Signed distance, negative inside.
    fn signed_distance(&self, x: &Point<N>) -> f64 {
        let d = self.boundary_distance(x);
        if self.contains(x) {
            -d
        } else {
            d
        }
    }
}

pub type DomainRef<const N: usize> = Arc<dyn Domain<N>>;

/// Open box; infinite bounds give slabs such as the strip `{0 < y < 1}`.
#[derive(Clone, Debug)]
pub struct Rect<const N: usize> {
    pub lo: [f64; N],
    pub hi: [f64; N],
}

impl<const N: usize> Rect<N> {
    pub fn new(lo: [f64; N], hi: [f64; N]) -> Self {
        Self { lo, hi }
    }

    pub fn unit() -> Self {
        Self::new([0.0; N], [1.0; N])
    }
}

impl<const N: usize> Domain<N> for Rect<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        (0..N).all(|i| x[i] > self.lo[i] && x[i] < self.hi[i])
    }

    fn boundary_distance(&self, x: &Point<N>) -> f64 {
        if self.contains(x) {
            (0..N)
                .map(|i| (x[i] - self.lo[i]).min(self.hi[i] - x[i]))
                .fold(f64::INFINITY, f64::min)
        } else {
            let inside_box = Aabb::new(self.lo, self.hi);
            let out = inside_box.distance(x);
            if out > 0.0 {
                return out;
            }
            0.0
        }
    }

    fn bounding_box(&self) -> Aabb<N> {
        Aabb::new(self.lo, self.hi)
    }

    fn kind(&self) -> String {
        if self.lo.iter().chain(self.hi.iter()).any(|v| !v.is_finite()) {
            "strip".into()
        } else {
            "rectangle".into()
        }
    }

    fn rad(&self) -> Option<f64> {
        let s: f64 = (0..N).map(|i| (self.hi[i] - self.lo[i]).powi(2)).sum();
        s.is_finite().then(|| 0.5 * s.sqrt())
    }

    fn exact_boundary(&self, window: &Aabb<N>) -> Option<Vec<ExactSegment>> {
        if N != 2 {
            return None;
        }
        // clip infinite edges to a generous enlargement of the window
        let span = (0..N)
            .map(|i| window.hi[i] - window.lo[i])
            .fold(0.0f64, f64::max)
            .max(1.0);
        let clamp = |v: f64, i: usize| v.max(window.lo[i] - 4.0 * span).min(window.hi[i] + 4.0 * span);
        let (x0, x1) = (clamp(self.lo[0], 0), clamp(self.hi[0], 0));
        let (y0, y1) = (clamp(self.lo[1], 1), clamp(self.hi[1], 1));
        let p = |x: f64, y: f64| [Qs3::from_f64(x), Qs3::from_f64(y)];
        let mut segs = Vec::new();
        if self.lo[1].is_finite() {
            segs.push(ExactSegment {
                a: p(x0, y0),
                b: p(x1, y0),
            });
        }
        if self.hi[1].is_finite() {
            segs.push(ExactSegment {
                a: p(x0, y1),
                b: p(x1, y1),
            });
        }
        if self.lo[0].is_finite() {
            segs.push(ExactSegment {
                a: p(x0, y0),
                b: p(x0, y1),
            });
        }
        if self.hi[0].is_finite() {
            segs.push(ExactSegment {
                a: p(x1, y0),
                b: p(x1, y1),
            });
        }
        Some(segs)
    }
}

/// Open Euclidean ball.
#[derive(Clone, Debug)]
pub struct Ball<const N: usize> {
    pub center: [f64; N],
    pub radius: f64,
}

impl<const N: usize> Domain<N> for Ball<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        norm(&sub(x, &self.center)) < self.radius
    }

    fn boundary_distance(&self, x: &Point<N>) -> f64 {
        (norm(&sub(x, &self.center)) - self.radius).abs()
    }

    fn bounding_box(&self) -> Aabb<N> {
        let mut lo = self.center;
        let mut hi = self.center;
        for i in 0..N {
            lo[i] -= self.radius;
            hi[i] += self.radius;
        }
        Aabb::new(lo, hi)
    }

    fn kind(&self) -> String {
        "ball".into()
    }

    fn rad(&self) -> Option<f64> {
        Some(self.radius)
    }
}

/// The empty set.
#[derive(Clone, Debug, Default)]
pub struct Empty;

impl<const N: usize> Domain<N> for Empty {
    fn contains(&self, _x: &Point<N>) -> bool {
        false
    }

    fn boundary_distance(&self, _x: &Point<N>) -> f64 {
        f64::INFINITY
    }

    fn bounding_box(&self) -> Aabb<N> {
        Aabb::new([f64::INFINITY; N], [f64::NEG_INFINITY; N])
    }

    fn kind(&self) -> String {
        "empty".into()
    }

    fn exact_boundary(&self, _window: &Aabb<N>) -> Option<Vec<ExactSegment>> {
        Some(Vec::new())
    }
}

/// Interior of the complement, `(O^c)°`.
#[derive(Clone, Debug)]
pub struct Complement<const N: usize> {
    pub inner: DomainRef<N>,
}

impl<const N: usize> Domain<N> for Complement<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        !self.inner.contains(x) && self.inner.boundary_distance(x) > 0.0
    }

    fn boundary_distance(&self, x: &Point<N>) -> f64 {
        self.inner.boundary_distance(x)
    }

    fn bounding_box(&self) -> Aabb<N> {
        self.inner.bounding_box()
    }

    fn kind(&self) -> String {
        format!("complement-of({})", self.inner.kind())
    }

    fn exact_boundary(&self, window: &Aabb<N>) -> Option<Vec<ExactSegment>> {
        self.inner.exact_boundary(window)
    }
}

/// `R^N` minus the boundary of `inner`: the open set whose Whitney cubes
/// approach a closed set `D = ∂inner` from both sides.
#[derive(Clone, Debug)]
pub struct BoundaryComplement<const N: usize> {
    pub inner: DomainRef<N>,
}

impl<const N: usize> Domain<N> for BoundaryComplement<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        self.inner.boundary_distance(x) > 0.0
    }

    fn boundary_distance(&self, x: &Point<N>) -> f64 {
        self.inner.boundary_distance(x)
    }

    fn bounding_box(&self) -> Aabb<N> {
        self.inner.bounding_box()
    }

    fn kind(&self) -> String {
        format!("boundary-complement-of({})", self.inner.kind())
    }

    fn exact_boundary(&self, window: &Aabb<N>) -> Option<Vec<ExactSegment>> {
        self.inner.exact_boundary(window)
    }
}

/// Union of open sets with pairwise disjoint closures.
#[derive(Clone, Debug)]
pub struct Union<const N: usize> {
    pub parts: Vec<DomainRef<N>>,
}

impl<const N: usize> Domain<N> for Union<N> {
    fn contains(&self, x: &Point<N>) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    fn boundary_distance(&self, x: &Point<N>) -> f64 {
        self.parts
            .iter()
            .map(|p| p.boundary_distance(x))
            .fold(f64::INFINITY, f64::min)
    }

    fn bounding_box(&self) -> Aabb<N> {
        let mut b = Aabb::new([f64::INFINITY; N], [f64::NEG_INFINITY; N]);
        for p in &self.parts {
            let q = p.bounding_box();
            for i in 0..N {
                b.lo[i] = b.lo[i].min(q.lo[i]);
                b.hi[i] = b.hi[i].max(q.hi[i]);
            }
        }
        b
    }

    fn kind(&self) -> String {
        let names: Vec<String> = self.parts.iter().map(|p| p.kind()).collect();
        format!("union-of({})", names.join(","))
    }

    fn rad(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for p in &self.parts {
            let r = p.rad()?;
            best = Some(best.map_or(r, |b| b.min(r)));
        }
        best
    }

    fn exact_boundary(&self, window: &Aabb<N>) -> Option<Vec<ExactSegment>> {
        let mut out = Vec::new();
        for p in &self.parts {
            out.extend(p.exact_boundary(window)?);
        }
        Some(out)
    }
}

pub(crate) fn sub<const N: usize>(a: &Point<N>, b: &Point<N>) -> Point<N> {
    let mut c = *a;
    for i in 0..N {
        c[i] -= b[i];
    }
    c
}

pub(crate) fn norm<const N: usize>(a: &Point<N>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn dist<const N: usize>(a: &Point<N>, b: &Point<N>) -> f64 {
    norm(&sub(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_distance_inside_and_out() {
        let r = Rect::<2>::unit();
        assert_eq!(r.boundary_distance(&[0.25, 0.5]), 0.25);
        assert_eq!(r.boundary_distance(&[2.0, 0.5]), 1.0);
        assert_eq!(r.boundary_distance(&[1.0, 0.5]), 0.0);
        assert!(!r.contains(&[1.0, 0.5]));
        assert_eq!(r.rad(), Some(0.5 * 2f64.sqrt()));
    }

    #[test]
    fn strip_is_unbounded() {
        let s = Rect::<2>::new([f64::NEG_INFINITY, 0.0], [f64::INFINITY, 1.0]);
        assert!(s.contains(&[1e9, 0.5]));
        assert_eq!(s.boundary_distance(&[3.0, 0.25]), 0.25);
        assert_eq!(s.boundary_distance(&[3.0, -2.0]), 2.0);
        assert_eq!(s.kind(), "strip");
        assert!(s.rad().is_none());
    }

    #[test]
    fn complement_and_union() {
        let sq: DomainRef<2> = Arc::new(Rect::<2>::unit());
        let c = Complement { inner: sq.clone() };
        assert!(c.contains(&[2.0, 2.0]));
        assert!(!c.contains(&[0.5, 0.5]));
        assert!(!c.contains(&[1.0, 0.5]));
        let far: DomainRef<2> = Arc::new(Rect::new([3.0, 0.0], [4.0, 2.0]));
        let u = Union { parts: vec![sq, far] };
        assert!(u.contains(&[3.5, 1.5]));
        assert_eq!(u.boundary_distance(&[2.0, 0.5]), 1.0);
        assert_eq!(u.rad(), Some(0.5 * 2f64.sqrt()));
    }
}
