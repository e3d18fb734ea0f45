//! Dyadic cubes on a lattice of root cubes.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Point;

/// Axis-aligned box `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aabb<const N: usize> {
    #[serde(with = "serde_arrays")]
    pub lo: [f64; N],
    #[serde(with = "serde_arrays")]
    pub hi: [f64; N],
}

impl<const N: usize> Aabb<N> {
    pub fn new(lo: [f64; N], hi: [f64; N]) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: &Point<N>) -> bool {
        (0..N).all(|i| x[i] >= self.lo[i] && x[i] <= self.hi[i])
    }

    pub fn distance(&self, x: &Point<N>) -> f64 {
        let mut s = 0.0;
        for i in 0..N {
            let d = (self.lo[i] - x[i]).max(x[i] - self.hi[i]).max(0.0);
            s += d * d;
        }
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.iter().chain(self.hi.iter()).all(|v| v.is_finite())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.lo[i] = self.lo[i].max(other.lo[i]);
            out.hi[i] = self.hi[i].min(other.hi[i]);
        }
        out
    }
}

/// Lattice of equal root cubes `origin + side * (index + [0,1]^N)` with
/// `0 <= index_i < counts_i`. Dyadic cubes of every level live on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootLattice<const N: usize> {
    #[serde(with = "serde_arrays")]
    pub origin: [f64; N],
    pub side: f64,
    #[serde(with = "serde_arrays")]
    pub counts: [i64; N],
}

impl<const N: usize> RootLattice<N> {
    /// Single root cube.
    pub fn cube(origin: [f64; N], side: f64) -> Self {
        Self {
            origin,
            side,
            counts: [1; N],
        }
    }

    /// Root lattice tiling `[lo, hi]` with cubes of the shortest edge length.
    /// Every extent must be an integer multiple of that length.
    pub fn from_box(lo: [f64; N], hi: [f64; N]) -> Result<Self> {
        let side = (0..N).map(|i| hi[i] - lo[i]).fold(f64::INFINITY, f64::min);
        if !(side > 0.0 && side.is_finite()) {
            return invalid("root box must have positive finite extents");
        }
        let mut counts = [0i64; N];
        for i in 0..N {
            let q = (hi[i] - lo[i]) / side;
            let r = q.round();
            if (q - r).abs() > 1e-12 * q.max(1.0) {
                return invalid(format!("root box extent {} is not a multiple of {side}", hi[i] - lo[i]));
            }
            counts[i] = r as i64;
        }
        Ok(Self {
            origin: lo,
            side,
            counts,
        })
    }

    pub fn bounds(&self) -> Aabb<N> {
        let mut hi = self.origin;
        for i in 0..N {
            hi[i] += self.side * self.counts[i] as f64;
        }
        Aabb::new(self.origin, hi)
    }

    pub fn side_at(&self, level: u32) -> f64 {
        self.side * (-(level as f64)).exp2()
    }

    /// Number of cells per axis at `level`.
    pub fn cells_at(&self, level: u32) -> [i64; N] {
        let mut c = self.counts;
        for v in c.iter_mut() {
            *v <<= level;
        }
        c
    }

    pub fn roots(&self) -> Vec<DyadicCube<N>> {
        let mut out = Vec::new();
        let mut idx = [0i64; N];
        loop {
            out.push(DyadicCube::new(0, idx));
            let mut ax = 0;
            loop {
                if ax == N {
                    return out;
                }
                idx[ax] += 1;
                if idx[ax] < self.counts[ax] {
                    break;
                }
                idx[ax] = 0;
                ax += 1;
            }
        }
    }

    /// Index of the level-`level` cell containing `x` (unclamped).
    pub fn locate(&self, x: &Point<N>, level: u32) -> [i64; N] {
        let s = self.side_at(level);
        let mut idx = [0i64; N];
        for i in 0..N {
            idx[i] = ((x[i] - self.origin[i]) / s).floor() as i64;
        }
        idx
    }

    pub fn in_range(&self, level: u32, index: &[i64; N]) -> bool {
        let c = self.cells_at(level);
        (0..N).all(|i| index[i] >= 0 && index[i] < c[i])
    }
}

/// Cube of side `side * 2^-level` with corner `origin + index * side`.
/// Equality and hashing use `(level, index)` only; the lattice is carried by
/// the owning cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube<const N: usize> {
    pub level: u32,
    #[serde(with = "serde_arrays")]
    pub index: [i64; N],
}

impl<const N: usize> DyadicCube<N> {
    pub fn new(level: u32, index: [i64; N]) -> Self {
        Self { level, index }
    }

    pub fn side(&self, lat: &RootLattice<N>) -> f64 {
        lat.side_at(self.level)
    }

    pub fn corner(&self, lat: &RootLattice<N>) -> Point<N> {
        let s = self.side(lat);
        let mut c = lat.origin;
        for i in 0..N {
            c[i] += self.index[i] as f64 * s;
        }
        c
    }

    pub fn center(&self, lat: &RootLattice<N>) -> Point<N> {
        let s = self.side(lat);
        let mut c = lat.origin;
        for i in 0..N {
            c[i] += (self.index[i] as f64 + 0.5) * s;
        }
        c
    }

    pub fn bounds(&self, lat: &RootLattice<N>) -> Aabb<N> {
        let lo = self.corner(lat);
        let s = self.side(lat);
        let mut hi = lo;
        for v in hi.iter_mut() {
            *v += s;
        }
        Aabb::new(lo, hi)
    }

    /// The dilate `lambda * Q` about the center.
    pub fn dilate(&self, lat: &RootLattice<N>, lambda: f64) -> Aabb<N> {
        let c = self.center(lat);
        let r = 0.5 * lambda * self.side(lat);
        let mut lo = c;
        let mut hi = c;
        for i in 0..N {
            lo[i] -= r;
            hi[i] += r;
        }
        Aabb::new(lo, hi)
    }

    pub fn diameter(&self, lat: &RootLattice<N>) -> f64 {
        self.side(lat) * (N as f64).sqrt()
    }

    pub fn children(&self) -> Vec<DyadicCube<N>> {
        let mut out = Vec::with_capacity(1 << N);
        for mask in 0..(1usize << N) {
            let mut idx = self.index;
            for (i, v) in idx.iter_mut().enumerate() {
                *v = 2 * *v + ((mask >> i) & 1) as i64;
            }
            out.push(DyadicCube::new(self.level + 1, idx));
        }
        out
    }

    pub fn parent(&self) -> Option<DyadicCube<N>> {
        if self.level == 0 {
            return None;
        }
        let mut idx = self.index;
        for v in idx.iter_mut() {
            *v = v.div_euclid(2);
        }
        Some(DyadicCube::new(self.level - 1, idx))
    }

    /// Integer extent `[lo, hi]` of the closed cube in units of level `fine`
    /// cells (`fine >= level`).
    pub fn extent_at(&self, fine: u32) -> ([i64; N], [i64; N]) {
        let sh = fine - self.level;
        let mut lo = [0; N];
        let mut hi = [0; N];
        for i in 0..N {
            lo[i] = self.index[i] << sh;
            hi[i] = (self.index[i] + 1) << sh;
        }
        (lo, hi)
    }

    /// Closed cubes share at least one point (exact integer test).
    pub fn touches(&self, other: &Self) -> bool {
        let fine = self.level.max(other.level);
        let (a0, a1) = self.extent_at(fine);
        let (b0, b1) = other.extent_at(fine);
        (0..N).all(|i| a0[i] <= b1[i] && b0[i] <= a1[i])
    }

    /// Open interiors intersect.
    pub fn overlaps(&self, other: &Self) -> bool {
        let fine = self.level.max(other.level);
        let (a0, a1) = self.extent_at(fine);
        let (b0, b1) = other.extent_at(fine);
        (0..N).all(|i| a0[i] < b1[i] && b0[i] < a1[i])
    }

    /// Euclidean distance between the closed cubes.
    pub fn distance(&self, other: &Self, lat: &RootLattice<N>) -> f64 {
        let a = self.bounds(lat);
        let b = other.bounds(lat);
        let mut s = 0.0;
        for i in 0..N {
            let d = (a.lo[i] - b.hi[i]).max(b.lo[i] - a.hi[i]).max(0.0);
            s += d * d;
        }
        s.sqrt()
    }
}

/// Serde adapter for const-generic arrays.
pub(crate) mod serde_arrays {
    use serde::de::{Deserialize, Deserializer, Error};
    use serde::ser::{Serialize, Serializer};

    pub fn serialize<S, T, const N: usize>(v: &[T; N], s: S) -> Result<S::Ok, S::Error>
    where
        S: Serializer,
        T: Serialize,
    {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D, T, const N: usize>(d: D) -> Result<[T; N], D::Error>
    where
        D: Deserializer<'de>,
        T: Deserialize<'de>,
    {
        let v = Vec::<T>::deserialize(d)?;
        let len = v.len();
        v.try_into()
            .map_err(|_| D::Error::custom(format!("expected {N} entries, found {len}")))
    }
}
