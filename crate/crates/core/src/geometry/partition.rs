//! Smooth partitions of unity subordinate to `17/16`-dilates of cubes.

use std::collections::HashMap;

use super::cube::{DyadicCube, RootLattice};
use crate::error::{Error, Result};
use crate::Point;

/// Dilation factor of the bump supports.
pub const DILATE: f64 = 17.0 / 16.0;

fn f(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// C-infinity step: 0 for `u <= 0`, 1 for `u >= 1`.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = f(u);
        a / (a + f(1.0 - u))
    }
}

/// Flat-top profile in the scaled coordinate `s = |x - c| / (ℓ/2)`: 1 on
/// `[0, 1]`, 0 from `17/16` on.
pub fn profile(s: f64) -> f64 {
    if s <= 1.0 {
        1.0
    } else if s >= DILATE {
        0.0
    } else {
        smooth_step((DILATE - s) / (DILATE - 1.0))
    }
}

/// Tensor bump `b_Q`, identically 1 on `Q` and supported in `(17/16) Q`.
pub fn bump<const N: usize>(q: &DyadicCube<N>, lat: &RootLattice<N>, x: &Point<N>) -> f64 {
    let c = q.center(lat);
    let half = 0.5 * q.side(lat);
    let mut v = 1.0;
    for i in 0..N {
        v *= profile((x[i] - c[i]).abs() / half);
        if v == 0.0 {
            return 0.0;
        }
    }
    v
}

/// Normalised bumps `φ_Q = b_Q / Σ b_Q'` over a fixed cube family.
#[derive(Clone, Debug)]
pub struct PartitionOfUnity<const N: usize> {
    pub lattice: RootLattice<N>,
    pub cubes: Vec<DyadicCube<N>>,
    by_level: Vec<(u32, HashMap<[i64; N], usize>)>,
}

impl<const N: usize> PartitionOfUnity<N> {
    pub fn new(lattice: RootLattice<N>, cubes: Vec<DyadicCube<N>>) -> Self {
        let mut by_level: Vec<(u32, HashMap<[i64; N], usize>)> = Vec::new();
        for (k, q) in cubes.iter().enumerate() {
            match by_level.iter_mut().find(|(l, _)| *l == q.level) {
                Some((_, m)) => {
                    m.insert(q.index, k);
                }
                None => by_level.push((q.level, HashMap::from([(q.index, k)]))),
            }
        }
        by_level.sort_by_key(|e| e.0);
        Self {
            lattice,
            cubes,
            by_level,
        }
    }

    /// Family members whose dilate contains `x`, with their bump values, in
    /// ascending member order.
    pub fn bumps_at(&self, x: &Point<N>) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        for (level, map) in &self.by_level {
            let home = self.lattice.locate(x, *level);
            let mut off = [-1i64; N];
            loop {
                let mut idx = home;
                for i in 0..N {
                    idx[i] += off[i];
                }
                if let Some(&k) = map.get(&idx) {
                    let b = bump(&self.cubes[k], &self.lattice, x);
                    if b > 0.0 {
                        out.push((k, b));
                    }
                }
                let mut a = 0;
                loop {
                    if a == N {
                        break;
                    }
                    off[a] += 1;
                    if off[a] <= 1 {
                        break;
                    }
                    off[a] = -1;
                    a += 1;
                }
                if a == N {
                    break;
                }
            }
        }
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// `(member, φ_Q(x))` for every member with `φ_Q(x) > 0`; empty outside
    /// every dilate.
    pub fn eval(&self, x: &Point<N>) -> Vec<(usize, f64)> {
        let mut b = self.bumps_at(x);
        let total: f64 = b.iter().map(|e| e.1).sum();
        if total > 0.0 {
            for e in b.iter_mut() {
                e.1 /= total;
            }
        }
        b
    }

    /// Like `eval`, but `x` must lie in a member cube.
    pub fn eval_covered(&self, x: &Point<N>) -> Result<Vec<(usize, f64)>> {
        let v = self.eval(x);
        if v.is_empty() {
            return Err(Error::DegenerateCover { point: x.to_vec() });
        }
        Ok(v)
    }

    /// True if `x` lies in some member cube (closed).
    pub fn covers(&self, x: &Point<N>) -> bool {
        self.bumps_at(x)
            .iter()
            .any(|&(k, _)| self.cubes[k].bounds(&self.lattice).contains(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cube::RootLattice;
    use crate::geometry::domain::{Complement, DomainRef};
    use crate::geometry::polygon::Polygon;
    use crate::geometry::whitney::whitney_decompose;
    use rand::{Rng, SeedableRng};
    use std::sync::Arc;

    #[test]
    fn profile_is_flat_then_vanishes() {
        assert_eq!(profile(0.3), 1.0);
        assert_eq!(profile(1.0), 1.0);
        assert_eq!(profile(DILATE), 0.0);
        let mid = profile(1.0 + 1.0 / 32.0);
        assert!((mid - 0.5).abs() < 1e-15);
        // monotone decreasing on the transition
        let mut prev = 1.0;
        for k in 0..=64 {
            let v = profile(1.0 + k as f64 / 1024.0);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn single_cube() {
        let lat = RootLattice::<2>::cube([0.0, 0.0], 1.0);
        let pu = PartitionOfUnity::new(lat, vec![DyadicCube::new(1, [0, 0])]);
        assert_eq!(pu.eval(&[0.25, 0.4]), vec![(0, 1.0)]);
        assert_eq!(pu.eval(&[0.5, 0.5]), vec![(0, 1.0)]);
        assert!(pu.eval(&[0.5 + 1.0 / 64.0 + 1e-12, 0.2]).is_empty());
        assert!(pu.eval(&[0.9, 0.9]).is_empty());
        let edge = pu.eval(&[0.51, 0.2]);
        assert_eq!(edge.len(), 1);
        assert_eq!(edge[0].1, 1.0);
    }

    #[test]
    fn sums_to_one_on_l_shape_complement() {
        let l: DomainRef<2> = Arc::new(Polygon::l_shape());
        let comp = Complement { inner: l };
        let lat = RootLattice::<2>::cube([-1.0, -1.0], 4.0);
        let cover = whitney_decompose(&comp, lat, 7).unwrap();
        let pu = PartitionOfUnity::new(lat, cover.cubes.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut n = 0;
        while n < 1000 {
            let k = rng.gen_range(0..cover.len());
            let b = cover.cubes[k].bounds(&lat);
            let x = [rng.gen_range(b.lo[0]..b.hi[0]), rng.gen_range(b.lo[1]..b.hi[1])];
            let v = pu.eval_covered(&x).unwrap();
            let s: f64 = v.iter().map(|e| e.1).sum();
            assert!((s - 1.0).abs() <= 4.0 * f64::EPSILON, "{s}");
            for &(q, phi) in &v {
                assert!((0.0..=1.0).contains(&phi));
                assert!(cover.cubes[q].dilate(&lat, DILATE).contains(&x));
            }
            n += 1;
        }
    }

    #[test]
    fn derivative_bounds_scale_with_side() {
        // |∂φ| ℓ stays bounded across levels for two touching cubes
        let lat = RootLattice::<2>::cube([0.0, 0.0], 1.0);
        let mut worst = Vec::new();
        for level in [3u32, 5, 7] {
            let a = DyadicCube::new(level, [0, 0]);
            let b = DyadicCube::new(level, [1, 0]);
            let pu = PartitionOfUnity::new(lat, vec![a, b]);
            let l = a.side(&lat);
            let h = l * 1e-4;
            let mut m = 0.0f64;
            for k in 0..200 {
                let x = [l * (0.9 + 0.2 * k as f64 / 200.0), 0.5 * l];
                let phi = |x: &[f64; 2]| pu.eval(x).iter().find(|e| e.0 == 0).map_or(0.0, |e| e.1);
                let d = (phi(&[x[0] + h, x[1]]) - phi(&[x[0] - h, x[1]])) / (2.0 * h);
                m = m.max(d.abs() * l);
            }
            worst.push(m);
        }
        assert!(worst.iter().all(|&w| w < 200.0));
        assert!((worst[0] - worst[2]).abs() < 1e-3 * worst[0]);
    }
}
