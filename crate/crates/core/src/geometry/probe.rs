//! Heuristic lower bound for the `ε` of an `(ε, δ)` domain, from shortest
//! paths through Whitney-cube centers.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::domain::{dist, Domain};
use super::whitney::WhitneyCover;
use crate::error::{invalid, Error, Result};
use crate::Point;

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    /// Minimum over pairs of the per-pair `ε`.
    pub epsilon: f64,
    pub pairs: usize,
    pub worst_pair: Option<(Vec<f64>, Vec<f64>)>,
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

fn shortest_path<const N: usize>(cover: &WhitneyCover<N>, from: usize, to: usize) -> Option<Vec<usize>> {
    let adj = cover.adjacency();
    let mut best = vec![f64::INFINITY; cover.len()];
    let mut prev = vec![usize::MAX; cover.len()];
    let mut heap = BinaryHeap::new();
    best[from] = 0.0;
    heap.push(Item(0.0, from));
    while let Some(Item(d, i)) = heap.pop() {
        if i == to {
            break;
        }
        if d > best[i] {
            continue;
        }
        let ci = cover.center(i);
        for &j in &adj[i] {
            let nd = d + dist(&ci, &cover.center(j));
            if nd < best[j] {
                best[j] = nd;
                prev[j] = i;
                heap.push(Item(nd, j));
            }
        }
    }
    if !best[to].is_finite() {
        return None;
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    Some(path)
}

/// Best `ε` achieved by the polyline: `min(|x-y| / length, min_z dist(z, ∂Ω)
/// |x-y| / (|z-x| |z-y|))` with `z` sampled along the curve.
pub fn polyline_epsilon<const N: usize>(domain: &dyn Domain<N>, poly: &[Point<N>]) -> f64 {
    let x = poly[0];
    let y = *poly.last().unwrap();
    let xy = dist(&x, &y);
    if xy == 0.0 {
        return f64::INFINITY;
    }
    let length: f64 = poly.windows(2).map(|w| dist(&w[0], &w[1])).sum();
    let mut eps = xy / length;
    const SUB: usize = 8;
    for w in poly.windows(2) {
        for k in 0..=SUB {
            let t = k as f64 / SUB as f64;
            let mut z = w[0];
            for i in 0..N {
                z[i] += t * (w[1][i] - w[0][i]);
            }
            let (zx, zy) = (dist(&z, &x), dist(&z, &y));
            if zx == 0.0 || zy == 0.0 {
                continue;
            }
            let dz = if domain.contains(&z) {
                domain.boundary_distance(&z)
            } else {
                0.0
            };
            eps = eps.min(dz * xy / (zx * zy));
        }
    }
    eps
}

/// Probes the given point pairs: each point is joined to the center of the
/// cover cube holding it, then along the shortest center path.
pub fn probe_pairs<const N: usize>(
    domain: &dyn Domain<N>,
    cover: &WhitneyCover<N>,
    pairs: &[(Point<N>, Point<N>)],
) -> Result<ProbeReport> {
    let mut rep = ProbeReport {
        epsilon: f64::INFINITY,
        pairs: 0,
        worst_pair: None,
    };
    for (x, y) in pairs {
        let (Some(a), Some(b)) = (cover.locate(x), cover.locate(y)) else {
            return invalid("probe point outside the cover");
        };
        let path = shortest_path(cover, a, b).ok_or(Error::Disconnected)?;
        let mut poly = vec![*x];
        poly.extend(path.iter().map(|&i| cover.center(i)));
        poly.push(*y);
        poly.dedup();
        let e = polyline_epsilon(domain, &poly);
        rep.pairs += 1;
        if e < rep.epsilon {
            rep.epsilon = e;
            rep.worst_pair = Some((x.to_vec(), y.to_vec()));
        }
    }
    Ok(rep)
}

/// Random pairs of cube centers (seeded).
pub fn epsilon_delta_probe<const N: usize>(
    domain: &dyn Domain<N>,
    cover: &WhitneyCover<N>,
    samples: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..samples)
        .map(|_| {
            let a = rng.gen_range(0..cover.len());
            let b = rng.gen_range(0..cover.len());
            (cover.center(a), cover.center(b))
        })
        .collect();
    probe_pairs(domain, cover, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cube::RootLattice;
    use crate::geometry::cusp::Cusp;
    use crate::geometry::domain::{DomainRef, Rect, Union};
    use crate::geometry::whitney::whitney_decompose;
    use std::sync::Arc;

    #[test]
    fn square_epsilon_stays_positive() {
        let sq = Rect::<2>::unit();
        let lat = RootLattice::<2>::cube([0.0, 0.0], 1.0);
        let mut eps = Vec::new();
        for j in [5, 6, 7] {
            let cover = whitney_decompose(&sq, lat, j).unwrap();
            eps.push(epsilon_delta_probe(&sq, &cover, 40, 3).unwrap().epsilon);
        }
        assert!(eps.iter().all(|&e| e > 0.05), "{eps:?}");
    }

    #[test]
    fn cusp_epsilon_degenerates_near_the_tip() {
        let c = Cusp::new(4.0);
        let lat = RootLattice::<2>::cube([0.0, 0.0], 1.0);
        let cover = whitney_decompose(&c, lat, 11).unwrap();
        let far = [0.9, 0.3];
        let mut eps = Vec::new();
        for t in [0.6f64, 0.45, 0.35] {
            let x = [t, 0.5 * t.powf(4.0)];
            eps.push(probe_pairs(&c, &cover, &[(x, far)]).unwrap().epsilon);
        }
        assert!(eps[0] > eps[1] && eps[1] > eps[2], "{eps:?}");
    }

    #[test]
    fn disjoint_squares_are_disconnected() {
        let a: DomainRef<2> = Arc::new(Rect::<2>::new([0.0, 0.0], [1.0, 1.0]));
        let b: DomainRef<2> = Arc::new(Rect::<2>::new([2.0, 0.0], [3.0, 1.0]));
        let u = Union { parts: vec![a, b] };
        let lat = RootLattice::<2>::from_box([0.0, 0.0], [4.0, 1.0]).unwrap();
        let cover = whitney_decompose(&u, lat, 5).unwrap();
        assert!(matches!(
            probe_pairs(&u, &cover, &[([0.5, 0.5], [2.5, 0.5])]),
            Err(Error::Disconnected)
        ));
    }
}
