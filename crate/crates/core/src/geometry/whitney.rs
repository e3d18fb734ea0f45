//! Whitney decomposition of an open set into dyadic cubes.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use super::cube::{DyadicCube, RootLattice};
use super::domain::Domain;
use crate::error::{invalid, Error, Result};
use crate::Point;

/// Finite Whitney cover, truncated at `j_max`.
#[derive(Debug)]
pub struct WhitneyCover<const N: usize> {
    pub lattice: RootLattice<N>,
    /// Sorted by `(level, index)`.
    pub cubes: Vec<DyadicCube<N>>,
    /// Cubes at level `j_max`; only the lower distance bound is guaranteed.
    pub truncated: Vec<bool>,
    pub j_max: u32,
    pub domain_kind: String,
    lookup: HashMap<DyadicCube<N>, usize>,
    levels: Vec<u32>,
    adjacency: OnceLock<Vec<Vec<usize>>>,
}

enum Decision {
    Accept,
    Split,
    Drop,
}

fn classify<const N: usize>(domain: &dyn Domain<N>, lat: &RootLattice<N>, q: &DyadicCube<N>) -> Result<Decision> {
    let c = q.center(lat);
    let inside = domain.contains(&c);
    let d = domain.boundary_distance(&c);
    if d.is_nan() || d < 0.0 || (inside && d <= 0.0) {
        return Err(Error::OracleInconsistent {
            point: c.to_vec(),
            contains: inside,
            distance: d,
        });
    }
    let half_diag = 0.5 * (N as f64).sqrt() * q.side(lat);
    if inside {
        // Q ⊆ O once d > half_diag; dist(Q, ∂O) >= d - half_diag >= √n ℓ
        if d >= 3.0 * half_diag {
            Ok(Decision::Accept)
        } else {
            Ok(Decision::Split)
        }
    } else if d > half_diag {
        Ok(Decision::Drop)
    } else {
        Ok(Decision::Split)
    }
}

/// Decomposes `domain ∩ root box` into Whitney cubes down to level `j_max`.
///
/// A cube is accepted when its center lies in the domain at distance at
/// least `(3/2)√n ℓ` from the boundary, so the whole cube sits in the domain
/// at distance `>= √n ℓ`; a rejected parent forces `dist < (7/2)√n ℓ` on its
/// accepted children.
pub fn whitney_decompose<const N: usize>(
    domain: &dyn Domain<N>,
    lattice: RootLattice<N>,
    j_max: u32,
) -> Result<WhitneyCover<N>> {
    if j_max < 2 {
        return invalid("j_max must be at least 2");
    }
    if j_max > 40 {
        return invalid("j_max above 40 exceeds exact index range");
    }
    let mut accepted: Vec<DyadicCube<N>> = Vec::new();
    let mut frontier = lattice.roots();
    for level in 0..=j_max {
        let decisions: Vec<Decision> = frontier
            .par_iter()
            .map(|q| classify(domain, &lattice, q))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (q, d) in frontier.iter().zip(decisions) {
            match d {
                Decision::Accept => accepted.push(*q),
                Decision::Split if level < j_max => next.extend(q.children()),
                _ => {}
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    if accepted.is_empty() {
        return Err(Error::EmptyDomain { j_max });
    }
    accepted.par_sort_unstable();
    Ok(WhitneyCover::from_cubes(lattice, accepted, j_max, domain.kind()))
}

/// Per-cover summary statistics.
#[derive(Clone, Debug, Serialize)]
pub struct CoverStats {
    pub cubes: usize,
    pub truncated: usize,
    pub level_counts: Vec<(u32, usize)>,
    pub covered_measure: f64,
    pub min_neighbor_ratio: f64,
    pub max_neighbor_ratio: f64,
}

impl<const N: usize> WhitneyCover<N> {
    pub(crate) fn from_cubes(
        lattice: RootLattice<N>,
        cubes: Vec<DyadicCube<N>>,
        j_max: u32,
        domain_kind: String,
    ) -> Self {
        let lookup = cubes.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        let truncated = cubes.iter().map(|q| q.level == j_max).collect();
        let mut levels: Vec<u32> = cubes.iter().map(|q| q.level).collect();
        levels.dedup();
        Self {
            lattice,
            cubes,
            truncated,
            j_max,
            domain_kind,
            lookup,
            levels,
            adjacency: OnceLock::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn find(&self, q: &DyadicCube<N>) -> Option<usize> {
        self.lookup.get(q).copied()
    }

    pub fn side(&self, i: usize) -> f64 {
        self.cubes[i].side(&self.lattice)
    }

    pub fn center(&self, i: usize) -> Point<N> {
        self.cubes[i].center(&self.lattice)
    }

    /// Distinct cube levels, ascending.
    pub fn levels(&self) -> Vec<u32> {
        self.levels.clone()
    }

    /// Index of the cover cube containing `x`, if any.
    pub fn locate(&self, x: &Point<N>) -> Option<usize> {
        for &level in &self.levels {
            let idx = self.lattice.locate(x, level);
            if let Some(i) = self.find(&DyadicCube::new(level, idx)) {
                return Some(i);
            }
        }
        None
    }

    pub fn covered_measure(&self) -> f64 {
        self.cubes.iter().map(|q| q.side(&self.lattice).powi(N as i32)).sum()
    }

    /// Touching pairs (closed cubes sharing a point), as sorted neighbour
    /// lists.
    pub fn adjacency(&self) -> &[Vec<usize>] {
        self.adjacency.get_or_init(|| self.build_adjacency())
    }

    fn build_adjacency(&self) -> Vec<Vec<usize>> {
        let levels = self.levels();
        let pairs: Vec<Vec<usize>> = (0..self.cubes.len())
            .into_par_iter()
            .map(|i| {
                let q = self.cubes[i];
                let mut found = Vec::new();
                for &lv in levels.iter().filter(|&&lv| lv <= q.level) {
                    let sh = q.level - lv;
                    let mut lo = [0i64; N];
                    let mut hi = [0i64; N];
                    for a in 0..N {
                        let p = 1i64 << sh;
                        lo[a] = (q.index[a] + p - 1).div_euclid(p) - 1;
                        hi[a] = (q.index[a] + 1).div_euclid(p);
                    }
                    let mut idx = lo;
                    'outer: loop {
                        let cand = DyadicCube::new(lv, idx);
                        if let Some(j) = self.find(&cand) {
                            if j != i && cand.touches(&q) {
                                found.push(j);
                            }
                        }
                        let mut a = 0;
                        loop {
                            if a == N {
                                break 'outer;
                            }
                            idx[a] += 1;
                            if idx[a] <= hi[a] {
                                break;
                            }
                            idx[a] = lo[a];
                            a += 1;
                        }
                    }
                }
                found
            })
            .collect();
        let mut adj = vec![Vec::new(); self.cubes.len()];
        for (i, list) in pairs.into_iter().enumerate() {
            for j in list {
                adj[i].push(j);
                if self.cubes[j].level < self.cubes[i].level {
                    adj[j].push(i);
                }
            }
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
            l.dedup();
        }
        adj
    }

    /// Extreme side ratios `ℓ(Q') / ℓ(Q)` over touching pairs.
    pub fn neighbor_ratio_extremes(&self) -> (f64, f64) {
        let adj = self.adjacency();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for (i, list) in adj.iter().enumerate() {
            for &j in list {
                let r = (self.cubes[i].level as f64 - self.cubes[j].level as f64).exp2();
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        if hi == 0.0 {
            (1.0, 1.0)
        } else {
            (lo, hi)
        }
    }

    /// True when no two cubes have overlapping interiors (checked through
    /// ancestor lookups).
    pub fn interiors_disjoint(&self) -> bool {
        self.cubes.par_iter().all(|q| {
            let mut p = q.parent();
            while let Some(a) = p {
                if self.find(&a).is_some() {
                    return false;
                }
                p = a.parent();
            }
            true
        })
    }

    pub fn stats(&self) -> CoverStats {
        let mut counts: Vec<(u32, usize)> = Vec::new();
        for q in &self.cubes {
            match counts.last_mut() {
                Some((l, c)) if *l == q.level => *c += 1,
                _ => counts.push((q.level, 1)),
            }
        }
        let (lo, hi) = self.neighbor_ratio_extremes();
        CoverStats {
            cubes: self.cubes.len(),
            truncated: self.truncated.iter().filter(|&&t| t).count(),
            level_counts: counts,
            covered_measure: self.covered_measure(),
            min_neighbor_ratio: lo,
            max_neighbor_ratio: hi,
        }
    }

    /// `dist(Q, ∂O) / ℓ(Q)` estimated from the oracle by sampling the cube
    /// on a `(m+1)^N` lattice (valid because `Q ⊆ O`).
    pub fn sampled_distance_ratio(&self, domain: &dyn Domain<N>, i: usize, m: usize) -> f64 {
        let q = &self.cubes[i];
        let lo = q.corner(&self.lattice);
        let s = q.side(&self.lattice);
        let mut best = f64::INFINITY;
        let mut k = [0usize; N];
        loop {
            let mut x = lo;
            for a in 0..N {
                x[a] += s * k[a] as f64 / m as f64;
            }
            best = best.min(domain.boundary_distance(&x));
            let mut a = 0;
            loop {
                if a == N {
                    return best / s;
                }
                k[a] += 1;
                if k[a] <= m {
                    break;
                }
                k[a] = 0;
                a += 1;
            }
        }
    }
}
