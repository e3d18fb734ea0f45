//! Small exterior cubes and their reflections into the interior cover.

use rayon::prelude::*;
use serde::Serialize;

use super::cube::DyadicCube;
use super::whitney::WhitneyCover;
use crate::error::{Error, Result};
use crate::Point;

/// `ℓ(Q) <= εδ / (16 n)`; `δ = ∞` keeps everything.
pub fn small_cube_cutoff(n: usize, eps: f64, delta: f64) -> f64 {
    eps * delta / (16.0 * n as f64)
}

/// Indices of the cubes with `ℓ(Q) <= εδ/(16n)`.
pub fn small_cubes<const N: usize>(cover: &WhitneyCover<N>, eps: f64, delta: f64) -> Vec<usize> {
    let cut = small_cube_cutoff(N, eps, delta);
    (0..cover.len()).filter(|&i| cover.side(i) <= cut).collect()
}

pub const DEFAULT_SEARCH_FACTOR: f64 = 16.0;

/// Reflection of a set of exterior cubes.
#[derive(Clone, Debug, Serialize)]
pub struct Reflection {
    /// Exterior cube indices (into the outside cover).
    pub outside: Vec<usize>,
    /// Matching interior cube indices.
    pub star: Vec<usize>,
    /// `sup dist(Q, Q*) / ℓ(Q)`.
    pub realized_constant: f64,
    /// Worst ratio per exterior level, ascending level.
    pub per_level: Vec<(u32, f64)>,
}

/// Nearest admissible interior cube by center distance: level within two of
/// `q` and no finer, center within `factor * ℓ(Q)`. Ties go to the smaller
/// `(level, index)`.
pub fn reflect_one<const N: usize>(q: &DyadicCube<N>, inside: &WhitneyCover<N>, factor: f64) -> Option<usize> {
    let lat = &inside.lattice;
    let x = q.center(lat);
    let l = q.side(lat);
    let radius = factor * l;
    let mut best: Option<(f64, usize)> = None;
    for level in q.level.saturating_sub(2)..=q.level {
        let s = lat.side_at(level);
        let home = lat.locate(&x, level);
        // rings past the lattice extent hold no cubes
        let span = lat.cells_at(level).into_iter().max().unwrap_or(0);
        let max_ring = ((radius / s).ceil().min(span as f64) as i64) + 1;
        let first = inside.cubes.partition_point(|c| c.level < level);
        let last = inside.cubes.partition_point(|c| c.level <= level);
        let consider = |best: &mut Option<(f64, usize)>, j: usize| {
            let d = dist(&inside.cubes[j].center(lat), &x);
            if d <= radius {
                let better = match *best {
                    None => true,
                    Some((bd, bj)) => d < bd || (d == bd && inside.cubes[j] < inside.cubes[bj]),
                };
                if better {
                    *best = Some((d, j));
                }
            }
        };
        if ((2 * max_ring + 1) as f64).powi(N as i32) > (last - first) as f64 {
            // a sparse level: scanning it beats walking the rings
            (first..last).for_each(|j| consider(&mut best, j));
            continue;
        }
        for k in 0..=max_ring {
            // centers in ring k are at least (k - 1/2) s away
            let ring_lb = (k as f64 - 0.5).max(0.0) * s;
            if ring_lb > radius || best.is_some_and(|(d, _)| ring_lb > d) {
                break;
            }
            for_each_in_ring(&home, k, |idx| {
                if let Some(j) = inside.find(&DyadicCube::new(level, idx)) {
                    consider(&mut best, j);
                }
            });
        }
    }
    best.map(|(_, j)| j)
}

fn for_each_in_ring<const N: usize>(home: &[i64; N], k: i64, mut f: impl FnMut([i64; N])) {
    let mut off = [-k; N];
    loop {
        if off.iter().any(|v| v.abs() == k) {
            let mut idx = *home;
            for i in 0..N {
                idx[i] += off[i];
            }
            f(idx);
        }
        let mut a = 0;
        loop {
            if a == N {
                return;
            }
            off[a] += 1;
            if off[a] <= k {
                break;
            }
            off[a] = -k;
            a += 1;
        }
    }
}

fn dist<const N: usize>(a: &Point<N>, b: &Point<N>) -> f64 {
    (0..N).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

/// Per-cube reflections; `None` where no admissible cube exists.
pub fn reflect_scan<const N: usize>(
    outside: &WhitneyCover<N>,
    subset: &[usize],
    inside: &WhitneyCover<N>,
    factor: f64,
) -> Vec<Option<usize>> {
    subset
        .par_iter()
        .map(|&i| reflect_one(&outside.cubes[i], inside, factor))
        .collect()
}

/// Reflects every cube in `subset`, failing on the first cube (in subset
/// order) without an admissible partner.
pub fn reflect_cubes<const N: usize>(
    outside: &WhitneyCover<N>,
    subset: &[usize],
    inside: &WhitneyCover<N>,
    factor: f64,
) -> Result<Reflection> {
    let found = reflect_scan(outside, subset, inside, factor);
    let mut star = Vec::with_capacity(subset.len());
    for (k, f) in found.into_iter().enumerate() {
        match f {
            Some(j) => star.push(j),
            None => {
                let q = outside.cubes[subset[k]];
                return Err(Error::NoReflection {
                    level: q.level,
                    index: q.index.to_vec(),
                });
            }
        }
    }
    Ok(build_report(outside, subset.to_vec(), star, inside))
}

pub(crate) fn build_report<const N: usize>(
    outside: &WhitneyCover<N>,
    subset: Vec<usize>,
    star: Vec<usize>,
    inside: &WhitneyCover<N>,
) -> Reflection {
    let mut per_level: Vec<(u32, f64)> = Vec::new();
    let mut sup = 0.0f64;
    for (&i, &j) in subset.iter().zip(&star) {
        let q = &outside.cubes[i];
        let r = q.distance(&inside.cubes[j], &inside.lattice) / q.side(&outside.lattice);
        sup = sup.max(r);
        match per_level.iter_mut().find(|(l, _)| *l == q.level) {
            Some(e) => e.1 = e.1.max(r),
            None => per_level.push((q.level, r)),
        }
    }
    per_level.sort_by_key(|e| e.0);
    Reflection {
        outside: subset,
        star,
        realized_constant: sup,
        per_level,
    }
}
