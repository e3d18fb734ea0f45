//! Cell-centered uniform grids, sampled fields and discrete Sobolev norms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::multiindex::{up_to, MultiIndex};
use crate::error::{invalid, Result};
use crate::geometry::cube::serde_arrays;
use crate::geometry::Aabb;
use crate::Point;

/// Cells `lo + h (i + [0,1]^N)`, `0 <= i < dims`; values live at centers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<const N: usize> {
    #[serde(with = "serde_arrays")]
    pub lo: [f64; N],
    pub h: f64,
    #[serde(with = "serde_arrays")]
    pub dims: [usize; N],
}

impl<const N: usize> GridSpec<N> {
    /// Grid on `[lo, hi]`; every extent must be a multiple of `h`.
    pub fn from_box(lo: [f64; N], hi: [f64; N], h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return invalid("grid spacing must be positive");
        }
        let mut dims = [0usize; N];
        for i in 0..N {
            let q = (hi[i] - lo[i]) / h;
            let r = q.round();
            if r < 1.0 || (q - r).abs() > 1e-9 * q.max(1.0) {
                return invalid(format!("extent {} is not a multiple of h = {h}", hi[i] - lo[i]));
            }
            dims[i] = r as usize;
        }
        Ok(Self { lo, h, dims })
    }

    pub fn bounds(&self) -> Aabb<N> {
        let mut hi = self.lo;
        for i in 0..N {
            hi[i] += self.h * self.dims[i] as f64;
        }
        Aabb::new(self.lo, hi)
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(N as i32)
    }

    /// Row-major flat index (last axis fastest).
    pub fn flat(&self, idx: &[usize; N]) -> usize {
        let mut f = 0;
        for i in 0..N {
            f = f * self.dims[i] + idx[i];
        }
        f
    }

    pub fn unflat(&self, mut f: usize) -> [usize; N] {
        let mut idx = [0; N];
        for i in (0..N).rev() {
            idx[i] = f % self.dims[i];
            f /= self.dims[i];
        }
        idx
    }

    pub fn center(&self, idx: &[usize; N]) -> Point<N> {
        let mut c = self.lo;
        for i in 0..N {
            c[i] += (idx[i] as f64 + 0.5) * self.h;
        }
        c
    }

    pub fn center_flat(&self, f: usize) -> Point<N> {
        self.center(&self.unflat(f))
    }

    /// Cell holding `x`, if inside the grid.
    pub fn locate(&self, x: &Point<N>) -> Option<[usize; N]> {
        let mut idx = [0; N];
        for i in 0..N {
            let v = ((x[i] - self.lo[i]) / self.h).floor();
            if v < 0.0 || v >= self.dims[i] as f64 {
                return None;
            }
            idx[i] = v as usize;
        }
        Some(idx)
    }

    /// Flat index shifted by `off` cells, if still inside.
    pub fn shift(&self, idx: &[usize; N], off: &[i64; N]) -> Option<usize> {
        let mut j = [0usize; N];
        for i in 0..N {
            let v = idx[i] as i64 + off[i];
            if v < 0 || v >= self.dims[i] as i64 {
                return None;
            }
            j[i] = v as usize;
        }
        Some(self.flat(&j))
    }

    /// Twice as fine on the same box.
    pub fn refined(&self) -> Self {
        let mut dims = self.dims;
        for d in dims.iter_mut() {
            *d *= 2;
        }
        Self {
            lo: self.lo,
            h: 0.5 * self.h,
            dims,
        }
    }
}

/// Sampled field: `components` values per cell, cell-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField<const N: usize> {
    pub spec: GridSpec<N>,
    pub components: usize,
    pub values: Vec<f64>,
}

impl<const N: usize> GridField<N> {
    pub fn zeros(spec: GridSpec<N>, components: usize) -> Self {
        Self {
            spec,
            components,
            values: vec![0.0; spec.len() * components],
        }
    }

    pub fn from_values(spec: GridSpec<N>, components: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() * components {
            return invalid("value count does not match the grid");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("grid values must be finite");
        }
        Ok(Self {
            spec,
            components,
            values,
        })
    }

    /// Samples a scalar field at cell centers (in parallel, deterministic).
    pub fn sample<F: Field<N> + ?Sized>(spec: GridSpec<N>, u: &F) -> Self {
        let values = (0..spec.len())
            .into_par_iter()
            .map(|f| u.value(&spec.center_flat(f)))
            .collect();
        Self {
            spec,
            components: 1,
            values,
        }
    }

    /// Samples where `keep` holds, zero elsewhere.
    pub fn sample_masked<F: Field<N> + ?Sized>(spec: GridSpec<N>, u: &F, mask: &[bool]) -> Self {
        let values = (0..spec.len())
            .into_par_iter()
            .map(|f| if mask[f] { u.value(&spec.center_flat(f)) } else { 0.0 })
            .collect();
        Self {
            spec,
            components: 1,
            values,
        }
    }

    pub fn get(&self, f: usize) -> f64 {
        self.values[f * self.components]
    }

    pub fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().skip(c).step_by(self.components).copied().collect()
    }

    /// Multilinear interpolation of component 0 between cell centers,
    /// constant beyond the outermost centers.
    pub fn interpolate(&self, x: &Point<N>) -> f64 {
        let s = &self.spec;
        let mut base = [0usize; N];
        let mut t = [0.0; N];
        for i in 0..N {
            let u = ((x[i] - s.lo[i]) / s.h - 0.5).clamp(0.0, (s.dims[i] - 1) as f64);
            let b = (u.floor() as usize).min(s.dims[i].saturating_sub(2));
            base[i] = b;
            t[i] = if s.dims[i] > 1 { u - b as f64 } else { 0.0 };
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << N) {
            let mut idx = base;
            let mut w = 1.0;
            for i in 0..N {
                let bit = (corner >> i) & 1;
                if s.dims[i] > 1 {
                    idx[i] += bit;
                    w *= if bit == 1 { t[i] } else { 1.0 - t[i] };
                } else if bit == 1 {
                    w = 0.0;
                }
            }
            if w != 0.0 {
                acc += w * self.get(s.flat(&idx));
            }
        }
        acc
    }
}

/// Field view of a grid by multilinear interpolation.
#[derive(Clone, Debug)]
pub struct Interpolated<const N: usize>(pub GridField<N>);

impl<const N: usize> Field<N> for Interpolated<N> {
    fn value(&self, x: &Point<N>) -> f64 {
        self.0.interpolate(x)
    }
}

fn binom(m: usize, j: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..j {
        c = c * (m - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Forward-difference stencil of `D^α`: `(offset, weight)` pairs.
pub fn forward_stencil<const N: usize>(alpha: &MultiIndex<N>, h: f64) -> Vec<([i64; N], f64)> {
    let mut out = vec![([0i64; N], 1.0)];
    for a in 0..N {
        let m = alpha[a];
        if m == 0 {
            continue;
        }
        let mut next = Vec::new();
        for (off, w) in &out {
            for j in 0..=m {
                let mut o = *off;
                o[a] += j as i64;
                let sign = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
                next.push((o, w * sign * binom(m, j) / h.powi(m as i32)));
            }
        }
        out = next;
    }
    out
}

/// `Σ h^N |D^α u|^p` over cells whose whole forward stencil lies in `mask`,
/// reduced slab by slab in a fixed order.
pub fn alpha_power_sum<const N: usize>(u: &GridField<N>, mask: &[bool], alpha: &MultiIndex<N>, p: f64) -> f64 {
    let spec = u.spec;
    let st = forward_stencil(alpha, spec.h);
    let slab = spec.len() / spec.dims[0];
    let partial: Vec<f64> = (0..spec.dims[0])
        .into_par_iter()
        .map(|i0| {
            let mut acc = 0.0;
            'cells: for f in i0 * slab..(i0 + 1) * slab {
                let idx = spec.unflat(f);
                let mut d = 0.0;
                for (off, w) in &st {
                    match spec.shift(&idx, off) {
                        Some(g) if mask[g] => d += w * u.get(g),
                        _ => continue 'cells,
                    }
                }
                acc += d.abs().powf(p);
            }
            acc
        })
        .collect();
    spec.cell_volume() * partial.iter().sum::<f64>()
}

/// Per-order sums `Σ_{|α| = m} Σ h^N |D^α u|^p`, `m = 0..=k`.
pub fn grid_power_sums<const N: usize>(u: &GridField<N>, mask: &[bool], k: usize, p: f64) -> Vec<f64> {
    let mut sums = vec![0.0; k + 1];
    for alpha in up_to::<N>(k) {
        sums[alpha.iter().sum::<usize>()] += alpha_power_sum(u, mask, &alpha, p);
    }
    sums
}

/// `Σ_{|α| <= k} (Σ h^N |D^α u|^p)^{1/p}` with forward differences over
/// `mask`.
pub fn grid_sobolev_norm<const N: usize>(u: &GridField<N>, mask: &[bool], k: usize, p: f64) -> f64 {
    up_to::<N>(k)
        .iter()
        .map(|a| alpha_power_sum(u, mask, a, p).powf(1.0 / p))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::field::AnalyticField;

    #[test]
    fn flat_index_roundtrip() {
        let s = GridSpec::<3>::from_box([0.0; 3], [1.0, 0.5, 0.25], 0.125).unwrap();
        assert_eq!(s.dims, [8, 4, 2]);
        for f in 0..s.len() {
            assert_eq!(s.flat(&s.unflat(f)), f);
        }
        assert!(GridSpec::<2>::from_box([0.0; 2], [1.0, 0.3], 0.125).is_err());
    }

    #[test]
    fn interpolation_reproduces_linear_fields() {
        let s = GridSpec::<2>::from_box([0.0; 2], [1.0; 2], 1.0 / 16.0).unwrap();
        let g = GridField::sample(s, &AnalyticField::new("lin", |x: &Point<2>| 2.0 * x[0] - x[1] + 0.5));
        for x in [[0.2, 0.7], [0.5, 0.5], [0.9, 0.1]] {
            assert!((g.interpolate(&x) - (2.0 * x[0] - x[1] + 0.5)).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_norm_of_linear_field() {
        // u = x1 on the unit square: ||u||_2 = 1/sqrt3, ||∂1 u||_2 = 1
        let s = GridSpec::<2>::from_box([0.0; 2], [1.0; 2], 1.0 / 64.0).unwrap();
        let g = GridField::sample(s, &AnalyticField::coordinate(0));
        let mask = vec![true; s.len()];
        let n = grid_sobolev_norm(&g, &mask, 1, 2.0);
        // the forward difference drops one column of cells
        assert!((n - (1.0 / 3f64.sqrt() + (63.0f64 / 64.0).sqrt())).abs() < 1e-4, "{n}");
        let sums = grid_power_sums(&g, &mask, 1, 2.0);
        assert!((sums[1] - 63.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn stencil_weights() {
        let st = forward_stencil(&[2, 1], 0.5);
        assert_eq!(st.len(), 6);
        let total: f64 = st.iter().map(|e| e.1).sum();
        assert_eq!(total, 0.0);
    }
}
