//! Discrete convolution with the standard smooth bump.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::GridField;

/// Unnormalised bump `exp(1 - 1/(1 - s^2))` for `s < 1`.
pub fn bump_profile(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Kernel offsets and weights of `θ_t` on a grid of spacing `h`, weights
/// summing to one.
pub fn kernel<const N: usize>(t: f64, h: f64) -> Vec<([i64; N], f64)> {
    let m = (t / h).ceil() as i64;
    let mut out = Vec::new();
    let mut off = [-m; N];
    loop {
        let r = off.iter().map(|&o| (o as f64 * h).powi(2)).sum::<f64>().sqrt();
        let w = bump_profile(r / t);
        if w > 0.0 {
            out.push((off, w));
        }
        let mut a = 0;
        loop {
            if a == N {
                let total: f64 = out.iter().map(|e| e.1).sum();
                for e in out.iter_mut() {
                    e.1 /= total;
                }
                return out;
            }
            off[a] += 1;
            if off[a] <= m {
                break;
            }
            off[a] = -m;
            a += 1;
        }
    }
}

/// `θ_t * g` with the grid extended by its edge values. Accumulated as
/// `g(x) + Σ w (g(x + o) - g(x))` so locally constant input is returned
/// unchanged.
pub fn mollify<const N: usize>(g: &GridField<N>, t: f64) -> Result<GridField<N>> {
    let spec = g.spec;
    if t < 2.0 * spec.h {
        return Err(Error::KernelUnderresolved { t, h: spec.h });
    }
    let ker = kernel::<N>(t, spec.h);
    let nc = g.components;
    let values: Vec<f64> = (0..spec.len())
        .into_par_iter()
        .flat_map_iter(|f| {
            let idx = spec.unflat(f);
            let own = spec.flat(&idx) * nc;
            let mut acc = vec![0.0; nc];
            for (off, w) in &ker {
                let mut j = [0usize; N];
                for i in 0..N {
                    j[i] = (idx[i] as i64 + off[i]).clamp(0, spec.dims[i] as i64 - 1) as usize;
                }
                let base = spec.flat(&j) * nc;
                for (c, a) in acc.iter_mut().enumerate() {
                    *a += w * (g.values[base + c] - g.values[own + c]);
                }
            }
            for (c, a) in acc.iter_mut().enumerate() {
                *a += g.values[own + c];
            }
            acc
        })
        .collect();
    GridField::from_values(spec, nc, values)
}
