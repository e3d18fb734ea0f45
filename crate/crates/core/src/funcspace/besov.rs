//! Jets on Ahlfors clouds and the `B^{p,p}_s` norm by dyadic pair sums.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::field::{derivative, Field};
use super::multiindex::{add, alpha_factorial, order, power, up_to, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::geometry::AhlforsCloud;

/// A family `{f_α}_{|α| <= k-1}` on the points of a cloud.
#[derive(Clone, Debug)]
pub struct BesovJet<const N: usize> {
    pub cloud: Arc<AhlforsCloud<N>>,
    pub k: usize,
    /// Point-major, components aligned with `up_to::<N>(k - 1)`.
    pub values: Vec<f64>,
}

impl<const N: usize> BesovJet<N> {
    pub fn components(&self) -> usize {
        up_to::<N>(self.k - 1).len()
    }

    pub fn new(cloud: Arc<AhlforsCloud<N>>, k: usize, values: Vec<f64>) -> Result<Self> {
        if k == 0 {
            return invalid("jet order must be at least 1");
        }
        let m = up_to::<N>(k - 1).len();
        if values.len() != m * cloud.len() {
            return invalid(format!("jet needs {m} components per point"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("jet values must be finite");
        }
        Ok(Self { cloud, k, values })
    }

    pub fn zero(cloud: Arc<AhlforsCloud<N>>, k: usize) -> Self {
        let m = up_to::<N>(k - 1).len();
        let len = m * cloud.len();
        Self {
            cloud,
            k,
            values: vec![0.0; len],
        }
    }

    /// `f_α = ∂^α u` at the cloud points (finite differences with step `fd`
    /// where no exact derivative exists).
    pub fn from_field<F: Field<N> + ?Sized>(cloud: Arc<AhlforsCloud<N>>, u: &F, k: usize, fd: f64) -> Self {
        let alphas = up_to::<N>(k - 1);
        let values = cloud
            .points
            .par_iter()
            .flat_map_iter(|x| alphas.iter().map(|a| derivative(u, x, a, fd).0).collect::<Vec<_>>())
            .collect();
        Self { cloud, k, values }
    }

    pub fn at(&self, point: usize) -> &[f64] {
        let m = self.components();
        &self.values[point * m..(point + 1) * m]
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            cloud: self.cloud.clone(),
            k: self.k,
            values: self.values.iter().map(|v| t * v).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BesovReport {
    pub s: f64,
    pub p: f64,
    pub j_max: u32,
    pub norm: f64,
    /// `Σ_α ‖f_α‖_{L^p(σ)}`.
    pub lp_part: f64,
    /// `(Σ_j shell_j)^{1/p}`.
    pub remainder_part: f64,
    /// `Σ_α 2^{j(s-|α|)p} 2^{jd} Σ_{|x-y| < 2^-j} w_x w_y |R_α(x,y)|^p`,
    /// `j = 0..=j_max`.
    pub shells: Vec<f64>,
    pub pairs: usize,
}

/// `R_α(x, y) = f_α(x) - Σ_{|β| <= k-1-|α|} (x-y)^β / β! f_{α+β}(y)`.
fn remainder<const N: usize>(
    alphas: &[MultiIndex<N>],
    pos: &dyn Fn(&MultiIndex<N>) -> usize,
    fx: &[f64],
    fy: &[f64],
    d: &[f64; N],
    k: usize,
    ai: usize,
) -> f64 {
    let a = alphas[ai];
    let mut r = fx[ai];
    for b in up_to::<N>(k - 1 - order(&a)) {
        r -= power(d, &b) / alpha_factorial(&b) * fy[pos(&add(&a, &b))];
    }
    r
}

/// The `B^{p,p}_s` norm of a jet (`q = p`, `k = [s] + 1`) with pairs
/// binned by dyadic separation `|x - y| < 2^{-j}`, `j <= j_max`.
pub fn besov_norm<const N: usize>(jet: &BesovJet<N>, s: f64, p: f64, j_max: u32) -> Result<BesovReport> {
    if !(p >= 1.0 && p.is_finite()) {
        return invalid("p must lie in [1, ∞)");
    }
    if !(s > 0.0) || s.fract() == 0.0 {
        return invalid("s must be positive and not an integer");
    }
    let expected = s.floor() as usize + 1;
    if jet.k != expected {
        return Err(Error::OrderMismatch { expected, found: jet.k });
    }
    let k = jet.k;
    let cloud = &jet.cloud;
    let alphas = up_to::<N>(k - 1);
    let m = alphas.len();
    let pos = |a: &MultiIndex<N>| alphas.iter().position(|b| b == a).unwrap();
    let bins = j_max as usize + 1;

    // per outer point: histogram[α][shell] of w_x w_y |R_α|^p
    let per_point: Vec<(Vec<f64>, usize)> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let x = cloud.points[i];
            let fx = jet.at(i);
            let mut hist = vec![0.0; m * bins];
            let mut count = 0;
            for j in cloud.ball(&x, 1.0) {
                if j == i {
                    continue;
                }
                let y = cloud.points[j];
                let mut d = [0.0; N];
                for t in 0..N {
                    d[t] = x[t] - y[t];
                }
                let r = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r >= 1.0 || r == 0.0 {
                    continue;
                }
                // largest j with r < 2^-j
                let mut shell = (-r.log2()).floor();
                if 0.5f64.powf(shell) <= r {
                    shell -= 1.0;
                }
                let shell = (shell.max(0.0) as usize).min(j_max as usize);
                count += 1;
                let w = cloud.weights[i] * cloud.weights[j];
                let fy = jet.at(j);
                for ai in 0..m {
                    let rem = remainder(&alphas, &pos, fx, fy, &d, k, ai);
                    hist[ai * bins + shell] += w * rem.abs().powf(p);
                }
            }
            (hist, count)
        })
        .collect();

    let mut hist = vec![0.0; m * bins];
    let mut pairs = 0;
    for (h, c) in &per_point {
        for (a, b) in hist.iter_mut().zip(h) {
            *a += b;
        }
        pairs += c;
    }
    // pairs with separation below 2^-j lie in shells j..=j_max
    let mut shells = vec![0.0; bins];
    for (ai, a) in alphas.iter().enumerate() {
        let mut suffix = 0.0;
        for j in (0..bins).rev() {
            suffix += hist[ai * bins + j];
            let scale = 2f64.powf(j as f64 * ((s - order(a) as f64) * p + cloud.dim));
            shells[j] += scale * suffix;
        }
    }
    let lp_part: f64 = (0..m)
        .map(|ai| {
            (0..cloud.len())
                .map(|i| cloud.weights[i] * jet.at(i)[ai].abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p)
        })
        .sum();
    let remainder_part = shells.iter().sum::<f64>().powf(1.0 / p);
    Ok(BesovReport {
        s,
        p,
        j_max,
        norm: lp_part + remainder_part,
        lp_part,
        remainder_part,
        shells,
        pairs,
    })
}
