//! Three coefficient families whose solutions leave `W^{m,p}` just above
//! `p = 2`: a 2-D scalar tensor with a rotating degeneracy, a 3-D system
//! with a radial rank-one perturbation, and a fourth-order radial power.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::fem::{fem_error, solve_mixed, DistanceFn, FemSpace, Load, WeakProblem};
use super::tensor::{CoefficientTensor, EllipticityReport};
use crate::error::{invalid, Result};
use crate::funcspace::multiindex::{order, MultiIndex};
use crate::funcspace::quadrature::gauss_legendre;
use crate::funcspace::sobolev::dyadic_ladder;
use crate::funcspace::{sobolev_norm_scan, AnalyticField, Field, ScanReport};
use crate::geometry::partition::smooth_step;
use crate::geometry::{Ball, Rect};
use crate::Point;

/// Exponent margin around each threshold.
pub const MARGIN: f64 = 0.05;

/// A membership scan on each side of a threshold.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdScans {
    pub threshold: f64,
    pub p_below: f64,
    pub p_above: f64,
    pub below: ScanReport,
    pub above: ScanReport,
}

impl ThresholdScans {
    /// Below converges and above diverges.
    pub fn split(&self) -> bool {
        use crate::funcspace::ScanVerdict::*;
        self.below.verdict == Converges && self.above.verdict == Diverges
    }

    pub fn mesh_independent(&self) -> bool {
        self.below.mesh_independent.unwrap_or(false) && self.above.mesh_independent.unwrap_or(false)
    }
}

/// `W^{k,p}` scan on `[-1/2, 1/2]^N` with `cells0 * 2^i` cells per axis,
/// `i < levels`.
pub fn membership_scan<const N: usize>(
    components: &[&dyn Field<N>],
    k: usize,
    p: f64,
    cells0: usize,
    levels: usize,
) -> Result<ScanReport> {
    let grids = dyadic_ladder([-0.5; N], [0.5; N], cells0, levels)?;
    let domain = Rect::new([-1.0; N], [1.0; N]);
    sobolev_norm_scan(components, &domain, &grids, k, p)
}

fn scans<const N: usize>(
    components: &[&dyn Field<N>],
    k: usize,
    threshold: f64,
    cells0: usize,
    levels: usize,
) -> Result<ThresholdScans> {
    let (p_below, p_above) = (threshold * (1.0 - MARGIN), threshold * (1.0 + MARGIN));
    Ok(ThresholdScans {
        threshold,
        p_below,
        p_above,
        below: membership_scan(components, k, p_below, cells0, levels)?,
        above: membership_scan(components, k, p_above, cells0, levels)?,
    })
}

/// Derivative of the smooth step.
fn smooth_step_prime(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    let f = |v: f64| (-1.0 / v).exp();
    let fp = |v: f64| f(v) / (v * v);
    let (a, b) = (f(u), f(1.0 - u));
    (fp(u) * b + a * fp(1.0 - u)) / ((a + b) * (a + b))
}

/// Radial cutoff: 1 for `|x| <= inner`, 0 for `|x| >= outer`.
#[derive(Clone, Copy, Debug)]
pub struct Cutoff {
    pub inner: f64,
    pub outer: f64,
}

impl Cutoff {
    pub fn value(&self, x: &Point<2>) -> f64 {
        let r = x[0].hypot(x[1]);
        smooth_step((self.outer - r) / (self.outer - self.inner))
    }

    pub fn gradient(&self, x: &Point<2>) -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        if r == 0.0 {
            return [0.0; 2];
        }
        let d = -smooth_step_prime((self.outer - r) / (self.outer - self.inner)) / (self.outer - self.inner);
        [d * x[0] / r, d * x[1] / r]
    }
}

/// `v = x1 |x|^{μ-1}`.
pub fn meyers_field(mu: f64) -> AnalyticField<2> {
    let v = move |x: &Point<2>| x[0] * (x[0] * x[0] + x[1] * x[1]).powf(0.5 * (mu - 1.0));
    AnalyticField::new(format!("meyers-v(mu={mu})"), v)
        .with_jet(move |x, a| match (a[0], a[1]) {
            (0, 0) => Some(v(x)),
            (1, 0) | (0, 1) => Some(meyers_gradient(mu, x)[if a[0] == 1 { 0 } else { 1 }]),
            _ => None,
        })
        .with_singular(vec![[0.0, 0.0]])
}

pub fn meyers_gradient(mu: f64, x: &Point<2>) -> [f64; 2] {
    let r2 = x[0] * x[0] + x[1] * x[1];
    let a = r2.powf(0.5 * (mu - 1.0));
    let b = (mu - 1.0) * r2.powf(0.5 * (mu - 3.0));
    [a + b * x[0] * x[0], b * x[0] * x[1]]
}

#[derive(Clone, Debug, Serialize)]
pub struct GalerkinRow {
    pub h: f64,
    pub h1_error: f64,
    pub iterations: usize,
    pub conormal_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeyersReport {
    pub mu: f64,
    pub ellipticity: EllipticityReport,
    /// `max |∫ A∇v·∇ψ| / ‖ψ‖_{W^{1,2}}` over hats in `0.2 <= |x| <= 0.5`.
    pub weak_residual: f64,
    pub tested_hats: usize,
    pub scans: ThresholdScans,
    pub galerkin: Vec<GalerkinRow>,
    pub galerkin_monotone: bool,
}

/// `max |∫ A∇v·∇ψ_z| / ‖ψ_z‖_{W^{1,2}}` over the hats of spacing `h` with
/// nodes `z` in the annulus `[r0, r1]`, 5x5 Gauss per cell.
pub fn meyers_weak_residual(mu: f64, h: f64, r0: f64, r1: f64) -> (f64, usize) {
    let tensor = CoefficientTensor::meyers(mu);
    let (gx, gw) = gauss_legendre(5);
    let m = (r1 / h).ceil() as i64;
    let nodes: Vec<Point<2>> = (-m..=m)
        .flat_map(|i| (-m..=m).map(move |j| [i as f64 * h, j as f64 * h]))
        .filter(|z| {
            let r = z[0].hypot(z[1]);
            r >= r0 && r <= r1
        })
        .collect();
    let worst = nodes
        .par_iter()
        .map(|z| {
            let mut form = 0.0;
            let mut norm2 = 0.0;
            for (ox, oy) in [(-1.0, -1.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 0.0)] {
                for (i, xi) in gx.iter().enumerate() {
                    for (j, yj) in gx.iter().enumerate() {
                        let w = 0.25 * gw[i] * gw[j] * h * h;
                        let s = 0.5 * (xi + 1.0);
                        let t = 0.5 * (yj + 1.0);
                        let x = [z[0] + (ox + s) * h, z[1] + (oy + t) * h];
                        // hat centred at z: product of 1-D tents
                        let tx = 1.0 - ((x[0] - z[0]) / h).abs();
                        let ty = 1.0 - ((x[1] - z[1]) / h).abs();
                        let sx = if x[0] < z[0] { 1.0 / h } else { -1.0 / h };
                        let sy = if x[1] < z[1] { 1.0 / h } else { -1.0 / h };
                        let g = [sx * ty, tx * sy];
                        let a = tensor.matrix2(&x);
                        let dv = meyers_gradient(mu, &x);
                        let adv = [a[0][0] * dv[0] + a[0][1] * dv[1], a[1][0] * dv[0] + a[1][1] * dv[1]];
                        form += w * (adv[0] * g[0] + adv[1] * g[1]);
                        norm2 += w * (tx * tx * ty * ty + g[0] * g[0] + g[1] * g[1]);
                    }
                }
            }
            form.abs() / norm2.sqrt()
        })
        .reduce(|| 0.0, f64::max);
    (worst, nodes.len())
}

/// Galerkin solve for `u = φ v` on the unit disc, `D = ∂Ω`, with the load
/// `⟨f, ψ⟩ = ∫ v A∇φ·∇ψ - ∫ (A∇v·∇φ) ψ` supported where `∇φ ≠ 0`.
pub fn meyers_galerkin(mu: f64, h: f64, cutoff: Cutoff) -> Result<GalerkinRow> {
    let tensor = CoefficientTensor::meyers(mu);
    let disc = Ball {
        center: [0.0, 0.0],
        radius: 1.0,
    };
    let d: DistanceFn = Arc::new(|x: &Point<2>| (1.0 - x[0].hypot(x[1])).abs());
    let space = FemSpace::new(&disc, [-1.0, -1.0], [1.0, 1.0], h, &d)?;
    let (t1, t2) = (tensor.clone(), tensor.clone());
    let v = move |x: &Point<2>| x[0] * (x[0] * x[0] + x[1] * x[1]).powf(0.5 * (mu - 1.0));
    let load = Load::density(move |x| {
        let g = cutoff.gradient(x);
        if g == [0.0, 0.0] {
            return 0.0;
        }
        let a = t1.matrix2(x);
        let dv = meyers_gradient(mu, x);
        -((a[0][0] * dv[0] + a[0][1] * dv[1]) * g[0] + (a[1][0] * dv[0] + a[1][1] * dv[1]) * g[1])
    })
    .with_flux(move |x| {
        let g = cutoff.gradient(x);
        if g == [0.0, 0.0] {
            return [0.0, 0.0];
        }
        let a = t2.matrix2(x);
        let s = v(x);
        [
            s * (a[0][0] * g[0] + a[0][1] * g[1]),
            s * (a[1][0] * g[0] + a[1][1] * g[1]),
        ]
    });
    let mut problem = WeakProblem::new(tensor, space, load);
    problem.load_order = 4;
    let sol = solve_mixed(&problem)?;
    let exact = move |x: &Point<2>| cutoff.value(x) * v(x);
    let grad = move |x: &Point<2>| {
        let (p, gp) = (cutoff.value(x), cutoff.gradient(x));
        let dv = meyers_gradient(mu, x);
        let s = v(x);
        [p * dv[0] + s * gp[0], p * dv[1] + s * gp[1]]
    };
    let err = fem_error(&sol.space, &sol.values, &exact, Some(&grad));
    Ok(GalerkinRow {
        h,
        h1_error: err.h1.unwrap(),
        iterations: sol.diagnostics.iterations,
        conormal_residual: sol.diagnostics.conormal_residual,
    })
}

/// The scalar example with threshold `2/(1-μ)`.
pub fn meyers_case(mu: f64, scan_cells0: usize, scan_levels: usize, fem_h: &[f64]) -> Result<MeyersReport> {
    if !(mu > 0.0 && mu < 1.0) {
        return invalid("mu must lie in (0, 1)");
    }
    let tensor = CoefficientTensor::meyers(mu);
    let ellipticity = tensor.check_ellipticity(1000, 1.0, 17)?;
    let (weak_residual, tested_hats) = meyers_weak_residual(mu, 1.0 / 32.0, 0.2, 0.5);
    let v = meyers_field(mu);
    let scans = scans(&[&v as &dyn Field<2>], 1, 2.0 / (1.0 - mu), scan_cells0, scan_levels)?;
    let cutoff = Cutoff { inner: 0.6, outer: 0.9 };
    let galerkin = fem_h
        .iter()
        .map(|&h| meyers_galerkin(mu, h, cutoff))
        .collect::<Result<Vec<_>>>()?;
    let galerkin_monotone = galerkin.windows(2).all(|w| w[1].h1_error < w[0].h1_error);
    Ok(MeyersReport {
        mu,
        ellipticity,
        weak_residual,
        tested_hats,
        scans,
        galerkin,
        galerkin_monotone,
    })
}

/// Component `j` of `u = x/|x|^γ - x`.
pub fn degiorgi_component(gamma: f64, j: usize) -> AnalyticField<3> {
    let val = move |x: &Point<3>| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        x[j] * (r2.powf(-0.5 * gamma) - 1.0)
    };
    AnalyticField::new(format!("degiorgi-u{}(gamma={gamma})", j + 1), val)
        .with_jet(move |x, a| match order(a) {
            0 => Some(val(x)),
            1 => {
                let b = a.iter().position(|&v| v == 1).unwrap();
                Some(degiorgi_gradient(gamma, x)[j][b])
            }
            _ => None,
        })
        .with_singular(vec![[0.0; 3]])
}

/// `∂_β (x_j |x|^{-γ})`, indexed `[j][β]`.
pub fn degiorgi_gradient(gamma: f64, x: &Point<3>) -> [[f64; 3]; 3] {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let a = r2.powf(-0.5 * gamma);
    let b = gamma * r2.powf(-0.5 * gamma - 1.0);
    let mut g = [[0.0; 3]; 3];
    for j in 0..3 {
        for beta in 0..3 {
            g[j][beta] = if j == beta { a } else { 0.0 } - b * x[j] * x[beta];
        }
    }
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakIdentity {
    /// `-Σ ∫ a^{αβ}_{ij} ∂_β u_j ∂_α φ_i`.
    pub lhs: f64,
    /// `Σ ∫ a^{αj}_{ij} ∂_α φ_i`.
    pub rhs: f64,
    /// `|lhs - rhs| / ‖φ‖_{W^{1,2}}`.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeGiorgiReport {
    pub gamma: f64,
    pub n: usize,
    pub ellipticity: EllipticityReport,
    pub weak: Vec<WeakIdentity>,
    pub weak_residual: f64,
    pub scans: ThresholdScans,
}

/// Bump `exp(1 - 1/(1 - s²))`, `s = |x - c|/ρ`, and its gradient.
fn bump3(x: &Point<3>, c: &Point<3>, rho: f64) -> (f64, [f64; 3]) {
    let d = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
    let s2 = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / (rho * rho);
    if s2 >= 1.0 {
        return (0.0, [0.0; 3]);
    }
    let q = 1.0 - s2;
    let v = (1.0 - 1.0 / q).exp();
    // d/dx e^{1-1/q} = e^{1-1/q} q'/q², q' = -2 d / ρ²
    let f = -2.0 * v / (q * q * rho * rho);
    (v, [f * d[0], f * d[1], f * d[2]])
}

/// Both sides of the weak identity for `φ = bump · e_i`, on a tensor
/// Gauss grid of `cells^3` cells over the bump's box.
pub fn degiorgi_weak_identity(gamma: f64, center: Point<3>, rho: f64, comp: usize, cells: usize) -> WeakIdentity {
    let tensor = CoefficientTensor::degiorgi(gamma, 3);
    let (gx, gw) = gauss_legendre(4);
    let h = 2.0 * rho / cells as f64;
    let parts: Vec<(f64, f64, f64)> = (0..cells)
        .into_par_iter()
        .map(|ci| {
            let (mut lhs, mut rhs, mut nrm) = (0.0, 0.0, 0.0);
            for cj in 0..cells {
                for ck in 0..cells {
                    for (a, xa) in gx.iter().enumerate() {
                        for (b, xb) in gx.iter().enumerate() {
                            for (c, xc) in gx.iter().enumerate() {
                                let w = gw[a] * gw[b] * gw[c] * (0.5 * h).powi(3);
                                let x = [
                                    center[0] - rho + (ci as f64 + 0.5 * (xa + 1.0)) * h,
                                    center[1] - rho + (cj as f64 + 0.5 * (xb + 1.0)) * h,
                                    center[2] - rho + (ck as f64 + 0.5 * (xc + 1.0)) * h,
                                ];
                                let (phi, dphi) = bump3(&x, &center, rho);
                                if phi == 0.0 {
                                    continue;
                                }
                                nrm += w * (phi * phi + dphi.iter().map(|v| v * v).sum::<f64>());
                                let mut du = degiorgi_gradient(gamma, &x);
                                for (j, row) in du.iter_mut().enumerate() {
                                    row[j] -= 1.0;
                                }
                                let i = comp;
                                for alpha in 0..3 {
                                    let mut s = 0.0;
                                    for beta in 0..3 {
                                        for j in 0..3 {
                                            s += tensor.entry(&x, alpha, beta, i, j) * du[j][beta];
                                        }
                                    }
                                    lhs -= w * s * dphi[alpha];
                                    let mut t = 0.0;
                                    for j in 0..3 {
                                        t += tensor.entry(&x, alpha, j, i, j);
                                    }
                                    rhs += w * t * dphi[alpha];
                                }
                            }
                        }
                    }
                }
            }
            (lhs, rhs, nrm)
        })
        .collect();
    let lhs: f64 = parts.iter().map(|p| p.0).sum();
    let rhs: f64 = parts.iter().map(|p| p.1).sum();
    let nrm: f64 = parts.iter().map(|p| p.2).sum();
    WeakIdentity {
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / nrm.sqrt(),
    }
}

/// The 3-D system with threshold `n/γ`.
pub fn degiorgi_case(gamma: f64, scan_cells0: usize, scan_levels: usize) -> Result<DeGiorgiReport> {
    let n = 3;
    if !(gamma > 0.0 && gamma < n as f64 / 2.0) {
        return invalid("gamma must lie in (0, n/2)");
    }
    let tensor = CoefficientTensor::degiorgi(gamma, n);
    let ellipticity = tensor.check_ellipticity(1000, 1.0, 23)?;
    let tests = [
        ([0.35, 0.2, -0.1], 0.25, 0),
        ([-0.3, 0.3, 0.25], 0.2, 1),
        ([0.1, -0.4, 0.3], 0.22, 2),
    ];
    let weak: Vec<WeakIdentity> = tests
        .iter()
        .map(|&(c, rho, i)| degiorgi_weak_identity(gamma, c, rho, i, 32))
        .collect();
    let weak_residual = weak.iter().map(|w| w.residual).fold(0.0, f64::max);
    let comps: Vec<AnalyticField<3>> = (0..n).map(|j| degiorgi_component(gamma, j)).collect();
    let refs: Vec<&dyn Field<3>> = comps.iter().map(|c| c as &dyn Field<3>).collect();
    let scans = scans(&refs, 1, n as f64 / gamma, scan_cells0, scan_levels)?;
    Ok(DeGiorgiReport {
        gamma,
        n,
        ellipticity,
        weak,
        weak_residual,
        scans,
    })
}

/// `θ(ε) = 2 - n/2 + n ε^{1/2} / (2 (4(n-1)² + ε)^{1/2})`.
pub fn mazya_theta(eps: f64, n: usize) -> f64 {
    let n = n as f64;
    2.0 - n / 2.0 + n * eps.sqrt() / (2.0 * (4.0 * (n - 1.0).powi(2) + eps).sqrt())
}

/// `θ` from the general coefficients `a, b, c`.
pub fn mazya_theta_abc(a: f64, b: f64, c: f64, n: usize) -> f64 {
    let n = n as f64;
    2.0 - n / 2.0 + (n * n / 4.0 - (n - 1.0) * (b * n + c) / (a + 2.0 * b + c)).sqrt()
}

/// `n / (2 - θ(ε))`.
pub fn mazya_threshold(eps: f64, n: usize) -> f64 {
    n as f64 / (2.0 - mazya_theta(eps, n))
}

/// `v = |x|^s` with exact derivatives up to order two.
pub fn radial_power<const N: usize>(s: f64) -> AnalyticField<N> {
    let val = move |x: &Point<N>| x.iter().map(|v| v * v).sum::<f64>().powf(0.5 * s);
    AnalyticField::new(format!("|x|^{s}"), val)
        .with_jet(move |x, a: &MultiIndex<N>| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            match order(a) {
                0 => Some(val(x)),
                1 => {
                    let i = a.iter().position(|&v| v == 1).unwrap();
                    Some(s * r2.powf(0.5 * s - 1.0) * x[i])
                }
                2 => {
                    let idx: Vec<usize> = (0..N).flat_map(|i| std::iter::repeat(i).take(a[i])).collect();
                    let (i, j) = (idx[0], idx[1]);
                    let d = if i == j { 1.0 } else { 0.0 };
                    Some(s * r2.powf(0.5 * s - 1.0) * d + s * (s - 2.0) * r2.powf(0.5 * s - 2.0) * x[i] * x[j])
                }
                _ => None,
            }
        })
        .with_singular(vec![[0.0; N]])
}

#[derive(Clone, Debug, Serialize)]
pub struct MazyaReport {
    pub eps: f64,
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    pub scans: ThresholdScans,
}

/// `W^{m,p}` scans of `v = |x|^{θ+m-2}` around `n/(2-θ(ε))`.
pub fn mazya_scan<const N: usize>(eps: f64, m: usize, cells0: usize, levels: usize) -> Result<MazyaReport> {
    if !(eps > 0.0) {
        return invalid("epsilon must be positive");
    }
    if m < 1 {
        return invalid("order m must be at least 1");
    }
    let theta = mazya_theta(eps, N);
    let v = radial_power::<N>(theta + m as f64 - 2.0);
    let scans = scans(&[&v as &dyn Field<N>], m, mazya_threshold(eps, N), cells0, levels)?;
    Ok(MazyaReport {
        eps,
        n: N,
        m,
        theta,
        scans,
    })
}
