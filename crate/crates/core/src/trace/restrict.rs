//! Jets `f_α(x) = lim ⨍_{B(x,r)} ∂^α v` estimated from ball averages at two
//! dyadic radii.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::funcspace::field::derivative;
use crate::funcspace::multiindex::up_to;
use crate::funcspace::{BesovJet, Field};
use crate::geometry::{AhlforsCloud, Domain};
use crate::Point;

/// A recovered jet with its extrapolation residuals.
#[derive(Clone, Debug)]
pub struct TraceReport<const N: usize> {
    pub jet: BesovJet<N>,
    /// `|A(r/2) - A(r)|`, laid out like `jet.values`.
    pub residuals: Vec<f64>,
    /// The two radii used, `[r, r/2]`.
    pub radii: [f64; 2],
    pub h: f64,
    /// Fewest quadrature cells in any ball.
    pub min_cells: usize,
}

/// Summary numbers for reports.
#[derive(Clone, Debug, Serialize)]
pub struct TraceSummary {
    pub points: usize,
    pub components: usize,
    pub radii: [f64; 2],
    pub h: f64,
    pub min_cells: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
}

impl<const N: usize> TraceReport<N> {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn summary(&self) -> TraceSummary {
        let n = self.residuals.len().max(1) as f64;
        TraceSummary {
            points: self.jet.cloud.len(),
            components: self.jet.components(),
            radii: self.radii,
            h: self.h,
            min_cells: self.min_cells,
            max_residual: self.max_residual(),
            mean_residual: self.residuals.iter().sum::<f64>() / n,
        }
    }
}

/// Average of `∂^α v` over the cells of side `h` centered at
/// `x + h(i + 1/2)` that lie in `B(x, r)` (and in `domain`, if given).
/// Returns the average and the number of cells.
pub fn ball_average<const N: usize>(
    v: &dyn Field<N>,
    x: &Point<N>,
    r: f64,
    h: f64,
    alpha: &[usize; N],
    domain: Option<&dyn Domain<N>>,
) -> Result<(f64, usize)> {
    let m = (r / h).ceil() as i64;
    let side = (2 * m) as usize;
    let total = side.pow(N as u32);
    let mut sum = 0.0;
    let mut cells = 0;
    for flat in 0..total {
        let mut rest = flat;
        let mut y = *x;
        let mut d2 = 0.0;
        for t in 0..N {
            let i = (rest % side) as i64 - m;
            rest /= side;
            let o = (i as f64 + 0.5) * h;
            y[t] += o;
            d2 += o * o;
        }
        if d2 >= r * r || domain.is_some_and(|d| !d.contains(&y)) {
            continue;
        }
        sum += derivative(v, &y, alpha, h).0;
        cells += 1;
    }
    if cells < 1 << N {
        return Err(Error::UnderresolvedBall {
            point: x.to_vec(),
            radius: r,
            cells,
        });
    }
    Ok((sum / cells as f64, cells))
}

fn finest_pair(radii: &[f64], h: f64) -> Result<[f64; 2]> {
    if radii.len() < 2 {
        return invalid("need at least two radii");
    }
    for w in radii.windows(2) {
        if ((w[0] / w[1]) - 2.0).abs() > 1e-12 {
            return invalid("radii must halve at each step");
        }
    }
    if radii.iter().any(|&r| r < 4.0 * h) {
        return invalid("every radius must be at least 4h");
    }
    let n = radii.len();
    Ok([radii[n - 2], radii[n - 1]])
}

/// Extrapolation `f = a A(r/2) + b A(r)` applied to both radii.
fn jet_from_averages<const N: usize>(
    v: &dyn Field<N>,
    cloud: Arc<AhlforsCloud<N>>,
    k: usize,
    radii: &[f64],
    h: f64,
    domain: Option<&dyn Domain<N>>,
    weights: (f64, f64),
) -> Result<TraceReport<N>> {
    if k == 0 {
        return invalid("jet order must be at least 1");
    }
    let pair = finest_pair(radii, h)?;
    let alphas = up_to::<N>(k - 1);
    let per_point: Vec<Result<(Vec<f64>, Vec<f64>, usize)>> = cloud
        .points
        .par_iter()
        .map(|x| {
            let mut vals = Vec::with_capacity(alphas.len());
            let mut res = Vec::with_capacity(alphas.len());
            let mut min_cells = usize::MAX;
            for a in &alphas {
                let (big, c1) = ball_average(v, x, pair[0], h, a, domain)?;
                let (small, c2) = ball_average(v, x, pair[1], h, a, domain)?;
                min_cells = min_cells.min(c1).min(c2);
                vals.push(weights.0 * small + weights.1 * big);
                res.push((small - big).abs());
            }
            Ok((vals, res, min_cells))
        })
        .collect();
    let mut values = Vec::with_capacity(cloud.len() * alphas.len());
    let mut residuals = Vec::with_capacity(values.capacity());
    let mut min_cells = usize::MAX;
    for r in per_point {
        let (v, s, c) = r?;
        values.extend(v);
        residuals.extend(s);
        min_cells = min_cells.min(c);
    }
    Ok(TraceReport {
        jet: BesovJet::new(cloud, k, values)?,
        residuals,
        radii: pair,
        h,
        min_cells,
    })
}

/// Full-ball averages with the even-error extrapolation
/// `(4A(r/2) - A(r)) / 3`.
pub fn restrict_jet<const N: usize>(
    v: &dyn Field<N>,
    cloud: Arc<AhlforsCloud<N>>,
    k: usize,
    radii: &[f64],
    h: f64,
) -> Result<TraceReport<N>> {
    jet_from_averages(v, cloud, k, radii, h, None, (4.0 / 3.0, -1.0 / 3.0))
}

/// One-sided averages over `Ω ∩ B(x, r)`. These carry a first-order error
/// term, so the extrapolation is `2A(r/2) - A(r)`.
pub fn interior_restrict_jet<const N: usize>(
    u: &dyn Field<N>,
    domain: &dyn Domain<N>,
    cloud: Arc<AhlforsCloud<N>>,
    k: usize,
    radii: &[f64],
    h: f64,
) -> Result<TraceReport<N>> {
    jet_from_averages(u, cloud, k, radii, h, Some(domain), (2.0, -1.0))
}
