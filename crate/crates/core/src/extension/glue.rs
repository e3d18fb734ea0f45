//! Gluing a field on `Ω` to a field on the exterior, with refinement norms
//! that expose trace mismatches.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::funcspace::grid::alpha_power_sum;
use crate::funcspace::multiindex::of_degree;
use crate::funcspace::{grid_sobolev_norm, Field, GridField, GridSpec, MultiIndex};
use crate::geometry::Domain;
use crate::Point;

/// `u_in` on `Ω`, `u_out` elsewhere.
pub struct Glued<'a, const N: usize> {
    pub domain: &'a dyn Domain<N>,
    pub inner: &'a dyn Field<N>,
    pub outer: &'a dyn Field<N>,
}

impl<const N: usize> Field<N> for Glued<'_, N> {
    fn value(&self, x: &Point<N>) -> f64 {
        if self.domain.contains(x) {
            self.inner.value(x)
        } else {
            self.outer.value(x)
        }
    }

    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        if self.domain.contains(x) {
            self.inner.exact_derivative(x, alpha)
        } else {
            self.outer.exact_derivative(x, alpha)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueVerdict {
    Matched,
    Mismatched,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueRow {
    pub h: f64,
    /// Discrete `W^{k,p}` norm over the whole grid.
    pub norm: f64,
    /// `Σ_{|α| = k} ‖D^α w‖_p`.
    pub top_seminorm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GlueReport {
    pub k: usize,
    pub p: f64,
    pub rows: Vec<GlueRow>,
    /// `top_seminorm` ratios between consecutive grids.
    pub growth: Vec<f64>,
    pub verdict: GlueVerdict,
}

/// Growth per halving above which the glue counts as mismatched.
pub const MISMATCH_GROWTH: f64 = 1.2;

/// Samples the glued field on each grid (finest last) and tabulates its
/// norms. The finest sample is returned with the table.
pub fn glue<const N: usize>(
    inner: &dyn Field<N>,
    outer: &dyn Field<N>,
    domain: &dyn Domain<N>,
    grids: &[GridSpec<N>],
    k: usize,
    p: f64,
) -> Result<(GridField<N>, GlueReport)> {
    if grids.len() < 2 {
        return invalid("gluing needs at least two grids");
    }
    let w = Glued { domain, inner, outer };
    let mut rows = Vec::new();
    let mut last = None;
    for g in grids {
        let s = GridField::sample(*g, &w);
        let mask = vec![true; g.len()];
        let top = of_degree::<N>(k)
            .iter()
            .map(|a| alpha_power_sum(&s, &mask, a, p).powf(1.0 / p))
            .sum();
        rows.push(GlueRow {
            h: g.h,
            norm: grid_sobolev_norm(&s, &mask, k, p),
            top_seminorm: top,
        });
        last = Some(s);
    }
    let growth: Vec<f64> = rows.windows(2).map(|r| r[1].top_seminorm / r[0].top_seminorm).collect();
    let verdict = if growth.iter().all(|&g| g >= MISMATCH_GROWTH) {
        GlueVerdict::Mismatched
    } else {
        GlueVerdict::Matched
    };
    Ok((
        last.unwrap(),
        GlueReport {
            k,
            p,
            rows,
            growth,
            verdict,
        },
    ))
}
