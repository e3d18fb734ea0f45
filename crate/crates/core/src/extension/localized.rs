//! Extension for fields vanishing on a closed part `D` of the boundary,
//! assembled from per-patch Jones extensions near `N = ∂Ω \ D`.

use std::sync::Arc;

use rayon::prelude::*;

use super::jones::{ExtensionPlan, JonesExtension};
use super::mollify::mollify;
use crate::error::{invalid, Error, Result};
use crate::funcspace::{Field, GridField, GridSpec};
use crate::geometry::partition::smooth_step;
use crate::geometry::{Aabb, Domain, DomainRef, Rect};
use crate::Point;

/// Distance to `N = ∂Ω \ D`; `f64::INFINITY` when `D = ∂Ω`.
pub type DistanceFn<const N: usize> = Arc<dyn Fn(&Point<N>) -> f64 + Send + Sync>;

/// An open box `O_j` and the Jones plan of `Ω_j`.
#[derive(Clone, Debug)]
pub struct Patch<const N: usize> {
    pub region: Rect<N>,
    pub plan: Arc<ExtensionPlan<N>>,
}

/// Patches, the radius `r` and the cutoffs `ψ_j`, `η`.
pub struct LocalizedPlan<const N: usize> {
    pub domain: DomainRef<N>,
    pub patches: Vec<Patch<N>>,
    pub r: f64,
    pub n_distance: DistanceFn<N>,
    /// `θ_{r/4} * 1_{[O_j]_{r/4}}` on the cutoff grid.
    pub psi: Vec<GridField<N>>,
    /// Largest number of patches with `ψ_j > 0` at one cutoff-grid center.
    pub max_overlap: usize,
}

/// `B(x, r) ⊆ O`.
fn ball_inside<const N: usize>(region: &Rect<N>, x: &Point<N>, r: f64) -> bool {
    (0..N).all(|i| x[i] - r >= region.lo[i] && x[i] + r <= region.hi[i])
}

impl<const N: usize> LocalizedPlan<N> {
    /// `n_samples` are points of `N` used for the covering check; the
    /// cutoffs live on `window` with spacing `h <= r/8`.
    pub fn new(
        domain: DomainRef<N>,
        patches: Vec<Patch<N>>,
        r: f64,
        n_distance: DistanceFn<N>,
        n_samples: &[Point<N>],
        window: Aabb<N>,
        h: f64,
    ) -> Result<Self> {
        if !(r > 0.0) {
            return invalid("patch radius must be positive");
        }
        if h > r / 8.0 {
            return invalid("cutoff grid needs h <= r/8");
        }
        for x in n_samples {
            if !patches.iter().any(|p| ball_inside(&p.region, x, r)) {
                return Err(Error::PatchGap { point: x.to_vec() });
            }
        }
        let grid = GridSpec::from_box(window.lo, window.hi, h)?;
        let t = r / 4.0;
        let mut psi = Vec::with_capacity(patches.len());
        for p in &patches {
            let inner = Rect::new(p.region.lo.map(|v| v + t), p.region.hi.map(|v| v - t));
            let ind = GridField::sample(grid, &Indicator(&inner));
            psi.push(mollify(&ind, t)?);
        }
        let max_overlap = (0..grid.len())
            .map(|f| psi.iter().filter(|g| g.get(f) > 0.0).count())
            .max()
            .unwrap_or(0);
        Ok(Self {
            domain,
            patches,
            r,
            n_distance,
            psi,
            max_overlap,
        })
    }

    /// `D = ∂Ω`: no patches and `η ≡ 0`.
    pub fn whole_boundary(domain: DomainRef<N>, r: f64) -> Self {
        Self {
            domain,
            patches: Vec::new(),
            r,
            n_distance: Arc::new(|_| f64::INFINITY),
            psi: Vec::new(),
            max_overlap: 0,
        }
    }

    /// `ψ_j(x)`, zero outside `O_j`.
    pub fn psi(&self, j: usize, x: &Point<N>) -> f64 {
        if !self.patches[j].region.contains(x) {
            return 0.0;
        }
        self.psi[j].interpolate(x)
    }

    /// Equal to 1 within `r/8` of `N` and 0 beyond `r/2`.
    pub fn eta(&self, x: &Point<N>) -> f64 {
        let d = (self.n_distance)(x);
        smooth_step((self.r / 2.0 - d) / (3.0 * self.r / 8.0))
    }

    /// `φ_j = η ψ_j / Σ ψ_i²` for every patch.
    pub fn phi(&self, x: &Point<N>) -> Result<Vec<f64>> {
        let eta = self.eta(x);
        if eta == 0.0 {
            return Ok(vec![0.0; self.patches.len()]);
        }
        let psi: Vec<f64> = (0..self.patches.len()).map(|j| self.psi(j, x)).collect();
        let s: f64 = psi.iter().map(|v| v * v).sum();
        if s == 0.0 {
            return Err(Error::PatchGap { point: x.to_vec() });
        }
        Ok(psi.into_iter().map(|v| eta * v / s).collect())
    }
}

#[derive(Debug)]
struct Indicator<'a, const N: usize>(&'a Rect<N>);

impl<const N: usize> Field<N> for Indicator<'_, N> {
    fn value(&self, x: &Point<N>) -> f64 {
        if self.0.contains(x) {
            1.0
        } else {
            0.0
        }
    }
}

/// `E_j(ψ_j u)`: `ψ_j u` inside `O_j`, zero elsewhere in `Ω_j`.
struct Masked<'a, const N: usize> {
    plan: &'a LocalizedPlan<N>,
    j: usize,
    u: &'a dyn Field<N>,
}

impl<const N: usize> Field<N> for Masked<'_, N> {
    fn value(&self, x: &Point<N>) -> f64 {
        let p = self.plan.psi(self.j, x);
        if p == 0.0 {
            0.0
        } else {
            p * self.u.value(x)
        }
    }
}

/// `(1 - η) ũ + Σ_j φ_j Λ_{k,j}(E_j(ψ_j u))` with `ũ` the zero extension.
pub struct LocalizedExtension<'a, const N: usize> {
    pub plan: &'a LocalizedPlan<N>,
    u: &'a dyn Field<N>,
    exts: Vec<JonesExtension<'a, N>>,
}

impl<'a, const N: usize> LocalizedExtension<'a, N> {
    pub fn new(plan: &'a LocalizedPlan<N>, u: &'a dyn Field<N>) -> Result<Self> {
        let exts = (0..plan.patches.len())
            .map(|j| {
                let w: Arc<dyn Field<N> + 'a> = Arc::new(Masked { plan, j, u });
                JonesExtension::new_shared(plan.patches[j].plan.as_ref(), w)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { plan, u, exts })
    }

    pub fn eval(&self, x: &Point<N>) -> Result<f64> {
        let plan = self.plan;
        let inside = plan.domain.contains(x);
        let phi = plan.phi(x)?;
        let mut s = 0.0;
        for (j, &f) in phi.iter().enumerate() {
            if f != 0.0 {
                s += f * self.exts[j].eval(x)?;
            }
        }
        if inside {
            let eta = plan.eta(x);
            if eta < 1.0 {
                s += (1.0 - eta) * self.u.value(x);
            }
        }
        Ok(s)
    }

    pub fn sample(&self, grid: &GridSpec<N>) -> Result<GridField<N>> {
        let vals: Vec<Result<f64>> = (0..grid.len())
            .into_par_iter()
            .map(|f| self.eval(&grid.center_flat(f)))
            .collect();
        GridField::from_values(*grid, 1, vals.into_iter().collect::<Result<Vec<_>>>()?)
    }
}

/// Evaluation errors show up as NaN; use `eval` to see them.
impl<const N: usize> Field<N> for LocalizedExtension<'_, N> {
    fn value(&self, x: &Point<N>) -> f64 {
        self.eval(x).unwrap_or(f64::NAN)
    }
}

/// The localized extension on a grid.
pub fn localized_extend<const N: usize>(
    u: &dyn Field<N>,
    plan: &LocalizedPlan<N>,
    grid: &GridSpec<N>,
) -> Result<GridField<N>> {
    LocalizedExtension::new(plan, u)?.sample(grid)
}
