//! Jones' extension `Λ_k`: best fits on reflected interior cubes glued by a
//! partition of unity on the small exterior cubes.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{best_fit_polynomial, grid_sobolev_norm, Field, GridField, GridSpec, MultiIndex, PolynomialK};
use crate::geometry::reflect::{reflect_one, small_cube_cutoff};
use crate::geometry::{
    reflect_cubes, small_cubes, whitney_decompose, Complement, DomainRef, DyadicCube, PartitionOfUnity, Reflection,
    RootLattice, WhitneyCover,
};
use crate::Point;

/// The geometric data of `Λ_k` for one domain.
#[derive(Debug)]
pub struct ExtensionPlan<const N: usize> {
    pub domain: DomainRef<N>,
    pub inside: WhitneyCover<N>,
    pub outside: WhitneyCover<N>,
    /// Small exterior cubes (indices into `outside`).
    pub small: Vec<usize>,
    pub reflection: Reflection,
    /// Partition over the small cubes, members in `small` order.
    pub partition: PartitionOfUnity<N>,
    pub k: usize,
    pub eps: f64,
    pub delta: f64,
    pub search_factor: f64,
}

impl<const N: usize> ExtensionPlan<N> {
    pub fn new(
        domain: DomainRef<N>,
        lattice: RootLattice<N>,
        j_max: u32,
        k: usize,
        eps: f64,
        delta: f64,
        search_factor: f64,
    ) -> Result<Self> {
        assert!(k >= 1);
        let inside = whitney_decompose(domain.as_ref(), lattice, j_max)?;
        let comp = Complement { inner: domain.clone() };
        let outside = whitney_decompose(&comp, lattice, j_max)?;
        let small = small_cubes(&outside, eps, delta);
        let reflection = reflect_cubes(&outside, &small, &inside, search_factor)?;
        let partition = PartitionOfUnity::new(lattice, small.iter().map(|&i| outside.cubes[i]).collect());
        Ok(Self {
            domain,
            inside,
            outside,
            small,
            reflection,
            partition,
            k,
            eps,
            delta,
            search_factor,
        })
    }

    /// `εδ / (16n)`.
    pub fn cutoff(&self) -> f64 {
        small_cube_cutoff(N, self.eps, self.delta)
    }

    /// Exterior points closer than this to `∂Ω` must be covered.
    pub fn collar(&self) -> f64 {
        (N as f64).sqrt() * self.cutoff()
    }
}

/// `Λ_k u` as an evaluable field.
pub struct JonesExtension<'a, const N: usize> {
    pub plan: &'a ExtensionPlan<N>,
    u: Arc<dyn Field<N> + 'a>,
    /// Best fit on the reflected cube of each small cube, `small` order.
    polys: Vec<PolynomialK<N>>,
}

/// A small cube contributing at a point: its reflected cube and weight.
#[derive(Clone, Copy, Debug)]
pub struct Contribution<const N: usize> {
    pub star: DyadicCube<N>,
    pub weight: f64,
}

impl<'a, const N: usize> JonesExtension<'a, N> {
    pub fn new(plan: &'a ExtensionPlan<N>, u: &'a dyn Field<N>) -> Result<Self> {
        Self::new_shared(plan, Arc::new(u))
    }

    pub fn new_shared(plan: &'a ExtensionPlan<N>, u: Arc<dyn Field<N> + 'a>) -> Result<Self> {
        let lat = &plan.inside.lattice;
        let mut stars: Vec<usize> = plan.reflection.star.clone();
        stars.sort_unstable();
        stars.dedup();
        let fits: Vec<Result<PolynomialK<N>>> = stars
            .par_iter()
            .map(|&j| {
                let q = &plan.inside.cubes[j];
                best_fit_polynomial(u.as_ref(), q.center(lat), q.side(lat), plan.k)
            })
            .collect();
        let mut by_star = HashMap::with_capacity(stars.len());
        for (j, f) in stars.into_iter().zip(fits) {
            by_star.insert(j, f?);
        }
        let polys = plan.reflection.star.iter().map(|j| by_star[j].clone()).collect();
        Ok(Self { plan, u, polys })
    }

    /// The level-`j_max` lattice cube holding `x`, used where truncation
    /// left the exterior uncovered.
    fn virtual_cube(&self, x: &Point<N>) -> DyadicCube<N> {
        let lat = &self.plan.outside.lattice;
        DyadicCube::new(self.plan.outside.j_max, lat.locate(x, self.plan.outside.j_max))
    }

    /// Cubes contributing at an exterior point; empty beyond the small-cube
    /// union.
    pub fn contributions(&self, x: &Point<N>) -> Result<Vec<Contribution<N>>> {
        let plan = self.plan;
        let phis = plan.partition.eval(x);
        if !phis.is_empty() {
            return Ok(phis
                .into_iter()
                .map(|(m, w)| Contribution {
                    star: plan.inside.cubes[plan.reflection.star[m]],
                    weight: w,
                })
                .collect());
        }
        let d = plan.domain.boundary_distance(x);
        if plan.outside.locate(x).is_none() && plan.outside.lattice.bounds().contains(x) {
            let q = self.virtual_cube(x);
            if q.side(&plan.outside.lattice) <= plan.cutoff() {
                if let Some(j) = reflect_one(&q, &plan.inside, plan.search_factor) {
                    return Ok(vec![Contribution {
                        star: plan.inside.cubes[j],
                        weight: 1.0,
                    }]);
                }
            }
        }
        if d < plan.collar() {
            return Err(Error::PlanGap { point: x.to_vec() });
        }
        Ok(Vec::new())
    }

    /// `Σ φ_Q(x) P_{Q*}(u)(x)` at an exterior point.
    pub fn exterior(&self, x: &Point<N>) -> Result<f64> {
        let plan = self.plan;
        let phis = plan.partition.eval(x);
        if !phis.is_empty() {
            let mut s = 0.0;
            for (m, w) in phis {
                s += w * self.polys[m].eval(x);
            }
            return Ok(s);
        }
        let lat = &plan.inside.lattice;
        let mut s = 0.0;
        for c in self.contributions(x)? {
            let p = best_fit_polynomial(self.u.as_ref(), c.star.center(lat), c.star.side(lat), plan.k)?;
            s += c.weight * p.eval(x);
        }
        Ok(s)
    }

    pub fn eval(&self, x: &Point<N>) -> Result<f64> {
        if self.plan.domain.contains(x) {
            Ok(self.u.value(x))
        } else {
            self.exterior(x)
        }
    }

    /// Samples `Λ_k u` at the cell centers.
    pub fn sample(&self, grid: &GridSpec<N>) -> Result<GridField<N>> {
        let vals: Vec<Result<f64>> = (0..grid.len())
            .into_par_iter()
            .map(|f| self.eval(&grid.center_flat(f)))
            .collect();
        let values = vals.into_iter().collect::<Result<Vec<f64>>>()?;
        GridField::from_values(*grid, 1, values)
    }
}

/// Evaluation errors show up as NaN; use `eval` to see them.
impl<const N: usize> Field<N> for JonesExtension<'_, N> {
    fn value(&self, x: &Point<N>) -> f64 {
        self.eval(x).unwrap_or(f64::NAN)
    }

    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        if self.plan.domain.contains(x) {
            self.u.exact_derivative(x, alpha)
        } else {
            (alpha.iter().sum::<usize>() == 0).then(|| self.value(x))
        }
    }
}

/// `Λ_k u` on a grid.
pub fn jones_extend<const N: usize>(
    u: &dyn Field<N>,
    plan: &ExtensionPlan<N>,
    grid: &GridSpec<N>,
) -> Result<GridField<N>> {
    JonesExtension::new(plan, u)?.sample(grid)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormRatio {
    pub h: f64,
    pub k: usize,
    pub p: f64,
    /// Width of the exterior collar included in the numerator.
    pub collar: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

/// `‖Λ_k u‖ / ‖u‖_Ω` in discrete `W^{k,p}`: the numerator runs over `Ω`
/// and the exterior cells closer than `collar` to `∂Ω`, the denominator
/// over `Ω` alone, both with forward differences on the same samples.
pub fn norm_ratio<const N: usize>(
    ext: &JonesExtension<'_, N>,
    grid: &GridSpec<N>,
    p: f64,
    collar: f64,
) -> Result<NormRatio> {
    let dom = &ext.plan.domain;
    let g = ext.sample(grid)?;
    let inside: Vec<bool> = (0..grid.len())
        .into_par_iter()
        .map(|f| dom.contains(&grid.center_flat(f)))
        .collect();
    let near: Vec<bool> = (0..grid.len())
        .into_par_iter()
        .map(|f| inside[f] || dom.boundary_distance(&grid.center_flat(f)) < collar)
        .collect();
    let k = ext.plan.k;
    let numerator = grid_sobolev_norm(&g, &near, k, p);
    let denominator = grid_sobolev_norm(&g, &inside, k, p);
    Ok(NormRatio {
        h: grid.h,
        k,
        p,
        collar,
        numerator,
        denominator,
        ratio: numerator / denominator,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    /// Every exterior sample whose reflected cubes miss `supp u` is exactly 0.
    pub contact_set_ok: bool,
    /// Largest `dist(x, supp u)` over nonzero exterior samples.
    pub enlargement_radius: f64,
    pub exterior_samples: usize,
    /// Samples required to vanish exactly.
    pub forced_zero: usize,
}

/// Checks the support property on a grid. `support` is an open set whose
/// closure holds `supp u`.
pub fn support_diagnostics<const N: usize>(
    ext: &JonesExtension<'_, N>,
    grid: &GridSpec<N>,
    support: &dyn crate::geometry::Domain<N>,
) -> Result<SupportReport> {
    let plan = ext.plan;
    let lat = plan.inside.lattice;
    let misses = |q: &DyadicCube<N>| {
        let c = q.center(&lat);
        !support.contains(&c) && support.boundary_distance(&c) > 0.5 * q.diameter(&lat)
    };
    struct One {
        forced: bool,
        leak: bool,
        radius: f64,
    }
    let per: Vec<Result<Option<One>>> = (0..grid.len())
        .into_par_iter()
        .map(|f| {
            let x = grid.center_flat(f);
            if plan.domain.contains(&x) {
                return Ok(None);
            }
            let v = ext.exterior(&x)?;
            let forced = ext.contributions(&x)?.iter().all(|c| misses(&c.star));
            let radius = if v != 0.0 {
                if support.contains(&x) {
                    0.0
                } else {
                    support.boundary_distance(&x)
                }
            } else {
                0.0
            };
            Ok(Some(One {
                forced,
                leak: forced && v != 0.0,
                radius,
            }))
        })
        .collect();
    let mut rep = SupportReport {
        contact_set_ok: true,
        enlargement_radius: 0.0,
        exterior_samples: 0,
        forced_zero: 0,
    };
    let mut leaks = Vec::new();
    for (f, o) in per.into_iter().enumerate() {
        let Some(o) = o? else { continue };
        rep.exterior_samples += 1;
        rep.forced_zero += o.forced as usize;
        if o.leak {
            leaks.push(grid.center_flat(f));
        }
        rep.enlargement_radius = rep.enlargement_radius.max(o.radius);
    }
    if let Some(first) = leaks.first() {
        return Err(Error::SupportLeak {
            count: leaks.len(),
            first: first.to_vec(),
        });
    }
    Ok(rep)
}

/// Largest `|Λ_k u - q|` over the given exterior points, for checking
/// polynomial reproduction.
pub fn reproduction_error<const N: usize>(
    ext: &JonesExtension<'_, N>,
    q: &dyn Field<N>,
    points: &[Point<N>],
) -> Result<f64> {
    let errs: Vec<Result<f64>> = points
        .par_iter()
        .map(|x| Ok((ext.eval(x)? - q.value(x)).abs()))
        .collect();
    let mut m = 0.0f64;
    for e in errs {
        m = m.max(e?);
    }
    Ok(m)
}

/// Sample points in every small cube: its center and points a quarter side
/// in from each corner.
pub fn small_cube_samples<const N: usize>(plan: &ExtensionPlan<N>) -> Vec<Point<N>> {
    let lat = &plan.outside.lattice;
    let mut out = Vec::new();
    for &i in &plan.small {
        let q = &plan.outside.cubes[i];
        let c = q.center(lat);
        let s = q.side(lat);
        out.push(c);
        for corner in 0..(1usize << N) {
            let mut x = c;
            for (a, xa) in x.iter_mut().enumerate() {
                *xa += if (corner >> a) & 1 == 1 { 0.25 * s } else { -0.25 * s };
            }
            out.push(x);
        }
    }
    out
}
