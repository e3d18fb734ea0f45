//! Whitney-type extension of a jet from an Ahlfors cloud: each cube carries
//! the cloud average of the Taylor polynomials `P_ḟ(·, y)` over
//! `D ∩ B(x_Q, 6 diam Q)`.

use std::collections::HashMap;
use std::sync::RwLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::multiindex::{factorial, le, power, sub, up_to};
use crate::funcspace::{BesovJet, Field, GridField, GridSpec, PolynomialK};
use crate::geometry::{DyadicCube, PartitionOfUnity, WhitneyCover};
use crate::Point;

/// Ball radius factor: `B(x_Q, BALL_FACTOR * diam Q)`.
pub const BALL_FACTOR: f64 = 6.0;

/// `⨍_{D ∩ B} P_ḟ(·, y) dσ(y)` expanded about `center`:
/// `c_γ = avg_y Σ_{α >= γ} (center - y)^{α-γ} / (α-γ)! f_α(y)`.
fn averaged_polynomial<const N: usize>(jet: &BesovJet<N>, center: Point<N>, radius: f64) -> Option<PolynomialK<N>> {
    let cloud = &jet.cloud;
    let idx = cloud.ball(&center, radius);
    if idx.is_empty() {
        return None;
    }
    let alphas = up_to::<N>(jet.k - 1);
    let mut coeffs = vec![0.0; alphas.len()];
    let mut mass = 0.0;
    for &i in &idx {
        let w = cloud.weights[i];
        mass += w;
        let y = cloud.points[i];
        let mut d = center;
        for t in 0..N {
            d[t] -= y[t];
        }
        let f = jet.at(i);
        for (gi, g) in alphas.iter().enumerate() {
            let mut s = 0.0;
            for (ai, a) in alphas.iter().enumerate() {
                if le(g, a) {
                    let e = sub(a, g);
                    let fact: f64 = e.iter().map(|&v| factorial(v)).product();
                    s += power(&d, &e) / fact * f[ai];
                }
            }
            coeffs[gi] += w * s;
        }
    }
    for c in coeffs.iter_mut() {
        *c /= mass;
    }
    Some(PolynomialK {
        center,
        degree: jet.k - 1,
        coeffs,
    })
}

/// The extension of a jet over a Whitney cover of `R^n \ D`; only cubes
/// with `ℓ(Q) <= 1` take part.
pub struct JwExtension<'a, const N: usize> {
    pub jet: &'a BesovJet<N>,
    pub cover: &'a WhitneyCover<N>,
    /// Cover indices of the participating cubes.
    pub members: Vec<usize>,
    partition: PartitionOfUnity<N>,
    polys: Vec<PolynomialK<N>>,
    /// Polynomials of the finest-level cubes met in the truncation collar.
    collar: RwLock<HashMap<[i64; N], PolynomialK<N>>>,
}

impl<'a, const N: usize> JwExtension<'a, N> {
    pub fn new(jet: &'a BesovJet<N>, cover: &'a WhitneyCover<N>) -> Result<Self> {
        let lat = &cover.lattice;
        let members: Vec<usize> = (0..cover.len()).filter(|&i| cover.side(i) <= 1.0).collect();
        let polys: Vec<Result<PolynomialK<N>>> = members
            .par_iter()
            .map(|&i| {
                let q = &cover.cubes[i];
                averaged_polynomial(jet, q.center(lat), BALL_FACTOR * q.diameter(lat)).ok_or(Error::EmptyBall {
                    level: q.level,
                    index: q.index.to_vec(),
                })
            })
            .collect();
        let polys = polys.into_iter().collect::<Result<Vec<_>>>()?;
        let partition = PartitionOfUnity::new(*lat, members.iter().map(|&i| cover.cubes[i]).collect());
        Ok(Self {
            jet,
            cover,
            members,
            partition,
            polys,
            collar: RwLock::new(HashMap::new()),
        })
    }

    pub fn eval(&self, x: &Point<N>) -> Result<f64> {
        let phis = self.partition.eval(x);
        if !phis.is_empty() {
            let mut s = 0.0;
            for (m, w) in phis {
                s += w * self.polys[m].eval(x);
            }
            return Ok(s);
        }
        let lat = &self.cover.lattice;
        if self.cover.locate(x).is_none() && lat.bounds().contains(x) {
            // inside the truncation collar around D: one finest-level cube
            let q = DyadicCube::new(self.cover.j_max, lat.locate(x, self.cover.j_max));
            if let Some(p) = self.collar.read().unwrap().get(&q.index) {
                return Ok(p.eval(x));
            }
            let p = averaged_polynomial(self.jet, q.center(lat), BALL_FACTOR * q.diameter(lat)).ok_or(
                Error::EmptyBall {
                    level: q.level,
                    index: q.index.to_vec(),
                },
            )?;
            let v = p.eval(x);
            self.collar.write().unwrap().insert(q.index, p);
            return Ok(v);
        }
        Ok(0.0)
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
impl<const N: usize> Field<N> for JwExtension<'_, N> {
    fn value(&self, x: &Point<N>) -> f64 {
        self.eval(x).unwrap_or(f64::NAN)
    }
}

/// The extension sampled on a grid.
pub fn jw_extend<const N: usize>(
    jet: &BesovJet<N>,
    cover: &WhitneyCover<N>,
    grid: &GridSpec<N>,
) -> Result<GridField<N>> {
    JwExtension::new(jet, cover)?.sample(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::AnalyticField;
    use crate::geometry::polygon::point_segment_distance;
    use crate::geometry::{whitney_decompose, Aabb, AhlforsCloud, Domain, RootLattice};
    use std::sync::Arc;

    /// `R^2` minus the segment `[0,1] x {0}`.
    #[derive(Debug)]
    struct OffSegment;

    impl Domain<2> for OffSegment {
        fn contains(&self, x: &Point<2>) -> bool {
            self.boundary_distance(x) > 0.0
        }
        fn boundary_distance(&self, x: &Point<2>) -> f64 {
            point_segment_distance(x, &[0.0, 0.0], &[1.0, 0.0])
        }
        fn bounding_box(&self) -> Aabb<2> {
            Aabb::new([0.0, 0.0], [1.0, 0.0])
        }
        fn kind(&self) -> String {
            "off-segment".into()
        }
    }

    fn segment_setup(j_max: u32) -> (Arc<AhlforsCloud<2>>, WhitneyCover<2>) {
        let cloud = Arc::new(AhlforsCloud::segment([0.0, 0.0], [1.0, 0.0], 512).unwrap());
        let cover = whitney_decompose(&OffSegment, RootLattice::cube([-0.5, -1.0], 2.0), j_max).unwrap();
        (cloud, cover)
    }

    #[test]
    fn constant_jets_extend_to_constants() {
        let (cloud, cover) = segment_setup(7);
        let jet = BesovJet::new(cloud.clone(), 1, vec![1.75; cloud.len()]).unwrap();
        let e = JwExtension::new(&jet, &cover).unwrap();
        for x in [[0.5, 0.2], [0.3, -0.05], [0.9, 0.01]] {
            assert!((e.eval(&x).unwrap() - 1.75).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_jets_are_reproduced() {
        let (cloud, cover) = segment_setup(7);
        let u = AnalyticField::new("lin", |x: &Point<2>| 2.0 * x[0] + 3.0 * x[1] - 1.0).with_jet(|_, a| {
            Some(match (a[0], a[1]) {
                (1, 0) => 2.0,
                (0, 1) => 3.0,
                _ => 0.0,
            })
        });
        let jet = BesovJet::from_field(cloud, &u, 2, 1e-4);
        let e = JwExtension::new(&jet, &cover).unwrap();
        for x in [[0.5, 0.2], [0.3, -0.05], [0.9, 0.01], [0.1, 0.4]] {
            assert!((e.eval(&x).unwrap() - u.value(&x)).abs() < 1e-12, "{x:?}");
        }
    }
}
