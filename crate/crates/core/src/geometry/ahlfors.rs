//! Weighted point clouds standing in for `H^d` on Ahlfors-regular sets.

use rayon::prelude::*;
use serde::Serialize;

use super::spatial::PointGrid;
use crate::error::{invalid, Error, Result};
use crate::Point;

#[derive(Clone, Debug)]
pub struct AhlforsCloud<const N: usize> {
    pub points: Vec<Point<N>>,
    pub weights: Vec<f64>,
    pub dim: f64,
    grid: PointGrid<N>,
    mesh: f64,
}

impl<const N: usize> AhlforsCloud<N> {
    pub fn new(points: Vec<Point<N>>, weights: Vec<f64>, dim: f64) -> Result<Self> {
        if points.is_empty() {
            return invalid("empty cloud");
        }
        if points.len() != weights.len() {
            return invalid("one weight per point required");
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return invalid("cloud weights must be positive and finite");
        }
        if !(dim > 0.0 && dim < N as f64) {
            return invalid("cloud dimension must lie in (0, n)");
        }
        let mesh = Self::estimate_mesh(&points);
        let grid = PointGrid::new(&points, (4.0 * mesh).max(1e-9));
        Ok(Self {
            points,
            weights,
            dim,
            grid,
            mesh,
        })
    }

    /// Points `a + (i + 1/2)(b - a)/m` with weights `|b - a| / m`.
    pub fn segment(a: Point<N>, b: Point<N>, m: usize) -> Result<Self> {
        let len = (0..N).map(|i| (b[i] - a[i]).powi(2)).sum::<f64>().sqrt();
        let pts = (0..m)
            .map(|k| {
                let t = (k as f64 + 0.5) / m as f64;
                let mut p = a;
                for i in 0..N {
                    p[i] += t * (b[i] - a[i]);
                }
                p
            })
            .collect();
        Self::new(pts, vec![len / m as f64; m], 1.0)
    }

    /// Median nearest-neighbour spacing estimated from a subsample.
    fn estimate_mesh(points: &[Point<N>]) -> f64 {
        if points.len() < 2 {
            return 1.0;
        }
        let step = (points.len() / 64).max(1);
        let mut nn: Vec<f64> = (0..points.len())
            .step_by(step)
            .map(|i| {
                points
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| dist(&points[i], q))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        nn.sort_by(f64::total_cmp);
        nn[nn.len() / 2].max(1e-12)
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Indices of points in the open ball `B(x, r)`, ascending.
    pub fn ball(&self, x: &Point<N>, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.grid.for_each_near(x, r, |i| {
            if dist(&self.points[i], x) < r {
                out.push(i);
            }
        });
        out.sort_unstable();
        out
    }

    pub fn ball_mass(&self, x: &Point<N>, r: f64) -> f64 {
        self.ball(x, r).iter().map(|&i| self.weights[i]).sum()
    }
}

pub(crate) fn dist<const N: usize>(a: &Point<N>, b: &Point<N>) -> f64 {
    (0..N).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct AhlforsReport {
    pub constant: f64,
    pub radii: Vec<f64>,
    /// Worst ratio per radius.
    pub per_radius: Vec<f64>,
}

/// `sup max(r^d / m, m / r^d)` over every cloud point and the given radii,
/// `m = σ(B(x, r))`. Fails with `NotRegular` above `cap`.
pub fn ahlfors_check<const N: usize>(cloud: &AhlforsCloud<N>, radii: &[f64], cap: f64) -> Result<AhlforsReport> {
    if radii.len() < 3 {
        return invalid("at least three radii required");
    }
    let (lo, hi) = radii
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    if hi / lo < 4.0 {
        return invalid("radii must span at least two dyadic scales");
    }
    let per_radius: Vec<f64> = radii
        .iter()
        .map(|&r| {
            let rd = r.powf(cloud.dim);
            cloud
                .points
                .par_iter()
                .map(|x| {
                    let m = cloud.ball_mass(x, r);
                    (rd / m).max(m / rd)
                })
                .reduce(|| 0.0, f64::max)
        })
        .collect();
    let constant = per_radius.iter().copied().fold(0.0, f64::max);
    if !(constant <= cap) {
        return Err(Error::NotRegular { constant, cap });
    }
    Ok(AhlforsReport {
        constant,
        radii: radii.to_vec(),
        per_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::koch::koch_prefractal;

    #[test]
    fn unit_segment_is_one_regular() {
        let c = AhlforsCloud::segment([0.0, 0.0], [1.0, 0.0], 1024).unwrap();
        let rep = ahlfors_check(&c, &[0.25, 0.125, 0.0625, 0.03125], 10.0).unwrap();
        assert!(rep.constant <= 2.0 + 1e-9, "{}", rep.constant);
    }

    #[test]
    fn single_point_is_not_regular() {
        let c = AhlforsCloud::new(vec![[0.0, 0.0]], vec![1.0], 1.0).unwrap();
        assert!(matches!(
            ahlfors_check(&c, &[0.1, 0.01, 0.001], 50.0),
            Err(Error::NotRegular { .. })
        ));
    }

    #[test]
    fn koch_constant_is_level_independent() {
        let radii: Vec<f64> = (1..=4).map(|k| 3f64.powi(-k)).collect();
        let c5 = ahlfors_check(&koch_prefractal(5).unwrap().1, &radii, 100.0).unwrap();
        let c6 = ahlfors_check(&koch_prefractal(6).unwrap().1, &radii, 100.0).unwrap();
        assert!(c5.constant <= 4.0, "{}", c5.constant);
        assert!((c5.constant - c6.constant).abs() <= 0.1 * c5.constant);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(AhlforsCloud::new(vec![[0.0, 0.0]], vec![0.0], 1.0).is_err());
        assert!(AhlforsCloud::new(vec![[0.0, 0.0]], vec![1.0], 2.0).is_err());
    }
}
