//! Koch snowflake prefractals with exact vertices in Q(sqrt 3) and the
//! self-similar boundary measure as a weighted point cloud.

use std::sync::Arc;

use super::ahlfors::AhlforsCloud;
use super::cube::RootLattice;
use super::exact::{ExactPoint, Qs3};
use super::polygon::{ExactVertices, Polygon};
use crate::error::{invalid, Result};

/// Similarity dimension `ln 4 / ln 3` of the snowflake curve.
pub fn koch_dimension() -> f64 {
    4f64.ln() / 3f64.ln()
}

/// Root cube `[-1/4, 5/4] x [-1/2, 1]` holding every prefractal.
pub fn koch_root() -> RootLattice<2> {
    RootLattice::cube([-0.25, -0.5], 1.5)
}

#[cfg(test)]
fn refine_f64(v: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let h = 0.5 * 3f64.sqrt();
    let mut out = Vec::with_capacity(4 * v.len());
    for i in 0..v.len() {
        let a = v[i];
        let b = v[(i + 1) % v.len()];
        let d = [(b[0] - a[0]) / 3.0, (b[1] - a[1]) / 3.0];
        let p1 = [a[0] + d[0], a[1] + d[1]];
        let p3 = [a[0] + 2.0 * d[0], a[1] + 2.0 * d[1]];
        // clockwise rotation by 60 degrees points outward for a CCW curve
        let r = [0.5 * d[0] + h * d[1], -h * d[0] + 0.5 * d[1]];
        out.extend([a, p1, [p1[0] + r[0], p1[1] + r[1]], p3]);
    }
    out
}

fn refine_exact(v: &[ExactPoint]) -> Vec<ExactPoint> {
    let third = Qs3::ratio(1, 3);
    let half = Qs3::ratio(1, 2);
    let h = &Qs3::sqrt3() * &half;
    let mut out = Vec::with_capacity(4 * v.len());
    for i in 0..v.len() {
        let a = &v[i];
        let b = &v[(i + 1) % v.len()];
        let d = [&(&b[0] - &a[0]) * &third, &(&b[1] - &a[1]) * &third];
        let p1 = [&a[0] + &d[0], &a[1] + &d[1]];
        let p3 = [&p1[0] + &d[0], &p1[1] + &d[1]];
        let r = [&(&half * &d[0]) + &(&h * &d[1]), &(&half * &d[1]) - &(&h * &d[0])];
        let peak = [&p1[0] + &r[0], &p1[1] + &r[1]];
        out.push(a.clone());
        out.push(p1);
        out.push(peak);
        out.push(p3);
    }
    out
}

/// Level-`level` snowflake polygon (`3 * 4^level` edges) and its boundary
/// cloud: one point per edge midpoint with weight `4^-level`, so each of the
/// three generating sides carries unit mass.
pub fn koch_prefractal(level: u32) -> Result<(Polygon, AhlforsCloud<2>)> {
    if level > 8 {
        return invalid("Koch level must be at most 8");
    }
    let mut ev: Vec<ExactPoint> = vec![
        [Qs3::int(0), Qs3::int(0)],
        [Qs3::int(1), Qs3::int(0)],
        [Qs3::ratio(1, 2), &Qs3::sqrt3() * &Qs3::ratio(1, 2)],
    ];
    for _ in 0..level {
        ev = refine_exact(&ev);
    }
    // floats rounded from the exact values keep both views consistent
    let fv: Vec<[f64; 2]> = ev.iter().map(|p| [p[0].to_f64(), p[1].to_f64()]).collect();
    let n = fv.len();
    let w = 0.25f64.powi(level as i32);
    let points: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let a = fv[i];
            let b = fv[(i + 1) % n];
            [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
        })
        .collect();
    let cloud = AhlforsCloud::new(points, vec![w; n], koch_dimension())?;
    let poly = Polygon::new(format!("koch:{level}"), fv, ExactVertices::Field(Arc::new(ev)));
    Ok((poly, cloud))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::Domain;

    #[test]
    fn edge_counts_and_lengths() {
        let (p0, c0) = koch_prefractal(0).unwrap();
        assert_eq!(p0.edge_count(), 3);
        assert_eq!(c0.points.len(), 3);
        let (p3, _) = koch_prefractal(3).unwrap();
        assert_eq!(p3.edge_count(), 192);
        let v = p3.vertices();
        for i in 0..v.len() {
            let b = v[(i + 1) % v.len()];
            let len = ((b[0] - v[i][0]).powi(2) + (b[1] - v[i][1]).powi(2)).sqrt();
            assert!((len - 1.0 / 27.0).abs() < 1e-14);
        }
    }

    #[test]
    fn float_and_exact_recursions_agree() {
        let mut fv = vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.5 * 3f64.sqrt()]];
        for _ in 0..4 {
            fv = refine_f64(&fv);
        }
        let (p, _) = koch_prefractal(4).unwrap();
        for (a, b) in fv.iter().zip(p.vertices()) {
            assert!((a[0] - b[0]).abs() < 1e-14 && (a[1] - b[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn snowflake_geometry() {
        let (p, c) = koch_prefractal(2).unwrap();
        assert!(p.contains(&[0.5, 0.3]));
        // the bottom peak pokes out below the base
        assert!(p.contains(&[0.5, -0.2]));
        assert!(!p.contains(&[0.05, -0.1]));
        assert!((c.total_weight() - 3.0).abs() < 1e-12);
        let b = koch_root().bounds();
        assert!(b.lo[1] < -3f64.sqrt() / 6.0 && b.hi[0] > 7.0 / 6.0);
    }
}
