//! The outward-cusp domain `{0 < x1 < 1, 0 < x2 < x1^a}`.

use super::cube::Aabb;
use super::domain::Domain;
use super::polygon::point_segment_distance;
use crate::Point;

#[derive(Clone, Debug)]
pub struct Cusp {
    pub a: f64,
}

impl Cusp {
    pub fn new(a: f64) -> Self {
        assert!(a > 1.0, "cusp exponent must exceed 1");
        Self { a }
    }

    fn curve_sq(&self, x: &Point<2>, t: f64) -> f64 {
        (t - x[0]).powi(2) + (t.powf(self.a) - x[1]).powi(2)
    }

    /// Distance to the arc `{(t, t^a) : 0 <= t <= 1}`: dense sampling, then
    /// golden-section refinement in the bracketing interval.
    fn curve_distance(&self, x: &Point<2>) -> f64 {
        const M: usize = 256;
        let mut best = (0usize, f64::INFINITY);
        for i in 0..=M {
            let v = self.curve_sq(x, i as f64 / M as f64);
            if v < best.1 {
                best = (i, v);
            }
        }
        let mut lo = (best.0.saturating_sub(1)) as f64 / M as f64;
        let mut hi = ((best.0 + 1).min(M)) as f64 / M as f64;
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let mut fc = self.curve_sq(x, c);
        let mut fd = self.curve_sq(x, d);
        for _ in 0..80 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = self.curve_sq(x, c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = self.curve_sq(x, d);
            }
        }
        best.1.min(fc).min(fd).sqrt()
    }
}

impl Domain<2> for Cusp {
    fn contains(&self, x: &Point<2>) -> bool {
        x[0] > 0.0 && x[0] < 1.0 && x[1] > 0.0 && x[1] < x[0].powf(self.a)
    }

    fn boundary_distance(&self, x: &Point<2>) -> f64 {
        let bottom = point_segment_distance(x, &[0.0, 0.0], &[1.0, 0.0]);
        let right = point_segment_distance(x, &[1.0, 0.0], &[1.0, 1.0]);
        bottom.min(right).min(self.curve_distance(x))
    }

    fn bounding_box(&self) -> Aabb<2> {
        Aabb::new([0.0, 0.0], [1.0, 1.0])
    }

    fn kind(&self) -> String {
        format!("cusp({})", self.a)
    }

    fn rad(&self) -> Option<f64> {
        // the closure's convex hull is the triangle (0,0), (1,0), (1,1)
        let far = |c: &[f64; 2]| {
            [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]
                .iter()
                .map(|v: &[f64; 2]| ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2)).sqrt())
                .fold(0.0f64, f64::max)
        };
        let mut best = ([0.9, 0.5 * 0.9f64.powf(self.a)], f64::INFINITY);
        best.1 = far(&best.0);
        for i in 1..200 {
            let t = i as f64 / 200.0;
            for j in 1..20 {
                let c = [t, t.powf(self.a) * j as f64 / 20.0];
                if self.contains(&c) && far(&c) < best.1 {
                    best = (c, far(&c));
                }
            }
        }
        Some(best.1)
    }
}
