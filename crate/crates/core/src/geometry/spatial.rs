//! Uniform bucket grid over a point set for ball queries.

use std::collections::HashMap;

use crate::Point;

#[derive(Clone, Debug)]
pub struct PointGrid<const N: usize> {
    cell: f64,
    buckets: HashMap<[i64; N], Vec<u32>>,
}

impl<const N: usize> PointGrid<N> {
    pub fn new(points: &[Point<N>], cell: f64) -> Self {
        assert!(cell > 0.0);
        let mut buckets: HashMap<[i64; N], Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i as u32);
        }
        Self { cell, buckets }
    }

    fn key(p: &Point<N>, cell: f64) -> [i64; N] {
        let mut k = [0i64; N];
        for i in 0..N {
            k[i] = (p[i] / cell).floor() as i64;
        }
        k
    }

    /// Calls `f(i)` for every point index whose bucket meets the box around
    /// the ball `B(x, r)`; callers filter by exact distance.
    pub fn for_each_near(&self, x: &Point<N>, r: f64, mut f: impl FnMut(usize)) {
        let mut lo = [0i64; N];
        let mut hi = [0i64; N];
        for i in 0..N {
            lo[i] = ((x[i] - r) / self.cell).floor() as i64;
            hi[i] = ((x[i] + r) / self.cell).floor() as i64;
        }
        let cells: i64 = (0..N).map(|i| hi[i] - lo[i] + 1).product();
        if cells as usize > 4 * self.buckets.len() {
            for v in self.buckets.values() {
                v.iter().for_each(|&i| f(i as usize));
            }
            return;
        }
        let mut k = lo;
        loop {
            if let Some(v) = self.buckets.get(&k) {
                v.iter().for_each(|&i| f(i as usize));
            }
            let mut a = 0;
            loop {
                if a == N {
                    return;
                }
                k[a] += 1;
                if k[a] <= hi[a] {
                    break;
                }
                k[a] = lo[a];
                a += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_every_point_in_the_ball() {
        let pts: Vec<[f64; 2]> = (0..400)
            .map(|i| {
                [
                    ((i * 37) % 101) as f64 / 50.0 - 1.0,
                    ((i * 53) % 97) as f64 / 48.0 - 1.0,
                ]
            })
            .collect();
        let g = PointGrid::new(&pts, 0.13);
        let x = [0.1, -0.2];
        let mut got = Vec::new();
        g.for_each_near(&x, 0.3, |i| {
            let p = pts[i];
            if ((p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2)).sqrt() < 0.3 {
                got.push(i);
            }
        });
        got.sort();
        let want: Vec<usize> = (0..pts.len())
            .filter(|&i| ((pts[i][0] - x[0]).powi(2) + (pts[i][1] - x[1]).powi(2)).sqrt() < 0.3)
            .collect();
        assert_eq!(got, want);
    }
}
