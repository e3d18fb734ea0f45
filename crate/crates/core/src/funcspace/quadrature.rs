//! Gauss–Legendre rules on `[-1, 1]` and their tensor products on cubes.

use std::f64::consts::PI;

/// Nodes and weights of the `m`-point rule on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(m, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[m - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[m - 1 - i] = wi;
    }
    (x, w)
}

/// `P_m(z)` and its derivative by the three-term recurrence.
fn legendre(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Tensor rule on the cube `c + [-s/2, s/2]^N`: `(point, weight)` pairs
/// with weights summing to `s^N`.
pub fn tensor_rule<const N: usize>(center: &[f64; N], side: f64, m: usize) -> Vec<([f64; N], f64)> {
    let (x, w) = gauss_legendre(m);
    let total = m.pow(N as u32);
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut p = *center;
        let mut wt = 1.0;
        for i in 0..N {
            let k = rem % m;
            rem /= m;
            p[i] += 0.5 * side * x[k];
            wt *= 0.5 * side * w[k];
        }
        out.push((p, wt));
    }
    out
}
