//! Compressed sparse rows and Jacobi-preconditioned conjugate gradients.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl Csr {
    /// Sums duplicate entries; the input order does not matter.
    pub fn from_triplets(n: usize, mut t: Vec<(usize, usize, f64)>) -> Self {
        t.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; n + 1];
        let mut col = Vec::with_capacity(t.len());
        let mut val: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(c);
                val.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, col, val }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col[k], self.val[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.val[k] * x[self.col[k]];
            }
            *yi = s;
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Largest `|a_ij - a_ji| / max(|a_ij|, |a_ji|)`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                let w = self.get(j, i);
                let s = v.abs().max(w.abs());
                if s > 0.0 {
                    worst = worst.max((v - w).abs() / s);
                }
            }
        }
        worst
    }

    /// The submatrix on `keep` (old indices, ascending).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut t = Vec::new();
        for (new, &old) in keep.iter().enumerate() {
            for (c, v) in self.row(old) {
                if map[c] != usize::MAX {
                    t.push((new, map[c], v));
                }
            }
        }
        Self::from_triplets(keep.len(), t)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

#[derive(Clone, Debug)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `‖b - Ax‖ / ‖b‖` recomputed from the returned `x`.
    pub relative_residual: f64,
}

/// Solves `Ax = b` for symmetric positive (semi)definite `A` to
/// `‖r‖ <= tol ‖b‖`. With `mean_free`, iterates stay orthogonal to the
/// constants (the kernel of a pure Neumann matrix).
pub fn pcg(a: &Csr, b: &[f64], tol: f64, max_iter: usize, mean_free: bool) -> Result<CgOutcome> {
    let n = a.n;
    let inv: Vec<f64> = a.diag().iter().map(|d| if *d > 0.0 { 1.0 / d } else { 1.0 }).collect();
    let bn = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bn == 0.0 {
        return Ok(CgOutcome {
            x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv).map(|(a, b)| a * b).collect();
    if mean_free {
        remove_mean(&mut z);
    }
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut it = 0;
    while it < max_iter {
        if dot(&r, &r).sqrt() <= tol * bn {
            break;
        }
        a.matvec(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] * inv[i];
        }
        if mean_free {
            remove_mean(&mut z);
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        it += 1;
    }
    if mean_free {
        remove_mean(&mut x);
    }
    let mut ax = vec![0.0; n];
    a.matvec(&x, &mut ax);
    let res = ax.iter().zip(b).map(|(u, v)| (v - u) * (v - u)).sum::<f64>().sqrt() / bn;
    if res > tol {
        return Err(Error::NotConverged {
            iterations: it,
            residual: res,
        });
    }
    Ok(CgOutcome {
        x,
        iterations: it,
        relative_residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace1d(n: usize) -> Csr {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        Csr::from_triplets(n, t)
    }

    #[test]
    fn duplicates_are_summed() {
        let a = Csr::from_triplets(2, vec![(1, 0, 1.0), (0, 0, 2.0), (1, 0, 0.5)]);
        assert_eq!(a.get(1, 0), 1.5);
        assert_eq!(a.get(0, 1), 0.0);
        assert_eq!(a.asymmetry(), 1.0);
    }

    #[test]
    fn cg_solves_a_tridiagonal_system() {
        let n = 50;
        let a = laplace1d(n);
        // x_i = i(n+1-i)/2 solves -x'' = 1 with zero ends
        let b = vec![1.0; n];
        let out = pcg(&a, &b, 1e-12, 1000, false).unwrap();
        for i in 0..n {
            let k = (i + 1) as f64;
            let want = k * (n as f64 + 1.0 - k) / 2.0;
            assert!((out.x[i] - want).abs() < 1e-8 * want);
        }
    }

    #[test]
    fn cg_reports_nonconvergence() {
        let a = laplace1d(100);
        assert!(matches!(
            pcg(&a, &vec![1.0; 100], 1e-12, 3, false),
            Err(Error::NotConverged { iterations: 3, .. })
        ));
    }

    #[test]
    fn neumann_kernel_is_projected_out() {
        // 1-D Neumann Laplacian: singular with kernel the constants
        let n = 20;
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.extend([(i, i, 1.0), (i + 1, i + 1, 1.0), (i, i + 1, -1.0), (i + 1, i, -1.0)]);
        }
        let a = Csr::from_triplets(n, t);
        let mut b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        remove_mean(&mut b);
        let out = pcg(&a, &b, 1e-11, 1000, true).unwrap();
        assert!(out.x.iter().sum::<f64>().abs() < 1e-9);
    }
}
