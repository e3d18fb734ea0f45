//! Real coefficient tensors `a^{αβ}_{ij}` for second-order systems.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// `(x, α, β, i, j) -> a^{αβ}_{ij}(x)`.
pub type EntryFn = Arc<dyn Fn(&[f64], usize, usize, usize, usize) -> f64 + Send + Sync>;

/// A bounded measurable tensor with `n` space directions and `M` components.
#[derive(Clone)]
pub struct CoefficientTensor {
    pub name: String,
    pub n: usize,
    pub components: usize,
    entry: EntryFn,
    /// Declared `sup |a|`.
    pub bound: f64,
    /// Declared ellipticity constant.
    pub kappa: f64,
    pub symmetric: bool,
}

impl fmt::Debug for CoefficientTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientTensor")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("components", &self.components)
            .field("bound", &self.bound)
            .field("kappa", &self.kappa)
            .finish()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipticityReport {
    pub samples: usize,
    /// `min Σ a ζ ζ / |ζ|^2` over the samples.
    pub sampled_min: f64,
    pub sampled_max: f64,
    pub max_entry: f64,
}

impl CoefficientTensor {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        components: usize,
        bound: f64,
        kappa: f64,
        symmetric: bool,
        entry: impl Fn(&[f64], usize, usize, usize, usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            n,
            components,
            entry: Arc::new(entry),
            bound,
            kappa,
            symmetric,
        }
    }

    pub fn entry(&self, x: &[f64], alpha: usize, beta: usize, i: usize, j: usize) -> f64 {
        (self.entry)(x, alpha, beta, i, j)
    }

    /// Scalar case: the `n x n` matrix `A(x)`.
    pub fn matrix2(&self, x: &[f64]) -> [[f64; 2]; 2] {
        let mut a = [[0.0; 2]; 2];
        for (r, row) in a.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = self.entry(x, r, c, 0, 0);
            }
        }
        a
    }

    /// `Σ a^{αβ}_{ij} ζ^α_i ζ^β_j` with `ζ[α * M + i]`.
    pub fn quadratic_form(&self, x: &[f64], zeta: &[f64]) -> f64 {
        let (n, m) = (self.n, self.components);
        let mut s = 0.0;
        for a in 0..n {
            for i in 0..m {
                let za = zeta[a * m + i];
                if za == 0.0 {
                    continue;
                }
                for b in 0..n {
                    for j in 0..m {
                        s += self.entry(x, a, b, i, j) * za * zeta[b * m + j];
                    }
                }
            }
        }
        s
    }

    /// Samples the form at `samples` random `(x, ζ)` pairs with `x` in the
    /// cube `[-radius, radius]^n`.
    pub fn sample_ellipticity(&self, samples: usize, radius: f64, seed: u64) -> EllipticityReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, m) = (self.n, self.components);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut max_entry = 0.0f64;
        for _ in 0..samples {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-radius..radius)).collect();
            let z: Vec<f64> = (0..n * m).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let zz: f64 = z.iter().map(|v| v * v).sum();
            if zz == 0.0 {
                continue;
            }
            let q = self.quadratic_form(&x, &z) / zz;
            lo = lo.min(q);
            hi = hi.max(q);
            for a in 0..n {
                for b in 0..n {
                    for i in 0..m {
                        for j in 0..m {
                            max_entry = max_entry.max(self.entry(&x, a, b, i, j).abs());
                        }
                    }
                }
            }
        }
        EllipticityReport {
            samples,
            sampled_min: lo,
            sampled_max: hi,
            max_entry,
        }
    }

    /// Fails with `EllipticityFail` if a sample falls below `kappa`.
    pub fn check_ellipticity(&self, samples: usize, radius: f64, seed: u64) -> Result<EllipticityReport> {
        let r = self.sample_ellipticity(samples, radius, seed);
        if r.sampled_min < self.kappa * (1.0 - 1e-12) {
            return Err(Error::EllipticityFail {
                sampled: r.sampled_min,
                required: self.kappa,
            });
        }
        Ok(r)
    }

    /// `δ_{αβ} δ_{ij}`.
    pub fn identity(n: usize, components: usize) -> Self {
        Self::new("identity", n, components, 1.0, 1.0, true, |_, a, b, i, j| {
            if a == b && i == j {
                1.0
            } else {
                0.0
            }
        })
    }

    /// Scalar 2-D tensor `A = I - (1 - μ²) t tᵀ`, `t = (x2, -x1)/|x|`;
    /// `A(0) = I`.
    pub fn meyers(mu: f64) -> Self {
        let c = 1.0 - mu * mu;
        Self::new(
            format!("meyers(mu={mu})"),
            2,
            1,
            1.0,
            mu * mu,
            true,
            move |x, a, b, _, _| {
                let r2 = x[0] * x[0] + x[1] * x[1];
                let id = if a == b { 1.0 } else { 0.0 };
                if r2 == 0.0 {
                    return id;
                }
                let t = [x[1], -x[0]];
                id - c * t[a] * t[b] / r2
            },
        )
    }

    /// `c_γ = γ(n-γ)(n-2)² / ((n-2γ)²(n-1)²)`.
    pub fn degiorgi_constant(gamma: f64, n: usize) -> f64 {
        let n = n as f64;
        gamma * (n - gamma) * (n - 2.0).powi(2) / ((n - 2.0 * gamma).powi(2) * (n - 1.0).powi(2))
    }

    /// `a^{αβ}_{ij} = δ_{αβ}δ_{ij} + c_γ [δ_{iα} + n/(n-2) x_i x_α/|x|²]
    /// [δ_{jβ} + n/(n-2) x_j x_β/|x|²]` with `M = n`.
    pub fn degiorgi(gamma: f64, n: usize) -> Self {
        assert!(n >= 3);
        let c = Self::degiorgi_constant(gamma, n);
        let q = n as f64 / (n as f64 - 2.0);
        let bound = 1.0 + c * (1.0 + q).powi(2);
        Self::new(
            format!("degiorgi(gamma={gamma},n={n})"),
            n,
            n,
            bound,
            1.0,
            true,
            move |x, a, b, i, j| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                let d = |p: usize, q: usize| if p == q { 1.0 } else { 0.0 };
                let s = |p: usize, r: usize| if r2 == 0.0 { 0.0 } else { x[p] * x[r] / r2 };
                d(a, b) * d(i, j) + c * (d(i, a) + q * s(i, a)) * (d(j, b) + q * s(j, b))
            },
        )
    }
}
