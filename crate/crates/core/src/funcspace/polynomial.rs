//! Centered polynomials and the moment-matching best fit `P_Q(u)`.

use serde::Serialize;

use super::field::{derivative, Field};
use super::grid::{forward_stencil, GridField};
use super::multiindex::{alpha_factorial, factorial, le, order, power, sub, up_to, MultiIndex};
use super::quadrature::tensor_rule;
use crate::error::{Error, Result};
use crate::Point;

/// `P(x) = Σ_{|α| <= degree} c_α (x - center)^α / α!`, so `c_α = ∂^α P(center)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialK<const N: usize> {
    #[serde(with = "crate::geometry::cube::serde_arrays")]
    pub center: Point<N>,
    pub degree: usize,
    /// Aligned with `up_to::<N>(degree)`.
    pub coeffs: Vec<f64>,
}

impl<const N: usize> PolynomialK<N> {
    pub fn zero(center: Point<N>, degree: usize) -> Self {
        let len = up_to::<N>(degree).len();
        Self {
            center,
            degree,
            coeffs: vec![0.0; len],
        }
    }

    pub fn indices(&self) -> Vec<MultiIndex<N>> {
        up_to::<N>(self.degree)
    }

    pub fn coeff(&self, alpha: &MultiIndex<N>) -> f64 {
        self.indices()
            .iter()
            .position(|a| a == alpha)
            .map_or(0.0, |i| self.coeffs[i])
    }

    pub fn eval(&self, x: &Point<N>) -> f64 {
        self.derivative(x, &[0; N])
    }

    /// `∂^β P(x)`.
    pub fn derivative(&self, x: &Point<N>, beta: &MultiIndex<N>) -> f64 {
        let mut d = *x;
        for i in 0..N {
            d[i] -= self.center[i];
        }
        let mut s = 0.0;
        for (a, c) in up_to::<N>(self.degree).iter().zip(&self.coeffs) {
            if *c != 0.0 && le(beta, a) {
                let g = sub(a, beta);
                s += c * power(&d, &g) / alpha_factorial(&g);
            }
        }
        s
    }

    /// Same polynomial expanded about `center`.
    pub fn recentered(&self, center: Point<N>) -> Self {
        let coeffs = up_to::<N>(self.degree)
            .iter()
            .map(|b| self.derivative(&center, b))
            .collect();
        Self {
            center,
            degree: self.degree,
            coeffs,
        }
    }
}

impl<const N: usize> Field<N> for PolynomialK<N> {
    fn value(&self, x: &Point<N>) -> f64 {
        self.eval(x)
    }

    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        Some(self.derivative(x, alpha))
    }
}

/// `⨍_Q (x - x_Q)^γ / γ!` over the cube of side `s`: per axis
/// `(s/2)^g / (g+1)!` for even `g`, zero for odd.
pub fn centered_moment<const N: usize>(gamma: &MultiIndex<N>, side: f64) -> f64 {
    let mut v = 1.0;
    for &g in gamma {
        if g % 2 == 1 {
            return 0.0;
        }
        v *= (0.5 * side).powi(g as i32) / factorial(g + 1);
    }
    v
}

/// Solves `c_α = A_α - Σ_{β > α} c_β M_{β-α}` from the highest order down,
/// where `A_α = ⨍_Q ∂^α u`.
fn solve_triangular<const N: usize>(center: Point<N>, side: f64, k: usize, avg: &[f64]) -> PolynomialK<N> {
    let deg = k - 1;
    let idx = up_to::<N>(deg);
    let mut c = vec![0.0; idx.len()];
    for i in (0..idx.len()).rev() {
        let a = idx[i];
        let mut v = avg[i];
        for j in 0..idx.len() {
            let b = idx[j];
            if j != i && le(&a, &b) && order(&b) > order(&a) {
                v -= c[j] * centered_moment(&sub(&b, &a), side);
            }
        }
        c[i] = v;
    }
    PolynomialK {
        center,
        degree: deg,
        coeffs: c,
    }
}

/// Gauss points per axis used for cube averages of closed-form fields.
pub const GAUSS_POINTS: usize = 6;

/// Averages `⨍_Q ∂^α u`, `|α| <= k-1`, by a tensor Gauss rule (exact
/// derivatives, or finite differences with step `side / 64`).
pub fn cube_averages<const N: usize, F: Field<N> + ?Sized>(
    u: &F,
    center: &Point<N>,
    side: f64,
    k: usize,
) -> Result<Vec<f64>> {
    let rule = tensor_rule(center, side, GAUSS_POINTS);
    let vol = side.powi(N as i32);
    for (x, _) in &rule {
        if u.singular_points().iter().any(|s| s == x) {
            return Err(Error::SingularQuadraturePoint { point: x.to_vec() });
        }
    }
    Ok(up_to::<N>(k - 1)
        .iter()
        .map(|a| {
            rule.iter()
                .map(|(x, w)| w * derivative(u, x, a, side / 64.0).0)
                .sum::<f64>()
                / vol
        })
        .collect())
}

/// The best fit `P_Q(u)` of order `k` (degree `k - 1`) on the cube with the
/// given center and side: `⨍_Q ∂^α (u - P) = 0` for all `|α| <= k-1`.
pub fn best_fit_polynomial<const N: usize, F: Field<N> + ?Sized>(
    u: &F,
    center: Point<N>,
    side: f64,
    k: usize,
) -> Result<PolynomialK<N>> {
    assert!(k >= 1);
    let avg = cube_averages(u, &center, side, k)?;
    Ok(solve_triangular(center, side, k, &avg))
}

/// Best fit from grid data: averages of forward differences over the cells
/// whose centers lie in the cube.
pub fn best_fit_polynomial_grid<const N: usize>(
    u: &GridField<N>,
    center: Point<N>,
    side: f64,
    k: usize,
) -> Result<PolynomialK<N>> {
    assert!(k >= 1);
    let spec = u.spec;
    let mut lo = [0usize; N];
    let mut hi = [0usize; N];
    let mut cells = 1usize;
    for i in 0..N {
        let a = ((center[i] - 0.5 * side - spec.lo[i]) / spec.h - 0.5).ceil().max(0.0) as usize;
        let b = ((center[i] + 0.5 * side - spec.lo[i]) / spec.h - 0.5).floor();
        let b = if b < 0.0 { 0 } else { (b as usize + 1).min(spec.dims[i]) };
        lo[i] = a;
        hi[i] = b.max(a);
        cells *= hi[i] - lo[i];
    }
    let required = 1usize << N;
    if cells < required {
        return Err(Error::QuadratureUnderflow { cells, required });
    }
    let avg: Vec<f64> = up_to::<N>(k - 1)
        .iter()
        .map(|a| {
            let st = forward_stencil(a, spec.h);
            let mut s = 0.0;
            let mut n = 0usize;
            let mut idx = lo;
            loop {
                let mut d = 0.0;
                let mut ok = true;
                for (off, w) in &st {
                    match spec.shift(&idx, off) {
                        Some(g) => d += w * u.get(g),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    s += d;
                    n += 1;
                }
                let mut ax = 0;
                loop {
                    if ax == N {
                        break;
                    }
                    idx[ax] += 1;
                    if idx[ax] < hi[ax] {
                        break;
                    }
                    idx[ax] = lo[ax];
                    ax += 1;
                }
                if ax == N {
                    break;
                }
            }
            if n == 0 {
                0.0
            } else {
                s / n as f64
            }
        })
        .collect();
    Ok(solve_triangular(center, side, k, &avg))
}

/// `max_α |⨍_Q ∂^α (u - P)|` by the same tensor rule.
pub fn moment_residual<const N: usize, F: Field<N> + ?Sized>(
    u: &F,
    p: &PolynomialK<N>,
    side: f64,
    k: usize,
) -> Result<f64> {
    let a = cube_averages(u, &p.center, side, k)?;
    let b = cube_averages(p, &p.center, side, k)?;
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::field::AnalyticField;

    fn cubic() -> AnalyticField<2> {
        AnalyticField::new("x1^3", |x: &Point<2>| x[0].powi(3)).with_jet(|x, a| {
            Some(match (a[0], a[1]) {
                (0, 0) => x[0].powi(3),
                (1, 0) => 3.0 * x[0] * x[0],
                (2, 0) => 6.0 * x[0],
                (3, 0) => 6.0,
                _ => 0.0,
            })
        })
    }

    #[test]
    fn order_one_is_the_mean() {
        let p = best_fit_polynomial(&AnalyticField::coordinate(0), [0.5, 0.5], 1.0, 1).unwrap();
        assert_eq!(p.degree, 0);
        assert!((p.coeffs[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reproduces_polynomials() {
        let q = PolynomialK {
            center: [0.3, -0.2],
            degree: 2,
            coeffs: vec![1.0, -2.0, 0.5, 3.0, -1.0, 0.25],
        };
        let p = best_fit_polynomial(&q, [0.1, 0.4], 0.5, 3).unwrap();
        for x in [[0.0, 0.0], [0.7, -1.0], [2.0, 3.0]] {
            assert!((p.eval(&x) - q.eval(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_moments_match_a_constrained_solve() {
        // k = 2 on [0,1]^2: P = c0 + c1 (x1 - 1/2) + c2 (x2 - 1/2)
        let p = best_fit_polynomial(&cubic(), [0.5, 0.5], 1.0, 2).unwrap();
        assert!(moment_residual(&cubic(), &p, 1.0, 2).unwrap() <= 1e-10);
        // oracle: linear system for the three unknowns from
        // ∫ (u - P) = 0, ∫ ∂1(u - P) = 0, ∫ ∂2 (u - P) = 0 on [0,1]^2
        // ∫ x1^3 = 1/4, ∫ 3 x1^2 = 1 → c1 = 1, c2 = 0, c0 = 1/4
        let c = p.recentered([0.5, 0.5]);
        assert!((c.coeff(&[0, 0]) - 0.25).abs() < 1e-12);
        assert!((c.coeff(&[1, 0]) - 1.0).abs() < 1e-12);
        assert!(c.coeff(&[0, 1]).abs() < 1e-12);
    }

    #[test]
    fn grid_best_fit_underflows() {
        use crate::funcspace::grid::GridSpec;
        let s = GridSpec::<2>::from_box([0.0; 2], [1.0; 2], 0.25).unwrap();
        let g = GridField::sample(s, &AnalyticField::coordinate(0));
        assert!(matches!(
            best_fit_polynomial_grid(&g, [0.375, 0.375], 0.25, 1),
            Err(Error::QuadratureUnderflow { .. })
        ));
        let p = best_fit_polynomial_grid(&g, [0.5, 0.5], 1.0, 2).unwrap();
        assert!((p.coeff(&[0, 0]) - 0.5).abs() < 1e-12);
        assert!((p.coeff(&[1, 0]) - 1.0).abs() < 1e-12);
    }

    use proptest::prelude::*;

    fn wave(a: f64, b: f64) -> AnalyticField<2> {
        AnalyticField::new("wave", move |x: &Point<2>| {
            (a * x[0] + b * x[1]).sin() + x[0] * x[1] * x[1]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn projection_and_linearity(
            a in -3.0f64..3.0, b in -3.0f64..3.0, s in -2.0f64..2.0, t in -2.0f64..2.0,
            cx in -1.0f64..1.0, side in 0.05f64..1.0, k in 1usize..4,
        ) {
            let c = [cx, 0.3];
            let (u, v) = (wave(a, b), wave(b, -a));
            let pu = best_fit_polynomial(&u, c, side, k).unwrap();
            let again = best_fit_polynomial(&pu, c, side, k).unwrap();
            for (x, y) in pu.coeffs.iter().zip(&again.coeffs) {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
            let pv = best_fit_polynomial(&v, c, side, k).unwrap();
            let (u2, v2) = (u.clone(), v.clone());
            let w = AnalyticField::new("su+tv", move |x: &Point<2>| s * u2.value(x) + t * v2.value(x));
            let pw = best_fit_polynomial(&w, c, side, k).unwrap();
            for i in 0..pw.coeffs.len() {
                let lin = s * pu.coeffs[i] + t * pv.coeffs[i];
                // finite-difference derivatives of the combination are linear too
                prop_assert!((pw.coeffs[i] - lin).abs() <= 1e-9 * (1.0 + lin.abs()));
            }
        }

        #[test]
        fn order_one_is_the_cube_average(a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let u = wave(a, b);
            let p = best_fit_polynomial(&u, [0.2, -0.1], 0.5, 1).unwrap();
            let rule = tensor_rule(&[0.2, -0.1], 0.5, 10);
            let avg: f64 = rule.iter().map(|(x, w)| w * u.value(x)).sum::<f64>() / 0.25;
            prop_assert!((p.coeffs[0] - avg).abs() < 1e-12);
        }
    }
}
