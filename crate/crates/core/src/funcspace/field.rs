//! Scalar fields: the `Field` trait, closed-form fields and finite-difference
//! derivatives.

use std::fmt;
use std::sync::Arc;

use super::multiindex::{order, MultiIndex};
use crate::Point;

/// A scalar function on `R^N`, possibly with exact derivatives.
pub trait Field<const N: usize>: Send + Sync {
    fn value(&self, x: &Point<N>) -> f64;

    /// Exact `∂^α u(x)` when known.
    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        (order(alpha) == 0).then(|| self.value(x))
    }

    /// Points where evaluation is undefined.
    fn singular_points(&self) -> &[Point<N>] {
        &[]
    }
}

impl<const N: usize, F: Field<N> + ?Sized> Field<N> for Arc<F> {
    fn value(&self, x: &Point<N>) -> f64 {
        (**self).value(x)
    }
    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        (**self).exact_derivative(x, alpha)
    }
    fn singular_points(&self) -> &[Point<N>] {
        (**self).singular_points()
    }
}

impl<const N: usize, F: Field<N> + ?Sized> Field<N> for &F {
    fn value(&self, x: &Point<N>) -> f64 {
        (**self).value(x)
    }
    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        (**self).exact_derivative(x, alpha)
    }
    fn singular_points(&self) -> &[Point<N>] {
        (**self).singular_points()
    }
}

pub type FieldRef<const N: usize> = Arc<dyn Field<N>>;

type ValueFn<const N: usize> = Arc<dyn Fn(&Point<N>) -> f64 + Send + Sync>;
type JetFn<const N: usize> = Arc<dyn Fn(&Point<N>, &MultiIndex<N>) -> Option<f64> + Send + Sync>;

/// Closed-form field with optional exact derivatives.
#[derive(Clone)]
pub struct AnalyticField<const N: usize> {
    pub name: String,
    f: ValueFn<N>,
    jet: Option<JetFn<N>>,
    singular: Vec<Point<N>>,
}

impl<const N: usize> fmt::Debug for AnalyticField<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticField")
            .field("name", &self.name)
            .field("exact_jet", &self.jet.is_some())
            .field("singular", &self.singular)
            .finish()
    }
}

impl<const N: usize> AnalyticField<N> {
    pub fn new(name: impl Into<String>, f: impl Fn(&Point<N>) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
            jet: None,
            singular: Vec::new(),
        }
    }

    /// Exact derivatives; the closure may return `None` for orders it does
    /// not cover.
    pub fn with_jet(mut self, jet: impl Fn(&Point<N>, &MultiIndex<N>) -> Option<f64> + Send + Sync + 'static) -> Self {
        self.jet = Some(Arc::new(jet));
        self
    }

    pub fn with_singular(mut self, pts: Vec<Point<N>>) -> Self {
        self.singular = pts;
        self
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("const:{c}"), move |_| c).with_jet(move |_, a| Some(if order(a) == 0 { c } else { 0.0 }))
    }

    /// `x_axis`.
    pub fn coordinate(axis: usize) -> Self {
        Self::new(format!("x{}", axis + 1), move |x| x[axis]).with_jet(move |x, a| {
            Some(match order(a) {
                0 => x[axis],
                1 if a[axis] == 1 => 1.0,
                _ => 0.0,
            })
        })
    }
}

impl<const N: usize> Field<N> for AnalyticField<N> {
    fn value(&self, x: &Point<N>) -> f64 {
        (self.f)(x)
    }

    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        if order(alpha) == 0 {
            return Some((self.f)(x));
        }
        self.jet.as_ref().and_then(|j| j(x, alpha))
    }

    fn singular_points(&self) -> &[Point<N>] {
        &self.singular
    }
}

/// `Σ c_i u_i`.
#[derive(Clone)]
pub struct Combination<const N: usize> {
    pub terms: Vec<(f64, FieldRef<N>)>,
}

impl<const N: usize> Field<N> for Combination<N> {
    fn value(&self, x: &Point<N>) -> f64 {
        self.terms.iter().map(|(c, u)| c * u.value(x)).sum()
    }

    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        let mut s = 0.0;
        for (c, u) in &self.terms {
            s += c * u.exact_derivative(x, alpha)?;
        }
        Some(s)
    }
}

fn binom(m: usize, j: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..j {
        c = c * (m - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Centered finite difference of order `α`: per axis the `m`-th difference
/// with nodes at `(m/2 - j) h`, second-order accurate.
pub fn finite_difference<const N: usize, F: Field<N> + ?Sized>(
    u: &F,
    x: &Point<N>,
    alpha: &MultiIndex<N>,
    h: f64,
) -> f64 {
    fn rec<const N: usize, F: Field<N> + ?Sized>(
        u: &F,
        x: Point<N>,
        alpha: &MultiIndex<N>,
        axis: usize,
        h: f64,
    ) -> f64 {
        if axis == N {
            return u.value(&x);
        }
        let m = alpha[axis];
        if m == 0 {
            return rec(u, x, alpha, axis + 1, h);
        }
        let mut s = 0.0;
        for j in 0..=m {
            let mut y = x;
            y[axis] += (0.5 * m as f64 - j as f64) * h;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * binom(m, j) * rec(u, y, alpha, axis + 1, h);
        }
        s / h.powi(m as i32)
    }
    rec(u, *x, alpha, 0, h)
}

/// `∂^α u(x)`: exact when available, otherwise a finite difference with
/// step `h`. The flag is true when the fallback was used.
pub fn derivative<const N: usize, F: Field<N> + ?Sized>(
    u: &F,
    x: &Point<N>,
    alpha: &MultiIndex<N>,
    h: f64,
) -> (f64, bool) {
    match u.exact_derivative(x, alpha) {
        Some(v) => (v, false),
        None => (finite_difference(u, x, alpha, h), true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smooth() -> AnalyticField<2> {
        AnalyticField::new("sin-exp", |x: &Point<2>| (1.3 * x[0]).sin() * (0.7 * x[1]).exp()).with_jet(|x, a| {
            let sx = match a[0] % 4 {
                0 => (1.3 * x[0]).sin(),
                1 => (1.3 * x[0]).cos(),
                2 => -(1.3 * x[0]).sin(),
                _ => -(1.3 * x[0]).cos(),
            } * 1.3f64.powi(a[0] as i32);
            Some(sx * 0.7f64.powi(a[1] as i32) * (0.7 * x[1]).exp())
        })
    }

    #[test]
    fn exact_jet_agrees_with_differences() {
        let u = smooth();
        let x = [0.3, -0.4];
        for a in [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2], [2, 1]] {
            let exact = u.exact_derivative(&x, &a).unwrap();
            let e1 = (finite_difference(&u, &x, &a, 1e-2) - exact).abs();
            let e2 = (finite_difference(&u, &x, &a, 5e-3) - exact).abs();
            // second order: halving h divides the error by about 4
            assert!(e2 < e1 / 3.0 && e2 < 1e-4, "{a:?} {e1} {e2}");
        }
    }

    #[test]
    fn combination_is_linear() {
        let u: FieldRef<2> = Arc::new(smooth());
        let v: FieldRef<2> = Arc::new(AnalyticField::coordinate(1));
        let c = Combination {
            terms: vec![(2.0, u.clone()), (-3.0, v.clone())],
        };
        let x = [0.1, 0.9];
        assert_eq!(c.value(&x), 2.0 * u.value(&x) - 3.0 * v.value(&x));
        assert_eq!(
            c.exact_derivative(&x, &[0, 1]),
            Some(2.0 * u.exact_derivative(&x, &[0, 1]).unwrap() - 3.0)
        );
    }
}
