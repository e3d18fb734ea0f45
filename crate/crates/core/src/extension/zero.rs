//! Extension by zero of fields vanishing near the boundary.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::{Field, GridField, GridSpec, MultiIndex};
use crate::geometry::Domain;
use crate::Point;

/// `u` in `Ω`, zero elsewhere.
pub struct ZeroExtension<'a, const N: usize> {
    pub domain: &'a dyn Domain<N>,
    pub u: &'a dyn Field<N>,
}

impl<const N: usize> Field<N> for ZeroExtension<'_, N> {
    fn value(&self, x: &Point<N>) -> f64 {
        if self.domain.contains(x) {
            self.u.value(x)
        } else {
            0.0
        }
    }

    fn exact_derivative(&self, x: &Point<N>, alpha: &MultiIndex<N>) -> Option<f64> {
        if self.domain.contains(x) {
            self.u.exact_derivative(x, alpha)
        } else {
            Some(0.0)
        }
    }
}

/// Samples the zero extension after checking `u = 0` at every cell center
/// of `Ω` closer than `collar` to `∂Ω`.
pub fn extend_by_zero<const N: usize>(
    u: &dyn Field<N>,
    domain: &dyn Domain<N>,
    grid: &GridSpec<N>,
    collar: f64,
) -> Result<GridField<N>> {
    let bad = (0..grid.len()).into_par_iter().find_first(|&f| {
        let x = grid.center_flat(f);
        domain.contains(&x) && domain.boundary_distance(&x) < collar && u.value(&x) != 0.0
    });
    if let Some(f) = bad {
        let x = grid.center_flat(f);
        return Err(Error::CollarViolation {
            point: x.to_vec(),
            value: u.value(&x),
        });
    }
    Ok(GridField::sample(*grid, &ZeroExtension { domain, u }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{grid_sobolev_norm, AnalyticField};
    use crate::geometry::Rect;

    fn bump() -> AnalyticField<2> {
        AnalyticField::new("bump", |x: &Point<2>| {
            let r2 = ((x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2)) / 0.09;
            if r2 < 1.0 {
                (1.0 - 1.0 / (1.0 - r2)).exp()
            } else {
                0.0
            }
        })
    }

    #[test]
    fn isometric_on_interior_bumps() {
        let sq = Rect::<2>::unit();
        let grid = GridSpec::from_box([-0.5; 2], [1.5; 2], 1.0 / 64.0).unwrap();
        let g = extend_by_zero(&bump(), &sq, &grid, 0.1).unwrap();
        let all = vec![true; grid.len()];
        let inside: Vec<bool> = (0..grid.len()).map(|f| sq.contains(&grid.center_flat(f))).collect();
        for k in 0..3 {
            let a = grid_sobolev_norm(&g, &all, k, 2.0);
            let b = grid_sobolev_norm(&g, &inside, k, 2.0);
            assert!((a - b).abs() <= 1e-10 * b, "{k}: {a} {b}");
        }
    }

    #[test]
    fn zero_and_violations() {
        let sq = Rect::<2>::unit();
        let grid = GridSpec::from_box([-0.5; 2], [1.5; 2], 1.0 / 16.0).unwrap();
        let g = extend_by_zero(&AnalyticField::constant(0.0), &sq, &grid, 0.1).unwrap();
        assert!(g.values.iter().all(|&v| v == 0.0));
        assert!(matches!(
            extend_by_zero(&AnalyticField::constant(1.0), &sq, &grid, 0.1),
            Err(Error::CollarViolation { .. })
        ));
    }
}
