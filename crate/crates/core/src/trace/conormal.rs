//! Weak conormal residual: how far a nodal field is from satisfying
//! `∫ A∇u·∇v = ⟨f, v⟩` for every hat `v` vanishing near `D`.

use serde::Serialize;

use crate::bvp::fem::{assemble_full, cell_rule, shape, Assembled, FemSpace, Load};
use crate::bvp::CoefficientTensor;
use crate::Point;

#[derive(Clone, Debug, Serialize)]
pub struct ConormalReport {
    /// `max_v |B(u, v) - ⟨f, v⟩| / ‖v‖_{W^{1,p'}}`.
    pub max: f64,
    pub argmax: Point<2>,
    pub tested: usize,
}

/// `‖φ_i‖_{W^{1,q}}` for every node, with `∫|φ|^q + Σ_a ∫|∂_a φ|^q` under
/// the `q`-th root.
pub fn hat_norms(space: &FemSpace, q: f64) -> Vec<f64> {
    let rule = cell_rule(3);
    let h = space.h;
    let mut acc = vec![0.0; space.len()];
    for &c in &space.active {
        let ids = space.cell_nodes(c);
        for ([s, t], w) in &rule {
            let (v, g) = shape(*s, *t);
            for i in 0..4 {
                let e = v[i].abs().powf(q) + (g[i][0] / h).abs().powf(q) + (g[i][1] / h).abs().powf(q);
                acc[ids[i]] += w * h * h * e;
            }
        }
    }
    acc.into_iter().map(|a| a.powf(1.0 / q)).collect()
}

/// The residual against the free hats, given an assembled system.
pub fn residual_from_system(space: &FemSpace, sys: &Assembled, values: &[f64], q: f64) -> ConormalReport {
    let norms = hat_norms(space, q);
    let mut bu = vec![0.0; space.len()];
    sys.matrix.matvec(values, &mut bu);
    let mut max = 0.0;
    let mut arg = 0;
    for &i in &space.free {
        let r = (bu[i] - sys.rhs[i]).abs() / norms[i];
        if r > max {
            max = r;
            arg = i;
        }
    }
    ConormalReport {
        max,
        argmax: space.node_point(arg),
        tested: space.free.len(),
    }
}

/// Residual of the nodal field `values` for the tensor and load, tested
/// against the hats of the unconstrained nodes in `W^{1,q}`.
pub fn conormal_residual(
    space: &FemSpace,
    tensor: &CoefficientTensor,
    load: &Load,
    values: &[f64],
    q: f64,
) -> ConormalReport {
    let sys = assemble_full(space, tensor, load, 3);
    residual_from_system(space, &sys, values, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bvp::fem::{solve_mixed, DistanceFn, WeakProblem, SOLVER_TOL};
    use crate::geometry::Rect;
    use std::sync::Arc;

    fn space(d: DistanceFn) -> FemSpace {
        FemSpace::new(&Rect::unit(), [0.0, 0.0], [1.0, 1.0], 1.0 / 16.0, &d).unwrap()
    }

    #[test]
    fn galerkin_solutions_have_no_residual_and_a_kick_shows() {
        let s = space(Arc::new(|x: &Point<2>| x[0].abs()));
        let load = Load::density(|x| x[0] * x[1] + 1.0);
        let p = WeakProblem::new(CoefficientTensor::identity(2, 1), s, load.clone());
        let sol = solve_mixed(&p).unwrap();
        let r = conormal_residual(&sol.space, &p.tensor, &load, &sol.values, 2.0);
        // the load is integrated with a finer rule here than in the solve
        assert!(r.max < 1e-6, "{}", r.max);
        assert!(sol.diagnostics.conormal_residual <= 10.0 * SOLVER_TOL);
        // perturb one interior hat: its row's diagonal shows up
        let k = (0..sol.space.len())
            .find(|&i| sol.space.node_point(i) == [0.5, 0.5])
            .unwrap();
        let mut v = sol.values.clone();
        v[k] += 1.0;
        let sys = assemble_full(&sol.space, &p.tensor, &load, 2);
        let kicked = residual_from_system(&sol.space, &sys, &v, 2.0);
        let norms = hat_norms(&sol.space, 2.0);
        assert!(kicked.max >= 8.0 / 3.0 / norms[k] - 1e-9);
    }

    #[test]
    fn violated_natural_condition_is_detected() {
        // u = x1 is harmonic but has ∂_ν u = ±1 on the vertical sides
        let s = space(Arc::new(|_: &Point<2>| f64::INFINITY));
        let vals = s.interpolate(&|x| x[0]);
        let r = conormal_residual(&s, &CoefficientTensor::identity(2, 1), &Load::default(), &vals, 2.0);
        assert!(r.max > 1e-3);
        assert!(r.argmax[0] == 0.0 || r.argmax[0] == 1.0);
        // with the matching boundary density the residual vanishes
        let load = Load::default().with_boundary(|_, n| n[0]);
        let r = conormal_residual(&s, &CoefficientTensor::identity(2, 1), &load, &vals, 2.0);
        assert!(r.max < 1e-12, "{}", r.max);
    }
}
