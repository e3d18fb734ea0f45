//! Iterated normal derivatives `∂^j u / ∂ν^j = Σ_{|α|=j} j!/α! ν^α f_α`.

use crate::error::{invalid, Error, Result};
use crate::funcspace::multiindex::{alpha_factorial, factorial, of_degree, order, power, up_to};
use crate::funcspace::BesovJet;
use crate::Point;

/// The `m` normal derivatives `j = 0..m` at every cloud point.
pub fn normal_derivatives<const N: usize>(jet: &BesovJet<N>, normals: &[Point<N>], m: usize) -> Result<Vec<Vec<f64>>> {
    if jet.k < m {
        return Err(Error::OrderMismatch {
            expected: m,
            found: jet.k,
        });
    }
    if normals.len() != jet.cloud.len() {
        return invalid("one normal per cloud point required");
    }
    if normals
        .iter()
        .any(|nu| (nu.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() > 1e-12)
    {
        return invalid("normals must have unit length");
    }
    let alphas = up_to::<N>(jet.k - 1);
    Ok(normals
        .iter()
        .enumerate()
        .map(|(i, nu)| {
            let f = jet.at(i);
            (0..m)
                .map(|j| {
                    of_degree::<N>(j)
                        .iter()
                        .map(|a| {
                            let ai = alphas.iter().position(|b| b == a).unwrap();
                            factorial(order(a)) / alpha_factorial(a) * power(nu, a) * f[ai]
                        })
                        .sum()
                })
                .collect()
        })
        .collect())
}
