//! Sampled fields, multi-index calculus, best-fit polynomials and the
//! Sobolev and Besov norms.

pub mod besov;
pub mod field;
pub mod grid;
pub mod multiindex;
pub mod polynomial;
pub mod quadrature;
pub mod sobolev;

pub use besov::{besov_norm, BesovJet, BesovReport};
pub use field::{derivative, finite_difference, AnalyticField, Combination, Field, FieldRef};
pub use grid::{grid_power_sums, grid_sobolev_norm, GridField, GridSpec, Interpolated};
pub use multiindex::MultiIndex;
pub use polynomial::{best_fit_polynomial, best_fit_polynomial_grid, moment_residual, PolynomialK};
pub use sobolev::{
    sobolev_norm, sobolev_norm_scan, sobolev_power_sums, NormReport, PowerSums, ScanReport, ScanRow, ScanVerdict,
};
