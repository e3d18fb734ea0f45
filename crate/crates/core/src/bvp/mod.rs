//! Second-order mixed boundary-value problems on staircase Q1 spaces and
//! the coefficient counterexamples bounding the admissible `p`.

pub mod counterexamples;
pub mod fem;
pub mod sparse;
pub mod tensor;

pub use counterexamples::{
    degiorgi_case, mazya_scan, mazya_theta, mazya_threshold, membership_scan, meyers_case, DeGiorgiReport, MazyaReport,
    MeyersReport, ThresholdScans,
};
pub use fem::{
    assemble, fem_error, solve_mixed, Assembled, DistanceFn, FemField, FemSpace, Load, Solution, SolveDiagnostics,
    WeakProblem, SOLVER_TOL,
};
pub use sparse::{pcg, Csr};
pub use tensor::{CoefficientTensor, EllipticityReport};
