//! Restriction of fields to Ahlfors sets: ball-average jets, one-sided
//! interior jets, normal derivatives and the weak conormal residual.

pub mod conormal;
pub mod normal;
pub mod restrict;

pub use conormal::{conormal_residual, ConormalReport};
pub use normal::normal_derivatives;
pub use restrict::{ball_average, interior_restrict_jet, restrict_jet, TraceReport};
