//! Extension operators: Jones' reflection extension, extension by zero,
//! the localized operator for fields vanishing on part of the boundary,
//! the Whitney-type extension of jets from Ahlfors sets, and gluing.

pub mod glue;
pub mod jones;
pub mod jw;
pub mod localized;
pub mod mollify;
pub mod zero;

pub use glue::{glue, GlueReport, GlueRow, GlueVerdict, Glued};
pub use jones::{
    jones_extend, norm_ratio, reproduction_error, small_cube_samples, support_diagnostics, ExtensionPlan,
    JonesExtension, NormRatio, SupportReport,
};
pub use jw::{jw_extend, JwExtension};
pub use localized::{localized_extend, LocalizedExtension, LocalizedPlan, Patch};
pub use mollify::mollify;
pub use zero::{extend_by_zero, ZeroExtension};
