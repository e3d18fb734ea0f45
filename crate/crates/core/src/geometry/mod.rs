//! Dyadic cubes, domain oracles, Whitney covers and the model sets.

pub mod ahlfors;
pub mod cube;
pub mod cusp;
pub mod domain;
pub mod exact;
pub mod koch;
pub mod partition;
pub mod polygon;
pub mod probe;
pub mod reflect;
pub mod spatial;
pub mod verify;
pub mod whitney;

pub use ahlfors::{ahlfors_check, AhlforsCloud, AhlforsReport};
pub use cube::{Aabb, DyadicCube, RootLattice};
pub use cusp::Cusp;
pub use domain::{Ball, BoundaryComplement, Complement, Domain, DomainRef, Empty, Rect, Union};
pub use koch::{koch_dimension, koch_prefractal, koch_root};
pub use partition::PartitionOfUnity;
pub use polygon::Polygon;
pub use probe::{epsilon_delta_probe, probe_pairs, ProbeReport};
pub use reflect::{reflect_cubes, reflect_scan, small_cubes, Reflection, DEFAULT_SEARCH_FACTOR};
pub use verify::{verify_exact, ExactReport};
pub use whitney::{whitney_decompose, CoverStats, WhitneyCover};
