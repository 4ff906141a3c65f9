//! Combinatorial knot Floer homology from multi-pointed Heegaard diagrams.
//!
//! The crate models Heegaard diagrams as cell complexes (curves, intersection
//! points, disk regions), computes the tilde-flavored knot Floer homology of
//! nice diagrams, constructs the double branched cover of a genus-zero
//! diagram together with its deck involution, and evaluates the endpoints of
//! the localization spectral sequence of the equivariant complex over F2\[q\],
//! reporting rank-inequality verdicts on concrete knots.
//!
//! The usual entry points are [`pipeline::compute_two_bridge`],
//! [`pipeline::compute_grid`] and [`pipeline::compute_diagram`]; the pieces
//! they orchestrate are public in the per-stage modules.

pub mod algebra;
pub mod checks;
pub mod cover;
pub mod diagram;
pub mod equivariant;
pub mod floer;
pub mod pipeline;

pub use algebra::{F2Matrix, PolyMatrix, ZMatrix};
pub use cover::CoveredDiagram;
pub use diagram::Diagram;
pub use pipeline::{ComputeOptions, Report};
