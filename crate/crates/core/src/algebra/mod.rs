//! Exact linear algebra kernels: GF(2) rank and homology, integer Smith
//! normal form, and rank of polynomial matrices over the fraction field
//! F2(q). Everything here is pure and deterministic.

pub mod f2;
pub mod poly;
pub mod snf;

pub use f2::{f2_homology_ranks, F2Error, F2Matrix};
pub use poly::{F2Poly, Gf2e, PolyMatrix};
pub use snf::{column_echelon, determinant, integer_snf, snf_with_left_transform, ZMatrix};
