//! Congruence-preserving maps on ℤ, ℤⁿ and squares of abelian groups.

pub mod affine;
pub mod extend;
pub mod poly;

pub use affine::{abelian_square_check, zn_affine_check, AbelianGroup, AffineOutcome, GridMap, SquareOutcome};
pub use extend::{crt, extend_congruence_map};
pub use poly::{
    cgg_generator, divisibility_scan, is_congruence_preserving, lcm_upto, pn_basis, pn_expand, pn_point,
    pn_reconstruct, IntPoly,
};
