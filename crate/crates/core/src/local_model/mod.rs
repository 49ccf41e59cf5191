//! Exact polynomial-matrix computations for the local models: similitude and
//! elementary divisors, Iwahori shapes, the monodromy condition, the regular
//! colength-one chart and torus-fixed point sets.

pub mod field;
pub mod fixed_points;
pub mod invariants;
pub mod matrix;
pub mod poly;
pub mod regcolone;
pub mod shape;

pub use field::{ExactField, Scalar};
pub use fixed_points::{fixed_point_set_colone, fixed_point_set_t, FixedPointSet};
pub use invariants::{
    dominated_by, e_divisor_pattern, monodromy_defect, symplectic_similitude, Clause, MonodromyParams, MonodromyReport,
    Similitude,
};
pub use matrix::{PolyMat, RatMat};
pub use poly::{Poly, RatFunc};
pub use regcolone::{build_regcolone_matrix, Branch, RegColOneParams};
pub use shape::{dual_monomial, random_iwahori, shape_of};
