//! Weighted rational polyhedral complexes and the intersection-theoretic
//! operations on them.

pub mod cell;
pub mod complex;
pub mod function;
pub mod local;
pub mod ops;

pub use cell::{AffineFrame, Cell};
pub use complex::WeightedComplex;
pub use function::{divisor, AffineFn, PiecewiseLinearFn};
pub use local::{Constraint, HPoly, VRep};
pub use ops::{
    canonical_refinement, check_balancing, cycles_equal, degree, lattice_normal, recession_fan, refine_by_functional,
    refine_by_hyperplanes, refine_by_spans, split_cell, star, BalancingReport,
};
