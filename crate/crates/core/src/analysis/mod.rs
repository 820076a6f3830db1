//! Structural verdicts on cycles: connectedness in codimension one, weight
//! lattices, the codimension-one cutting function and numerical equivalence
//! with boundary divisors.

pub mod boundary;
pub mod connectedness;
pub mod cutting;
pub mod sorted;
pub mod weights;

pub use boundary::{boundary_divisor_cycle, count_linear_extensions, numerical_equivalence_check, BoundaryCoefficient, NumericalEquivalence};
pub use connectedness::{connectedness_codim_one, Connectivity};
pub use cutting::{cut_codim_one, distance_sum_function, distance_sum_value};
pub use sorted::{sorted_maximal_cover, x_order, SortedCover};
pub use weights::{weight_space, Verdict, WeightSpaceResult};
