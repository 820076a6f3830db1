//! Exact tropical moduli fans of rational marked curves and tropical double
//! Hurwitz cycles.
//!
//! All geometry uses arbitrary-precision rationals; points of `M_{0,n}` are
//! stored in coordinates of the lattice spanned by the rays `v_I`.

pub mod analysis;
pub mod covers;
pub mod error;
pub mod hurwitz;
pub mod json;
pub mod linalg;
pub mod moduli;
pub mod par;
pub mod polyhedra;

pub use error::{Error, Result};
