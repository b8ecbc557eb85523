//! Branched minimal surfaces with Gauss map `g(z) = z`: Weierstrass data,
//! period problems, closed-form examples and their geometry.

pub mod algebra;
pub mod error;
pub mod geometry;
pub mod io;
pub mod period;
pub mod surfaces;
pub mod weierstrass;

pub use error::{Error, Result};
pub use nalgebra;
pub use num_complex;
