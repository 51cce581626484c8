//! Minimal free resolutions, cohomology operators and matrix factorizations
//! over graded complete intersections `A = Q/(f_1, ..., f_c)` with
//! `Q = F_p[x_1, ..., x_n]`.

pub mod ci;
pub mod error;
pub mod groebner;
pub mod io;
pub mod linalg;
pub mod mf;
pub mod polyring;
pub mod resolution;
pub mod verify;

pub use error::{Error, Result};
