//! Spectral convergence of the `∂̄`-Laplacian on `(1,0)`-forms over a flat
//! torus whose metric degenerates at a point.

// `!(x > 0.0)` is how NaN gets rejected along with the rest
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod heatzeta;
pub mod io;
pub mod jlinalg;
pub mod linalg;
pub mod spectra;
pub mod varyhilbert;

pub use error::{Error, Result};
