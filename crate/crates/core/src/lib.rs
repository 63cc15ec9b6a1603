//! Edge, ridge and blob detection with banks of L1-normalized symmetric
//! molecules built from Gaussian-derivative wavelets and their Hilbert
//! transforms.

pub mod bank;
pub mod cli;
pub mod detect;
pub mod error;
pub mod eval;
mod fft;
pub mod grid;
pub mod io;
pub mod measures;
pub mod postprocess;
pub mod synth;
pub mod transform;
pub mod wavelets;

pub use error::{Error, Result};
pub use grid::{BinaryMap, Grid, ImageGrid};
