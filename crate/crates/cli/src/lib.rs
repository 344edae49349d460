//! Command-line front end for `somqual`: file formats, metric reports,
//! SVG figures, training and demonstration experiments.

pub mod demo;
pub mod error;
pub mod evaluate;
pub mod io;
pub mod svg;
pub mod train;

pub use error::{CliError, Result};
