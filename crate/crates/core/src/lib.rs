//! Quality indices for self-organizing maps.
//!
//! The crate is split along the usual lines:
//!
//! - [`geometry`]: map lattices, the inter-unit distance and neighborhood kernels.
//! - [`model`]: codebooks, datasets, best-matching-unit rankings and a reference
//!   stochastic trainer.
//! - [`internal`]: label-free indices (quantization error, topographic error,
//!   trustworthiness, topographic product, ...).
//! - [`external`]: label-based indices (purity, clustering accuracy, class
//!   scatter index).
//!
//! Every metric is a pure function of its inputs. Orderings break ties by the
//! lowest unit or sample index, so results are fully deterministic.

pub mod assignment;
pub mod error;
pub mod external;
pub mod geometry;
pub mod internal;
pub mod model;

pub use error::{Result, SomError};
pub use geometry::{MapGrid, NeighborhoodKernel, Topology};
pub use model::{CodeBook, Dataset, ProjectionIndex, TrainerConfig};
