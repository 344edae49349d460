//! Train a map on a data file and write its codebook.

use std::path::PathBuf;

use somqual::model::train_som;
use somqual::{CodeBook, Dataset, MapGrid, NeighborhoodKernel, Topology, TrainerConfig};

use crate::error::{CliError, Result};
use crate::io::{read_matrix, write_matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOptions {
    pub data: PathBuf,
    pub out: PathBuf,
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
    /// Defaults to half the larger map side.
    pub t_max: Option<f64>,
    pub t_min: f64,
    pub alpha: f64,
    /// Defaults to `alpha / 100`.
    pub alpha_final: Option<f64>,
    pub iterations: usize,
    pub seed: u64,
    pub kernel: NeighborhoodKernel,
}

impl TrainOptions {
    /// Build and validate the trainer configuration; no file is read.
    pub fn trainer_config(&self) -> Result<TrainerConfig> {
        let grid = MapGrid::new(self.rows, self.cols, self.topology).map_err(|e| CliError::Config(e.to_string()))?;
        let defaults = TrainerConfig::new(grid);
        let config = TrainerConfig {
            t_max: self.t_max.unwrap_or(defaults.t_max),
            t_min: self.t_min,
            iterations: self.iterations,
            learning_rate: self.alpha,
            learning_rate_final: self.alpha_final.unwrap_or(self.alpha / 100.0),
            seed: self.seed,
            kernel: self.kernel,
            ..defaults
        };
        config.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }
}

pub fn train(options: &TrainOptions) -> Result<CodeBook> {
    let config = options.trainer_config()?;
    let samples = read_matrix(&options.data)?;
    let data = Dataset::new(samples)?;
    let codebook = train_som(&data, &config)?;
    write_matrix(&options.out, codebook.prototypes())?;
    Ok(codebook)
}
