use thiserror::Error;

pub type Result<T> = std::result::Result<T, SomError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SomError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unit index {index} out of range for a map with {units} units")]
    IndexOutOfRange { index: usize, units: usize },

    /// Two operands disagree on a dimension.
    #[error("shape mismatch: {left} vs {right}")]
    Shape { left: String, right: String },

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("degenerate codebook: {0}")]
    DegenerateCodebook(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("length mismatch: {what} has {left} entries but {right} were expected")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },
}

impl SomError {
    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            SomError::Domain(_) => "domain",
            SomError::IndexOutOfRange { .. } => "index_out_of_range",
            SomError::Shape { .. } => "shape",
            SomError::DegenerateGrid(_) => "degenerate_grid",
            SomError::DegenerateCodebook(_) => "degenerate_codebook",
            SomError::DegenerateData(_) => "degenerate_data",
            SomError::LengthMismatch { .. } => "length_mismatch",
        }
    }
}
