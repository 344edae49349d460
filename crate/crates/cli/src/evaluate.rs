//! Metric registry, evaluation and report rendering.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::Serialize;
use somqual::external::{bmu_clustering_accuracy, bmu_purity, class_scatter_index};
use somqual::internal::{self, TopographicFunction};
use somqual::{CodeBook, Dataset, MapGrid, NeighborhoodKernel, SomError, Topology};

use crate::error::{CliError, Result};
use crate::io::{read_labels, read_matrix, Fingerprint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    QuantizationError,
    Distortion,
    TopographicError,
    CombinedError,
    NeighborhoodPreservation,
    Trustworthiness,
    TopographicProduct,
    TopographicFunction,
    KruskalShepardError,
    CMeasure,
    Purity,
    ClusteringAccuracy,
    ClassScatterIndex,
}

impl Metric {
    pub const ALL: [Metric; 13] = [
        Metric::QuantizationError,
        Metric::Distortion,
        Metric::TopographicError,
        Metric::CombinedError,
        Metric::NeighborhoodPreservation,
        Metric::Trustworthiness,
        Metric::TopographicProduct,
        Metric::TopographicFunction,
        Metric::KruskalShepardError,
        Metric::CMeasure,
        Metric::Purity,
        Metric::ClusteringAccuracy,
        Metric::ClassScatterIndex,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::QuantizationError => "quantization_error",
            Metric::Distortion => "distortion",
            Metric::TopographicError => "topographic_error",
            Metric::CombinedError => "combined_error",
            Metric::NeighborhoodPreservation => "neighborhood_preservation",
            Metric::Trustworthiness => "trustworthiness",
            Metric::TopographicProduct => "topographic_product",
            Metric::TopographicFunction => "topographic_function",
            Metric::KruskalShepardError => "kruskal_shepard_error",
            Metric::CMeasure => "c_measure",
            Metric::Purity => "purity",
            Metric::ClusteringAccuracy => "clustering_accuracy",
            Metric::ClassScatterIndex => "class_scatter_index",
        }
    }

    pub fn needs_labels(self) -> bool {
        matches!(
            self,
            Metric::Purity | Metric::ClusteringAccuracy | Metric::ClassScatterIndex
        )
    }

    pub fn needs_k(self) -> bool {
        matches!(self, Metric::NeighborhoodPreservation | Metric::Trustworthiness)
    }

    pub fn needs_temperature(self) -> bool {
        self == Metric::Distortion
    }

    pub fn valid_names() -> String {
        Metric::ALL.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")
    }
}

impl FromStr for Metric {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown metric '{s}'; valid names: {}", Metric::valid_names())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(CliError::Config(format!(
                "unknown format '{other}', expected json or csv"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationConfig {
    pub rows: usize,
    pub cols: usize,
    pub topology: Topology,
    pub metrics: Vec<Metric>,
    pub k: Option<usize>,
    pub temperature: Option<f64>,
    pub kernel: NeighborhoodKernel,
    pub codebook: PathBuf,
    pub data: PathBuf,
    pub labels: Option<PathBuf>,
    pub format: ReportFormat,
}

impl EvaluationConfig {
    /// Check metric prerequisites before touching any file.
    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(CliError::Config(format!(
                "no metrics requested; valid names: {}",
                Metric::valid_names()
            )));
        }
        for (i, m) in self.metrics.iter().enumerate() {
            if self.metrics[..i].contains(m) {
                return Err(CliError::Config(format!("metric '{}' requested twice", m.name())));
            }
            if m.needs_labels() && self.labels.is_none() {
                return Err(CliError::Config(format!("metric '{}' requires --labels", m.name())));
            }
            if m.needs_k() && self.k.is_none() {
                return Err(CliError::Config(format!("metric '{}' requires --k", m.name())));
            }
            if m.needs_temperature() && self.temperature.is_none() {
                return Err(CliError::Config(format!(
                    "metric '{}' requires --temperature",
                    m.name()
                )));
            }
        }
        if self.rows == 0 || self.cols == 0 {
            return Err(CliError::Config("--rows and --cols must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<MapGrid> {
        MapGrid::new(self.rows, self.cols, self.topology).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Value of one metric in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MetricValue {
    Scalar(f64),
    Series {
        k: Vec<usize>,
        values: Vec<usize>,
        k_normalized: Vec<f64>,
        values_normalized: Option<Vec<f64>>,
    },
    Error {
        error: String,
        reason: String,
    },
}

impl From<TopographicFunction> for MetricValue {
    fn from(tf: TopographicFunction) -> Self {
        MetricValue::Series {
            k: tf.k,
            values: tf.values,
            k_normalized: tf.k_normalized,
            values_normalized: tf.values_normalized,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportParams {
    pub rows: usize,
    pub cols: usize,
    pub topology: String,
    pub k: Option<usize>,
    pub temperature: Option<f64>,
    pub kernel: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelFingerprint {
    pub count: usize,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportInputs {
    pub codebook: Fingerprint,
    pub data: Fingerprint,
    pub labels: Option<LabelFingerprint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub metrics: IndexMap<String, MetricValue>,
    pub params: ReportParams,
    pub inputs: ReportInputs,
}

impl MetricReport {
    pub fn errors(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.metrics.iter().filter_map(|(name, v)| match v {
            MetricValue::Error { error, reason } => Some((name.as_str(), error.as_str(), reason.as_str())),
            _ => None,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `metric,value` rows; the topographic function expands to one row per
    /// argument, named `topographic_function[k]`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value\n");
        for (name, value) in &self.metrics {
            match value {
                MetricValue::Scalar(v) => writeln!(out, "{name},{v}").unwrap(),
                MetricValue::Series { k, values, .. } => {
                    for (k, v) in k.iter().zip(values) {
                        writeln!(out, "{name}[{k}],{v}").unwrap();
                    }
                }
                MetricValue::Error { error, .. } => writeln!(out, "{name},error:{error}").unwrap(),
            }
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
        }
    }
}

/// Metric parameters shared by every requested metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    pub k: Option<usize>,
    pub temperature: Option<f64>,
    pub kernel: NeighborhoodKernel,
}

pub fn compute_metric(
    metric: Metric,
    codebook: &CodeBook,
    data: &Dataset,
    params: &MetricParams,
) -> std::result::Result<MetricValue, SomError> {
    let missing = |what: &str| SomError::Domain(format!("{} requires {what}", metric.name()));
    let scalar = match metric {
        Metric::QuantizationError => internal::quantization_error(codebook, data)?,
        Metric::Distortion => {
            let t = params.temperature.ok_or_else(|| missing("a temperature"))?;
            internal::distortion(codebook, data, params.kernel, t)?
        }
        Metric::TopographicError => internal::topographic_error(codebook, data)?,
        Metric::CombinedError => internal::combined_error(codebook, data)?,
        Metric::NeighborhoodPreservation => {
            internal::neighborhood_preservation(codebook, data, params.k.ok_or_else(|| missing("k"))?)?
        }
        Metric::Trustworthiness => internal::trustworthiness(codebook, data, params.k.ok_or_else(|| missing("k"))?)?,
        Metric::TopographicProduct => internal::topographic_product(codebook)?,
        Metric::TopographicFunction => return Ok(internal::topographic_function(codebook, data)?.into()),
        Metric::KruskalShepardError => internal::kruskal_shepard_error(codebook, data)?,
        Metric::CMeasure => internal::c_measure(codebook, data)?,
        Metric::Purity => bmu_purity(codebook, data)?,
        Metric::ClusteringAccuracy => bmu_clustering_accuracy(codebook, data)?,
        Metric::ClassScatterIndex => class_scatter_index(codebook, data)?,
    };
    Ok(MetricValue::Scalar(scalar))
}

/// Loaded and validated inputs.
pub struct Inputs {
    pub codebook: CodeBook,
    pub data: Dataset,
    pub fingerprints: ReportInputs,
}

pub fn load_inputs(config: &EvaluationConfig) -> Result<Inputs> {
    let grid = config.grid()?;
    let protos = read_matrix(&config.codebook)?;
    let samples = read_matrix(&config.data)?;
    if protos.nrows() != grid.len() {
        return Err(CliError::Shape(format!(
            "codebook {} has {} rows but a {}x{} map has {} units",
            config.codebook.display(),
            protos.nrows(),
            config.rows,
            config.cols,
            grid.len()
        )));
    }
    if protos.ncols() != samples.ncols() {
        return Err(CliError::Shape(format!(
            "codebook {} has dimension {} but data {} has dimension {}",
            config.codebook.display(),
            protos.ncols(),
            config.data.display(),
            samples.ncols()
        )));
    }
    let codebook_fp = Fingerprint::of(&protos);
    let data_fp = Fingerprint::of(&samples);
    let codebook = CodeBook::new(protos, grid)?;
    let (data, labels_fp) = match &config.labels {
        Some(path) => {
            let labels = read_labels(path)?;
            if labels.len() != samples.nrows() {
                return Err(CliError::Shape(format!(
                    "labels {} has {} entries but data {} has {} rows",
                    path.display(),
                    labels.len(),
                    config.data.display(),
                    samples.nrows()
                )));
            }
            let fp = LabelFingerprint {
                count: labels.len(),
                classes: labels.iter().max().map_or(0, |m| m + 1),
            };
            (Dataset::with_labels(samples, labels)?, Some(fp))
        }
        None => (Dataset::new(samples)?, None),
    };
    Ok(Inputs {
        codebook,
        data,
        fingerprints: ReportInputs {
            codebook: codebook_fp,
            data: data_fp,
            labels: labels_fp,
        },
    })
}

/// Compute every requested metric. A failing metric becomes an error entry
/// and does not stop the others.
pub fn evaluate(config: &EvaluationConfig) -> Result<MetricReport> {
    config.validate()?;
    let inputs = load_inputs(config)?;
    let params = MetricParams {
        k: config.k,
        temperature: config.temperature,
        kernel: config.kernel,
    };
    let metrics = config
        .metrics
        .iter()
        .map(|&m| {
            let value =
                compute_metric(m, &inputs.codebook, &inputs.data, &params).unwrap_or_else(|e| MetricValue::Error {
                    error: e.kind().to_string(),
                    reason: e.to_string(),
                });
            (m.name().to_string(), value)
        })
        .collect();
    Ok(MetricReport {
        metrics,
        params: ReportParams {
            rows: config.rows,
            cols: config.cols,
            topology: config.topology.to_string(),
            k: config.k,
            temperature: config.temperature,
            kernel: config.kernel.to_string(),
        },
        inputs: inputs.fingerprints,
    })
}

pub fn parse_metric_list(list: &str) -> Result<Vec<Metric>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Metric::from_str)
        .collect()
}
