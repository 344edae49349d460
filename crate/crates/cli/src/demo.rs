//! Reproducible demonstration experiments.
//!
//! - `square`: three 10×10 maps on the unit square at decreasing levels of
//!   organization, compared by TE, CE, KSE and C.
//! - `tf1d`: a 1×20 chain on the unit square and its topographic function.
//! - `stripe`: three hand-built chains on a 10×2 stripe (zig-zag, mild
//!   zig-zag, straight line) compared by QE, TE and CE.
//!
//! Every file written depends only on the seed.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use somqual::internal::{
    c_measure, combined_error, kruskal_shepard_error, quantization_error, topographic_error, topographic_function,
};
use somqual::model::train_som;
use somqual::{CodeBook, Dataset, MapGrid, TrainerConfig};

use crate::error::{CliError, Result};
use crate::io::write_matrix;
use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Square,
    Tf1d,
    Stripe,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Square => "square",
            Experiment::Tf1d => "tf1d",
            Experiment::Stripe => "stripe",
        })
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Experiment::Square),
            "tf1d" => Ok(Experiment::Tf1d),
            "stripe" => Ok(Experiment::Stripe),
            other => Err(CliError::Config(format!(
                "unknown experiment '{other}', expected square, tf1d or stripe"
            ))),
        }
    }
}

pub const SQUARE_SAMPLES: usize = 5000;
pub const SQUARE_SIDE: usize = 10;
pub const CHAIN_LENGTH: usize = 20;
pub const STRIPE_WIDTH: f64 = 10.0;
pub const STRIPE_HEIGHT: f64 = 2.0;
pub const STRIPE_SAMPLES: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct SquareRow {
    pub map: &'static str,
    pub topographic_error: f64,
    pub combined_error: f64,
    pub kruskal_shepard_error: f64,
    pub c_measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tf1dOutcome {
    /// `(k, TF(k))` for `k = 1..=L`.
    pub series: Vec<(usize, usize)>,
    /// `(k / δ_max, TF(k) / (K (K − 3)))` for the same arguments.
    pub normalized: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripeRow {
    pub solution: &'static str,
    pub quantization_error: f64,
    pub topographic_error: f64,
    pub combined_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DemoOutcome {
    Square(Vec<SquareRow>),
    Tf1d(Tf1dOutcome),
    Stripe(Vec<StripeRow>),
}

pub fn run(experiment: Experiment, outdir: &Path, seed: u64) -> Result<DemoOutcome> {
    fs::create_dir_all(outdir).map_err(|e| CliError::io(outdir, e))?;
    match experiment {
        Experiment::Square => square(outdir, seed).map(DemoOutcome::Square),
        Experiment::Tf1d => tf1d(outdir, seed).map(DemoOutcome::Tf1d),
        Experiment::Stripe => stripe(outdir, seed).map(DemoOutcome::Stripe),
    }
}

fn uniform(rng: &mut ChaCha8Rng, n: usize, width: f64, height: f64) -> Array2<f64> {
    let mut data = Array2::zeros((n, 2));
    for mut row in data.rows_mut() {
        row[0] = rng.gen_range(0.0..width);
        row[1] = rng.gen_range(0.0..height);
    }
    data
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| CliError::io(path, std::io::Error::other(e));
    writer.write_record(header).map_err(to_err)?;
    for row in rows {
        writer.write_record(row).map_err(to_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::io(path, e.into_error()))?;
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn write_map(outdir: &Path, name: &str, data: &Array2<f64>, codebook: &CodeBook, title: &str) -> Result<()> {
    write_matrix(&outdir.join(format!("codebook_{name}.csv")), codebook.prototypes())?;
    write_text(
        &outdir.join(format!("map_{name}.svg")),
        &svg::map_figure(data, codebook, title),
    )
}

/// Ordered: full schedule from T = 10. Medium: the same run started from
/// T = 1, which organizes only locally. Disordered: the ordered prototypes
/// assigned to a random permutation of units.
pub fn square_maps(seed: u64) -> Result<(Dataset, Vec<(&'static str, CodeBook)>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = Dataset::new(uniform(&mut rng, SQUARE_SAMPLES, 1.0, 1.0))?;
    let grid = MapGrid::rectangular(SQUARE_SIDE, SQUARE_SIDE)?;
    let ordered_cfg = TrainerConfig {
        t_max: 10.0,
        seed,
        ..TrainerConfig::new(grid)
    };
    let ordered = train_som(&data, &ordered_cfg)?;
    let medium = train_som(
        &data,
        &TrainerConfig {
            t_max: 1.0,
            ..ordered_cfg
        },
    )?;
    let mut perm: Vec<usize> = (0..grid.len()).collect();
    perm.shuffle(&mut rng);
    let disordered = CodeBook::new(ordered.prototypes().select(Axis(0), &perm), grid)?;
    Ok((
        data,
        vec![("ordered", ordered), ("medium", medium), ("disordered", disordered)],
    ))
}

fn square(outdir: &Path, seed: u64) -> Result<Vec<SquareRow>> {
    let (data, maps) = square_maps(seed)?;
    write_matrix(&outdir.join("data.csv"), data.samples())?;
    let mut rows = Vec::new();
    for (name, codebook) in &maps {
        let row = SquareRow {
            map: name,
            topographic_error: topographic_error(codebook, &data)?,
            combined_error: combined_error(codebook, &data)?,
            kruskal_shepard_error: kruskal_shepard_error(codebook, &data)?,
            c_measure: c_measure(codebook, &data)?,
        };
        let title = format!("{name}: TE {:.3}, CE {:.3}", row.topographic_error, row.combined_error);
        write_map(outdir, name, data.samples(), codebook, &title)?;
        rows.push(row);
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.map.to_string(),
                r.topographic_error.to_string(),
                r.combined_error.to_string(),
                r.kruskal_shepard_error.to_string(),
                r.c_measure.to_string(),
            ]
        })
        .collect();
    write_table(
        &outdir.join("metrics.csv"),
        &[
            "map",
            "topographic_error",
            "combined_error",
            "kruskal_shepard_error",
            "c_measure",
        ],
        &table,
    )?;
    Ok(rows)
}

fn tf1d(outdir: &Path, seed: u64) -> Result<Tf1dOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = Dataset::new(uniform(&mut rng, SQUARE_SAMPLES, 1.0, 1.0))?;
    let grid = MapGrid::rectangular(1, CHAIN_LENGTH)?;
    let config = TrainerConfig {
        t_max: CHAIN_LENGTH as f64 / 2.0,
        seed,
        ..TrainerConfig::new(grid)
    };
    let codebook = train_som(&data, &config)?;
    let tf = topographic_function(&codebook, &data)?;
    let max = grid.max_distance()? as f64;
    let units = grid.len() as f64;
    let scale = units * (units - 3.0);

    let series: Vec<(usize, usize)> = (1..=CHAIN_LENGTH).map(|k| (k, tf.at(k))).collect();
    let normalized: Vec<(f64, f64)> = series
        .iter()
        .map(|&(k, v)| (k as f64 / max, v as f64 / scale))
        .collect();

    write_matrix(&outdir.join("data.csv"), data.samples())?;
    write_map(outdir, "chain", data.samples(), &codebook, "1x20 chain")?;
    let table: Vec<Vec<String>> = series
        .iter()
        .zip(&normalized)
        .map(|(&(k, v), &(kn, vn))| vec![k.to_string(), v.to_string(), kn.to_string(), vn.to_string()])
        .collect();
    write_table(
        &outdir.join("tf.csv"),
        &["k", "tf", "k_normalized", "tf_normalized"],
        &table,
    )?;
    let points: Vec<(f64, f64)> = series.iter().map(|&(k, v)| (k as f64, v as f64)).collect();
    write_text(
        &outdir.join("tf.svg"),
        &svg::line_chart(&points, "topographic function", "k", "TF(k)"),
    )?;
    let points: Vec<(f64, f64)> = normalized.clone();
    write_text(
        &outdir.join("tf_normalized.svg"),
        &svg::line_chart(
            &points,
            "normalized topographic function",
            "k / max distance",
            "TF / K(K-3)",
        ),
    )?;
    Ok(Tf1dOutcome { series, normalized })
}

/// Chain of `CHAIN_LENGTH` prototypes spaced evenly along the stripe, with
/// vertical offsets alternating between `+amplitude` and `-amplitude`
/// around the midline.
pub fn stripe_codebook(amplitude: f64) -> Result<CodeBook> {
    let grid = MapGrid::rectangular(1, CHAIN_LENGTH)?;
    let step = STRIPE_WIDTH / CHAIN_LENGTH as f64;
    let prototypes = Array2::from_shape_fn((CHAIN_LENGTH, 2), |(i, j)| {
        if j == 0 {
            (i as f64 + 0.5) * step
        } else {
            let sign = if i % 2 == 0 { -1.0 } else { 1.0 };
            STRIPE_HEIGHT / 2.0 + sign * amplitude
        }
    });
    Ok(CodeBook::new(prototypes, grid)?)
}

pub const STRIPE_SOLUTIONS: [(&str, f64); 3] = [("zigzag", 0.5), ("moderate", 0.25), ("straight", 0.0)];

fn stripe(outdir: &Path, seed: u64) -> Result<Vec<StripeRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = Dataset::new(uniform(&mut rng, STRIPE_SAMPLES, STRIPE_WIDTH, STRIPE_HEIGHT))?;
    write_matrix(&outdir.join("data.csv"), data.samples())?;
    let mut rows = Vec::new();
    for (name, amplitude) in STRIPE_SOLUTIONS {
        let codebook = stripe_codebook(amplitude)?;
        let row = StripeRow {
            solution: name,
            quantization_error: quantization_error(&codebook, &data)?,
            topographic_error: topographic_error(&codebook, &data)?,
            combined_error: combined_error(&codebook, &data)?,
        };
        let title = format!(
            "{name}: QE {:.3}, TE {:.3}, CE {:.3}",
            row.quantization_error, row.topographic_error, row.combined_error
        );
        write_map(outdir, name, data.samples(), &codebook, &title)?;
        rows.push(row);
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.solution.to_string(),
                r.quantization_error.to_string(),
                r.topographic_error.to_string(),
                r.combined_error.to_string(),
            ]
        })
        .collect();
    write_table(
        &outdir.join("metrics.csv"),
        &["solution", "quantization_error", "topographic_error", "combined_error"],
        &table,
    )?;
    Ok(rows)
}
