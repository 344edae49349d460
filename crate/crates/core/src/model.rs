//! Codebooks, datasets, best-matching-unit rankings and the reference
//! stochastic trainer.

use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SomError};
use crate::geometry::{MapGrid, NeighborhoodKernel};

pub(crate) fn squared_distance(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Same sum as [`squared_distance`], on contiguous rows.
pub(crate) fn squared_distance_rows(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_finite(matrix: &ArrayView2<f64>, what: &str) -> Result<()> {
    if let Some(((r, c), v)) = matrix.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(SomError::Domain(format!("{what} entry ({r}, {c}) is not finite: {v}")));
    }
    Ok(())
}

/// Prototype vectors, one row per map unit in row-major unit order.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeBook {
    prototypes: Array2<f64>,
    grid: MapGrid,
}

impl CodeBook {
    pub fn new(prototypes: Array2<f64>, grid: MapGrid) -> Result<Self> {
        if prototypes.nrows() != grid.len() {
            return Err(SomError::Shape {
                left: format!("codebook with {} rows", prototypes.nrows()),
                right: format!("{}x{} map with {} units", grid.rows(), grid.cols(), grid.len()),
            });
        }
        if prototypes.ncols() == 0 {
            return Err(SomError::Domain("prototypes must have at least one dimension".into()));
        }
        check_finite(&prototypes.view(), "prototype")?;
        Ok(CodeBook { prototypes, grid })
    }

    pub fn prototypes(&self) -> &Array2<f64> {
        &self.prototypes
    }

    pub fn grid(&self) -> &MapGrid {
        &self.grid
    }

    pub fn units(&self) -> usize {
        self.prototypes.nrows()
    }

    pub fn dim(&self) -> usize {
        self.prototypes.ncols()
    }

    pub fn prototype(&self, unit: usize) -> ArrayView1<'_, f64> {
        self.prototypes.row(unit)
    }

    pub fn into_prototypes(self) -> Array2<f64> {
        self.prototypes
    }

    pub(crate) fn check_data(&self, data: &Dataset) -> Result<()> {
        if data.dim() != self.dim() {
            return Err(SomError::Shape {
                left: format!("data dimension {}", data.dim()),
                right: format!("codebook dimension {}", self.dim()),
            });
        }
        Ok(())
    }

    /// Index of the unit closest to `x`; ties go to the lowest index.
    pub fn bmu(&self, x: ArrayView1<f64>) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (k, m) in self.prototypes.rows().into_iter().enumerate() {
            let d = squared_distance(x, m);
            if d < best_d {
                best_d = d;
                best = k;
            }
        }
        best
    }
}

/// Samples (one per row) and optional integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Array2<f64>,
    labels: Option<Vec<usize>>,
}

impl Dataset {
    pub fn new(samples: Array2<f64>) -> Result<Self> {
        if samples.nrows() == 0 {
            return Err(SomError::Domain("dataset must contain at least one sample".into()));
        }
        if samples.ncols() == 0 {
            return Err(SomError::Domain("samples must have at least one dimension".into()));
        }
        check_finite(&samples.view(), "sample")?;
        let samples = if samples.is_standard_layout() {
            samples
        } else {
            samples.as_standard_layout().into_owned()
        };
        Ok(Dataset { samples, labels: None })
    }

    pub fn with_labels(samples: Array2<f64>, labels: Vec<usize>) -> Result<Self> {
        let mut data = Self::new(samples)?;
        if labels.len() != data.len() {
            return Err(SomError::LengthMismatch {
                what: "labels",
                left: labels.len(),
                right: data.len(),
            });
        }
        data.labels = Some(labels);
        Ok(data)
    }

    pub fn samples(&self) -> &Array2<f64> {
        &self.samples
    }

    pub fn sample(&self, i: usize) -> ArrayView1<'_, f64> {
        self.samples.row(i)
    }

    /// Sample `i` as a slice; rows are stored contiguously.
    pub(crate) fn row(&self, i: usize) -> &[f64] {
        let d = self.samples.ncols();
        &self.samples.as_slice().expect("standard layout")[i * d..(i + 1) * d]
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Number of classes `C = 1 + max label`, if labels are present.
    pub fn classes(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| l.iter().max().map_or(0, |m| m + 1))
    }

    pub fn len(&self) -> usize {
        self.samples.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.samples.ncols()
    }
}

/// Per-sample ranking of units by ascending squared distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionIndex {
    depth: usize,
    ranks: Vec<usize>,
}

impl ProjectionIndex {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.ranks.len() / self.depth
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Units ranked for sample `i`, best first.
    pub fn ranking(&self, i: usize) -> &[usize] {
        &self.ranks[i * self.depth..(i + 1) * self.depth]
    }

    /// Best-matching unit of sample `i`.
    pub fn bmu(&self, i: usize) -> usize {
        self.ranks[i * self.depth]
    }

    /// Second best-matching unit of sample `i`; requires `depth >= 2`.
    pub fn second_bmu(&self, i: usize) -> usize {
        assert!(self.depth >= 2, "projection was computed with depth 1");
        self.ranks[i * self.depth + 1]
    }

    pub fn bmus(&self) -> Vec<usize> {
        self.ranks.iter().step_by(self.depth).copied().collect()
    }
}

/// Rank the units for each sample, truncated to `depth`.
pub fn project(codebook: &CodeBook, data: &Dataset, depth: usize) -> Result<ProjectionIndex> {
    codebook.check_data(data)?;
    let k = codebook.units();
    if depth == 0 || depth > k {
        return Err(SomError::Domain(format!(
            "projection depth must lie in 1..={k}, got {depth}"
        )));
    }
    let mut ranks = Vec::with_capacity(data.len() * depth);
    let mut dists: Vec<(f64, usize)> = Vec::with_capacity(k);
    for x in data.samples().rows() {
        if depth == 1 {
            ranks.push(codebook.bmu(x));
            continue;
        }
        dists.clear();
        dists.extend(
            codebook
                .prototypes()
                .rows()
                .into_iter()
                .enumerate()
                .map(|(u, m)| (squared_distance(x, m), u)),
        );
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if depth < k {
            dists.select_nth_unstable_by(depth - 1, cmp);
            dists.truncate(depth);
        }
        dists.sort_unstable_by(cmp);
        ranks.extend(dists.iter().map(|&(_, u)| u));
    }
    Ok(ProjectionIndex { depth, ranks })
}

/// Symmetric `K x K` adjacency of receptive fields, estimated from pairs of
/// first and second best-matching units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connectivity {
    units: usize,
    adjacent: Vec<bool>,
}

impl Connectivity {
    pub fn units(&self) -> usize {
        self.units
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.adjacent[a * self.units + b]
    }

    /// All connected pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let k = self.units;
        (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .filter(|&(a, b)| self.get(a, b))
            .collect()
    }
}

pub fn receptive_field_connectivity(codebook: &CodeBook, data: &Dataset) -> Result<Connectivity> {
    let k = codebook.units();
    if k < 2 {
        return Err(SomError::DegenerateGrid(
            "receptive-field connectivity needs at least two units".into(),
        ));
    }
    let proj = project(codebook, data, 2)?;
    Ok(connectivity_from(&proj, k))
}

pub(crate) fn connectivity_from(proj: &ProjectionIndex, units: usize) -> Connectivity {
    let mut adjacent = vec![false; units * units];
    for i in 0..proj.len() {
        let (a, b) = (proj.bmu(i), proj.second_bmu(i));
        adjacent[a * units + b] = true;
        adjacent[b * units + a] = true;
    }
    Connectivity { units, adjacent }
}

/// Parameters of the stochastic trainer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainerConfig {
    pub grid: MapGrid,
    pub t_max: f64,
    pub t_min: f64,
    pub iterations: usize,
    /// Learning rate at the start of the schedule.
    pub learning_rate: f64,
    /// Learning rate reached at the last step; equal to `learning_rate` for a
    /// constant rate.
    pub learning_rate_final: f64,
    pub seed: u64,
    pub kernel: NeighborhoodKernel,
}

impl TrainerConfig {
    /// Gaussian kernel, temperature from half the larger map side down to
    /// 0.1, learning rate from 0.5 down to 0.005 over 20000 steps.
    pub fn new(grid: MapGrid) -> Self {
        TrainerConfig {
            grid,
            t_max: (grid.rows().max(grid.cols()) as f64 / 2.0).max(1.0),
            t_min: 0.1,
            iterations: 20_000,
            learning_rate: 0.5,
            learning_rate_final: 0.005,
            seed: 0,
            kernel: NeighborhoodKernel::Gaussian,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_min.is_nan() || self.t_min <= 0.0 || !self.t_max.is_finite() || self.t_max < self.t_min {
            return Err(SomError::Domain(format!(
                "temperatures must satisfy t_max >= t_min > 0, got t_max={} t_min={}",
                self.t_max, self.t_min
            )));
        }
        for rate in [self.learning_rate, self.learning_rate_final] {
            if !rate.is_finite() || rate <= 0.0 {
                return Err(SomError::Domain(format!("learning rates must be positive, got {rate}")));
            }
        }
        if self.iterations == 0 {
            return Err(SomError::Domain("iterations must be at least 1".into()));
        }
        Ok(())
    }

    /// Temperature at step `n` (1-based): `t_max * (t_min / t_max)^(n / iterations)`.
    pub fn temperature(&self, step: usize) -> f64 {
        self.t_max * (self.t_min / self.t_max).powf(step as f64 / self.iterations as f64)
    }

    /// Learning rate at step `n`, decaying geometrically like the temperature.
    pub fn learning_rate_at(&self, step: usize) -> f64 {
        if self.learning_rate_final == self.learning_rate {
            return self.learning_rate;
        }
        self.learning_rate * (self.learning_rate_final / self.learning_rate).powf(step as f64 / self.iterations as f64)
    }
}

/// Pick `K` data rows as initial prototypes: without replacement when the
/// dataset is large enough, with replacement otherwise.
pub fn init_codebook(data: &Dataset, grid: MapGrid, seed: u64) -> Result<CodeBook> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    init_with(data, grid, &mut rng)
}

fn init_with(data: &Dataset, grid: MapGrid, rng: &mut ChaCha8Rng) -> Result<CodeBook> {
    let n = data.len();
    let k = grid.len();
    let rows: Vec<usize> = if n >= k {
        index::sample(rng, n, k).into_vec()
    } else {
        (0..k).map(|_| rng.gen_range(0..n)).collect()
    };
    let mut prototypes = Array2::zeros((k, data.dim()));
    for (unit, &row) in rows.iter().enumerate() {
        prototypes.row_mut(unit).assign(&data.sample(row));
    }
    CodeBook::new(prototypes, grid)
}

/// Initialize from the data and run the stochastic algorithm for
/// `config.iterations` steps.
pub fn train_som(data: &Dataset, config: &TrainerConfig) -> Result<CodeBook> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut codebook = init_with(data, config.grid, &mut rng)?;
    run_training(&mut codebook, data, config, config.iterations, &mut rng)?;
    Ok(codebook)
}

/// Same as [`train_som`] but stops after `steps` of the `config.iterations`
/// schedule. Used to produce partially organized maps.
pub fn train_som_truncated(data: &Dataset, config: &TrainerConfig, steps: usize) -> Result<CodeBook> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut codebook = init_with(data, config.grid, &mut rng)?;
    run_training(&mut codebook, data, config, steps.min(config.iterations), &mut rng)?;
    Ok(codebook)
}

/// Continue training an existing codebook.
pub fn train_from(codebook: &mut CodeBook, data: &Dataset, config: &TrainerConfig) -> Result<()> {
    config.validate()?;
    if codebook.grid() != &config.grid {
        return Err(SomError::Shape {
            left: format!("codebook grid {:?}", codebook.grid()),
            right: format!("trainer grid {:?}", config.grid),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    run_training(codebook, data, config, config.iterations, &mut rng)
}

fn run_training(
    codebook: &mut CodeBook,
    data: &Dataset,
    config: &TrainerConfig,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    codebook.check_data(data)?;
    let grid = *codebook.grid();
    let k = grid.len();
    let mut weights = vec![0.0; k];
    for step in 1..=steps {
        let temperature = config.temperature(step);
        let rate = config.learning_rate_at(step);
        let i = rng.gen_range(0..data.len());
        let x = data.sample(i);
        let bmu = codebook.bmu(x);
        for (unit, w) in weights.iter_mut().enumerate() {
            let d = grid.distance_unchecked(bmu, unit) as f64;
            *w = rate * config.kernel.weight_unchecked(d, temperature);
        }
        for (mut m, &w) in codebook.prototypes.rows_mut().into_iter().zip(&weights) {
            if w == 0.0 {
                continue;
            }
            m.zip_mut_with(&x, |mk, &xi| *mk += w * (xi - *mk));
        }
    }
    Ok(())
}
