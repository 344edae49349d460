//! Internal (label-free) quality indices.
//!
//! Clustering indices ([`quantization_error`], [`distortion`]) only look at how
//! well prototypes fit the data. The others are topographic and also use the
//! map lattice: [`topographic_error`], [`combined_error`], [`trustworthiness`],
//! [`neighborhood_preservation`], [`topographic_product`],
//! [`topographic_function`], [`kruskal_shepard_error`] and [`c_measure`].
//!
//! Unless noted otherwise, `d` is the euclidean distance in input space and
//! `δ` the lattice distance of [`MapGrid::distance`](crate::geometry::MapGrid::distance).

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Result, SomError};
use crate::geometry::NeighborhoodKernel;
use crate::model::{connectivity_from, project, squared_distance, squared_distance_rows, CodeBook, Dataset};

fn require_two_units(codebook: &CodeBook, what: &str) -> Result<()> {
    if codebook.units() < 2 {
        return Err(SomError::DegenerateGrid(format!("{what} needs at least two map units")));
    }
    Ok(())
}

/// Mean euclidean distance between each sample and its best-matching prototype.
pub fn quantization_error(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    codebook.check_data(data)?;
    let total: f64 = data
        .samples()
        .rows()
        .into_iter()
        .map(|x| squared_distance(x, codebook.prototype(codebook.bmu(x))).sqrt())
        .sum();
    Ok(total / data.len() as f64)
}

/// Neighborhood-weighted mean squared error, the loss of the SOM algorithm:
/// `(1/N) Σ_i Σ_k K^T(δ(b_i, k)) ‖x_i − m_k‖²`.
pub fn distortion(codebook: &CodeBook, data: &Dataset, kernel: NeighborhoodKernel, temperature: f64) -> Result<f64> {
    kernel.weight(0.0, temperature)?;
    codebook.check_data(data)?;
    let grid = codebook.grid();
    let k = codebook.units();
    // weights depend only on the BMU, so tabulate them per unit
    let mut weights = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..k {
            weights[a * k + b] = kernel.weight_unchecked(grid.distance_unchecked(a, b) as f64, temperature);
        }
    }
    let mut total = 0.0;
    for x in data.samples().rows() {
        let bmu = codebook.bmu(x);
        let row = &weights[bmu * k..(bmu + 1) * k];
        total += codebook
            .prototypes()
            .rows()
            .into_iter()
            .zip(row)
            .filter(|(_, &w)| w != 0.0)
            .map(|(m, &w)| w * squared_distance(x, m))
            .sum::<f64>();
    }
    Ok(total / data.len() as f64)
}

/// Fraction of samples whose first and second best-matching units are not
/// lattice neighbors.
pub fn topographic_error(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    require_two_units(codebook, "topographic error")?;
    let proj = project(codebook, data, 2)?;
    let grid = codebook.grid();
    let errors = (0..proj.len())
        .filter(|&i| grid.distance_unchecked(proj.bmu(i), proj.second_bmu(i)) > 1)
        .count();
    Ok(errors as f64 / data.len() as f64)
}

#[derive(Copy, Clone, PartialEq)]
struct Frontier {
    cost: f64,
    unit: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then_with(|| self.unit.cmp(&other.unit))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cheapest lattice-path cost from `source` to every unit, where stepping
/// between neighboring units `a` and `b` costs `‖m_a − m_b‖²`.
pub fn map_path_costs(codebook: &CodeBook, source: usize) -> Result<Vec<f64>> {
    let grid = codebook.grid();
    grid.position(source)?;
    let mut cost = vec![f64::INFINITY; codebook.units()];
    let mut heap = BinaryHeap::new();
    cost[source] = 0.0;
    heap.push(Reverse(Frontier {
        cost: 0.0,
        unit: source,
    }));
    while let Some(Reverse(Frontier { cost: c, unit })) = heap.pop() {
        if c > cost[unit] {
            continue;
        }
        for next in grid.neighbors_unchecked(unit) {
            let step = squared_distance(codebook.prototype(unit), codebook.prototype(next));
            let candidate = c + step;
            if candidate < cost[next] {
                cost[next] = candidate;
                heap.push(Reverse(Frontier {
                    cost: candidate,
                    unit: next,
                }));
            }
        }
    }
    Ok(cost)
}

/// Mean over samples of `‖x_i − m_{b¹}‖²` plus the cheapest lattice path from
/// `b¹` to `b²` with squared prototype distances as step costs.
pub fn combined_error(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    require_two_units(codebook, "combined error")?;
    let proj = project(codebook, data, 2)?;
    let mut paths: Vec<Option<Vec<f64>>> = vec![None; codebook.units()];
    let mut total = 0.0;
    for (i, x) in data.samples().rows().into_iter().enumerate() {
        let (b1, b2) = (proj.bmu(i), proj.second_bmu(i));
        if paths[b1].is_none() {
            paths[b1] = Some(map_path_costs(codebook, b1)?);
        }
        let path = paths[b1].as_ref().map_or(f64::INFINITY, |p| p[b2]);
        total += squared_distance(x, codebook.prototype(b1)) + path;
    }
    Ok(total / data.len() as f64)
}

/// Largest key among the `k` smallest of `keys[j]`, `j ≠ i`. A sample `j`
/// has min-rank `1 + #{l ≠ i : keys[l] < keys[j]}` at most `k` exactly when
/// its key does not exceed this cut.
fn rank_cut(keys: &[f64], i: usize, k: usize, scratch: &mut Vec<f64>) -> f64 {
    scratch.clear();
    scratch.extend(keys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
    *scratch.select_nth_unstable_by(k - 1, f64::total_cmp).1
}

/// Sum of `rank(j) - k` over `queries`, with `rank(j)` the min-rank of `j`
/// among `l ≠ i` under `keys`.
fn excess_rank(keys: &[f64], i: usize, k: usize, queries: &[usize], sorted: &mut Vec<f64>) -> usize {
    if queries.is_empty() {
        return 0;
    }
    sorted.clear();
    sorted.extend(queries.iter().map(|&j| keys[j]));
    sorted.sort_unstable_by(f64::total_cmp);
    // below[s] = #{l ≠ i : keys[l] < sorted[s]}, accumulated from the
    // position of each key among the queries
    let mut below = vec![0usize; sorted.len() + 1];
    for (l, key) in keys.iter().enumerate() {
        if l != i {
            below[sorted.partition_point(|q| q.total_cmp(key).is_le())] += 1;
        }
    }
    let mut strictly_less = 0;
    let mut total = 0;
    for count in &below[..sorted.len()] {
        strictly_less += count;
        total += strictly_less + 1 - k;
    }
    total
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Penalized {
    /// Map neighbors that are not input neighbors (trustworthiness).
    MapIntruders,
    /// Input neighbors that are not map neighbors (neighborhood preservation).
    InputEscapees,
}

fn rank_preservation(codebook: &CodeBook, data: &Dataset, k: usize, which: Penalized) -> Result<f64> {
    codebook.check_data(data)?;
    let n = data.len();
    if n < 3 || k == 0 || 2 * k >= n {
        return Err(SomError::Domain(format!(
            "neighborhood size k must satisfy 1 <= k < N/2 (N = {n}), got {k}"
        )));
    }
    let grid = codebook.grid();
    let bmus = project(codebook, data, 1)?.bmus();

    let mut input_keys = vec![0.0; n];
    let mut map_keys = vec![0.0; n];
    let mut scratch = Vec::with_capacity(n);
    let mut penalized = Vec::new();
    let units = grid.len();
    let table = grid.distance_table();

    let mut total = 0.0;
    for i in 0..n {
        let xi = data.row(i);
        for j in 0..n {
            input_keys[j] = squared_distance_rows(xi, data.row(j));
            map_keys[j] = table[bmus[i] * units + bmus[j]] as f64;
        }
        // tie-expanded neighbor sets: all j ≠ i with min-rank <= k
        let input_cut = rank_cut(&input_keys, i, k, &mut scratch);
        let map_cut = rank_cut(&map_keys, i, k, &mut scratch);
        let in_input = |j: usize| j != i && input_keys[j].total_cmp(&input_cut).is_le();
        let in_map = |j: usize| j != i && map_keys[j].total_cmp(&map_cut).is_le();
        let input_size = (0..n).filter(|&j| in_input(j)).count();
        let map_size = (0..n).filter(|&j| in_map(j)).count();

        penalized.clear();
        let (penalty, weight) = match which {
            Penalized::MapIntruders => {
                penalized.extend((0..n).filter(|&j| in_map(j) && !in_input(j)));
                let p = excess_rank(&input_keys, i, k, &penalized, &mut scratch);
                (p, input_size as f64 / map_size as f64)
            }
            Penalized::InputEscapees => {
                penalized.extend((0..n).filter(|&j| in_input(j) && !in_map(j)));
                let p = excess_rank(&map_keys, i, k, &penalized, &mut scratch);
                (p, map_size as f64 / input_size as f64)
            }
        };
        total += weight * penalty as f64;
    }
    let (n, k) = (n as f64, k as f64);
    Ok(1.0 - 2.0 / (n * k * (2.0 * n - 3.0 * k - 1.0)) * total)
}

/// Trustworthiness of the projection for neighborhood size `k`.
///
/// Penalizes samples that appear among the `k` nearest on the map but not
/// in input space, by how far down the input-space ranking they are. Map
/// neighbor sets include every sample tied at the cut, and each sample's
/// penalty is scaled by `|input neighbors| / |map neighbors|`. With ties the
/// value can leave `[0, 1]` slightly; it is not clamped.
pub fn trustworthiness(codebook: &CodeBook, data: &Dataset, k: usize) -> Result<f64> {
    rank_preservation(codebook, data, k, Penalized::MapIntruders)
}

/// Neighborhood preservation (continuity) for neighborhood size `k`.
///
/// Mirror image of [`trustworthiness`]: penalizes input-space neighbors that
/// the map places outside the (tie-expanded) map neighborhood, using map
/// min-ranks, with the per-sample weight `|map neighbors| / |input neighbors|`.
pub fn neighborhood_preservation(codebook: &CodeBook, data: &Dataset, k: usize) -> Result<f64> {
    rank_preservation(codebook, data, k, Penalized::InputEscapees)
}

/// Topographic product of a codebook.
///
/// Negative values suggest the lattice has too few dimensions for the data,
/// positive values too many. Neighbor orderings break ties by the lowest unit
/// index. Coinciding prototypes make the product undefined and are rejected.
pub fn topographic_product(codebook: &CodeBook) -> Result<f64> {
    require_two_units(codebook, "topographic product")?;
    let k = codebook.units();
    let grid = codebook.grid();

    let mut input = vec![0.0; k * k];
    for a in 0..k {
        for b in a + 1..k {
            let d = squared_distance(codebook.prototype(a), codebook.prototype(b)).sqrt();
            if d == 0.0 {
                return Err(SomError::DegenerateCodebook(format!(
                    "prototypes of units {a} and {b} coincide"
                )));
            }
            input[a * k + b] = d;
            input[b * k + a] = d;
        }
    }
    let lattice = grid.distance_table();

    let mut by_map: Vec<usize> = Vec::with_capacity(k - 1);
    let mut by_input: Vec<usize> = Vec::with_capacity(k - 1);
    let mut total = 0.0;
    for j in 0..k {
        by_map.clear();
        by_map.extend((0..k).filter(|&u| u != j));
        by_input.clone_from(&by_map);
        by_map.sort_by_key(|&u| (lattice[j * k + u], u));
        by_input.sort_by(|&a, &b| input[j * k + a].total_cmp(&input[j * k + b]).then(a.cmp(&b)));

        let mut log_sum = 0.0;
        for (order, (&nm, &ni)) in by_map.iter().zip(&by_input).enumerate() {
            let q1 = input[j * k + nm] / input[j * k + ni];
            let q2 = lattice[j * k + nm] as f64 / lattice[j * k + ni] as f64;
            log_sum += q1.ln() + q2.ln();
            total += log_sum / (2.0 * (order + 1) as f64);
        }
    }
    Ok(total / (k * (k - 1)) as f64)
}

/// Topographic function values for `k = 1..=δ_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TopographicFunction {
    /// Arguments `1..=δ_max`.
    pub k: Vec<usize>,
    /// `TF(k)`, the number of ordered unit pairs with adjacent receptive
    /// fields lying farther than `k` apart on the map.
    pub values: Vec<usize>,
    /// `k / δ_max`.
    pub k_normalized: Vec<f64>,
    /// `TF(k) / (K (K − 3^p))`, absent when `K ≤ 3^p` makes the factor
    /// non-positive.
    pub values_normalized: Option<Vec<f64>>,
    /// Counts of connected ordered pairs by map distance, index = distance.
    pair_distances: Vec<usize>,
}

impl TopographicFunction {
    /// `TF(k)` for an arbitrary nonnegative `k`.
    pub fn at(&self, k: usize) -> usize {
        self.pair_distances.iter().skip(k + 1).sum()
    }
}

/// Topographic function, with receptive-field adjacency estimated from
/// first/second best-matching unit pairs.
pub fn topographic_function(codebook: &CodeBook, data: &Dataset) -> Result<TopographicFunction> {
    require_two_units(codebook, "topographic function")?;
    let grid = codebook.grid();
    let units = codebook.units();
    let max = grid.max_distance()?;
    let proj = project(codebook, data, 2)?;
    let conn = connectivity_from(&proj, units);

    let mut pair_distances = vec![0usize; max + 1];
    for (a, b) in conn.pairs() {
        pair_distances[grid.distance_unchecked(a, b)] += 2;
    }

    let ks: Vec<usize> = (1..=max).collect();
    let mut values = Vec::with_capacity(max);
    let mut beyond: usize = pair_distances.iter().skip(2).sum();
    for &k in &ks {
        values.push(beyond);
        if k < max {
            beyond -= pair_distances[k + 1];
        }
    }
    let scale = units as f64 * (units as f64 - 3f64.powi(grid.dimensionality() as i32));
    let values_normalized = (scale > 0.0).then(|| values.iter().map(|&v| v as f64 / scale).collect());
    Ok(TopographicFunction {
        k_normalized: ks.iter().map(|&k| k as f64 / max as f64).collect(),
        k: ks,
        values,
        values_normalized,
        pair_distances,
    })
}

/// Normalized squared Frobenius distance between the input-space squared
/// distance matrix and the map distance matrix of the samples' BMUs, each
/// scaled to `[0, 1]`, divided by `N(N − 1)`.
pub fn kruskal_shepard_error(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    require_two_units(codebook, "Kruskal-Shepard error")?;
    codebook.check_data(data)?;
    let n = data.len();
    if n < 2 {
        return Err(SomError::DegenerateData(
            "Kruskal-Shepard error needs at least two samples".into(),
        ));
    }
    let grid = codebook.grid();
    let map_max = grid.max_distance()? as f64;
    let bmus = project(codebook, data, 1)?.bmus();

    let mut input_max: f64 = 0.0;
    for i in 0..n {
        for j in 0..i {
            input_max = input_max.max(squared_distance_rows(data.row(i), data.row(j)));
        }
    }
    if input_max == 0.0 {
        return Err(SomError::DegenerateData("all samples are identical".into()));
    }

    let units = grid.len();
    let table = grid.distance_table();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..i {
            let dx = squared_distance_rows(data.row(i), data.row(j)) / input_max;
            let dm = table[bmus[i] * units + bmus[j]] as f64 / map_max;
            total += (dx - dm) * (dx - dm);
        }
    }
    Ok(2.0 * total / (n * (n - 1)) as f64)
}

/// `Σ_{j<i} d(x_i, x_j) · δ(b_i, b_j)`; larger is better.
pub fn c_measure(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    codebook.check_data(data)?;
    let grid = codebook.grid();
    let bmus = project(codebook, data, 1)?.bmus();
    let units = grid.len();
    let table = grid.distance_table();
    let mut total = 0.0;
    for i in 0..data.len() {
        for j in 0..i {
            let delta = table[bmus[i] * units + bmus[j]];
            if delta > 0 {
                total += squared_distance_rows(data.row(i), data.row(j)).sqrt() * delta as f64;
            }
        }
    }
    Ok(total)
}
