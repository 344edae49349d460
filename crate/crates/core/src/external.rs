//! External (label-based) quality indices.

use std::collections::VecDeque;

use crate::assignment::max_weight_assignment;
use crate::error::{Result, SomError};
use crate::geometry::MapGrid;
use crate::model::{project, CodeBook, Dataset};

/// Cluster-by-class co-occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    clusters: usize,
    classes: usize,
    counts: Vec<u64>,
}

impl ContingencyTable {
    /// Build from per-sample cluster ids and class ids. The table has
    /// `1 + max id` rows and columns.
    pub fn new(assignments: &[usize], labels: &[usize]) -> Result<Self> {
        if assignments.len() != labels.len() {
            return Err(SomError::LengthMismatch {
                what: "labels",
                left: labels.len(),
                right: assignments.len(),
            });
        }
        let clusters = assignments.iter().max().map_or(0, |m| m + 1);
        let classes = labels.iter().max().map_or(0, |m| m + 1);
        Self::with_size(assignments, labels, clusters, classes)
    }

    /// Same as [`ContingencyTable::new`] with explicit table dimensions.
    pub fn with_size(assignments: &[usize], labels: &[usize], clusters: usize, classes: usize) -> Result<Self> {
        if assignments.len() != labels.len() {
            return Err(SomError::LengthMismatch {
                what: "labels",
                left: labels.len(),
                right: assignments.len(),
            });
        }
        let mut counts = vec![0; clusters * classes];
        for (&q, &y) in assignments.iter().zip(labels) {
            if q >= clusters || y >= classes {
                return Err(SomError::Domain(format!(
                    "pair (cluster {q}, class {y}) outside a {clusters}x{classes} table"
                )));
            }
            counts[q * classes + y] += 1;
        }
        Ok(ContingencyTable {
            clusters,
            classes,
            counts,
        })
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, cluster: usize, class: usize) -> u64 {
        self.counts[cluster * self.classes + class]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row(&self, cluster: usize) -> &[u64] {
        &self.counts[cluster * self.classes..(cluster + 1) * self.classes]
    }

    /// Square copy of the table padded with zero rows or columns.
    pub fn padded_square(&self) -> Vec<Vec<u64>> {
        let n = self.clusters.max(self.classes);
        (0..n)
            .map(|q| {
                (0..n)
                    .map(|y| {
                        if q < self.clusters && y < self.classes {
                            self.get(q, y)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn require_samples(n: usize) -> Result<()> {
    if n == 0 {
        return Err(SomError::Domain("at least one sample is required".into()));
    }
    Ok(())
}

/// Share of samples belonging to the majority class of their cluster.
pub fn purity(assignments: &[usize], labels: &[usize]) -> Result<f64> {
    let table = ContingencyTable::new(assignments, labels)?;
    require_samples(assignments.len())?;
    let majority: u64 = (0..table.clusters())
        .map(|q| table.row(q).iter().copied().max().unwrap_or(0))
        .sum();
    Ok(majority as f64 / assignments.len() as f64)
}

/// Accuracy under the best one-to-one mapping between cluster and class ids.
///
/// When the number of clusters and classes differ, the contingency table is
/// zero-padded to a square before solving the assignment, so surplus clusters
/// or classes are simply left unmatched.
pub fn clustering_accuracy(assignments: &[usize], labels: &[usize]) -> Result<f64> {
    let table = ContingencyTable::new(assignments, labels)?;
    require_samples(assignments.len())?;
    let (matched, _) = max_weight_assignment(&table.padded_square());
    Ok(matched as f64 / assignments.len() as f64)
}

/// Number of groups of lattice-connected units among `marked`.
pub fn count_groups(grid: &MapGrid, marked: &[bool]) -> usize {
    let mut seen = vec![false; grid.len()];
    let mut queue = VecDeque::new();
    let mut groups = 0;
    for start in 0..grid.len() {
        if !marked[start] || seen[start] {
            continue;
        }
        groups += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in grid.neighbors_unchecked(u) {
                if marked[v] && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    groups
}

/// Per-class group counts: `None` for classes without samples.
pub fn class_groups(grid: &MapGrid, bmus: &[usize], labels: &[usize]) -> Result<Vec<Option<usize>>> {
    if bmus.len() != labels.len() {
        return Err(SomError::LengthMismatch {
            what: "labels",
            left: labels.len(),
            right: bmus.len(),
        });
    }
    let k = grid.len();
    if let Some(&bad) = bmus.iter().find(|&&b| b >= k) {
        return Err(SomError::IndexOutOfRange { index: bad, units: k });
    }
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let mut marked = vec![vec![false; k]; classes];
    for (&b, &y) in bmus.iter().zip(labels) {
        marked[y][b] = true;
    }
    Ok(marked
        .iter()
        .map(|m| m.iter().any(|&x| x).then(|| count_groups(grid, m)))
        .collect())
}

/// Class scatter index from precomputed BMUs: the mean number of groups of
/// neighboring units per class, over classes that have samples.
pub fn class_scatter_index_from_bmus(grid: &MapGrid, bmus: &[usize], labels: &[usize]) -> Result<f64> {
    require_samples(labels.len())?;
    let groups: Vec<usize> = class_groups(grid, bmus, labels)?.into_iter().flatten().collect();
    Ok(groups.iter().sum::<usize>() as f64 / groups.len() as f64)
}

/// Class scatter index of a labeled dataset projected on a codebook.
pub fn class_scatter_index(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    let labels = data
        .labels()
        .ok_or_else(|| SomError::Domain("class scatter index needs labels".into()))?;
    let bmus = project(codebook, data, 1)?.bmus();
    class_scatter_index_from_bmus(codebook.grid(), &bmus, labels)
}

/// Purity of the BMU partition of a labeled dataset.
pub fn bmu_purity(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    let labels = data
        .labels()
        .ok_or_else(|| SomError::Domain("purity needs labels".into()))?;
    purity(&project(codebook, data, 1)?.bmus(), labels)
}

/// Clustering accuracy of the BMU partition of a labeled dataset.
pub fn bmu_clustering_accuracy(codebook: &CodeBook, data: &Dataset) -> Result<f64> {
    let labels = data
        .labels()
        .ok_or_else(|| SomError::Domain("clustering accuracy needs labels".into()))?;
    clustering_accuracy(&project(codebook, data, 1)?.bmus(), labels)
}
