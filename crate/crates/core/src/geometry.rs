//! Map lattices and neighborhood kernels.
//!
//! Units are numbered `0..K` in row-major order: unit `r * cols + c` sits at
//! row `r`, column `c`. The inter-unit distance is the shortest-path length in
//! the lattice graph:
//!
//! - rectangular grids are 4-connected, so the distance is `|dr| + |dc|`;
//! - hexagonal grids use "even-r" offset coordinates (even rows shifted right
//!   by half a cell) and every interior unit has 6 neighbors. Distances are
//!   computed through cube coordinates.

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SomError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    Rectangular,
    Hexagonal,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Rectangular => f.write_str("rectangular"),
            Topology::Hexagonal => f.write_str("hexagonal"),
        }
    }
}

impl FromStr for Topology {
    type Err = SomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectangular" => Ok(Topology::Rectangular),
            "hexagonal" => Ok(Topology::Hexagonal),
            other => Err(SomError::Domain(format!(
                "unknown topology '{other}', expected rectangular or hexagonal"
            ))),
        }
    }
}

// (dcol, drow) neighbor offsets for even-r offset coordinates.
const HEX_EVEN_ROW: [(isize, isize); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (0, 1), (1, 1)];
const HEX_ODD_ROW: [(isize, isize); 6] = [(1, 0), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1)];
const RECT: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];

/// The output lattice of a self-organizing map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MapGrid {
    rows: usize,
    cols: usize,
    topology: Topology,
}

impl MapGrid {
    pub fn new(rows: usize, cols: usize, topology: Topology) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(SomError::DegenerateGrid(format!(
                "map dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(MapGrid { rows, cols, topology })
    }

    pub fn rectangular(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, Topology::Rectangular)
    }

    pub fn hexagonal(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, Topology::Hexagonal)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Number of units `K`.
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimensionality of the lattice: 1 for a single row or column, 2 otherwise.
    pub fn dimensionality(&self) -> u32 {
        if self.rows == 1 || self.cols == 1 {
            1
        } else {
            2
        }
    }

    fn check(&self, unit: usize) -> Result<()> {
        if unit < self.len() {
            Ok(())
        } else {
            Err(SomError::IndexOutOfRange {
                index: unit,
                units: self.len(),
            })
        }
    }

    /// `(row, col)` position of a unit.
    pub fn position(&self, unit: usize) -> Result<(usize, usize)> {
        self.check(unit)?;
        Ok((unit / self.cols, unit % self.cols))
    }

    pub fn index(&self, row: usize, col: usize) -> Result<usize> {
        if row >= self.rows || col >= self.cols {
            return Err(SomError::Domain(format!(
                "position ({row}, {col}) outside a {}x{} map",
                self.rows, self.cols
            )));
        }
        Ok(row * self.cols + col)
    }

    /// Shortest-path length between units `k` and `l` on the lattice.
    pub fn distance(&self, k: usize, l: usize) -> Result<usize> {
        self.check(k)?;
        self.check(l)?;
        Ok(self.distance_unchecked(k, l))
    }

    /// Same as [`MapGrid::distance`] without bounds checks; callers guarantee
    /// both indices are below `K`.
    pub(crate) fn distance_unchecked(&self, k: usize, l: usize) -> usize {
        let (r1, c1) = (k / self.cols, k % self.cols);
        let (r2, c2) = (l / self.cols, l % self.cols);
        match self.topology {
            Topology::Rectangular => r1.abs_diff(r2) + c1.abs_diff(c2),
            Topology::Hexagonal => {
                let (q1, s1) = even_r_to_axial(r1, c1);
                let (q2, s2) = even_r_to_axial(r2, c2);
                let dq = q1 - q2;
                let dr = s1 - s2;
                ((dq.abs() + dr.abs() + (dq + dr).abs()) / 2) as usize
            }
        }
    }

    /// Units at lattice distance exactly 1 from `k`, in ascending order.
    pub fn neighbors(&self, k: usize) -> Result<Vec<usize>> {
        self.check(k)?;
        Ok(self.neighbors_unchecked(k))
    }

    pub(crate) fn neighbors_unchecked(&self, k: usize) -> Vec<usize> {
        let (row, col) = (k / self.cols, k % self.cols);
        let offsets: &[(isize, isize)] = match self.topology {
            Topology::Rectangular => &RECT,
            Topology::Hexagonal if row % 2 == 0 => &HEX_EVEN_ROW,
            Topology::Hexagonal => &HEX_ODD_ROW,
        };
        let mut out: Vec<usize> = offsets
            .iter()
            .filter_map(|&(dc, dr)| {
                let r = row.checked_add_signed(dr)?;
                let c = col.checked_add_signed(dc)?;
                (r < self.rows && c < self.cols).then(|| r * self.cols + c)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Largest distance between any two units.
    pub fn max_distance(&self) -> Result<usize> {
        let k = self.len();
        if k < 2 {
            return Err(SomError::DegenerateGrid(
                "maximum map distance needs at least two units".into(),
            ));
        }
        if self.topology == Topology::Rectangular {
            return Ok(self.rows - 1 + self.cols - 1);
        }
        // The distance is a norm on the lattice, so the farthest pair is
        // attained at hull vertices, all of which lie on the border.
        let border = (0..k).filter(|&u| {
            let (r, c) = (u / self.cols, u % self.cols);
            r == 0 || r + 1 == self.rows || c == 0 || c + 1 == self.cols
        });
        Ok(border
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| self.distance_unchecked(a, b))
            .max()
            .unwrap_or(0))
    }

    /// Full `K x K` distance table, row-major.
    pub fn distance_table(&self) -> Vec<usize> {
        let k = self.len();
        let mut table = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                table[a * k + b] = self.distance_unchecked(a, b);
            }
        }
        table
    }
}

fn even_r_to_axial(row: usize, col: usize) -> (i64, i64) {
    let r = row as i64;
    let q = col as i64 - (r + (r & 1)) / 2;
    (q, r)
}

/// Weight of a map distance `d` under temperature `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NeighborhoodKernel {
    /// `exp(-d^2 / T^2)`
    #[default]
    Gaussian,
    /// 1 inside the radius `T`, 0 outside.
    Window,
}

impl NeighborhoodKernel {
    pub fn weight(&self, d: f64, temperature: f64) -> Result<f64> {
        if !temperature.is_finite() || temperature <= 0.0 {
            return Err(SomError::Domain(format!(
                "temperature must be positive and finite, got {temperature}"
            )));
        }
        if d.is_nan() || d < 0.0 {
            return Err(SomError::Domain(format!("map distance must be nonnegative, got {d}")));
        }
        Ok(self.weight_unchecked(d, temperature))
    }

    pub(crate) fn weight_unchecked(&self, d: f64, temperature: f64) -> f64 {
        match self {
            NeighborhoodKernel::Gaussian => (-(d * d) / (temperature * temperature)).exp(),
            NeighborhoodKernel::Window => {
                if d <= temperature {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for NeighborhoodKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeighborhoodKernel::Gaussian => f.write_str("gaussian"),
            NeighborhoodKernel::Window => f.write_str("window"),
        }
    }
}

impl FromStr for NeighborhoodKernel {
    type Err = SomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(NeighborhoodKernel::Gaussian),
            "window" => Ok(NeighborhoodKernel::Window),
            other => Err(SomError::Domain(format!(
                "unknown kernel '{other}', expected gaussian or window"
            ))),
        }
    }
}
