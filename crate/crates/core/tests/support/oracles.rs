//! Brute-force reference implementations used to cross-check the library.
//!
//! Everything here works on plain nested vectors and recomputes lattice
//! distances, BMUs and ranks from scratch by direct counting, so it shares no
//! code path with the crate under test.

#![allow(dead_code)]

pub type Matrix = Vec<Vec<f64>>;

#[derive(Clone, Copy, Debug)]
pub struct Lattice {
    pub rows: usize,
    pub cols: usize,
}

impl Lattice {
    pub fn units(&self) -> usize {
        self.rows * self.cols
    }

    /// Manhattan distance between row-major unit indices.
    pub fn dist(&self, a: usize, b: usize) -> usize {
        let (ra, ca) = ((a / self.cols) as i64, (a % self.cols) as i64);
        let (rb, cb) = ((b / self.cols) as i64, (b % self.cols) as i64);
        ((ra - rb).abs() + (ca - cb).abs()) as usize
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.dist(a, b) == 1
    }
}

pub fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    sq(a, b).sqrt()
}

/// Units sorted by (squared distance, index).
pub fn ranking(protos: &Matrix, x: &[f64]) -> Vec<usize> {
    let mut units: Vec<usize> = (0..protos.len()).collect();
    units.sort_by(|&a, &b| {
        sq(x, &protos[a])
            .partial_cmp(&sq(x, &protos[b]))
            .unwrap()
            .then(a.cmp(&b))
    });
    units
}

pub fn bmus(protos: &Matrix, data: &Matrix) -> Vec<usize> {
    data.iter().map(|x| ranking(protos, x)[0]).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum RankMeasure {
    Trustworthiness,
    Continuity,
}

/// Trustworthiness / neighborhood preservation with tie-expanded neighbor
/// sets, from full rank matrices.
pub fn rank_measure(lattice: Lattice, protos: &Matrix, data: &Matrix, k: usize, which: RankMeasure) -> f64 {
    let n = data.len();
    let b = bmus(protos, data);
    let dx: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| sq(&data[i], &data[j])).collect())
        .collect();
    let dm: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| lattice.dist(b[i], b[j]) as f64).collect())
        .collect();
    // rank[i][j] = 1 + #{l != i : d(i,l) < d(i,j)}
    let rank = |d: &Vec<Vec<f64>>| -> Vec<Vec<usize>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| 1 + (0..n).filter(|&l| l != i && d[i][l] < d[i][j]).count())
                    .collect()
            })
            .collect()
    };
    let rx = rank(&dx);
    let rm = rank(&dm);
    let mut total = 0.0;
    for i in 0..n {
        let input_set: Vec<usize> = (0..n).filter(|&j| j != i && rx[i][j] <= k).collect();
        let map_set: Vec<usize> = (0..n).filter(|&j| j != i && rm[i][j] <= k).collect();
        match which {
            RankMeasure::Trustworthiness => {
                let w = input_set.len() as f64 / map_set.len() as f64;
                for &j in &map_set {
                    if !input_set.contains(&j) {
                        total += w * (rx[i][j] - k) as f64;
                    }
                }
            }
            RankMeasure::Continuity => {
                let w = map_set.len() as f64 / input_set.len() as f64;
                for &j in &input_set {
                    if !map_set.contains(&j) {
                        total += w * (rm[i][j] - k) as f64;
                    }
                }
            }
        }
    }
    let (nf, kf) = (n as f64, k as f64);
    1.0 - 2.0 / (nf * kf * (2.0 * nf - 3.0 * kf - 1.0)) * total
}

/// Topographic product by direct evaluation of the nested products.
pub fn topographic_product(lattice: Lattice, protos: &Matrix) -> f64 {
    let k = protos.len();
    let mut sum = 0.0;
    for j in 0..k {
        let others: Vec<usize> = (0..k).filter(|&u| u != j).collect();
        // position of u in an ordering = number of units strictly before it
        let order = |key: &dyn Fn(usize) -> f64| -> Vec<usize> {
            let mut out = vec![0; k - 1];
            for &u in &others {
                let pos = others
                    .iter()
                    .filter(|&&v| key(v) < key(u) || (key(v) == key(u) && v < u))
                    .count();
                out[pos] = u;
            }
            out
        };
        let n_map = order(&|u| lattice.dist(j, u) as f64);
        let n_in = order(&|u| euclid(&protos[j], &protos[u]));
        for order_k in 1..k {
            let mut product = 1.0;
            for l in 0..order_k {
                let q1 = euclid(&protos[j], &protos[n_map[l]]) / euclid(&protos[j], &protos[n_in[l]]);
                let q2 = lattice.dist(j, n_map[l]) as f64 / lattice.dist(j, n_in[l]) as f64;
                product *= q1 * q2;
            }
            sum += product.powf(1.0 / (2.0 * order_k as f64)).ln();
        }
    }
    sum / (k * (k - 1)) as f64
}

/// Cheapest simple path between two units by exhaustive DFS.
pub fn min_path_cost(lattice: Lattice, protos: &Matrix, from: usize, to: usize) -> f64 {
    fn dfs(l: Lattice, p: &Matrix, at: usize, to: usize, seen: &mut Vec<bool>, cost: f64, best: &mut f64) {
        if at == to {
            *best = best.min(cost);
            return;
        }
        for next in 0..l.units() {
            if !seen[next] && l.adjacent(at, next) {
                seen[next] = true;
                dfs(l, p, next, to, seen, cost + sq(&p[at], &p[next]), best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; lattice.units()];
    seen[from] = true;
    let mut best = f64::INFINITY;
    dfs(lattice, protos, from, to, &mut seen, 0.0, &mut best);
    best
}

pub fn combined_error(lattice: Lattice, protos: &Matrix, data: &Matrix) -> f64 {
    let total: f64 = data
        .iter()
        .map(|x| {
            let r = ranking(protos, x);
            sq(x, &protos[r[0]]) + min_path_cost(lattice, protos, r[0], r[1])
        })
        .sum();
    total / data.len() as f64
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Best matched count over all bijections of a square table.
pub fn best_matching(table: &[Vec<u64>]) -> u64 {
    permutations(table.len())
        .iter()
        .map(|perm| perm.iter().enumerate().map(|(r, &c)| table[r][c]).sum())
        .max()
        .unwrap_or(0)
}

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Connected components of the marked units under 4-adjacency.
pub fn components(lattice: Lattice, marked: &[bool]) -> usize {
    let k = lattice.units();
    let mut uf = UnionFind::new(k);
    for a in 0..k {
        for b in a + 1..k {
            if marked[a] && marked[b] && lattice.adjacent(a, b) {
                uf.union(a, b);
            }
        }
    }
    let mut roots: Vec<usize> = (0..k).filter(|&u| marked[u]).map(|u| uf.find(u)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}
