mod support;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use somqual::external::{class_groups, clustering_accuracy, purity, ContingencyTable};
use somqual::internal::{
    combined_error, map_path_costs, neighborhood_preservation, topographic_product, trustworthiness,
};
use somqual::{CodeBook, Dataset, MapGrid};
use support::oracles::{self, Lattice, Matrix, RankMeasure};

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

fn to_array(m: &Matrix) -> Array2<f64> {
    Array2::from_shape_fn((m.len(), m[0].len()), |(i, j)| m[i][j])
}

fn codebook(lattice: Lattice, protos: &Matrix) -> CodeBook {
    CodeBook::new(
        to_array(protos),
        MapGrid::rectangular(lattice.rows, lattice.cols).unwrap(),
    )
    .unwrap()
}

#[test]
fn trustworthiness_and_continuity_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..40 {
        let lattice = Lattice {
            rows: rng.gen_range(1..=4),
            cols: rng.gen_range(2..=4),
        };
        let dim = rng.gen_range(1..=3);
        let n = rng.gen_range(11..=30);
        let protos = random_matrix(&mut rng, lattice.units(), dim);
        let data = random_matrix(&mut rng, n, dim);
        let cb = codebook(lattice, &protos);
        let ds = Dataset::new(to_array(&data)).unwrap();
        for k in [1, 2, 5] {
            let t = trustworthiness(&cb, &ds, k).unwrap();
            let c = neighborhood_preservation(&cb, &ds, k).unwrap();
            let t_ref = oracles::rank_measure(lattice, &protos, &data, k, RankMeasure::Trustworthiness);
            let c_ref = oracles::rank_measure(lattice, &protos, &data, k, RankMeasure::Continuity);
            assert!((t - t_ref).abs() <= 1e-12, "trust {t} vs {t_ref}");
            assert!((c - c_ref).abs() <= 1e-12, "np {c} vs {c_ref}");
        }
    }
}

#[test]
fn collapsed_clusters_lower_trustworthiness() {
    // two distant input clusters mapped onto neighboring units
    let lattice = Lattice { rows: 1, cols: 4 };
    let protos: Matrix = vec![vec![0.0], vec![10.0], vec![100.0], vec![200.0]];
    let data: Matrix = vec![vec![-0.3], vec![0.1], vec![0.4], vec![9.7], vec![10.2], vec![10.5]];
    let cb = codebook(lattice, &protos);
    let ds = Dataset::new(to_array(&data)).unwrap();
    let t = trustworthiness(&cb, &ds, 1).unwrap();
    let t_ref = oracles::rank_measure(lattice, &protos, &data, 1, RankMeasure::Trustworthiness);
    assert!(t < 1.0);
    assert!((t - t_ref).abs() <= 1e-12);
}

#[test]
fn single_unit_collapse_matches_brute_force() {
    let lattice = Lattice { rows: 1, cols: 3 };
    let protos: Matrix = vec![vec![0.0, 0.0], vec![50.0, 0.0], vec![100.0, 0.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let data = random_matrix(&mut rng, 9, 2);
    let cb = codebook(lattice, &protos);
    let ds = Dataset::new(to_array(&data)).unwrap();
    for which in [RankMeasure::Trustworthiness, RankMeasure::Continuity] {
        let lib = match which {
            RankMeasure::Trustworthiness => trustworthiness(&cb, &ds, 2).unwrap(),
            RankMeasure::Continuity => neighborhood_preservation(&cb, &ds, 2).unwrap(),
        };
        assert!((lib - oracles::rank_measure(lattice, &protos, &data, 2, which)).abs() <= 1e-12);
    }
}

#[test]
fn topographic_product_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let lattice = Lattice {
            rows: rng.gen_range(1..=3),
            cols: rng.gen_range(2..=4),
        };
        let dim = rng.gen_range(1..=4);
        let protos = random_matrix(&mut rng, lattice.units(), dim);
        let tp = topographic_product(&codebook(lattice, &protos)).unwrap();
        let reference = oracles::topographic_product(lattice, &protos);
        assert!((tp - reference).abs() <= 1e-9, "{tp} vs {reference}");
    }
}

#[test]
fn path_costs_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let lattice = Lattice { rows: 3, cols: 3 };
        let protos = random_matrix(&mut rng, 9, 2);
        let cb = codebook(lattice, &protos);
        for src in 0..9 {
            let costs = map_path_costs(&cb, src).unwrap();
            for (dst, &c) in costs.iter().enumerate() {
                let reference = if src == dst {
                    0.0
                } else {
                    oracles::min_path_cost(lattice, &protos, src, dst)
                };
                assert!((c - reference).abs() <= 1e-12);
            }
        }
        let data = random_matrix(&mut rng, 30, 2);
        let ce = combined_error(&cb, &Dataset::new(to_array(&data)).unwrap()).unwrap();
        assert!((ce - oracles::combined_error(lattice, &protos, &data)).abs() <= 1e-12);
    }
}

#[test]
fn accuracy_matches_permutation_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..30 {
        let c = 5;
        let assignments: Vec<usize> = (0..40).map(|_| rng.gen_range(0..c)).collect();
        let labels: Vec<usize> = (0..40).map(|_| rng.gen_range(0..c)).collect();
        let table = ContingencyTable::with_size(&assignments, &labels, c, c).unwrap();
        let square = table.padded_square();
        let best = oracles::best_matching(&square);
        let acc = clustering_accuracy(&assignments, &labels).unwrap();
        // ids absent from the sample shrink the table but not the optimum
        assert_eq!(acc, best as f64 / 40.0);
        assert!(purity(&assignments, &labels).unwrap() >= acc);
    }
}

#[test]
fn class_groups_match_union_find() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..50 {
        let lattice = Lattice {
            rows: rng.gen_range(1..=10),
            cols: rng.gen_range(1..=10),
        };
        let grid = MapGrid::rectangular(lattice.rows, lattice.cols).unwrap();
        let n = rng.gen_range(1..=60);
        let classes = rng.gen_range(1..=4);
        let bmus: Vec<usize> = (0..n).map(|_| rng.gen_range(0..lattice.units())).collect();
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..classes)).collect();
        let groups = class_groups(&grid, &bmus, &labels).unwrap();
        for (class, g) in groups.iter().enumerate() {
            let mut marked = vec![false; lattice.units()];
            for (&b, &y) in bmus.iter().zip(&labels) {
                if y == class {
                    marked[b] = true;
                }
            }
            let reference = oracles::components(lattice, &marked);
            match g {
                Some(count) => assert_eq!(*count, reference),
                None => assert_eq!(reference, 0),
            }
        }
    }
}
