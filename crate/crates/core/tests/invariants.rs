use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use somqual::external::{clustering_accuracy, purity};
use somqual::internal::*;
use somqual::model::{project, receptive_field_connectivity};
use somqual::{CodeBook, Dataset, MapGrid, NeighborhoodKernel};

fn random_instance(rng: &mut ChaCha8Rng, rows: usize, cols: usize, n: usize) -> (CodeBook, Dataset) {
    let grid = MapGrid::rectangular(rows, cols).unwrap();
    let protos = Array2::from_shape_fn((grid.len(), 2), |_| rng.gen_range(-1.0..1.0));
    let data = Array2::from_shape_fn((n, 2), |_| rng.gen_range(-1.0..1.0));
    (CodeBook::new(protos, grid).unwrap(), Dataset::new(data).unwrap())
}

#[test]
fn metric_ranges_and_orderings() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let (cb, data) = random_instance(&mut rng, 3, 4, 40);
        let te = topographic_error(&cb, &data).unwrap();
        assert!((0.0..=1.0).contains(&te));
        let qe = quantization_error(&cb, &data).unwrap();
        assert!(qe >= 0.0);
        let ce = combined_error(&cb, &data).unwrap();
        let bmu_sq: f64 = data
            .samples()
            .rows()
            .into_iter()
            .map(|x| {
                let m = cb.prototype(cb.bmu(x));
                x.iter().zip(m.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
            })
            .sum::<f64>()
            / data.len() as f64;
        assert!(ce >= bmu_sq);
        assert!(kruskal_shepard_error(&cb, &data).unwrap() >= 0.0);
        assert!(c_measure(&cb, &data).unwrap() >= 0.0);
        assert!(distortion(&cb, &data, NeighborhoodKernel::Gaussian, 1.5).unwrap() >= 0.0);
        let tf = topographic_function(&cb, &data).unwrap();
        assert!(tf.values.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(*tf.values.last().unwrap(), 0);
    }
}

#[test]
fn distortion_low_temperature_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let (cb, data) = random_instance(&mut rng, 4, 4, 50);
        let d = distortion(&cb, &data, NeighborhoodKernel::Gaussian, 1e-3).unwrap();
        let direct: f64 = data
            .samples()
            .rows()
            .into_iter()
            .map(|x| (&x - &cb.prototype(cb.bmu(x))).mapv(|v| v * v).sum())
            .sum::<f64>()
            / data.len() as f64;
        assert!((d - direct).abs() <= 1e-6 * direct);
    }
}

fn rotate(m: &Array2<f64>, angle: f64, shift: (f64, f64)) -> Array2<f64> {
    let (s, c) = angle.sin_cos();
    let mut out = m.clone();
    for mut row in out.rows_mut() {
        let (x, y) = (row[0], row[1]);
        row[0] = c * x - s * y + shift.0;
        row[1] = s * x + c * y + shift.1;
    }
    out
}

fn all_scalars(cb: &CodeBook, data: &Dataset) -> [f64; 7] {
    [
        quantization_error(cb, data).unwrap(),
        distortion(cb, data, NeighborhoodKernel::Gaussian, 1.2).unwrap(),
        topographic_error(cb, data).unwrap(),
        combined_error(cb, data).unwrap(),
        topographic_product(cb).unwrap(),
        kruskal_shepard_error(cb, data).unwrap(),
        c_measure(cb, data).unwrap(),
    ]
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300) || a == b
}

#[test]
fn rigid_motion_and_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let (cb, data) = random_instance(&mut rng, 3, 3, 30);
        let base = all_scalars(&cb, &data);
        let tf = topographic_function(&cb, &data).unwrap().values;

        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let shift = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let cb_r = CodeBook::new(rotate(cb.prototypes(), angle, shift), *cb.grid()).unwrap();
        let data_r = Dataset::new(rotate(data.samples(), angle, shift)).unwrap();
        let moved = all_scalars(&cb_r, &data_r);
        for (a, b) in base.iter().zip(&moved) {
            assert!(close(*a, *b), "{a} vs {b}");
        }
        assert_eq!(topographic_function(&cb_r, &data_r).unwrap().values, tf);

        let s = rng.gen_range(0.1..10.0);
        let cb_s = CodeBook::new(cb.prototypes() * s, *cb.grid()).unwrap();
        let data_s = Dataset::new(data.samples() * s).unwrap();
        let scaled = [
            quantization_error(&cb_s, &data_s).unwrap(),
            topographic_error(&cb_s, &data_s).unwrap(),
            combined_error(&cb_s, &data_s).unwrap(),
            topographic_product(&cb_s).unwrap(),
            kruskal_shepard_error(&cb_s, &data_s).unwrap(),
            c_measure(&cb_s, &data_s).unwrap(),
        ];
        let expected = [base[0] * s, base[2], base[3] * s * s, base[4], base[5], base[6] * s];
        for (a, b) in scaled.iter().zip(&expected) {
            assert!(close(*a, *b), "{a} vs {b}");
        }
        // distortion scales by s^2 at a fixed temperature
        let d = distortion(&cb_s, &data_s, NeighborhoodKernel::Gaussian, 1.2).unwrap();
        assert!(close(d, base[1] * s * s));
        assert_eq!(topographic_function(&cb_s, &data_s).unwrap().values, tf);
    }
}

#[test]
fn purity_one_when_each_sample_has_its_own_unit() {
    let labels: Vec<usize> = (0..12).map(|i| i % 3).collect();
    let units: Vec<usize> = (0..12).collect();
    assert_eq!(purity(&units, &labels).unwrap(), 1.0);
}

proptest! {
    #[test]
    fn accuracy_invariant_under_relabeling(
        pairs in prop::collection::vec((0usize..5, 0usize..5), 1..40),
        perm_a in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
        perm_b in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let (a, b): (Vec<usize>, Vec<usize>) = pairs.into_iter().unzip();
        let base = clustering_accuracy(&a, &b).unwrap();
        let a2: Vec<usize> = a.iter().map(|&x| perm_a[x]).collect();
        let b2: Vec<usize> = b.iter().map(|&x| perm_b[x]).collect();
        prop_assert_eq!(clustering_accuracy(&a2, &b2).unwrap(), base);
        prop_assert!(base > 0.0 && base <= 1.0);
        // matching ids up to a permutation give perfect scores
        let relabeled: Vec<usize> = b.iter().map(|&x| perm_a[x]).collect();
        prop_assert_eq!(clustering_accuracy(&relabeled, &b).unwrap(), 1.0);
        prop_assert_eq!(purity(&relabeled, &b).unwrap(), 1.0);
    }

    #[test]
    fn purity_grows_when_a_cluster_splits(
        pairs in prop::collection::vec((0usize..4, 0usize..3, any::<bool>()), 1..50),
        victim in 0usize..4,
    ) {
        let a: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        // move a random subset of the victim cluster to a fresh id
        let split: Vec<usize> = pairs.iter().map(|p| if p.0 == victim && p.2 { 4 } else { p.0 }).collect();
        prop_assert!(purity(&split, &y).unwrap() >= purity(&a, &y).unwrap());
    }

    #[test]
    fn connectivity_is_symmetric(seed in any::<u64>(), rows in 1usize..4, cols in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (cb, data) = random_instance(&mut rng, rows, cols, 25);
        let conn = receptive_field_connectivity(&cb, &data).unwrap();
        for a in 0..cb.units() {
            prop_assert!(!conn.get(a, a));
            for b in 0..cb.units() {
                prop_assert_eq!(conn.get(a, b), conn.get(b, a));
            }
        }
    }

    #[test]
    fn projection_prefix_ranks_sorted(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (cb, data) = random_instance(&mut rng, 2, 3, 10);
        let proj = project(&cb, &data, 4).unwrap();
        for i in 0..data.len() {
            let x: Array1<f64> = data.sample(i).to_owned();
            let d: Vec<f64> = proj.ranking(i).iter().map(|&u| (&x - &cb.prototype(u)).mapv(|v| v * v).sum()).collect();
            prop_assert!(d.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
