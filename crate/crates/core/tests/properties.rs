use lyadim::atlas::{classify_excitation, grid_points, settle, ExcitationOptions, SettleOptions};
use lyadim::flow::{FactorSequence, IntegratorConfig};
use lyadim::lyap::{finite_time_les, kaplan_yorke, product_svd, spectrum_of, sweep_max_dimension};
use lyadim::smallmat::{omega_d, singular_values, SquareMatrix};
use lyadim::systems::{SystemId, SystemSpec};
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(-2.0..2.0f64, n * n).prop_map(move |v| SquareMatrix::from_row_slice(n, &v).unwrap())
}

fn invertible(n: usize) -> impl Strategy<Value = SquareMatrix> {
    matrix(n).prop_filter("well conditioned", |m| {
        let s = singular_values(m);
        s.values()[0] / s.values()[s.len() - 1] < 1e3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn horn_inequality(a in matrix(3), b in matrix(3), d in 0.0..=3.0f64) {
        let lhs = omega_d(&singular_values(&(&a * &b)), d).unwrap();
        let rhs = omega_d(&singular_values(&a), d).unwrap() * omega_d(&singular_values(&b), d).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-10) + 1e-300);
    }

    #[test]
    fn ky_reconstruction(mut exps in prop::collection::vec(-20.0..20.0f64, 1..=4)) {
        exps.sort_by(|a, b| b.total_cmp(a));
        let ky = kaplan_yorke(&exps).unwrap();
        prop_assert_eq!(ky.d, ky.j as f64 + ky.s);
        prop_assert!((0.0..=exps.len() as f64).contains(&ky.d));
        if ky.j >= 1 && ky.j < exps.len() {
            let pj: f64 = exps[..ky.j].iter().sum();
            let pj1 = pj + exps[ky.j];
            prop_assert!(((1.0 - ky.s) * pj + ky.s * pj1).abs() <= 1e-12 * (1.0 + pj.abs()));
            prop_assert!((0.0..1.0).contains(&ky.s) || ky.s == 1.0);
        }
    }

    #[test]
    fn spectra_are_descending(fs in prop::collection::vec(invertible(3), 1..6), sweeps in 1usize..6) {
        let seq = FactorSequence::from_factors(fs, 0.5).unwrap();
        let s = spectrum_of(&seq, sweeps).unwrap();
        prop_assert!(s.les.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(s.qr_les.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn exponent_sum_is_log_determinant(fs in prop::collection::vec(invertible(3), 1..6)) {
        let seq = FactorSequence::from_factors(fs, 1.0).unwrap();
        let les = product_svd(&seq, 3).unwrap().les;
        let logdet: f64 = seq.factors.iter().map(|f| f.det().abs().ln()).sum();
        prop_assert!((les.iter().sum::<f64>() * seq.len() as f64 - logdet).abs() < 1e-9);
    }
}

#[test]
fn lorenz_spectra_are_descending_and_trace_identity_holds() {
    let cfg = IntegratorConfig::default();
    let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
    for seed in [[1.0, 1.0, 1.0], [-4.0, 7.0, 30.0]] {
        let s = finite_time_les(&l, &seed, 0.1, 1000, 3, &cfg).unwrap();
        assert!(s.les.windows(2).all(|w| w[0] >= w[1]));
        assert!((s.sum() + 10.0 + 1.0 + 8.0 / 3.0).abs() < 1e-3, "{}", s.sum());
    }
    let gd = SystemSpec::generalized_lorenz(4.0, 700.0, 1.0, 0.0052).unwrap();
    let seed = [-14.551336132013954, -173.86811769236883, 718.92035664071227];
    let s = finite_time_les(&gd, &seed, 0.1, 1000, 3, &cfg).unwrap();
    assert!((s.sum() + 6.0).abs() < 1e-3, "{}", s.sum());
}

#[test]
fn lorenz_dimension_does_not_grow_with_the_horizon() {
    let cfg = IntegratorConfig::default();
    let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
    let sample = settle(&l, &[1.0, 1.0, 1.0], 100.0, 1000.0, 1.0, &cfg, &SettleOptions::default()).unwrap();
    let grid = grid_points(&sample, 50).unwrap();
    let short = sweep_max_dimension(&l, &grid, 0.1, 1000, 3, &cfg).unwrap();
    let long = sweep_max_dimension(&l, &grid, 0.1, 10_000, 3, &cfg).unwrap();
    assert!(
        long.best.ky.d <= short.best.ky.d + 0.02,
        "T=1000: {} vs T=100: {}",
        long.best.ky.d,
        short.best.ky.d
    );
}

#[test]
fn sweep_is_deterministic_across_pool_sizes() {
    let cfg = IntegratorConfig::default();
    let l = SystemSpec::lorenz(10.0, 28.0, 8.0 / 3.0).unwrap();
    let sample = settle(&l, &[1.0, 1.0, 1.0], 50.0, 50.0, 0.5, &cfg, &SettleOptions::default()).unwrap();
    let grid = grid_points(&sample, 12).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sweep_max_dimension(&l, &grid, 0.1, 200, 3, &cfg).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.best, b.best);
    assert_eq!(a.points, b.points);
}

#[test]
fn classification_is_deterministic() {
    let cfg = IntegratorConfig::default();
    let l = SystemSpec::default_for(SystemId::Lorenz);
    let opts = ExcitationOptions {
        trials: 2,
        trial_transient: 50.0,
        trial_window: 10.0,
        ..ExcitationOptions::default()
    };
    let sample = settle(&l, &[1.0, 1.0, 1.0], 50.0, 20.0, 0.05, &cfg, &SettleOptions::default()).unwrap();
    let a = classify_excitation(&l, &sample, &opts, &cfg).unwrap();
    let b = classify_excitation(&l, &sample, &opts, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.trials.len(), 2 * l.equilibria().len());
}
