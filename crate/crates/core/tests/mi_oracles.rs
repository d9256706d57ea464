use ddf_core::mi::{
    gaussian_mi, mi_estimate, mi_monte_carlo, Constellation, MiMethod, MiTable, MiTables, SnrGrid,
};
use ddf_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

fn lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Brute-force estimate of I(X;Y) written independently of the library:
/// sample average of log2 p(y|x) / p(y).
fn brute_force_mi(points: &[Complex64], snr: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let sigma = (0.5f64).sqrt();
    let mut acc = 0.0;
    for _ in 0..samples {
        let x = points[rng.random_range(0..points.len())];
        let nr: f64 = rng.sample(StandardNormal);
        let ni: f64 = rng.sample(StandardNormal);
        let y = x * snr.sqrt() + Complex64::new(nr, ni) * sigma;
        let lik = |s: Complex64| (-(y - s * snr.sqrt()).norm_sqr()).exp();
        let num = lik(x);
        let den: f64 = points.iter().map(|&s| lik(s)).sum::<f64>() / points.len() as f64;
        acc += (num / den).log2();
    }
    acc / samples as f64
}

#[test]
fn qpsk_at_10_db_matches_brute_force() {
    let c = Constellation::qpsk();
    let snr = lin(10.0);
    let oracle = brute_force_mi(c.points(), snr, 1_000_000, 77);
    let quad = mi_estimate(&c, snr, MiMethod::default()).unwrap();
    let mc = mi_estimate(
        &c,
        snr,
        MiMethod::MonteCarlo {
            samples: 400_000,
            seed: 5,
        },
    )
    .unwrap();
    assert!(
        (quad - oracle).abs() < 1e-2,
        "quadrature {quad} oracle {oracle}"
    );
    assert!(
        (mc - oracle).abs() < 1e-2,
        "monte carlo {mc} oracle {oracle}"
    );
    assert!(quad < 11f64.log2() && oracle < 11f64.log2());
}

#[test]
fn sixty_four_qam_table_top_matches_brute_force() {
    let t = MiTables::standard().table(6).unwrap();
    let top = *t.mi_bits().last().unwrap();
    let c = Constellation::qam(6).unwrap();
    let oracle = brute_force_mi(c.points(), lin(40.0), 200_000, 3);
    assert!((top - oracle).abs() < 1e-2);
    assert!((top - 6.0).abs() < 1e-2);
}

#[test]
fn tables_are_monotone_and_bounded() {
    for m in [2u32, 4, 6] {
        let t = MiTables::standard().table(m).unwrap();
        assert_eq!(t.mi_bits().len(), 241);
        assert!(t.mi_bits().windows(2).all(|w| w[1] >= w[0]));
        for (&db, &mi) in t.snr_grid_db().iter().zip(t.mi_bits()) {
            assert!(mi >= 0.0 && mi <= m as f64);
            assert!(mi <= gaussian_mi(lin(db)) + 1e-12);
        }
    }
}

#[test]
fn lookup_between_grid_points_matches_fresh_estimate() {
    for m in [2u32, 4, 6] {
        let t = MiTables::standard().table(m).unwrap();
        let c = Constellation::qam(m).unwrap();
        for j in (0..240).step_by(23) {
            let db = t.snr_grid_db()[j] + 0.125;
            let fresh = mi_estimate(&c, lin(db), MiMethod::default()).unwrap();
            assert!((t.lookup(lin(db)) - fresh).abs() < 2e-2, "m={m} db={db}");
        }
    }
}

#[test]
fn estimators_agree_on_random_snrs() {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    for m in [2u32, 4] {
        let c = Constellation::qam(m).unwrap();
        for i in 0..5 {
            let db = rng.random_range(-20.0..40.0);
            let q = mi_estimate(&c, lin(db), MiMethod::default()).unwrap();
            let (mc, se) = mi_monte_carlo(&c, lin(db), 200_000, i).unwrap();
            assert!((q - mc).abs() < 1e-2, "m={m} db={db} q={q} mc={mc} se={se}");
        }
    }
}

#[test]
fn csv_import_rejects_bad_grids() {
    let c = Constellation::qpsk();
    let short = "snr_db,mi_bits\n0,0.1\n0.25,0.2\n";
    assert!(MiTable::read_csv(&c, short.as_bytes()).is_err());
    let uneven = "snr_db,mi_bits\n-20,0.01\n-19.5,0.02\n-19.25,0.03\n";
    assert!(MiTable::read_csv(&c, uneven.as_bytes()).is_err());
    let grid = SnrGrid::default();
    let t = MiTable::build(&c, &grid).unwrap();
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let mut text = String::from("# cached table\n");
    text.push_str(std::str::from_utf8(&buf).unwrap());
    assert_eq!(
        MiTable::read_csv(&c, text.as_bytes()).unwrap().mi_bits(),
        t.mi_bits()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lookup_is_monotone_and_capped(a in 0.0f64..1e5, b in 0.0f64..1e5, m in prop::sample::select(vec![2u32, 4, 6])) {
        let t = MiTables::standard().table(m).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(t.lookup(lo) <= t.lookup(hi));
        prop_assert!(t.lookup(hi) <= m as f64);
        prop_assert!(t.lookup(hi) <= gaussian_mi(hi) + 1e-9);
    }

    #[test]
    fn quadrature_respects_bounds(db in -20.0f64..40.0, m in prop::sample::select(vec![2u32, 4, 6])) {
        let c = Constellation::qam(m).unwrap();
        let mi = mi_estimate(&c, lin(db), MiMethod::Quadrature { order: 12 }).unwrap();
        prop_assert!(mi >= 0.0 && mi <= m as f64);
        prop_assert!(mi <= gaussian_mi(lin(db)) + 1e-9);
    }
}
