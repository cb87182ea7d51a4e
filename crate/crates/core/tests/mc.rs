use std::sync::OnceLock;

use proptest::prelude::*;
use randtorus::closedform::{length_mean, quad_cr_median};
use randtorus::hypgeom::{cross_ratio, ComplexPoint};
use randtorus::mc::*;
use randtorus::modmap::{build_cr_table, summary_stats, CrMapTable, DEFAULT_M_MAX, DEFAULT_POINTS};

fn table() -> &'static CrMapTable {
    static T: OnceLock<CrMapTable> = OnceLock::new();
    T.get_or_init(|| build_cr_table(1.0, DEFAULT_M_MAX, DEFAULT_POINTS).unwrap())
}

fn cfg(law: Law, n: usize, seed: u64) -> McConfig {
    McConfig::new(law, n, seed)
}

#[test]
fn output_is_independent_of_worker_count() {
    let mut a = cfg(Law::QuadCr, 3 * BLOCK + 17, 99);
    a.workers = 1;
    let mut b = a.clone();
    b.workers = 4;
    assert_eq!(draw_samples(&a, None).unwrap(), draw_samples(&b, None).unwrap());
    let c = cfg(Law::QuadCr, 3 * BLOCK + 17, 100);
    assert_ne!(draw_samples(&a, None).unwrap(), draw_samples(&c, None).unwrap());
}

#[test]
fn prefix_is_stable_under_larger_n() {
    let short = draw_samples(&cfg(Law::Star, 1000, 5), None).unwrap();
    let long = draw_samples(&cfg(Law::Star, 10_000, 5), None).unwrap();
    assert_eq!(short[..], long[..1000]);
}

#[test]
fn full_cross_ratio_mass_above_two() {
    let v = draw_samples(&cfg(Law::CrossratioFull, 100_000, 1), None).unwrap();
    let frac = v.iter().filter(|&&x| x > 2.0).count() as f64 / v.len() as f64;
    assert!((frac - 1.0 / 6.0).abs() < 0.005, "{frac}");
}

#[test]
fn star_is_standard_cauchy() {
    let s = sample_star(&cfg(Law::Star, 100_000, 2)).unwrap();
    assert!(s.stats.median.abs() < 0.02, "{:?}", s.stats);
    assert!((s.stats.q3 - s.stats.q1 - 2.0).abs() < 0.04, "{:?}", s.stats);
    assert!(s.stats.mean.is_none());
    assert!(s.ks_distance < 0.01);
}

#[test]
fn quad_cr_median_matches() {
    let s = sample_quad_cr(&cfg(Law::QuadCr, 200_000, 3)).unwrap();
    assert!((s.stats.median - quad_cr_median()).abs() < 0.05, "{}", s.stats.median);
    assert!(s.ks_distance < 0.005);
}

#[test]
fn length_mean_matches() {
    let s = sample_length(&cfg(Law::Length, 100_000, 4)).unwrap();
    let m = s.stats.mean.unwrap();
    assert!((m - length_mean().unwrap()).abs() < 0.006, "{m}");
    assert!(s.stats.sd.unwrap() > 0.0);
}

#[test]
fn crossratio_ks_is_small() {
    let s = sample_crossratio(&cfg(Law::CrossratioFull, 100_000, 6)).unwrap();
    assert!(s.ks_distance < 0.01, "{}", s.ks_distance);
}

#[test]
fn ks_shrinks_with_n() {
    let small = sample_quad_cr(&cfg(Law::QuadCr, 1000, 8)).unwrap().ks_distance;
    let large = sample_quad_cr(&cfg(Law::QuadCr, 256_000, 8)).unwrap().ks_distance;
    assert!(large < small, "{small} {large}");
    assert!(large < 0.005);
}

#[test]
fn teich_samples_follow_the_derived_law() {
    let t = table();
    let s = sample_teich(&cfg(Law::Teich, 100_000, 9), t).unwrap();
    assert_eq!(s.histogram.below, 0);
    let stats = summary_stats(t).unwrap();
    assert!(
        (s.stats.median - stats.median).abs() < 0.02,
        "{} vs {}",
        s.stats.median,
        stats.median
    );
    assert!((s.stats.mean.unwrap() - stats.mean).abs() < 0.02);
    assert!(s.ks_distance < 0.01, "{}", s.ks_distance);
    let m = sample_modulus(&cfg(Law::Modulus, 20_000, 9), t).unwrap();
    assert!(m.ks_distance < 0.02);
    assert!(draw_samples(&cfg(Law::Modulus, 10, 0), None).is_err());
}

#[test]
fn histogram_counts_all_samples() {
    let s = run(&cfg(Law::QuadCr, 50_000, 10), None).unwrap();
    assert_eq!(s.histogram.total(), 50_000);
    assert_eq!(s.histogram.counts.len(), DEFAULT_BINS);
    assert_eq!(s.histogram.below, 0);
    let mass: f64 = s
        .histogram
        .rows()
        .iter()
        .map(|r| r.density * (r.bin_right - r.bin_left))
        .sum();
    assert!((mass + s.histogram.clipped_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn csv_and_json_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hist.csv");
    let mut c = cfg(Law::Length, 5000, 11);
    c.bins = 20;
    let s = run(&c, None).unwrap();
    write_outputs(&s, &path).unwrap();
    let mut rd = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["bin_left", "bin_right", "count", "density"]);
    let rows: Vec<HistogramRow> = rd.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows, s.histogram.rows());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path.with_extension("json")).unwrap()).unwrap();
    assert_eq!(json["law"], "length");
    assert_eq!(json["n"], 5000);
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(draw_samples(&cfg(Law::Star, 0, 1), None).is_err());
    let mut c = cfg(Law::Star, 10, 1);
    c.workers = 0;
    assert!(run(&c, None).is_err());
    let mut c = cfg(Law::Star, 10, 1);
    c.range = Some((1.0, 1.0));
    assert!(run(&c, None).is_err());
    assert!("nope".parse::<Law>().is_err());
    for law in Law::ALL {
        assert_eq!(law.name().parse::<Law>().unwrap(), law);
    }
}

proptest! {
    #[test]
    fn circle_cross_ratio_matches_points(t in prop::array::uniform4(0.0..std::f64::consts::TAU)) {
        let x = circle_cross_ratio(t);
        prop_assume!(x.is_finite() && x.abs() < 1e6);
        let p = t.map(ComplexPoint::on_circle);
        let direct = cross_ratio(p[0], p[1], p[2], p[3]);
        prop_assume!(direct.is_ok());
        let direct = direct.unwrap().value.re;
        prop_assert!((x - direct).abs() < 1e-8 * (1.0 + x.abs()));
    }

    #[test]
    fn circle_cross_ratio_is_rotation_invariant(t in prop::array::uniform4(0.0..6.0f64), phi in 0.0..6.0f64) {
        let x = circle_cross_ratio(t);
        prop_assume!(x.is_finite() && x.abs() < 1e6);
        let y = circle_cross_ratio(t.map(|a| a + phi));
        prop_assert!((x - y).abs() < 1e-8 * (1.0 + x.abs()));
    }

    #[test]
    fn histogram_total_is_sample_count(v in prop::collection::vec(-10.0..10.0f64, 0..500), bins in 1usize..50) {
        let h = Histogram::new(&v, -3.0, 3.0, bins);
        prop_assert_eq!(h.total() as usize, v.len());
    }
}
