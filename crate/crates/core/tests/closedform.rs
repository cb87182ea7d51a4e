use randtorus::closedform::*;
use std::f64::consts::PI;

#[test]
fn quad_law_values() {
    let v = quad_cr_pdf(2.0).unwrap();
    assert!((v - 6.0 * 2f64.ln() / (PI * PI)).abs() < 1e-15);
    assert!(quad_cr_pdf(1.9).is_err());
    assert_eq!(quad_cr_cdf(2.0).unwrap(), 0.0);
    assert!((quad_cr_sf(2.0).unwrap() - 1.0).abs() < 1e-15);
    let g10 = quad_cr_cdf(10.0).unwrap();
    assert!((g10 - 0.727_747_668_451_698_8).abs() < 1e-14, "{g10}");
}

#[test]
fn dilog_and_complement_forms_agree() {
    for r in [2.0, 2.5, 4.0, 4.69, 10.0, 1e3] {
        let a = quad_cr_cdf_dilog(r).unwrap();
        let b = 1.0 - quad_cr_sf(r).unwrap();
        assert!((a - b).abs() < 1e-13, "{r}");
    }
}

#[test]
fn medians_agree() {
    let a = quad_cr_median();
    let b = quad_cr_median_bisect();
    assert!((a - b).abs() < 1e-9);
    assert!((a - 4.688_303_105_47).abs() < 1e-9);
    assert!((length_median() - 0.999_296_943_246).abs() < 1e-10);
}

#[test]
fn full_law_branches() {
    assert!((crossratio_pdf(0.5) - 4.0 * 2f64.ln() / (PI * PI)).abs() < 1e-15);
    assert_eq!(crossratio_pdf(1.0), f64::INFINITY);
    for r in [0.01, 0.2, 0.37, 0.49] {
        assert!((crossratio_pdf(r) - crossratio_pdf(1.0 - r)).abs() < 1e-14 * crossratio_pdf(r));
    }
    assert!((crossratio_cdf(0.5) - 0.5).abs() < 1e-15);
    assert!((crossratio_cdf(2.0) - 5.0 / 6.0).abs() < 1e-15);
}

#[test]
fn length_law() {
    let m = length_mean().unwrap();
    assert!((m - 0.984_154_040_899).abs() < 1e-10, "{m}");
    // pushforward of the quadrilateral law through ℓ ↦ coth²(ℓ/2)
    for l in [0.05f64, 0.5, 1.0, 1.7] {
        let h = 0.5 * l;
        let q = 1.0 / h.tanh().powi(2);
        let jac = h.cosh() / h.sinh().powi(3);
        let push = quad_cr_pdf(q).unwrap() * jac;
        assert!((length_pdf(l) - push).abs() < 1e-13 * push, "{l}");
    }
    assert!((length_pdf(1.0) - 0.682_265).abs() < 1e-6);
    assert_eq!(length_pdf(2.0), 0.0);
}

#[test]
fn cauchy() {
    assert!((star_pdf(0.0) - 1.0 / PI).abs() < 1e-16);
    assert!((star_pdf(1.0) - 0.5 / PI).abs() < 1e-16);
    assert!((star_cdf(1.0) - 0.75).abs() < 1e-16);
}
