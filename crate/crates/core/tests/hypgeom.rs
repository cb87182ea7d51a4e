use num_complex::Complex64;
use randtorus::hypgeom::*;
use std::f64::consts::FRAC_PI_4;

fn c(re: f64, im: f64) -> ComplexPoint {
    ComplexPoint::new(re, im)
}

#[test]
fn square_has_cross_ratio_two() {
    let cr = cross_ratio(c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)).unwrap();
    assert!((cr.value - Complex64::new(2.0, 0.0)).norm() < 1e-15);
}

#[test]
fn symmetric_quadrilateral() {
    let t = FRAC_PI_4;
    let e = Complex64::from_polar(1.0, t);
    let cr = cross_ratio(e.into(), (-e.conj()).into(), (-e).into(), e.conj().into()).unwrap();
    assert!((cr.value.re - 1.0 / t.cos().powi(2)).abs() < 1e-14);
    assert!((cr.canonical.unwrap() - 2.0).abs() < 1e-14);
}

#[test]
fn collinear_real_points() {
    let cr = cross_ratio((-3.0).into(), (-1.0).into(), 1.0.into(), 3.0.into()).unwrap();
    assert!((cr.value.re - 4.0).abs() < 1e-15);
    assert_eq!(cr.canonical, Some(4.0));
}

#[test]
fn infinity_matches_limit() {
    let big = 1e9;
    let pts = [c(0.3, 0.1), c(-1.0, 2.0), c(0.5, -0.7)];
    for slot in 0..4 {
        let mut with_inf = Vec::new();
        let mut with_big = Vec::new();
        let mut k = 0;
        for i in 0..4 {
            if i == slot {
                with_inf.push(ComplexPoint::Infinity);
                with_big.push(c(big, big));
            } else {
                with_inf.push(pts[k]);
                with_big.push(pts[k]);
                k += 1;
            }
        }
        let a = cross_ratio(with_inf[0], with_inf[1], with_inf[2], with_inf[3]).unwrap();
        let b = cross_ratio(with_big[0], with_big[1], with_big[2], with_big[3]).unwrap();
        assert!((a.value - b.value).norm() < 1e-7 * a.value.norm(), "slot {slot}");
    }
}

#[test]
fn coincident_points_rejected() {
    assert!(cross_ratio(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)).is_err());
    assert!(cross_ratio(
        ComplexPoint::Infinity,
        ComplexPoint::Infinity,
        c(0.0, 1.0),
        c(-1.0, 0.0)
    )
    .is_err());
}

#[test]
fn orbits() {
    let o = s4_orbit(2.0).unwrap();
    let mut sorted = o.to_vec();
    sorted.sort_by(f64::total_cmp);
    assert_eq!(sorted, vec![-1.0, -1.0, 0.5, 0.5, 2.0, 2.0]);
    let o = s4_orbit(0.5).unwrap();
    for v in [0.5, 2.0, -1.0] {
        assert!(o.iter().any(|x| (x - v).abs() < 1e-15));
    }
    let o = s4_orbit(3.0).unwrap();
    let expect = [3.0, -2.0, 1.5, 1.0 / 3.0, -0.5, 2.0 / 3.0];
    for (a, b) in o.iter().zip(expect) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(s4_orbit(0.0).is_err());
    assert!(s4_orbit(1.0).is_err());
}

#[test]
fn perpendicular_lengths() {
    let l = perpendicular_length_from_cr(2.0).unwrap();
    assert!((l - 1.762_747_174_039_086).abs() < 1e-14);
    let q = 1.0 / (0.5f64).tanh().powi(2);
    assert!((perpendicular_length_from_cr(q).unwrap() - 1.0).abs() < 1e-14);
    let l5 = perpendicular_length_from_cr(5.0).unwrap();
    let expect = ((5f64.sqrt() + 1.0) / (5f64.sqrt() - 1.0)).ln();
    assert!((l5 - expect).abs() < 1e-15);
    assert!((l5 - 0.9624).abs() < 1e-4);
    assert!(perpendicular_length_from_cr(1.9).is_err());
    // r = csch(ℓ/2) gives [Q] = 1 + r²
    let r = isometric_radius_from_length(l5).unwrap();
    assert!((1.0 + r * r - 5.0).abs() < 1e-13);
}

#[test]
fn duality() {
    let square = (3.0 + 2.0 * 2f64.sqrt()).ln();
    assert!((dual_length(square).unwrap() - square).abs() < 1e-14);
    for x in [0.1, 1.0, 5.0] {
        let back = dual_length(dual_length(x).unwrap()).unwrap();
        assert!((back - x).abs() < 1e-12 * x.max(1.0));
    }
    assert!(dual_length(0.0).is_err());
    // dual lengths correspond to the orbit partner q/(q-1)
    let q = 7.0;
    let pair = GeodesicLengthPair::from_cross_ratio(q).unwrap();
    assert!(pair.rectangular_defect().abs() < 1e-13);
    assert!((cr_from_length(pair.ell_s).unwrap() - q / (q - 1.0)).abs() < 1e-12);
}

#[test]
fn moebius_basics() {
    let m = MoebiusMap::new(
        Complex64::new(2.0, 1.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, -1.0),
    )
    .unwrap();
    let id = m * m.inverse();
    assert!(id.distance_projective(&MoebiusMap::identity()) < 1e-14);
    assert!((m.normalized().det() - 1.0).norm() < 1e-14);
    for p in m.fixed_points() {
        let z = p.finite().unwrap();
        let w = m.apply(p).finite().unwrap();
        assert!((z - w).norm() < 1e-12);
    }
    assert!(MoebiusMap::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(4.0, 0.0)
    )
    .is_err());
}
