use randtorus::closedform::li2;
use std::f64::consts::PI;

const PI2_6: f64 = PI * PI / 6.0;

#[test]
fn special_values() {
    assert_eq!(li2(0.0), 0.0);
    assert_eq!(li2(1.0), PI2_6);
    assert!((li2(-1.0) + PI * PI / 12.0).abs() < 1e-15);
    let l2 = 2f64.ln();
    assert!((li2(0.5) - (PI * PI / 12.0 - 0.5 * l2 * l2)).abs() < 1e-16);
    // Re Li₂(2) = π²/4
    assert!((li2(2.0) - PI * PI / 4.0).abs() < 1e-15);
}

#[test]
fn reflection_identity() {
    for k in 1..200 {
        let x = k as f64 / 200.0;
        let lhs = li2(x) + li2(1.0 - x);
        let rhs = PI2_6 - x.ln() * (1.0 - x).ln();
        assert!((lhs - rhs).abs() < 1e-14, "{x}");
    }
}

#[test]
fn matches_power_series_and_quadrature() {
    for x in [-0.9f64, -0.3, 0.1, 0.45, 0.7, 0.99] {
        let direct: f64 = (1..20_000).map(|k| x.powi(k) / (k * k) as f64).sum();
        assert!((li2(x) - direct).abs() < 1e-12, "{x}");
    }
    let q = randtorus::numeric::Quadrature::with_tol(1e-14, 1e-14);
    for x in [-7.5, -1.3, 3.0, 12.0] {
        // Re Li₂(x) = -∫₀ˣ ln|1 - t|/t dt
        let v = if x < 0.0 {
            -q.integrate(|t| -(1.0 - t).abs().ln() / t, x, 0.0).unwrap().value
        } else {
            q.integrate_pieces(
                |t| if t == 0.0 { 1.0 } else { -(1.0 - t).abs().ln() / t },
                &[0.0, 1.0, x],
            )
            .unwrap()
        };
        assert!((li2(x) - v).abs() < 1e-11, "{x}: {} vs {v}", li2(x));
    }
}
