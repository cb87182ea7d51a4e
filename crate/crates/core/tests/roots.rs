use randtorus::numeric::roots::*;

#[test]
fn solvers_agree_on_cubic() {
    let f = |x: f64| x * x * x - 2.0 * x - 5.0;
    let r1 = bisect(f, 2.0, 3.0, 1e-14).unwrap();
    let r2 = brent(f, 2.0, 3.0, 1e-15, 100).unwrap();
    let r3 = newton_bracketed(|x| (f(x), 3.0 * x * x - 2.0), 2.0, 3.0, 1e-15, 100).unwrap();
    let exact = 2.094_551_481_542_326_6;
    for r in [r1, r2, r3] {
        assert!((r - exact).abs() < 1e-13, "{r}");
    }
}

#[test]
fn no_sign_change_is_an_error() {
    assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 50).is_err());
    assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
}

#[test]
fn predicate_boundary() {
    let b = bisect_predicate(|x| x > 0.3, 0.0, 1.0, 1e-13);
    assert!((b - 0.3).abs() < 1e-12);
}
