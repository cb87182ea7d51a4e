use num_complex::Complex64;
use randtorus::lame::{
    circle_invariants, integrate_lame, root_function, solve_accessory, LamePaths, Potential, TAU_MAX, TAU_MIN,
};
use randtorus::Error;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Continue `c, s` along the straight path `z(t) = z0 + dir·t` with a plain
/// fixed-step RK4 in complex arithmetic, returning `s/c` at each step.
fn continue_ratio(
    pot: &Potential,
    lambda: f64,
    z0: Complex64,
    dir: Complex64,
    len: f64,
    y0: [Complex64; 4],
) -> Vec<Complex64> {
    let n = 4000;
    let h = len / n as f64;
    let rhs = |t: f64, y: &[Complex64; 4]| -> [Complex64; 4] {
        let q = lambda - pot.eval(z0 + dir * t).unwrap();
        [dir * y[1], dir * q * y[0], dir * y[3], dir * q * y[2]]
    };
    let axpy = |y: &[Complex64; 4], k: &[Complex64; 4], a: f64| -> [Complex64; 4] {
        let mut out = *y;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += ki * a;
        }
        out
    };
    let mut y = y0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 * h;
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = rhs(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = rhs(t + h, &axpy(&y, &k3, h));
        for j in 0..4 {
            y[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
        }
        out.push(y[2] / y[0]);
    }
    out
}

#[test]
fn square_is_symmetric() {
    let s = solve_accessory(1.0).unwrap();
    assert!((s.cross_ratio - 2.0).abs() < 1e-9, "{}", s.cross_ratio);
    assert!((s.circles.a1 - s.circles.a2).abs() < 1e-8);
    assert!((s.circles.r1 - s.circles.r2).abs() < 1e-8);
    assert!((s.modulus - 1.0).abs() < 1e-15);
}

#[test]
fn wronskian_is_conserved() {
    for tau in [0.1, 0.5, 1.0, 3.0, 20.0] {
        let s = solve_accessory(tau).unwrap();
        assert!(s.endpoints.max_wronskian_drift() < 1e-9, "tau={tau}");
        let paths = LamePaths::new(tau).unwrap();
        let (lo, hi) = paths.bracket();
        let d = paths.endpoint_data(0.5 * (lo + hi)).unwrap();
        assert!(d.max_wronskian_drift() < 1e-9, "tau={tau}");
    }
}

#[test]
fn step_halving_agrees() {
    for tau in [0.2, 1.0, 4.0] {
        let paths = LamePaths::new(tau).unwrap();
        let fine = paths.refined().unwrap();
        let (lo, hi) = paths.bracket();
        let lambda = lo + 0.3 * (hi - lo);
        let a = paths.endpoint_data(lambda).unwrap();
        let b = fine.endpoint_data(lambda).unwrap();
        let pairs = [
            (a.c_1, b.c_1),
            (a.cp_1, b.cp_1),
            (a.s_1, b.s_1),
            (a.sp_1, b.sp_1),
            (a.c_it, b.c_it),
            (a.cp_it, b.cp_it),
            (a.s_it_imag, b.s_it_imag),
            (a.sp_it, b.sp_it),
        ];
        for (x, y) in pairs {
            assert!((x - y).abs() <= 1e-10 * (1.0 + y.abs()), "tau={tau}: {x} vs {y}");
        }
    }
}

#[test]
fn far_below_bracket_is_an_error() {
    let paths = LamePaths::new(1.0).unwrap();
    let (lo, _) = paths.bracket();
    let err = paths.endpoint_data(lo - 50.0).unwrap_err();
    assert!(matches!(err, Error::Bracket { .. }), "{err:?}");
    assert!(integrate_lame(1.0, lo - 50.0).is_err());
}

#[test]
fn solved_circles_are_tangent() {
    for tau in [0.05, 0.3, 1.0, 2.5, 10.0, 40.0] {
        let s = solve_accessory(tau).unwrap();
        assert!(s.circles.tangency_residual().abs() < 1e-10, "tau={tau}");
        assert!(s.diagnostics.tangency_residual < 1e-10);
        assert!(
            s.diagnostics.dual_residual < 1e-8,
            "tau={tau}: {}",
            s.diagnostics.dual_residual
        );
        let c = s.cross_ratio;
        assert!((s.cross_ratio_dual - c / (c - 1.0)).abs() < 1e-8 * c);
        assert!(s.lambda_acc > s.bracket.0 && s.lambda_acc < s.bracket.1);
    }
}

#[test]
fn cross_ratio_decreases_in_tau() {
    let taus: Vec<f64> = (1..=10).map(|k| 0.1 * k as f64).collect();
    let crs: Vec<f64> = taus.iter().map(|&t| solve_accessory(t).unwrap().cross_ratio).collect();
    for w in crs.windows(2) {
        assert!(w[0] > w[1], "{crs:?}");
    }
    assert!(crs[0] > 2.0 && (crs[9] - 2.0).abs() < 1e-9);
}

#[test]
fn reciprocal_tau_gives_dual_cross_ratio() {
    for tau in [0.25, 0.5, 0.8] {
        let a = solve_accessory(tau).unwrap().cross_ratio;
        let b = solve_accessory(1.0 / tau).unwrap().cross_ratio;
        assert!((b - a / (a - 1.0)).abs() < 1e-8 * a, "tau={tau}: {a} {b}");
    }
}

#[test]
fn scan_changes_sign_once() {
    let paths = LamePaths::new(0.7).unwrap();
    let scan = paths.scan(40);
    let vals: Vec<f64> = scan.iter().map(|p| p.1).filter(|v| v.is_finite()).collect();
    assert!(vals.len() > 20);
    let changes = vals.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    assert_eq!(changes, 1, "{scan:?}");
    let s = paths.solve().unwrap();
    let d = paths.endpoint_data(s.lambda_acc).unwrap();
    assert!(root_function(&d).abs() < 1e-9);
}

#[test]
fn out_of_range_tau_is_rejected() {
    assert!(solve_accessory(0.5 * TAU_MIN).is_err());
    assert!(solve_accessory(2.0 * TAU_MAX).is_err());
    assert!(solve_accessory(-1.0).is_err());
    assert!(solve_accessory(f64::NAN).is_err());
}

#[test]
fn far_sides_map_onto_the_circles() {
    // continue the solutions past the legs with an independent integrator:
    // the side x = 1 must land on S(a1, r1) and the side y = τ on S(i a2, r2)
    for tau in [0.6, 1.0, 1.7] {
        let s = solve_accessory(tau).unwrap();
        let pot = Potential::new(tau).unwrap();
        let d = s.endpoints;
        let c = circle_invariants(&d).unwrap();
        let y1 = [d.c_1, d.cp_1, d.s_1, d.sp_1].map(|v| Complex64::new(v, 0.0));
        let side1 = continue_ratio(&pot, s.lambda_acc, Complex64::new(1.0, 0.0), I, 0.9 * tau, y1);
        for f in side1.iter().step_by(97) {
            let dev = ((f - c.a1).norm() - c.r1).abs();
            assert!(dev < 1e-8 * c.r1, "tau={tau}: {dev}");
        }
        let y2 = [
            Complex64::new(d.c_it, 0.0),
            -I * d.cp_it,
            I * d.s_it_imag,
            Complex64::new(d.sp_it, 0.0),
        ];
        let side2 = continue_ratio(&pot, s.lambda_acc, I * tau, Complex64::new(1.0, 0.0), 0.9, y2);
        for f in side2.iter().step_by(97) {
            let dev = ((f - I * c.a2).norm() - c.r2).abs();
            assert!(dev < 1e-8 * c.r2, "tau={tau}: {dev}");
        }
    }
}

#[test]
fn record_matches_solve() {
    let s = solve_accessory(2.0).unwrap();
    let r = s.record();
    assert_eq!(r.tau, 2.0);
    assert_eq!(r.modulus, 0.5);
    assert_eq!(r.cross_ratio, s.cross_ratio);
    assert!(r.lambda_lo < r.lambda && r.lambda < r.lambda_hi);
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"cross_ratio\""));
}
