use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use randtorus::closedform::{length_sampling_cdf, quad_cr_cdf};
use randtorus::hypgeom::{ComplexPoint, MoebiusMap};
use randtorus::mc::ks_distance;
use randtorus::torusgroup::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn image(m: &MoebiusMap, z: Complex64) -> Complex64 {
    m.apply(ComplexPoint::Finite(z)).finite().unwrap()
}

#[test]
fn rectangular_pair_has_parabolic_commutator() {
    for r in [0.3, 1.0, 2.0, 7.5] {
        let g = rectangular_generators(r).unwrap();
        let t = g.commutator_trace();
        assert!(
            (t - c(-2.0, 0.0)).norm() < 1e-10 * (1.0 + r * r + 1.0 / (r * r)),
            "r={r}: {t}"
        );
        assert!((g.a.trace() - c(2.0 * (r * r + 1.0).sqrt() / r, 0.0)).norm() < 1e-12 * (1.0 + 1.0 / r));
        assert!(g.tangency_gap().abs() < 1e-12 * (r + 1.0 / r));
    }
}

#[test]
fn general_pair_commutator_trace() {
    for (r, s) in [(0.5, 3.0), (1.0, 1.0), (2.0, 0.7)] {
        let g = GeneratorPair::new(r, s).unwrap();
        let expect = 2.0 - 4.0 / (r * r * s * s);
        assert!((g.commutator_trace() - c(expect, 0.0)).norm() < 1e-10 * (1.0 + expect.abs()));
    }
    assert!(GeneratorPair::new(0.0, 1.0).is_err());
    assert!(GeneratorPair::new(1.0, -1.0).is_err());
}

#[test]
fn isometric_circles_match_the_maps() {
    let r = 1.8;
    let g = rectangular_generators(r).unwrap();
    let [fa, fi, gb, gi] = g.isometric_circles();
    let close = |p: randtorus::hypgeom::IsometricCircle, q: randtorus::hypgeom::IsometricCircle| {
        (p.center - q.center).norm() < 1e-12 && (p.radius - q.radius).abs() < 1e-12
    };
    assert!(close(fa, g.a.isometric_circle().unwrap()));
    assert!(close(fi, g.a.inverse().isometric_circle().unwrap()));
    assert!(close(gb, g.b.isometric_circle().unwrap()));
    assert!(close(gi, g.b.inverse().isometric_circle().unwrap()));
    for circ in [fa, fi, gb, gi] {
        assert!(circ.orthogonality_defect().abs() < 1e-12);
    }
    // A carries its isometric circle onto that of its inverse
    for k in 0..8 {
        let z = fa.center + Complex64::from_polar(fa.radius, 0.7 * k as f64);
        let w = image(&g.a, z);
        assert!(((w - fi.center).norm() - fi.radius).abs() < 1e-10);
    }
}

#[test]
fn quadrilateral_cross_ratio() {
    for (r, q) in [(0.5, 1.25), (1.0, 2.0), (3.0, 10.0)] {
        let g = rectangular_generators(r).unwrap();
        assert!((quad_cross_ratio_from_group(&g).unwrap() - q).abs() < 1e-12);
        assert!(
            (quad_cross_ratio_from_vertices(&g).unwrap() - q).abs() < 1e-10 * q,
            "r={r}"
        );
        for v in g.vertices().unwrap() {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }
    let loose = GeneratorPair::new(1.0, 2.0).unwrap();
    assert!(quad_cross_ratio_from_group(&loose).is_err());
    assert!(loose.vertices().is_err());
}

#[test]
fn zero_twist_recovers_rectangular_pair() {
    for r in [0.4, 1.0, 2.5] {
        let g = rectangular_generators(r).unwrap();
        let (u, v) = nonrectangular_pair(r, 0.0).unwrap();
        assert!(u.distance_projective(&g.b) < 1e-12, "r={r}");
        assert!(v.distance_projective(&g.a) < 1e-12, "r={r}");
    }
}

#[test]
fn twisted_pair_traces() {
    let (u, v) = nonrectangular_pair(1.0, 1.0).unwrap();
    let t = u.trace();
    assert!((t * t - c(4.0, 0.0) - c(12.0, 0.0)).norm() < 1e-12);
    assert!((v.trace() - t).norm() < 1e-12);
    for r in [0.5, 1.0, 3.0] {
        for lam in [0.2, 1.0, 4.0] {
            let (u, v) = nonrectangular_pair(r, lam).unwrap();
            assert!((u.det() - c(1.0, 0.0)).norm() < 1e-12);
            assert!((v.det() - c(1.0, 0.0)).norm() < 1e-12);
            let t = u.commutator(&v).trace();
            assert!((t - c(-2.0, 0.0)).norm() < 1e-9, "r={r} lam={lam}: {t}");
        }
    }
}

#[test]
fn twisted_generators_have_antipodal_fixed_points() {
    for lam in [0.0, 0.5, 2.0] {
        let (u, v) = nonrectangular_pair(1.7, lam).unwrap();
        for m in [u, v] {
            let fp: Vec<Complex64> = m.fixed_points().iter().map(|p| p.finite().unwrap()).collect();
            assert_eq!(fp.len(), 2);
            assert!((fp[0].norm() - 1.0).abs() < 1e-12);
            assert!((fp[0] + fp[1]).norm() < 1e-12);
        }
    }
}

#[test]
fn twisted_generators_pair_opposite_sides() {
    let r = 1.7;
    let [v1, v2, v3, v4] = rectangular_generators(r).unwrap().vertices().unwrap();
    let (u, v) = nonrectangular_pair(r, 0.6).unwrap();
    // u: side on C(B) to side on C(B⁻¹); v: side on C(A) to side on C(A⁻¹)
    assert!((image(&u, v1) - v4).norm() < 1e-12);
    assert!((image(&u, v2) - v3).norm() < 1e-12);
    assert!((image(&v, v1) - v2).norm() < 1e-12);
    assert!((image(&v, v4) - v3).norm() < 1e-12);
}

/// Half-translation square roots of the rectangular generators and the
/// commuting maps with the same axes.
struct Composition {
    sqrt_f: MoebiusMap,
    sqrt_g: MoebiusMap,
}

impl Composition {
    fn new(r: f64) -> Self {
        let s = 1.0 / r;
        let (rr, ss) = ((r * r + 1.0).sqrt(), (s * s + 1.0).sqrt());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let df = h / (r * rr - r * r).sqrt();
        let of = h * ((1.0 / (r * r) + 1.0).sqrt() - 1.0).sqrt();
        let dg = h / (s * (ss - s)).sqrt();
        let og = h * ((1.0 / (s * s) + 1.0).sqrt() - 1.0).sqrt();
        Self {
            sqrt_f: MoebiusMap::new(c(df, 0.0), c(of, 0.0), c(of, 0.0), c(df, 0.0)).unwrap(),
            sqrt_g: MoebiusMap::new(c(dg, 0.0), c(0.0, og), c(0.0, -og), c(dg, 0.0)).unwrap(),
        }
    }

    fn a_tilde(x: f64) -> MoebiusMap {
        let d = (1.0 / (x * x) + 1.0).sqrt();
        MoebiusMap::new(c(d, 0.0), c(1.0 / x, 0.0), c(1.0 / x, 0.0), c(d, 0.0)).unwrap()
    }

    fn b_tilde(x: f64) -> MoebiusMap {
        let d = (1.0 / (x * x) + 1.0).sqrt();
        MoebiusMap::new(c(d, 0.0), c(0.0, 1.0 / x), c(0.0, -1.0 / x), c(d, 0.0)).unwrap()
    }

    fn u(&self, mu: f64) -> MoebiusMap {
        self.sqrt_f * Self::b_tilde(mu) * self.sqrt_f
    }

    fn v(&self, lam: f64) -> MoebiusMap {
        self.sqrt_g * Self::a_tilde(lam) * self.sqrt_g
    }
}

#[test]
fn square_roots_square_to_the_generators() {
    for r in [0.6, 1.0, 1.7] {
        let g = rectangular_generators(r).unwrap();
        let comp = Composition::new(r);
        assert!((comp.sqrt_f * comp.sqrt_f).distance_projective(&g.a) < 1e-12);
        assert!((comp.sqrt_g * comp.sqrt_g).distance_projective(&g.b) < 1e-12);
    }
}

#[test]
fn composition_route_reproduces_twisted_pair() {
    for r in [0.6, 1.0, 1.7] {
        let comp = Composition::new(r);
        for lam in [0.3, 0.6, 2.0] {
            let (u, v) = nonrectangular_pair(r, lam).unwrap();
            assert!(comp.v(1.0 / lam).distance_projective(&u) < 1e-10, "r={r} lam={lam}");
            assert!(comp.u(1.0 / lam).distance_projective(&v) < 1e-10, "r={r} lam={lam}");
        }
    }
}

#[test]
fn commutator_formula_matches_matrices() {
    for r in [1.0, 1.7] {
        let comp = Composition::new(r);
        for (lam, mu) in [(1.0, 2.0), (0.5, 3.0), (1.3, 1.3)] {
            let direct = comp.u(mu).commutator(&comp.v(lam)).trace() - c(2.0, 0.0);
            let formula = commutator_trace_general(lam, mu, r).unwrap();
            assert!(
                (direct - c(formula, 0.0)).norm() < 1e-9,
                "r={r} ({lam},{mu}): {direct} vs {formula}"
            );
            let swapped = commutator_trace_general(mu, lam, r).unwrap();
            assert!((formula - swapped).abs() < 1e-12);
        }
    }
    for lam in [0.2, 1.0, 5.0] {
        assert!((commutator_trace_general(lam, lam, 2.0).unwrap() + 4.0).abs() < 1e-12);
    }
    assert!(commutator_trace_general(0.0, 1.0, 1.0).is_err());
}

#[test]
fn angle_relation_examples() {
    // the square torus: both lengths 2 asinh(1), right angle, cross ratio 2
    let l = 2.0 * 1f64.asinh();
    let (theta, q) = angle_relation(l, l).unwrap();
    assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    assert!((q - 2.0).abs() < 1e-15);
    let (theta, q) = angle_relation(3.0, 4.0).unwrap();
    assert!((theta.sin() * 1.5f64.sinh() * 2f64.sinh() - 1.0).abs() < 1e-14);
    assert!((q - 1.0 - (1.5f64.cosh() / 2f64.cosh()).powi(2)).abs() < 1e-14);
    assert!(angle_relation(0.5, 0.5).is_err());
    assert!(angle_relation(-1.0, 3.0).is_err());
}

#[test]
fn quad_cr_sampler_follows_the_law() {
    let sampler = QuadCrSampler::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut qs: Vec<f64> = (0..200_000).map(|_| sampler.sample(&mut rng)).collect();
    assert!(qs.iter().all(|&q| q >= 2.0));
    qs.sort_by(f64::total_cmp);
    let ks = ks_distance(&qs, |x| quad_cr_cdf(x).unwrap_or(0.0));
    assert!(ks < 0.005, "{ks}");
    for p in [0.9, 0.5, 1e-3, 1e-9] {
        let q = sampler.quantile_sf(p);
        let back = randtorus::closedform::quad_cr_sf(q).unwrap();
        assert!((back - p).abs() < 1e-9 * p.max(1e-3), "p={p}: {back}");
    }
}

#[test]
fn length_draws_follow_the_sampling_law() {
    let sampler = QuadCrSampler::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut xs: Vec<f64> = (0..200_000).map(|_| sampler.sample_length(&mut rng)).collect();
    assert!(xs.iter().all(|&x| x > 0.0));
    xs.sort_by(f64::total_cmp);
    let ks = ks_distance(&xs, length_sampling_cdf);
    assert!(ks < 0.005, "{ks}");
}

#[test]
fn sampled_tori_close_up() {
    let sampler = QuadCrSampler::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut rejected = 0;
    for _ in 0..2000 {
        let (t, rej) = sample_torus_with(&sampler, &mut rng);
        rejected += rej;
        assert!(t.x_sigma > 0.0 && t.y_sigma > 0.0);
        assert!(t.theta > 0.0 && t.theta <= std::f64::consts::FRAC_PI_2);
        assert!(t.cross_ratio > 1.0);
        assert!(t.relation_residual().abs() < 1e-12);
    }
    assert!(rejected < 2000 * 10);
    assert_eq!(sample_torus(42).unwrap(), sample_torus(42).unwrap());
}
