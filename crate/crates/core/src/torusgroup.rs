//! Side-pairing groups of punctured tori built on an ideal quadrilateral,
//! and random sampling of general punctured tori.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closedform::{quad_cr_pdf, quad_cr_sf};
use crate::error::{Error, Result};
use crate::hypgeom::{cross_ratio, length_from_cr, ComplexPoint, IsometricCircle, MoebiusMap};
use crate::numeric::interp::MonotoneCubic;
use crate::numeric::roots::bisect;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Generators `A` (fixing `±1`) and `B` (fixing `±i`) with isometric circles
/// of radii `r` and `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorPair {
    pub a: MoebiusMap,
    pub b: MoebiusMap,
    pub r: f64,
    pub s: f64,
    /// twist parameters; zero for the rectangular pair
    pub lambda_param: f64,
    pub mu_param: f64,
}

impl GeneratorPair {
    /// `A(z) = (√(r²+1) z + 1)/(z + √(r²+1))`, `B(z) = (√(s²+1) z + i)/(-iz + √(s²+1))`,
    /// normalized to determinant one.
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain("GeneratorPair r", r, "r > 0"));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::domain("GeneratorPair s", s, "s > 0"));
        }
        let (rr, ss) = ((r * r + 1.0).sqrt(), (s * s + 1.0).sqrt());
        let a = MoebiusMap::new(c(rr, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(rr, 0.0))?.normalized();
        let b = MoebiusMap::new(c(ss, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(ss, 0.0))?.normalized();
        Ok(Self {
            a,
            b,
            r,
            s,
            lambda_param: 0.0,
            mu_param: 0.0,
        })
    }

    pub fn commutator_trace(&self) -> Complex64 {
        self.a.commutator(&self.b).trace()
    }

    /// `C(A), C(A⁻¹), C(B), C(B⁻¹)`: centers `∓√(r²+1)` and `∓i√(s²+1)`.
    pub fn isometric_circles(&self) -> [IsometricCircle; 4] {
        let (rr, ss) = ((self.r * self.r + 1.0).sqrt(), (self.s * self.s + 1.0).sqrt());
        [
            IsometricCircle {
                center: c(-rr, 0.0),
                radius: self.r,
            },
            IsometricCircle {
                center: c(rr, 0.0),
                radius: self.r,
            },
            IsometricCircle {
                center: c(0.0, -ss),
                radius: self.s,
            },
            IsometricCircle {
                center: c(0.0, ss),
                radius: self.s,
            },
        ]
    }

    /// `|C(A) - C(B)| - (r + s)`: zero iff the circles are tangent, which
    /// happens iff `rs = 1`.
    pub fn tangency_gap(&self) -> f64 {
        let [fa, _, gb, _] = self.isometric_circles();
        (fa.center - gb.center).norm() - (fa.radius + gb.radius)
    }

    /// The four ideal vertices, in counterclockwise order starting in the
    /// third quadrant: `C(A)∩C(B)`, `C(B)∩C(A⁻¹)`, `C(A⁻¹)∩C(B⁻¹)`,
    /// `C(B⁻¹)∩C(A)`. Requires tangency.
    pub fn vertices(&self) -> Result<[Complex64; 4]> {
        self.check_tangent()?;
        let [fa, fi, gb, gi] = self.isometric_circles();
        let touch = |p: IsometricCircle, q: IsometricCircle| {
            let dir = (q.center - p.center) / (q.center - p.center).norm();
            p.center + dir * p.radius
        };
        Ok([touch(fa, gb), touch(gb, fi), touch(fi, gi), touch(gi, fa)])
    }

    fn check_tangent(&self) -> Result<()> {
        let gap = self.tangency_gap();
        if gap.abs() > 1e-10 * (self.r + self.s) {
            return Err(Error::Degenerate(format!(
                "isometric circles not tangent (r s = {}, gap {gap:e})",
                self.r * self.s
            )));
        }
        Ok(())
    }
}

/// The rectangular pair with `s = 1/r`; its commutator is parabolic.
pub fn rectangular_generators(r: f64) -> Result<GeneratorPair> {
    if !(r > 0.0) {
        return Err(Error::domain("rectangular_generators", r, "r > 0"));
    }
    GeneratorPair::new(r, 1.0 / r)
}

/// Canonical cross ratio `1 + r²` of the quadrilateral bounded by the
/// isometric circles of a tangent pair.
pub fn quad_cross_ratio_from_group(pair: &GeneratorPair) -> Result<f64> {
    pair.check_tangent()?;
    Ok(1.0 + pair.r * pair.r)
}

/// The cross ratio of the four tangency vertices, taken in the order
/// `(v₁, v₂, v₃, v₄)` so that it is `1 + r²`.
pub fn quad_cross_ratio_from_vertices(pair: &GeneratorPair) -> Result<f64> {
    let [v1, v2, v3, v4] = pair.vertices()?;
    let p = |z: Complex64| ComplexPoint::Finite(z);
    let cr = cross_ratio(p(v1), p(v2), p(v3), p(v4))?;
    cr.real()
        .ok_or_else(|| Error::Degenerate("vertex cross ratio not real".into()))
}

/// The twisted pairings
///
/// ```text
/// u = [ √(r²+1)√(1+λ²)      λ + i r √(1+λ²) ]
///     [ λ - i r √(1+λ²)     √(r²+1)√(1+λ²)  ]
///
/// v = [ √(1+1/r²)√(1+λ²)    √(1+λ²)/r + iλ  ]
///     [ √(1+λ²)/r - iλ      √(1+1/r²)√(1+λ²) ]
/// ```
///
/// At `λ = 0`, `u` is `B` and `v` is `A` of [`rectangular_generators`].
pub fn nonrectangular_pair(r: f64, lam: f64) -> Result<(MoebiusMap, MoebiusMap)> {
    if !(r > 0.0) {
        return Err(Error::domain("nonrectangular_pair r", r, "r > 0"));
    }
    if !(lam >= 0.0) {
        return Err(Error::domain("nonrectangular_pair lam", lam, "lam >= 0"));
    }
    let l = (1.0 + lam * lam).sqrt();
    let du = (r * r + 1.0).sqrt() * l;
    let u = MoebiusMap::new(c(du, 0.0), c(lam, r * l), c(lam, -r * l), c(du, 0.0))?;
    let dv = (1.0 + 1.0 / (r * r)).sqrt() * l;
    let v = MoebiusMap::new(c(dv, 0.0), c(l / r, lam), c(l / r, -lam), c(dv, 0.0))?;
    Ok((u.normalized(), v.normalized()))
}

/// `tr[u, v] - 2` for independent twists,
/// `-4(λ²(μ²+1) - 2√((λ²+1)(μ²+1)) + μ² + 2)/(λ²μ²)`; equal to `-4`
/// (parabolic commutator) iff `λ = μ`.
pub fn commutator_trace_general(lam: f64, mu: f64, r: f64) -> Result<f64> {
    if !(lam > 0.0) {
        return Err(Error::domain("commutator_trace_general lam", lam, "lam > 0"));
    }
    if !(mu > 0.0) {
        return Err(Error::domain("commutator_trace_general mu", mu, "mu > 0"));
    }
    if !(r > 0.0) {
        return Err(Error::domain("commutator_trace_general r", r, "r > 0"));
    }
    let (l2, m2) = (lam * lam, mu * mu);
    Ok(-4.0 * (l2 * (m2 + 1.0) - 2.0 * ((l2 + 1.0) * (m2 + 1.0)).sqrt() + m2 + 2.0) / (l2 * m2))
}

/// Angle `θ ∈ (0, π/2]` between the dual geodesics of lengths `ℓ₁`, `ℓ₂`,
/// from `sin θ sinh(ℓ₁/2) sinh(ℓ₂/2) = 1`, and the vertex cross ratio
/// `1 + cosh²(ℓ₁/2)/cosh²(ℓ₂/2)` of the corresponding quadrilateral.
pub fn angle_relation(ell1: f64, ell2: f64) -> Result<(f64, f64)> {
    if !(ell1 > 0.0) {
        return Err(Error::domain("angle_relation ell1", ell1, "ell > 0"));
    }
    if !(ell2 > 0.0) {
        return Err(Error::domain("angle_relation ell2", ell2, "ell > 0"));
    }
    let p = (0.5 * ell1).sinh() * (0.5 * ell2).sinh();
    if p < 1.0 {
        return Err(Error::Degenerate(format!(
            "sinh(l1/2) sinh(l2/2) = {p} < 1: no angle closes the torus"
        )));
    }
    let theta = if p == 1.0 { FRAC_PI_2 } else { (1.0 / p).asin() };
    let q = 1.0 + ((0.5 * ell1).cosh() / (0.5 * ell2).cosh()).powi(2);
    Ok((theta, q))
}

/// Inverse-CDF sampler for the canonical cross ratio `[Q] ≥ 2`.
///
/// The survival function is tabulated against `t = 2/[Q] ∈ [0, 1]` on
/// Chebyshev-spaced nodes; each draw inverts the interpolant and takes one
/// Newton step on the exact survival function.
#[derive(Debug, Clone)]
pub struct QuadCrSampler {
    table: MonotoneCubic,
}

impl QuadCrSampler {
    pub const NODES: usize = 2048;

    pub fn new() -> Result<Self> {
        let n = Self::NODES;
        let mut t = Vec::with_capacity(n + 1);
        let mut sf = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let tk = 0.5 * (1.0 - (std::f64::consts::PI * k as f64 / n as f64).cos());
            let v = if k == 0 { 0.0 } else { quad_cr_sf(2.0 / tk)? };
            t.push(tk);
            sf.push(v);
        }
        *t.last_mut().unwrap() = 1.0;
        *sf.last_mut().unwrap() = 1.0;
        Ok(Self {
            table: MonotoneCubic::new(t, sf)?,
        })
    }

    /// The `[Q]` with `P([Q] > q) = p`, for `p ∈ (0, 1]`.
    pub fn quantile_sf(&self, p: f64) -> f64 {
        if p >= 1.0 {
            return 2.0;
        }
        let (t_lo, sf_lo) = {
            let (x, y) = self.table.nodes();
            (x[1], y[1])
        };
        if p < sf_lo {
            // beyond the first interior node: bisect ln q directly
            let lo = (2.0 / t_lo).ln();
            return bisect(|s| quad_cr_sf(s.exp()).unwrap_or(0.0) - p, lo, 745.0, 1e-14)
                .map(f64::exp)
                .unwrap_or(f64::INFINITY);
        }
        let t = self.table.invert(p).unwrap_or(1.0).max(f64::MIN_POSITIVE);
        let q = 2.0 / t;
        let (Ok(s), Ok(d)) = (quad_cr_sf(q), quad_cr_pdf(q)) else {
            return q;
        };
        let next = q + (s - p) / d;
        if next >= 2.0 && next.is_finite() {
            next
        } else {
            q
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // 1 - U with U uniform on [0, 1), so p ∈ (0, 1]
        let p = 1.0 - rng.random::<f64>();
        self.quantile_sf(p)
    }

    /// A draw from `X[x]`: the shorter or the longer perpendicular of a
    /// random quadrilateral with probability 1/2 each.
    pub fn sample_length<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let q = self.sample(rng);
        if rng.random::<bool>() {
            length_from_cr(q)
        } else {
            length_from_cr(q / (q - 1.0))
        }
    }
}

/// A random punctured torus: two dual-geodesic lengths and their angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusSample {
    pub x_sigma: f64,
    pub y_sigma: f64,
    pub theta: f64,
    /// vertex cross ratio `1 + cosh²(x/2)/cosh²(y/2)`
    pub cross_ratio: f64,
}

impl TorusSample {
    /// `sin θ sinh(x/2) sinh(y/2) - 1`
    pub fn relation_residual(&self) -> f64 {
        self.theta.sin() * (0.5 * self.x_sigma).sinh() * (0.5 * self.y_sigma).sinh() - 1.0
    }
}

/// Draws `x, y` independently from `X[x]` until `sinh(x/2) sinh(y/2) ≥ 1`,
/// then sets the angle from the closing relation. Returns the sample and
/// the number of rejected pairs.
pub fn sample_torus_with<R: Rng + ?Sized>(sampler: &QuadCrSampler, rng: &mut R) -> (TorusSample, usize) {
    let mut rejected = 0;
    loop {
        let x = sampler.sample_length(rng);
        let y = sampler.sample_length(rng);
        if let Ok((theta, q)) = angle_relation(x, y) {
            let s = TorusSample {
                x_sigma: x,
                y_sigma: y,
                theta,
                cross_ratio: q,
            };
            return (s, rejected);
        }
        rejected += 1;
    }
}

/// One torus from a seed.
pub fn sample_torus(seed: u64) -> Result<TorusSample> {
    let sampler = QuadCrSampler::new()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_torus_with(&sampler, &mut rng).0)
}
