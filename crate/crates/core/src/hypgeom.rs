//! Möbius and cross-ratio algebra, plus the elementary conversions between
//! cross ratios of ideal quadrilaterals and hyperbolic lengths.

use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComplexPoint {
    Finite(Complex64),
    Infinity,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPoint::Finite(Complex64::new(re, im))
    }

    pub fn on_circle(theta: f64) -> Self {
        ComplexPoint::Finite(Complex64::from_polar(1.0, theta))
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            ComplexPoint::Finite(z) => Some(*z),
            ComplexPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ComplexPoint::Infinity)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ComplexPoint::Finite(z)
        } else {
            ComplexPoint::Infinity
        }
    }
}

impl From<f64> for ComplexPoint {
    fn from(x: f64) -> Self {
        Complex64::new(x, 0.0).into()
    }
}

/// Relative size of the imaginary part below which a cross ratio is treated
/// as real (the four points concyclic).
pub const REAL_TOL: f64 = 1e-9;

/// Cross ratio together with its S4 orbit and, for concyclic points, the
/// canonical representative `>= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossRatio {
    pub value: Complex64,
    pub orbit: [Complex64; 6],
    pub canonical: Option<f64>,
}

impl CrossRatio {
    pub fn from_value(value: Complex64) -> Result<Self> {
        if value.norm() == 0.0 || (value - 1.0).norm() == 0.0 || !value.is_finite() {
            return Err(Error::Degenerate(format!("cross ratio {value} has a degenerate orbit")));
        }
        let one = Complex64::new(1.0, 0.0);
        let orbit = [
            value,
            one - value,
            value / (value - one),
            one / value,
            one / (one - value),
            one - one / value,
        ];
        let canonical = if value.im.abs() <= REAL_TOL * value.norm().max(1.0) {
            Some(canonical_representative(value.re)?)
        } else {
            None
        };
        Ok(Self {
            value,
            orbit,
            canonical,
        })
    }

    pub fn real(&self) -> Option<f64> {
        self.canonical.map(|_| self.value.re)
    }
}

fn diff(a: &ComplexPoint, b: &ComplexPoint) -> Option<Complex64> {
    Some(a.finite()? - b.finite()?)
}

/// `[z1, z2, z3, z4] = (z1 - z3)(z2 - z4) / ((z1 - z2)(z3 - z4))`.
///
/// One of the points may be infinite; the two factors containing it cancel.
pub fn cross_ratio(z1: ComplexPoint, z2: ComplexPoint, z3: ComplexPoint, z4: ComplexPoint) -> Result<CrossRatio> {
    let pts = [z1, z2, z3, z4];
    let infinite = pts.iter().filter(|p| p.is_infinite()).count();
    if infinite > 1 {
        return Err(Error::Degenerate("more than one point at infinity".into()));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if let Some(d) = diff(&pts[i], &pts[j]) {
                if d.norm() == 0.0 {
                    return Err(Error::Degenerate(format!("points {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
    }
    let value = match pts.iter().position(|p| p.is_infinite()) {
        None => {
            let (a, b, c, d) = (
                z1.finite().unwrap(),
                z2.finite().unwrap(),
                z3.finite().unwrap(),
                z4.finite().unwrap(),
            );
            (a - c) * (b - d) / ((a - b) * (c - d))
        }
        Some(0) => diff(&z2, &z4).unwrap() / diff(&z3, &z4).unwrap(),
        Some(1) => -diff(&z1, &z3).unwrap() / diff(&z3, &z4).unwrap(),
        Some(2) => -diff(&z2, &z4).unwrap() / diff(&z1, &z2).unwrap(),
        Some(_) => diff(&z1, &z3).unwrap() / diff(&z1, &z2).unwrap(),
    };
    CrossRatio::from_value(value)
}

/// The six values `λ, 1-λ, λ/(λ-1), 1/λ, 1/(1-λ), 1-1/λ`.
pub fn s4_orbit(lambda: f64) -> Result<[f64; 6]> {
    if lambda == 0.0 || lambda == 1.0 || !lambda.is_finite() {
        return Err(Error::domain("s4_orbit", lambda, "lambda not in {0, 1}"));
    }
    Ok([
        lambda,
        1.0 - lambda,
        lambda / (lambda - 1.0),
        1.0 / lambda,
        1.0 / (1.0 - lambda),
        1.0 - 1.0 / lambda,
    ])
}

/// The orbit element in `[2, inf)`. Every real orbit has exactly one value in
/// each of the six intervals cut out by `{-1, 0, 1/2, 1, 2}`, so this is the
/// orbit maximum; the symmetric configuration `{-1, 1/2, 2}` returns 2.
pub fn canonical_representative(lambda: f64) -> Result<f64> {
    let orbit = s4_orbit(lambda)?;
    Ok(orbit.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(2.0))
}

/// Length of the shorter common perpendicular between opposite sides of an
/// ideal quadrilateral with canonical cross ratio `q >= 2`:
/// `log((√q + 1)/(√q - 1))`.
pub fn perpendicular_length_from_cr(q: f64) -> Result<f64> {
    if !(q >= 2.0) || !q.is_finite() {
        return Err(Error::domain("perpendicular_length_from_cr", q, "q >= 2"));
    }
    Ok(length_from_cr(q))
}

/// `log((√q + 1)/(√q - 1))` for any `q > 1`; the dual branch `q ∈ (1, 2)`
/// gives the length of the dual perpendicular.
pub(crate) fn length_from_cr(q: f64) -> f64 {
    let root = q.sqrt();
    (2.0 / (root - 1.0)).ln_1p()
}

/// Inverse of [`perpendicular_length_from_cr`]: `coth²(ℓ/2) = 1 + csch²(ℓ/2)`.
pub fn cr_from_length(ell: f64) -> Result<f64> {
    if !(ell > 0.0) {
        return Err(Error::domain("cr_from_length", ell, "length > 0"));
    }
    let sh = (0.5 * ell).sinh();
    Ok(1.0 + 1.0 / (sh * sh))
}

/// Radius of the isometric circle of the side pairing whose translation
/// length is `ell`: `[Q] = 1 + r²` with `r = csch(ℓ/2)`.
pub fn isometric_radius_from_length(ell: f64) -> Result<f64> {
    if !(ell > 0.0) {
        return Err(Error::domain("isometric_radius_from_length", ell, "length > 0"));
    }
    Ok(1.0 / (0.5 * ell).sinh())
}

/// Length of the dual perpendicular of a rectangular torus,
/// `sinh(ℓ_r / 2) sinh(ℓ_s / 2) = 1`. An involution whose fixed point is the
/// square torus length `2 asinh(1) = log(3 + 2√2)`.
pub fn dual_length(ell: f64) -> Result<f64> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(Error::domain("dual_length", ell, "length > 0"));
    }
    Ok(2.0 * (1.0 / (0.5 * ell).sinh()).asinh())
}

/// Lengths of the two dual perpendiculars of a rectangular punctured torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicLengthPair {
    pub ell_r: f64,
    pub ell_s: f64,
}

impl GeodesicLengthPair {
    pub fn from_cross_ratio(q: f64) -> Result<Self> {
        let ell_r = perpendicular_length_from_cr(q)?;
        Ok(Self {
            ell_r,
            ell_s: dual_length(ell_r)?,
        })
    }

    /// `sinh(ℓ_r/2) sinh(ℓ_s/2) - 1`, zero for rectangular tori.
    pub fn rectangular_defect(&self) -> f64 {
        (0.5 * self.ell_r).sinh() * (0.5 * self.ell_s).sinh() - 1.0
    }
}

/// A Möbius map `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.det().norm() == 0.0 {
            return Err(Error::Degenerate("singular Möbius matrix".into()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Scale to determinant 1; of the two square roots, the one giving a
    /// trace with positive real part (or positive imaginary part when the real
    /// part vanishes) is kept.
    pub fn normalized(&self) -> Self {
        let k = self.det().sqrt();
        let mut m = Self {
            a: self.a / k,
            b: self.b / k,
            c: self.c / k,
            d: self.d / k,
        };
        let t = m.trace();
        if t.re < 0.0 || (t.re == 0.0 && t.im < 0.0) {
            m = m.scale(Complex64::new(-1.0, 0.0));
        }
        m
    }

    fn scale(&self, k: Complex64) -> Self {
        Self {
            a: self.a * k,
            b: self.b * k,
            c: self.c * k,
            d: self.d * k,
        }
    }

    /// Inverse with the same determinant (adjugate).
    pub fn inverse(&self) -> Self {
        let det = self.det();
        Self {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        }
    }

    pub fn apply(&self, z: ComplexPoint) -> ComplexPoint {
        match z {
            ComplexPoint::Infinity => {
                if self.c.norm() == 0.0 {
                    ComplexPoint::Infinity
                } else {
                    ComplexPoint::Finite(self.a / self.c)
                }
            }
            ComplexPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    ComplexPoint::Infinity
                } else {
                    ComplexPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// `[self, other] = self · other · self⁻¹ · other⁻¹`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other * self.inverse() * other.inverse()
    }

    /// Fixed points of the map (one for parabolics, none for the identity).
    pub fn fixed_points(&self) -> Vec<ComplexPoint> {
        let m = self.normalized();
        if m.c.norm() < 1e-300 {
            // z ↦ (a z + b)/d: infinity plus one finite point unless parabolic
            let mut v = vec![ComplexPoint::Infinity];
            if (m.a - m.d).norm() > 0.0 {
                v.push(ComplexPoint::Finite(m.b / (m.d - m.a)));
            }
            return v;
        }
        // c z² + (d - a) z - b = 0
        let disc = ((m.a + m.d) * (m.a + m.d) - 4.0).sqrt();
        let z1 = (m.a - m.d + disc) / (2.0 * m.c);
        let z2 = (m.a - m.d - disc) / (2.0 * m.c);
        if disc.norm() == 0.0 {
            vec![ComplexPoint::Finite(z1)]
        } else {
            vec![ComplexPoint::Finite(z1), ComplexPoint::Finite(z2)]
        }
    }

    /// The isometric circle `|cz + d| = 1` of the determinant-one form.
    pub fn isometric_circle(&self) -> Option<IsometricCircle> {
        let m = self.normalized();
        if m.c.norm() == 0.0 {
            return None;
        }
        Some(IsometricCircle {
            center: -m.d / m.c,
            radius: 1.0 / m.c.norm(),
        })
    }

    /// Entrywise distance to `other` modulo the overall sign.
    pub fn distance_projective(&self, other: &Self) -> f64 {
        let (p, q) = (self.normalized(), other.normalized());
        let d = |s: f64| {
            [(p.a - q.a * s), (p.b - q.b * s), (p.c - q.c * s), (p.d - q.d * s)]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        };
        d(1.0).min(d(-1.0))
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, o: MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// A circle `|z - center| = radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometricCircle {
    pub center: Complex64,
    pub radius: f64,
}

impl IsometricCircle {
    /// `|center|² - 1 - radius²`; zero iff the circle is orthogonal to the
    /// unit circle.
    pub fn orthogonality_defect(&self) -> f64 {
        self.center.norm_sqr() - 1.0 - self.radius * self.radius
    }
}
