//! Closed-form laws of random ideal quadrilaterals.
//!
//! For four independent uniform points on the circle the cross ratio `λ` has
//! a density invariant under the S4 action; each of the six intervals cut
//! out by `{-1, 0, 1/2, 1, 2}` carries mass 1/6. Restricting to the canonical
//! representative `[Q] ≥ 2` gives the quadrilateral law
//!
//! `X(r) = (6/π²) [ln r / ((r - 1) r) + ln(r/(r - 1)) / r]`, `r ≥ 2`,
//!
//! and pushing forward through `ℓ = 2 arccoth √[Q]` gives the law of the
//! shorter common perpendicular of a random rectangular punctured torus.

pub mod dilog;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use dilog::li2;

use crate::error::{Error, Result};
use crate::hypgeom::length_from_cr;
use crate::numeric::roots::{bisect, newton_bracketed};
use crate::numeric::Quadrature;

const SIX_PI2: f64 = 6.0 / (PI * PI);

/// `log(3 + 2√2) = 2 asinh(1)`: the perpendicular length of the square
/// torus and the right end of the length law.
pub const SQUARE_LENGTH: f64 = 1.762_747_174_039_086;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PdfKind {
    CrossRatioFull,
    QuadCr,
    Length,
    LengthDual,
    LengthSampling,
    NormalizedStar,
}

/// A density together with its support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdfSpec {
    pub kind: PdfKind,
    pub support: (f64, f64),
}

impl PdfSpec {
    pub fn new(kind: PdfKind) -> Self {
        let inf = f64::INFINITY;
        let support = match kind {
            PdfKind::CrossRatioFull | PdfKind::NormalizedStar => (-inf, inf),
            PdfKind::QuadCr => (2.0, inf),
            PdfKind::Length => (0.0, SQUARE_LENGTH),
            PdfKind::LengthDual => (SQUARE_LENGTH, inf),
            PdfKind::LengthSampling => (0.0, inf),
        };
        Self { kind, support }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let inside = x >= self.support.0 && x <= self.support.1;
        match self.kind {
            PdfKind::CrossRatioFull => crossratio_pdf(x),
            PdfKind::QuadCr => quad_cr_pdf(x).unwrap_or(0.0),
            PdfKind::Length => length_pdf(x),
            PdfKind::LengthDual => length_pdf_dual(x),
            PdfKind::LengthSampling if inside && x > 0.0 => 0.5 * length_expr(x),
            PdfKind::LengthSampling => 0.0,
            PdfKind::NormalizedStar => star_pdf(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self.kind {
            PdfKind::CrossRatioFull => crossratio_cdf(x),
            PdfKind::QuadCr if x <= 2.0 => 0.0,
            PdfKind::QuadCr => quad_cr_cdf(x).unwrap_or(1.0),
            PdfKind::Length => length_cdf(x),
            PdfKind::LengthDual if x <= SQUARE_LENGTH => 0.0,
            PdfKind::LengthDual => 1.0 - length_cdf(crate::hypgeom::dual_length(x).unwrap_or(0.0)),
            PdfKind::LengthSampling => length_sampling_cdf(x),
            PdfKind::NormalizedStar => star_cdf(x),
        }
    }

    /// `∫ pdf` over the support by adaptive quadrature, split at the
    /// singular and branch points.
    pub fn total_mass(&self, tol: f64) -> Result<f64> {
        let q = Quadrature::with_tol(tol, tol);
        let f = |x: f64| self.pdf(x);
        Ok(match self.kind {
            PdfKind::CrossRatioFull => {
                q.integrate_from_neg_inf(f, -1.0)?.value
                    + q.integrate_pieces(f, &[-1.0, 0.0, 0.5, 1.0, 2.0])?
                    + q.integrate_to_inf(f, 2.0)?.value
            }
            PdfKind::NormalizedStar => q.integrate_from_neg_inf(f, 0.0)?.value + q.integrate_to_inf(f, 0.0)?.value,
            PdfKind::QuadCr => q.integrate_to_inf(f, 2.0)?.value,
            PdfKind::Length => q.integrate(f, 0.0, SQUARE_LENGTH)?.value,
            PdfKind::LengthDual => q.integrate_to_inf(f, SQUARE_LENGTH)?.value,
            PdfKind::LengthSampling => {
                q.integrate(f, 0.0, SQUARE_LENGTH)?.value + q.integrate_to_inf(f, SQUARE_LENGTH)?.value
            }
        })
    }
}

/// The quadrilateral-law expression, valid as an analytic function on `r > 1`.
fn quad_expr(r: f64) -> f64 {
    SIX_PI2 * (r.ln() / ((r - 1.0) * r) - (-1.0 / r).ln_1p() / r)
}

/// Density of the canonical cross ratio `[Q] ≥ 2`.
pub fn quad_cr_pdf(r: f64) -> Result<f64> {
    if !(r >= 2.0) {
        return Err(Error::domain("quad_cr_pdf", r, "r >= 2"));
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    Ok(quad_expr(r))
}

/// `P([Q] > r) = (12/π²) Li₂(1/r) - (6/π²) ln(1 - 1/r) ln r`.
pub fn quad_cr_sf(r: f64) -> Result<f64> {
    if !(r >= 2.0) {
        return Err(Error::domain("quad_cr_sf", r, "r >= 2"));
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    Ok(2.0 * SIX_PI2 * li2(1.0 / r) - SIX_PI2 * (-1.0 / r).ln_1p() * r.ln())
}

/// `P([Q] ≤ r) = (6/π²)[Li₂(r) - Li₂(r/(r-1))] - (3/π²) ln(r-1) ln((r-1)/r²)`,
/// with `Li₂` the real part of the principal branch for arguments above 1.
pub fn quad_cr_cdf_dilog(r: f64) -> Result<f64> {
    if !(r >= 2.0) {
        return Err(Error::domain("quad_cr_cdf", r, "r >= 2"));
    }
    let l = (r - 1.0).ln();
    Ok(SIX_PI2 * (li2(r) - li2(r / (r - 1.0))) - 0.5 * SIX_PI2 * l * (l - 2.0 * r.ln()))
}

/// Distribution function of `[Q]`. The dilogarithm form is used below the
/// median and the complementary form above it, so both tails keep full
/// relative accuracy.
pub fn quad_cr_cdf(r: f64) -> Result<f64> {
    if !(r >= 2.0) {
        return Err(Error::domain("quad_cr_cdf", r, "r >= 2"));
    }
    if r < 4.7 {
        quad_cr_cdf_dilog(r)
    } else {
        Ok(1.0 - quad_cr_sf(r)?)
    }
}

/// Median `γ` of `[Q]`, by safeguarded Newton on `cdf - 1/2`.
pub fn quad_cr_median() -> f64 {
    newton_bracketed(|r| (quad_cr_cdf(r).unwrap() - 0.5, quad_expr(r)), 4.0, 5.0, 1e-15, 100)
        .expect("median bracketed in [4, 5]")
}

/// The same median by plain bisection.
pub fn quad_cr_median_bisect() -> f64 {
    bisect(|r| quad_cr_cdf(r).unwrap() - 0.5, 4.0, 5.0, 1e-13).expect("median bracketed in [4, 5]")
}

/// `φ` mapping the interval containing `r` onto `(2, ∞)` and `|φ'(r)|`.
fn to_canonical(r: f64) -> (f64, f64) {
    if r > 2.0 {
        (r, 1.0)
    } else if r > 1.0 {
        let d = r - 1.0;
        (r / d, 1.0 / (d * d))
    } else if r > 0.5 {
        let d = 1.0 - r;
        (1.0 / d, 1.0 / (d * d))
    } else if r > 0.0 {
        (1.0 / r, 1.0 / (r * r))
    } else if r > -1.0 {
        (1.0 - 1.0 / r, 1.0 / (r * r))
    } else {
        (1.0 - r, 1.0)
    }
}

/// Density of the cross ratio of four independent uniform points on the
/// circle. Integrable logarithmic singularities at 0 and 1, where `+∞` is
/// returned.
pub fn crossratio_pdf(r: f64) -> f64 {
    if r == 0.0 || r == 1.0 {
        return f64::INFINITY;
    }
    if r.is_infinite() {
        return 0.0;
    }
    if r.is_nan() {
        return f64::NAN;
    }
    let (q, jac) = to_canonical(r);
    quad_expr(q) * jac / 6.0
}

/// Distribution function of the full cross-ratio law, assembled from the
/// six S4 images of the quadrilateral law.
pub fn crossratio_cdf(r: f64) -> f64 {
    let g = |q: f64| quad_cr_cdf(q.max(2.0)).unwrap_or(1.0);
    let s = |q: f64| quad_cr_sf(q.max(2.0)).unwrap_or(0.0);
    let sixth = 1.0 / 6.0;
    if r.is_nan() {
        f64::NAN
    } else if r <= -1.0 {
        sixth * s(1.0 - r)
    } else if r <= 0.0 {
        sixth * (1.0 + if r == 0.0 { 1.0 } else { g(1.0 - 1.0 / r) })
    } else if r <= 0.5 {
        sixth * (2.0 + s(1.0 / r))
    } else if r <= 1.0 {
        sixth * (3.0 + if r == 1.0 { 1.0 } else { g(1.0 / (1.0 - r)) })
    } else if r <= 2.0 {
        sixth * (4.0 + s(r / (r - 1.0)))
    } else {
        sixth * (5.0 + g(r))
    }
}

/// `(6/π²) csch ℓ [4 ln cosh(ℓ/2) + 2(cosh ℓ - 1) ln coth(ℓ/2)]` for `ℓ > 0`.
fn length_expr(ell: f64) -> f64 {
    if ell > 40.0 {
        // leading terms; the remainder is O(ℓ e^{-2ℓ})
        return SIX_PI2 * 4.0 * (-ell).exp() * (ell + 1.0 - 2.0 * std::f64::consts::LN_2);
    }
    let half = 0.5 * ell;
    let sh = half.sinh();
    // ln cosh x = ln(1 + 2 sinh²(x/2)), ln coth x = ln(1 + 2/(e^{2x} - 1))
    let q = (0.5 * half).sinh();
    let ln_cosh = (2.0 * q * q).ln_1p();
    let ln_coth = (2.0 / ell.exp_m1()).ln_1p();
    let cosh_m1 = 2.0 * sh * sh;
    SIX_PI2 / ell.sinh() * (4.0 * ln_cosh + 2.0 * cosh_m1 * ln_coth)
}

/// Density of the shorter perpendicular `ℓ ∈ (0, log(3 + 2√2)]`; zero
/// outside the support.
pub fn length_pdf(ell: f64) -> f64 {
    if ell > 0.0 && ell <= SQUARE_LENGTH {
        length_expr(ell)
    } else {
        0.0
    }
}

/// Density of the longer (dual) perpendicular on `[log(3 + 2√2), ∞)`: the
/// same expression continued past the square length.
pub fn length_pdf_dual(ell: f64) -> f64 {
    if ell >= SQUARE_LENGTH && ell.is_finite() {
        length_expr(ell)
    } else {
        0.0
    }
}

/// Density `X[x]` of either perpendicular chosen with probability 1/2, on
/// `x > 0`. Under it `coth²(x/2)` has the law of an unordered orbit pair
/// `{[Q], [Q]/([Q]-1)}`.
pub fn length_sampling_pdf(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("length_sampling_pdf", x, "x > 0"));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(0.5 * length_expr(x))
}

/// `P(ℓ ≤ x) = P([Q] ≥ coth²(x/2))`.
pub fn length_cdf(ell: f64) -> f64 {
    if ell <= 0.0 {
        0.0
    } else if ell >= SQUARE_LENGTH {
        1.0
    } else {
        let sh = (0.5 * ell).sinh();
        quad_cr_sf(1.0 + 1.0 / (sh * sh)).unwrap_or(0.0)
    }
}

/// Distribution function of `X[x]`.
pub fn length_sampling_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x <= SQUARE_LENGTH {
        0.5 * length_cdf(x)
    } else if x.is_infinite() {
        1.0
    } else {
        // x is the dual of ℓ = dual(x); P(dual ≤ x) = P(ℓ ≥ dual(x))
        let d = crate::hypgeom::dual_length(x).unwrap_or(0.0);
        0.5 + 0.5 * (1.0 - length_cdf(d))
    }
}

/// `E[ℓ]` by adaptive quadrature.
pub fn length_mean() -> Result<f64> {
    Ok(Quadrature::with_tol(1e-13, 1e-13)
        .integrate(|l| l * length_pdf(l), 0.0, SQUARE_LENGTH)?
        .value)
}

/// Median of `ℓ`, the perpendicular length at the median cross ratio.
pub fn length_median() -> f64 {
    length_from_cr(quad_cr_median())
}

/// The standard Cauchy density of `λ* = [i, 1, -1, z₄]`.
pub fn star_pdf(r: f64) -> f64 {
    1.0 / (PI * (1.0 + r * r))
}

pub fn star_cdf(r: f64) -> f64 {
    0.5 + r.atan() / PI
}
