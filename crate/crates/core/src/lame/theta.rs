//! Jacobi theta functions by direct q-series.
//!
//! Conventions: `θ1(u) = 2 Σ (-1)^n q^{(n+1/2)²} sin((2n+1)u)`,
//! `θ2(u) = 2 Σ q^{(n+1/2)²} cos((2n+1)u)`, `θ3(u) = 1 + 2 Σ q^{n²} cos(2nu)`,
//! `θ4(u) = 1 + 2 Σ (-1)^n q^{n²} cos(2nu)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 2000;

/// Half-period ratio `τ` together with the nome `q = exp(-π/τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub tau: f64,
    pub q: f64,
}

impl ThetaParams {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain("ThetaParams", tau, "tau > 0"));
        }
        Ok(Self {
            tau,
            q: (-PI / tau).exp(),
        })
    }
}

fn check_nome(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::Convergence(format!("theta series diverge for nome q = {q}")))
    }
}

/// Sum `Σ_n w(n) q^{e(n)} trig(n)` until the terms are negligible against the
/// running sum (and the exponent growth has turned over).
fn series<F: Fn(usize) -> (f64, Complex64)>(q: f64, term: F) -> Result<Complex64> {
    let lq = q.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for n in 0..MAX_TERMS {
        let (expo, t) = term(n);
        let v = t * (expo * lq).exp();
        acc += v;
        let mag = v.norm();
        if mag <= 1e-18 * acc.norm().max(1e-300) && mag <= prev {
            return Ok(acc);
        }
        if mag == 0.0 && n > 0 {
            return Ok(acc);
        }
        prev = mag;
    }
    Err(Error::Convergence(format!("theta series did not converge for q = {q}")))
}

pub fn theta1(u: Complex64, q: f64) -> Result<Complex64> {
    check_nome(q)?;
    let s = series(q, |n| {
        let k = n as f64 + 0.5;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        (k * k, sign * (u * (2.0 * k)).sin())
    })?;
    Ok(2.0 * s)
}

pub fn theta2(u: Complex64, q: f64) -> Result<Complex64> {
    check_nome(q)?;
    let s = series(q, |n| {
        let k = n as f64 + 0.5;
        (k * k, (u * (2.0 * k)).cos())
    })?;
    Ok(2.0 * s)
}

pub fn theta3(u: Complex64, q: f64) -> Result<Complex64> {
    check_nome(q)?;
    let s = series(q, |n| {
        let k = (n + 1) as f64;
        (k * k, (u * (2.0 * k)).cos())
    })?;
    Ok(1.0 + 2.0 * s)
}

pub fn theta4(u: Complex64, q: f64) -> Result<Complex64> {
    check_nome(q)?;
    let s = series(q, |n| {
        let k = (n + 1) as f64;
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        (k * k, sign * (u * (2.0 * k)).cos())
    })?;
    Ok(1.0 + 2.0 * s)
}

/// `θ1'(0) = 2 Σ (-1)^n (2n+1) q^{(n+1/2)²}` (equal to `θ2 θ3 θ4` at 0).
pub fn theta1_prime0(q: f64) -> Result<f64> {
    check_nome(q)?;
    let s = series(q, |n| {
        let k = n as f64 + 0.5;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        (k * k, Complex64::new(sign * 2.0 * k, 0.0))
    })?;
    Ok(2.0 * s.re)
}

/// Sum of `sign(n) · exp(expo(n))` with all exponents shifted by a common
/// constant. Returns the shifted sum and the shift.
pub(crate) fn shifted_sum(terms: &[(f64, f64)]) -> (f64, f64) {
    let shift = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let sum = terms.iter().map(|&(s, e)| s * (e - shift).exp()).sum();
    (sum, shift)
}

/// `(θ1(u)/θ3(u))²` for real `u`.
pub fn ratio_sq_real(u: f64, q: f64) -> f64 {
    let lq = q.ln();
    let mut num = 0.0;
    let mut den = 1.0;
    for n in 0..MAX_TERMS {
        let k = n as f64 + 0.5;
        let w1 = (k * k * lq).exp();
        let m = (n + 1) as f64;
        let w3 = (m * m * lq).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        num += 2.0 * sign * w1 * (2.0 * k * u).sin();
        den += 2.0 * w3 * (2.0 * m * u).cos();
        if w1 < 1e-18 * num.abs().max(1e-300) && w3 < 1e-18 {
            break;
        }
    }
    let r = num / den;
    r * r
}

/// `-(θ1(iv)/θ3(iv))²` for real `v`, which is real and nonnegative. Summed
/// with a common exponential shift so large `v` cannot overflow.
pub fn ratio_sq_imag(v: f64, q: f64) -> f64 {
    let lq = q.ln();
    let mut num = Vec::new();
    let mut den = vec![(1.0, 0.0)];
    let v = v.abs();
    let mut peak = 0.0f64;
    for n in 0..MAX_TERMS {
        let k = n as f64 + 0.5;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let e1 = k * k * lq + 2.0 * k * v;
        num.push((sign, e1));
        num.push((-sign, k * k * lq - 2.0 * k * v));
        let m = (n + 1) as f64;
        let e3 = m * m * lq + 2.0 * m * v;
        den.push((1.0, e3));
        den.push((1.0, m * m * lq - 2.0 * m * v));
        // exponents are concave in n; stop well past the peak
        peak = peak.max(e1).max(e3);
        if n > 1 && e1 < peak - 45.0 && e3 < peak - 45.0 {
            break;
        }
    }
    let (ns, nsh) = shifted_sum(&num);
    let (ds, dsh) = shifted_sum(&den);
    let r = ns / ds * (nsh - dsh).exp();
    r * r
}

/// `(θ2(0) θ4(0))² = (θ1'(0)/θ3(0))²`, the scale of the `℘` quotient.
pub fn theta24_sq(q: f64) -> Result<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let d = theta1_prime0(q)?;
    let t3 = theta3(zero, q)?.re;
    // θ1'(0) = θ2 θ3 θ4 keeps the ratio well conditioned
    let alt = theta2(zero, q)?.re * theta4(zero, q)?.re;
    debug_assert!((d / t3 - alt).abs() <= 1e-12 * alt.abs());
    Ok(alt * alt)
}
