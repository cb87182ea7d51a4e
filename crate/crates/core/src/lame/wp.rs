//! The Lamé potential: the Weierstrass function of the rectangle with
//! vertices `0, 1, 1 + iτ, iτ`, shifted so that it has a double zero at the
//! origin and its double pole (coefficient 1/4) at `1 + iτ`:
//!
//! `℘(z) = -(π²/16) (θ1'(0)/θ3(0))² (θ1(πz/2)/θ3(πz/2))²`, nome `e^{-πτ}`.
//!
//! On the imaginary axis this equals
//! `π² θ1'(0)² θ1(πt/2τ)² / (16 τ² θ3(0)² θ3(πt/2τ)²)` with nome `e^{-π/τ}`,
//! and in general `℘_τ(z) = -τ⁻² ℘_{1/τ}(iz/τ)`. Each evaluation uses
//! whichever nome is smaller, so the series stay short and free of
//! cancellation over the whole working range of `τ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::theta::{ratio_sq_imag, ratio_sq_real, theta1, theta24_sq, theta3};
use crate::error::{Error, Result};

/// Distance from the pole below which evaluation is refused.
pub const POLE_GUARD: f64 = 1e-8;

/// `℘` on the two legs `[0, 1]` and `[0, iτ]`, with the theta constants
/// precomputed for one value of `τ`.
#[derive(Debug, Clone, Copy)]
pub struct Potential {
    tau: f64,
    /// nome used for evaluation, `e^{-π max(τ, 1/τ)}`
    q: f64,
    /// `(θ1'(0)/θ3(0))²` at that nome
    k: f64,
}

impl Potential {
    pub fn new(tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::domain("Potential", tau, "tau > 0"));
        }
        let q = (-PI * tau.max(1.0 / tau)).exp();
        Ok(Self {
            tau,
            q,
            k: theta24_sq(q)?,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `℘(x)` for real `x`; negative on `(0, 1]`.
    pub fn real_axis(&self, x: f64) -> f64 {
        let c = PI * PI / 16.0 * self.k;
        if self.tau >= 1.0 {
            -c * ratio_sq_real(0.5 * PI * x, self.q)
        } else {
            -c / (self.tau * self.tau) * ratio_sq_imag(0.5 * PI * x / self.tau, self.q)
        }
    }

    /// `℘(it)` for real `t`; positive on `(0, τ]`.
    pub fn imag_axis(&self, t: f64) -> f64 {
        let c = PI * PI / 16.0 * self.k;
        if self.tau >= 1.0 {
            c * ratio_sq_imag(0.5 * PI * t, self.q)
        } else {
            c / (self.tau * self.tau) * ratio_sq_real(0.5 * PI * t / self.tau, self.q)
        }
    }

    /// `℘(z)` for complex `z`, refusing points within [`POLE_GUARD`] of a pole.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (tau, w) = (self.tau, reduce(z, self.tau));
        let pole = Complex64::new(w.re.signum_or_one(), tau * w.im.signum_or_one());
        let dist = (w - pole).norm();
        if dist < POLE_GUARD {
            return Err(Error::Pole {
                re: z.re,
                im: z.im,
                dist,
            });
        }
        let c = PI * PI / 16.0 * self.k;
        if tau >= 1.0 {
            let u = w * (0.5 * PI);
            let r = theta1(u, self.q)? / theta3(u, self.q)?;
            Ok(-c * r * r)
        } else {
            // ℘_τ(z) = -τ⁻² ℘_{1/τ}(iz/τ)
            let u = Complex64::new(0.0, 1.0) * w * (0.5 * PI / tau);
            let r = theta1(u, self.q)? / theta3(u, self.q)?;
            Ok(c / (tau * tau) * r * r)
        }
    }
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Reduce modulo the periods `2` and `2iτ` into `|Re| ≤ 1`, `|Im| ≤ τ`.
fn reduce(z: Complex64, tau: f64) -> Complex64 {
    let re = z.re - 2.0 * (z.re / 2.0).round();
    let im = z.im - 2.0 * tau * (z.im / (2.0 * tau)).round();
    Complex64::new(re, im)
}

/// `℘(z)` for the rectangle of half-period ratio `tau`.
pub fn wp(z: Complex64, tau: f64) -> Result<Complex64> {
    Potential::new(tau)?.eval(z)
}
