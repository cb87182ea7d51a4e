//! Circle invariants and the accessory-parameter solve.

use serde::{Deserialize, Serialize};

use super::integrate::{LameEndpointData, LamePaths};
use crate::error::{Error, Result};
use crate::hypgeom::ComplexPoint;
use crate::numeric::roots::{bisect_predicate, brent};

/// Working range of `τ` for direct solves.
pub const TAU_MIN: f64 = 0.02;
pub const TAU_MAX: f64 = 50.0;

/// The circles through the images of the far sides of the rectangle under
/// `f = s/c`: `S(a1, r1)` with center `a1` on the real axis and `S(a2, r2)`
/// with center `i a2` on the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleInvariants {
    pub a1: f64,
    pub r1: f64,
    pub a2: f64,
    pub r2: f64,
    /// Tangency point of the two circles (meaningful at a solved `λ`).
    pub z0: ComplexPoint,
}

impl CircleInvariants {
    /// `(r1/a1)² + (r2/a2)² - 1`: nonnegative, zero exactly at tangency.
    pub fn tangency_residual(&self) -> f64 {
        (self.r1 / self.a1).powi(2) + (self.r2 / self.a2).powi(2) - 1.0
    }

    /// Cross ratio of the developed quadrilateral, `(a1/r1)²`.
    pub fn cross_ratio(&self) -> f64 {
        (self.a1 / self.r1).powi(2)
    }

    /// The orbit partner `(a2/r2)² = CR/(CR - 1)` at a solved `λ`.
    pub fn cross_ratio_dual(&self) -> f64 {
        (self.a2 / self.r2).powi(2)
    }
}

/// Sign-changing form of the tangency condition,
/// `ln(a1² - r1²) - ln(a2² - r2²) = ln((s/c)(s'/c')) - ln((σ/γ)(σ'/γ'))`,
/// decreasing in `λ` from `+∞` at `λ₋` to `-∞` at `λ₊`. Evaluated through the
/// products to avoid cancellation near the bracket ends.
pub fn root_function(d: &LameEndpointData) -> f64 {
    let p1 = (d.s_1 / d.c_1) * (d.sp_1 / d.cp_1);
    let p2 = (d.s_it_imag / d.c_it) * (d.sp_it / d.cp_it);
    p1.ln() - p2.ln()
}

/// Circle invariants from endpoint data.
///
/// `2a1 = s/c + s'/c'`, `2r1 = s'/c' - s/c` at `z = 1`, and
/// `2a2 = σ/γ + σ'/γ'`, `2r2 = σ'/γ' - σ/γ` at `z = iτ`.
pub fn circle_invariants(d: &LameEndpointData) -> Result<CircleInvariants> {
    if d.c_1 == 0.0 || d.cp_1 == 0.0 || d.c_it == 0.0 || d.cp_it == 0.0 {
        return Err(Error::Bracket {
            lambda: f64::NAN,
            reason: "vanishing denominator in circle invariants".into(),
        });
    }
    let (u1, v1) = (d.s_1 / d.c_1, d.sp_1 / d.cp_1);
    let (u2, v2) = (d.s_it_imag / d.c_it, d.sp_it / d.cp_it);
    let (a1, r1) = (0.5 * (u1 + v1), 0.5 * (v1 - u1));
    let (a2, r2) = (0.5 * (u2 + v2), 0.5 * (v2 - u2));
    // tangency point: on S(a1, r1) at distance R = sqrt(a1² - r1²) from 0
    let rr = (u1 * v1).max(0.0).sqrt();
    let z0 = ComplexPoint::new(rr * rr / a1, rr * r1 / a1);
    Ok(CircleInvariants { a1, r1, a2, r2, z0 })
}

/// Residuals recorded with each solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// `|(r1/a1)² + (r2/a2)² - 1|`
    pub tangency_residual: f64,
    /// value of the sign-changing root function at the returned `λ`
    pub root_residual: f64,
    /// `max |c s' - c' s - 1|` over both legs
    pub wronskian_drift: f64,
    /// `|(a2/r2)² - CR/(CR - 1)|`
    pub dual_residual: f64,
    pub steps_real: usize,
    pub steps_imag: usize,
}

/// One solved torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessorySolve {
    pub tau: f64,
    pub lambda_acc: f64,
    /// `(λ₋, λ₊)`, the admissible interval
    pub bracket: (f64, f64),
    /// `(a1/r1)²`; at least 2 for `τ ≤ 1`
    pub cross_ratio: f64,
    /// `(a2/r2)²`, the orbit partner of `cross_ratio`
    pub cross_ratio_dual: f64,
    /// conformal modulus `1/τ`
    pub modulus: f64,
    pub endpoints: LameEndpointData,
    pub circles: CircleInvariants,
    pub diagnostics: SolveDiagnostics,
}

/// Flat serializable form of [`AccessorySolve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccessoryRecord {
    pub tau: f64,
    pub modulus: f64,
    pub lambda: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub a1: f64,
    pub r1: f64,
    pub a2: f64,
    pub r2: f64,
    pub z0_re: f64,
    pub z0_im: f64,
    pub cross_ratio: f64,
    pub cross_ratio_dual: f64,
    pub tangency_residual: f64,
    pub root_residual: f64,
    pub wronskian_drift: f64,
}

impl AccessorySolve {
    pub fn record(&self) -> AccessoryRecord {
        let z0 = self.circles.z0.finite().unwrap_or_default();
        AccessoryRecord {
            tau: self.tau,
            modulus: self.modulus,
            lambda: self.lambda_acc,
            lambda_lo: self.bracket.0,
            lambda_hi: self.bracket.1,
            a1: self.circles.a1,
            r1: self.circles.r1,
            a2: self.circles.a2,
            r2: self.circles.r2,
            z0_re: z0.re,
            z0_im: z0.im,
            cross_ratio: self.cross_ratio,
            cross_ratio_dual: self.cross_ratio_dual,
            tangency_residual: self.diagnostics.tangency_residual,
            root_residual: self.diagnostics.root_residual,
            wronskian_drift: self.diagnostics.wronskian_drift,
        }
    }
}

impl LamePaths {
    /// The admissible interval `(λ₋, λ₊)`: `λ₋ ∈ [℘(1), 0)` is the largest
    /// Neumann eigenvalue of the real leg and `λ₊ ∈ (0, ℘(iτ)]` the smallest
    /// of the imaginary leg. Both returned ends are on the admissible side.
    pub fn bracket(&self) -> (f64, f64) {
        let lo = self.real.end_potential;
        let hi = self.imag.end_potential;
        let lm = bisect_predicate(|l| self.real.admissible(l), lo, 0.0, 4.0 * f64::EPSILON * lo.abs());
        let lp = bisect_predicate(|l| self.imag.admissible(l), hi, 0.0, 4.0 * f64::EPSILON * hi.abs());
        (lm, lp)
    }

    pub fn invariants(&self, lambda: f64) -> Result<CircleInvariants> {
        circle_invariants(&self.endpoint_data(lambda)?)
    }

    fn root_function(&self, lambda: f64) -> Result<f64> {
        let h = root_function(&self.endpoint_data(lambda)?);
        if h.is_nan() {
            return Err(Error::Bracket {
                lambda,
                reason: "circle invariants not positive".into(),
            });
        }
        Ok(h)
    }

    /// `(λ, root function)` at `n` points across the bracket.
    pub fn scan(&self, n: usize) -> Vec<(f64, f64)> {
        let (lm, lp) = self.bracket();
        (0..n)
            .map(|k| {
                let l = lm + (lp - lm) * k as f64 / (n - 1) as f64;
                (l, self.root_function(l).unwrap_or(f64::NAN))
            })
            .collect()
    }

    pub fn solve(&self) -> Result<AccessorySolve> {
        let tau = self.tau;
        let (lm, lp) = self.bracket();
        let fail = |reason: String| Error::Solver {
            tau,
            reason,
            scan: self.scan(64),
        };
        let h_lo = self.root_function(lm).map_err(|e| fail(e.to_string()))?;
        let h_hi = self.root_function(lp).map_err(|e| fail(e.to_string()))?;
        if !(h_lo > 0.0 && h_hi < 0.0) {
            return Err(fail(format!(
                "root function does not change sign on [{lm:e}, {lp:e}]: {h_lo:e}, {h_hi:e}"
            )));
        }
        let xtol = 1e-16 * lm.abs().max(lp.abs());
        let lambda =
            brent(|l| self.root_function(l).unwrap_or(f64::NAN), lm, lp, xtol, 200).map_err(|e| fail(e.to_string()))?;
        let endpoints = self.endpoint_data(lambda).map_err(|e| fail(e.to_string()))?;
        let circles = circle_invariants(&endpoints)?;
        let cross_ratio = circles.cross_ratio();
        let cross_ratio_dual = circles.cross_ratio_dual();
        let diagnostics = SolveDiagnostics {
            tangency_residual: circles.tangency_residual().abs(),
            root_residual: root_function(&endpoints),
            wronskian_drift: endpoints.max_wronskian_drift(),
            dual_residual: (cross_ratio_dual - cross_ratio / (cross_ratio - 1.0)).abs(),
            steps_real: self.real.steps(),
            steps_imag: self.imag.steps(),
        };
        Ok(AccessorySolve {
            tau,
            lambda_acc: lambda,
            bracket: (lm, lp),
            cross_ratio,
            cross_ratio_dual,
            modulus: 1.0 / tau,
            endpoints,
            circles,
            diagnostics,
        })
    }
}

/// Solve the accessory-parameter problem for the rectangle of height `tau`.
pub fn solve_accessory(tau: f64) -> Result<AccessorySolve> {
    if !(TAU_MIN..=TAU_MAX).contains(&tau) {
        return Err(Error::Range {
            what: "solve_accessory tau",
            value: tau,
            lo: TAU_MIN,
            hi: TAU_MAX,
        });
    }
    LamePaths::new(tau)?.solve()
}
