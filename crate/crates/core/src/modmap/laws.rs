//! Laws derived from the cross-ratio map: modulus, Teichmüller distance to
//! the square torus, and quasi-Möbius constants.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::CrMapTable;
use crate::closedform::{quad_cr_median, quad_cr_pdf, quad_cr_sf};
use crate::error::{Error, Result};
use crate::numeric::Quadrature;

/// `((π/2)√Q - π/2, (π/2)√Q)`: the modulus sandwich with the empirical
/// constants `c₁ = π/2`, `c₂ = 0`.
pub fn asymptotic_bounds(q: f64) -> Result<(f64, f64)> {
    if !(q >= 2.0) {
        return Err(Error::domain("asymptotic_bounds", q, "Q >= 2"));
    }
    let mid = FRAC_PI_2 * q.sqrt();
    Ok((mid - FRAC_PI_2, mid))
}

/// Density of the modulus, `M(m) = X(CR(m)) CR'(m)` on `m ≥ 1`.
pub fn modulus_pdf(table: &CrMapTable, m: f64) -> Result<f64> {
    if !(m >= 1.0) {
        return Err(Error::domain("modulus_pdf", m, "m >= 1"));
    }
    if m.is_infinite() {
        return Ok(0.0);
    }
    let c = table.cr_of_modulus(m)?.max(2.0);
    Ok(quad_cr_pdf(c)? * table.cr_derivative(m)?)
}

/// `P(modulus ≤ m)`.
pub fn modulus_cdf(table: &CrMapTable, m: f64) -> Result<f64> {
    if m <= 1.0 {
        return Ok(0.0);
    }
    let c = table.cr_of_modulus(m)?.max(2.0);
    Ok(1.0 - quad_cr_sf(c)?)
}

/// Density of the Teichmüller distance `d = ln m` to the square torus,
/// `T(d) = M(e^d) e^d`.
pub fn teich_pdf(table: &CrMapTable, d: f64) -> Result<f64> {
    if !(d >= 0.0) {
        return Err(Error::domain("teich_pdf", d, "d >= 0"));
    }
    let m = d.exp();
    if m.is_infinite() {
        return Ok(0.0);
    }
    Ok(modulus_pdf(table, m)? * m)
}

/// `P(distance ≤ d)`.
pub fn teich_cdf(table: &CrMapTable, d: f64) -> Result<f64> {
    if d <= 0.0 {
        return Ok(0.0);
    }
    modulus_cdf(table, d.exp())
}

fn teich_sf(table: &CrMapTable, d: f64) -> f64 {
    if d <= 0.0 {
        return 1.0;
    }
    table
        .cr_of_modulus(d.exp())
        .and_then(|c| quad_cr_sf(c.max(2.0)))
        .unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivedKind {
    Modulus,
    Teich,
}

/// A table-backed density.
#[derive(Debug, Clone, Copy)]
pub struct DerivedPdf<'a> {
    pub kind: DerivedKind,
    pub table: &'a CrMapTable,
}

impl DerivedPdf<'_> {
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            DerivedKind::Modulus => (1.0, f64::INFINITY),
            DerivedKind::Teich => (0.0, f64::INFINITY),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let v = match self.kind {
            DerivedKind::Modulus if x >= 1.0 => modulus_pdf(self.table, x),
            DerivedKind::Teich if x >= 0.0 => teich_pdf(self.table, x),
            _ => Ok(0.0),
        };
        v.unwrap_or(f64::NAN)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let v = match self.kind {
            DerivedKind::Modulus => modulus_cdf(self.table, x),
            DerivedKind::Teich => teich_cdf(self.table, x),
        };
        v.unwrap_or(f64::NAN)
    }

    /// `∫ pdf` by quadrature, split at the end of the table.
    pub fn total_mass(&self) -> Result<f64> {
        let q = Quadrature::with_tol(1e-10, 1e-10);
        let f = |x: f64| self.pdf(x);
        let (lo, split) = match self.kind {
            DerivedKind::Modulus => (1.0, self.table.m_max()),
            DerivedKind::Teich => (0.0, self.table.m_max().ln()),
        };
        Ok(q.integrate(f, lo, split)?.value + q.integrate_to_inf(f, split)?.value)
    }
}

/// Summary of the Teichmüller-distance law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeichStats {
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    /// `T(0) = M(1) = a ln 64 / π²`
    pub density_at_zero: f64,
    /// one-sided difference estimate of `T'(0)`
    pub initial_slope: f64,
    /// `T(0.05) - T(0)`
    pub initial_increment: f64,
}

/// Mean, median and standard deviation of `d`, from
/// `E[d^k] = ∫ k D^{k-1} P(d > D) dD` with the asymptotic extension
/// completing the tail.
pub fn summary_stats(table: &CrMapTable) -> Result<TeichStats> {
    let q = Quadrature::with_tol(1e-11, 1e-11);
    let split = table.m_max().ln();
    let sf = |d: f64| teich_sf(table, d);
    let mean = q.integrate(sf, 0.0, split)?.value + q.integrate_to_inf(sf, split)?.value;
    let sf2 = |d: f64| 2.0 * d * teich_sf(table, d);
    let second = q.integrate(sf2, 0.0, split)?.value + q.integrate_to_inf(sf2, split)?.value;
    let median = table.modulus_of_cr(quad_cr_median())?.ln();
    let t0 = teich_pdf(table, 0.0)?;
    let h = 1e-3;
    let initial_slope = (-3.0 * t0 + 4.0 * teich_pdf(table, h)? - teich_pdf(table, 2.0 * h)?) / (2.0 * h);
    Ok(TeichStats {
        mean,
        median,
        sd: (second - mean * mean).sqrt(),
        density_at_zero: t0,
        initial_slope,
        initial_increment: teich_pdf(table, 0.05)? - t0,
    })
}

/// Optimal dilatation of a quasiconformal self-map of the disk carrying a
/// quadruple of cross ratio `q_src` to one of cross ratio `q_dst`:
/// `K = max(m_src/m_dst, m_dst/m_src)` with `m = CR⁻¹`.
#[allow(non_snake_case)]
pub fn quasimobius_K(table: &CrMapTable, q_src: f64, q_dst: f64) -> Result<f64> {
    if !(q_src >= 2.0) {
        return Err(Error::domain("quasimobius_K", q_src, "Q >= 2"));
    }
    if !(q_dst >= 2.0) {
        return Err(Error::domain("quasimobius_K", q_dst, "Q >= 2"));
    }
    let a = table.modulus_of_cr(q_src)?;
    let b = table.modulus_of_cr(q_dst)?;
    Ok((a / b).max(b / a))
}

/// Dilatation of the piecewise horizontal stretch taking the square
/// configuration `{-1, 0, 1, ∞}` to cross ratio `q`: `K = q - 1`.
#[allow(non_snake_case)]
pub fn stretch_map_K(q: f64) -> Result<f64> {
    if !(q >= 2.0) {
        return Err(Error::domain("stretch_map_K", q, "Q >= 2"));
    }
    Ok(q - 1.0)
}
