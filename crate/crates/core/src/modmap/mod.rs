//! The increasing homeomorphism `CR: [1, ∞) → [2, ∞)` taking the conformal
//! modulus of a rectangular punctured torus to the cross ratio of its ideal
//! quadrilateral, extended to `(0, 1)` by `CR(1/m) = CR(m)/(CR(m) - 1)`.
//!
//! The map is tabulated from direct accessory-parameter solves and
//! interpolated in the coordinates `x = ln m`, `ψ = ln(CR - 1)`, in which the
//! functional equation says exactly that `ψ` is odd. Mirroring the table
//! through the origin therefore builds the functional equation into the
//! interpolant, and `a = CR'(1) = ψ'(0)`.

mod laws;

use std::f64::consts::FRAC_PI_2;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use laws::{
    asymptotic_bounds, modulus_cdf, modulus_pdf, quasimobius_K, stretch_map_K, summary_stats, teich_cdf, teich_pdf,
    DerivedKind, DerivedPdf, TeichStats,
};

use crate::error::{Error, Result};
use crate::lame::{solve_accessory, TAU_MAX, TAU_MIN};
use crate::numeric::interp::MonotoneCubic;

/// Default table range and size.
pub const DEFAULT_M_MAX: f64 = 50.0;
pub const DEFAULT_POINTS: usize = 256;

/// Nodes with `ln m` below this enter the fit for `a = CR'(1)`.
const A_FIT_WINDOW: f64 = 0.25;

/// One tabulated solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrNode {
    pub m: f64,
    pub tau: f64,
    pub lambda_acc: f64,
    pub cross_ratio: f64,
    pub a1: f64,
    pub r1: f64,
    pub a2: f64,
    pub r2: f64,
    pub residual: f64,
}

/// `a = CR'(1)` with an uncertainty band (spread between fits of different
/// order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AEstimate {
    pub value: f64,
    pub uncertainty: f64,
}

/// How a value of the map was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Table,
    DirectSolve,
    Asymptotic,
}

#[derive(Debug, Clone)]
pub struct CrMapTable {
    nodes: Vec<CrNode>,
    spline: MonotoneCubic,
    a: Option<AEstimate>,
    /// `(π/2)√CR(m) - m` at the last node, used past the table
    tail_deficit: f64,
}

/// Node moduli: linear on `[m_min, 4]`, log-spaced above 4.
pub fn node_moduli(m_min: f64, m_max: f64, n: usize) -> Vec<f64> {
    let split = 4.0f64;
    if m_max <= split || m_min >= split {
        let (a, b) = (m_min.ln(), m_max.ln());
        if m_min >= split {
            return (0..n)
                .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
                .collect();
        }
        return (0..n)
            .map(|k| m_min + (m_max - m_min) * k as f64 / (n - 1) as f64)
            .collect();
    }
    let n_lin = n / 2;
    let n_log = n - n_lin;
    let mut v: Vec<f64> = (0..n_lin)
        .map(|k| m_min + (split - m_min) * k as f64 / n_lin as f64)
        .collect();
    let (a, b) = (split.ln(), m_max.ln());
    v.extend((0..n_log).map(|k| (a + (b - a) * k as f64 / (n_log - 1) as f64).exp()));
    *v.last_mut().unwrap() = m_max;
    v
}

fn solve_node(m: f64) -> Result<CrNode> {
    let s = solve_accessory(1.0 / m)?;
    Ok(CrNode {
        m,
        tau: s.tau,
        lambda_acc: s.lambda_acc,
        cross_ratio: s.cross_ratio,
        a1: s.circles.a1,
        r1: s.circles.r1,
        a2: s.circles.a2,
        r2: s.circles.r2,
        residual: s.diagnostics.tangency_residual,
    })
}

/// Solve the accessory problem at `n` moduli in `[m_min, m_max]` (in
/// parallel) and tabulate.
pub fn build_cr_table(m_min: f64, m_max: f64, n: usize) -> Result<CrMapTable> {
    if !(m_min >= 1.0 && m_max > m_min) {
        return Err(Error::domain("build_cr_table", m_min, "1 <= m_min < m_max"));
    }
    if n < 16 {
        return Err(Error::domain("build_cr_table", n as f64, "at least 16 points"));
    }
    if m_max > 1.0 / TAU_MIN {
        return Err(Error::Range {
            what: "build_cr_table m_max",
            value: m_max,
            lo: 1.0,
            hi: 1.0 / TAU_MIN,
        });
    }
    let moduli = node_moduli(m_min, m_max, n);
    let results: Vec<(f64, Result<CrNode>)> = moduli.par_iter().map(|&m| (m, solve_node(m))).collect();
    let failed: Vec<f64> = results.iter().filter(|r| r.1.is_err()).map(|r| r.0).collect();
    if !failed.is_empty() {
        return Err(Error::TableBuild { failed });
    }
    CrMapTable::from_nodes(results.into_iter().map(|r| r.1.unwrap()).collect())
}

/// Least-squares fit `ψ(x) ≈ Σ c_k x^{2k+1}`, `k < terms`; returns `c_0`.
#[allow(clippy::needless_range_loop)]
fn odd_fit(points: &[(f64, f64)], terms: usize) -> Option<f64> {
    if points.len() < terms + 1 {
        return None;
    }
    let mut ata = vec![vec![0.0; terms]; terms];
    let mut atb = vec![0.0; terms];
    for &(x, y) in points {
        let basis: Vec<f64> = (0..terms).map(|k| x.powi(2 * k as i32 + 1)).collect();
        for i in 0..terms {
            atb[i] += basis[i] * y;
            for j in 0..terms {
                ata[i][j] += basis[i] * basis[j];
            }
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..terms {
        let p = (col..terms).max_by(|&i, &j| ata[i][col].abs().total_cmp(&ata[j][col].abs()))?;
        ata.swap(col, p);
        atb.swap(col, p);
        let d = ata[col][col];
        if d == 0.0 {
            return None;
        }
        for row in col + 1..terms {
            let f = ata[row][col] / d;
            for k in col..terms {
                ata[row][k] -= f * ata[col][k];
            }
            atb[row] -= f * atb[col];
        }
    }
    let mut sol = vec![0.0; terms];
    for row in (0..terms).rev() {
        let s: f64 = (row + 1..terms).map(|k| ata[row][k] * sol[k]).sum();
        sol[row] = (atb[row] - s) / ata[row][row];
    }
    Some(sol[0])
}

impl CrMapTable {
    /// Rebuild the interpolant from stored nodes.
    pub fn from_nodes(mut nodes: Vec<CrNode>) -> Result<Self> {
        nodes.sort_by(|a, b| a.m.total_cmp(&b.m));
        if nodes.len() < 5 {
            return Err(Error::Degenerate("table needs at least 5 nodes".into()));
        }
        let includes_one = (nodes[0].m - 1.0).abs() < 1e-12;
        let mut xs = Vec::with_capacity(2 * nodes.len());
        let mut ys = Vec::with_capacity(2 * nodes.len());
        if includes_one {
            for n in nodes.iter().skip(1).rev() {
                xs.push(-n.m.ln());
                ys.push(-(n.cross_ratio - 1.0).ln());
            }
        }
        for n in &nodes {
            xs.push(n.m.ln());
            ys.push((n.cross_ratio - 1.0).ln());
        }
        if includes_one {
            // exact by symmetry
            let mid = nodes.len() - 1;
            ys[mid] = 0.0;
        }
        let spline = MonotoneCubic::new(xs, ys).map_err(|_| {
            Error::Degenerate("tabulated cross ratios are not strictly increasing in the modulus".into())
        })?;
        let a = if includes_one {
            let pts: Vec<(f64, f64)> = nodes
                .iter()
                .map(|n| (n.m.ln(), (n.cross_ratio - 1.0).ln()))
                .filter(|p| p.0 <= A_FIT_WINDOW)
                .collect();
            match (odd_fit(&pts, 4), odd_fit(&pts, 3)) {
                (Some(hi), Some(lo)) => Some(AEstimate {
                    value: hi,
                    uncertainty: (hi - lo).abs(),
                }),
                _ => None,
            }
        } else {
            None
        };
        let last = nodes.last().unwrap();
        let tail_deficit = FRAC_PI_2 * last.cross_ratio.sqrt() - last.m;
        Ok(Self {
            nodes,
            spline,
            a,
            tail_deficit,
        })
    }

    pub fn nodes(&self) -> &[CrNode] {
        &self.nodes
    }

    pub fn m_min(&self) -> f64 {
        self.nodes[0].m
    }

    pub fn m_max(&self) -> f64 {
        self.nodes.last().unwrap().m
    }

    /// `a = CR'(1)`; available when the table starts at `m = 1`.
    pub fn a_estimate(&self) -> Option<AEstimate> {
        self.a
    }

    /// Fitted constant `c` of the large-modulus extension
    /// `√CR = (2/π)(m + c)`.
    pub fn tail_deficit(&self) -> f64 {
        self.tail_deficit
    }

    pub fn regime(&self, m: f64) -> Regime {
        let m = if m < 1.0 { 1.0 / m } else { m };
        if m > self.m_max() {
            Regime::Asymptotic
        } else if m < self.m_min() {
            Regime::DirectSolve
        } else {
            Regime::Table
        }
    }

    /// `(CR(m), CR'(m))` for `m ≥ 1`.
    fn eval_upper(&self, m: f64) -> Result<(f64, f64)> {
        match self.regime(m) {
            Regime::Table => {
                let (psi, dpsi) = self.spline.eval(m.ln());
                let e = psi.exp();
                Ok((1.0 + e, e * dpsi / m))
            }
            Regime::Asymptotic => {
                let k = 2.0 / std::f64::consts::PI;
                let root = k * (m + self.tail_deficit);
                Ok((root * root, 2.0 * k * root))
            }
            Regime::DirectSolve => {
                if 1.0 / m < TAU_MIN || 1.0 / m > TAU_MAX {
                    return Err(Error::Range {
                        what: "cr_of_modulus",
                        value: m,
                        lo: self.m_min(),
                        hi: self.m_max(),
                    });
                }
                let c = solve_accessory(1.0 / m)?.cross_ratio;
                let h = 1e-4 * m;
                let up = solve_accessory(1.0 / (m + h))?.cross_ratio;
                let dn = solve_accessory(1.0 / (m - h).max(1.0))?.cross_ratio;
                Ok((c, (up - dn) / (m + h - (m - h).max(1.0))))
            }
        }
    }

    /// `CR(m)` for any `m > 0`.
    pub fn cr_of_modulus(&self, m: f64) -> Result<f64> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::domain("cr_of_modulus", m, "m > 0"));
        }
        if m >= 1.0 {
            Ok(self.eval_upper(m)?.0)
        } else {
            let c = self.eval_upper(1.0 / m)?.0;
            Ok(c / (c - 1.0))
        }
    }

    /// `CR'(m)` for any `m > 0`.
    pub fn cr_derivative(&self, m: f64) -> Result<f64> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::domain("cr_derivative", m, "m > 0"));
        }
        if m >= 1.0 {
            Ok(self.eval_upper(m)?.1)
        } else {
            let (c, d) = self.eval_upper(1.0 / m)?;
            Ok(d / ((c - 1.0) * (c - 1.0) * m * m))
        }
    }

    /// Inverse map; `Q ∈ (1, 2)` gives moduli below 1.
    pub fn modulus_of_cr(&self, q: f64) -> Result<f64> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain("modulus_of_cr", q, "Q > 1"));
        }
        if q < 2.0 {
            return Ok(1.0 / self.modulus_of_cr(q / (q - 1.0))?);
        }
        let top = self.nodes.last().unwrap().cross_ratio;
        if q > top {
            return Ok(FRAC_PI_2 * q.sqrt() - self.tail_deficit);
        }
        let lo = self.nodes[0].cross_ratio;
        if q < lo {
            return Err(Error::Range {
                what: "modulus_of_cr",
                value: q,
                lo,
                hi: top,
            });
        }
        let x = self.spline.invert((q - 1.0).ln()).ok_or(Error::Range {
            what: "modulus_of_cr",
            value: q,
            lo,
            hi: top,
        })?;
        Ok(x.exp())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for n in &self.nodes {
            wr.serialize(n)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let nodes = rd.deserialize().collect::<std::result::Result<Vec<CrNode>, _>>()?;
        Self::from_nodes(nodes)
    }
}

/// `(CR'(1), CR''(1))` from one-sided forward differences of order six over
/// direct solves at `m = 1, 1 + h, …, 1 + 6h`; independent of the table.
pub fn direct_derivatives_at_one(h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0 && 1.0 / (1.0 + 6.0 * h) >= TAU_MIN) {
        return Err(Error::domain(
            "direct_derivatives_at_one",
            h,
            "0 < h, 1 + 6h within the solver range",
        ));
    }
    let ys = (0..7)
        .into_par_iter()
        .map(|k| solve_accessory(1.0 / (1.0 + k as f64 * h)).map(|s| s.cross_ratio))
        .collect::<Result<Vec<f64>>>()?;
    // forward differences Δ^j y_0
    let mut row = ys;
    let mut delta = Vec::with_capacity(7);
    while !row.is_empty() {
        delta.push(row[0]);
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    // h f' = Σ (-1)^{j+1} Δ^j / j, h² f'' = Σ c_j Δ^j
    let d1: f64 = (1..7)
        .map(|j| if j % 2 == 1 { 1.0 } else { -1.0 } * delta[j] / j as f64)
        .sum();
    const C2: [f64; 7] = [0.0, 0.0, 1.0, -1.0, 11.0 / 12.0, -5.0 / 6.0, 137.0 / 180.0];
    let d2: f64 = (2..7).map(|j| C2[j] * delta[j]).sum();
    Ok((d1 / h, d2 / (h * h)))
}
