//! Monte Carlo checks of the closed-form laws.
//!
//! Samples are generated in fixed blocks of [`BLOCK`] indices; block `k`
//! draws from the ChaCha8 stream `k` of the configured seed, so the output is
//! identical for any number of workers.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{crossratio_cdf, length_cdf, quad_cr_cdf, star_cdf, SQUARE_LENGTH};
use crate::error::{Error, Result};
use crate::hypgeom::{canonical_representative, length_from_cr};
use crate::modmap::{teich_cdf, CrMapTable};

/// Samples per random stream.
pub const BLOCK: usize = 4096;
pub const DEFAULT_BINS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    /// cross ratio of four uniform points on the circle
    CrossratioFull,
    /// its canonical representative `≥ 2`
    QuadCr,
    /// the shorter perpendicular length
    Length,
    /// `[i, 1, -1, z]` with `z` uniform: standard Cauchy
    Star,
    /// conformal modulus `CR⁻¹([Q])`
    Modulus,
    /// Teichmüller distance `ln CR⁻¹([Q])` to the square torus
    Teich,
}

impl Law {
    pub const ALL: [Law; 6] = [
        Law::CrossratioFull,
        Law::QuadCr,
        Law::Length,
        Law::Star,
        Law::Modulus,
        Law::Teich,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::CrossratioFull => "crossratio_full",
            Law::QuadCr => "quad_cr",
            Law::Length => "length",
            Law::Star => "star",
            Law::Modulus => "modulus",
            Law::Teich => "teich",
        }
    }

    pub fn needs_table(self) -> bool {
        matches!(self, Law::Modulus | Law::Teich)
    }

    /// Clipped histogram range.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            Law::CrossratioFull => (-5.0, 5.0),
            Law::QuadCr => (2.0, 40.0),
            Law::Length => (0.0, SQUARE_LENGTH),
            Law::Star => (-10.0, 10.0),
            Law::Modulus => (1.0, 10.0),
            Law::Teich => (0.0, 4.0),
        }
    }

    /// Whether sample mean and deviation are reported; the cross-ratio
    /// laws have no finite mean.
    pub fn has_moments(self) -> bool {
        matches!(self, Law::Length | Law::Modulus | Law::Teich)
    }
}

impl std::str::FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Degenerate(format!("unknown law '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub law: Law,
    pub bins: usize,
    /// histogram range; the law's default when `None`
    pub range: Option<(f64, f64)>,
}

impl McConfig {
    pub fn new(law: Law, n_samples: usize, seed: u64) -> Self {
        Self {
            n_samples,
            seed,
            workers: rayon::current_num_threads(),
            law,
            bins: DEFAULT_BINS,
            range: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::Degenerate("n_samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Degenerate("workers must be at least 1".into()));
        }
        if self.bins == 0 {
            return Err(Error::Degenerate("bins must be at least 1".into()));
        }
        if let Some((lo, hi)) = self.range {
            if !(lo < hi) {
                return Err(Error::Degenerate(format!("empty histogram range [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn new(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Self {
        let edges: Vec<f64> = (0..=bins).map(|k| lo + (hi - lo) * k as f64 / bins as f64).collect();
        let mut counts = vec![0u64; bins];
        let (mut below, mut above) = (0, 0);
        let w = (hi - lo) / bins as f64;
        for &x in samples {
            if x < lo {
                below += 1;
            } else if x > hi || x.is_nan() {
                above += 1;
            } else {
                let k = (((x - lo) / w) as usize).min(bins - 1);
                counts[k] += 1;
            }
        }
        Self {
            edges,
            counts,
            below,
            above,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.below + self.above
    }

    /// Fraction of samples outside the range.
    pub fn clipped_mass(&self) -> f64 {
        (self.below + self.above) as f64 / self.total() as f64
    }

    /// `(bin_left, bin_right, count, density)` rows; density is normalized by
    /// the total sample count, clipped samples included.
    pub fn rows(&self) -> Vec<HistogramRow> {
        let n = self.total() as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &count)| {
                let (l, r) = (self.edges[k], self.edges[k + 1]);
                HistogramRow {
                    bin_left: l,
                    bin_right: r,
                    count,
                    density: count as f64 / (n * (r - l)),
                }
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for row in self.rows() {
            wr.serialize(row)?;
        }
        wr.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: u64,
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl SampleStats {
    /// From sorted samples.
    fn from_sorted(v: &[f64], moments: bool) -> Self {
        let q = |p: f64| {
            let h = p * (v.len() - 1) as f64;
            let (i, f) = (h.floor() as usize, h.fract());
            if i + 1 < v.len() {
                v[i] + f * (v[i + 1] - v[i])
            } else {
                v[i]
            }
        };
        let (mean, sd) = if moments {
            let n = v.len() as f64;
            let m = v.iter().sum::<f64>() / n;
            let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0).max(1.0);
            (Some(m), Some(var.sqrt()))
        } else {
            (None, None)
        };
        Self {
            mean,
            sd,
            median: q(0.5),
            q1: q(0.25),
            q3: q(0.75),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub law: Law,
    pub n: usize,
    pub seed: u64,
    pub histogram: Histogram,
    pub ks_distance: f64,
    pub stats: SampleStats,
}

impl EmpiricalSummary {
    /// JSON summary without the histogram.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "law": self.law,
            "n": self.n,
            "seed": self.seed,
            "ks": self.ks_distance,
            "clipped_mass": self.histogram.clipped_mass(),
            "stats": self.stats,
        })
    }
}

/// `sin((θ₁-θ₃)/2) sin((θ₂-θ₄)/2) / (sin((θ₁-θ₂)/2) sin((θ₃-θ₄)/2))`, the
/// cross ratio of `e^{iθⱼ}`.
pub fn circle_cross_ratio(t: [f64; 4]) -> f64 {
    let s = |a: f64, b: f64| (0.5 * (a - b)).sin();
    s(t[0], t[2]) * s(t[1], t[3]) / (s(t[0], t[1]) * s(t[2], t[3]))
}

fn uniform_quadruple<R: Rng>(rng: &mut R) -> [f64; 4] {
    [0; 4].map(|_| TAU * rng.random::<f64>())
}

fn quad_cr_draw<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let x = circle_cross_ratio(uniform_quadruple(rng));
        if x.is_finite() {
            if let Ok(q) = canonical_representative(x) {
                return q;
            }
        }
    }
}

fn draw<R: Rng>(law: Law, rng: &mut R, table: Option<&CrMapTable>) -> Result<f64> {
    Ok(match law {
        Law::CrossratioFull => circle_cross_ratio(uniform_quadruple(rng)),
        Law::QuadCr => quad_cr_draw(rng),
        Law::Length => length_from_cr(quad_cr_draw(rng)),
        Law::Star => circle_cross_ratio([0.5 * PI, 0.0, PI, TAU * rng.random::<f64>()]),
        Law::Modulus | Law::Teich => {
            let t = table.ok_or_else(|| Error::Degenerate(format!("law {} needs a cross-ratio table", law.name())))?;
            let m = t.modulus_of_cr(quad_cr_draw(rng))?;
            if law == Law::Teich {
                m.ln()
            } else {
                m
            }
        }
    })
}

/// The raw samples, in index order.
pub fn draw_samples(cfg: &McConfig, table: Option<&CrMapTable>) -> Result<Vec<f64>> {
    cfg.validate()?;
    let blocks = cfg.n_samples.div_ceil(BLOCK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let parts: Vec<Result<Vec<f64>>> = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(k as u64);
                let len = BLOCK.min(cfg.n_samples - k * BLOCK);
                (0..len).map(|_| draw(cfg.law, &mut rng, table)).collect()
            })
            .collect()
    });
    let mut out = Vec::with_capacity(cfg.n_samples);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// `sup |F_n - F|` over sorted samples.
pub fn ks_distance<F: Fn(f64) -> f64 + Sync>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .reduce(|| 0.0, f64::max)
}

/// Reference distribution function of a law.
pub fn reference_cdf(law: Law, table: Option<&CrMapTable>, x: f64) -> f64 {
    match law {
        Law::CrossratioFull => crossratio_cdf(x),
        Law::QuadCr => quad_cr_cdf(x).unwrap_or(if x < 2.0 { 0.0 } else { 1.0 }),
        Law::Length => length_cdf(x),
        Law::Star => star_cdf(x),
        Law::Modulus => table
            .and_then(|t| crate::modmap::modulus_cdf(t, x).ok())
            .unwrap_or(f64::NAN),
        Law::Teich => table.and_then(|t| teich_cdf(t, x).ok()).unwrap_or(f64::NAN),
    }
}

/// Draw, histogram, and compare against the closed-form law.
pub fn run(cfg: &McConfig, table: Option<&CrMapTable>) -> Result<EmpiricalSummary> {
    let mut v = draw_samples(cfg, table)?;
    let (lo, hi) = cfg.range.unwrap_or(cfg.law.default_range());
    let histogram = Histogram::new(&v, lo, hi, cfg.bins);
    v.par_sort_unstable_by(f64::total_cmp);
    let ks_distance = ks_distance(&v, |x| reference_cdf(cfg.law, table, x));
    Ok(EmpiricalSummary {
        law: cfg.law,
        n: cfg.n_samples,
        seed: cfg.seed,
        histogram,
        ks_distance,
        stats: SampleStats::from_sorted(&v, cfg.law.has_moments()),
    })
}

fn with_law(cfg: &McConfig, law: Law) -> McConfig {
    McConfig { law, ..cfg.clone() }
}

pub fn sample_crossratio(cfg: &McConfig) -> Result<EmpiricalSummary> {
    run(&with_law(cfg, Law::CrossratioFull), None)
}

pub fn sample_quad_cr(cfg: &McConfig) -> Result<EmpiricalSummary> {
    run(&with_law(cfg, Law::QuadCr), None)
}

pub fn sample_star(cfg: &McConfig) -> Result<EmpiricalSummary> {
    run(&with_law(cfg, Law::Star), None)
}

pub fn sample_length(cfg: &McConfig) -> Result<EmpiricalSummary> {
    run(&with_law(cfg, Law::Length), None)
}

pub fn sample_modulus(cfg: &McConfig, table: &CrMapTable) -> Result<EmpiricalSummary> {
    run(&with_law(cfg, Law::Modulus), Some(table))
}

pub fn sample_teich(cfg: &McConfig, table: &CrMapTable) -> Result<EmpiricalSummary> {
    run(&with_law(cfg, Law::Teich), Some(table))
}

/// Writes the histogram CSV and, next to it, the JSON summary.
pub fn write_outputs(summary: &EmpiricalSummary, csv_path: &Path) -> Result<()> {
    summary.histogram.write_csv(std::fs::File::create(csv_path)?)?;
    let json = serde_json::to_string_pretty(&summary.summary_json()).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(csv_path.with_extension("json"), json)?;
    Ok(())
}
