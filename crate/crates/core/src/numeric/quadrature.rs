#![allow(clippy::excessive_precision)]
//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integration settings.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

impl Quadrature {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrate `f` over the finite interval `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<Integral> {
        if a == b {
            return Ok(Integral {
                value: 0.0,
                abs_error: 0.0,
                intervals: 0,
            });
        }
        let (value, err) = gk21(&mut f, a, b);
        let mut heap = BinaryHeap::new();
        heap.push(Piece { a, b, value, err });
        let mut total = value;
        let mut total_err = err;
        let mut intervals = 1;
        while total_err > self.abs_tol.max(self.rel_tol * total.abs()) {
            if intervals >= self.max_intervals {
                return Err(Error::Convergence(format!(
                    "quadrature on [{a}, {b}] stalled at error {total_err:e} after {intervals} intervals"
                )));
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // interval at floating resolution; accept what we have
                heap.push(worst);
                break;
            }
            let (v1, e1) = gk21(&mut f, worst.a, mid);
            let (v2, e2) = gk21(&mut f, mid, worst.b);
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.err;
            heap.push(Piece {
                a: worst.a,
                b: mid,
                value: v1,
                err: e1,
            });
            heap.push(Piece {
                a: mid,
                b: worst.b,
                value: v2,
                err: e2,
            });
            intervals += 1;
        }
        // re-sum to shed accumulated update round-off
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let abs_error: f64 = heap.iter().map(|p| p.err).sum();
        Ok(Integral {
            value,
            abs_error,
            intervals,
        })
    }

    /// Integrate over `[a, +inf)` through the map `x = a + (1 - t) / t`.
    pub fn integrate_to_inf<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64) -> Result<Integral> {
        self.integrate(
            |t| {
                let x = a + (1.0 - t) / t;
                f(x) / (t * t)
            },
            0.0,
            1.0,
        )
    }

    /// Integrate over `(-inf, b]`.
    pub fn integrate_from_neg_inf<F: FnMut(f64) -> f64>(&self, mut f: F, b: f64) -> Result<Integral> {
        self.integrate_to_inf(|x| f(2.0 * b - x), b)
    }

    /// Sum of integrals over consecutive breakpoints `[p0, p1], [p1, p2], ...`.
    pub fn integrate_pieces<F: FnMut(f64) -> f64>(&self, mut f: F, points: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for w in points.windows(2) {
            acc += self.integrate(&mut f, w[0], w[1])?.value;
        }
        Ok(acc)
    }
}
