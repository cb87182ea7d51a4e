//! Real dilogarithm.

use std::f64::consts::PI;

const PI2_6: f64 = PI * PI / 6.0;

// B_{2k} / (2k+1)!, k = 1..11
const BERNOULLI: [f64; 11] = [
    1.0 / 6.0 / 6.0,
    -1.0 / 30.0 / 120.0,
    1.0 / 42.0 / 5040.0,
    -1.0 / 30.0 / 362_880.0,
    5.0 / 66.0 / 39_916_800.0,
    -691.0 / 2730.0 / 6_227_020_800.0,
    7.0 / 6.0 / 1_307_674_368_000.0,
    -3617.0 / 510.0 / 355_687_428_096_000.0,
    43867.0 / 798.0 / 121_645_100_408_832_000.0,
    -174_611.0 / 330.0 / 51_090_942_171_709_440_000.0,
    854_513.0 / 138.0 / 25_852_016_738_884_976_640_000.0,
];

/// `Li₂(x) = Σ Bₙ uⁿ⁺¹/(n+1)!` with `u = -ln(1 - x)`, for `x ∈ [-1, 1/2]`.
fn series(x: f64) -> f64 {
    let u = -(-x).ln_1p();
    let u2 = u * u;
    let mut p = u * u2;
    let mut acc = u - 0.25 * u2;
    for b in BERNOULLI {
        acc += b * p;
        p *= u2;
    }
    acc
}

/// The dilogarithm `Li₂(x) = -∫₀ˣ ln(1 - t)/t dt` for `x ≤ 1`; for `x > 1`
/// the real part of the principal branch, `π²/3 - ln²(x)/2 - Li₂(1/x)`.
pub fn li2(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == 1.0 {
        return PI2_6;
    }
    if x > 1.0 {
        let l = x.ln();
        return 2.0 * PI2_6 - 0.5 * l * l - li2(1.0 / x);
    }
    if x < -1.0 {
        let l = (-x).ln();
        return -PI2_6 - 0.5 * l * l - li2(1.0 / x);
    }
    if x > 0.5 {
        // reflection
        return PI2_6 - x.ln() * (-x).ln_1p() - series(1.0 - x);
    }
    series(x)
}
