//! Monotone piecewise-cubic Hermite interpolation.

use crate::error::{Error, Result};

/// Cubic Hermite interpolant through strictly increasing data, with nodal
/// slopes from local five-point Lagrange differentiation limited by the
/// Fritsch–Carlson conditions.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

/// Derivative at `x[k]` of the Lagrange polynomial through the given nodes.
fn lagrange_slope(xs: &[f64], ys: &[f64], k: usize) -> f64 {
    let xk = xs[k];
    let mut total = 0.0;
    for j in 0..xs.len() {
        // d/dx L_j(x) at x = x_k
        let dl = if j == k {
            (0..xs.len()).filter(|&i| i != k).map(|i| 1.0 / (xk - xs[i])).sum()
        } else {
            let mut num = 1.0;
            let mut den = 1.0;
            for i in 0..xs.len() {
                if i != j {
                    den *= xs[j] - xs[i];
                    if i != k {
                        num *= xk - xs[i];
                    }
                }
            }
            num / den
        };
        total += ys[j] * dl;
    }
    total
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 5 || y.len() != n {
            return Err(Error::Degenerate(
                "monotone cubic needs at least 5 matching nodes".into(),
            ));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) || y.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Degenerate(
                "monotone cubic needs strictly increasing data".into(),
            ));
        }
        let mut d = vec![0.0; n];
        for (k, dk) in d.iter_mut().enumerate() {
            let lo = k.saturating_sub(2).min(n - 5);
            *dk = lagrange_slope(&x[lo..lo + 5], &y[lo..lo + 5], k - lo);
        }
        for i in 0..n - 1 {
            let delta = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            let a = d[i] / delta;
            let b = d[i + 1] / delta;
            if a < 0.0 {
                d[i] = 0.0;
            }
            if b < 0.0 {
                d[i + 1] = 0.0;
            }
            let s = a * a + b * b;
            if s > 9.0 {
                let t = 3.0 / s.sqrt();
                d[i] = t * a * delta;
                d[i + 1] = t * b * delta;
            }
        }
        Ok(Self { x, y, d })
    }

    pub fn x_min(&self) -> f64 {
        self.x[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.x.last().unwrap()
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.y)
    }

    fn segment(&self, t: f64) -> usize {
        match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            p => (p - 1).min(self.x.len() - 2),
        }
    }

    /// Value and first derivative at `t` (clamped to the node range).
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let t = t.clamp(self.x_min(), self.x_max());
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1, d0, d1) = (self.y[i], self.y[i + 1], self.d[i], self.d[i + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        let dh00 = 6.0 * s * (s - 1.0);
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);
        let dv = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
        (v, dv)
    }

    /// Inverse: the `t` with `eval(t).0 == v`, by safeguarded Newton.
    pub fn invert(&self, v: f64) -> Option<f64> {
        let (y0, yn) = (self.y[0], *self.y.last().unwrap());
        if !(v >= y0 && v <= yn) {
            return None;
        }
        let i = match self.y.partition_point(|&w| w <= v) {
            0 => 0,
            p => (p - 1).min(self.y.len() - 2),
        };
        let (mut a, mut b) = (self.x[i], self.x[i + 1]);
        let mut t = a + (b - a) * (v - self.y[i]) / (self.y[i + 1] - self.y[i]);
        for _ in 0..100 {
            let (f, df) = self.eval(t);
            let r = f - v;
            if r > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let mut next = if df > 0.0 { t - r / df } else { 0.5 * (a + b) };
            if !(next >= a && next <= b) {
                next = 0.5 * (a + b);
            }
            if (next - t).abs() <= 1e-15 * t.abs().max(1.0) {
                return Some(next);
            }
            t = next;
        }
        Some(t)
    }
}
