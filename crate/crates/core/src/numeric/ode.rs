//! Dormand–Prince 5(4) stepping for the linear second-order pair
//! `y'' = V(x) y`, carried as the first-order state `(c, c', s, s')`.
//!
//! Two drivers are provided. [`adaptive`] chooses steps with the embedded
//! error estimate and records the accepted grid; [`integrate_on_grid`] replays a
//! recorded grid with the coefficient sampled once per stage abscissa, which
//! lets many integrations that differ only by an additive constant in `V`
//! share one set of potential evaluations.

use crate::error::{Error, Result};

/// Stage abscissae (fractions of the step).
pub const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

// 5th minus 4th order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub type State = [f64; 4];

#[inline]
fn rhs(y: &State, v: f64) -> State {
    [y[1], v * y[0], y[3], v * y[2]]
}

/// One DP5 step given the coefficient at each of the seven stage abscissae.
/// Returns the 5th-order update and the embedded error vector.
#[inline]
pub fn step(y: &State, h: f64, v: &[f64; 7]) -> (State, State) {
    let mut k = [[0.0; 4]; 7];
    k[0] = rhs(y, v[0]);
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..4 {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = rhs(&ys, v[s]);
    }
    let mut out = *y;
    let mut err = [0.0; 4];
    for s in 0..7 {
        for i in 0..4 {
            out[i] += h * B[s] * k[s][i];
            err[i] += h * E[s] * k[s][i];
        }
    }
    (out, err)
}

/// Accepted steps of an adaptive run: `nodes[0] = 0`, `nodes[N] = length`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub nodes: Vec<f64>,
}

impl Grid {
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Grid with every step split in two.
    pub fn refined(&self) -> Grid {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len());
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(*self.nodes.last().unwrap());
        Grid { nodes }
    }

    /// All abscissae at which the coefficient is needed, seven per step.
    pub fn stage_points(&self) -> Vec<[f64; 7]> {
        self.nodes
            .windows(2)
            .map(|w| {
                let h = w[1] - w[0];
                let mut p = [0.0; 7];
                for (s, c) in C.iter().enumerate() {
                    p[s] = w[0] + c * h;
                }
                p[5] = w[1];
                p[6] = w[1];
                p
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
}

/// Adaptive integration of `y'' = V(x) y` over `[0, length]` from `y0`.
/// Returns the final state and the accepted step grid.
pub fn adaptive<V: FnMut(f64) -> f64>(mut coeff: V, length: f64, y0: State, tol: Tolerance) -> Result<(State, Grid)> {
    let mut x = 0.0;
    let mut y = y0;
    let mut h = (tol.h_max).min(length / 64.0);
    let mut nodes = vec![0.0];
    let mut rejects = 0usize;
    while x < length {
        if x + h >= length * (1.0 - 1e-14) {
            h = length - x;
        }
        let mut v = [0.0; 7];
        for s in 0..7 {
            v[s] = coeff(x + C[s] * h);
        }
        let (yn, err) = step(&y, h, &v);
        let mut norm = 0.0;
        for i in 0..4 {
            let sc = tol.atol + tol.rtol * y[i].abs().max(yn[i].abs());
            norm += (err[i] / sc).powi(2);
        }
        let norm = (norm / 4.0).sqrt();
        if !norm.is_finite() {
            return Err(Error::Convergence(format!("ode: non-finite state at x={x}")));
        }
        if norm <= 1.0 {
            x = if (x + h - length).abs() < 1e-15 * length {
                length
            } else {
                x + h
            };
            y = yn;
            nodes.push(x);
        } else {
            rejects += 1;
            if rejects > 100_000 {
                return Err(Error::Convergence("ode: too many rejected steps".into()));
            }
        }
        let fac = if norm == 0.0 {
            5.0
        } else {
            (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * fac).min(tol.h_max);
        if h < 1e-14 * length {
            return Err(Error::Convergence(format!("ode: step size underflow at x={x}")));
        }
    }
    *nodes.last_mut().unwrap() = length;
    Ok((y, Grid { nodes }))
}

/// Replay a grid. `coeff[i][s]` is `V` at stage `s` of step `i`. The closure
/// `watch` sees every accepted state and may abort the integration by
/// returning `false`; the function then returns `None`.
pub fn integrate_on_grid<W: FnMut(f64, &State) -> bool>(
    grid: &Grid,
    coeff: &[[f64; 7]],
    y0: State,
    mut watch: W,
) -> Option<State> {
    let mut y = y0;
    for (i, w) in grid.nodes.windows(2).enumerate() {
        let (yn, _) = step(&y, w[1] - w[0], &coeff[i]);
        y = yn;
        if !watch(w[1], &y) {
            return None;
        }
    }
    Some(y)
}
