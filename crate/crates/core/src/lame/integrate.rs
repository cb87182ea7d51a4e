//! Integration of the Lamé equation `w'' + ℘(z) w = λ w` along the two legs
//! `[0, 1]` and `[0, iτ]` of the rectangle, each as a real linear system.
//!
//! On the real leg `c'' = (λ - ℘(x)) c`. On the imaginary leg, writing
//! `c(it) = γ(t)` and `s(it) = iσ(t)`, both `γ` and `σ` solve
//! `W'' = (℘(it) - λ) W`, so `c'(iτ) = -iγ'(τ)` and `s'(iτ) = σ'(τ)`.
//!
//! The step grid of each leg is chosen once per `τ` by adaptive
//! Dormand–Prince runs at the two ends of the admissible `λ` range and then
//! replayed for every `λ` with the potential cached at the stage abscissae.

use serde::{Deserialize, Serialize};

use super::wp::Potential;
use crate::error::{Error, Result};
use crate::numeric::ode::{self, Grid, State, Tolerance};

/// Values of the normalized solutions `c, s` (`c(0) = 1, c'(0) = 0,
/// s(0) = 0, s'(0) = 1`) at the leg endpoints.
///
/// At `z = iτ` the stored values are those of the real system:
/// `c(iτ) = c_it`, `c'(iτ) = -i cp_it`, `s(iτ) = i s_it_imag`,
/// `s'(iτ) = sp_it`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LameEndpointData {
    pub c_1: f64,
    pub cp_1: f64,
    pub s_1: f64,
    pub sp_1: f64,
    pub c_it: f64,
    pub cp_it: f64,
    pub s_it_imag: f64,
    pub sp_it: f64,
}

impl LameEndpointData {
    /// Wronskian defects `c s' - c' s - 1` at `z = 1` and `z = iτ`.
    pub fn wronskian_drift(&self) -> (f64, f64) {
        (
            self.c_1 * self.sp_1 - self.cp_1 * self.s_1 - 1.0,
            self.c_it * self.sp_it - self.cp_it * self.s_it_imag - 1.0,
        )
    }

    pub fn max_wronskian_drift(&self) -> f64 {
        let (a, b) = self.wronskian_drift();
        a.abs().max(b.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegKind {
    Real,
    Imaginary,
}

/// One integration leg: the recorded grid and the `λ`-independent part of the
/// coefficient at every stage. The coefficient is `base + sign · λ`.
#[derive(Debug, Clone)]
pub struct Leg {
    pub kind: LegKind,
    pub length: f64,
    grid: Grid,
    base: Vec<[f64; 7]>,
    sign: f64,
    /// potential at the far end, `℘(1)` or `℘(iτ)`
    pub end_potential: f64,
}

const Y0: State = [1.0, 0.0, 0.0, 1.0];

fn tolerance(length: f64) -> Tolerance {
    Tolerance {
        rtol: 1e-12,
        atol: 1e-14,
        h_max: length / 128.0,
    }
}

impl Leg {
    pub fn new(potential: &Potential, kind: LegKind) -> Result<Self> {
        let tau = potential.tau();
        let (length, sign) = match kind {
            LegKind::Real => (1.0, 1.0),
            LegKind::Imaginary => (tau, -1.0),
        };
        let base_at = |x: f64| match kind {
            LegKind::Real => -potential.real_axis(x),
            LegKind::Imaginary => potential.imag_axis(x),
        };
        let end_potential = match kind {
            LegKind::Real => potential.real_axis(1.0),
            LegKind::Imaginary => potential.imag_axis(tau),
        };
        // grids adapted at both ends of the admissible range, merged
        let tol = tolerance(length);
        let (_, g0) = ode::adaptive(base_at, length, Y0, tol)?;
        let (_, g1) = ode::adaptive(|x| base_at(x) + sign * end_potential, length, Y0, tol)?;
        let mut nodes: Vec<f64> = g0.nodes.into_iter().chain(g1.nodes).collect();
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * length);
        *nodes.last_mut().unwrap() = length;
        Self::on_grid(kind, length, sign, end_potential, Grid { nodes }, base_at)
    }

    fn on_grid<F: Fn(f64) -> f64>(
        kind: LegKind,
        length: f64,
        sign: f64,
        end_potential: f64,
        grid: Grid,
        base_at: F,
    ) -> Result<Self> {
        let base = grid
            .stage_points()
            .iter()
            .map(|p| {
                let mut v = [0.0; 7];
                for (vi, &x) in v.iter_mut().zip(p) {
                    *vi = base_at(x);
                }
                v
            })
            .collect();
        Ok(Self {
            kind,
            length,
            grid,
            base,
            sign,
            end_potential,
        })
    }

    /// The same leg on a grid with every step halved.
    pub fn refined(&self, potential: &Potential) -> Result<Self> {
        let kind = self.kind;
        let base_at = |x: f64| match kind {
            LegKind::Real => -potential.real_axis(x),
            LegKind::Imaginary => potential.imag_axis(x),
        };
        Self::on_grid(
            kind,
            self.length,
            self.sign,
            self.end_potential,
            self.grid.refined(),
            base_at,
        )
    }

    pub fn steps(&self) -> usize {
        self.grid.steps()
    }

    fn coefficients(&self, lambda: f64) -> Vec<[f64; 7]> {
        let shift = self.sign * lambda;
        self.base
            .iter()
            .map(|b| {
                let mut v = *b;
                for x in v.iter_mut() {
                    *x += shift;
                }
                v
            })
            .collect()
    }

    /// Final state `(c, c', s, s')`, or `None` if `c` fails to stay positive.
    pub fn run(&self, lambda: f64) -> Option<State> {
        let coeff = self.coefficients(lambda);
        ode::integrate_on_grid(&self.grid, &coeff, Y0, |_, y| y[0] > 0.0)
    }

    /// Final state without any positivity check.
    pub fn run_unchecked(&self, lambda: f64) -> State {
        let coeff = self.coefficients(lambda);
        ode::integrate_on_grid(&self.grid, &coeff, Y0, |_, _| true).expect("unchecked run never aborts")
    }

    /// `c` stays positive along the leg and `c' > 0` at its end. On the real
    /// leg this holds exactly for `λ > λ₋`, on the imaginary leg for `λ < λ₊`.
    pub fn admissible(&self, lambda: f64) -> bool {
        self.run(lambda).is_some_and(|y| y[1] > 0.0)
    }
}

/// Both legs for one `τ`.
#[derive(Debug, Clone)]
pub struct LamePaths {
    pub tau: f64,
    pub potential: Potential,
    pub real: Leg,
    pub imag: Leg,
}

impl LamePaths {
    pub fn new(tau: f64) -> Result<Self> {
        let potential = Potential::new(tau)?;
        Ok(Self {
            tau,
            real: Leg::new(&potential, LegKind::Real)?,
            imag: Leg::new(&potential, LegKind::Imaginary)?,
            potential,
        })
    }

    pub fn refined(&self) -> Result<Self> {
        Ok(Self {
            tau: self.tau,
            potential: self.potential,
            real: self.real.refined(&self.potential)?,
            imag: self.imag.refined(&self.potential)?,
        })
    }

    /// Endpoint data at `λ`; a bracket error if `c` or `c'` vanishes.
    pub fn endpoint_data(&self, lambda: f64) -> Result<LameEndpointData> {
        let r = self.real.run(lambda).ok_or_else(|| Error::Bracket {
            lambda,
            reason: "c vanishes on [0, 1]".into(),
        })?;
        let i = self.imag.run(lambda).ok_or_else(|| Error::Bracket {
            lambda,
            reason: "c vanishes on [0, i tau]".into(),
        })?;
        if !(r[1] > 0.0) {
            return Err(Error::Bracket {
                lambda,
                reason: format!("c'(1) = {:e} is not positive", r[1]),
            });
        }
        if !(i[1] > 0.0) {
            return Err(Error::Bracket {
                lambda,
                reason: format!("c'(i tau) = {:e}i is not admissible", -i[1]),
            });
        }
        Ok(LameEndpointData {
            c_1: r[0],
            cp_1: r[1],
            s_1: r[2],
            sp_1: r[3],
            c_it: i[0],
            cp_it: i[1],
            s_it_imag: i[2],
            sp_it: i[3],
        })
    }
}

/// Endpoint data for a single `(τ, λ)`.
pub fn integrate_lame(tau: f64, lambda: f64) -> Result<LameEndpointData> {
    LamePaths::new(tau)?.endpoint_data(lambda)
}
