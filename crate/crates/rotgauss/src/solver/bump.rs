//! Shooting experiment for a compactly supported curvature bump.
//!
//! The curvature profile is 0 up to `t = -1`, ramps smoothly to 1 on
//! `(-1, -eps]`, and stays 1 on `(-eps, 0]`. Starting from cylinder data
//! (`phi = r0`, `phi' = 0` at `t = -1`) the profile ODE is integrated to
//! `t = 0` and the terminal slope `phi'(0)` recorded per `eps`.
//!
//! With a non-negative curvature the ODE forces `phi'' <= 0`, so a strictly
//! positive ramp drives `phi'(0)` strictly negative; the experiment reports
//! how close to a flat-topped junction (`phi'(0) = 0`) each `eps` gets and
//! whether any achieves it.

use super::{solve_prescribed_k, CurveState, PrescribedOptions, SolveError};

/// The `C^infinity` monotone step built from `exp(-1/x)` pieces: 0 at 0,
/// 1 at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ramp {
    #[default]
    ExpSmoothstep,
}

impl Ramp {
    pub fn eval(&self, x: f64) -> f64 {
        fn e(x: f64) -> f64 {
            if x > 0.0 {
                (-1.0 / x).exp()
            } else {
                0.0
            }
        }
        match self {
            Ramp::ExpSmoothstep => {
                let a = e(x);
                let b = e(1.0 - x);
                if a == 0.0 && b == 0.0 {
                    0.0
                } else {
                    a / (a + b)
                }
            }
        }
    }

    pub fn describe(&self) -> &'static str {
        "exp-smoothstep (C-infinity, monotone)"
    }
}

/// Parameters of one bump construction.
#[derive(Debug, Clone, Copy)]
pub struct BumpSpec {
    pub n: usize,
    /// Cylinder radius supplying the initial data at `t = -1`.
    pub r0: f64,
    /// Ramp endpoint: curvature reaches 1 at `t = -eps`.
    pub epsilon: f64,
    pub ramp: Ramp,
}

impl BumpSpec {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.n < 3 || !(self.r0 > 0.0) || !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(SolveError::DomainError {
                reason: format!(
                    "bump needs n >= 3, r0 > 0 and eps in (0,1); got n={}, r0={}, eps={}",
                    self.n, self.r0, self.epsilon
                ),
            });
        }
        Ok(())
    }

    /// The curvature profile `K_eps(t)` on `t <= 0`.
    pub fn curvature(&self, t: f64) -> f64 {
        if t <= -1.0 {
            0.0
        } else if t <= -self.epsilon {
            self.ramp.eval((t + 1.0) / (1.0 - self.epsilon))
        } else {
            1.0
        }
    }
}

/// One shooting run.
#[derive(Debug, Clone, Copy)]
pub struct BumpRun {
    pub epsilon: f64,
    /// Terminal slope `phi'(0)`.
    pub terminal_dphi: f64,
}

/// Shooting report over a grid of ramp endpoints.
#[derive(Debug, Clone)]
pub struct BumpReport {
    pub runs: Vec<BumpRun>,
    /// Index of the run minimizing `|phi'(0)|`.
    pub best: usize,
    /// Whether some run reached `|phi'(0)| < 1e-6`.
    pub feasible: bool,
}

/// Integrates the bump construction for every `eps` in the grid.
pub fn bump_shooting(spec: &BumpSpec, eps_grid: &[f64]) -> Result<BumpReport, SolveError> {
    let mut runs = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let s = BumpSpec { epsilon: eps, ..*spec };
        s.validate()?;
        let init = CurveState {
            t: -1.0,
            phi: s.r0,
            psi: 0.0,
            dphi: 0.0,
            dpsi: 1.0,
            ddphi: Some(0.0),
        };
        let curve = solve_prescribed_k(
            s.n,
            |t| s.curvature(t),
            &init,
            1e-4,
            0.0,
            &PrescribedOptions::default(),
        )?;
        let terminal = curve.samples.last().expect("trajectory nonempty");
        runs.push(BumpRun {
            epsilon: eps,
            terminal_dphi: terminal.dphi,
        });
    }
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.terminal_dphi.abs().total_cmp(&b.1.terminal_dphi.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let feasible = runs
        .get(best)
        .map_or(false, |r| r.terminal_dphi.abs() < 1e-6);
    Ok(BumpReport { runs, best, feasible })
}
