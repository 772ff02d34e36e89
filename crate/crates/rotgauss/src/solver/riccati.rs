//! Closed forms for surfaces in `R^3` with the power-law curvature
//! `K(t) = -a t^-2`, `a < 0`.
//!
//! In dimension 3 the profile ODE is `phi'' = -K(t) phi`. Substituting
//! `phi = exp(int f)` turns it into the Riccati equation
//! `f' + f^2 = -K(t)`, and with `z = f t` the power law separates:
//! `dz / (z^2 - z - a) = -dt / t`. The sign of the discriminant `4a + 1`
//! splits three cases, and in each the equation is an Euler equation with
//! elementary solutions.
//!
//! Each case carries two closed forms here: the `corrected` form, a full
//! two-parameter Euler solution whose curvature residual vanishes
//! identically, and the `paper` form, a commonly quoted simplification that
//! drops prefactors; its residual is reported rather than asserted.

use super::SolveError;

/// Case classification for `K(t) = -a t^-2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiCase {
    pub a: f64,
    pub case_id: u8,
    /// `D = sqrt(4a + 1)` in case 1 (distinct real exponents).
    pub d: Option<f64>,
    /// `A = sqrt(-a - 1/4)` in case 3 (oscillatory exponents).
    pub a3: Option<f64>,
    /// Integration constant of the general solution.
    pub c: f64,
}

impl RiccatiCase {
    pub fn new(a: f64, c: f64) -> Result<Self, SolveError> {
        if !(a < 0.0) {
            return Err(SolveError::DomainError {
                reason: format!("power-law coefficient a must be negative, got {a}"),
            });
        }
        let disc = 4.0 * a + 1.0;
        let (case_id, d, a3) = if disc.abs() < 1e-15 {
            (2, None, None)
        } else if disc > 0.0 {
            (1, Some(disc.sqrt()), None)
        } else {
            (3, None, Some((-disc).sqrt() / 2.0))
        };
        Ok(Self { a, case_id, d, a3, c })
    }

    /// The prescribed curvature itself.
    pub fn curvature(&self, t: f64) -> f64 {
        -self.a / (t * t)
    }
}

/// Closed-form values and curvature residuals at one time.
#[derive(Debug, Clone, Copy)]
pub struct RiccatiEval {
    pub phi_paper: f64,
    pub phi_corrected: f64,
    pub residual_paper: f64,
    pub residual_corrected: f64,
}

/// Evaluates both closed forms and their residuals `-phi''/phi - K(t)`.
///
/// Corrected forms (exponents `r = (1 +- D)/2` solve `r(r-1) = a`):
///
/// * case 1: `phi = t^((1+D)/2) - c t^((1-D)/2)`
/// * case 2: `phi = sqrt(t) (ln t - c)`
/// * case 3: `phi = sqrt(t) cos(A ln t - c)`
///
/// Paper forms (unit amplitude, `c` as the integration base point):
///
/// * case 1: `phi = (t^D - 1) / (c^D - 1)`
/// * case 2: `phi = ln t`
/// * case 3: `phi = |cos(ln t)|`
pub fn riccati_closed_form(case: &RiccatiCase, t: f64) -> Result<RiccatiEval, SolveError> {
    if !(t > 0.0) {
        return Err(SolveError::DomainError {
            reason: format!("power-law curvature needs t > 0, got {t}"),
        });
    }
    let a = case.a;
    let k = case.curvature(t);
    let (phi_c, ddphi_c, phi_p, ddphi_p) = match case.case_id {
        1 => {
            let d = case.d.unwrap();
            let (rp, rm) = ((1.0 + d) / 2.0, (1.0 - d) / 2.0);
            let phi_c = t.powf(rp) - case.c * t.powf(rm);
            let ddphi_c =
                rp * (rp - 1.0) * t.powf(rp - 2.0) - case.c * rm * (rm - 1.0) * t.powf(rm - 2.0);
            if case.c <= 0.0 || (case.c - 1.0).abs() < 1e-12 || (t - 1.0).abs() < 1e-12 {
                // paper form integrates from c through t; both must avoid 1
                return Err(SolveError::DomainError {
                    reason: "paper form needs a base point c > 0, c != 1, and t != 1".into(),
                });
            }
            let denom = case.c.powf(d) - 1.0;
            let phi_p = (t.powf(d) - 1.0) / denom;
            let ddphi_p = d * (d - 1.0) * t.powf(d - 2.0) / denom;
            (phi_c, ddphi_c, phi_p, ddphi_p)
        }
        2 => {
            let lg = t.ln();
            let phi_c = t.sqrt() * (lg - case.c);
            let ddphi_c = -0.25 * t.powf(-1.5) * (lg - case.c);
            let phi_p = lg;
            let ddphi_p = -1.0 / (t * t);
            (phi_c, ddphi_c, phi_p, ddphi_p)
        }
        3 => {
            let a3 = case.a3.unwrap();
            let arg = a3 * t.ln() - case.c;
            let phi_c = t.sqrt() * arg.cos();
            let ddphi_c = a * t.powf(-1.5) * arg.cos();
            let cosl = t.ln().cos();
            let phi_p = cosl.abs();
            // on each smoothness interval |cos| differentiates like +-cos
            let sg = cosl.signum();
            let ddphi_p = sg * (t.ln().sin() - cosl) / (t * t);
            if cosl.abs() < 1e-9 || phi_c.abs() < 1e-9 {
                return Err(SolveError::DomainError {
                    reason: "cosine factor vanishes here; the closed form has a zero".into(),
                });
            }
            (phi_c, ddphi_c, phi_p, ddphi_p)
        }
        _ => unreachable!(),
    };
    Ok(RiccatiEval {
        phi_paper: phi_p,
        phi_corrected: phi_c,
        residual_paper: -ddphi_p / phi_p - k,
        residual_corrected: -ddphi_c / phi_c - k,
    })
}
