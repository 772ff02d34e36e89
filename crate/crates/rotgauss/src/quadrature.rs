//! Singular quadrature for the profile-curve integrals.
//!
//! Inverting the conserved relation turns every question about a
//! constant-curvature profile into an integral in the radius variable over
//! the admissible band:
//!
//! ```text
//! dt   = +- dphi / sqrt(1 - x^(2/(n-1)))        x = K phi^(n-1) - C_K
//! dpsi =    x^(1/(n-1)) dt
//! ```
//!
//! The integrand carries an inverse square-root singularity at the extremal
//! radius where `x = 1`. Near such an endpoint the integral is evaluated in
//! the substituted variable `u = sqrt(|phi - phi_ext|)`, which removes the
//! singularity exactly; elsewhere an adaptive 15-point Gauss-Kronrod rule
//! does the work.

use crate::curvature::{
    frac_pow, phi_bounds, phi_prime_sq, validate_params, CurvatureError, CurveParams, Orientation,
};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(
        "the band integral diverges at phi = 0 for K < 0, C_K = -1: \
         the profile takes infinite arclength to reach the axis"
    )]
    DivergentEnd,
    #[error("quadrature stalled at error {achieved:.3e} (requested {requested:.3e})")]
    ToleranceNotReached { requested: f64, achieved: f64 },
}

/// Tolerances and endpoint policy for the band integrals.
///
/// `endpoint_margin` is the minimum width, measured from a singular
/// endpoint, over which integration switches to the square-root substituted
/// variable. The substitution removes the singularity entirely, so results
/// are insensitive to the exact margin.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_margin: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 60,
            endpoint_margin: 1e-8,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.endpoint_margin > 0.0)
            || self.max_subdivisions < 10
        {
            return Err(QuadratureError::ToleranceNotReached {
                requested: f64::NAN,
                achieved: f64::NAN,
            });
        }
        Ok(())
    }

    pub(crate) fn tighter(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }
}

/// Arclength data of one full sweep of the band.
///
/// `half_period` is the time to cross the band once, `full_period` twice
/// (one arch out and back). For `K < 0` the joined double sweep is also
/// reported as `branch_gap`. A profile with an infinite end (`K < 0`,
/// `C_K = -1`) sets `divergent` and reports infinities.
#[derive(Debug, Clone, Copy)]
pub struct PeriodData {
    pub half_period: f64,
    pub full_period: f64,
    pub branch_gap: Option<f64>,
    pub divergent: bool,
}

/// Two integrand families: arclength (`dt`) and height (`dpsi`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BandMeasure {
    Time,
    Height,
}

/// Arclength needed to move between radii `phi_a` and `phi_b` along a
/// monotone branch with the given sign of `phi'`.
///
/// Positive when the motion is consistent (increasing radii on an
/// increasing branch); the two orderings are antisymmetric.
pub fn time_of_flight(
    phi_a: f64,
    phi_b: f64,
    params: &CurveParams,
    sign: Orientation,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    let oriented = band_integral(phi_a, phi_b, params, BandMeasure::Time, 0, cfg)?;
    Ok(sign.signum() * oriented)
}

/// Height gained while the radius moves from `phi_a` to `phi_b`
/// (antisymmetric in the ordering, positive for `phi_a < phi_b`).
pub fn height_gain(
    phi_a: f64,
    phi_b: f64,
    params: &CurveParams,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    band_integral(phi_a, phi_b, params, BandMeasure::Height, 0, cfg)
}

/// Period data for the band of a validated parameter set with `K != 0`.
pub fn period_data(params: &CurveParams, cfg: &QuadratureConfig) -> Result<PeriodData, QuadratureError> {
    let params = validate_params(*params)?;
    if params.k < 0.0 && is_axis_asymptotic(&params) {
        return Ok(PeriodData {
            half_period: f64::INFINITY,
            full_period: f64::INFINITY,
            branch_gap: None,
            divergent: true,
        });
    }
    let (lo, hi) = phi_bounds(&params)?;
    let half = band_integral(lo, hi, &params, BandMeasure::Time, 0, cfg)?;
    Ok(PeriodData {
        half_period: half,
        full_period: 2.0 * half,
        branch_gap: (params.k < 0.0).then_some(2.0 * half),
        divergent: false,
    })
}

/// True when the profile approaches the axis asymptotically: `K < 0` with
/// `C_K = -1` (detected exactly at the parameter level).
pub(crate) fn is_axis_asymptotic(params: &CurveParams) -> bool {
    params.k < 0.0 && (params.c_k + 1.0).abs() <= 1e-14
}

/// Oriented band integral `int_a^b phi^w g(phi) / sqrt(R) dphi` where
/// `g = 1` (Time) or `x^(1/(n-1))` (Height) and `R = 1 - x^(2/(n-1))`.
pub(crate) fn band_integral(
    phi_a: f64,
    phi_b: f64,
    params: &CurveParams,
    measure: BandMeasure,
    phi_weight: i32,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    let params = validate_params(*params)?;
    cfg.validate()?;
    if phi_a == phi_b {
        return Ok(0.0);
    }
    let (sign, lo, hi) = if phi_a < phi_b {
        (1.0, phi_a, phi_b)
    } else {
        (-1.0, phi_b, phi_a)
    };
    let (band_lo, band_hi) = phi_bounds(&params)?;
    let slop = 1e-9 * band_hi.max(1.0);
    if lo < band_lo - slop || hi > band_hi + slop {
        return Err(CurvatureError::OutOfBounds {
            phi: if lo < band_lo - slop { lo } else { hi },
            lo: band_lo,
            hi: band_hi,
        }
        .into());
    }
    let lo = lo.max(band_lo);
    let hi = hi.min(band_hi);

    // The integrand blows up where x = 1. That happens at the extremal
    // radius, and for the axis-asymptotic profile also at phi = 0, where
    // the integral diverges unless the phi weight tames it. Only an
    // endpoint exactly on the axis diverges; arbitrarily small positive
    // radii are legitimate truncation depths.
    if is_axis_asymptotic(&params) && lo <= 0.0 && 2 * phi_weight <= params.n as i32 - 3 {
        return Err(QuadratureError::DivergentEnd);
    }

    let ext = params.extremal_radius();
    let singular_at_lo = ext.map_or(false, |e| (lo - e).abs() <= slop);
    let singular_at_hi = ext.map_or(false, |e| (hi - e).abs() <= slop);

    let f = |phi: f64| integrand(phi, &params, measure, phi_weight);
    let span = hi - lo;
    let mut total = 0.0;
    let budget_parts = 1 + singular_at_lo as usize + singular_at_hi as usize;
    let mut lo_eff = lo;
    let mut hi_eff = hi;
    let part_cfg = cfg.tighter(1.0 / budget_parts as f64);

    if singular_at_lo {
        let width = (0.25 * span).max(cfg.endpoint_margin).min(span);
        total += substituted_tail(lo, width, true, &params, measure, phi_weight, &part_cfg)?;
        lo_eff = lo + width;
    }
    if singular_at_hi && hi_eff > lo_eff {
        let width = (0.25 * span).max(cfg.endpoint_margin).min(hi_eff - lo_eff);
        total += substituted_tail(hi, width, false, &params, measure, phi_weight, &part_cfg)?;
        hi_eff = hi - width;
    }
    if hi_eff > lo_eff {
        total += adaptive_gk(&f, lo_eff, hi_eff, &part_cfg)?;
    }
    Ok(sign * total)
}

/// Integrand in the plain radius variable.
fn integrand(phi: f64, params: &CurveParams, measure: BandMeasure, phi_weight: i32) -> f64 {
    let r = phi_prime_sq(phi, params).unwrap_or(0.0);
    if r <= 0.0 {
        return 0.0; // only reachable through roundoff dust at a singular endpoint
    }
    let g = match measure {
        BandMeasure::Time => 1.0,
        BandMeasure::Height => params.psi_prime(phi),
    };
    phi.powi(phi_weight) * g / r.sqrt()
}

/// Tail integral over `width` adjacent to the singular endpoint `e`
/// (`e_is_lo` tells which side), computed as `int 2u f(e -+ u^2) du`.
fn substituted_tail(
    e: f64,
    width: f64,
    e_is_lo: bool,
    params: &CurveParams,
    measure: BandMeasure,
    phi_weight: i32,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    let m = params.m();
    let g = |u: f64| {
        let u2 = u * u;
        let phi = if e_is_lo { e + u2 } else { e - u2 };
        // 1 - x, in a form that stays relatively accurate as u -> 0.
        let w1 = if e == 0.0 {
            -params.k * phi.powi(params.n as i32 - 1)
        } else {
            let ratio = if e_is_lo { u2 / e } else { -u2 / e };
            -params.k * e.powi(params.n as i32 - 1) * (m * ratio.ln_1p()).exp_m1()
        };
        if w1 <= 0.0 {
            return 0.0;
        }
        let r = if w1 >= 0.5 {
            1.0 - frac_pow((1.0 - w1).max(0.0), 2.0 / m)
        } else {
            -((2.0 / m) * (-w1).ln_1p()).exp_m1()
        };
        if r <= 0.0 {
            return 0.0;
        }
        let gfac = match measure {
            BandMeasure::Time => 1.0,
            BandMeasure::Height => frac_pow((1.0 - w1).max(0.0), 1.0 / m),
        };
        2.0 * u * phi.powi(phi_weight) * gfac / r.sqrt()
    };
    adaptive_gk(&g, 0.0, width.sqrt(), cfg)
}

// 15-point Kronrod nodes with embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526,
    0.949107912342758524526189684048,
    0.864864423359769072789712788641,
    0.741531185599394439863864773281,
    0.586087235467691130294144838259,
    0.405845151377397166906606412077,
    0.207784955007898467600689403773,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008059,
    0.063092092629978553290700663189,
    0.104790010322250183839876322542,
    0.140653259715525918745189590510,
    0.169004726639267902826583426599,
    0.190350578064785409913256402421,
    0.204432940075298892414161999234,
    0.209482141084727828012999174892,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679,
    0.279705391489276667901467771424,
    0.381830050505118944950369775489,
    0.417959183673469387755102040816,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut fv = [0.0; 15];
    fv[7] = fc;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    let raw = ((kronrod - gauss) * half).abs();
    (
        kronrod * half,
        rescale_error(raw, res_abs * half.abs(), res_asc * half.abs()),
    )
}

/// Classic conservative inflation of the raw Gauss/Kronrod difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive_gk(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, QuadratureError> {
    let (value, error) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    while heap.len() < cfg.max_subdivisions.max(10) {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at roundoff resolution; keep its estimate
            total_err -= worst.error;
            total_err += f64::MIN_POSITIVE;
            heap.push(Interval { error: 0.0, ..worst });
            continue;
        }
        let (lv, le) = gk15(f, worst.a, mid);
        let (rv, re) = gk15(f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Interval { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Interval { a: mid, b: worst.b, value: rv, error: re });
    }
    let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
    if total_err <= tol {
        Ok(total)
    } else {
        Err(QuadratureError::ToleranceNotReached {
            requested: tol,
            achieved: total_err,
        })
    }
}
