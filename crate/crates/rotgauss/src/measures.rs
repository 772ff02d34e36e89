//! Areas, enclosed volumes, and meshes of the revolved hypersurfaces.
//!
//! Two conventions are first-class:
//!
//! * **Geometric** — the honest Riemannian measures. The hypersurface area
//!   element of a surface of revolution is the meridian-sphere area times
//!   arclength, `dA = S_{n-1}(phi) dt`, and the enclosed region stacks
//!   `(n-1)`-balls over height, `dV = V_{n-1}(phi) dpsi`.
//! * **Paper** — the factor-2 arclength integrals `2 int S_{n-1}(phi) dt`
//!   and `2 int V_{n-1}(phi) dt`, counting both mirror halves of the doubled
//!   profile with the arclength measure throughout. The reference values
//!   quoted for the axis-asymptotic profile in dimension 4 (surface 19.74,
//!   volume 1.82) are stated against this convention; the area reproduces
//!   exactly (`2 pi^2`), the volume does not reproduce under any of the four
//!   factor/measure combinations, and the nearest candidates are recorded in
//!   the verification fixtures.
//!
//! Here `S_n(r) = 2 pi^(n/2) / Gamma(n/2) r^(n-1)` is the boundary-sphere
//! area of the `n`-ball and `V_n(r) = pi^(n/2) / Gamma(n/2 + 1) r^n` its
//! volume.

pub mod gamma;
pub mod mesh;

pub use mesh::{read_obj, revolve_mesh, write_obj, MeshModel};

use crate::curvature::CurveParams;
use crate::quadrature::{band_integral, BandMeasure, QuadratureConfig, QuadratureError};
use crate::solver::{CurveSource, EndpointKind, GeneratingCurve};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("the curve has an infinite end but carries no truncation metadata")]
    UnboundedDomain,
    #[error("angular resolution {resolution} is too low; need at least 8")]
    ResolutionTooLow { resolution: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("measures need a curve with at least two samples")]
    EmptyCurve,
}

/// Measure convention; see the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    Paper,
    Geometric,
}

impl Convention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Geometric => "geometric",
        }
    }
}

/// A computed measure together with the bound on what truncation of an
/// infinite end left out.
#[derive(Debug, Clone, Copy)]
pub struct MeasureResult {
    pub value: f64,
    pub convention: Convention,
    pub truncation_tail_bound: f64,
    pub n: usize,
}

/// Volume of the `n`-ball of radius `r`.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    let nf = n as f64;
    std::f64::consts::PI.powf(nf / 2.0) / gamma::gamma(nf / 2.0 + 1.0) * r.powi(n as i32)
}

/// Area of the sphere bounding the `n`-ball of radius `r`.
pub fn sphere_area(n: usize, r: f64) -> f64 {
    let nf = n as f64;
    2.0 * std::f64::consts::PI.powf(nf / 2.0) / gamma::gamma(nf / 2.0) * r.powi(n as i32 - 1)
}

/// Hypersurface area of the revolved curve in `R^n`.
pub fn surface_area(
    curve: &GeneratingCurve,
    n: usize,
    convention: Convention,
) -> Result<MeasureResult, MeasureError> {
    let coeff = sphere_area(n - 1, 1.0);
    let factor = match convention {
        Convention::Paper => 2.0,
        Convention::Geometric => 1.0,
    };
    curve_measure(
        curve,
        n,
        convention,
        coeff * factor,
        n as i32 - 2,
        BandMeasure::Time,
    )
}

/// Volume of the region enclosed by the revolved curve in `R^n`.
pub fn enclosed_volume(
    curve: &GeneratingCurve,
    n: usize,
    convention: Convention,
) -> Result<MeasureResult, MeasureError> {
    let coeff = ball_volume(n - 1, 1.0);
    let (measure, factor) = match convention {
        Convention::Paper => (BandMeasure::Time, 2.0),
        Convention::Geometric => (BandMeasure::Height, 1.0),
    };
    curve_measure(curve, n, convention, coeff * factor, n as i32 - 1, measure)
}

fn curve_measure(
    curve: &GeneratingCurve,
    n: usize,
    convention: Convention,
    coeff: f64,
    phi_weight: i32,
    measure: BandMeasure,
) -> Result<MeasureResult, MeasureError> {
    if curve.samples.len() < 2 {
        return Err(MeasureError::EmptyCurve);
    }
    let truncated = curve.endpoints.0 == EndpointKind::PseudosphereEnd
        || curve.endpoints.1 == EndpointKind::PseudosphereEnd;
    if truncated && !curve.metadata.contains_key("truncation_t_min") {
        return Err(MeasureError::UnboundedDomain);
    }

    let (value, tail) = match &curve.source {
        CurveSource::ConstantCurvature(p) if p.k != 0.0 => {
            band_route(curve, p, coeff, phi_weight, measure, truncated)?
        }
        _ => (sample_route(curve, coeff, phi_weight, measure), 0.0),
    };
    Ok(MeasureResult {
        value,
        convention,
        truncation_tail_bound: tail,
        n,
    })
}

/// Exact route for constant-curvature curves: integrate in the radius
/// variable branch by branch, and price the truncated tail of an
/// axis-asymptotic end by the same quadrature (the measure integrals stay
/// convergent there even though arclength diverges).
fn band_route(
    curve: &GeneratingCurve,
    params: &CurveParams,
    coeff: f64,
    phi_weight: i32,
    measure: BandMeasure,
    truncated: bool,
) -> Result<(f64, f64), MeasureError> {
    let cfg = QuadratureConfig {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        ..QuadratureConfig::default()
    };
    let mut total = 0.0;
    // Interior branch boundaries sit at the extremal radius exactly; the
    // sampled values next to the junction stop a sliver short of it, and
    // the integrand is singular there, so the sliver is not negligible.
    let ext = params.extremal_radius();
    for b in &curve.branches {
        let first = if b.range.start == 0 {
            curve.samples[b.range.start].phi
        } else {
            ext.unwrap_or(curve.samples[b.range.start].phi)
        };
        let last = if b.range.end == curve.samples.len() {
            curve.samples[b.range.end - 1].phi
        } else {
            ext.unwrap_or(curve.samples[b.range.end - 1].phi)
        };
        let (lo, hi) = if first <= last { (first, last) } else { (last, first) };
        total += band_integral(lo, hi, params, measure, phi_weight, &cfg)?;
    }
    let mut tail = 0.0;
    if truncated {
        let deepest = curve
            .samples
            .iter()
            .map(|s| s.phi)
            .fold(f64::INFINITY, f64::min);
        tail = coeff * band_integral(0.0, deepest, params, measure, phi_weight, &cfg)?;
    }
    Ok((coeff * total, tail))
}

/// Fallback route for sampled curves without a usable first integral:
/// composite Simpson over the recorded samples.
fn sample_route(curve: &GeneratingCurve, coeff: f64, phi_weight: i32, measure: BandMeasure) -> f64 {
    let f = |s: &crate::curvature::CurveState| -> f64 {
        let g = match measure {
            BandMeasure::Time => 1.0,
            BandMeasure::Height => s.dpsi,
        };
        s.phi.powi(phi_weight) * g
    };
    let s = &curve.samples;
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < s.len() {
        let (h1, h2) = (s[i + 1].t - s[i].t, s[i + 2].t - s[i + 1].t);
        if (h1 - h2).abs() < 1e-9 * h1.abs() {
            total += (h1 + h2) / 6.0 * (f(&s[i]) + 4.0 * f(&s[i + 1]) + f(&s[i + 2]));
            i += 2;
        } else {
            total += 0.5 * h1 * (f(&s[i]) + f(&s[i + 1]));
            i += 1;
        }
    }
    while i + 1 < s.len() {
        total += 0.5 * (s[i + 1].t - s[i].t) * (f(&s[i]) + f(&s[i + 1]));
        i += 1;
    }
    coeff * total
}

/// Tail of the partial measure beyond radius `phi_end` toward the axis, for
/// the axis-asymptotic profile; used to study the decay of the partial
/// integrals.
pub fn axis_tail(
    params: &CurveParams,
    phi_end: f64,
    n: usize,
    volume: bool,
    convention: Convention,
) -> Result<f64, MeasureError> {
    let cfg = QuadratureConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        ..QuadratureConfig::default()
    };
    let (coeff, weight, measure) = if volume {
        (
            ball_volume(n - 1, 1.0),
            n as i32 - 1,
            match convention {
                Convention::Paper => BandMeasure::Time,
                Convention::Geometric => BandMeasure::Height,
            },
        )
    } else {
        (sphere_area(n - 1, 1.0), n as i32 - 2, BandMeasure::Time)
    };
    let factor = if convention == Convention::Paper { 2.0 } else { 1.0 };
    Ok(factor * coeff * band_integral(0.0, phi_end, params, measure, weight, &cfg)?)
}
