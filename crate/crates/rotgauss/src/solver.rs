//! Assembly of complete generating curves.
//!
//! Constant-curvature profiles are built by inverting the band integrals of
//! [`crate::quadrature`] onto a uniform time grid, gluing monotone branches
//! by reflection across smooth extrema, and classifying the endpoints.
//! Prescribed-curvature profiles are integrated directly with a classical
//! fourth-order scheme. The module also carries the local series expansion
//! at extrema, the asymptotic form of the axis-asymptotic profile, the
//! constant-principal-curvature spheres, and the power-law closed forms.

pub mod bump;
pub mod riccati;

use crate::curvature::{
    ddphi_from_ode, frac_pow, phi_bounds, phi_prime_sq, validate_params, CurvatureError,
    CurveParams, CurveState, Orientation,
};
use crate::quadrature::{band_integral, is_axis_asymptotic, BandMeasure, QuadratureConfig, QuadratureError};
use std::collections::BTreeMap;
use std::io::{self, Write};
use std::ops::Range;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("profiles with K = 0 are straight lines; use solve_flat for them")]
    FlatProfile,
    #[error("this profile has an infinite end; request an explicit time range to truncate it")]
    TruncationRequired,
    #[error("invalid extent: {reason}")]
    InvalidExtent { reason: String },
    #[error("local error estimate {estimate:.3e} at t = {t} exceeds the bound {bound:.3e}; reduce the step")]
    StepTooLarge { t: f64, estimate: f64, bound: f64 },
    #[error("initial tangent is degenerate (|phi'| = {dphi}); the profile is not a graph there")]
    DegenerateTangent { dphi: f64 },
    #[error("a constant principal curvature of zero does not determine a sphere")]
    ZeroCurvature,
    #[error("series expansion applies only at extrema: K > 0, or K < 0 with C_K < -1 (got K = {k}, C_K = {c_k})")]
    WrongRegime { k: f64, c_k: f64 },
    #[error("outside the domain of the closed form: {reason}")]
    DomainError { reason: String },
    #[error("numerical failure: {reason}")]
    Numerical { reason: String },
}

/// How a profile curve terminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointKind {
    /// `phi' = 0` interior reflection point reached as a curve end.
    SmoothExtremum,
    /// `phi' = +-1`, `psi' = 0`: the graph condition fails beyond.
    VerticalRim,
    /// `phi = 0` with `|phi'| = 1`: the surface closes smoothly on the axis.
    SmoothPole,
    /// `phi = 0` with `|phi'| < 1`: a metric cone singularity on the axis.
    ConePoint,
    /// `phi -> 0` only asymptotically (infinite arclength), truncated.
    PseudosphereEnd,
    /// Artificial truncation of a finite profile.
    OpenCut,
}

impl EndpointKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EndpointKind::SmoothExtremum => "smooth-extremum",
            EndpointKind::VerticalRim => "vertical-rim",
            EndpointKind::SmoothPole => "smooth-pole",
            EndpointKind::ConePoint => "cone-point",
            EndpointKind::PseudosphereEnd => "pseudosphere-end",
            EndpointKind::OpenCut => "open-cut",
        }
    }
}

/// A maximal monotone run of samples and the sign of `phi'` on it.
#[derive(Debug, Clone)]
pub struct Branch {
    pub range: Range<usize>,
    pub sign: Orientation,
}

/// Where a curve's parameters came from.
#[derive(Debug, Clone)]
pub enum CurveSource {
    ConstantCurvature(CurveParams),
    Flat { n: usize, slope: f64, radius0: f64 },
    Prescribed { n: usize, description: String },
    ConstantPrincipal { n: usize, c: f64, kind: PrincipalKind },
}

impl CurveSource {
    pub fn n(&self) -> usize {
        match self {
            CurveSource::ConstantCurvature(p) => p.n,
            CurveSource::Flat { n, .. } => *n,
            CurveSource::Prescribed { n, .. } => *n,
            CurveSource::ConstantPrincipal { n, .. } => *n,
        }
    }
}

/// Which principal curvature family is held constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrincipalKind {
    /// The curvature of the profile curve itself, `-phi''/psi'`.
    Meridional,
    /// The curvature `psi'/phi` of the rotational orbits.
    Azimuthal,
}

/// Output sampling density.
#[derive(Debug, Clone, Copy)]
pub enum Sampling {
    Count(usize),
    Step(f64),
}

/// How much of the profile to build.
#[derive(Debug, Clone, Copy)]
pub enum Extent {
    /// `1.0` builds the full canonical profile (both branches when an
    /// interior extremum exists), `0.5` the first branch only.
    Periods(f64),
    /// An explicit time window, clipped to the profile's natural domain.
    TRange { t_min: f64, t_max: f64 },
}

/// A sampled profile curve with branch structure and endpoint labels.
#[derive(Debug, Clone)]
pub struct GeneratingCurve {
    pub source: CurveSource,
    pub samples: Vec<CurveState>,
    pub branches: Vec<Branch>,
    pub endpoints: (EndpointKind, EndpointKind),
    pub metadata: BTreeMap<String, String>,
}

impl GeneratingCurve {
    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn t_start(&self) -> f64 {
        self.samples.first().map_or(f64::NAN, |s| s.t)
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.t)
    }

    /// Cubic Hermite interpolation of the radius at time `t`.
    pub fn phi_at(&self, t: f64) -> f64 {
        let (i, u, h) = self.locate(t);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        hermite(a.phi, a.dphi, b.phi, b.dphi, u, h)
    }

    /// Cubic Hermite interpolation of the height at time `t`.
    pub fn psi_at(&self, t: f64) -> f64 {
        let (i, u, h) = self.locate(t);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        hermite(a.psi, a.dpsi, b.psi, b.dpsi, u, h)
    }

    /// Interpolated state at time `t` (second derivative left unset).
    pub fn state_at(&self, t: f64) -> CurveState {
        let (i, u, h) = self.locate(t);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        CurveState {
            t,
            phi: hermite(a.phi, a.dphi, b.phi, b.dphi, u, h),
            psi: hermite(a.psi, a.dpsi, b.psi, b.dpsi, u, h),
            dphi: hermite_deriv(a.phi, a.dphi, b.phi, b.dphi, u, h),
            dpsi: hermite_deriv(a.psi, a.dpsi, b.psi, b.dpsi, u, h),
            ddphi: None,
        }
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let s = &self.samples;
        assert!(s.len() >= 2, "interpolation needs at least two samples");
        let i = match s.binary_search_by(|st| st.t.total_cmp(&t)) {
            Ok(i) => i.min(s.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(s.len() - 2),
        };
        let h = s[i + 1].t - s[i].t;
        ((i), (t - s[i].t) / h, h)
    }

    /// The same profile scaled by `lambda > 0`: radii, heights, and
    /// arclength all scale linearly, curvature by `lambda^(1-n)` (with the
    /// first-integral constant unchanged).
    pub fn scaled(&self, lambda: f64) -> GeneratingCurve {
        let mut out = self.clone();
        for s in &mut out.samples {
            s.t *= lambda;
            s.phi *= lambda;
            s.psi *= lambda;
            if let Some(dd) = s.ddphi.as_mut() {
                *dd /= lambda;
            }
        }
        match &mut out.source {
            CurveSource::ConstantCurvature(p) => {
                p.k *= lambda.powi(1 - p.n as i32);
                p.t0 *= lambda;
            }
            CurveSource::Flat { radius0, .. } => *radius0 *= lambda,
            CurveSource::ConstantPrincipal { c, .. } => *c /= lambda,
            CurveSource::Prescribed { .. } => {}
        }
        for key in ["half_period", "full_period", "truncation_t_min", "anchor_t0"] {
            if let Some(v) = out.metadata.get(key).and_then(|v| v.parse::<f64>().ok()) {
                out.metadata.insert(key.into(), fmt_g17(v * lambda));
            }
        }
        out.metadata.insert("scaled_by".into(), fmt_g17(lambda));
        out
    }

    /// Inverts the (monotone) height along the curve by bisection on the
    /// samples with Hermite refinement. Returns the time at which
    /// `psi = y`.
    pub fn time_at_height(&self, y: f64) -> Option<f64> {
        let s = &self.samples;
        let (lo, hi) = (s.first()?.psi, s.last()?.psi);
        if y < lo.min(hi) || y > lo.max(hi) {
            return None;
        }
        let idx = s.partition_point(|st| st.psi < y).min(s.len() - 1).max(1);
        let (mut a, mut b) = (s[idx - 1].t, s[idx].t);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if self.psi_at(mid) < y {
                a = mid;
            } else {
                b = mid;
            }
            if (b - a).abs() < 1e-10 * (1.0 + mid.abs()) {
                break;
            }
        }
        Some(0.5 * (a + b))
    }

    /// Writes the curve as CSV: `t,phi,psi,dphi,dpsi,branch,endpoint_flags`
    /// with 17 significant digits and CRLF line endings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "t,phi,psi,dphi,dpsi,branch,endpoint_flags\r\n")?;
        let last = self.samples.len() - 1;
        for (i, s) in self.samples.iter().enumerate() {
            let branch = self
                .branches
                .iter()
                .position(|b| b.range.contains(&i))
                .unwrap_or(self.branches.len().saturating_sub(1));
            let flag = if i == 0 {
                format!("start:{}", self.endpoints.0.as_str())
            } else if i == last {
                format!("end:{}", self.endpoints.1.as_str())
            } else {
                String::new()
            };
            write!(
                w,
                "{},{},{},{},{},{},{}\r\n",
                fmt_g17(s.t),
                fmt_g17(s.phi),
                fmt_g17(s.psi),
                fmt_g17(s.dphi),
                fmt_g17(s.dpsi),
                branch,
                flag
            )?;
        }
        Ok(())
    }

    /// Writes the parameter/metadata sidecar as a flat JSON object with
    /// snake_case keys.
    pub fn write_sidecar_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut fields: Vec<(String, String)> = Vec::new();
        match &self.source {
            CurveSource::ConstantCurvature(p) => {
                fields.push(("solver_family".into(), "\"constant_curvature\"".into()));
                fields.push(("n".into(), p.n.to_string()));
                fields.push(("k".into(), fmt_g17(p.k)));
                fields.push(("c_k".into(), fmt_g17(p.c_k)));
                fields.push((
                    "orientation".into(),
                    format!("{}", p.orientation.signum() as i64),
                ));
                fields.push(("t0".into(), fmt_g17(p.t0)));
            }
            CurveSource::Flat { n, slope, radius0 } => {
                fields.push(("solver_family".into(), "\"flat\"".into()));
                fields.push(("n".into(), n.to_string()));
                fields.push(("slope".into(), fmt_g17(*slope)));
                fields.push(("radius0".into(), fmt_g17(*radius0)));
            }
            CurveSource::Prescribed { n, description } => {
                fields.push(("solver_family".into(), "\"prescribed\"".into()));
                fields.push(("n".into(), n.to_string()));
                fields.push(("description".into(), format!("{:?}", description)));
            }
            CurveSource::ConstantPrincipal { n, c, kind } => {
                fields.push(("solver_family".into(), "\"constant_principal\"".into()));
                fields.push(("n".into(), n.to_string()));
                fields.push(("c".into(), fmt_g17(*c)));
                fields.push((
                    "kind".into(),
                    format!(
                        "\"{}\"",
                        match kind {
                            PrincipalKind::Meridional => "meridional",
                            PrincipalKind::Azimuthal => "azimuthal",
                        }
                    ),
                ));
            }
        }
        fields.push((
            "endpoint_start".into(),
            format!("\"{}\"", self.endpoints.0.as_str()),
        ));
        fields.push((
            "endpoint_end".into(),
            format!("\"{}\"", self.endpoints.1.as_str()),
        ));
        fields.push(("sample_count".into(), self.samples.len().to_string()));
        fields.push(("branch_count".into(), self.branches.len().to_string()));
        fields.push(("t_start".into(), fmt_g17(self.t_start())));
        fields.push(("t_end".into(), fmt_g17(self.t_end())));
        for (k, v) in &self.metadata {
            let quoted = if v.parse::<f64>().is_ok() {
                v.clone()
            } else {
                format!("{:?}", v)
            };
            fields.push((k.clone(), quoted));
        }
        write!(w, "{{")?;
        for (i, (k, v)) in fields.iter().enumerate() {
            if i > 0 {
                write!(w, ",")?;
            }
            write!(w, "\"{}\":{}", k, v)?;
        }
        write!(w, "}}")
    }
}

/// Formats with 17 significant digits (round-trip exact for f64).
pub fn fmt_g17(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{:.1}", x)
    } else {
        format!("{:.16e}", x)
    }
}

fn hermite(y0: f64, d0: f64, y1: f64, d1: f64, u: f64, h: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * y0
        + (u3 - 2.0 * u2 + u) * h * d0
        + (-2.0 * u3 + 3.0 * u2) * y1
        + (u3 - u2) * h * d1
}

fn hermite_deriv(y0: f64, d0: f64, y1: f64, d1: f64, u: f64, h: f64) -> f64 {
    let u2 = u * u;
    ((6.0 * u2 - 6.0 * u) * y0
        + (3.0 * u2 - 4.0 * u + 1.0) * h * d0
        + (-6.0 * u2 + 6.0 * u) * y1
        + (3.0 * u2 - 2.0 * u) * h * d1)
        / h
}

/// Profile geometry shared by the builders.
struct ProfilePlan {
    /// Endpoint kind at the low-radius and high-radius ends of the band.
    kind_lo: EndpointKind,
    kind_hi: EndpointKind,
    /// Radii of the band ends.
    phi_lo: f64,
    phi_hi: f64,
    /// Arclength of one monotone sweep across the band (infinite for the
    /// axis-asymptotic profile).
    sweep: f64,
    /// Whether the extremal radius sits at the high end (K > 0) or low end.
    extremum_at_hi: Option<bool>,
}

fn plan_profile(params: &CurveParams, cfg: &QuadratureConfig) -> Result<ProfilePlan, SolveError> {
    let (phi_lo, phi_hi) = phi_bounds(params)?;
    let (kind_lo, kind_hi, extremum_at_hi) = if params.k > 0.0 {
        let lo = if params.c_k > 0.0 {
            EndpointKind::VerticalRim
        } else if params.c_k == 0.0 {
            EndpointKind::SmoothPole
        } else {
            EndpointKind::ConePoint
        };
        (lo, EndpointKind::SmoothExtremum, Some(true))
    } else if is_axis_asymptotic(params) {
        (EndpointKind::PseudosphereEnd, EndpointKind::VerticalRim, None)
    } else if params.c_k < -1.0 {
        (EndpointKind::SmoothExtremum, EndpointKind::VerticalRim, Some(false))
    } else {
        // -1 < C_K < 0: the profile meets the axis at an angle.
        (EndpointKind::ConePoint, EndpointKind::VerticalRim, None)
    };
    let sweep = if is_axis_asymptotic(params) {
        f64::INFINITY
    } else {
        band_integral(phi_lo, phi_hi, params, BandMeasure::Time, 0, cfg)?
    };
    Ok(ProfilePlan {
        kind_lo,
        kind_hi,
        phi_lo,
        phi_hi,
        sweep,
        extremum_at_hi,
    })
}

/// Builds the constant-curvature profile for validated parameters with
/// `K != 0`.
///
/// The canonical profile glues two monotone branches by reflection across
/// the smooth extremum when one exists (its time is the anchor `t0`);
/// otherwise it is a single monotone branch ending at the vertical rim,
/// which then carries the anchor. `params.orientation` fixes the sign of
/// `phi'` on the first branch by mirroring the canonical curve in time when
/// needed.
pub fn solve_constant_k(
    params: &CurveParams,
    sampling: Sampling,
    extent: Extent,
) -> Result<GeneratingCurve, SolveError> {
    let params = validate_params(*params)?;
    if params.k == 0.0 {
        return Err(SolveError::FlatProfile);
    }
    let cfg = QuadratureConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        ..QuadratureConfig::default()
    };
    let plan = plan_profile(&params, &cfg)?;
    let t0 = params.t0;

    // Natural time domain and branch layout, in canonical orientation.
    // Two-branch profiles: [t0 - sweep, t0 + sweep] with the extremum at t0.
    // Single-branch profiles: [t0 - sweep, t0] with the rim at t0 (for the
    // axis-asymptotic profile the left end is -infinity).
    let two_branch = plan.extremum_at_hi.is_some();
    let (domain_lo, domain_hi) = if two_branch {
        (t0 - plan.sweep, t0 + plan.sweep)
    } else if plan.sweep.is_infinite() {
        (f64::NEG_INFINITY, t0)
    } else {
        (t0 - plan.sweep, t0)
    };

    let (t_lo, t_hi) = match extent {
        Extent::Periods(p) => {
            if plan.sweep.is_infinite() {
                return Err(SolveError::TruncationRequired);
            }
            if (p - 1.0).abs() < 1e-12 {
                (domain_lo, domain_hi)
            } else if (p - 0.5).abs() < 1e-12 {
                if two_branch {
                    (domain_lo, t0)
                } else {
                    (domain_lo, domain_hi)
                }
            } else {
                return Err(SolveError::InvalidExtent {
                    reason: format!("periods must be 0.5 or 1.0, got {p}"),
                });
            }
        }
        Extent::TRange { t_min, t_max } => {
            let lo = t_min.max(domain_lo);
            let hi = t_max.min(domain_hi);
            if !(lo < hi) || !lo.is_finite() {
                return Err(SolveError::InvalidExtent {
                    reason: format!(
                        "requested window [{t_min}, {t_max}] does not intersect the domain \
                         [{domain_lo}, {domain_hi}] in a finite interval"
                    ),
                });
            }
            (lo, hi)
        }
    };

    let count = match sampling {
        Sampling::Count(c) => c.max(9),
        Sampling::Step(h) => {
            if !(h > 0.0) {
                return Err(SolveError::InvalidExtent {
                    reason: "sampling step must be positive".into(),
                });
            }
            (((t_hi - t_lo) / h).ceil() as usize + 1).clamp(9, 4_000_000)
        }
    };

    // Branch windows in canonical orientation. phi' > 0 exactly where phi
    // increases toward the extremum (K > 0) or away from it (K < 0).
    struct Window {
        t_a: f64,
        t_b: f64,
        sign: f64,
        // marching anchor: (t, phi), the exactly-known end of the window
        anchor_t: f64,
        anchor_phi: f64,
        far_phi: f64,
    }
    let mut windows = Vec::new();
    if two_branch {
        let ext_hi = plan.extremum_at_hi.unwrap();
        let (near, far) = if ext_hi {
            (plan.phi_hi, plan.phi_lo)
        } else {
            (plan.phi_lo, plan.phi_hi)
        };
        // ascending branch into the extremum (K>0) or descending out of the
        // rim into the minimum (K<0): sign on [domain_lo, t0]
        let sign1 = if ext_hi { 1.0 } else { -1.0 };
        windows.push(Window {
            t_a: domain_lo,
            t_b: t0,
            sign: sign1,
            anchor_t: t0,
            anchor_phi: near,
            far_phi: far,
        });
        windows.push(Window {
            t_a: t0,
            t_b: domain_hi,
            sign: -sign1,
            anchor_t: t0,
            anchor_phi: near,
            far_phi: far,
        });
    } else {
        windows.push(Window {
            t_a: domain_lo,
            t_b: t0,
            sign: 1.0,
            anchor_t: t0,
            anchor_phi: plan.phi_hi,
            far_phi: plan.phi_lo,
        });
    }

    // Uniform global grid.
    let span = t_hi - t_lo;
    let mut times = Vec::with_capacity(count);
    for i in 0..count {
        let t = if i == count - 1 {
            t_hi
        } else {
            t_lo + span * (i as f64) / ((count - 1) as f64)
        };
        times.push(t);
    }

    let mut samples: Vec<Option<CurveState>> = vec![None; count];
    for w in &windows {
        // indices of grid points inside this window
        let idx: Vec<usize> = (0..count)
            .filter(|&i| times[i] >= w.t_a - 1e-12 && times[i] <= w.t_b + 1e-12)
            .collect();
        if idx.is_empty() {
            continue;
        }
        // march outward from the anchor end
        let away_from_anchor = |i: &usize| (times[*i] - w.anchor_t).abs();
        let mut order = idx.clone();
        order.sort_by(|a, b| away_from_anchor(a).total_cmp(&away_from_anchor(b)));

        let mut phi_prev = w.anchor_phi;
        let mut t_prev = w.anchor_t;
        let mut psi_prev = 0.0; // heights are anchored at t0
        let dir = (w.far_phi - w.anchor_phi).signum();
        let far_t = if w.anchor_t == w.t_b { w.t_a } else { w.t_b };
        for i in order {
            let t_i = times[i];
            let phi_i = if (t_i - w.anchor_t).abs() < 1e-14 * (1.0 + t_i.abs()) {
                w.anchor_phi
            } else if (t_i - far_t).abs() < 1e-12 * (1.0 + t_i.abs()) {
                // the window's natural far end: snap to the exact radius
                w.far_phi
            } else {
                invert_radius(&params, &cfg, phi_prev, t_prev, t_i, dir, w.far_phi, w.anchor_phi)?
            };
            let dpsi_i = params.psi_prime(phi_i);
            let r = phi_prime_sq(phi_i, &params).unwrap_or(0.0);
            let dphi_i = w.sign * r.max(0.0).sqrt();
            let dpsi_step = band_integral(
                phi_prev.min(phi_i),
                phi_prev.max(phi_i),
                &params,
                BandMeasure::Height,
                0,
                &cfg,
            )?;
            psi_prev += dpsi_step * (t_i - t_prev).signum();
            samples[i] = Some(CurveState {
                t: t_i,
                phi: phi_i,
                psi: psi_prev,
                dphi: dphi_i,
                dpsi: dpsi_i,
                ddphi: ddphi_from_ode(phi_i, dpsi_i, params.n, params.k),
            });
            phi_prev = phi_i;
            t_prev = t_i;
        }
    }

    let mut states: Vec<CurveState> = samples
        .into_iter()
        .map(|s| s.expect("every grid point belongs to a window"))
        .collect();

    // Re-anchor heights: psi is built per window relative to the anchor;
    // windows share the anchor so the union is already consistent, except
    // that the anchor itself may not be a grid point. Shift so psi is 0 at
    // the sample nearest the anchor (exact when the anchor is sampled).
    if let Some(nearest) = (0..states.len()).min_by(|&a, &b| {
        (states[a].t - t0).abs().total_cmp(&(states[b].t - t0).abs())
    }) {
        if (states[nearest].t - t0).abs() < 1e-12 {
            let shift = states[nearest].psi;
            for s in &mut states {
                s.psi -= shift;
            }
        }
    }

    // Endpoint kinds after clipping: natural kinds where the window reaches
    // the natural domain, open cuts elsewhere. The asymptotic end is always
    // labeled as such (it is a truncation by nature).
    let a_kind = match plan.extremum_at_hi {
        Some(true) => plan.kind_lo,
        Some(false) => plan.kind_hi,
        None => plan.kind_lo,
    };
    let near = |t: f64, edge: f64| (t - edge).abs() < 1e-9 * (1.0 + t.abs());
    let kind_at = |t: f64, is_start: bool| -> EndpointKind {
        if two_branch {
            if near(t, domain_lo) || near(t, domain_hi) {
                a_kind
            } else if near(t, t0) {
                EndpointKind::SmoothExtremum
            } else {
                EndpointKind::OpenCut
            }
        } else if near(t, domain_hi) {
            plan.kind_hi
        } else if domain_lo.is_finite() && near(t, domain_lo) {
            plan.kind_lo
        } else if is_start && plan.sweep.is_infinite() {
            EndpointKind::PseudosphereEnd
        } else {
            EndpointKind::OpenCut
        }
    };
    let start_kind = kind_at(t_lo, true);
    let end_kind = kind_at(t_hi, false);

    // Branch index ranges: split where the sign of phi' flips (at t0).
    let sign_of = |range: &Range<usize>| -> Orientation {
        states[range.clone()]
            .iter()
            .find(|s| s.dphi.abs() > 1e-12)
            .map_or(Orientation::Positive, |s| {
                if s.dphi > 0.0 {
                    Orientation::Positive
                } else {
                    Orientation::Negative
                }
            })
    };
    let mut branches = Vec::new();
    if two_branch && t_lo < t0 && t_hi > t0 {
        let split = states.partition_point(|s| s.t <= t0);
        let r1 = 0..split;
        let r2 = split..states.len();
        let s1 = sign_of(&r1);
        branches.push(Branch { range: r1, sign: s1 });
        branches.push(Branch { range: r2, sign: s1.flipped() });
    } else {
        let r = 0..states.len();
        let s = sign_of(&r);
        branches.push(Branch { range: r, sign: s });
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("solver".into(), "band-inversion".into());
    metadata.insert("abs_tol".into(), fmt_g17(cfg.abs_tol));
    metadata.insert("rel_tol".into(), fmt_g17(cfg.rel_tol));
    if plan.sweep.is_finite() {
        metadata.insert("half_period".into(), fmt_g17(plan.sweep));
        metadata.insert("full_period".into(), fmt_g17(2.0 * plan.sweep));
    } else {
        metadata.insert("truncation_t_min".into(), fmt_g17(t_lo));
    }
    metadata.insert("anchor_t0".into(), fmt_g17(t0));

    let mut curve = GeneratingCurve {
        source: CurveSource::ConstantCurvature(params),
        samples: states,
        branches,
        endpoints: (start_kind, end_kind),
        metadata,
    };

    // Two-branch profiles are mirror symmetric, so their initial sign is
    // intrinsic (+ for K > 0, - for K < 0). Single-branch profiles honor
    // the requested orientation by mirroring the canonical ascending build.
    if !two_branch && params.orientation == Orientation::Negative {
        reflect_in_time(&mut curve, t0);
    }
    Ok(curve)
}

/// Mirrors a curve about `t = about`, flipping `phi'` signs and keeping
/// heights increasing.
fn reflect_in_time(curve: &mut GeneratingCurve, about: f64) {
    let n = curve.samples.len();
    curve.samples.reverse();
    for s in &mut curve.samples {
        s.t = 2.0 * about - s.t;
        s.dphi = -s.dphi;
        s.psi = -s.psi;
    }
    let mut branches = Vec::with_capacity(curve.branches.len());
    for b in curve.branches.iter().rev() {
        branches.push(Branch {
            range: (n - b.range.end)..(n - b.range.start),
            sign: b.sign.flipped(),
        });
    }
    curve.branches = branches;
    curve.endpoints = (curve.endpoints.1, curve.endpoints.0);
}

/// Solves `|integral_phi_prev^phi dphi/sqrt(R)| = |t_i - t_prev|` for the
/// next radius, marching in the direction `dir` and staying inside the
/// branch. A safeguarded Newton iteration with a bisection bracket; the
/// first guess off an extremum comes from the local quadratic model.
#[allow(clippy::too_many_arguments)]
fn invert_radius(
    params: &CurveParams,
    cfg: &QuadratureConfig,
    phi_prev: f64,
    t_prev: f64,
    t_i: f64,
    dir: f64,
    phi_far: f64,
    phi_anchor: f64,
) -> Result<f64, SolveError> {
    let target = (t_i - t_prev).abs();
    let tol = 1e-13 * (1.0 + target);

    // Bracket in phi: from phi_prev toward the far end of the branch. For
    // the axis-asymptotic profile the far end (phi = 0) is never reached,
    // so its bracket gets a positive floor placed below the root.
    let (mut lo, mut hi);
    if dir > 0.0 {
        lo = phi_prev;
        hi = phi_far;
    } else {
        lo = phi_far;
        hi = phi_prev;
    }
    if dir < 0.0 && is_axis_asymptotic(params) {
        let mut floor = phi_prev * 1e-4;
        loop {
            let reach = band_integral(floor, phi_prev, params, BandMeasure::Time, 0, cfg)?;
            if reach >= target || floor < 1e-280 {
                break;
            }
            floor *= 1e-4;
        }
        lo = floor;
    }

    // Initial guess. Off an extremum the quadratic model phi ~ E -+
    // |phi''| dt^2 / 2 seeds the step; elsewhere a forward-Euler move.
    let e = params.extremal_radius();
    let at_extremum = e.map_or(false, |e| (phi_prev - e).abs() <= 1e-12 * (1.0 + e));
    let mut cand = if at_extremum {
        let ee = e.unwrap();
        let ddphi = params.k.abs() * frac_pow(ee, params.m() - 1.0);
        let dt_e = (t_i - params.t0).abs().max(target);
        (ee + dir * 0.5 * ddphi * dt_e * dt_e).clamp(lo.max(1e-300), hi)
    } else {
        let r = phi_prime_sq(phi_prev, params).unwrap_or(0.0).sqrt();
        (phi_prev + dir * r * target).clamp(lo, hi)
    };
    if cand <= lo || cand >= hi {
        cand = 0.5 * (lo + hi);
    }

    let eval = |phi: f64| -> Result<f64, SolveError> {
        let v = band_integral(
            phi_prev.min(phi),
            phi_prev.max(phi),
            params,
            BandMeasure::Time,
            0,
            cfg,
        )?;
        Ok(v)
    };

    let mut g = eval(cand)? - target;
    for _ in 0..100 {
        if g.abs() <= tol {
            return Ok(cand);
        }
        // maintain bracket: g is increasing in |phi - phi_prev|
        if g > 0.0 {
            if dir > 0.0 {
                hi = cand;
            } else {
                lo = cand;
            }
        } else if dir > 0.0 {
            lo = cand;
        } else {
            hi = cand;
        }
        let r = phi_prime_sq(cand, params).unwrap_or(0.0).sqrt();
        let mut next = if r > 1e-12 {
            cand - dir * g * r
        } else {
            f64::NAN
        };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - cand).abs() <= f64::EPSILON * (1.0 + cand.abs()) {
            return Ok(next);
        }
        cand = next;
        g = eval(cand)? - target;
    }
    if g.abs() <= 1e6 * tol {
        Ok(cand)
    } else {
        Err(SolveError::Numerical {
            reason: format!(
                "radius inversion stalled near phi = {cand} (anchor {phi_anchor}); residual {g:.3e}"
            ),
        })
    }
}

/// Straight-line profile for `K = 0`: `phi(t) = slope * t + radius0`,
/// a cylinder when `slope = 0` and a cone otherwise. The window is clipped
/// to `phi >= 0`.
pub fn solve_flat(
    n: usize,
    slope: f64,
    radius0: f64,
    t_range: (f64, f64),
    sampling: Sampling,
) -> Result<GeneratingCurve, SolveError> {
    if n < 3 {
        return Err(CurvatureError::DimensionTooSmall { n }.into());
    }
    if slope.abs() > 1.0 {
        return Err(SolveError::DegenerateTangent { dphi: slope });
    }
    let (mut t_lo, mut t_hi) = t_range;
    if !(t_lo < t_hi) {
        return Err(SolveError::InvalidExtent {
            reason: "empty time range".into(),
        });
    }
    let mut kind_lo = EndpointKind::OpenCut;
    let mut kind_hi = EndpointKind::OpenCut;
    if slope != 0.0 {
        let t_axis = -radius0 / slope;
        let axis_kind = if slope.abs() == 1.0 {
            EndpointKind::SmoothPole
        } else {
            EndpointKind::ConePoint
        };
        if slope > 0.0 && t_axis > t_lo {
            t_lo = t_axis;
            kind_lo = axis_kind;
        }
        if slope < 0.0 && t_axis < t_hi {
            t_hi = t_axis;
            kind_hi = axis_kind;
        }
        if !(t_lo < t_hi) {
            return Err(SolveError::InvalidExtent {
                reason: "time range lies entirely at negative radius".into(),
            });
        }
    }
    let count = match sampling {
        Sampling::Count(c) => c.max(2),
        Sampling::Step(h) => (((t_hi - t_lo) / h).ceil() as usize + 1).clamp(2, 4_000_000),
    };
    let dpsi = (1.0 - slope * slope).sqrt();
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let t = if i == count - 1 {
            t_hi
        } else {
            t_lo + (t_hi - t_lo) * i as f64 / (count - 1) as f64
        };
        samples.push(CurveState {
            t,
            phi: slope * t + radius0,
            psi: dpsi * t,
            dphi: slope,
            dpsi,
            ddphi: Some(0.0),
        });
    }
    let sign = if slope >= 0.0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    };
    let mut metadata = BTreeMap::new();
    metadata.insert("solver".into(), "flat".into());
    Ok(GeneratingCurve {
        source: CurveSource::Flat { n, slope, radius0 },
        samples,
        branches: vec![Branch { range: 0..count, sign }],
        endpoints: (kind_lo, kind_hi),
        metadata,
    })
}

/// Options for the direct integrator.
#[derive(Debug, Clone, Copy)]
pub struct PrescribedOptions {
    /// Per-step local error bound (estimated by step doubling).
    pub max_local_error: f64,
    /// Keep every k-th step as an output sample.
    pub record_every: usize,
}

impl Default for PrescribedOptions {
    fn default() -> Self {
        Self {
            max_local_error: 1e-8,
            record_every: 1,
        }
    }
}

/// Integrates the profile ODE
/// `phi'' = -K(t) phi^(n-2) / (1 - phi'^2)^((n-3)/2)` with a prescribed
/// curvature function, by a classical fourth-order scheme with step-doubled
/// error control.
///
/// Integration halts early, keeping the partial trajectory and recording the
/// reason in the metadata, when the tangent degenerates (`|phi'| -> 1`) or
/// the profile reaches the axis.
pub fn solve_prescribed_k<F: Fn(f64) -> f64>(
    n: usize,
    curvature: F,
    init: &CurveState,
    step: f64,
    t_end: f64,
    opts: &PrescribedOptions,
) -> Result<GeneratingCurve, SolveError> {
    if n < 3 {
        return Err(CurvatureError::DimensionTooSmall { n }.into());
    }
    if init.dphi.abs() >= 1.0 - 1e-9 {
        return Err(SolveError::DegenerateTangent { dphi: init.dphi });
    }
    if !(step > 0.0) || t_end == init.t {
        return Err(SolveError::InvalidExtent {
            reason: "need a positive step and a nonempty time range".into(),
        });
    }
    let dir = (t_end - init.t).signum();
    let h = step * dir;
    let steps = ((t_end - init.t) / h).round().max(1.0) as usize;

    let rhs = |t: f64, y: &[f64; 3]| -> [f64; 3] {
        let (phi, v) = (y[0], y[1]);
        let w = (1.0 - v * v).max(0.0);
        let acc = -curvature(t) * phi.powi(n as i32 - 2) / frac_pow(w, (n as f64 - 3.0) / 2.0);
        [v, acc, w.sqrt()]
    };
    let rk4 = |t: f64, y: &[f64; 3], h: f64| -> [f64; 3] {
        let k1 = rhs(t, y);
        let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1], y[2] + 0.5 * h * k1[2]];
        let k2 = rhs(t + 0.5 * h, &y2);
        let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1], y[2] + 0.5 * h * k2[2]];
        let k3 = rhs(t + 0.5 * h, &y3);
        let y4 = [y[0] + h * k3[0], y[1] + h * k3[1], y[2] + h * k3[2]];
        let k4 = rhs(t + h, &y4);
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            y[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        ]
    };

    let mut t = init.t;
    let mut y = [init.phi, init.dphi, init.psi];
    let state_of = |t: f64, y: &[f64; 3]| {
        let w = (1.0 - y[1] * y[1]).max(0.0);
        CurveState {
            t,
            phi: y[0],
            psi: y[2],
            dphi: y[1],
            dpsi: w.sqrt(),
            ddphi: if n == 3 || w > 0.0 {
                Some(-curvature(t) * y[0].powi(n as i32 - 2) / frac_pow(w, (n as f64 - 3.0) / 2.0))
            } else {
                None
            },
        }
    };
    let mut samples = vec![state_of(t, &y)];
    let mut halt: Option<&'static str> = None;
    for i in 0..steps {
        let full = rk4(t, &y, h);
        let half1 = rk4(t, &y, 0.5 * h);
        let half2 = rk4(t + 0.5 * h, &half1, 0.5 * h);
        let est = (0..3)
            .map(|j| (full[j] - half2[j]).abs())
            .fold(0.0, f64::max)
            / 15.0;
        if est > opts.max_local_error {
            return Err(SolveError::StepTooLarge {
                t,
                estimate: est,
                bound: opts.max_local_error,
            });
        }
        y = half2;
        t = init.t + (i + 1) as f64 * h;
        if y[1].abs() >= 1.0 - 1e-9 {
            halt = Some("degenerate_tangent");
        } else if y[0] <= 0.0 {
            halt = Some("axis_reached");
        }
        if (i + 1) % opts.record_every == 0 || i + 1 == steps || halt.is_some() {
            samples.push(state_of(t, &y));
        }
        if halt.is_some() {
            break;
        }
    }

    // Branch decomposition by the sign of phi'.
    let mut branches = Vec::new();
    let mut start = 0usize;
    let mut sign = if samples[0].dphi >= 0.0 {
        Orientation::Positive
    } else {
        Orientation::Negative
    };
    for i in 1..samples.len() {
        let s = if samples[i].dphi >= 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        };
        if s != sign {
            branches.push(Branch { range: start..i, sign });
            start = i;
            sign = s;
        }
    }
    branches.push(Branch {
        range: start..samples.len(),
        sign,
    });

    let classify = |s: &CurveState| -> EndpointKind {
        if s.phi <= 1e-9 {
            if s.dphi.abs() >= 1.0 - 1e-6 {
                EndpointKind::SmoothPole
            } else {
                EndpointKind::ConePoint
            }
        } else if s.dphi.abs() >= 1.0 - 1e-6 {
            EndpointKind::VerticalRim
        } else {
            EndpointKind::OpenCut
        }
    };
    let endpoints = (
        classify(samples.first().unwrap()),
        classify(samples.last().unwrap()),
    );

    let mut metadata = BTreeMap::new();
    metadata.insert("solver".into(), "rk4".into());
    metadata.insert("step".into(), fmt_g17(step));
    if let Some(reason) = halt {
        metadata.insert("halt".into(), reason.into());
    }
    Ok(GeneratingCurve {
        source: CurveSource::Prescribed {
            n,
            description: "prescribed curvature".into(),
        },
        samples,
        branches,
        endpoints,
        metadata,
    })
}

/// The only profiles with a constant principal curvature `c != 0` are round
/// spheres of radius `1/|c|`; returns the pole-to-pole semicircle profile.
pub fn sphere_from_constant_principal(
    c: f64,
    kind: PrincipalKind,
    samples: usize,
) -> Result<GeneratingCurve, SolveError> {
    if c == 0.0 {
        return Err(SolveError::ZeroCurvature);
    }
    let r = 1.0 / c.abs();
    let count = samples.max(9);
    let mut states = Vec::with_capacity(count);
    for i in 0..count {
        let t = std::f64::consts::PI * r * i as f64 / (count - 1) as f64;
        let (s, co) = (t / r).sin_cos();
        states.push(CurveState {
            t,
            phi: r * s,
            psi: r * (1.0 - co),
            dphi: co,
            dpsi: s.abs(),
            ddphi: Some(-s / r),
        });
    }
    let split = count / 2;
    let mut metadata = BTreeMap::new();
    metadata.insert("solver".into(), "constant-principal".into());
    metadata.insert("radius".into(), fmt_g17(r));
    Ok(GeneratingCurve {
        source: CurveSource::ConstantPrincipal { n: 3, c, kind },
        samples: states,
        branches: vec![
            Branch { range: 0..split, sign: Orientation::Positive },
            Branch { range: split..count, sign: Orientation::Negative },
        ],
        endpoints: (EndpointKind::SmoothPole, EndpointKind::SmoothPole),
        metadata,
    })
}

/// Local series of the profile about its extremal radius, through fourth
/// order:
///
/// ```text
/// phi(t0 + dt) = E [ 1 - (K/2) E^(n-3) dt^2
///                      - (K^2/24) E^(2n-6) ((n-3)(C_K+1) - (n-2)) dt^4 ]
/// ```
///
/// with `E = ((C_K+1)/K)^(1/(n-1))`. The quartic bracket follows from
/// differentiating the conserved relation twice; the remainder is `O(dt^6)`.
pub fn taylor_extremum(params: &CurveParams, dt: f64) -> Result<f64, SolveError> {
    let params = validate_params(*params)?;
    let extremum_regime = params.k > 0.0 || (params.k < 0.0 && params.c_k < -1.0);
    if !extremum_regime {
        return Err(SolveError::WrongRegime {
            k: params.k,
            c_k: params.c_k,
        });
    }
    let m = params.m();
    let e = params.extremal_radius().expect("regime has an extremum");
    let q2 = -0.5 * params.k * frac_pow(e, m - 2.0);
    let bracket = (params.n as f64 - 3.0) * (params.c_k + 1.0) - (params.n as f64 - 2.0);
    let q4 = -params.k * params.k / 24.0 * frac_pow(e, 2.0 * (m - 2.0)) * bracket;
    Ok(e * (1.0 + q2 * dt * dt + q4 * dt.powi(4)))
}

/// Asymptotic radius of the axis-asymptotic profile (`K < 0`, `C_K = -1`)
/// for large `|t|`, anchored so that no constant term appears:
///
/// ```text
/// phi(t) = f(n) |t|^(2/(3-n)) + g(n) |t|^(2n/(3-n)) + O(|t|^((4n-2)/(3-n)))
/// ```
///
/// with `f = (1/(A B))^(2/(3-n))`, `g = (2/(n-3)) (C/B) f^n`,
/// `A = sqrt((n-1)/2)`, `B = (2/(n-3)) |K|^(-1/2)`, and
/// `C = (n-3)/(2(n^2-1)) |K|^(1/2)`.
pub fn asymptotic_pseudosphere(t: f64, n: usize, k: f64) -> Result<f64, SolveError> {
    if n <= 3 {
        return Err(CurvatureError::DimensionTooSmall { n }.into());
    }
    if !(k < 0.0) {
        return Err(SolveError::WrongRegime { k, c_k: -1.0 });
    }
    let (f, g) = asymptotic_coefficients(n, k);
    let s = t.abs();
    let p = 2.0 / (3.0 - n as f64);
    Ok(f * s.powf(p) + g * s.powf(p * n as f64))
}

/// The pair `(f(n), g(n))` of the asymptotic expansion.
pub fn asymptotic_coefficients(n: usize, k: f64) -> (f64, f64) {
    let nf = n as f64;
    let a = ((nf - 1.0) / 2.0).sqrt();
    let b = 2.0 / (nf - 3.0) * k.abs().powf(-0.5);
    let c = (nf - 3.0) / (2.0 * (nf * nf - 1.0)) * k.abs().sqrt();
    let f = (1.0 / (a * b)).powf(2.0 / (3.0 - nf));
    let g = 2.0 / (nf - 3.0) * (c / b) * f.powi(n as i32);
    (f, g)
}

/// Calibrates the time translation between a solved axis-asymptotic curve
/// and the anchored asymptotic frame, from the deepest available sample:
/// `phi_solved(t)` then matches `asymptotic_pseudosphere(t - shift, ..)`.
pub fn asymptotic_anchor_shift(curve: &GeneratingCurve, n: usize, k: f64) -> f64 {
    let deepest = curve
        .samples
        .iter()
        .min_by(|a, b| a.phi.total_cmp(&b.phi))
        .expect("curve has samples");
    let nf = n as f64;
    let a = ((nf - 1.0) / 2.0).sqrt();
    let babs = 2.0 / (nf - 3.0) * k.abs().powf(-0.5);
    let c = (nf - 3.0) / (2.0 * (nf * nf - 1.0)) * k.abs().sqrt();
    let s_model =
        a * babs * deepest.phi.powf((3.0 - nf) / 2.0) + a * c * deepest.phi.powf((nf + 1.0) / 2.0);
    // The deep end may sit at either end of the time window depending on
    // the orientation of the build.
    if deepest.t <= curve.samples[curve.samples.len() / 2].t {
        deepest.t + s_model
    } else {
        deepest.t - s_model
    }
}
