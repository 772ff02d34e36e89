//! Curvature algebra for rotational hypersurfaces in `R^n`.
//!
//! A rotational hypersurface is swept by revolving a planar profile curve
//! `(phi(t), psi(t))` about the last coordinate axis, where `phi` is the
//! radius of the meridian `(n-2)`-sphere, `psi` the height, and `t` the
//! arclength parameter (`phi'^2 + psi'^2 = 1`, `psi' >= 0`).
//!
//! For constant Gauss-Kronecker curvature `K`, the profile obeys
//!
//! ```text
//! K = -phi'' (1 - phi'^2)^((n-3)/2) / phi^(n-2)
//! ```
//!
//! which integrates once to the conserved relation
//!
//! ```text
//! K phi^(n-1) = (1 - phi'^2)^((n-1)/2) + C_K
//! ```
//!
//! with a constant `C_K`. Everything in this module is a pure function of
//! that relation: parameter validation, the bounds the relation forces on
//! `phi`, recovery of `phi'` and `phi''`, and the closed-form principal and
//! Gauss curvatures.

use thiserror::Error;

/// Sign of `phi'` on the initial monotone branch of a profile curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn signum(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error("ambient dimension n = {n} is too small; rotational profiles need n >= 3")]
    DimensionTooSmall { n: usize },
    #[error(
        "first-integral constant C_K = {c_k} is inadmissible for K = {k}; \
         the conserved relation requires C_K in ({lo}, {hi})"
    )]
    ConstantOutOfRange { c_k: f64, k: f64, lo: f64, hi: f64 },
    #[error(
        "curvature formulas are singular at this point (phi = {phi}, psi' = {dpsi}); \
         they require phi > 0 and psi' > 0"
    )]
    DegeneratePoint { phi: f64, dpsi: f64 },
    #[error(
        "phi = {phi} is outside the admissible band [{lo}, {hi}] where \
         K phi^(n-1) - C_K lies in [0, 1]"
    )]
    OutOfBounds { phi: f64, lo: f64, hi: f64 },
}

/// Parameters of a constant-curvature profile: dimension, curvature `K`,
/// first-integral constant `C_K`, initial branch orientation, and the anchor
/// time `t0` given to the profile's distinguished point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    pub n: usize,
    pub k: f64,
    pub c_k: f64,
    pub orientation: Orientation,
    pub t0: f64,
}

impl CurveParams {
    pub fn new(n: usize, k: f64, c_k: f64) -> Self {
        Self {
            n,
            k,
            c_k,
            orientation: Orientation::Positive,
            t0: 0.0,
        }
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_anchor(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    /// Exponent `m = n - 1` of the first integral.
    pub fn m(&self) -> f64 {
        (self.n - 1) as f64
    }

    /// `x(phi) = K phi^(n-1) - C_K`; solutions keep `x` in `[0, 1]`.
    pub fn x_of_phi(&self, phi: f64) -> f64 {
        self.k * phi.powi(self.n as i32 - 1) - self.c_k
    }

    /// `1 - x(phi)`, evaluated without cancellation near the extremum where
    /// `x = 1`.
    pub fn one_minus_x(&self, phi: f64) -> f64 {
        (self.c_k + 1.0) - self.k * phi.powi(self.n as i32 - 1)
    }

    /// `psi' = x^(1/(n-1))` at radius `phi` (clamping roundoff dust at 0).
    pub fn psi_prime(&self, phi: f64) -> f64 {
        let x = self.x_of_phi(phi).max(0.0);
        frac_pow(x, 1.0 / self.m())
    }

    /// The extremal radius where `x = 1` (so `phi' = 0`), if the profile has
    /// one. `K > 0` reaches it from below as a maximum; `K < 0` with
    /// `C_K < -1` reaches it from above as a minimum. For `K < 0` and
    /// `C_K = -1` it degenerates to the axis itself.
    pub fn extremal_radius(&self) -> Option<f64> {
        if self.k == 0.0 {
            return None;
        }
        let e = (self.c_k + 1.0) / self.k;
        if e >= 0.0 {
            Some(frac_pow(e, 1.0 / self.m()))
        } else {
            None
        }
    }
}

/// One sampled point of a profile curve. `ddphi` is `None` at points where
/// the curvature ODE does not determine it (vertical-tangent rims with
/// `psi' = 0` in dimensions above 3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveState {
    pub t: f64,
    pub phi: f64,
    pub psi: f64,
    pub dphi: f64,
    pub dpsi: f64,
    pub ddphi: Option<f64>,
}

impl CurveState {
    /// Deviation of `phi'^2 + psi'^2` from 1.
    pub fn arclength_defect(&self) -> f64 {
        (self.dphi * self.dphi + self.dpsi * self.dpsi - 1.0).abs()
    }
}

/// Dimensions of a doubly rotational hypersurface, invariant under rotations
/// acting separately on the first `p` and last `q` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PqParams {
    pub p: usize,
    pub q: usize,
}

impl PqParams {
    pub fn new(p: usize, q: usize) -> Result<Self, CurvatureError> {
        let n = p + q;
        if p < 1 || q < 1 || n < 3 {
            return Err(CurvatureError::DimensionTooSmall { n });
        }
        Ok(Self { p, q })
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }
}

/// Fractional power for the first-integral exponents: defined as 0 at 0,
/// never a complex branch. Negative bases only arise from roundoff at
/// extrema, where the caller clamps first.
pub(crate) fn frac_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (e * x.ln()).exp()
    }
}

/// Roundoff slop accepted before a radicand or base is treated as negative.
pub(crate) const CLAMP_EPS: f64 = 1e-12;

/// Checks the admissibility of `params` and returns it unchanged.
///
/// `n >= 3` always; for `K > 0` the conserved relation needs `C_K > -1`,
/// for `K < 0` it needs `C_K < 0`. `C_K` is unconstrained (and unused) when
/// `K = 0`.
pub fn validate_params(params: CurveParams) -> Result<CurveParams, CurvatureError> {
    if params.n < 3 {
        return Err(CurvatureError::DimensionTooSmall { n: params.n });
    }
    if params.k > 0.0 && params.c_k <= -1.0 {
        return Err(CurvatureError::ConstantOutOfRange {
            c_k: params.c_k,
            k: params.k,
            lo: -1.0,
            hi: f64::INFINITY,
        });
    }
    if params.k < 0.0 && params.c_k >= 0.0 {
        return Err(CurvatureError::ConstantOutOfRange {
            c_k: params.c_k,
            k: params.k,
            lo: f64::NEG_INFINITY,
            hi: 0.0,
        });
    }
    Ok(params)
}

/// Principal curvatures `(k1, k_rest)` at an interior profile point:
/// `k1 = -phi''/psi'` along the profile and `k_rest = psi'/phi` with
/// multiplicity `n - 2` along the meridian sphere.
pub fn principal_curvatures(state: &CurveState, n: usize) -> Result<(f64, f64), CurvatureError> {
    if state.dpsi <= 0.0 || state.phi <= 0.0 {
        return Err(CurvatureError::DegeneratePoint {
            phi: state.phi,
            dpsi: state.dpsi,
        });
    }
    let ddphi = state.ddphi.ok_or(CurvatureError::DegeneratePoint {
        phi: state.phi,
        dpsi: state.dpsi,
    })?;
    let _ = n;
    Ok((-ddphi / state.dpsi, state.dpsi / state.phi))
}

/// Gauss-Kronecker curvature `-phi'' psi'^(n-3) / phi^(n-2)`, the product of
/// the `n - 1` principal curvatures.
pub fn gauss_curvature(state: &CurveState, n: usize) -> Result<f64, CurvatureError> {
    let (k1, k_rest) = principal_curvatures(state, n)?;
    Ok(k1 * k_rest.powi(n as i32 - 2))
}

/// Gauss-Kronecker curvature of the doubly rotational hypersurface whose
/// profile passes through `(phi, psi)` with the given derivatives:
///
/// ```text
/// K = (-1)^q phi'' phi'^(q-1) psi'^(p-2) / (phi^(p-1) psi^(q-1))
/// ```
pub fn pq_gauss_curvature(
    phi: f64,
    psi: f64,
    dphi: f64,
    dpsi: f64,
    ddphi: f64,
    pq: &PqParams,
) -> Result<f64, CurvatureError> {
    if phi <= 0.0 || psi <= 0.0 {
        return Err(CurvatureError::DegeneratePoint { phi, dpsi });
    }
    let (p, q) = (pq.p as i32, pq.q as i32);
    let sign = if pq.q % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * ddphi * dphi.powi(q - 1) * dpsi.powi(p - 2) / (phi.powi(p - 1) * psi.powi(q - 1)))
}

/// Residual of the conserved relation at a state:
/// `K phi^(n-1) - (1 - phi'^2)^((n-1)/2) - C_K`. Exact solutions give 0.
pub fn first_integral_residual(state: &CurveState, params: &CurveParams) -> f64 {
    let m = params.m();
    let w = (1.0 - state.dphi * state.dphi).max(0.0);
    params.k * state.phi.powi(params.n as i32 - 1) - frac_pow(w, 0.5 * m) - params.c_k
}

/// Recovers `phi'` from the conserved relation at radius `phi`:
/// `sign * sqrt(1 - x^(2/(n-1)))` with `x = K phi^(n-1) - C_K`.
///
/// Errors with [`CurvatureError::OutOfBounds`] when `x` leaves `[0, 1]` by
/// more than roundoff; values within `1e-12` of the ends are clamped.
pub fn phi_prime_from_first_integral(
    phi: f64,
    params: &CurveParams,
    sign: Orientation,
) -> Result<f64, CurvatureError> {
    let radicand = phi_prime_sq(phi, params)?;
    Ok(sign.signum() * radicand.sqrt())
}

/// `phi'^2 = 1 - x^(2/(n-1))`, evaluated stably near both ends of `[0, 1]`.
pub(crate) fn phi_prime_sq(phi: f64, params: &CurveParams) -> Result<f64, CurvatureError> {
    let m = params.m();
    let x = params.x_of_phi(phi);
    let w = params.one_minus_x(phi); // 1 - x
    if x < -CLAMP_EPS || w < -CLAMP_EPS {
        let (lo, hi) = phi_bounds(params)?;
        return Err(CurvatureError::OutOfBounds { phi, lo, hi });
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    if w <= 0.0 {
        return Ok(0.0);
    }
    // Two stable forms: direct near x = 0 (where w = 1 - x carries no
    // precision about x), expm1/ln1p near x = 1 (where the subtraction
    // 1 - x^(2/m) cancels).
    let r = if x <= 0.5 {
        1.0 - frac_pow(x, 2.0 / m)
    } else {
        -((2.0 / m) * (-w).ln_1p()).exp_m1()
    };
    Ok(r.clamp(0.0, 1.0))
}

/// The band `[phi_min, phi_max]` that the conserved relation allows.
///
/// For `K > 0`: `[(max(0, C_K/K))^(1/(n-1)), ((C_K+1)/K)^(1/(n-1))]`.
/// For `K < 0`: `[(max(0, (C_K+1)/K))^(1/(n-1)), (C_K/K)^(1/(n-1))]`.
/// `K = 0` leaves `phi` unbounded and is rejected here.
pub fn phi_bounds(params: &CurveParams) -> Result<(f64, f64), CurvatureError> {
    validate_params(*params)?;
    let m = params.m();
    if params.k == 0.0 {
        return Ok((0.0, f64::INFINITY));
    }
    let inv = 1.0 / m;
    let (lo_pow, hi_pow) = if params.k > 0.0 {
        ((params.c_k / params.k).max(0.0), (params.c_k + 1.0) / params.k)
    } else {
        (((params.c_k + 1.0) / params.k).max(0.0), params.c_k / params.k)
    };
    Ok((frac_pow(lo_pow, inv), frac_pow(hi_pow, inv)))
}

/// Builds the full profile state at radius `phi` from the conserved
/// relation: derivatives from the first integral, `phi''` from the ODE.
/// The height is left at 0 (it is a path integral, not pointwise data).
pub fn state_from_radius(
    phi: f64,
    params: &CurveParams,
    sign: Orientation,
    t: f64,
) -> Result<CurveState, CurvatureError> {
    let dphi = phi_prime_from_first_integral(phi, params, sign)?;
    let dpsi = params.psi_prime(phi);
    Ok(CurveState {
        t,
        phi,
        psi: 0.0,
        dphi,
        dpsi,
        ddphi: ddphi_from_ode(phi, dpsi, params.n, params.k),
    })
}

/// `phi''` recovered from the curvature ODE,
/// `phi'' = -K phi^(n-2) / psi'^(n-3)`.
///
/// Returns `None` where the ODE leaves it undetermined: `psi' = 0` with
/// `n > 3` (the profile is only `C^1` across such a rim).
pub fn ddphi_from_ode(phi: f64, dpsi: f64, n: usize, k: f64) -> Option<f64> {
    if n == 3 {
        return Some(-k * phi);
    }
    if dpsi <= 0.0 {
        return None;
    }
    Some(-k * phi.powi(n as i32 - 2) / dpsi.powi(n as i32 - 3))
}
