//! Rotational hypersurfaces of constant or prescribed Gauss-Kronecker
//! curvature in `R^n`.
//!
//! The library builds the generating (profile) curves of such hypersurfaces,
//! measures the resulting surfaces, and verifies its own closed-form
//! curvature algebra against a finite-difference oracle:
//!
//! * [`curvature`] — the profile ODE, its first integral, parameter
//!   validation, solution bounds, and principal/Gauss curvature formulas.
//! * [`quadrature`] — adaptive evaluation of the singular band integrals
//!   behind the inverse function `t(phi)`, periods, and height gains.
//! * [`solver`] — complete profile curves: constant-curvature solutions with
//!   branch gluing and endpoint classification, direct integration for
//!   prescribed curvature, series and asymptotic evaluators, and the
//!   power-law (Euler/Riccati) closed forms.
//! * [`measures`] — areas and enclosed volumes in both supported
//!   conventions, ball/sphere measure formulas, and mesh export.
//! * [`verify`] — independent verification through numerically differenced
//!   fundamental forms and the fixed-height comparison checks.
//!
//! A guided tour with runnable examples lives in the `book/` directory of
//! the repository; its code blocks compile and run as doc-tests of the
//! [`book`] module.

pub mod curvature;
pub mod measures;
pub mod quadrature;
pub mod solver;
pub mod verify;

mod book;

pub use curvature::{
    first_integral_residual, gauss_curvature, phi_bounds, phi_prime_from_first_integral,
    pq_gauss_curvature, principal_curvatures, validate_params, CurvatureError, CurveParams,
    CurveState, Orientation, PqParams,
};
pub use quadrature::{height_gain, period_data, time_of_flight, PeriodData, QuadratureConfig};
pub use measures::{ball_volume, enclosed_volume, revolve_mesh, sphere_area, surface_area, Convention, MeasureResult, MeshModel};
pub use verify::{check_comparison, embed_point, numeric_curvatures, numeric_forms, CheckOutcome, EmbeddingPoint, FundamentalForms, VerifyError};
pub use solver::{
    asymptotic_pseudosphere, solve_constant_k, solve_flat, solve_prescribed_k,
    sphere_from_constant_principal, taylor_extremum, Branch, CurveSource, EndpointKind, Extent,
    GeneratingCurve, PrincipalKind, Sampling, SolveError,
};
