//! Independent verification of the curvature algebra.
//!
//! Nothing here reuses the closed-form curvature formulas: the hypersurface
//! is embedded through its position vector, the fundamental forms are
//! assembled from central finite differences in the `(t, theta)` chart, and
//! the curvatures come out of the shape operator's eigenvalues. Agreement
//! with the closed forms is then a genuine cross-check, as are the
//! fixed-height comparison tests between profiles of different curvature.

use crate::curvature::{CurveParams, PqParams};
use crate::solver::{solve_constant_k, Extent, GeneratingCurve, Sampling, SolveError};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("finite-difference step {h} is outside [1e-6, 1e-2]")]
    StepOutOfRange { h: f64 },
    #[error("tangent vectors are numerically dependent here (conditioning {cond:.3e})")]
    RankDeficiency { cond: f64 },
    #[error("first fundamental form is numerically singular")]
    SingularFirstForm,
    #[error("height {y} is outside the common height range [{lo}, {hi}]")]
    HeightOutOfRange { y: f64, lo: f64, hi: f64 },
    #[error("angle {value} outside its chart range")]
    AngleOutOfRange { value: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// A point of the rotational chart: radius, height, and the `n - 2`
/// meridian angles (`theta_1` in `[-pi/2, pi/2]`, the rest in `[0, 2pi)`).
#[derive(Debug, Clone)]
pub struct EmbeddingPoint {
    pub phi: f64,
    pub psi: f64,
    pub angles: Vec<f64>,
}

impl EmbeddingPoint {
    pub fn validate(&self) -> Result<(), VerifyError> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        if let Some(&t1) = self.angles.first() {
            if !(-half_pi..=half_pi).contains(&t1) {
                return Err(VerifyError::AngleOutOfRange { value: t1 });
            }
        }
        for &a in self.angles.iter().skip(1) {
            if !(0.0..2.0 * std::f64::consts::PI).contains(&a) {
                return Err(VerifyError::AngleOutOfRange { value: a });
            }
        }
        Ok(())
    }
}

/// Position vector of the rotational hypersurface in `R^n`:
/// the first `n - 1` coordinates put `phi` on the meridian sphere through
/// the nested cosine chart, the last is the height.
pub fn embed_point(p: &EmbeddingPoint, n: usize) -> DVector<f64> {
    let mut out = DVector::zeros(n);
    let coords = sphere_chart(p.phi, &p.angles, n - 1);
    for (i, c) in coords.iter().enumerate() {
        out[i] = *c;
    }
    out[n - 1] = p.psi;
    out
}

/// `radius * (cos..cos, cos..sin, ..., sin)` chart of the `(k-1)`-sphere in
/// `R^k`, taking `k - 1` angles.
fn sphere_chart(radius: f64, angles: &[f64], k: usize) -> Vec<f64> {
    assert_eq!(angles.len(), k - 1, "need k - 1 angles for the (k-1)-sphere");
    let mut out = vec![0.0; k];
    // coordinate j (1-based): radius * prod_{a=1}^{k-j} cos(theta_a) * sin(theta_{k+1-j})
    // with the convention sin(theta_k) := 1 for the first coordinate.
    for j in 1..=k {
        let mut v = radius;
        for a in 0..k - j {
            v *= angles[a].cos();
        }
        if j > 1 {
            v *= angles[k - j].sin();
        }
        out[j - 1] = v;
    }
    out
}

/// Which embedding family the oracle differences.
#[derive(Debug, Clone, Copy)]
pub enum Embedding {
    /// Rotational hypersurface in `R^n`.
    Rotational { n: usize },
    /// Doubly rotational hypersurface: radius on a `(p-1)`-sphere, height
    /// on a `(q-1)`-sphere.
    DoublyRotational { pq: PqParams },
}

impl Embedding {
    /// Ambient dimension.
    pub fn n(&self) -> usize {
        match self {
            Embedding::Rotational { n } => *n,
            Embedding::DoublyRotational { pq } => pq.n(),
        }
    }

    /// Number of chart angles.
    pub fn angle_count(&self) -> usize {
        match self {
            Embedding::Rotational { n } => n - 2,
            Embedding::DoublyRotational { pq } => (pq.p - 1) + (pq.q - 1),
        }
    }

    fn position(&self, phi: f64, psi: f64, angles: &[f64]) -> Vec<f64> {
        match self {
            Embedding::Rotational { n } => {
                let mut out = sphere_chart(phi, &angles[..n - 2], n - 1);
                out.push(psi);
                out
            }
            Embedding::DoublyRotational { pq } => {
                let (p, q) = (pq.p, pq.q);
                let mut out = sphere_chart(phi, &angles[..p - 1], p);
                out.extend(sphere_chart(psi, &angles[p - 1..], q));
                out
            }
        }
    }
}

/// Numerically differenced fundamental forms at a chart point.
#[derive(Debug, Clone)]
pub struct FundamentalForms {
    pub first: DMatrix<f64>,
    pub second: DMatrix<f64>,
    pub normal: DVector<f64>,
    pub step: f64,
}

/// Differenced forms of a solved profile curve at time `t`.
pub fn numeric_forms(
    curve: &GeneratingCurve,
    t: f64,
    angles: &[f64],
    h: f64,
) -> Result<FundamentalForms, VerifyError> {
    let n = curve.n();
    let family = Embedding::Rotational { n };
    let phi = |s: f64| curve.phi_at(s);
    let psi = |s: f64| curve.psi_at(s);
    numeric_forms_impl(&phi, &psi, t, family, angles, h)
}

/// A profile 2-jet: enough local data to difference the fundamental forms
/// of either embedding family without a globally solved curve.
#[derive(Debug, Clone, Copy)]
pub struct ProfileJet {
    pub phi: f64,
    pub psi: f64,
    pub dphi: f64,
    pub dpsi: f64,
    pub ddphi: f64,
}

impl ProfileJet {
    /// `psi''` forced by the arclength constraint.
    pub fn ddpsi(&self) -> f64 {
        -self.dphi * self.ddphi / self.dpsi
    }
}

/// Differenced forms of the local quadratic profile through a 2-jet.
pub fn numeric_forms_jet(
    jet: &ProfileJet,
    family: Embedding,
    angles: &[f64],
    h: f64,
) -> Result<FundamentalForms, VerifyError> {
    let phi = move |s: f64| jet.phi + jet.dphi * s + 0.5 * jet.ddphi * s * s;
    let ddpsi = jet.ddpsi();
    let psi = move |s: f64| jet.psi + jet.dpsi * s + 0.5 * ddpsi * s * s;
    numeric_forms_impl(&phi, &psi, 0.0, family, angles, h)
}

fn numeric_forms_impl(
    phi: &dyn Fn(f64) -> f64,
    psi: &dyn Fn(f64) -> f64,
    t: f64,
    family: Embedding,
    angles: &[f64],
    h: f64,
) -> Result<FundamentalForms, VerifyError> {
    if !(1e-6..=1e-2).contains(&h) {
        return Err(VerifyError::StepOutOfRange { h });
    }
    let n = family.n();
    let dim = 1 + family.angle_count();
    assert_eq!(angles.len(), family.angle_count(), "angle count mismatch");

    let position = |dt: f64, dang: Option<(usize, f64)>| -> DVector<f64> {
        let mut th = angles.to_vec();
        if let Some((i, d)) = dang {
            th[i] += d;
        }
        let s = t + dt;
        DVector::from_vec(family.position(phi(s), psi(s), &th))
    };

    // tangents by central differences
    let mut tangents = DMatrix::zeros(n, dim);
    for i in 0..dim {
        let (fp, fm) = if i == 0 {
            (position(h, None), position(-h, None))
        } else {
            (position(0.0, Some((i - 1, h))), position(0.0, Some((i - 1, -h))))
        };
        let col = (fp - fm) / (2.0 * h);
        tangents.set_column(i, &col);
    }

    let first = tangents.transpose() * &tangents;

    // unit normal from the orthogonal complement of the tangent span
    let svd = tangents.clone().svd(true, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin < 1e-8 * smax {
        return Err(VerifyError::RankDeficiency { cond: smin / smax });
    }
    let u = svd.u.as_ref().expect("svd computed with u");
    // complete the basis: the normal is orthogonal to the range of `u`
    let mut normal = DVector::zeros(n);
    {
        // start from the coordinate direction least represented in the range
        let mut best = 0;
        let mut best_norm = f64::INFINITY;
        for j in 0..n {
            let row_norm: f64 = (0..dim.min(u.ncols())).map(|c| u[(j, c)] * u[(j, c)]).sum();
            if row_norm < best_norm {
                best_norm = row_norm;
                best = j;
            }
        }
        normal[best] = 1.0;
        for c in 0..dim.min(u.ncols()) {
            let proj: f64 = (0..n).map(|j| u[(j, c)] * normal[j]).sum();
            for j in 0..n {
                normal[j] -= proj * u[(j, c)];
            }
        }
        let nn = normal.norm();
        if nn < 1e-10 {
            return Err(VerifyError::RankDeficiency { cond: nn });
        }
        normal /= nn;
    }
    // orient along the outward pattern (psi'-weighted meridian direction,
    // last component -phi')
    let dphi_num = (phi(t + h) - phi(t - h)) / (2.0 * h);
    let dpsi_num = (psi(t + h) - psi(t - h)) / (2.0 * h);
    let here = position(0.0, None);
    let mut pattern = DVector::zeros(n);
    match family {
        Embedding::Rotational { n: nn_ } => {
            let phi0 = phi(t).max(1e-300);
            for j in 0..nn_ - 1 {
                pattern[j] = dpsi_num * here[j] / phi0;
            }
            pattern[nn_ - 1] = -dphi_num;
        }
        Embedding::DoublyRotational { pq } => {
            let phi0 = phi(t).max(1e-300);
            let psi0 = psi(t).max(1e-300);
            for j in 0..pq.p {
                pattern[j] = dpsi_num * here[j] / phi0;
            }
            for j in 0..pq.q {
                pattern[pq.p + j] = -dphi_num * here[pq.p + j] / psi0;
            }
        }
    }
    if normal.dot(&pattern) < 0.0 {
        normal = -normal;
    }

    // second fundamental form from differenced second derivatives
    let center = here;
    let mut second = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let dd = if i == j {
                let (fp, fm) = if i == 0 {
                    (position(h, None), position(-h, None))
                } else {
                    (position(0.0, Some((i - 1, h))), position(0.0, Some((i - 1, -h))))
                };
                (fp + fm - 2.0 * &center) / (h * h)
            } else {
                // mixed: one of them may be the time direction
                let shift = |si: f64, sj: f64| -> DVector<f64> {
                    let mut th = angles.to_vec();
                    let mut dt = 0.0;
                    if i == 0 {
                        dt = si;
                    } else {
                        th[i - 1] += si;
                    }
                    th[j - 1] += sj;
                    let s = t + dt;
                    DVector::from_vec(family.position(phi(s), psi(s), &th))
                };
                (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4.0 * h * h)
            };
            let v = dd.dot(&normal);
            second[(i, j)] = v;
            second[(j, i)] = v;
        }
    }

    Ok(FundamentalForms {
        first,
        second,
        normal,
        step: h,
    })
}

/// Principal curvatures (sorted ascending) and their product, from the
/// eigenvalues of the differenced shape operator `-II I^-1`.
pub fn numeric_curvatures(forms: &FundamentalForms) -> Result<(Vec<f64>, f64), VerifyError> {
    let chol = forms
        .first
        .clone()
        .cholesky()
        .ok_or(VerifyError::SingularFirstForm)?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or(VerifyError::SingularFirstForm)?;
    let sym = -(&l_inv * &forms.second * l_inv.transpose());
    let eig = sym.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    let gauss = vals.iter().product();
    Ok((vals, gauss))
}

/// Report of one fixed-height comparison between two profiles.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    /// `(height, phi_a - phi_b)` per requested height.
    pub differences: Vec<(f64, f64)>,
    pub max_difference: f64,
    pub pass: bool,
}

/// Compares two constant-curvature profiles of curvatures `a` and `b`
/// sharing the extremal radius `c` at equal heights above the extremum.
///
/// For `a > b > 0` both profiles descend from a shared maximum `c`; for
/// `0 > a > b` both ascend from a shared minimum `c`. In either regime the
/// profile of larger `|K|` stays closer to the axis, so every reported
/// difference should be nonpositive (tolerance `1e-8`).
pub fn check_comparison(
    a: f64,
    b: f64,
    c: f64,
    n: usize,
    heights: &[f64],
) -> Result<ComparisonReport, VerifyError> {
    let m = n as f64 - 1.0;
    let make = |k: f64| -> Result<GeneratingCurve, VerifyError> {
        let c_k = c.powf(m) * k - 1.0;
        Ok(solve_constant_k(
            &CurveParams::new(n, k, c_k),
            Sampling::Count(1201),
            Extent::Periods(1.0),
        )?)
    };
    let curve_a = make(a)?;
    let curve_b = make(b)?;
    // heights are measured from the shared extremum, where psi = 0
    let hi_a = curve_a.samples.last().unwrap().psi;
    let hi_b = curve_b.samples.last().unwrap().psi;
    let hi = hi_a.min(hi_b);
    let mut differences = Vec::with_capacity(heights.len());
    let mut max_difference = f64::NEG_INFINITY;
    for &y in heights {
        if !(0.0..=hi).contains(&y) {
            return Err(VerifyError::HeightOutOfRange { y, lo: 0.0, hi });
        }
        let ta = curve_a
            .time_at_height(y)
            .ok_or(VerifyError::HeightOutOfRange { y, lo: 0.0, hi })?;
        let tb = curve_b
            .time_at_height(y)
            .ok_or(VerifyError::HeightOutOfRange { y, lo: 0.0, hi })?;
        let diff = curve_a.phi_at(ta) - curve_b.phi_at(tb);
        max_difference = max_difference.max(diff);
        differences.push((y, diff));
    }
    Ok(ComparisonReport {
        differences,
        max_difference,
        pass: max_difference <= 1e-8,
    })
}

/// One line of a verification report.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub max_error: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, max_error: f64, threshold: f64) -> Self {
        let name = name.into();
        Self {
            pass: max_error <= threshold,
            name,
            max_error,
            threshold,
        }
    }
}

/// The twelve-parameter fixture grid spanning both curvature signs used by
/// the verification suites.
pub fn fixture_grid() -> Vec<CurveParams> {
    vec![
        CurveParams::new(3, 1.0, -0.5),
        CurveParams::new(4, 1.0, -0.5),
        CurveParams::new(3, 1.0, 0.0),
        CurveParams::new(5, 1.0, 0.0),
        CurveParams::new(4, 1.0, 2.0),
        CurveParams::new(7, 1.0, 2.0),
        CurveParams::new(4, -1.0, -2.0),
        CurveParams::new(5, -1.0, -2.0),
        CurveParams::new(3, -1.0, -1.0),
        CurveParams::new(4, -1.0, -1.0),
        CurveParams::new(4, -1.0, -0.5),
        CurveParams::new(7, -1.0, -0.5),
    ]
}

/// Builds the fixture curve for one parameter set (axis-asymptotic profiles
/// get the default truncation).
pub fn fixture_curve(params: &CurveParams, samples: usize) -> Result<GeneratingCurve, SolveError> {
    let extent = if params.k < 0.0 && (params.c_k + 1.0).abs() <= 1e-14 {
        Extent::TRange { t_min: params.t0 - 25.0, t_max: params.t0 }
    } else {
        Extent::Periods(1.0)
    };
    solve_constant_k(params, Sampling::Count(samples), extent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{gauss_curvature, pq_gauss_curvature};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn embed_examples() {
        let p = EmbeddingPoint { phi: 1.0, psi: 0.0, angles: vec![0.0, 0.0] };
        let v = embed_point(&p, 4);
        assert_eq!(v.as_slice(), &[1.0, 0.0, 0.0, 0.0]);

        // n = 3 circle chart
        let p = EmbeddingPoint { phi: 2.0, psi: 5.0, angles: vec![0.7] };
        let v = embed_point(&p, 3);
        assert_relative_eq!(v[0], 2.0 * 0.7f64.cos());
        assert_relative_eq!(v[1], 2.0 * 0.7f64.sin());
        assert_relative_eq!(v[2], 5.0);
    }

    #[test]
    fn embedded_radius_is_phi() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(3..8);
            let mut angles = vec![rng.gen_range(-1.4..1.4)];
            for _ in 0..n - 3 {
                angles.push(rng.gen_range(0.0..6.2));
            }
            let phi = rng.gen_range(0.1..3.0);
            let p = EmbeddingPoint { phi, psi: rng.gen_range(-1.0..1.0), angles };
            p.validate().unwrap();
            let v = embed_point(&p, n);
            let r: f64 = (0..n - 1).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
            assert_relative_eq!(r, phi, max_relative = 1e-12);
        }
    }

    #[test]
    fn step_bounds_are_enforced() {
        let curve = fixture_curve(&CurveParams::new(3, 1.0, 0.0), 401).unwrap();
        assert!(matches!(
            numeric_forms(&curve, 0.3, &[0.2], 1.0),
            Err(VerifyError::StepOutOfRange { .. })
        ));
    }

    #[test]
    fn forms_of_unit_sphere_at_equator() {
        // dense samples: differencing runs through the curve interpolant,
        // whose second derivative carries the grid-spacing-squared error
        let curve = fixture_curve(&CurveParams::new(3, 1.0, 0.0), 2001).unwrap();
        // equator is the anchor t = 0
        let forms = numeric_forms(&curve, 0.0, &[0.3], 1e-4).unwrap();
        // I = diag(1, phi^2) in the (t, theta) chart
        assert_relative_eq!(forms.first[(0, 0)], 1.0, epsilon = 1e-7);
        assert_relative_eq!(forms.first[(1, 1)], 1.0, epsilon = 1e-7);
        assert!(forms.first[(0, 1)].abs() < 1e-7);
        let (principal, gauss) = numeric_curvatures(&forms).unwrap();
        assert_relative_eq!(principal[0], 1.0, epsilon = 1e-6);
        assert_relative_eq!(principal[1], 1.0, epsilon = 1e-6);
        assert_relative_eq!(gauss, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn normal_matches_pattern_at_zero_angles() {
        let curve = fixture_curve(&CurveParams::new(4, 1.0, 0.0), 801).unwrap();
        let t = 0.2;
        let s = curve.state_at(t);
        let forms = numeric_forms(&curve, t, &[0.0, 0.0], 1e-4).unwrap();
        assert_relative_eq!(forms.normal[0], s.dpsi, epsilon = 1e-7);
        assert!(forms.normal[1].abs() < 1e-8);
        assert!(forms.normal[2].abs() < 1e-8);
        assert_relative_eq!(forms.normal[3], -s.dphi, epsilon = 1e-7);
    }

    #[test]
    fn cylinder_principal_curvatures() {
        let curve = crate::solver::solve_flat(5, 0.0, 2.0, (-1.0, 1.0), Sampling::Count(101)).unwrap();
        let forms = numeric_forms(&curve, 0.0, &[0.4, 0.9, 1.3], 1e-3).unwrap();
        let (principal, _) = numeric_curvatures(&forms).unwrap();
        assert!(principal[0].abs() < 1e-6);
        for k in &principal[1..] {
            assert_relative_eq!(*k, 0.5, epsilon = 1e-6);
        }
    }

    #[test]
    fn diagonality_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let grid = fixture_grid();
        for _ in 0..100 {
            let params = grid[rng.gen_range(0..grid.len())];
            let curve = fixture_curve(&params, 601).unwrap();
            let (t0, t1) = (curve.t_start(), curve.t_end());
            let span = t1 - t0;
            let t = t0 + span * rng.gen_range(0.25..0.75);
            let mut angles = vec![rng.gen_range(-1.4..1.4)];
            for _ in 0..params.n - 3 {
                angles.push(rng.gen_range(0.1..6.0));
            }
            let forms = match numeric_forms(&curve, t, &angles, 1e-3) {
                Ok(f) => f,
                Err(VerifyError::RankDeficiency { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            let dim = params.n - 1;
            for i in 0..dim {
                for j in 0..dim {
                    if i != j {
                        assert!(
                            forms.first[(i, j)].abs() < 1e-6,
                            "I off-diagonal {} at {:?}",
                            forms.first[(i, j)],
                            (params.n, params.k, params.c_k)
                        );
                        assert!(
                            forms.second[(i, j)].abs() < 1e-6,
                            "II off-diagonal {} at {:?}",
                            forms.second[(i, j)],
                            (params.n, params.k, params.c_k)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn shape_operator_matches_closed_forms() {
        let p = CurveParams::new(5, 1.0, 0.5);
        let curve = fixture_curve(&p, 801).unwrap();
        let t = 0.31 * curve.t_end();
        let h = 1e-3;
        let forms = numeric_forms(&curve, t, &[0.5, 1.0, 2.0], h).unwrap();
        let (principal, gauss) = numeric_curvatures(&forms).unwrap();
        // exact state from the first integral rather than interpolation
        let s = crate::curvature::state_from_radius(
            curve.phi_at(t),
            &p,
            crate::curvature::Orientation::Negative,
            t,
        )
        .unwrap();
        let (k1, krest) = crate::curvature::principal_curvatures(&s, 5).unwrap();
        let budget = 100.0 * h * h;
        let mut expected = vec![k1, krest, krest, krest];
        expected.sort_by(f64::total_cmp);
        for (a, b) in principal.iter().zip(&expected) {
            assert!((a - b).abs() < budget, "eigenvalue {a} vs {b}");
        }
        assert!((gauss - gauss_curvature(&s, 5).unwrap()).abs() < budget.max(1e-4));
    }

    #[test]
    fn determinant_identity() {
        let curve = fixture_curve(&CurveParams::new(4, -1.0, -2.0), 801).unwrap();
        let t = curve.t_start() + 0.37 * (curve.t_end() - curve.t_start());
        let forms = numeric_forms(&curve, t, &[0.4, 1.1], 1e-3).unwrap();
        let (_, gauss) = numeric_curvatures(&forms).unwrap();
        let n = 4;
        let det_ratio = (-1.0f64).powi(n as i32 - 1)
            * forms.second.clone().determinant()
            / forms.first.clone().determinant();
        assert!(
            (gauss - det_ratio).abs() < 1e-10 * gauss.abs().max(1.0),
            "gauss {gauss} vs det ratio {det_ratio}"
        );
    }

    #[test]
    fn pq_jet_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pq = PqParams::new(3, 2).unwrap();
        for _ in 0..20 {
            let angle: f64 = rng.gen_range(0.2..1.3);
            let jet = ProfileJet {
                phi: rng.gen_range(0.5..2.0),
                psi: rng.gen_range(0.5..2.0),
                dphi: angle.cos(),
                dpsi: angle.sin(),
                ddphi: rng.gen_range(-1.0..1.0),
            };
            let angles = [
                rng.gen_range(-0.9..0.9),
                rng.gen_range(0.3..5.0),
                rng.gen_range(0.3..5.0),
            ];
            let forms =
                numeric_forms_jet(&jet, Embedding::DoublyRotational { pq }, &angles, 1e-3)
                    .unwrap();
            let (_, gauss) = numeric_curvatures(&forms).unwrap();
            let closed =
                pq_gauss_curvature(jet.phi, jet.psi, jet.dphi, jet.dpsi, jet.ddphi, &pq).unwrap();
            assert!(
                (gauss - closed).abs() < 1e-4 * closed.abs().max(1.0),
                "numeric {gauss} vs closed {closed}"
            );
        }
    }

    #[test]
    fn comparison_same_curvature_is_zero() {
        let heights: Vec<f64> = (1..=10).map(|i| 0.01 * i as f64).collect();
        let report = check_comparison(1.0, 1.0, 0.8, 3, &heights).unwrap();
        for (_, d) in &report.differences {
            assert!(d.abs() < 1e-9);
        }
        assert!(report.pass);
    }

    #[test]
    fn comparison_positive_curvature() {
        let heights: Vec<f64> = (1..=20).map(|i| 0.006 * i as f64).collect();
        let report = check_comparison(2.0, 1.0, 0.8, 3, &heights).unwrap();
        assert!(report.pass, "max diff {}", report.max_difference);
        assert!(report.max_difference <= 1e-8);
    }

    #[test]
    fn comparison_negative_curvature() {
        let heights: Vec<f64> = (1..=20).map(|i| 0.01 * i as f64).collect();
        let report = check_comparison(-1.0, -2.0, 1.2, 4, &heights).unwrap();
        assert!(report.pass, "max diff {}", report.max_difference);
    }

    #[test]
    fn comparison_rejects_heights_out_of_range() {
        assert!(matches!(
            check_comparison(2.0, 1.0, 0.8, 3, &[10.0]),
            Err(VerifyError::HeightOutOfRange { .. })
        ));
    }
}
