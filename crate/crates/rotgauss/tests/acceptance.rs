//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them all).
//!
//! Every expected number here is either a closed form checked in the test
//! itself or comes from an oracle that is independent of the code path it
//! checks: direct fourth-order integration of the curvature ODE against the
//! band-inversion solver, composite Simpson on closed-form profiles against
//! the band quadrature, and finite-difference fundamental forms against the
//! curvature algebra.

use rotgauss::curvature::{CurveParams, CurveState, Orientation};
use rotgauss::measures::{axis_tail, enclosed_volume, surface_area, Convention};
use rotgauss::quadrature::{period_data, QuadratureConfig};
use rotgauss::solver::bump::{bump_shooting, BumpSpec, Ramp};
use rotgauss::solver::riccati::{riccati_closed_form, RiccatiCase};
use rotgauss::solver::{
    asymptotic_anchor_shift, asymptotic_coefficients, asymptotic_pseudosphere, solve_constant_k,
    solve_prescribed_k, taylor_extremum, Extent, GeneratingCurve, PrescribedOptions, Sampling,
    SolveError,
};
use rotgauss::verify::{check_comparison, fixture_curve, fixture_grid, numeric_curvatures, numeric_forms};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn criterion(name: &str, pass: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Axis-asymptotic profile in dimension 4: the paper-convention measures
/// against the quoted reference values 1.82 and 19.74, within 2%, with the
/// truncation tail bounded by 1e-4 and the whole computation under 10 s.
///
/// The area target is met exactly (the factor-2 arclength area is
/// 2 pi^2 = 19.7392). The volume target is NOT met: the quoted 1.82 does
/// not correspond to any combination of {1, 2} x {arclength, height}
/// measures of this profile, whose values are printed below. The assertion
/// is kept at the stated tolerance and fails honestly.
#[test]
fn a1_pseudosphere_figures() {
    let start = Instant::now();
    let params = CurveParams::new(4, -1.0, -1.0);
    let curve = solve_constant_k(
        &params,
        Sampling::Count(2001),
        Extent::TRange { t_min: -160.0, t_max: 0.0 },
    )
    .unwrap();
    let s_paper = surface_area(&curve, 4, Convention::Paper).unwrap();
    let v_paper = enclosed_volume(&curve, 4, Convention::Paper).unwrap();
    let s_geo = surface_area(&curve, 4, Convention::Geometric).unwrap();
    let v_geo = enclosed_volume(&curve, 4, Convention::Geometric).unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    println!("    measure table (one horn):");
    println!("      2 * int S3 dt   = {:.6}  (reference 19.74, 2 pi^2 = {:.6})", s_paper.value, 2.0 * PI * PI);
    println!("      2 * int V3 dt   = {:.6}  (reference 1.82)", v_paper.value);
    println!("      1 * int S3 dt   = {:.6}", s_geo.value);
    println!("      1 * int V3 dpsi = {:.6}   2x = {:.6}", v_geo.value, 2.0 * v_geo.value);
    println!("      1 * int V3 dt   = {:.6}", 0.5 * v_paper.value);

    let s_ok = (s_paper.value - 19.74).abs() / 19.74 <= 0.02;
    let v_ok = (v_paper.value - 1.82).abs() / 1.82 <= 0.02;
    let tails_ok = s_paper.truncation_tail_bound < 1e-4 && v_paper.truncation_tail_bound < 1e-4;
    let time_ok = elapsed < 10.0;
    criterion(
        "pseudosphere figures",
        s_ok && v_ok && tails_ok && time_ok,
        &format!(
            "S = {:.4} (target 19.74 +-2%: {}), V = {:.4} (target 1.82 +-2%: {}), \
             tail bounds ({:.2e}, {:.2e}) < 1e-4: {}, runtime {:.2} s < 10 s: {}",
            s_paper.value,
            if s_ok { "ok" } else { "off" },
            v_paper.value,
            if v_ok { "ok" } else { "off" },
            s_paper.truncation_tail_bound,
            v_paper.truncation_tail_bound,
            if tails_ok { "ok" } else { "off" },
            elapsed,
            if time_ok { "ok" } else { "off" },
        ),
    );
}

/// Spheres: for zero first-integral constant the profile is the cosine arc
/// of radius K^(-1/(n-1)) and the period is pi times that radius.
#[test]
fn a2_sphere_closed_form() {
    let mut worst_phi = 0.0_f64;
    let mut worst_period = 0.0_f64;
    for n in [3usize, 4, 5, 7] {
        for k in [0.5, 1.0, 2.0] {
            let params = CurveParams::new(n, k, 0.0);
            let r = k.powf(-1.0 / (n as f64 - 1.0));
            let curve =
                solve_constant_k(&params, Sampling::Count(1201), Extent::Periods(1.0)).unwrap();
            for s in &curve.samples {
                worst_phi = worst_phi.max((s.phi - r * (s.t / r).cos()).abs());
            }
            let data = period_data(&params, &QuadratureConfig::default()).unwrap();
            worst_period = worst_period.max((data.full_period - PI * r).abs());
        }
    }
    criterion(
        "sphere closed form",
        worst_phi < 1e-8 && worst_period < 1e-9,
        &format!("sup |phi - R cos(t/R)| = {worst_phi:.3e} (< 1e-8), sup |T - pi R| = {worst_period:.3e} (< 1e-9)"),
    );
}

/// Tractroid: exponential profile, and the doubled geometric measures
/// reproduce the classical area 4 pi and volume 2 pi / 3 within 1e-5,
/// cross-checked against Simpson oracles on the closed-form profile.
#[test]
fn a3_tractroid_classics() {
    let params = CurveParams::new(3, -1.0, -1.0);
    let curve = solve_constant_k(
        &params,
        Sampling::Count(2001),
        Extent::TRange { t_min: -14.0, t_max: 0.0 },
    )
    .unwrap();
    let mut sup = 0.0_f64;
    for s in &curve.samples {
        sup = sup.max((s.phi - s.t.exp()).abs());
    }

    // Independent Simpson oracles on the closed form phi = e^t:
    // arclength area 2 pi int phi dt and disk stacking pi int phi^2 psi' dt.
    let m = 200_000usize;
    let (t0, t1) = (-14.0, 0.0);
    let h = (t1 - t0) / m as f64;
    let (mut area_o, mut vol_o) = (0.0, 0.0);
    let f_area = |t: f64| t.exp();
    let f_vol = |t: f64| {
        let p = t.exp();
        p * p * (1.0 - p * p).max(0.0).sqrt()
    };
    for i in 0..=m {
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let t = t0 + i as f64 * h;
        area_o += w * f_area(t);
        vol_o += w * f_vol(t);
    }
    area_o *= 2.0 * PI * h / 3.0;
    vol_o *= PI * h / 3.0;

    let area = 2.0 * surface_area(&curve, 3, Convention::Geometric).unwrap().value;
    let vol = 2.0 * enclosed_volume(&curve, 3, Convention::Geometric).unwrap().value;
    let ra = (area - 4.0 * PI).abs() / (4.0 * PI);
    let rv = (vol - 2.0 * PI / 3.0).abs() / (2.0 * PI / 3.0);
    let oa = (area - 2.0 * area_o).abs() / area;
    let ov = (vol - 2.0 * vol_o).abs() / vol;
    criterion(
        "tractroid classics",
        sup < 1e-8 && ra < 1e-5 && rv < 1e-5 && oa < 1e-5 && ov < 1e-5,
        &format!(
            "sup |phi - e^t| = {sup:.3e}; area rel err {ra:.3e}, volume rel err {rv:.3e} \
             (vs oracle: {oa:.3e}, {ov:.3e})"
        ),
    );
}

/// Band inversion against direct fourth-order integration of the profile
/// ODE, seeded from a shared interior state, over the twelve-parameter grid.
#[test]
fn a4_oracle_equivalence() {
    let mut worst = 0.0_f64;
    for params in fixture_grid() {
        let curve = fixture_curve(&params, 1201).unwrap();
        let seed_idx = (curve.samples.len() as f64 * 0.42) as usize;
        let seed = curve.samples[seed_idx];
        // window: stay clear of rims where the ODE degenerates
        let ok = |s: &CurveState| s.dphi.abs() <= 0.9;
        let mut t_lo = seed.t;
        let mut t_hi = seed.t;
        for s in curve.samples[..seed_idx].iter().rev() {
            if !ok(s) {
                break;
            }
            t_lo = s.t;
        }
        for s in &curve.samples[seed_idx..] {
            if !ok(s) {
                break;
            }
            t_hi = s.t;
        }
        for target in [t_lo, t_hi] {
            if (target - seed.t).abs() < 1e-9 {
                continue;
            }
            let rk = solve_prescribed_k(
                params.n,
                |_| params.k,
                &seed,
                5e-4,
                target,
                &PrescribedOptions::default(),
            )
            .unwrap();
            for s in rk.samples.iter().step_by(7) {
                worst = worst.max((s.phi - curve.phi_at(s.t)).abs());
            }
        }
    }
    criterion(
        "oracle equivalence",
        worst < 1e-6,
        &format!("sup |phi_rk4 - phi_band| = {worst:.3e} over 12 fixtures (< 1e-6)"),
    );
}

/// Finite-difference fundamental forms: Gauss curvature within
/// max(1e-4, 100 h^2) of the target K at 50 random interior points per
/// fixture, both forms numerically diagonal, and the differencing scheme
/// converging at order >= 1.8.
#[test]
fn a5_fundamental_form_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = 1e-3;
    let budget = (100.0 * h * h).max(1e-4);
    let mut worst_gauss = 0.0_f64;
    let mut worst_offdiag = 0.0_f64;
    for params in fixture_grid() {
        let curve = fixture_curve(&params, 2001).unwrap();
        let (t0, t1) = (curve.t_start(), curve.t_end());
        let mut accepted = 0;
        while accepted < 50 {
            let t = t0 + (t1 - t0) * rng.gen_range(0.2..0.8);
            let mut angles = vec![rng.gen_range(-1.4..1.4)];
            for _ in 0..params.n - 3 {
                angles.push(rng.gen_range(0.1..6.0));
            }
            let forms = match numeric_forms(&curve, t, &angles, h) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let (_, gauss) = numeric_curvatures(&forms).unwrap();
            worst_gauss = worst_gauss.max((gauss - params.k).abs());
            for i in 0..params.n - 1 {
                for j in 0..params.n - 1 {
                    if i != j {
                        worst_offdiag = worst_offdiag
                            .max(forms.first[(i, j)].abs())
                            .max(forms.second[(i, j)].abs());
                    }
                }
            }
            accepted += 1;
        }
    }

    // convergence order of the differenced Gauss curvature on an h-ladder
    let mut orders = Vec::new();
    for params in [CurveParams::new(4, 1.0, 0.5), CurveParams::new(4, -1.0, -2.0)] {
        let curve = fixture_curve(&params, 4001).unwrap();
        let t = curve.t_start() + 0.37 * (curve.t_end() - curve.t_start());
        let mut pts = Vec::new();
        for hh in [1e-2, 5e-3, 2.5e-3] {
            let forms = numeric_forms(&curve, t, &vec![0.5; params.n - 2], hh).unwrap();
            let (_, gauss) = numeric_curvatures(&forms).unwrap();
            pts.push((hh_ln(hh), ((gauss - params.k).abs()).ln()));
        }
        orders.push(fit_slope(&pts));
    }
    fn hh_ln(h: f64) -> f64 {
        h.ln()
    }
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    criterion(
        "fundamental-form oracle",
        worst_gauss < budget && worst_offdiag < 1e-6 && min_order >= 1.8,
        &format!(
            "max |gauss - K| = {worst_gauss:.3e} (< {budget:.1e}), \
             max off-diagonal = {worst_offdiag:.3e} (< 1e-6), \
             convergence orders {orders:?} (>= 1.8)"
        ),
    );
}

/// Local series at extrema and the asymptotic form of the axis-asymptotic
/// profile, including the decay orders of the partial measure tails.
#[test]
fn a6_series_and_asymptotics() {
    // Taylor remainder order on a dyadic ladder
    let mut min_order = f64::INFINITY;
    for params in [
        CurveParams::new(3, 1.0, 0.0),
        CurveParams::new(4, 1.0, 0.5),
        CurveParams::new(5, -1.0, -2.0),
    ] {
        let curve = fixture_curve(&params, 4001).unwrap();
        let mut prev: Option<f64> = None;
        for dt in [0.4, 0.2, 0.1, 0.05] {
            let err = (curve.phi_at(dt) - taylor_extremum(&params, dt).unwrap()).abs();
            if let Some(p) = prev {
                min_order = min_order.min((p / err).log2());
            }
            prev = Some(err);
        }
    }

    // asymptotic radius at depth, after calibrating the time translation
    let params4 = CurveParams::new(4, -1.0, -1.0);
    let deep = solve_constant_k(
        &params4,
        Sampling::Count(2001),
        Extent::TRange { t_min: -60.0, t_max: 0.0 },
    )
    .unwrap();
    let (f4, _) = asymptotic_coefficients(4, -1.0);
    let shift = asymptotic_anchor_shift(&deep, 4, -1.0);
    let mut worst_rel = 0.0_f64;
    for s in deep.samples.iter().filter(|s| s.t <= -50.0) {
        let model = asymptotic_pseudosphere(s.t - shift, 4, -1.0).unwrap();
        worst_rel = worst_rel.max((model - s.phi).abs() / s.phi);
    }

    // decay orders of the partial measure tails for n = 4, 5
    let mut ord_errs = Vec::new();
    for n in [4usize, 5] {
        let params = CurveParams::new(n, -1.0, -1.0);
        let curve = solve_constant_k(
            &params,
            Sampling::Count(2001),
            Extent::TRange { t_min: -120.0, t_max: 0.0 },
        )
        .unwrap();
        let shift = asymptotic_anchor_shift(&curve, n, -1.0);
        for volume in [false, true] {
            let expect = if volume {
                (n as f64 + 1.0) / (3.0 - n as f64)
            } else {
                (n as f64 - 1.0) / (3.0 - n as f64)
            };
            let mut pts = Vec::new();
            for t in [-20.0, -35.0, -60.0, -100.0] {
                let tail =
                    axis_tail(&params, curve.phi_at(t), n, volume, Convention::Paper).unwrap();
                pts.push(((shift - t).ln(), tail.ln()));
            }
            let slope = fit_slope(&pts);
            ord_errs.push((n, volume, slope, expect, (slope - expect).abs() / expect.abs()));
        }
    }
    let max_ord_err = ord_errs.iter().map(|e| e.4).fold(0.0, f64::max);
    for (n, volume, slope, expect, rel) in &ord_errs {
        println!(
            "    tail order n={n} {}: fitted {slope:.4}, expected {expect:.4} (rel {rel:.3e})",
            if *volume { "volume" } else { "area" }
        );
    }

    criterion(
        "series and asymptotics",
        min_order >= 5.5 && worst_rel < 0.05 && f4 == 6.0 && max_ord_err < 0.05,
        &format!(
            "taylor remainder order {min_order:.2} (>= 5.5), f(4) = {f4}, \
             asymptotic rel err {worst_rel:.3e} at t <= -50 (< 5%), \
             tail order max rel err {max_ord_err:.3e} (< 5%)"
        ),
    );
}

/// Fixed-height comparison: the profile of larger |K| stays weakly closer
/// to the axis, over both curvature-sign grids.
#[test]
fn a7_comparison_theorems() {
    let mut worst = f64::NEG_INFINITY;
    for n in [3usize, 4, 5] {
        for (a, b) in [(2.0, 1.0), (3.0, 1.0), (1.5, 1.2)] {
            let heights: Vec<f64> = (1..=20).map(|i| 0.004 * i as f64).collect();
            let report = check_comparison(a, b, 0.8, n, &heights).unwrap();
            worst = worst.max(report.max_difference);
            assert!(report.pass, "K>0 grid point ({a},{b}) n={n}");
        }
        for (a, b) in [(-1.0, -2.0), (-1.0, -3.0), (-1.2, -1.5)] {
            let heights: Vec<f64> = (1..=20).map(|i| 0.006 * i as f64).collect();
            let report = check_comparison(a, b, 1.2, n, &heights).unwrap();
            worst = worst.max(report.max_difference);
            assert!(report.pass, "K<0 grid point ({a},{b}) n={n}");
        }
    }
    criterion(
        "comparison theorems",
        worst <= 1e-8,
        &format!("max height-wise difference {worst:.3e} (<= 1e-8) over both grids"),
    );
}

/// Power-law closed forms: the corrected Euler solutions solve the
/// curvature relation to 1e-9 and track direct integration to 1e-6; the
/// simplified quoted forms' residuals are reported, not asserted.
#[test]
fn a8_riccati_closed_forms() {
    let cases = [
        RiccatiCase::new(-0.1875, 0.5).unwrap(),
        RiccatiCase::new(-0.25, -1.0).unwrap(),
        RiccatiCase::new(-2.0, -1.0).unwrap(),
    ];
    let mut worst_res = 0.0_f64;
    let mut paper_res_samples = Vec::new();
    for case in &cases {
        let mut evaluated = 0;
        for i in 0..100 {
            let t = 1.1 * (100.0_f64 / 1.1).powf(i as f64 / 99.0);
            match riccati_closed_form(case, t) {
                Ok(ev) => {
                    worst_res = worst_res.max(ev.residual_corrected.abs());
                    evaluated += 1;
                    if i % 33 == 0 {
                        paper_res_samples.push((case.case_id, t, ev.residual_paper));
                    }
                }
                Err(SolveError::DomainError { .. }) => continue,
                Err(e) => panic!("{e}"),
            }
        }
        assert!(evaluated >= 90, "case {} evaluated {evaluated}/100", case.case_id);
    }
    println!("    quoted-form residuals (reported, not asserted):");
    for (id, t, r) in &paper_res_samples {
        println!("      case {id} at t = {t:.3}: residual {r:.6e}");
    }

    // match against direct integration from shared initial data
    let mut worst_match = 0.0_f64;
    for case in &cases {
        let scale = 0.3; // keeps |phi'| < 1 so the profile stays arclength-legal
        let t_end = if case.case_id == 3 { 1.35 } else { 10.0 };
        let at = |t: f64| scale * riccati_closed_form(case, t).unwrap().phi_corrected;
        let d0 = {
            let h = 1e-6;
            (at(1.0 + h) - at(1.0 - h)) / (2.0 * h)
        };
        let init = CurveState {
            t: 1.0,
            phi: at(1.0),
            psi: 0.0,
            dphi: d0,
            dpsi: (1.0 - d0 * d0).sqrt(),
            ddphi: None,
        };
        let rk = solve_prescribed_k(
            3,
            |t| case.curvature(t),
            &init,
            2e-4,
            t_end,
            &PrescribedOptions::default(),
        )
        .unwrap();
        for s in rk.samples.iter().step_by(23) {
            let rel = (s.phi - at(s.t)).abs() / at(s.t).abs();
            worst_match = worst_match.max(rel);
        }
    }
    criterion(
        "riccati closed forms",
        worst_res < 1e-9 && worst_match < 1e-6,
        &format!(
            "max corrected residual {worst_res:.3e} (< 1e-9), \
             max rel deviation from direct integration {worst_match:.3e} (< 1e-6)"
        ),
    );
}

/// Bump experiment: the report exists over the eps grid and every positive
/// ramp drives the terminal slope strictly negative.
#[test]
fn a9_bump_experiment() {
    let spec = BumpSpec {
        n: 4,
        r0: 1.0,
        epsilon: 0.5,
        ramp: Ramp::ExpSmoothstep,
    };
    let grid: Vec<f64> = (1..=9).map(|i| 0.1 * i as f64).collect();
    let report = bump_shooting(&spec, &grid).unwrap();
    println!("    eps -> phi'(0):");
    for run in &report.runs {
        println!("      {:.1} -> {:+.6e}", run.epsilon, run.terminal_dphi);
    }
    println!(
        "    closest to flat junction: eps = {:.1}, |phi'(0)| = {:.3e}, feasible: {}",
        report.runs[report.best].epsilon,
        report.runs[report.best].terminal_dphi.abs(),
        report.feasible
    );
    let all_negative = report.runs.iter().all(|r| r.terminal_dphi < 0.0);
    criterion(
        "bump experiment",
        report.runs.len() == 9 && all_negative,
        &format!(
            "9 runs recorded, all terminal slopes strictly negative: {all_negative}, \
             feasibility: {}",
            report.feasible
        ),
    );
}

/// The frozen crossing time for the rim-to-extremum branch used as a
/// time-of-flight example: direct shooting from the rim reproduces the
/// band quadrature value (recorded before the quadrature was built).
#[test]
fn frozen_rim_crossing_oracle() {
    // n = 3, K = 1, C_K = 2: shoot phi'' = -phi from the rim state
    // (phi = sqrt(2), phi' = 1) until phi' = 0 and time the crossing.
    let frozen = 0.615_479_708_670_387_3;
    let mut t = 0.0;
    let mut y = [2.0_f64.sqrt(), 1.0];
    let h = 1e-6;
    let rhs = |y: &[f64; 2]| [y[1], -y[0]];
    while y[1] > 0.0 {
        let k1 = rhs(&y);
        let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
        let k2 = rhs(&y2);
        let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]];
        let k3 = rhs(&y3);
        let y4 = [y[0] + h * k3[0], y[1] + h * k3[1]];
        let k4 = rhs(&y4);
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        t += h;
    }
    assert!((t - frozen).abs() < 1e-5, "shooting time {t}");

    let params = CurveParams::new(3, 1.0, 2.0);
    let tof = rotgauss::quadrature::time_of_flight(
        2.0_f64.sqrt(),
        3.0_f64.sqrt(),
        &params,
        Orientation::Positive,
        &QuadratureConfig::default(),
    )
    .unwrap();
    assert!((tof - frozen).abs() < 1e-9, "quadrature time {tof}");
    println!("[PASS] frozen rim-crossing oracle: shooting {t:.8} vs quadrature {tof:.12}");
}

/// Curves produced by the direct integrator satisfy the conserved relation
/// to 1e-8 pointwise (step 1e-4).
#[test]
fn direct_integrator_preserves_first_integral() {
    let params = CurveParams::new(4, 1.0, 0.5);
    let curve = fixture_curve(&params, 801).unwrap();
    let seed = curve.samples[curve.samples.len() / 2];
    let rk = solve_prescribed_k(
        4,
        |_| 1.0,
        &seed,
        1e-4,
        seed.t + 0.4,
        &PrescribedOptions::default(),
    )
    .unwrap();
    let mut worst = 0.0_f64;
    for s in rk.samples.iter().step_by(97) {
        worst = worst.max(rotgauss::curvature::first_integral_residual(s, &params).abs());
    }
    assert!(worst < 1e-8, "residual {worst}");
    println!("[PASS] direct integrator first-integral residual {worst:.3e} (< 1e-8)");
}

fn _assert_send_sync<T: Send + Sync>() {}

/// Everything in the data model is freely shareable across threads.
#[test]
fn types_are_send_sync() {
    _assert_send_sync::<CurveParams>();
    _assert_send_sync::<CurveState>();
    _assert_send_sync::<GeneratingCurve>();
    _assert_send_sync::<QuadratureConfig>();
}
