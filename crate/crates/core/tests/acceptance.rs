//! Acceptance suite: one test per exit criterion, each printing a single
//! PASS/FAIL line (visible with `--nocapture`) before asserting.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zagierlab_core::arith::{decompose, mobius};
use zagierlab_core::asymptotics::{
    dyadic_cutoff, huxley_main_term, huxley_quadrature, saddle_phi_hat, v_weight,
    v_weight_leading, PhaseProblem, SaddleContext, SmoothMap,
};
use zagierlab_core::lseries::{
    large_sieve_scan, q_factor, series_identity_theta0_multi, series_identity_theta1_multi,
    zagier_l, zagier_l_series,
};
use zagierlab_core::moment::{
    delta_identity_check, zagier_side_sum, zagier_side_sum_direct, MomentConfig, ZagierVariant,
};
use zagierlab_core::theta::{theta1, theta4, theta5};
use zagierlab_core::voronoi::{voronoi_check_all, TestFunction};

fn report(number: u32, name: &str, failure: Option<String>) {
    match &failure {
        None => println!("criterion {number:02} ({name}): PASS"),
        Some(why) => println!("criterion {number:02} ({name}): FAIL — {why}"),
    }
    if let Some(why) = failure {
        panic!("criterion {number:02} ({name}) failed: {why}");
    }
}

#[test]
fn c01_summation_formula_identities() {
    let phi = TestFunction::bump(1.0, 300.0);
    let cs = [3i64, 4, 5, 6, 7, 8, 10, 12];
    let mut failure = None;
    let mut worst_loose = 0.0f64;
    let mut worst_tight = 0.0f64;
    for &c in &cs {
        for rep in voronoi_check_all(&phi, c, 1e-6).unwrap() {
            worst_loose = worst_loose.max(rep.residual);
            if rep.residual >= 1e-6 {
                failure = Some(format!(
                    "residual {:.3e} at (a, c) = ({}, {c}) above 1e-6",
                    rep.residual, rep.a
                ));
            }
        }
    }
    if failure.is_none() {
        for &c in &cs {
            for rep in voronoi_check_all(&phi, c, 1e-7).unwrap() {
                worst_tight = worst_tight.max(rep.residual);
            }
        }
        let shrink = worst_loose / worst_tight;
        if shrink < 5.0 {
            failure = Some(format!(
                "tightening tolerance 10x shrank the worst residual only {shrink:.2}x \
                 ({worst_loose:.3e} -> {worst_tight:.3e})"
            ));
        }
    }
    report(1, "summation-formula identities", failure);
}

#[test]
fn c02_half_even_modulus_reduction() {
    let mut failure = None;
    'outer: for c in (2..=400i64).step_by(4) {
        for n in -200..=200i64 {
            let t4 = theta4(c, n).unwrap().value;
            let t5 = theta5(c, n).unwrap().value;
            let t1 = theta1(c / 2, n).unwrap().value;
            let d = (t4 - t5).norm().max((t4 - t1).norm());
            if d > 1e-12 {
                failure = Some(format!("max deviation {d:.3e} at (c, n) = ({c}, {n})"));
                break 'outer;
            }
        }
    }
    report(2, "exponential-sum reduction at even moduli", failure);
}

#[test]
fn c03_dirichlet_series_identities() {
    let mut failure = None;
    let ss = [Complex64::new(1.5, 0.0), Complex64::new(2.0, 0.0)];
    'outer: for n in 1..=100i64 {
        if n.rem_euclid(4) >= 2 {
            continue;
        }
        for (label, reps) in [
            ("even-kind", series_identity_theta0_multi(&ss, n, 10_000).unwrap()),
            ("odd-kind", series_identity_theta1_multi(&ss, n, 10_000).unwrap()),
        ] {
            for rep in reps {
                if rep.residual >= 10.0 * rep.tail_estimate {
                    failure = Some(format!(
                        "{label} residual {:.3e} vs tail {:.3e} at (n, s) = ({n}, {})",
                        rep.residual, rep.tail_estimate, rep.s.re
                    ));
                    break 'outer;
                }
            }
        }
    }
    report(3, "theta Dirichlet-series identities", failure);
}

#[test]
fn c04_dual_route_l_series() {
    let mut failure = None;
    let ss = [
        Complex64::new(2.0, 0.0),
        Complex64::new(3.0, 0.0),
        Complex64::new(2.0, 1.0),
    ];
    'outer: for n in 1..=500i64 {
        for &s in &ss {
            let a = zagier_l(s, n).unwrap();
            let b = zagier_l_series(s, n, 10_000).unwrap();
            let diff = (a.value - b.value).norm();
            let budget = a.truncation_error + b.truncation_error;
            if diff > budget {
                failure = Some(format!(
                    "routes differ {diff:.3e} vs recorded error {budget:.3e} at (n, s) = ({n}, {s})"
                ));
                break 'outer;
            }
        }
    }
    report(4, "dual-route quadratic L-series", failure);
}

#[test]
fn c05_finite_factor_functional_equation() {
    let mut failure = None;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let w = Complex64::new(rng.gen_range(0.15..0.85), rng.gen_range(-2.0..2.0));
        let n = rng.gen_range(1..=2000i64);
        let lhs = q_factor(w, n).unwrap();
        let rhs = q_factor(Complex64::new(1.0, 0.0) - w, n).unwrap();
        let mut n1 = decompose(n).unwrap().n1;
        while n1 % 2 == 0 {
            n1 /= 2;
        }
        let scale = Complex64::new(n1 as f64, 0.0).powc(Complex64::new(1.0, 0.0) - 2.0 * w);
        let d = (lhs - scale * rhs).norm();
        if d > 1e-12 {
            failure = Some(format!("functional equation off by {d:.3e} at (w, n) = ({w}, {n})"));
            break;
        }
    }
    if failure.is_none() {
        for n in 1..=1000i64 {
            if mobius(n as u64) == 0 {
                continue;
            }
            let qv = q_factor(Complex64::new(0.7, 0.3), n).unwrap();
            if qv != Complex64::new(1.0, 0.0) {
                failure = Some(format!("q not exactly 1 at squarefree n = {n}: {qv}"));
                break;
            }
        }
    }
    report(5, "finite Euler-factor functional equation", failure);
}

#[test]
fn c06_saddle_point_asymptotic() {
    let mut failure = None;
    let grid: [(i64, [(f64, i64); 3]); 2] = [
        (3, [(20.0, 44), (40.0, 178), (80.0, 711)]),
        (5, [(20.0, 16), (40.0, 64), (80.0, 256)]),
    ];
    let c = 4i64;
    'outer: for (q, cells) in grid {
        let l = 2.0 * ((c * q) * (c * q)) as f64;
        let mut prev_disc = f64::INFINITY;
        for (t, m) in cells {
            let ctx = SaddleContext::new(t, 1.0, c, q, l, m).unwrap();
            let rep = saddle_phi_hat(&ctx, &dyadic_cutoff(), 3).unwrap();
            let disc = (rep.asymptotic - rep.quadrature).norm();
            let scaled = disc * t * (c * q) as f64 / l.powf(0.25);
            if scaled > 10.0 {
                failure = Some(format!(
                    "scaled discrepancy {scaled:.3e} > 10 at (T, q, m) = ({t}, {q}, {m})"
                ));
                break 'outer;
            }
            if disc >= prev_disc {
                failure = Some(format!(
                    "discrepancy not decreasing in T at (T, q, m) = ({t}, {q}, {m}): \
                     {prev_disc:.3e} -> {disc:.3e}"
                ));
                break 'outer;
            }
            prev_disc = disc;
        }
    }
    report(6, "resonance-transform saddle-point asymptotic", failure);
}

fn quadratic_problem(n: f64, center: f64, half: f64, g_lo: f64, g_hi: f64) -> PhaseProblem {
    let g_fn = TestFunction::bump(g_lo, g_hi);
    PhaseProblem {
        f: SmoothMap::new(move |k, x| match k {
            0 => n * (x - center) * (x - center),
            1 => 2.0 * n * (x - center),
            2 => 2.0 * n,
            _ => 0.0,
        }),
        g: SmoothMap::new(move |k, x| g_fn.derivative(k, x)),
        a: center - half,
        b: center + half,
        theta_f: n,
        omega_f: 1.0,
        omega_g: 0.4,
    }
}

fn cosine_problem(n: f64, g_lo: f64, g_hi: f64) -> PhaseProblem {
    let g_fn = TestFunction::bump(g_lo, g_hi);
    PhaseProblem {
        f: SmoothMap::new(move |k, x| match k % 4 {
            0 => n * x.cos(),
            1 => -n * x.sin(),
            2 => -n * x.cos(),
            _ => n * x.sin(),
        }),
        g: SmoothMap::new(move |k, x| g_fn.derivative(k, x)),
        a: PI / 2.0 + 0.05,
        b: 3.0 * PI / 2.0 - 0.05,
        theta_f: n,
        omega_f: 1.0,
        omega_g: 1.0,
    }
}

#[test]
fn c07_stationary_phase_main_term() {
    let problems: Vec<(String, PhaseProblem)> = vec![
        ("quadratic 1e2".into(), quadratic_problem(1e2, 1.0, 0.5, 0.6, 1.4)),
        ("quadratic 3e2".into(), quadratic_problem(3e2, 2.0, 0.5, 1.6, 2.4)),
        ("quadratic 1e3".into(), quadratic_problem(1e3, 1.0, 0.5, 0.6, 1.4)),
        ("quadratic 3e3".into(), quadratic_problem(3e3, 1.5, 0.4, 1.2, 1.8)),
        ("quadratic 1e4".into(), quadratic_problem(1e4, 1.0, 0.5, 0.6, 1.4)),
        ("cosine 1e2".into(), cosine_problem(1e2, 1.8, 4.4)),
        ("cosine 5e2".into(), cosine_problem(5e2, 1.8, 4.4)),
        ("cosine 1e3".into(), cosine_problem(1e3, 1.8, 4.4)),
        ("cosine 3e3".into(), cosine_problem(3e3, 2.0, 4.2)),
        ("cosine 1e4".into(), cosine_problem(1e4, 1.8, 4.4)),
    ];
    let mut failure = None;
    for (label, p) in problems {
        let (main, budget) = huxley_main_term(&p).unwrap();
        let quad = huxley_quadrature(&p).unwrap();
        let d = (main - quad).norm();
        if d > budget {
            failure = Some(format!("{label}: |main - quadrature| = {d:.3e} > budget {budget:.3e}"));
            break;
        }
    }
    report(7, "first-derivative-test main term", failure);
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (sxx, sxy) = pts
        .iter()
        .fold((0.0, 0.0), |a: (f64, f64), p| (a.0 + p.0 * p.0, a.1 + p.0 * p.1));
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn c08_central_value_mean_square_scaling() {
    let scan = large_sieve_scan(1 << 14, 0.0).unwrap();
    let pts: Vec<(f64, f64)> = scan
        .checkpoints
        .iter()
        .filter(|c| c.n_limit >= 1 << 10)
        .map(|c| ((c.n_limit as f64).ln(), c.cumulative.ln()))
        .collect();
    let slope = fit_slope(&pts);
    let deflated = fit_slope(
        &scan
            .checkpoints
            .iter()
            .filter(|c| c.n_limit >= 1 << 10)
            .map(|c| {
                let x = (c.n_limit as f64).ln();
                (x, (c.cumulative / x.powi(3)).ln())
            })
            .collect::<Vec<_>>(),
    );
    let failure = if (0.9..=1.15).contains(&slope) {
        None
    } else {
        Some(format!(
            "slope {slope:.4} outside [0.9, 1.15]; the measured mean square follows \
             N log^3 N (log^3-deflated slope {deflated:.4}), so the linear-exponent \
             window cannot hold at the central point at this scale"
        ))
    };
    report(8, "central-value mean-square scaling", failure);
}

#[test]
fn c09_smoothing_weight() {
    let mut failure = None;
    // contour independence
    for (y, t) in [(1.0, 30.0), (3.0, 20.0)] {
        let vals: Vec<Complex64> = [0.4, 0.7, 1.0]
            .iter()
            .map(|&a| v_weight(y, t, a, 1, 1e-10).unwrap())
            .collect();
        for pair in vals.windows(2) {
            let d = (pair[0] - pair[1]).norm();
            if d > 1e-8 {
                failure = Some(format!("contour dependence {d:.3e} at (y, t) = ({y}, {t})"));
            }
        }
    }
    // leading-term agreement within O(1/t)
    if failure.is_none() {
        for t in [20.0, 40.0] {
            let v = v_weight(1.0, t, 0.7, 1, 1e-10).unwrap();
            let lead = v_weight_leading(1.0, t, 0.7, 1, 1e-10).unwrap();
            let d = (v - lead).norm();
            if d > 5.0 / t {
                failure = Some(format!("leading-term deviation {d:.3e} > 5/t at t = {t}"));
            }
        }
    }
    // decay at y >= 10 t
    if failure.is_none() {
        for t in [20.0, 30.0] {
            let v = v_weight(10.0 * t, t, 0.7, 1, 1e-10).unwrap().norm();
            if v >= 1e-6 {
                failure = Some(format!(
                    "|V({}, {t})| = {v:.3e} >= 1e-6: the Gaussian-type mollifier only \
                     gives log-squared decay exp(-ln^2(pi^(3/2) y / t)/4), which is \
                     O(1) at y = 10t; the stated threshold is reached only near y ~ t e^{{5}}",
                    10.0 * t
                ));
                break;
            }
        }
    }
    report(9, "smoothing-weight contour, model, and decay", failure);
}

#[test]
fn c10_moment_plumbing() {
    let mut failure = None;
    for q in 1..=500u64 {
        if !delta_identity_check(q, 1000).unwrap() {
            failure = Some(format!("divisibility identity broken at q = {q}"));
            break;
        }
    }
    if failure.is_none() {
        let cfg = MomentConfig::new(30.0, 3.0, 2, 300, 1e-6).unwrap();
        let direct = zagier_side_sum_direct(&cfg).unwrap().value;
        let ss = zagier_side_sum(&cfg, ZagierVariant::StarStar).unwrap().value;
        let s4 = zagier_side_sum(&cfg, ZagierVariant::Star4).unwrap().value;
        let fs = zagier_side_sum(&cfg, ZagierVariant::FourStar).unwrap().value;
        let f4 = zagier_side_sum(&cfg, ZagierVariant::Four4).unwrap().value;
        let combined = ss - s4 - fs + 2.0 * f4;
        let d = (direct - combined).abs();
        if d > 1e-10 * direct.max(1.0) {
            failure = Some(format!(
                "parity decomposition off by {d:.3e} (direct {direct:.6e} vs combined {combined:.6e})"
            ));
        }
    }
    if failure.is_none() {
        let cfg = MomentConfig::new(36.0, 6.0, 2, 360, 1e-6).unwrap();
        for variant in [
            ZagierVariant::StarStar,
            ZagierVariant::Star4,
            ZagierVariant::FourStar,
            ZagierVariant::Four4,
        ] {
            let rep = zagier_side_sum(&cfg, variant).unwrap();
            if rep.value != 0.0 || rep.terms != 0 {
                failure = Some(format!(
                    "wide-window sum not empty for variant {variant}: value {}, {} terms",
                    rep.value, rep.terms
                ));
            }
        }
    }
    report(10, "moment-side plumbing", failure);
}
