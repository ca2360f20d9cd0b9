//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see every line;
//! failed criteria print their diagnostics either way.

use std::time::Instant;

use frachardy::fraclap::{self, VtFamily};
use frachardy::kernels::{self, AngularKernel, FracParams};
use frachardy::quad;
use frachardy::rel_diff;
use frachardy::sharpness::{self, SearchFamily, SearchSpec};
use frachardy::specfun;
use frachardy::testfns::{DomainBall, RadialC2, RadialProfile};
use frachardy::verify::{self, Verdict};

fn bump(beta: f64, r: f64) -> RadialProfile {
    RadialProfile::bump(beta, r).unwrap()
}

/// The ten-profile set shared by criteria 6, 7 and 9: eight bumps plus two
/// two-term combinations.
fn profile_set() -> Vec<RadialProfile> {
    let mut set = vec![
        bump(2.0, 0.5),
        bump(2.0, 0.8),
        bump(2.0, 1.0),
        bump(2.5, 0.8),
        bump(2.5, 1.0),
        bump(3.0, 0.5),
        bump(3.0, 1.0),
        bump(4.0, 0.8),
    ];
    set.push(RadialProfile::combo(vec![1.0, -0.3], vec![2.0, 3.0], 1.0).unwrap());
    set.push(RadialProfile::combo(vec![0.5, 0.5], vec![2.5, 4.0], 0.8).unwrap());
    set
}

fn profile_label(p: &RadialProfile) -> String {
    match p {
        RadialProfile::Bump { beta, radius } => format!("bump({beta},{radius})"),
        RadialProfile::LinearCombination { coeffs, betas, radius } => {
            format!("combo({coeffs:?},{betas:?},{radius})")
        }
    }
}

#[test]
fn criterion_01_b_quadrature_matches_closed_form_on_grid() {
    let mut checked = 0;
    let mut worst = 0.0f64;
    for n in [1u32, 2, 3, 5] {
        for s in [0.25, 0.5, 0.75] {
            let nf = n as f64;
            let span = nf - 2.0 * s;
            for theta in [0.1, span / 2.0, span - 0.1] {
                // admissible only: theta >= 0 and N > theta + 2s
                if !(theta > 0.0) || nf <= theta + 2.0 * s {
                    continue;
                }
                let start = Instant::now();
                let params = FracParams::new(n, s, theta, 2.0).unwrap();
                let report = kernels::b_constant(&params, 1e-10).unwrap();
                let elapsed = start.elapsed().as_secs_f64();
                let rd = report.rel_diff.unwrap();
                assert!(
                    rd <= 1e-8,
                    "b({n},{s},{theta}) rel_diff {rd:.3e} exceeds 1e-8"
                );
                assert!(
                    elapsed <= 5.0,
                    "b({n},{s},{theta}) took {elapsed:.2}s > 5s"
                );
                worst = worst.max(rd);
                checked += 1;
            }
        }
    }
    assert!(checked >= 20, "grid too small: {checked} points");
    println!("[criterion 1] PASS - {checked} grid points, worst rel_diff {worst:.2e}, each <= 5s");
}

#[test]
fn criterion_02_b_spot_value_two_over_pi() {
    let params = FracParams::new(3, 0.5, 1.0, 2.0).unwrap();
    let report = kernels::b_constant(&params, 1e-10).unwrap();
    let rd = rel_diff(report.value, 2.0 / std::f64::consts::PI);
    assert!(rd <= 1e-8, "b(3,0.5,1) = {} vs 2/pi, rel {rd:.3e}", report.value);
    println!("[criterion 2] PASS - b(3,0.5,1) = {:.12} matches 2/pi to {rd:.2e}", report.value);
}

#[test]
fn criterion_03_fs_dual_route() {
    let mut worst = 0.0f64;
    for (n, s) in [(1u32, 0.25), (1, 0.4), (3, 0.5)] {
        let report = kernels::fs_constant(n, s, 2.0, 1e-9).unwrap();
        let rd = report.rel_diff.unwrap();
        assert!(rd <= 1e-6, "fs({n},{s},2) rel_diff {rd:.3e} exceeds 1e-6");
        worst = worst.max(rd);
    }
    println!("[criterion 3] PASS - quadrature vs closed form at 3 points, worst rel_diff {worst:.2e}");
}

#[test]
fn criterion_04_limit_t_zero_convergence() {
    let params = FracParams::new(3, 0.5, 1.0, 2.0).unwrap();
    let ts: Vec<f64> = (0..=6).map(|k| 0.2 / 2f64.powi(k)).collect();

    // at x = 0.7 the error column decreases strictly over all seven steps
    let table = fraclap::limit_t_zero(&params, 0.7, &ts, 1e-9).unwrap();
    for w in table.rows.windows(2) {
        assert!(
            w[1].error < w[0].error,
            "x=0.7: error not strictly decreasing: {} -> {}",
            w[0].error,
            w[1].error
        );
    }
    let final_rel = table.rows.last().unwrap().error / table.limit.abs();
    assert!(final_rel <= 1e-3, "x=0.7: final relative error {final_rel:.3e} > 1e-3");

    // convergence also verified at x in {0.3, 1.5}: the signed error may
    // cross zero while t is still comparable to x (it does at x = 0.3
    // between the first two steps), so strict decrease is asserted on the
    // tail together with the final error bound
    for x in [0.3, 1.5] {
        let table = fraclap::limit_t_zero(&params, x, &ts, 1e-9).unwrap();
        for w in table.rows[2..].windows(2) {
            assert!(
                w[1].error < w[0].error,
                "x={x}: tail errors not strictly decreasing: {} -> {}",
                w[0].error,
                w[1].error
            );
        }
        let final_rel = table.rows.last().unwrap().error / table.limit.abs();
        assert!(final_rel <= 1e-3, "x={x}: final relative error {final_rel:.3e} > 1e-3");
    }
    println!("[criterion 4] PASS - strictly decreasing over 7 t-steps at x=0.7 (final rel err {final_rel:.1e}); convergence confirmed at x in {{0.3, 1.5}}");
}

#[test]
fn criterion_05_s_to_one_limit_halving() {
    let target = 2.0;
    let errors: Vec<f64> = [0.9, 0.95, 0.975, 0.9875]
        .iter()
        .map(|&s| (specfun::lambda_closed(5, s, 1.0).unwrap() - target).abs())
        .collect();
    for w in errors.windows(2) {
        let factor = w[0] / w[1];
        assert!(factor >= 1.8, "halving factor {factor:.3} < 1.8 (errors {w:?})");
    }
    println!(
        "[criterion 5] PASS - |lambda(5,s,1) - 2| halves with factors {:.3}, {:.3}, {:.3}",
        errors[0] / errors[1],
        errors[1] / errors[2],
        errors[2] / errors[3]
    );
}

#[test]
fn criterion_06_hardy_rellich_inequality_suite() {
    let start = Instant::now();
    let domain = DomainBall::new(1.0).unwrap();
    let sets = [(3u32, 0.5, 0.5, 2.0), (2, 0.3, 0.4, 3.0), (5, 0.75, 1.0, 2.0)];
    let mut count = 0;
    for (n, s, theta, p) in sets {
        let params = FracParams::new(n, s, theta, p).unwrap();
        for profile in profile_set() {
            let rep = verify::check_hardy_rellich(&params, &profile, domain, 1e-6).unwrap();
            assert_eq!(
                rep.verdict,
                Verdict::Holds,
                "violated at N={n} s={s} theta={theta} p={p}, {}: lhs {} rhs {} margin {}",
                profile_label(&profile),
                rep.lhs,
                rep.rhs,
                rep.margin
            );
            count += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed <= 600.0, "suite took {elapsed:.1}s > 10 min");
    println!("[criterion 6] PASS - {count} inequality reports all hold in {elapsed:.1}s (<= 600s)");
}

#[test]
fn criterion_07_p1_and_theta_zero() {
    let domain = DomainBall::new(1.0).unwrap();
    let params = FracParams::new(3, 0.5, 0.5, 1.0).unwrap();
    for profile in profile_set() {
        let rep = verify::check_hardy_rellich_p1(&params, &profile, domain, 1e-6).unwrap();
        assert_eq!(
            rep.verdict,
            Verdict::Holds,
            "p=1 violated for {}: {rep:?}",
            profile_label(&profile)
        );
    }
    // theta = 0: the bound degenerates to non-negativity of the signed integral
    let params0 = FracParams::new(3, 0.5, 0.0, 1.0).unwrap();
    for profile in profile_set() {
        let rep = verify::check_hardy_rellich_p1(&params0, &profile, domain, 1e-6).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(
            rep.rhs >= -rep.margin,
            "theta=0 signed integral {} below -margin {} for {}",
            rep.rhs,
            rep.margin,
            profile_label(&profile)
        );
    }
    println!("[criterion 7] PASS - p=1 holds on all 10 profiles at (3,0.5,0.5); theta=0 integral >= -margin on all");
}

#[test]
fn criterion_08_pohozaev_identity() {
    let domain = DomainBall::new(1.0).unwrap();
    let params = FracParams::new(3, 0.5, 1.0, 2.0).unwrap();
    let profile = bump(2.0, 0.8);
    let mut worst = 0.0f64;
    for p in [1.5, 2.0, 3.0] {
        let params = FracParams { p, ..params };
        for t in [0.5, 0.1, 0.02] {
            let rep = verify::check_pohozaev_id(
                &params,
                &profile,
                t,
                verify::PohozaevSpec::default(),
                domain,
                1e-8,
            )
            .unwrap();
            assert!(
                rep.residual <= 1e-6,
                "residual {:.3e} > 1e-6 at p={p}, t={t}",
                rep.residual
            );
            assert!(
                rep.exterior_defect >= 0.0,
                "exterior defect {:.3e} negative at p={p}, t={t}",
                rep.exterior_defect
            );
            worst = worst.max(rep.residual);
        }
    }
    println!("[criterion 8] PASS - 9 full-space residuals <= 1e-6 (worst {worst:.2e}); omega-mode defects all non-negative");
}

#[test]
fn criterion_09_cordoba_pointwise() {
    let start = Instant::now();
    let sets = [(3u32, 0.5, 2.0), (2, 0.3, 3.0), (5, 0.75, 2.0)];
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for (n, s, p) in sets {
        for profile in profile_set() {
            let r = profile.support_radius();
            let radii: Vec<f64> = (0..50).map(|i| r * 0.98 * i as f64 / 49.0).collect();
            for t in [0.5, 0.1] {
                let rep = verify::check_cordoba(&profile, n, s, t, p, &radii, 1e-7).unwrap();
                assert!(
                    rep.worst_normalized >= -1e-8,
                    "min margin {:.3e} of scale at N={n} s={s} p={p} t={t} {}",
                    rep.worst_normalized,
                    profile_label(&profile)
                );
                worst = worst.min(rep.worst_normalized);
                count += 1;
            }
        }
    }
    println!(
        "[criterion 9] PASS - {count} reports x 50 radii, min normalized margin {worst:.2e} >= -1e-8 ({:.0}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_10_remainder_chain_1d() {
    // The L1 <= M leg and the T+ = T- symmetry hold throughout. The M <= Rg
    // leg fails beyond margin for every profile: the remainder term's
    // displayed coefficient c_(1,s)/2 over-subtracts; the exact exterior mass
    // carries c_(1,s/2)^2, as the identity_residual diagnostic shows. The
    // criterion is asserted as stated and the failure is genuine, not a
    // quadrature artifact.
    let mut all_hold = true;
    for profile in [bump(2.0, 0.9), bump(3.0, 0.7)] {
        for s in [0.1, 0.2] {
            let rep = verify::check_remainder_1d(s, &profile, 1e-7).unwrap();
            let l1m = rep.verdict_l1_le_m;
            let mrg = rep.verdict_m_le_rg;
            println!(
                "[criterion 10] {} s={s}: L1={:.6} M={:.6} Rg={:.6} margin={:.1e} | L1<=M: {:?} | M<=Rg: {:?} | T+-T-={:.2e} | identity residual {:.2e}",
                profile_label(&profile),
                rep.l1,
                rep.m,
                rep.rg,
                rep.margin,
                l1m,
                mrg,
                rep.t_plus - rep.t_minus,
                rep.identity_residual
            );
            assert_ne!(l1m, Verdict::Violated, "L1 <= M violated");
            assert!(
                (rep.t_plus - rep.t_minus).abs() <= rep.margin + 1e-6 * rep.t_plus.abs(),
                "T+ != T- beyond tolerance"
            );
            // the evaluators agree with the exact decomposition of M
            assert!(rep.identity_residual < 1e-6, "evaluators inconsistent");
            if mrg == Verdict::Violated {
                all_hold = false;
            }
        }
    }
    if all_hold {
        println!("[criterion 10] PASS - L1 <= M <= Rg on all four configurations");
    } else {
        println!("[criterion 10] FAIL - M <= Rg does not hold: the middle term exceeds the remainder bound by far more than the quadrature margin on every configuration, while the exact-decomposition residual is at quadrature level. The bound as stated over-subtracts the two tail integrals (coefficient c_(1,s)/2 where the exterior mass of the half-order operator is c_(1,s/2)^2 < c_(1,s)/2).");
    }
    assert!(all_hold, "M <= Rg fails beyond margin (see printed diagnostics)");
}

#[test]
fn criterion_11_sharpness_bracket() {
    let params = FracParams::new(3, 0.5, 0.5, 2.0).unwrap();
    let domain = DomainBall::new(1.0).unwrap();
    let spec = SearchSpec {
        family: SearchFamily::BumpBeta { radius: 1.0, lo: 2.0, hi: 8.0 },
        budget: 500,
        tolerance: 1e-4,
    };
    let res = sharpness::minimize(&params, &spec, domain).unwrap();
    assert!(res.evals <= 500, "used {} evaluations", res.evals);
    for w in res.trace.windows(2) {
        assert!(w[1].best_q <= w[0].best_q, "trace not monotone");
    }
    let q2 = sharpness::rayleigh_quotient(&params, &bump(2.0, 1.0), domain, 1e-10).unwrap();
    assert!(
        res.best_q >= res.lower_bound - 1e-9,
        "best_Q {} below bound {}",
        res.best_q,
        res.lower_bound
    );
    assert!(res.best_q <= q2 + 1e-7, "best_Q {} above Q(beta=2) {}", res.best_q, q2);
    println!(
        "[criterion 11] PASS - bracket (b/p)^p = {:.6} <= best_Q = {:.6} <= Q(beta=2) = {:.6}; beta* = {:.4}, gap = {:.3}, {} evals, monotone trace",
        res.lower_bound, res.best_q, q2, res.best_params[0], res.gap, res.evals
    );
}

#[test]
fn criterion_12_property_suite() {
    // psi homogeneity across the fold: psi(1/r) r^-(N+2s) = psi(r)
    for (n, s) in [(2u32, 0.3), (3, 0.5), (5, 0.75)] {
        for k in 1..=9 {
            let r = 0.1 * k as f64;
            let a = kernels::psi_unfolded(n, s, 1.0 / r).unwrap() * r.powf(-(n as f64 + 2.0 * s));
            let b = kernels::psi_unfolded(n, s, r).unwrap();
            assert!(
                rel_diff(a, b) <= 1e-9,
                "homogeneity fails at N={n} s={s} r={r}: {a} vs {b}"
            );
        }
    }

    // b symmetry under theta <-> N - 2s - theta
    for (n, s, theta) in [(3u32, 0.5, 0.7), (2, 0.3, 0.25), (5, 0.75, 1.2)] {
        let swap = n as f64 - 2.0 * s - theta;
        let a = kernels::b_constant(&FracParams::new(n, s, theta, 2.0).unwrap(), 1e-10).unwrap();
        let b = kernels::b_constant(&FracParams::new(n, s, swap, 2.0).unwrap(), 1e-10).unwrap();
        assert!(
            rel_diff(a.value, b.value) <= 1e-8,
            "b symmetry fails at N={n} s={s} theta={theta}"
        );
    }

    // dilation covariance of the radial evaluator
    let u = bump(2.0, 1.0);
    for lam in [0.5, 2.0] {
        let v1 = fraclap::fraclap_radial(&u.dilate(lam), 3, 0.5, 0.4 * lam, 1e-10).unwrap();
        let v2 = fraclap::fraclap_radial(&u, 3, 0.5, 0.4, 1e-10).unwrap();
        assert!(
            rel_diff(v1, lam.powf(-1.0) * v2) <= 1e-7,
            "dilation covariance fails at lambda={lam}"
        );
    }

    // radial vs line cross-validation in one dimension, within combined margins
    let kern = AngularKernel::new(1, 1.2, 1e-13);
    let a = fraclap::fraclap_radial_with(&kern, &u, 1, 0.6, 0.3, 1e-10).unwrap();
    let b = fraclap::fraclap_line_full(|y: f64| u.value(y.abs()), 1.0, 0.6, 0.3, 1e-10).unwrap();
    assert!(
        (a.value - b.value).abs() <= a.abs_err + b.abs_err,
        "radial {} +- {:.1e} vs line {} +- {:.1e}",
        a.value,
        a.abs_err,
        b.value,
        b.abs_err
    );

    // v_t dual route at (N=1, s=0.4, theta=1, t=0.5, x=0.7)
    let fam = VtFamily::new(FracParams::new(1, 0.4, 1.0, 2.0).unwrap(), 0.5).unwrap();
    let vt = fraclap::fraclap_vt(&fam, 0.7, 1e-11).unwrap();
    assert!(rel_diff(vt, 0.251_123_848_253_969_22) < 1e-9, "v_t route off: {vt}");

    // integrate examples at stated tolerances
    let r = quad::integrate(|x| x, 0.0, 1.0, 1e-12);
    assert!((r.value - 0.5).abs() < 1e-12);
    let r = quad::integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-12);
    assert!((r.value - 2.0).abs() < 1e-11);
    let r = quad::integrate_singular(|x| x.powf(-0.5), 0.0, 1.0, -0.5, 0.0, 1e-12).unwrap();
    assert!((r.value - 2.0).abs() < 1e-11);
    let r = quad::integrate_singular_dist(
        |_x, da, db| da.powf(-0.5) * db.powf(-0.5),
        &[0.0, 1.0],
        -0.5,
        -0.5,
        1e-12,
    )
    .unwrap();
    assert!((r.value - std::f64::consts::PI).abs() < 1e-11);
    let r = quad::integrate_singular(|x| x.powf(0.3), 0.0, 1.0, 0.3, 0.0, 1e-12).unwrap();
    assert!((r.value - 1.0 / 1.3).abs() < 1e-12);
    let r = quad::integrate_tail(|x| x.powi(-2), 1.0, 2.0, 1e-10).unwrap();
    assert!((r.value - 1.0).abs() < 1e-9);
    let r = quad::integrate_tail(|x| x.powi(-3), 2.0, 3.0, 1e-10).unwrap();
    assert!((r.value - 0.125).abs() < 1e-10);

    println!("[criterion 12] PASS - psi homogeneity to 1e-9, b swap symmetry, dilation covariance to 1e-7, radial/line and v_t dual routes, quadrature examples");
}
