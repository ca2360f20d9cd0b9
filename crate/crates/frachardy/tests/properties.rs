//! Property-based invariants over randomized inputs.

use proptest::prelude::*;

use frachardy::kernels::{self, FracParams};
use frachardy::quad;
use frachardy::specfun;
use frachardy::testfns::{compose_u, weighted_lp_ball, DomainBall, RadialC2, RadialProfile};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Linearity of the integrator on random polynomial pairs, within the
    /// combined reported error bounds.
    #[test]
    fn integrate_is_linear(
        alpha in -3.0..3.0f64,
        beta in -3.0..3.0f64,
        c0 in -2.0..2.0f64,
        c1 in -2.0..2.0f64,
    ) {
        let f = move |x: f64| c0 + c1 * x * x;
        let g = move |x: f64| (x - c1).powi(3) + c0 * x;
        let both = quad::integrate(move |x| alpha * f(x) + beta * g(x), 0.0, 1.0, 1e-11);
        let rf = quad::integrate(f, 0.0, 1.0, 1e-11);
        let rg = quad::integrate(g, 0.0, 1.0, 1e-11);
        let combined = both.abs_err + alpha.abs() * rf.abs_err + beta.abs() * rg.abs_err + 1e-12;
        prop_assert!(
            (both.value - (alpha * rf.value + beta * rg.value)).abs() <= combined,
            "linearity violated beyond combined error"
        );
    }

    /// The gamma-ratio constant is symmetric under theta <-> N - 2s - theta.
    #[test]
    fn lambda_swap_symmetry(n in 2u32..=6, s in 0.05..0.95f64, frac in 0.02..0.98f64) {
        let span = n as f64 - 2.0 * s;
        let theta = frac * span;
        let a = specfun::lambda_closed(n, s, theta).unwrap();
        let b = specfun::lambda_closed(n, s, span - theta).unwrap();
        prop_assert!(frachardy::rel_diff(a, b) < 1e-11);
        prop_assert!(a > 0.0); // strictly positive inside (0, N-2s)
    }

    /// The smoothed composite is monotone in |u|.
    #[test]
    fn composite_monotone_in_amplitude(
        a1 in 0.0..1.0f64,
        a2 in 1.0..3.0f64,
        t in 0.01..2.0f64,
        p in 1.0..4.0f64,
        rho in 0.0..1.2f64,
    ) {
        let base = RadialProfile::bump(2.0, 1.0).unwrap();
        let u1 = compose_u(&base.scaled(a1), t, p).unwrap();
        let u2 = compose_u(&base.scaled(a2), t, p).unwrap();
        prop_assert!(u1.value(rho) <= u2.value(rho) + 1e-15);
        prop_assert!(u1.value(rho) >= 0.0);
    }

    /// Weighted integrals are homogeneous of degree p in the amplitude.
    #[test]
    fn weighted_norm_amplitude_homogeneity(a in 0.1..5.0f64, p in 1.0..3.5f64) {
        let u = RadialProfile::bump(2.0, 1.0).unwrap();
        let domain = DomainBall::new(1.0).unwrap();
        let base = weighted_lp_ball(|x| u.value(x), 2, p, 0.4, domain, 1e-10).unwrap();
        let scaled = weighted_lp_ball(|x| a * u.value(x), 2, p, 0.4, domain, 1e-10).unwrap();
        prop_assert!(
            frachardy::rel_diff(scaled.value, a.powf(p) * base.value) < 1e-8,
            "degree-p homogeneity violated"
        );
    }

    /// Both angular kernels are strictly positive on (0, 1).
    #[test]
    fn kernels_positive(n in 1u32..=5, s in 0.05..0.95f64, r in 0.01..0.99f64) {
        prop_assert!(kernels::psi(n, s, r).unwrap() > 0.0);
        prop_assert!(kernels::phi_fs(n, s, 2.0, r).unwrap() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Quadrature and closed form agree across random admissible parameters.
    #[test]
    fn b_matches_lambda_randomized(n in 1u32..=4, s in 0.1..0.9f64, frac in 0.05..0.95f64) {
        let span = n as f64 - 2.0 * s;
        prop_assume!(span > 0.05);
        let theta = frac * span;
        let params = FracParams::new(n, s, theta, 2.0).unwrap();
        let report = kernels::b_constant(&params, 1e-9).unwrap();
        prop_assert!(
            report.rel_diff.unwrap() < 1e-7,
            "b vs closed form off by {}",
            report.rel_diff.unwrap()
        );
    }
}
