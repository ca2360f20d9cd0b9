//! Gamma-function machinery and closed-form constants.
//!
//! Log-gamma uses a Lanczos approximation (g = 607/128, 15 terms) with the
//! reflection formula for negative non-integer arguments. The target is
//! 1e-12 relative accuracy on |x| <= 50 so that quadrature, not special
//! functions, dominates every error budget downstream.

use std::f64::consts::PI;

use crate::kernels::FracParams;
use crate::{rel_diff, Error, Result};

const LANCZOS_G: f64 = 4.742_187_5; // 607/128
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    3.399_464_998_481_188_87e-5,
    4.652_362_892_704_857_566_5e-5,
    -9.837_447_530_487_956_467_7e-5,
    1.580_887_032_249_124_888_4e-4,
    -2.102_644_417_241_048_831_9e-4,
    2.174_396_181_152_126_432e-4,
    -1.643_181_065_367_638_902_2e-4,
    8.441_822_398_385_274_329_3e-5,
    -2.619_083_840_158_140_867e-5,
    3.689_918_265_953_162_270_4e-6,
];

/// ln|Gamma(x)| together with the sign of Gamma(x).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogGamma {
    pub log_abs: f64,
    pub sign: f64,
}

/// sin(pi x) with argument reduction; exact zeros at integers.
fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r < 0.0 {
        r += 2.0;
    }
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.0 {
        (PI * (1.0 - r)).sin()
    } else if r < 1.5 {
        -(PI * (r - 1.0)).sin()
    } else {
        -(PI * (2.0 - r)).sin()
    }
}

fn lanczos_ln_gamma_pos(x: f64) -> f64 {
    // valid for x >= 0.5
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + i as f64);
    }
    let t = x + LANCZOS_G - 0.5;
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + acc.ln()
}

/// Natural log of |Gamma(x)| with a sign flag.
///
/// Errors at the poles x = 0, -1, -2, ...
pub fn log_gamma(x: f64) -> Result<LogGamma> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {x}")));
    }
    if x <= 0.0 && x.fract() == 0.0 {
        return Err(Error::GammaPole(x));
    }
    if x >= 0.5 {
        return Ok(LogGamma { log_abs: lanczos_ln_gamma_pos(x), sign: 1.0 });
    }
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x), and 1-x >= 0.5 here
    let s = sin_pi(x);
    let log_abs = PI.ln() - s.abs().ln() - lanczos_ln_gamma_pos(1.0 - x);
    Ok(LogGamma { log_abs, sign: s.signum() })
}

/// Gamma(x) via `log_gamma`.
pub fn gamma(x: f64) -> Result<f64> {
    let lg = log_gamma(x)?;
    Ok(lg.sign * lg.log_abs.exp())
}

/// Surface measure of the unit sphere bounding the ball in R^N:
/// `2 pi^(N/2) / Gamma(N/2)`, with the convention vol(S^0) = 2.
pub fn sphere_area(n: u32) -> f64 {
    let nf = n as f64;
    2.0 * PI.powf(nf / 2.0) / gamma(nf / 2.0).expect("N/2 > 0")
}

/// Normalizing constant of the fractional Laplacian:
/// `s 2^(2s) Gamma((N+2s)/2) / (pi^(N/2) Gamma(1-s))`.
pub fn c_ns(n: u32, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("c_ns needs s in (0,1), got {s}")));
    }
    let nf = n as f64;
    Ok(s * (2.0 * s * 2.0_f64.ln()).exp() * gamma((nf + 2.0 * s) / 2.0)?
        / (PI.powf(nf / 2.0) * gamma(1.0 - s)?))
}

/// Coefficient of the power identity for `|x|^-theta`:
/// `2^(2s) G((N-t)/2) G((2s+t)/2) / (G((N-t-2s)/2) G(t/2))`.
///
/// theta = 0 and theta = N - 2s are exact zeros (the 1/Gamma factor
/// vanishes); evaluating the 0 * inf gamma product there would cancel
/// catastrophically.
pub fn lambda_closed(n: u32, s: f64, theta: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("lambda_closed needs s in (0,1), got {s}")));
    }
    let nf = n as f64;
    if !(theta < nf && theta > -2.0 * s) {
        return Err(Error::Domain(format!(
            "lambda_closed needs -2s < theta < N, got theta={theta}, N={n}, s={s}"
        )));
    }
    if theta == 0.0 || nf - 2.0 * s - theta == 0.0 {
        return Ok(0.0);
    }
    let g1 = log_gamma((nf - theta) / 2.0)?;
    let g2 = log_gamma((2.0 * s + theta) / 2.0)?;
    let g3 = log_gamma((nf - theta - 2.0 * s) / 2.0)?;
    let g4 = log_gamma(theta / 2.0)?;
    let log = 2.0 * s * 2.0_f64.ln() + g1.log_abs + g2.log_abs - g3.log_abs - g4.log_abs;
    Ok(g1.sign * g2.sign * g3.sign * g4.sign * log.exp())
}

/// Optimal whole-space constant for the `(-Delta)^(s/2)` Hardy inequality.
pub fn herbst_constant(n: u32, s: f64, p: f64) -> Result<f64> {
    let nf = n as f64;
    if !(p > 1.0 && s > 0.0) {
        return Err(Error::Domain(format!("herbst needs p > 1 and s > 0, got p={p}, s={s}")));
    }
    if nf <= p * s {
        return Err(Error::Domain(format!("herbst needs N > p s, got N={n}, p s={}", p * s)));
    }
    let v = gamma(nf * (p - 1.0) / (2.0 * p))? * gamma((nf - p * s) / (2.0 * p))?
        / (gamma(nf / (2.0 * p))? * gamma((nf * (p - 1.0) + p * s) / (2.0 * p))?);
    Ok((-s * 2.0_f64.ln()).exp() * v)
}

/// Closed p = 2 form of the Gagliardo-seminorm Hardy constant:
/// `2 pi^(N/2) G((N+2s)/4)^2 |G(-s)| / (G((N-2s)/4)^2 G((N+2s)/2))`.
pub fn fs_closed_p2(n: u32, s: f64) -> Result<f64> {
    let nf = n as f64;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("fs_closed_p2 needs s in (0,1), got {s}")));
    }
    if nf <= 2.0 * s {
        return Err(Error::Domain(format!("fs_closed_p2 needs N > 2s, got N={n}, s={s}")));
    }
    let log = 2.0_f64.ln() + (nf / 2.0) * PI.ln() + 2.0 * log_gamma((nf + 2.0 * s) / 4.0)?.log_abs
        + log_gamma(-s)?.log_abs
        - 2.0 * log_gamma((nf - 2.0 * s) / 4.0)?.log_abs
        - log_gamma((nf + 2.0 * s) / 2.0)?.log_abs;
    Ok(log.exp())
}

/// Sharp constant of the classical weighted Rellich inequality:
/// `(N-2-theta) [(p-1)(N-2) + theta] / p^2`.
pub fn classical_rellich_constant(n: u32, p: f64, theta: f64) -> Result<f64> {
    let nf = n as f64;
    if !(p > 1.0) {
        return Err(Error::Domain(format!("classical constant needs p > 1, got {p}")));
    }
    if nf < theta + 2.0 {
        return Err(Error::Domain(format!(
            "classical constant needs N >= theta + 2, got N={n}, theta={theta}"
        )));
    }
    Ok((nf - 2.0 - theta) * ((p - 1.0) * (nf - 2.0) + theta) / (p * p))
}

/// s -> 1 limit of the weight constant: `2 theta G((N-t)/2) / G((N-t-2)/2)`.
pub fn b_limit_s1(n: u32, theta: f64) -> Result<f64> {
    let nf = n as f64;
    if theta < 0.0 {
        return Err(Error::Domain(format!("b_limit_s1 needs theta >= 0, got {theta}")));
    }
    if nf <= theta + 2.0 {
        return Err(Error::Domain(format!(
            "b_limit_s1 needs N > theta + 2, got N={n}, theta={theta}"
        )));
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * theta * gamma((nf - theta) / 2.0)? / gamma((nf - theta - 2.0) / 2.0)?)
}

/// Which constant a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    CNs,
    LambdaClosed,
    BQuadrature,
    Herbst,
    FrankSeiringer,
    FsClosedP2,
    ClassicalRellich,
    S1Limit,
}

/// A computed constant, optionally checked against a closed form.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ConstantReport {
    pub kind: ConstantKind,
    pub params: FracParams,
    pub value: f64,
    pub closed_form: Option<f64>,
    pub rel_diff: Option<f64>,
}

impl ConstantReport {
    pub fn new(kind: ConstantKind, params: FracParams, value: f64, closed_form: Option<f64>) -> Self {
        let rd = closed_form.map(|c| rel_diff(value, c));
        ConstantReport { kind, params, value, closed_form, rel_diff: rd }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gamma_special_values() {
        assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma(0.5).unwrap() - SQRT_PI).abs() < 1e-13);
        // reflection: Gamma(-1/2) = Gamma(1/2) / (-1/2)
        assert!((gamma(-0.5).unwrap() + 2.0 * SQRT_PI).abs() < 1e-12);
        assert_eq!(log_gamma(1.0).unwrap().sign, 1.0);
        assert_eq!(log_gamma(-0.5).unwrap().sign, -1.0);
    }

    #[test]
    fn gamma_poles_rejected() {
        for x in [0.0, -1.0, -2.0, -17.0] {
            assert!(matches!(log_gamma(x), Err(Error::GammaPole(_))));
        }
    }

    #[test]
    fn gamma_recurrence_grid() {
        // |Gamma(x+1) - x Gamma(x)| / Gamma(x+1) <= 1e-12 on x = 0.1 .. 10
        let mut x = 0.1;
        while x <= 10.0 {
            let g = gamma(x).unwrap();
            let g1 = gamma(x + 1.0).unwrap();
            assert!(
                ((g1 - x * g) / g1).abs() <= 1e-12,
                "recurrence fails at x = {x}: {}",
                ((g1 - x * g) / g1).abs()
            );
            x += 0.1;
        }
    }

    #[test]
    fn gamma_matches_reference_large_args() {
        // Gamma(20) = 19! (exact in f64 up to rounding)
        let g20 = 1.216_451_004_088_320e17;
        assert!(rel_diff(gamma(20.0).unwrap(), g20) < 1e-13);
        // negative side, |x| up to 50
        let lg = log_gamma(-49.5).unwrap();
        assert!(lg.log_abs.is_finite());
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn c_ns_examples() {
        assert!(rel_diff(c_ns(1, 0.5).unwrap(), 1.0 / PI) < 1e-13);
        assert!(rel_diff(c_ns(2, 0.5).unwrap(), 1.0 / (2.0 * PI)) < 1e-13);
        // prefactor s drives the constant to zero as s -> 0+
        assert!(c_ns(3, 1e-9).unwrap() < 1e-8);
        assert!(c_ns(3, 0.0).is_err());
        assert!(c_ns(3, 1.0).is_err());
    }

    #[test]
    fn lambda_closed_examples() {
        // (3, 0.5, 1): Gamma(1)^2 / Gamma(1/2)^2 * 2 = 2/pi
        assert!(rel_diff(lambda_closed(3, 0.5, 1.0).unwrap(), 2.0 / PI) < 1e-13);
        assert_eq!(lambda_closed(4, 0.3, 0.0).unwrap(), 0.0);
        assert_eq!(lambda_closed(3, 0.25, 2.5).unwrap(), 0.0); // theta = N - 2s
        assert!(lambda_closed(3, 0.5, 3.0).is_err()); // theta >= N
        assert!(lambda_closed(3, 0.5, -1.1).is_err()); // theta <= -2s
    }

    #[test]
    fn lambda_swap_symmetry() {
        for &(n, s) in &[(2u32, 0.3), (3, 0.5), (5, 0.75), (4, 0.25)] {
            let nf = n as f64;
            let mut theta = 0.05;
            while theta < nf - 2.0 * s {
                let a = lambda_closed(n, s, theta).unwrap();
                let b = lambda_closed(n, s, nf - 2.0 * s - theta).unwrap();
                assert!(rel_diff(a, b) < 1e-12, "swap fails at N={n} s={s} theta={theta}");
                theta += 0.1;
            }
        }
    }

    #[test]
    fn lambda_sign_structure() {
        // positive strictly inside (0, N-2s)
        assert!(lambda_closed(3, 0.5, 1.5).unwrap() > 0.0);
        // negative for theta in (-2s, 0): the function |x|^(-theta) rises
        assert!(lambda_closed(3, 0.75, -0.3).unwrap() < 0.0);
        // negative beyond N-2s (reference: -theta tan(pi theta / 2) at N=1, s=1/2)
        let v = lambda_closed(1, 0.5, 0.5).unwrap();
        assert!(rel_diff(v, -0.5) < 1e-12, "got {v}");
    }

    #[test]
    fn herbst_examples() {
        // p = 2 reduction at (3, 1/2): sqrt(pi/2)
        assert!(rel_diff(herbst_constant(3, 0.5, 2.0).unwrap(), 1.253_314_137_315_500_3) < 1e-12);
        // fixed 40-digit evaluation of 2^-3/4 G(0.625)/G(1.375)
        assert!(rel_diff(herbst_constant(4, 0.75, 2.0).unwrap(), 0.959_564_619_074_332_68) < 1e-12);
        // s -> 0+: all gamma factors pair up
        assert!((herbst_constant(3, 1e-10, 2.0).unwrap() - 1.0).abs() < 1e-8);
        assert!(herbst_constant(1, 0.6, 2.0).is_err()); // N <= ps
    }

    #[test]
    fn fs_closed_p2_examples() {
        // high-precision reference values (50-digit gamma evaluation)
        assert!(rel_diff(fs_closed_p2(1, 0.25).unwrap(), 1.403_708_599_766_452_5) < 1e-12);
        assert!(rel_diff(fs_closed_p2(1, 0.4).unwrap(), 0.126_195_407_844_728_3) < 1e-12);
        assert!(rel_diff(fs_closed_p2(3, 0.5).unwrap(), 12.566_370_614_359_173) < 1e-12);
        // |Gamma(-s)| pole at s -> 1-: value grows monotonically
        let a = fs_closed_p2(3, 0.99).unwrap();
        let b = fs_closed_p2(3, 0.999).unwrap();
        assert!(b > a && a > fs_closed_p2(3, 0.9).unwrap());
        assert!(fs_closed_p2(1, 0.6).is_err()); // N <= 2s
    }

    #[test]
    fn classical_rellich_examples() {
        assert_eq!(classical_rellich_constant(5, 2.0, 0.0).unwrap(), 2.25);
        assert_eq!(classical_rellich_constant(4, 2.0, 0.0).unwrap(), 1.0);
        assert_eq!(classical_rellich_constant(6, 3.0, 4.0).unwrap(), 0.0); // theta = N-2
        assert!(classical_rellich_constant(3, 2.0, 1.5).is_err());
    }

    #[test]
    fn b_limit_s1_examples() {
        assert_eq!(b_limit_s1(5, 0.0).unwrap(), 0.0);
        assert!(rel_diff(b_limit_s1(5, 1.0).unwrap(), 2.0) < 1e-13);
        // lambda_closed approaches the limit as s -> 1-
        let target = b_limit_s1(5, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for s in [0.9, 0.99, 0.999] {
            let err = (lambda_closed(5, s, 1.0).unwrap() - target).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 2e-3);
    }
}
