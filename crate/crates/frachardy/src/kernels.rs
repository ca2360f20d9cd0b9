//! Angular kernels of the polar reduction and the quadrature constants
//! built from them.
//!
//! The working kernel is
//!
//! ```text
//! K_q(r) = vol(S^(N-2)) int_0^pi sin(a)^(N-2) ((1-r)^2 + 4 r sin(a/2)^2)^(-(N+q)/2) da
//! ```
//!
//! for N >= 2 and `K_q(r) = |1-r|^(-1-q) + (1+r)^(-1-q)` for N = 1, where
//! q = 2s for the weight constant and q = ps for the Gagliardo-seminorm
//! constant. `psi` exposes the doubled convention `2 K_(2s)`; all integral
//! formulas in this crate consume `K` directly, which is the normalization
//! under which the quadrature constant reproduces its gamma closed form.
//! The angle-variable form keeps the integrand smooth at the h = +-1
//! endpoints and concentrates quadrature points where the denominator is
//! small, which keeps accuracy uniform up to r = 1 - 1e-6.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::quad;
use crate::specfun::{self, ConstantKind, ConstantReport};
use crate::{Error, Result};

/// The parameter tuple (N, s, theta, p) of the weighted inequalities.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FracParams {
    #[serde(rename = "N")]
    pub n: u32,
    pub s: f64,
    pub theta: f64,
    pub p: f64,
}

impl FracParams {
    /// Basic admissibility shared by every consumer: N >= 1, s in (0,1),
    /// p >= 1 and theta > -2s. The closed-form and limit operations add
    /// their own theta < N requirement.
    pub fn new(n: u32, s: f64, theta: f64, p: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("N must be >= 1".into()));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Domain(format!("s must lie in (0,1), got {s}")));
        }
        if !(p >= 1.0) {
            return Err(Error::Domain(format!("p must be >= 1, got {p}")));
        }
        if !(theta > -2.0 * s) {
            return Err(Error::Domain(format!(
                "theta must exceed -2s = {}, got {theta}",
                -2.0 * s
            )));
        }
        Ok(FracParams { n, s, theta, p })
    }

    /// Bounded-domain admissibility of the main inequality: theta >= 0 and
    /// N > theta + 2s.
    pub fn require_bounded_domain(&self) -> Result<()> {
        if self.theta < 0.0 {
            return Err(Error::Domain(format!(
                "bounded-domain inequality needs theta >= 0, got {}",
                self.theta
            )));
        }
        if self.n as f64 <= self.theta + 2.0 * self.s {
            return Err(Error::Domain(format!(
                "bounded-domain inequality needs N > theta + 2s, got N={}, theta+2s={}",
                self.n,
                self.theta + 2.0 * self.s
            )));
        }
        Ok(())
    }
}

/// A kernel evaluation, tagged by which kernel produced it.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct KernelSample {
    pub r: f64,
    pub value: f64,
    #[serde(rename = "kind")]
    pub kind: KernelKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Psi,
    PhiFs,
}

/// Memoized evaluator of `K_q` for one fixed (N, q).
///
/// Evaluations are keyed by the exact distance 1 - r so that callers inside
/// an endpoint substitution (which know that distance to full precision) hit
/// the cache coherently. The map is only ever read back by key, so the
/// iteration order of the HashMap cannot leak into results.
pub struct AngularKernel {
    n: u32,
    q: f64,
    rel_tol: f64,
    vol: f64,
    cache: RefCell<HashMap<u64, f64>>,
    evals: Cell<u64>,
}

impl AngularKernel {
    pub fn new(n: u32, q: f64, rel_tol: f64) -> Self {
        let vol = if n >= 2 { specfun::sphere_area(n - 1) } else { 0.0 };
        AngularKernel {
            n,
            q,
            rel_tol,
            vol,
            cache: RefCell::new(HashMap::new()),
            evals: Cell::new(0),
        }
    }

    pub fn order(&self) -> f64 {
        self.q
    }

    /// Integrand evaluations spent on cache misses so far.
    pub fn evals(&self) -> u64 {
        self.evals.get()
    }

    /// K_q(r) with the distance `one_minus_r = 1 - r` supplied exactly.
    pub fn eval(&self, r: f64, one_minus_r: f64) -> f64 {
        if self.n == 1 {
            return one_minus_r.abs().powf(-1.0 - self.q) + (1.0 + r).powf(-1.0 - self.q);
        }
        if self.n == 3 {
            // the h-integrand is an exact derivative:
            // K = 2 pi ((1-r)^(-1-q) - (1+r)^(-1-q)) / ((1+q) r)
            let m = 1.0 + self.q;
            if r.abs() < 0.02 {
                // the difference of powers cancels as r -> 0; binomial series
                let r2 = r * r;
                let mut coef = m; // C(m,1)
                let mut sum = 1.0; // leading term, after dividing by m r
                let mut rk = 1.0;
                for k in (1..=9u32).step_by(2) {
                    coef = coef * (m + k as f64) / (k as f64 + 1.0);
                    coef = coef * (m + k as f64 + 1.0) / (k as f64 + 2.0);
                    rk *= r2;
                    sum += coef / m * rk;
                }
                return 4.0 * PI * sum;
            }
            let diff = one_minus_r.abs().powf(-m) - (1.0 + r).powf(-m);
            return 2.0 * PI * diff / (m * r);
        }
        let key = one_minus_r.to_bits();
        if let Some(&v) = self.cache.borrow().get(&key) {
            return v;
        }
        let v = self.eval_uncached(r, one_minus_r);
        self.cache.borrow_mut().insert(key, v);
        v
    }

    fn eval_uncached(&self, r: f64, one_minus_r: f64) -> f64 {
        let n = self.n;
        let expo = -((n as f64 + self.q) / 2.0);
        let eps2 = one_minus_r * one_minus_r;
        let four_r = 4.0 * r;
        let f = move |alpha: f64| {
            let sh = (0.5 * alpha).sin();
            let d = eps2 + four_r * sh * sh;
            let sin_pow = if n == 2 { 1.0 } else { alpha.sin().powi(n as i32 - 2) };
            sin_pow * d.powf(expo)
        };
        // geometric breakpoints resolve the alpha ~ |1-r| peak
        let mut pts = vec![0.0];
        let mut t = one_minus_r.abs().max(1e-14).min(0.5);
        while t < PI {
            pts.push(t);
            t *= 4.0;
        }
        pts.push(PI);
        let res = quad::integrate_pts(f, &pts, self.rel_tol);
        self.evals.set(self.evals.get() + res.evals);
        self.vol * res.value
    }
}

fn check_r_open_unit(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("r must lie in (0,1), got {r}")));
    }
    Ok(())
}

/// The doubled angular kernel `psi_N(r) = 2 K_(2s)(r)` on r in (0,1).
pub fn psi(n: u32, s: f64, r: f64) -> Result<f64> {
    check_r_open_unit(r)?;
    psi_unfolded(n, s, r)
}

/// `psi_N` evaluated from the defining integral at any r > 0, r != 1; used
/// to check the homogeneity `psi(1/r) = r^(N+2s) psi(r)` across the fold.
pub fn psi_unfolded(n: u32, s: f64, r: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("psi needs s in (0,1), got {s}")));
    }
    if !(r > 0.0) || r == 1.0 {
        return Err(Error::Domain(format!("psi needs r > 0, r != 1, got {r}")));
    }
    let kern = AngularKernel::new(n, 2.0 * s, 1e-12);
    Ok(2.0 * kern.eval(r, 1.0 - r))
}

/// Gagliardo-seminorm angular kernel `Phi_(N,s,p)(r) = K_(ps)(r)`.
pub fn phi_fs(n: u32, s: f64, p: f64, r: f64) -> Result<f64> {
    check_r_open_unit(r)?;
    if !(s > 0.0 && s < 1.0) || !(p >= 1.0) {
        return Err(Error::Domain(format!("phi_fs needs s in (0,1), p >= 1, got s={s}, p={p}")));
    }
    let kern = AngularKernel::new(n, p * s, 1e-12);
    Ok(kern.eval(r, 1.0 - r))
}

/// `1 - r^g`, stable against cancellation for r near 1 when the exact
/// distance `one_minus_r` is available.
pub(crate) fn one_minus_pow(r: f64, g: f64, one_minus_r: f64) -> f64 {
    if g == 0.0 {
        return 0.0;
    }
    if r < 0.5 {
        -f64::exp_m1(g * r.ln())
    } else {
        -f64::exp_m1(g * f64::ln_1p(-one_minus_r))
    }
}

/// Weight constant by quadrature:
/// `b = c_(N,s) int_0^1 r^(2s-1) (1-r^theta) (1-r^(N-2s-theta)) K_(2s)(r) dr`,
/// reported against its gamma closed form.
pub fn b_constant(params: &FracParams, rel_tol: f64) -> Result<ConstantReport> {
    let (n, s, theta) = (params.n, params.s, params.theta);
    let nf = n as f64;
    let closed = specfun::lambda_closed(n, s, theta)?;
    if theta == 0.0 || nf - 2.0 * s - theta == 0.0 {
        // one of the (1 - r^g) factors vanishes identically
        return Ok(ConstantReport::new(
            ConstantKind::BQuadrature,
            *params,
            0.0,
            Some(closed),
        ));
    }
    let g1 = theta;
    let g2 = nf - 2.0 * s - theta;
    let kern = AngularKernel::new(n, 2.0 * s, (rel_tol * 0.1).max(1e-13));
    let f = |r: f64, _da: f64, db: f64| {
        let head = if r < 0.5 {
            // expanded powers: no cancellation away from r = 1 and the
            // individual exponents stay integrable even for negative g1/g2
            let a = 2.0 * s - 1.0;
            r.powf(a) - r.powf(a + g1) - r.powf(nf - theta - 1.0) + r.powf(nf - 1.0)
        } else {
            r.powf(2.0 * s - 1.0) * one_minus_pow(r, g1, db) * one_minus_pow(r, g2, db)
        };
        head * kern.eval(r, db)
    };
    let left = (2.0 * s - 1.0) + g1.min(0.0) + g2.min(0.0);
    let right = 1.0 - 2.0 * s;
    let res = quad::integrate_singular_dist(f, &[0.0, 1.0], left, right, rel_tol)?;
    let value = specfun::c_ns(n, s)? * res.value;
    Ok(ConstantReport::new(ConstantKind::BQuadrature, *params, value, Some(closed)))
}

/// Gagliardo-seminorm Hardy constant by quadrature:
/// `2 int_0^1 r^(ps-1) |1 - r^((N-ps)/p)|^p Phi_(N,s,p)(r) dr`; for p = 2 the
/// report cross-references the closed form.
pub fn fs_constant(n: u32, s: f64, p: f64, rel_tol: f64) -> Result<ConstantReport> {
    let nf = n as f64;
    if !(p > 1.0) {
        return Err(Error::Domain(format!("fs_constant needs p > 1, got {p}")));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("fs_constant needs s in (0,1), got {s}")));
    }
    if nf <= p * s {
        return Err(Error::Domain(format!("fs_constant needs N > p s, got N={n}, ps={}", p * s)));
    }
    let g = (nf - p * s) / p;
    let kern = AngularKernel::new(n, p * s, (rel_tol * 0.1).max(1e-13));
    let f = |r: f64, _da: f64, db: f64| {
        r.powf(p * s - 1.0) * one_minus_pow(r, g, db).abs().powf(p) * kern.eval(r, db)
    };
    let left = p * s - 1.0;
    let right = p - 1.0 - p * s;
    let res = quad::integrate_singular_dist(f, &[0.0, 1.0], left, right, rel_tol)?;
    let value = 2.0 * res.value;
    let closed = if p == 2.0 { Some(specfun::fs_closed_p2(n, s)?) } else { None };
    let params = FracParams { n, s, theta: 0.0, p };
    Ok(ConstantReport::new(ConstantKind::FrankSeiringer, params, value, closed))
}
