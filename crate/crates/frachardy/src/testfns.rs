//! Admissible radial test-function families and their weighted integrals.

use crate::quad::{self, QuadResult};
use crate::specfun;
use crate::{Error, Result};

/// A radial function with two derivatives and a known support radius.
///
/// The fractional-Laplacian evaluators need `d1`/`d2` to expand their
/// integrand near the fold point r = 1, where direct differences of `value`
/// lose every significant digit against the kernel blow-up.
pub trait RadialC2 {
    fn value(&self, rho: f64) -> f64;
    fn d1(&self, rho: f64) -> f64;
    fn d2(&self, rho: f64) -> f64;
    /// Radius beyond which the function vanishes identically;
    /// `f64::INFINITY` for whole-space families.
    fn support_radius(&self) -> f64;
}

/// Compactly supported C^(1,1) radial profiles.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `u(rho) = (1 - (rho/R)^2)_+^beta`, C^(1,1) for beta >= 2.
    Bump { beta: f64, radius: f64 },
    /// Linear combination of bumps with a shared support radius.
    LinearCombination {
        coeffs: Vec<f64>,
        betas: Vec<f64>,
        radius: f64,
    },
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 2.0) {
        return Err(Error::Domain(format!(
            "bump exponent beta = {beta} rejected: beta >= 2 is required for C^(1,1)"
        )));
    }
    Ok(())
}

impl RadialProfile {
    pub fn bump(beta: f64, radius: f64) -> Result<Self> {
        check_beta(beta)?;
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("support radius must be positive, got {radius}")));
        }
        Ok(RadialProfile::Bump { beta, radius })
    }

    pub fn combo(coeffs: Vec<f64>, betas: Vec<f64>, radius: f64) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() != betas.len() {
            return Err(Error::Domain(
                "combination needs matching, non-empty coeffs and betas".into(),
            ));
        }
        for &b in &betas {
            check_beta(b)?;
        }
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("support radius must be positive, got {radius}")));
        }
        Ok(RadialProfile::LinearCombination { coeffs, betas, radius })
    }

    /// Parse the CLI grammar, e.g. `family=bump,beta=2.5,R=0.8` or
    /// `family=combo,coeffs=[1,-0.3],betas=[2,3],R=1`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut fields = std::collections::HashMap::new();
        for item in split_top_level(spec) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::ProfileSpec(format!("expected key=value, got '{item}'")))?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        let family = fields
            .get("family")
            .ok_or_else(|| Error::ProfileSpec("missing family".into()))?
            .clone();
        let radius = parse_f64(&fields, "R")?;
        match family.as_str() {
            "bump" => RadialProfile::bump(parse_f64(&fields, "beta")?, radius),
            "combo" => {
                let coeffs = parse_list(&fields, "coeffs")?;
                let betas = parse_list(&fields, "betas")?;
                RadialProfile::combo(coeffs, betas, radius)
            }
            other => Err(Error::ProfileSpec(format!("unknown family '{other}'"))),
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            RadialProfile::Bump { radius, .. } => *radius,
            RadialProfile::LinearCombination { radius, .. } => *radius,
        }
    }

    /// Same shape, support dilated by `lambda` — for bumps this is exactly
    /// `u(rho / lambda)`.
    pub fn dilate(&self, lambda: f64) -> Self {
        match self.clone() {
            RadialProfile::Bump { beta, radius } => {
                RadialProfile::Bump { beta, radius: radius * lambda }
            }
            RadialProfile::LinearCombination { coeffs, betas, radius } => {
                RadialProfile::LinearCombination { coeffs, betas, radius: radius * lambda }
            }
        }
    }

    /// Amplitude scaling `u -> a u`.
    pub fn scaled(&self, a: f64) -> Self {
        match self.clone() {
            RadialProfile::Bump { beta, radius } => RadialProfile::LinearCombination {
                coeffs: vec![a],
                betas: vec![beta],
                radius,
            },
            RadialProfile::LinearCombination { coeffs, betas, radius } => {
                RadialProfile::LinearCombination {
                    coeffs: coeffs.into_iter().map(|c| c * a).collect(),
                    betas,
                    radius,
                }
            }
        }
    }

    /// Crude uniform bound on |u''|, used by error heuristics.
    pub fn second_derivative_bound(&self) -> f64 {
        let r2 = self.radius() * self.radius();
        match self {
            RadialProfile::Bump { beta, .. } => 2.0 * beta * (2.0 * beta - 1.0) / r2,
            RadialProfile::LinearCombination { coeffs, betas, .. } => coeffs
                .iter()
                .zip(betas)
                .map(|(c, b)| c.abs() * 2.0 * b * (2.0 * b - 1.0) / r2)
                .sum(),
        }
    }
}

fn bump_terms(rho: f64, beta: f64, radius: f64) -> (f64, f64, f64) {
    let x = rho / radius;
    let z = 1.0 - x * x;
    if z <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let v = z.powf(beta);
    let d1 = -2.0 * beta * x / radius * z.powf(beta - 1.0);
    let d2 = 4.0 * beta * (beta - 1.0) * x * x / (radius * radius) * z.powf(beta - 2.0)
        - 2.0 * beta / (radius * radius) * z.powf(beta - 1.0);
    (v, d1, d2)
}

impl RadialC2 for RadialProfile {
    fn value(&self, rho: f64) -> f64 {
        match self {
            RadialProfile::Bump { beta, radius } => bump_terms(rho, *beta, *radius).0,
            RadialProfile::LinearCombination { coeffs, betas, radius } => coeffs
                .iter()
                .zip(betas)
                .map(|(c, b)| c * bump_terms(rho, *b, *radius).0)
                .sum(),
        }
    }

    fn d1(&self, rho: f64) -> f64 {
        match self {
            RadialProfile::Bump { beta, radius } => bump_terms(rho, *beta, *radius).1,
            RadialProfile::LinearCombination { coeffs, betas, radius } => coeffs
                .iter()
                .zip(betas)
                .map(|(c, b)| c * bump_terms(rho, *b, *radius).1)
                .sum(),
        }
    }

    fn d2(&self, rho: f64) -> f64 {
        match self {
            RadialProfile::Bump { beta, radius } => bump_terms(rho, *beta, *radius).2,
            RadialProfile::LinearCombination { coeffs, betas, radius } => coeffs
                .iter()
                .zip(betas)
                .map(|(c, b)| c * bump_terms(rho, *b, *radius).2)
                .sum(),
        }
    }

    fn support_radius(&self) -> f64 {
        self.radius()
    }
}

/// The convex regularization `U_(t,p) = (u^2 + t^2)^(p/2) - t^p`.
///
/// Evaluated as `t^p expm1((p/2) ln1p(u^2/t^2))`, which is exact at u = 0 and
/// keeps full precision when u << t (the direct form cancels to zero there).
#[derive(Clone, Debug)]
pub struct SmoothedComposite {
    pub base: RadialProfile,
    pub t: f64,
    pub p: f64,
}

/// Build `U_(t,p)` over a profile; t must be positive.
pub fn compose_u(base: &RadialProfile, t: f64, p: f64) -> Result<SmoothedComposite> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("smoothing parameter t must be positive, got {t}")));
    }
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("p must be >= 1, got {p}")));
    }
    Ok(SmoothedComposite { base: base.clone(), t, p })
}

impl SmoothedComposite {
    fn phi(&self, v: f64) -> f64 {
        let t = self.t;
        self.t.powf(self.p) * f64::exp_m1(0.5 * self.p * f64::ln_1p(v * v / (t * t)))
    }

    /// `phi'(v) = p v (t^2 + v^2)^(p/2 - 1)`.
    pub fn phi_d1(&self, v: f64) -> f64 {
        self.p * v * (self.t * self.t + v * v).powf(0.5 * self.p - 1.0)
    }

    fn phi_d2(&self, v: f64) -> f64 {
        let w = self.t * self.t + v * v;
        self.p * w.powf(0.5 * self.p - 2.0) * (self.t * self.t + (self.p - 1.0) * v * v)
    }
}

impl RadialC2 for SmoothedComposite {
    fn value(&self, rho: f64) -> f64 {
        let u = self.base.value(rho);
        if u == 0.0 {
            0.0
        } else {
            self.phi(u)
        }
    }

    fn d1(&self, rho: f64) -> f64 {
        self.phi_d1(self.base.value(rho)) * self.base.d1(rho)
    }

    fn d2(&self, rho: f64) -> f64 {
        let u = self.base.value(rho);
        let du = self.base.d1(rho);
        self.phi_d2(u) * du * du + self.phi_d1(u) * self.base.d2(rho)
    }

    fn support_radius(&self) -> f64 {
        self.base.support_radius()
    }
}

/// The domain: a ball of radius `radius` centered at the origin.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct DomainBall {
    pub radius: f64,
}

impl DomainBall {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("domain radius must be positive, got {radius}")));
        }
        Ok(DomainBall { radius })
    }

    pub fn contains(&self, profile: &RadialProfile) -> bool {
        profile.radius() <= self.radius
    }
}

/// `vol(S^(N-1)) int_0^R rho^(N-1-w) |g(rho)|^p drho` with singular-endpoint
/// handling at the origin.
pub fn weighted_lp_ball<G: Fn(f64) -> f64>(
    g: G,
    n: u32,
    p: f64,
    w: f64,
    domain: DomainBall,
    rel_tol: f64,
) -> Result<QuadResult> {
    weighted_lp_ball_pts(g, n, p, w, &[0.0, domain.radius], rel_tol)
}

/// Same integral with interior breakpoints (support edges, kink radii).
pub(crate) fn weighted_lp_ball_pts<G: Fn(f64) -> f64>(
    g: G,
    n: u32,
    p: f64,
    w: f64,
    pts: &[f64],
    rel_tol: f64,
) -> Result<QuadResult> {
    let nf = n as f64;
    let e = nf - 1.0 - w;
    if e <= -1.0 && g(0.0) != 0.0 {
        return Err(Error::NonIntegrable { exponent: e });
    }
    let left = if e < 0.0 || e.fract() != 0.0 { e } else { 0.0 };
    let f = |rho: f64, _da: f64, _db: f64| rho.powf(e) * g(rho).abs().powf(p);
    let res = quad::integrate_singular_dist(f, pts, left.max(-0.999_999), 0.0, rel_tol)?;
    Ok(res.scale(specfun::sphere_area(n)))
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_f64(fields: &std::collections::HashMap<String, String>, key: &str) -> Result<f64> {
    fields
        .get(key)
        .ok_or_else(|| Error::ProfileSpec(format!("missing {key}")))?
        .parse()
        .map_err(|_| Error::ProfileSpec(format!("bad number for {key}")))
}

fn parse_list(fields: &std::collections::HashMap<String, String>, key: &str) -> Result<Vec<f64>> {
    let raw = fields
        .get(key)
        .ok_or_else(|| Error::ProfileSpec(format!("missing {key}")))?;
    let inner = raw
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::ProfileSpec(format!("{key} must be bracketed, got '{raw}'")))?;
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::ProfileSpec(format!("bad number '{x}' in {key}")))
        })
        .collect()
}
