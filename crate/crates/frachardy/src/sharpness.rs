//! Empirical bracketing of the best constant by minimizing the Rayleigh
//! quotient over test-function families.
//!
//! The proof technique behind the lower bound (b/p)^p is not expected to be
//! sharp; this module quantifies the gap empirically. Nothing here claims a
//! sharp constant: the deliverable is the bracket
//! `(b/p)^p <= min Q <= Q(initial family member)` and the search trace.

use crate::fraclap::fraclap_radial_with;
use crate::kernels::{AngularKernel, FracParams};
use crate::quad;
use crate::specfun;
use crate::testfns::{weighted_lp_ball_pts, DomainBall, RadialC2, RadialProfile};
use crate::{Error, Result};

/// Search families over the bump basis.
#[derive(Clone, Debug, serde::Serialize)]
pub enum SearchFamily {
    /// One parameter: the bump exponent beta in [lo, hi], fixed support.
    BumpBeta { radius: f64, lo: f64, hi: f64 },
    /// k <= 5 coefficients over a fixed set of bump exponents.
    Combo { betas: Vec<f64>, radius: f64, lo: Vec<f64>, hi: Vec<f64> },
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SearchSpec {
    pub family: SearchFamily,
    pub budget: u64,
    /// parameter-space tolerance
    pub tolerance: f64,
}

impl SearchSpec {
    pub fn validate(&self, domain: DomainBall) -> Result<()> {
        if self.budget < 1 {
            return Err(Error::Domain("search budget must be >= 1".into()));
        }
        match &self.family {
            SearchFamily::BumpBeta { radius, lo, hi } => {
                if !(*lo >= 2.0 && hi >= lo) {
                    return Err(Error::Domain(format!(
                        "beta bounds [{lo}, {hi}] must satisfy 2 <= lo <= hi"
                    )));
                }
                if *radius > domain.radius {
                    return Err(Error::Domain("support exceeds the domain".into()));
                }
            }
            SearchFamily::Combo { betas, radius, lo, hi } => {
                if betas.is_empty() || betas.len() > 5 {
                    return Err(Error::Domain("combo basis needs 1..=5 exponents".into()));
                }
                if betas.iter().any(|b| *b < 2.0) {
                    return Err(Error::Domain("all basis exponents need beta >= 2".into()));
                }
                if lo.len() != betas.len() || hi.len() != betas.len() {
                    return Err(Error::Domain("coefficient bounds must match the basis".into()));
                }
                if *radius > domain.radius {
                    return Err(Error::Domain("support exceeds the domain".into()));
                }
            }
        }
        Ok(())
    }

    fn profile_at(&self, x: &[f64]) -> Result<RadialProfile> {
        match &self.family {
            SearchFamily::BumpBeta { radius, .. } => RadialProfile::bump(x[0], *radius),
            SearchFamily::Combo { betas, radius, .. } => {
                RadialProfile::combo(x.to_vec(), betas.clone(), *radius)
            }
        }
    }

    pub fn param_names(&self) -> Vec<String> {
        match &self.family {
            SearchFamily::BumpBeta { .. } => vec!["beta".into()],
            SearchFamily::Combo { betas, .. } => {
                (0..betas.len()).map(|i| format!("c{i}")).collect()
            }
        }
    }
}

/// One objective evaluation in the search trace.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TraceRow {
    pub eval_index: u64,
    pub params: Vec<f64>,
    pub q: f64,
    pub best_q: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MinimizeResult {
    pub best_q: f64,
    pub best_params: Vec<f64>,
    /// Lower bound (b/p)^p and the empirical gap best_q / bound.
    pub lower_bound: f64,
    pub gap: f64,
    pub trace: Vec<TraceRow>,
    pub evals: u64,
}

/// `Q(u) = int |(-Lap)^s u|^p |x|^(2sp - t - 2s) / int |u|^p |x|^(-t-2s)`,
/// both over the domain ball.
pub fn rayleigh_quotient(
    params: &FracParams,
    profile: &RadialProfile,
    domain: DomainBall,
    rel_tol: f64,
) -> Result<f64> {
    params.require_bounded_domain()?;
    if !(params.p > 1.0) {
        return Err(Error::Domain(format!("rayleigh quotient needs p > 1, got {}", params.p)));
    }
    if !domain.contains(profile) {
        return Err(Error::Domain("profile support exceeds the domain".into()));
    }
    let (n, s, theta, p) = (params.n, params.s, params.theta, params.p);
    let r_u = profile.support_radius();
    let den = weighted_lp_ball_pts(
        |rho| profile.value(rho),
        n,
        p,
        theta + 2.0 * s,
        &[0.0, r_u],
        rel_tol,
    )?;
    if !(den.value > 0.0) {
        return Err(Error::ZeroProfile);
    }

    let kern = AngularKernel::new(n, 2.0 * s, (0.01 * rel_tol).max(1e-13));
    let inner_tol = 0.1 * rel_tol;
    let w = theta + 2.0 * s - 2.0 * s * p;
    let e = n as f64 - 1.0 - w;
    let f = |rho: f64, _da: f64, _db: f64| {
        let fl = fraclap_radial_with(&kern, profile, n, s, rho, inner_tol)
            .expect("validated")
            .value;
        rho.powf(e) * fl.abs().powf(p)
    };
    let left = if e < 0.0 || e.fract() != 0.0 { e } else { 0.0 };
    let mut pts = vec![0.0, r_u];
    if domain.radius > r_u {
        pts.push(domain.radius);
    }
    let num = quad::integrate_singular_dist(f, &pts, left, 0.0, rel_tol)?
        .scale(specfun::sphere_area(n));
    Ok(num.value / den.value)
}

/// Derivative-free minimization of the Rayleigh quotient over the family.
///
/// One-parameter families use golden-section search; multi-parameter ones a
/// downhill simplex with one restart from the best point. Candidates inside
/// the search loop run at a relaxed quadrature tolerance; the reported
/// minimum is re-evaluated at 1e-10.
pub fn minimize(
    params: &FracParams,
    spec: &SearchSpec,
    domain: DomainBall,
) -> Result<MinimizeResult> {
    spec.validate(domain)?;
    let search_tol = 1e-7;
    struct SearchState {
        trace: Vec<TraceRow>,
        evals: u64,
        best: f64,
    }
    let mut st = SearchState { trace: Vec::new(), evals: 0, best: f64::INFINITY };

    let eval = |x: &[f64], st: &mut SearchState| -> Result<f64> {
        let profile = spec.profile_at(x)?;
        let q = match rayleigh_quotient(params, &profile, domain, search_tol) {
            Ok(q) => q,
            Err(Error::ZeroProfile) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        st.evals += 1;
        if q < st.best {
            st.best = q;
        }
        st.trace.push(TraceRow { eval_index: st.evals, params: x.to_vec(), q, best_q: st.best });
        Ok(q)
    };

    let best_params: Vec<f64> = match &spec.family {
        SearchFamily::BumpBeta { lo, hi, .. } => {
            let (mut a, mut b) = (*lo, *hi);
            const INV_PHI: f64 = 0.618_033_988_749_894_8;
            let mut x1 = b - INV_PHI * (b - a);
            let mut x2 = a + INV_PHI * (b - a);
            let mut f1 = eval(&[x1], &mut st)?;
            let mut f2 = eval(&[x2], &mut st)?;
            while (b - a) > spec.tolerance && st.evals + 1 < spec.budget {
                if f1 <= f2 {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - INV_PHI * (b - a);
                    f1 = eval(&[x1], &mut st)?;
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + INV_PHI * (b - a);
                    f2 = eval(&[x2], &mut st)?;
                }
            }
            if f1 <= f2 {
                vec![x1]
            } else {
                vec![x2]
            }
        }
        SearchFamily::Combo { lo, hi, .. } => {
            let dim = lo.len();
            let clamp = |x: &mut Vec<f64>| {
                for i in 0..dim {
                    x[i] = x[i].clamp(lo[i], hi[i]);
                }
            };
            let mid: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect();
            let mut start = mid.clone();
            let mut overall_best = (f64::INFINITY, mid.clone());
            for _restart in 0..2 {
                let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
                for i in 0..dim {
                    let mut v = start.clone();
                    v[i] += 0.25 * (hi[i] - lo[i]);
                    clamp(&mut v);
                    simplex.push(v);
                }
                let mut fv: Vec<f64> = Vec::new();
                for v in &simplex {
                    if st.evals >= spec.budget {
                        break;
                    }
                    fv.push(eval(v, &mut st)?);
                }
                while fv.len() < simplex.len() {
                    fv.push(f64::INFINITY);
                }
                while st.evals + 2 <= spec.budget {
                    // order ascending by objective
                    let mut idx: Vec<usize> = (0..simplex.len()).collect();
                    idx.sort_by(|&i, &j| fv[i].partial_cmp(&fv[j]).unwrap());
                    let ordered: Vec<Vec<f64>> =
                        idx.iter().map(|&i| simplex[i].clone()).collect();
                    let fo: Vec<f64> = idx.iter().map(|&i| fv[i]).collect();
                    simplex = ordered;
                    fv = fo;
                    let spread = fv[dim] - fv[0];
                    let size: f64 = (0..dim)
                        .map(|i| (simplex[dim][i] - simplex[0][i]).abs())
                        .fold(0.0, f64::max);
                    if spread.abs() < 1e-12 * fv[0].abs().max(1.0) || size < spec.tolerance {
                        break;
                    }
                    let centroid: Vec<f64> = (0..dim)
                        .map(|i| simplex[..dim].iter().map(|v| v[i]).sum::<f64>() / dim as f64)
                        .collect();
                    let mut refl: Vec<f64> = (0..dim)
                        .map(|i| centroid[i] + (centroid[i] - simplex[dim][i]))
                        .collect();
                    clamp(&mut refl);
                    let fr = eval(&refl, &mut st)?;
                    if fr < fv[0] {
                        let mut exp: Vec<f64> = (0..dim)
                            .map(|i| centroid[i] + 2.0 * (centroid[i] - simplex[dim][i]))
                            .collect();
                        clamp(&mut exp);
                        if st.evals >= spec.budget {
                            simplex[dim] = refl;
                            fv[dim] = fr;
                            continue;
                        }
                        let fe = eval(&exp, &mut st)?;
                        if fe < fr {
                            simplex[dim] = exp;
                            fv[dim] = fe;
                        } else {
                            simplex[dim] = refl;
                            fv[dim] = fr;
                        }
                    } else if fr < fv[dim - 1] {
                        simplex[dim] = refl;
                        fv[dim] = fr;
                    } else {
                        let mut con: Vec<f64> = (0..dim)
                            .map(|i| centroid[i] + 0.5 * (simplex[dim][i] - centroid[i]))
                            .collect();
                        clamp(&mut con);
                        if st.evals >= spec.budget {
                            break;
                        }
                        let fc = eval(&con, &mut st)?;
                        if fc < fv[dim] {
                            simplex[dim] = con;
                            fv[dim] = fc;
                        } else {
                            // shrink toward the best vertex
                            for k in 1..=dim {
                                for i in 0..dim {
                                    simplex[k][i] =
                                        simplex[0][i] + 0.5 * (simplex[k][i] - simplex[0][i]);
                                }
                                if st.evals >= spec.budget {
                                    break;
                                }
                                let v = simplex[k].clone();
                                fv[k] = eval(&v, &mut st)?;
                            }
                        }
                    }
                }
                // restart once from the best point found so far
                let arg = fv
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                if fv[arg] < overall_best.0 {
                    overall_best = (fv[arg], simplex[arg].clone());
                }
                start = overall_best.1.clone();
                if st.evals >= spec.budget {
                    break;
                }
            }
            overall_best.1
        }
    };

    if st.trace.is_empty() {
        return Err(Error::Infeasible);
    }
    // re-evaluate the reported minimum at the tight tolerance
    let final_profile = spec.profile_at(&best_params)?;
    let best_q = rayleigh_quotient(params, &final_profile, domain, 1e-10)?;
    let lower_bound = (specfun::lambda_closed(params.n, params.s, params.theta)? / params.p)
        .powf(params.p);
    Ok(MinimizeResult {
        best_q,
        best_params,
        lower_bound,
        gap: best_q / lower_bound,
        trace: st.trace,
        evals: st.evals,
    })
}

/// Search trace as CSV: eval_index, parameters..., Q, best_Q.
pub fn trace_csv(result: &MinimizeResult, param_names: &[String]) -> String {
    let mut out = String::from("eval_index");
    for name in param_names {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",Q,best_Q\n");
    for row in &result.trace {
        out.push_str(&row.eval_index.to_string());
        for p in &row.params {
            out.push_str(&format!(",{p:.16e}"));
        }
        out.push_str(&format!(",{:.16e},{:.16e}\n", row.q, row.best_q));
    }
    out
}
