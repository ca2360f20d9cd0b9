//! Command-line front end: constants, kernel samples, fractional-Laplacian
//! evaluations, limit tables, inequality verification and the sharpness
//! probe, with JSON/CSV reporting and parameter sweeps.
//!
//! Exit codes: 0 all verdicts hold / computation converged; 1 a verdict is
//! violated or convergence failed; 2 invalid parameters.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use frachardy::fraclap::{self, VtFamily};
use frachardy::kernels::{self, FracParams, KernelKind, KernelSample};
use frachardy::quad::DEFAULT_REL_TOL;
use frachardy::sharpness::{self, SearchFamily, SearchSpec};
use frachardy::specfun::{self, ConstantKind, ConstantReport};
use frachardy::testfns::{DomainBall, RadialProfile};
use frachardy::verify::{
    self, BIntegrationDomain, OperatorNormalization, PohozaevSpec, Verdict, VectorField,
};

#[derive(Parser)]
#[command(name = "frachardy", version, about = "Fractional Hardy-Rellich constants and checks")]
struct Cli {
    /// Relative quadrature tolerance (FRACHARDY_TOL overrides the 1e-10 default)
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    /// Worker threads for sweep grids (grid points only; each point stays sequential)
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and quadrature constants (comma lists sweep a grid)
    Constant {
        #[command(subcommand)]
        which: ConstantCmd,
    },
    /// Angular kernel sample psi_N(r)
    Psi {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        r: f64,
    },
    /// Angular kernel sample Phi_(N,s,p)(r)
    Phi {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
    },
    /// Fractional Laplacian evaluations
    Fraclap {
        #[command(subcommand)]
        which: FraclapCmd,
    },
    /// Convergence tables
    Limit {
        #[command(subcommand)]
        which: LimitCmd,
    },
    /// Inequality and identity checks
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Rayleigh-quotient minimization over a test-function family
    Sharpness(SharpnessArgs),
}

#[derive(Subcommand)]
enum ConstantCmd {
    /// Weight constant by quadrature, checked against its closed form
    B(GridNST),
    /// Gamma-ratio closed form of the weight constant
    Lambda(GridNST),
    /// Optimal whole-space constant of the (-Lap)^(s/2) inequality
    Herbst(GridNSP),
    /// Gagliardo-seminorm constant by quadrature (closed form at p = 2)
    Fs(GridNSP),
    /// Sharp constant of the classical weighted inequality
    Classical(GridNPT),
    /// s -> 1 limit of the weight constant
    S1limit(GridNT),
}

#[derive(Args)]
struct GridNST {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,
}

#[derive(Args)]
struct GridNSP {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    p: Vec<f64>,
}

#[derive(Args)]
struct GridNPT {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,
}

#[derive(Args)]
struct GridNT {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    n: Vec<u32>,
    #[arg(long, value_delimiter = ',', required = true)]
    theta: Vec<f64>,
}

#[derive(Subcommand)]
enum FraclapCmd {
    /// (-Lap)^s of (t^2 + |x|^2)^(-theta/2) at |x| = x
    Vt {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x: f64,
    },
    /// (-Lap)^s of a compactly supported radial profile at radius rho
    Radial {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        profile: String,
    },
    /// One-dimensional second-difference evaluator (the independent oracle)
    Line {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        profile: String,
    },
}

#[derive(Subcommand)]
enum LimitCmd {
    /// t -> 0 convergence of (-Lap)^s v_t toward the closed-form limit
    TZero {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 0.2)]
        t_start: f64,
        #[arg(long, default_value_t = 2.0)]
        t_factor: f64,
        #[arg(long, default_value_t = 7)]
        t_count: usize,
    },
    /// s -> 1 convergence of the closed-form constant toward its limit
    SOne {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        theta: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.95,0.975,0.9875")]
        s: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Bounded-domain inequality, p > 1
    HardyRellich(VerifyArgs),
    /// Bounded-domain inequality at p = 1 (non-negative profiles)
    P1(VerifyArgsNoP),
    /// Rearranged identity b A = B for the smoothed composite
    Pohozaev {
        #[command(flatten)]
        common: VerifyArgs,
        #[arg(long)]
        t: f64,
        /// Integration domain for the B side
        #[arg(long, value_enum, default_value_t = DomainMode::Full)]
        domain: DomainMode,
        #[arg(long, value_enum, default_value_t = Normalization::Factor2)]
        normalization: Normalization,
        /// Residual threshold for exit status
        #[arg(long, default_value_t = 1e-6)]
        residual_tol: f64,
    },
    /// Pointwise convexity-inequality margins at sampled radii
    Cordoba {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 50)]
        radii: usize,
    },
    /// Whole-space Hardy inequality on the line via the Gagliardo seminorm
    FsHardy1d {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        profile: String,
    },
    /// Three-term chain on (-1,1) for s < 1/4
    Remainder1d {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        profile: String,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 1.0)]
    domain_radius: f64,
}

#[derive(Args)]
struct VerifyArgsNoP {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 1.0)]
    domain_radius: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DomainMode {
    Omega,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Normalization {
    Factor1,
    Factor2,
}

#[derive(Args)]
struct SharpnessArgs {
    #[arg(long = "N")]
    n: u32,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    theta: f64,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Support radius of the candidates
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    domain_radius: f64,
    #[arg(long, default_value_t = 2.0)]
    beta_lo: f64,
    #[arg(long, default_value_t = 8.0)]
    beta_hi: f64,
    /// Fixed bump exponents for the combo family (switches family when set)
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    coeff_lo: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    coeff_hi: Option<Vec<f64>>,
    #[arg(long, default_value_t = 500)]
    budget: u64,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
}

fn rel_tol_of(cli: &Cli) -> f64 {
    cli.rel_tol
        .or_else(|| std::env::var("FRACHARDY_TOL").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_REL_TOL)
}

/// 17-significant-digit CSV cell.
fn csv_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn constants_csv(reports: &[ConstantReport]) -> String {
    let mut out = String::from("kind,N,s,theta,p,value,closed_form,rel_diff\n");
    for r in reports {
        let kind = serde_json::to_value(r.kind).unwrap();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            kind.as_str().unwrap(),
            r.params.n,
            csv_num(r.params.s),
            csv_num(r.params.theta),
            csv_num(r.params.p),
            csv_num(r.value),
            r.closed_form.map(csv_num).unwrap_or_default(),
            r.rel_diff.map(csv_num).unwrap_or_default(),
        ));
    }
    out
}

fn emit_constants(reports: Vec<ConstantReport>, output: Output) {
    match output {
        Output::Json => {
            if reports.len() == 1 {
                print_json(&reports[0]);
            } else {
                print_json(&reports);
            }
        }
        Output::Csv => print!("{}", constants_csv(&reports)),
    }
}

/// Evaluate a sweep grid in deterministic input order, optionally in
/// parallel across grid points.
fn run_grid<T, F>(points: Vec<T>, parallel: usize, f: F) -> Result<Vec<ConstantReport>, frachardy::Error>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<ConstantReport, frachardy::Error> + Sync,
{
    if parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallel)
            .build()
            .expect("thread pool");
        pool.install(|| points.par_iter().map(|p| f(p)).collect())
    } else {
        points.iter().map(|p| f(p)).collect()
    }
}

fn verdict_code(v: Verdict) -> ExitCode {
    match v {
        Verdict::Holds | Verdict::HoldsWithinMargin => ExitCode::SUCCESS,
        Verdict::Violated => ExitCode::from(1),
    }
}

fn run(cli: &Cli) -> Result<ExitCode, frachardy::Error> {
    let tol = rel_tol_of(cli);
    match &cli.command {
        Command::Constant { which } => {
            let reports = match which {
                ConstantCmd::B(g) => {
                    let mut pts = Vec::new();
                    for &n in &g.n {
                        for &s in &g.s {
                            for &theta in &g.theta {
                                pts.push((n, s, theta));
                            }
                        }
                    }
                    run_grid(pts, cli.parallel, |&(n, s, theta)| {
                        let params = FracParams::new(n, s, theta, 2.0)?;
                        kernels::b_constant(&params, tol)
                    })?
                }
                ConstantCmd::Lambda(g) => {
                    let mut pts = Vec::new();
                    for &n in &g.n {
                        for &s in &g.s {
                            for &theta in &g.theta {
                                pts.push((n, s, theta));
                            }
                        }
                    }
                    run_grid(pts, cli.parallel, |&(n, s, theta)| {
                        let value = specfun::lambda_closed(n, s, theta)?;
                        let params = FracParams::new(n, s, theta, 2.0)?;
                        Ok(ConstantReport::new(ConstantKind::LambdaClosed, params, value, None))
                    })?
                }
                ConstantCmd::Herbst(g) => {
                    let mut pts = Vec::new();
                    for &n in &g.n {
                        for &s in &g.s {
                            for &p in &g.p {
                                pts.push((n, s, p));
                            }
                        }
                    }
                    run_grid(pts, cli.parallel, |&(n, s, p)| {
                        let value = specfun::herbst_constant(n, s, p)?;
                        let params = FracParams { n, s, theta: 0.0, p };
                        Ok(ConstantReport::new(ConstantKind::Herbst, params, value, None))
                    })?
                }
                ConstantCmd::Fs(g) => {
                    let mut pts = Vec::new();
                    for &n in &g.n {
                        for &s in &g.s {
                            for &p in &g.p {
                                pts.push((n, s, p));
                            }
                        }
                    }
                    run_grid(pts, cli.parallel, |&(n, s, p)| kernels::fs_constant(n, s, p, tol))?
                }
                ConstantCmd::Classical(g) => {
                    let mut pts = Vec::new();
                    for &n in &g.n {
                        for &p in &g.p {
                            for &theta in &g.theta {
                                pts.push((n, p, theta));
                            }
                        }
                    }
                    run_grid(pts, cli.parallel, |&(n, p, theta)| {
                        let value = specfun::classical_rellich_constant(n, p, theta)?;
                        let params = FracParams { n, s: 0.5, theta, p };
                        Ok(ConstantReport::new(
                            ConstantKind::ClassicalRellich,
                            params,
                            value,
                            None,
                        ))
                    })?
                }
                ConstantCmd::S1limit(g) => {
                    let mut pts = Vec::new();
                    for &n in &g.n {
                        for &theta in &g.theta {
                            pts.push((n, theta));
                        }
                    }
                    run_grid(pts, cli.parallel, |&(n, theta)| {
                        let value = specfun::b_limit_s1(n, theta)?;
                        let params = FracParams { n, s: 0.5, theta, p: 2.0 };
                        Ok(ConstantReport::new(ConstantKind::S1Limit, params, value, None))
                    })?
                }
            };
            emit_constants(reports, cli.output);
            Ok(ExitCode::SUCCESS)
        }

        Command::Psi { n, s, r } => {
            let value = kernels::psi(*n, *s, *r)?;
            print_json(&KernelSample { r: *r, value, kind: KernelKind::Psi });
            Ok(ExitCode::SUCCESS)
        }

        Command::Phi { n, s, p, r } => {
            let value = kernels::phi_fs(*n, *s, *p, *r)?;
            print_json(&KernelSample { r: *r, value, kind: KernelKind::PhiFs });
            Ok(ExitCode::SUCCESS)
        }

        Command::Fraclap { which } => {
            #[derive(serde::Serialize)]
            struct FraclapOut {
                value: f64,
                abs_err: f64,
                evals: u64,
            }
            let out = match which {
                FraclapCmd::Vt { n, s, theta, t, x } => {
                    let params = FracParams::new(*n, *s, *theta, 2.0)?;
                    let fam = VtFamily::new(params, *t)?;
                    let e = fraclap::fraclap_vt_full(&fam, *x, tol)?;
                    FraclapOut { value: e.value, abs_err: e.abs_err, evals: e.evals }
                }
                FraclapCmd::Radial { n, s, rho, profile } => {
                    let prof = RadialProfile::parse(profile)?;
                    let kern = frachardy::kernels::AngularKernel::new(*n, 2.0 * s, 0.1 * tol);
                    let e = fraclap::fraclap_radial_with(&kern, &prof, *n, *s, *rho, tol)?;
                    FraclapOut { value: e.value, abs_err: e.abs_err, evals: e.evals }
                }
                FraclapCmd::Line { s, x, profile } => {
                    let prof = RadialProfile::parse(profile)?;
                    use frachardy::testfns::RadialC2;
                    let support = prof.support_radius();
                    let e = fraclap::fraclap_line_full(
                        move |y: f64| prof.value(y.abs()),
                        support,
                        *s,
                        *x,
                        tol,
                    )?;
                    FraclapOut { value: e.value, abs_err: e.abs_err, evals: e.evals }
                }
            };
            print_json(&out);
            Ok(ExitCode::SUCCESS)
        }

        Command::Limit { which } => match which {
            LimitCmd::TZero { n, s, theta, x, t_start, t_factor, t_count } => {
                let params = FracParams::new(*n, *s, *theta, 2.0)?;
                let ts: Vec<f64> =
                    (0..*t_count).map(|k| t_start / t_factor.powi(k as i32)).collect();
                let table = fraclap::limit_t_zero(&params, *x, &ts, tol)?;
                match cli.output {
                    Output::Json => print_json(&table),
                    Output::Csv => {
                        println!("t,value,error");
                        for row in &table.rows {
                            println!(
                                "{},{},{}",
                                csv_num(row.t),
                                csv_num(row.value),
                                csv_num(row.error)
                            );
                        }
                    }
                }
                if table.errors_nonincreasing {
                    Ok(ExitCode::SUCCESS)
                } else {
                    Ok(ExitCode::from(1))
                }
            }
            LimitCmd::SOne { n, theta, s } => {
                #[derive(serde::Serialize)]
                struct SOneRow {
                    s: f64,
                    lambda: f64,
                    limit: f64,
                    error: f64,
                }
                let limit = specfun::b_limit_s1(*n, *theta)?;
                let mut rows = Vec::new();
                for &sv in s {
                    let lambda = specfun::lambda_closed(*n, sv, *theta)?;
                    rows.push(SOneRow { s: sv, lambda, limit, error: (lambda - limit).abs() });
                }
                let decreasing = rows.windows(2).all(|w| w[1].error <= w[0].error);
                match cli.output {
                    Output::Json => print_json(&rows),
                    Output::Csv => {
                        println!("s,lambda,limit,error");
                        for r in &rows {
                            println!(
                                "{},{},{},{}",
                                csv_num(r.s),
                                csv_num(r.lambda),
                                csv_num(r.limit),
                                csv_num(r.error)
                            );
                        }
                    }
                }
                Ok(if decreasing { ExitCode::SUCCESS } else { ExitCode::from(1) })
            }
        },

        Command::Verify { which } => match which {
            VerifyCmd::HardyRellich(a) => {
                let params = FracParams::new(a.n, a.s, a.theta, a.p)?;
                let profile = RadialProfile::parse(&a.profile)?;
                let domain = DomainBall::new(a.domain_radius)?;
                let rep = verify::check_hardy_rellich(&params, &profile, domain, tol)?;
                print_json(&rep);
                Ok(verdict_code(rep.verdict))
            }
            VerifyCmd::P1(a) => {
                let params = FracParams::new(a.n, a.s, a.theta, 1.0)?;
                let profile = RadialProfile::parse(&a.profile)?;
                let domain = DomainBall::new(a.domain_radius)?;
                let rep = verify::check_hardy_rellich_p1(&params, &profile, domain, tol)?;
                print_json(&rep);
                Ok(verdict_code(rep.verdict))
            }
            VerifyCmd::Pohozaev { common, t, domain, normalization, residual_tol } => {
                let params = FracParams::new(common.n, common.s, common.theta, common.p)?;
                let profile = RadialProfile::parse(&common.profile)?;
                let ball = DomainBall::new(common.domain_radius)?;
                let spec = PohozaevSpec {
                    vector_field: VectorField::Identity,
                    operator_normalization: match normalization {
                        Normalization::Factor1 => OperatorNormalization::Factor1,
                        Normalization::Factor2 => OperatorNormalization::Factor2,
                    },
                    integration_domain_for_b: match domain {
                        DomainMode::Omega => BIntegrationDomain::Omega,
                        DomainMode::Full => BIntegrationDomain::FullSpaceTruncated,
                    },
                };
                let rep = verify::check_pohozaev_id(&params, &profile, *t, spec, ball, tol)?;
                print_json(&rep);
                Ok(if rep.residual <= *residual_tol {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
            VerifyCmd::Cordoba { n, s, p, t, profile, radii } => {
                let prof = RadialProfile::parse(profile)?;
                use frachardy::testfns::RadialC2;
                let r = prof.support_radius();
                let sample: Vec<f64> =
                    (0..*radii).map(|i| r * 0.98 * i as f64 / (*radii as f64 - 1.0).max(1.0)).collect();
                let rep = verify::check_cordoba(&prof, *n, *s, *t, *p, &sample, tol)?;
                print_json(&rep);
                Ok(if rep.worst_normalized >= -1e-8 {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
            VerifyCmd::FsHardy1d { s, p, profile } => {
                let prof = RadialProfile::parse(profile)?;
                let rep = verify::check_fs_hardy_1d(&prof, *s, *p, tol)?;
                print_json(&rep);
                Ok(verdict_code(rep.verdict))
            }
            VerifyCmd::Remainder1d { s, profile } => {
                let prof = RadialProfile::parse(profile)?;
                let rep = verify::check_remainder_1d(*s, &prof, tol)?;
                print_json(&rep);
                let ok = rep.verdict_l1_le_m != Verdict::Violated
                    && rep.verdict_m_le_rg != Verdict::Violated;
                Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
            }
        },

        Command::Sharpness(a) => {
            let params = FracParams::new(a.n, a.s, a.theta, a.p)?;
            let domain = DomainBall::new(a.domain_radius)?;
            let family = match (&a.betas, &a.coeff_lo, &a.coeff_hi) {
                (Some(betas), Some(lo), Some(hi)) => SearchFamily::Combo {
                    betas: betas.clone(),
                    radius: a.radius,
                    lo: lo.clone(),
                    hi: hi.clone(),
                },
                (None, None, None) => {
                    SearchFamily::BumpBeta { radius: a.radius, lo: a.beta_lo, hi: a.beta_hi }
                }
                _ => {
                    return Err(frachardy::Error::Domain(
                        "combo family needs --betas, --coeff-lo and --coeff-hi together".into(),
                    ))
                }
            };
            let spec = SearchSpec { family, budget: a.budget, tolerance: a.tolerance };
            let names = spec.param_names();
            let result = sharpness::minimize(&params, &spec, domain)?;
            match cli.output {
                Output::Json => print_json(&result),
                Output::Csv => print!("{}", sharpness::trace_csv(&result, &names)),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
