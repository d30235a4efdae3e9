//! Subcommand implementations and the exit-code contract:
//! 0 = all verdicts pass, 1 = a verdict failed, 2 = configuration error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use gauss_psh_core::calculus::FdStep;
use gauss_psh_core::field::{Growth, ScalarField, Symmetry};
use gauss_psh_core::inequality::{
    correlation_gap, correlation_gap_unchecked, hessian_discrepancy_demo, lieb_check,
    moment_product_report, moment_split_report, random_psd, GapMethod,
};
use gauss_psh_core::operators::{eigen_residual, ibp_residual, operator_field, OperatorKind};
use gauss_psh_core::poly::make_field;
use gauss_psh_core::sampling::McConfig;
use gauss_psh_core::semigroup::{
    circular_kernel_average, compose_check, hermitian_symmetry_residual, pt_apply,
    pt_exp_linear_closed_form, KernelKind, SemigroupTime,
};
use gauss_psh_core::{ComplexPoint, QuadratureGrid};

use crate::audit;
use crate::report::{alpha_curve_csv, alpha_curve_json, inequality_json, Report};
use crate::schema::{CovarianceDto, LogPshDto};
use crate::selftest::{self, SelftestConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gauss-psh-lab",
    version,
    about = "Correlation and moment inequality experiments for complex Gaussian measures"
)]
pub struct Cli {
    /// Worker-thread cap (default: available cores). Results never depend
    /// on the thread count.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test ∫fg dγ ≥ ∫f dγ ∫g dγ for log-psh product fields from JSON files.
    Correlate(CorrelateArgs),
    /// Split-moment inequality for a covariance-specified Gaussian vector.
    Moments(MomentsArgs),
    /// Permanent inequality audit for PSD Hermitian matrices.
    Lieb(LiebArgs),
    /// Sample the flow α(t) and check its monotonicity and convexity.
    Alpha(AlphaArgs),
    /// Kernel identities: composition, circular averages, closed forms.
    SemigroupCheck(SemigroupCheckArgs),
    /// Integration by parts, generator split, commutation with P_t.
    OperatorCheck(OperatorCheckArgs),
    /// Eigenfunction witnesses and ladder relations.
    SpectrumCheck(SpectrumCheckArgs),
    /// The real-vs-complex Hessian trace discrepancy demo.
    Discrepancy(DiscrepancyArgs),
    /// Reduced invariant suites for every module.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// JSON file with the circular-symmetric log-psh product f.
    #[arg(long)]
    pub f: PathBuf,
    /// JSON file with the log-psh product g.
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long, default_value = "grid")]
    pub method: MethodArg,
    /// Nodes per axis for the grid method.
    #[arg(long, default_value_t = 24)]
    pub m: usize,
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub batches: usize,
    /// Run even if f is not circular-symmetric (out-of-hypothesis).
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Grid,
    Mc,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// JSON covariance spec ({"rows": [[{"re":..,"im":..}, ..], ..]}).
    #[arg(long)]
    pub cov: PathBuf,
    /// Comma-separated exponents, e.g. 2,2.
    #[arg(long)]
    pub alpha: String,
    /// Split index k (1 ≤ k ≤ N-1).
    #[arg(long)]
    pub split: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub batches: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiebArgs {
    /// JSON covariance spec; its Gram matrix is audited.
    #[arg(long, conflicts_with = "random_dim")]
    pub cov: Option<PathBuf>,
    /// Audit random PSD matrices of this dimension instead.
    #[arg(long)]
    pub random_dim: Option<usize>,
    /// Number of random matrices.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Specific split (default: every split).
    #[arg(long)]
    pub split: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    #[arg(long, default_value_t = 0.05)]
    pub t_min: f64,
    #[arg(long, default_value_t = 40.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 24)]
    pub t_points: usize,
    /// Write the curve as CSV (t, alpha, d1, d2) here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SemigroupCheckArgs {
    #[arg(long, default_value_t = 80)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OperatorCheckArgs {
    /// Number of random commutation configurations.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumCheckArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiscrepancyArgs {
    /// Real evaluation points |z| for the demo.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 8.0])]
    pub z: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Run only one suite (calculus, measure, fields, semigroups,
    /// operators, inequality).
    #[arg(long)]
    pub filter: Option<String>,
    /// Corrupt a component on purpose; the suites must catch it.
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command line to completion and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(threads) = cli.threads {
        // ignore failure: the global pool can only be set once (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let started = Instant::now();
    let outcome = match cli.command {
        Command::Correlate(a) => correlate(a),
        Command::Moments(a) => moments(a),
        Command::Lieb(a) => lieb(a),
        Command::Alpha(a) => alpha(a),
        Command::SemigroupCheck(a) => semigroup_check(a),
        Command::OperatorCheck(a) => operator_check(a),
        Command::SpectrumCheck(a) => spectrum_check(a),
        Command::Discrepancy(a) => discrepancy(a),
        Command::Selftest(a) => selftest_cmd(a),
    };
    match outcome {
        Ok((mut report, out)) => {
            report.wall_time_ms = started.elapsed().as_millis();
            if let Err(e) = report.write(out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return EXIT_CONFIG;
            }
            if report.passed() {
                EXIT_OK
            } else {
                for v in report.verdicts.iter().filter(|v| !v.pass) {
                    eprintln!("FAIL {}: {}", v.name, v.detail);
                }
                EXIT_VERDICT
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
    }
}

type CmdResult = Result<(Report, Option<PathBuf>), String>;

fn load_field(path: &PathBuf) -> Result<ScalarField, String> {
    Ok(make_field(&LogPshDto::load(path)?))
}

fn correlate(args: CorrelateArgs) -> CmdResult {
    let f = load_field(&args.f)?;
    let g = load_field(&args.g)?;
    let in_hypothesis = f.is_circular();
    if !in_hypothesis && !args.force {
        return Err(
            "f is not circular-symmetric; the correlation inequality requires it \
             (pass --force for an exploratory out-of-hypothesis run)"
                .into(),
        );
    }
    let method = match args.method {
        MethodArg::Grid => GapMethod::Grid { m: args.m },
        MethodArg::Mc => GapMethod::Mc {
            cfg: McConfig::new(args.samples, args.seed, args.batches).map_err(|e| e.to_string())?,
        },
    };
    let report_data = if in_hypothesis {
        correlation_gap(&f, &g, method)
    } else {
        correlation_gap_unchecked(&f, &g, method)
    }
    .map_err(|e| e.to_string())?;

    let mut report = Report::new(
        "correlate",
        json!({
            "f": args.f, "g": args.g,
            "method": format!("{:?}", args.method).to_lowercase(),
            "m": args.m, "samples": args.samples, "seed": args.seed,
            "batches": args.batches, "force": args.force,
        }),
        Some(args.seed),
    );
    report.results = json!({
        "hypothesis": if in_hypothesis { "circular" } else { "out-of-hypothesis" },
        "report": inequality_json(&report_data),
    });
    let name =
        if in_hypothesis { "correlation".to_string() } else { "correlation (out-of-hypothesis)".to_string() };
    report.verdict(
        &name,
        report_data.verdict != gauss_psh_core::Verdict::Violated,
        format!("margin {} ({})", report_data.margin, crate::report::verdict_str(report_data.verdict)),
    );
    Ok((report, args.out))
}

fn parse_alpha_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad exponent '{s}': {e}")))
        .collect()
}

fn moments(args: MomentsArgs) -> CmdResult {
    let spec = CovarianceDto::load(&args.cov)?;
    let alpha = parse_alpha_list(&args.alpha)?;
    let cfg = McConfig::new(args.samples, args.seed, args.batches).map_err(|e| e.to_string())?;
    let split = moment_split_report(&spec, &alpha, args.split, &cfg).map_err(|e| e.to_string())?;
    let product = moment_product_report(&spec, &alpha, &cfg).map_err(|e| e.to_string())?;

    let mut report = Report::new(
        "moments",
        json!({
            "cov": args.cov, "alpha": alpha, "split": args.split,
            "samples": args.samples, "seed": args.seed, "batches": args.batches,
        }),
        Some(args.seed),
    );
    report.results = json!({
        "split": inequality_json(&split),
        "product_bound": inequality_json(&product),
    });
    report.verdict(
        "split-moment",
        split.verdict != gauss_psh_core::Verdict::Violated,
        format!("margin {}", split.margin),
    );
    report.verdict(
        "product-bound",
        product.verdict != gauss_psh_core::Verdict::Violated,
        format!("margin {}", product.margin),
    );
    Ok((report, args.out))
}

fn lieb(args: LiebArgs) -> CmdResult {
    let matrices = match (&args.cov, args.random_dim) {
        (Some(path), None) => vec![CovarianceDto::load(path)?.covariance()],
        (None, Some(dim)) => {
            if !(2..=gauss_psh_core::inequality::LIEB_DIM_BUDGET).contains(&dim) {
                return Err(format!(
                    "random dimension must be in 2..={}",
                    gauss_psh_core::inequality::LIEB_DIM_BUDGET
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..args.count).map(|_| random_psd(dim, &mut rng)).collect()
        }
        _ => return Err("pass exactly one of --cov or --random-dim".into()),
    };
    let mut results = Vec::new();
    let mut min_margin = f64::INFINITY;
    for (i, c) in matrices.iter().enumerate() {
        let splits: Vec<usize> = match args.split {
            Some(k) => vec![k],
            None => (1..c.dim()).collect(),
        };
        for k in splits {
            let r = lieb_check(c, k).map_err(|e| e.to_string())?;
            min_margin = min_margin.min(r.margin);
            results.push(json!({
                "matrix": i, "dim": c.dim(), "split": k,
                "report": inequality_json(&r),
            }));
        }
    }
    let mut report = Report::new(
        "lieb",
        json!({
            "cov": args.cov, "random_dim": args.random_dim,
            "count": args.count, "split": args.split, "seed": args.seed,
        }),
        Some(args.seed),
    );
    report.results = json!({ "checks": results });
    report.verdict(
        "permanent-margins",
        min_margin >= -1e-9,
        format!("min margin {min_margin:.3e} over all splits (tol -1e-9)"),
    );
    Ok((report, args.out))
}

fn alpha(args: AlphaArgs) -> CmdResult {
    let f = load_field(&args.f)?;
    let g = load_field(&args.g)?;
    if !f.is_circular() {
        return Err("f must be circular-symmetric for the flow audit".into());
    }
    if args.t_points < 3 || !(args.t_min > 0.0) || args.t_max <= args.t_min {
        return Err("need t_points >= 3 and 0 < t_min < t_max".into());
    }
    let ts = gauss_psh_core::alpha::geometric_t_grid(args.t_min, args.t_max, args.t_points);
    let (shape, curve) =
        audit::alpha_audit_pair(&f, &g, args.m, &ts).map_err(|e| e.to_string())?;

    if let Some(csv_path) = &args.csv {
        std::fs::write(csv_path, alpha_curve_csv(&curve))
            .map_err(|e| format!("cannot write {}: {e}", csv_path.display()))?;
    }
    let mut report = Report::new(
        "alpha",
        json!({
            "f": args.f, "g": args.g, "m": args.m,
            "t_min": args.t_min, "t_max": args.t_max, "t_points": args.t_points,
            "csv": args.csv,
        }),
        None,
    );
    report.results = json!({
        "curve": alpha_curve_json(&curve),
        "max_first_diff": shape.max_first_diff,
        "min_d2": shape.min_d2,
        "max_cross_residual": shape.max_cross,
        "limit_gap": shape.limit_gap,
        "prime_gap": shape.prime_gap,
        "tolerance": shape.tol,
    });
    report.verdict(
        "monotone-decreasing",
        shape.max_first_diff <= shape.tol,
        format!("max Δα = {:.3e} (tol {:.1e})", shape.max_first_diff, shape.tol),
    );
    report.verdict(
        "convex",
        shape.min_d2 >= -shape.tol,
        format!("min d2 = {:.3e} (tol -{:.1e})", shape.min_d2, shape.tol),
    );
    report.verdict(
        "path-equality",
        shape.max_cross < 1e-6,
        format!("max |α_ou - α_pt| = {:.3e} (tol 1e-6)", shape.max_cross),
    );
    report.verdict(
        "limit",
        shape.limit_gap < 1e-6,
        format!("|α(t_max) - ∫f∫g| = {:.3e} (tol 1e-6)", shape.limit_gap),
    );
    report.verdict(
        "prime-two-ways",
        shape.prime_gap < 1e-4,
        format!("|α'_fd - α'_int| = {:.3e} (tol 1e-4)", shape.prime_gap),
    );
    Ok((report, args.out))
}

fn rand_unit_point(rng: &mut ChaCha8Rng) -> ComplexPoint {
    let z = Complex64::new(
        rand::Rng::random::<f64>(rng) * 2.0 - 1.0,
        rand::Rng::random::<f64>(rng) * 2.0 - 1.0,
    );
    ComplexPoint::scalar(z / z.norm().max(1.0))
}

fn semigroup_check(args: SemigroupCheckArgs) -> CmdResult {
    let grid = QuadratureGrid::build(1, args.m).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);

    // composition over the (t, s) sweep
    let mut max_compose = 0.0f64;
    for &t in &[0.3, 0.5, 0.7] {
        for &s in &[0.3, 0.5, 0.7] {
            let xi = rand_unit_point(&mut rng);
            let w = rand_unit_point(&mut rng);
            let r = compose_check(
                SemigroupTime::new(t).map_err(|e| e.to_string())?,
                SemigroupTime::new(s).map_err(|e| e.to_string())?,
                &xi,
                &w,
                &grid,
            )
            .map_err(|e| e.to_string())?;
            max_compose = max_compose.max(r);
        }
    }

    // circular kernel averages
    let mut max_average = 0.0f64;
    for _ in 0..10 {
        let t = SemigroupTime::new(0.3 + rand::Rng::random::<f64>(&mut rng) * 1.5)
            .map_err(|e| e.to_string())?;
        let z = rand_unit_point(&mut rng);
        let w = rand_unit_point(&mut rng);
        let (lhs, rhs) = circular_kernel_average(t, &z, &w, 256).map_err(|e| e.to_string())?;
        max_average = max_average.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
    }

    // P_t on the exponential family vs the closed form
    let pt_grid = QuadratureGrid::build(1, 40).map_err(|e| e.to_string())?;
    let mut max_family = 0.0f64;
    for &a in &[0.25, 0.5, 1.0] {
        for &t in &[0.5, 1.0, 2.0] {
            let time = SemigroupTime::new(t).map_err(|e| e.to_string())?;
            let z = rand_unit_point(&mut rng);
            let got = pt_apply(&ScalarField::exp_linear(a), time, &z, &pt_grid)
                .map_err(|e| e.to_string())?;
            let want = pt_exp_linear_closed_form(a, time, z.coords()[0]);
            max_family = max_family.max((got - want).norm() / want.norm());
        }
    }

    // γ-weighted Hermitian symmetry of both kernels
    let mut max_symmetry = 0.0f64;
    for _ in 0..100 {
        let t = SemigroupTime::new(0.2 + rand::Rng::random::<f64>(&mut rng) * 2.0)
            .map_err(|e| e.to_string())?;
        let z = rand_unit_point(&mut rng);
        let w = rand_unit_point(&mut rng);
        for kind in [KernelKind::Dbar, KernelKind::Ou] {
            max_symmetry = max_symmetry
                .max(hermitian_symmetry_residual(kind, t, &z, &w).map_err(|e| e.to_string())?);
        }
    }

    let mut report = Report::new(
        "semigroup-check",
        json!({"m": args.m, "seed": args.seed}),
        Some(args.seed),
    );
    report.results = json!({
        "max_compose_residual": max_compose,
        "max_circular_average_residual": max_average,
        "max_exp_family_residual": max_family,
        "max_kernel_symmetry_residual": max_symmetry,
    });
    report.verdict(
        "composition",
        max_compose < 1e-6,
        format!("max residual {max_compose:.3e} (tol 1e-6)"),
    );
    report.verdict(
        "circular-average",
        max_average < 1e-8,
        format!("max residual {max_average:.3e} (tol 1e-8)"),
    );
    report.verdict(
        "exp-family-closed-form",
        max_family < 1e-8,
        format!("max residual {max_family:.3e} (tol 1e-8)"),
    );
    report.verdict(
        "kernel-hermitian-symmetry",
        max_symmetry < 1e-12,
        format!("max residual {max_symmetry:.3e} (tol 1e-12)"),
    );
    Ok((report, args.out))
}

fn operator_check(args: OperatorCheckArgs) -> CmdResult {
    let step = FdStep::new(args.step).map_err(|e| e.to_string())?;
    let grid = QuadratureGrid::build(1, 20).map_err(|e| e.to_string())?;

    let f2 = ScalarField::abs_power(1, 2.0);
    let f4 = ScalarField::abs_power(1, 4.0);
    let max_ibp = ibp_residual(&f2, &f2, &grid, step)
        .and_then(|a| Ok(a.max(ibp_residual(&f4, &f2, &grid, step)?)))
        .map_err(|e| e.to_string())?;

    let mut max_split = 0.0f64;
    for f in [&f2, &f4] {
        for z in [
            ComplexPoint::scalar(Complex64::new(0.7, -0.2)),
            ComplexPoint::scalar(Complex64::new(-0.4, 0.9)),
        ] {
            max_split = max_split.max(
                gauss_psh_core::operators::split_residual(f, &z, step).map_err(|e| e.to_string())?,
            );
        }
    }

    let comm =
        audit::commutation_audit(args.count, args.seed, args.step).map_err(|e| e.to_string())?;

    let lf = operator_field(OperatorKind::L, &f2, step);
    let nonpos = grid
        .integrate_fn(|z| lf.eval(z) * f2.eval(z).conj())
        .map_err(|e| e.to_string())?
        .re;

    let mut report = Report::new(
        "operator-check",
        json!({"count": args.count, "seed": args.seed, "step": args.step}),
        Some(args.seed),
    );
    report.results = json!({
        "max_ibp_residual": max_ibp,
        "max_split_residual": max_split,
        "max_commutation_residual": comm.max_residual,
        "median_halving_factor": comm.median_halving_factor,
        "dirichlet_form_value": nonpos,
    });
    report.verdict("integration-by-parts", max_ibp < 1e-6, format!("max residual {max_ibp:.3e}"));
    report.verdict("generator-split", max_split < 1e-7, format!("max residual {max_split:.3e}"));
    report.verdict(
        "commutation",
        comm.max_residual < 1e-5,
        format!("max residual {:.3e} over {} configs", comm.max_residual, comm.instances),
    );
    report.verdict(
        "commutation-convergence",
        (3.5..=4.5).contains(&comm.median_halving_factor),
        format!("median halving factor {:.3} (want [3.5, 4.5])", comm.median_halving_factor),
    );
    report.verdict("nonpositivity", nonpos <= 1e-8, format!("∫(Lf)f̄ dγ = {nonpos:.3e}"));
    Ok((report, args.out))
}

fn spectrum_check(args: SpectrumCheckArgs) -> CmdResult {
    let step = FdStep::default();
    let pts: Vec<ComplexPoint> = [(0.5, 0.0), (1.0, 1.0), (-0.3, 0.8), (0.2, -1.1)]
        .iter()
        .map(|&(re, im)| ComplexPoint::scalar(Complex64::new(re, im)))
        .collect();
    let conj_field =
        ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| z.coords()[0].conj());
    let radial = ScalarField::new(1, Growth::Polynomial, Symmetry::Circular, |z| {
        Complex64::new(z.coords()[0].norm_sqr() - 1.0, 0.0)
    });

    let witnesses = [
        ("conj_z under -L (λ=1)", eigen_residual(&conj_field, OperatorKind::L, Complex64::ONE, &pts, step)),
        ("conj_z under -Λ (λ=1/2)", eigen_residual(&conj_field, OperatorKind::Ou, Complex64::new(0.5, 0.0), &pts, step)),
        ("|z|²-1 under -L (λ=1)", eigen_residual(&radial, OperatorKind::L, Complex64::ONE, &pts, step)),
        ("|z|²-1 under -Λ (λ=1)", eigen_residual(&radial, OperatorKind::Ou, Complex64::ONE, &pts, step)),
    ];

    // ladder relations and the canonical commutator on a degree-3 witness
    let step3 = FdStep::new(1e-3).map_err(|e| e.to_string())?;
    let bf = operator_field(OperatorKind::Creation(0), &conj_field, step3);
    let ladder_up =
        eigen_residual(&bf, OperatorKind::L, Complex64::new(2.0, 0.0), &pts, step3)
            .map_err(|e| e.to_string())?;
    let af = operator_field(OperatorKind::Annihilation(0), &conj_field, step3);
    let ladder_down = eigen_residual(&af, OperatorKind::L, Complex64::ZERO, &pts, step3)
        .map_err(|e| e.to_string())?;
    let sq = ScalarField::new(1, Growth::Polynomial, Symmetry::Unknown, |z| {
        z.coords()[0] * z.coords()[0]
    });
    let ab = operator_field(OperatorKind::Annihilation(0), &operator_field(OperatorKind::Creation(0), &sq, step3), step3);
    let ba = operator_field(OperatorKind::Creation(0), &operator_field(OperatorKind::Annihilation(0), &sq, step3), step3);
    let z0 = ComplexPoint::scalar(Complex64::new(0.4, -0.6));
    let commutator = ((ab.eval(&z0) - ba.eval(&z0)) - sq.eval(&z0)).norm();

    let mut report = Report::new("spectrum-check", json!({}), None);
    let mut results = Vec::new();
    let mut max_witness = 0.0f64;
    for (name, res) in witnesses {
        let r = res.map_err(|e| e.to_string())?;
        max_witness = max_witness.max(r);
        results.push(json!({"witness": name, "residual": r}));
    }
    report.results = json!({
        "witnesses": results,
        "ladder_up": ladder_up,
        "ladder_down": ladder_down,
        "commutator": commutator,
    });
    report.verdict(
        "eigen-witnesses",
        max_witness < 1e-6,
        format!("max residual {max_witness:.3e} (tol 1e-6)"),
    );
    report.verdict(
        "ladder",
        ladder_up < 1e-5 && ladder_down < 1e-5,
        format!("up {ladder_up:.3e}, down {ladder_down:.3e} (tol 1e-5)"),
    );
    report.verdict("commutator", commutator < 1e-5, format!("|[a,b]f - f| = {commutator:.3e}"));
    Ok((report, args.out))
}

fn discrepancy(args: DiscrepancyArgs) -> CmdResult {
    let step = FdStep::default();
    let mut results = Vec::new();
    let mut pass = true;
    let mut details = Vec::new();
    for &x in &args.z {
        if !(x > 0.0) {
            return Err("evaluation points must be positive reals".into());
        }
        let z = ComplexPoint::scalar(Complex64::new(x, 0.0));
        let (complex_trace, real_trace) =
            hessian_discrepancy_demo(&z, step).map_err(|e| e.to_string())?;
        let expected = -4.0 / 3.0 * x.powf(1.0 / 3.0);
        let err = (real_trace - expected).abs();
        pass &= complex_trace >= 0.0 && err < 1e-3;
        details.push(format!("z={x}: real {real_trace:.5} (want {expected:.5}), complex {complex_trace:.5}"));
        results.push(json!({
            "z": x,
            "real_trace": real_trace,
            "real_trace_expected": expected,
            "complex_trace": complex_trace,
        }));
    }
    let mut report = Report::new("discrepancy", json!({"z": args.z}), None);
    report.results = json!({"points": results});
    report.verdict("hessian-discrepancy", pass, details.join("; "));
    Ok((report, args.out))
}

fn selftest_cmd(args: SelftestArgs) -> CmdResult {
    let config = SelftestConfig {
        seed: args.seed,
        filter: args.filter.clone(),
        inject_fault: args.inject_fault.clone(),
    };
    let outcomes = selftest::run(&config)?;
    print!("{}", selftest::render_table(&outcomes));
    let mut report = Report::new(
        "selftest",
        json!({"seed": args.seed, "filter": args.filter, "inject_fault": args.inject_fault}),
        Some(args.seed),
    );
    report.results = json!({
        "checks": outcomes
            .iter()
            .map(|o| json!({"suite": o.suite, "check": o.name, "pass": o.pass, "detail": o.detail}))
            .collect::<Vec<_>>(),
    });
    for o in &outcomes {
        report.verdict(&format!("{}/{}", o.suite, o.name), o.pass, o.detail.clone());
    }
    Ok((report, args.out))
}
