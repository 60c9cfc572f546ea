//! `hypersym` command line: symbolic identity checks, construction of the
//! hypersphere families, numeric certification and pointwise classification.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersym::constructions::instances::{negative_control, shipped_instances, Instance};
use hypersym::constructions::{
    build_immersion, synthesize_curve, BaseSurface, Curve, CurveFn, Family, FamilySpec, Shape, SynthesisRequest,
};
use hypersym::grid::{Grid1D, Grid3};
use hypersym::numeric::{certify, CertificationReport, CertifyOptions, MeasureOptions};
use hypersym::symbolic::{verify_identities, SymmetryCase, CODAZZI_SYSTEM};
use hypersym::Error;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_SYMBOLIC: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "hypersym",
    version,
    about = "Verify and construct indefinite affine hyperspheres with pointwise symmetry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the structure equations symbolically and check the symmetry cases.
    VerifyIdentities {
        /// Only check this case (so2, s3, z3, z3-degenerate).
        #[arg(long)]
        case: Option<SymmetryCase>,
        /// Print the reference Codazzi equations in normalized form to stderr.
        #[arg(long)]
        show_equations: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample a family member on a grid and check its curve condition.
    Build {
        #[command(flatten)]
        spec: SpecArgs,
        /// Mesh output file; stdout if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the per-t condition report (JSON) here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Certify the affine hypersphere property at every grid point.
    Certify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Certify even when the curve condition fails.
        #[arg(long)]
        force: bool,
        /// Also measure the difference tensor and classify each point.
        #[arg(long)]
        measure: bool,
    },
    /// Per-point symmetry table as CSV.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Family selection and sampling grid. Grids use `start:end:count`,
/// inclusive of both ends.
#[derive(Args, Clone)]
struct SpecArgs {
    /// A shipped instance such as `c1-proper/titeica`, or `negative-control`.
    #[arg(long, conflicts_with_all = ["family", "base"])]
    instance: Option<String>,
    /// c1-proper, c1-improper, c2, c3a, c3b, c1t8-proper, c1t8-improper, c2t8, c3t8a, c3t8b.
    #[arg(long, required_unless_present = "instance")]
    family: Option<Family>,
    /// elliptic-paraboloid, hyperbolic-paraboloid, sphere, two-sheeted, one-sheeted, titeica.
    #[arg(long, required_unless_present = "instance")]
    base: Option<BaseSurface>,
    /// Profile curve `g1,g2`, e.g. `cosh,sinh`, `t,exp`, `t,-1/2*t^-1`.
    #[arg(long, conflicts_with = "synthesize")]
    curve: Option<Curve>,
    /// Integrate the curve condition for g2 instead of giving it explicitly.
    #[arg(long)]
    synthesize: bool,
    /// First curve component for `--synthesize`.
    #[arg(long, default_value = "t")]
    g1: CurveFn,
    /// g2 at the start of the integration.
    #[arg(long = "g2-0", allow_hyphen_values = true)]
    g2_0: Option<f64>,
    /// g2' at the start of the integration.
    #[arg(long = "g2p-0", allow_hyphen_values = true)]
    g2p_0: Option<f64>,
    /// Start of the integration; defaults to the start of the t grid.
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    /// Sign of the Wronskian for the Lorentzian-base families (+1 or -1).
    #[arg(long, allow_hyphen_values = true)]
    branch: Option<f64>,
    /// Integration steps per unit of t.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    /// Constant for the c3 families.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Mean curvature (+1 or -1 for proper families, 0 otherwise).
    #[arg(long, allow_hyphen_values = true)]
    h: Option<f64>,
    /// Grid along the profile parameter, `start:end:count` with both ends included.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<Grid1D>,
    /// Sets both the v and w grids (`start:end:count`).
    #[arg(long, allow_hyphen_values = true)]
    vw: Option<Grid1D>,
    /// Grid along the first base coordinate; overrides --vw.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<Grid1D>,
    /// Grid along the second base coordinate; overrides --vw.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<Grid1D>,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Finite-difference step for the difference tensor.
    #[arg(long, default_value_t = 1e-2)]
    step: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Extra room past the t grid for synthesized curves, so that difference
/// stencils at the last grid node stay on the curve.
const SYNTH_MARGIN: f64 = 0.1;

enum Failure {
    Usage(String),
    Symbolic(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) | Error::UnknownCase(_) | Error::Config(_) | Error::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let res = match cli.command {
        Command::VerifyIdentities { case, show_equations, output } => cmd_verify(case, show_equations, output),
        Command::Build { spec, output, format, report } => cmd_build(&spec, output, format, report),
        Command::Certify { spec, run, force, measure } => cmd_certify(&spec, &run, force, measure),
        Command::Classify { spec, run } => cmd_classify(&spec, &run),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Symbolic(m)) => {
            eprintln!("symbolic check failed: {m}");
            ExitCode::from(EXIT_SYMBOLIC)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric check failed: {m}");
            ExitCode::from(EXIT_NUMERIC)
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn cmd_verify(case: Option<SymmetryCase>, show: bool, output: Option<PathBuf>) -> Outcome {
    if show {
        for eq in CODAZZI_SYSTEM {
            let p = hypersym::poly::Polynomial::parse_equation(eq)?.normal_form();
            eprintln!("{p} = 0");
        }
    }
    let rep = verify_identities(case)?;
    emit(&output, &(serde_json::to_string_pretty(&rep)? + "\n"))?;
    eprintln!(
        "codazzi {}/{} equations matched, gauss {}, cases {}, contradiction {}",
        rep.codazzi.equations.iter().filter(|e| !e.matched_by.is_empty()).count(),
        rep.codazzi.equations.len(),
        if rep.gauss.passed { "ok" } else { "FAILED" },
        rep.cases
            .iter()
            .map(|c| format!("{}:{}", c.case, if c.passed { "ok" } else { "FAILED" }))
            .collect::<Vec<_>>()
            .join(" "),
        rep.contradiction.result,
    );
    if rep.passed {
        return Ok(());
    }
    let mut msg = String::new();
    for c in rep.cases.iter().filter(|c| !c.passed) {
        for comp in &c.nonzero {
            let _ = write!(msg, "\n  {}: {} = {}", c.case, comp.label, comp.residual);
        }
    }
    for comp in &rep.codazzi.unmatched_components {
        let _ = write!(msg, "\n  unmatched {} = {}", comp.label, comp.residual);
    }
    for e in rep.codazzi.equations.iter().filter(|e| e.matched_by.is_empty()) {
        let _ = write!(msg, "\n  no component reproduces {}", e.reference);
    }
    if !rep.contradiction.proportional_to_a4_squared {
        let _ = write!(msg, "\n  degenerate case yields {}", rep.contradiction.result);
    }
    Err(Failure::Symbolic(msg))
}

/// Resolves the command line into a family member and its grid.
fn resolve(args: &SpecArgs) -> std::result::Result<Instance, Failure> {
    if let Some(name) = &args.instance {
        let mut inst = if name == "negative-control" {
            negative_control(50, 30)?
        } else {
            shipped_instances(50, 30)?.into_iter().find(|i| i.name == name).ok_or_else(|| {
                let names: Vec<&str> =
                    shipped_instances(2, 2).map(|v| v.iter().map(|i| i.name).collect()).unwrap_or_default();
                Failure::Usage(format!("unknown instance `{name}`; known: {}, negative-control", names.join(", ")))
            })?
        };
        inst.grid = grid(args, inst.grid);
        return Ok(inst);
    }
    let family = args.family.expect("clap enforces --family");
    let base = args.base.expect("clap enforces --base");
    let defaults = Grid3 {
        t: Grid1D { start: 0.5, end: 2.0, count: 50 },
        v: Grid1D { start: -1.0, end: 1.0, count: 30 },
        w: Grid1D { start: -1.0, end: 1.0, count: 30 },
    };
    let g = grid(args, defaults);
    let shape = if family.is_c3() {
        if args.curve.is_some() || args.synthesize {
            return Err(Failure::Usage(format!("family {family} takes --c, not a curve")));
        }
        Shape::Constant(args.c.unwrap_or(1.0))
    } else if args.c.is_some() {
        return Err(Failure::Usage(format!("--c only applies to c3 families, not {family}")));
    } else if args.synthesize {
        Shape::Curve(synthesize(args, family, base, &g)?)
    } else {
        Shape::Curve(
            args.curve
                .clone()
                .ok_or_else(|| Failure::Usage(format!("family {family} needs --curve g1,g2 or --synthesize")))?,
        )
    };
    let spec = FamilySpec::new(family, base, shape, args.h)?;
    Ok(Instance { name: "custom", spec, grid: g })
}

fn grid(args: &SpecArgs, defaults: Grid3) -> Grid3 {
    Grid3 {
        t: args.t.unwrap_or(defaults.t),
        v: args.v.or(args.vw).unwrap_or(defaults.v),
        w: args.w.or(args.vw).unwrap_or(defaults.w),
    }
}

fn synthesize(args: &SpecArgs, family: Family, base: BaseSurface, g: &Grid3) -> std::result::Result<Curve, Failure> {
    let (Some(g2_0), Some(g2p_0)) = (args.g2_0, args.g2p_0) else {
        return Err(Failure::Usage("--synthesize needs --g2-0 and --g2p-0".into()));
    };
    let eps1 = match base.kind() {
        hypersym::constructions::BaseKind::Proper { eps1 } => eps1,
        hypersym::constructions::BaseKind::Improper => 0.0,
    };
    let t0 = args.t0.unwrap_or(g.t.start);
    let t_end = g.t.end.max(g.t.start) + SYNTH_MARGIN;
    let steps = ((t_end - t0).abs() * args.steps as f64).ceil().max(1.0) as usize;
    let req = SynthesisRequest { family, eps1, g1: args.g1, t0, g2_0, g2p_0, t_end, steps, branch: args.branch };
    Ok(synthesize_curve(&req)?)
}

fn cmd_build(args: &SpecArgs, output: Option<PathBuf>, format: Format, report: Option<PathBuf>) -> Outcome {
    let inst = resolve(args)?;
    let (spec, g) = (&inst.spec, &inst.grid);
    let mut rows = Vec::with_capacity(g.len());
    let mut skipped = 0usize;
    for p in g.points() {
        match build_immersion(spec, p[0], p[1], p[2]) {
            Ok(j) => rows.push([p[0], p[1], p[2], j.x[0], j.x[1], j.x[2], j.x[3]]),
            Err(_) => skipped += 1,
        }
    }
    let text = match format {
        Format::Csv => {
            let mut s = String::from("t,v,w,x0,x1,x2,x3\n");
            for r in &rows {
                let cells: Vec<String> = r.iter().map(|x| format!("{x:.16e}")).collect();
                s += &cells.join(",");
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let doc = serde_json::json!({
                "family": spec.family.name(),
                "params": spec.describe(),
                "grid": g,
                "points": rows,
            });
            serde_json::to_string(&doc)? + "\n"
        }
    };
    emit(&output, &text)?;

    let conditions =
        hypersym::numeric::check_curve_conditions(spec, &g.t.values(), hypersym::constructions::CONDITION_TOL)?;
    let failed = conditions.iter().filter(|c| !c.pass).count();
    if let Some(path) = report {
        let doc = serde_json::json!({
            "tool": "hypersym",
            "version": hypersym::VERSION,
            "config": spec.describe(),
            "grid": g,
            "tolerance": hypersym::constructions::CONDITION_TOL,
            "skipped_points": skipped,
            "condition_failures": failed,
            "conditions": conditions,
        });
        std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    if skipped > 0 {
        eprintln!("{skipped} grid points lie outside the chart and were skipped");
    }
    if failed > 0 {
        return Err(Failure::Numeric(format!("curve condition violated at {failed} of {} t values", conditions.len())));
    }
    Ok(())
}

fn run_certification(
    inst: &Instance,
    run: &RunArgs,
    measure: bool,
) -> std::result::Result<CertificationReport, Failure> {
    if !(run.step > 0.0 && run.step.is_finite()) {
        return Err(Failure::Usage(format!("--step must be positive, got {}", run.step)));
    }
    let opts = CertifyOptions {
        measure: measure.then(|| MeasureOptions { step: run.step, ..Default::default() }),
        ..Default::default()
    };
    Ok(certify(&inst.spec, &inst.grid, &opts)?)
}

fn cmd_certify(args: &SpecArgs, run: &RunArgs, force: bool, measure: bool) -> Outcome {
    let inst = resolve(args)?;
    if !force {
        let tol = CertifyOptions::default().tolerances.condition;
        let conds = hypersym::numeric::check_curve_conditions(&inst.spec, &inst.grid.t.values(), tol)?;
        if let Some(bad) = conds.iter().find(|c| !c.pass) {
            let doc = serde_json::json!({
                "tool": "hypersym",
                "version": hypersym::VERSION,
                "config": inst.spec.describe(),
                "grid": inst.grid,
                "conditions": conds,
                "verdict": "fail",
            });
            emit(&run.output, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            return Err(Failure::Numeric(format!(
                "curve condition fails at t = {} (lhs {:e}, rhs {:e}); rerun with --force to certify anyway",
                bad.t, bad.lhs, bad.rhs
            )));
        }
    }
    let rep = run_certification(&inst, run, measure)?;
    emit(&run.output, &(serde_json::to_string_pretty(&rep)? + "\n"))?;
    let s = &rep.summary;
    eprintln!(
        "{} points, max |S - H Id| {:.3e}, Blaschke ok at {:.2}%, {} signature failures",
        s.points,
        s.max_s_residual,
        100.0 * s.blaschke_pass_fraction,
        s.signature_failures
    );
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Numeric(s.reasons.join("; ")))
    }
}

fn cmd_classify(args: &SpecArgs, run: &RunArgs) -> Outcome {
    let inst = resolve(args)?;
    let rep = run_certification(&inst, run, true)?;
    let mut s = String::from("t,v,w,frame,a4,a6,b4,class,nu,case\n");
    for p in &rep.points {
        let _ = write!(s, "{:.16e},{:.16e},{:.16e}", p.t, p.v, p.w);
        match &p.measured {
            Some(m) => {
                let frame = match m.frame {
                    hypersym::numeric::FrameKind::Orthonormal => "ortho",
                    hypersym::numeric::FrameKind::Lightcone => "light",
                };
                let _ = writeln!(
                    s,
                    ",{frame},{:.16e},{:.16e},{:.16e},{},{:.16e},{}",
                    m.a4, m.a6, m.b4, m.class, m.nu, m.case
                );
            }
            None => s.push_str(",,,,,unknown,,\n"),
        }
    }
    emit(&run.output, &s)?;
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Numeric(rep.summary.reasons.join("; ")))
    }
}
