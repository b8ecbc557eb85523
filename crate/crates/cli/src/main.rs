use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use henneberg::geometry::{bjorling_solve, strip_error, AnalyticPlanarCurve, QUADRATURE_TOLERANCE};
use henneberg::io::{
    build_bjorling_mesh, build_mesh, save_mesh, ConfigFile, DataFile, MeshFormat, MeshMetadata, SamplingSpec,
    Selector, VerificationReport,
};
use henneberg::num_complex::Complex64;
use henneberg::period::{
    brute_search_m1, continue_with, period_residuals, ContinuationSettings, FamilySign, ModuliPoint, SearchGrid,
    PERIOD_TOLERANCE,
};
use henneberg::surfaces::{eval_hm_even, HmParam};
use henneberg::Error;

const BJORLING_TOLERANCE: f64 = 1e-6;
const HENNEBERG_TOLERANCE: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "henneberg", version, about = "Generalized Henneberg minimal surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tessellate a surface and write OBJ or PLY.
    Generate(GenerateArgs),
    /// Check periods, flux, stability and symmetries; prints a JSON report.
    Verify(VerifyArgs),
    /// Grid search for solutions of the m = 1 period problem.
    SearchM1(SearchArgs),
    /// Continue the m = 2 solution through (r1, r2).
    Continue(ContinueArgs),
    /// Solve the Björling problem for a hypocycloid and compare to the closed form.
    Bjorling(BjorlingArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SelectorName {
    H1,
    /// `hm-odd` or `hm-even` depending on the parity of `--m`.
    Hm,
    HmOdd,
    HmEven,
    Conjugate,
    Associated,
    LimitM2,
    Family,
    Custom,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Obj,
    Ply,
}

#[derive(Args)]
struct SurfaceArgs {
    selector: SelectorName,
    /// Complexity (or exponent) m.
    #[arg(long)]
    m: Option<u32>,
    /// Use m = 1/(2k) (hm-even only).
    #[arg(long)]
    k: Option<u32>,
    /// Associated-family angle.
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    theta2: Option<f64>,
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
    /// Weierstrass data file (custom).
    #[arg(long)]
    data: Option<PathBuf>,
    /// JSON config: data-file fields, a `sampling` block and `seed`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for sampling-based checks.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    n_r: Option<usize>,
    #[arg(long)]
    n_theta: Option<usize>,
    /// Keep half the parameter domain and glue by z ~ -1/conj(z).
    #[arg(long)]
    quotient: bool,
    /// Do not treat theta as periodic.
    #[arg(long)]
    no_wrap: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, short)]
    out: PathBuf,
    /// Defaults to the output extension (OBJ unless `.ply`).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0.25)]
    r_min: f64,
    #[arg(long, default_value_t = 4.0)]
    r_max: f64,
    /// Restrict r1 separately (needs --r1-max too).
    #[arg(long, requires = "r1_max")]
    r1_min: Option<f64>,
    #[arg(long, requires = "r1_min")]
    r1_max: Option<f64>,
    #[arg(long, default_value_t = 33)]
    n_radial: usize,
    #[arg(long, default_value_t = 48)]
    n_angular: usize,
}

#[derive(Args)]
struct ContinueArgs {
    #[arg(long)]
    r1: f64,
    #[arg(long)]
    r2: f64,
    /// Start point as a ModuliPoint JSON object (default H_2).
    #[arg(long)]
    from: Option<PathBuf>,
    #[arg(long, default_value_t = 0.02)]
    max_step: f64,
}

#[derive(Args)]
struct BjorlingArgs {
    #[arg(long, default_value = "hypocycloid")]
    curve: String,
    #[arg(long, required_unless_present = "astroid")]
    cusps: Option<u64>,
    /// Same as `--cusps 4`.
    #[arg(long, conflicts_with = "cusps")]
    astroid: bool,
    #[arg(long, default_value_t = 16)]
    quad_order: usize,
    /// Half-width of the compared strip.
    #[arg(long, default_value_t = 0.05)]
    strip: f64,
    /// Fraction of the arc trimmed at each cusp.
    #[arg(long, default_value_t = 0.1)]
    margin: f64,
    #[arg(long, default_value_t = 17)]
    n_u: usize,
    #[arg(long, default_value_t = 5)]
    n_v: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Pass,
    Fail,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn load_config(path: &Option<PathBuf>) -> henneberg::Result<ConfigFile> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn selector(args: &SurfaceArgs, config: &ConfigFile) -> henneberg::Result<Selector> {
    let need_m = || args.m.ok_or_else(|| usage(format!("{:?} needs --m", args.selector)));
    Ok(match args.selector {
        SelectorName::H1 => Selector::H1,
        SelectorName::Hm => {
            let m = need_m()?;
            if m % 2 == 1 {
                Selector::HmOdd(m)
            } else {
                Selector::HmEven(HmParam::Integer(m).validate()?)
            }
        }
        SelectorName::HmOdd => Selector::HmOdd(need_m()?),
        SelectorName::HmEven => match (args.m, args.k) {
            (Some(m), None) => Selector::HmEven(HmParam::Integer(m).validate()?),
            (None, Some(k)) => Selector::HmEven(HmParam::InverseEven(k).validate()?),
            _ => return Err(usage("hm-even needs exactly one of --m or --k")),
        },
        SelectorName::Conjugate => Selector::Conjugate(need_m()?),
        SelectorName::Associated => Selector::Associated {
            m: need_m()?,
            phi: args.phi.ok_or_else(|| usage("associated needs --phi"))?,
        },
        SelectorName::LimitM2 => Selector::LimitM2,
        SelectorName::Family => Selector::Family {
            theta2: args.theta2.ok_or_else(|| usage("family needs --theta2"))?,
            sign: match args.sign {
                SignArg::Plus => FamilySign::Plus,
                SignArg::Minus => FamilySign::Minus,
            },
        },
        SelectorName::Custom => {
            let data = match (&args.data, config.data()?) {
                (Some(p), _) => DataFile::load(p)?,
                (None, Some(d)) => d,
                (None, None) => return Err(usage("custom needs --data or a config with c, m, a")),
            };
            Selector::Custom(data)
        }
    })
}

fn sampling(args: &SamplingArgs, config: &ConfigFile) -> henneberg::Result<SamplingSpec> {
    let mut spec = config.sampling.unwrap_or_default();
    if let Some(v) = args.r_min {
        spec.r_min = v;
    }
    if let Some(v) = args.r_max {
        spec.r_max = v;
    }
    if let Some(v) = args.n_r {
        spec.n_r = v;
    }
    if let Some(v) = args.n_theta {
        spec.n_theta = v;
    }
    spec.quotient |= args.quotient;
    if args.no_wrap {
        spec.wrap = false;
    }
    spec.validate()?;
    Ok(spec)
}

fn mesh_format(format: Option<FormatArg>, path: &Path) -> MeshFormat {
    match format {
        Some(FormatArg::Obj) => MeshFormat::Obj,
        Some(FormatArg::Ply) => MeshFormat::Ply,
        None => MeshFormat::from_path(path),
    }
}

fn print_json(value: &serde_json::Value) -> henneberg::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn generate(args: &GenerateArgs) -> henneberg::Result<Outcome> {
    let config = load_config(&args.surface.config)?;
    let sel = selector(&args.surface, &config)?;
    let spec = sampling(&args.sampling, &config)?;
    let seed = args.surface.seed.or(config.seed).unwrap_or(0);
    let data = sel.data()?;
    if let (Selector::Custom(_), Some(d)) = (&sel, &data) {
        let report = VerificationReport::build_seeded(d, &sel.describe(), None, seed)?;
        if !(report.period.periods_pass && report.period.onesided_pass) {
            eprintln!(
                "refusing to generate: data does not solve the period problem \
                 (horizontal = {} + {}i, vertical = {}, one-sided = {}, tolerance {PERIOD_TOLERANCE:e})",
                report.period.horizontal[0],
                report.period.horizontal[1],
                report.period.vertical,
                report.period.onesided
            );
            println!("{}", report.to_json()?);
            return Ok(Outcome::Fail);
        }
    }
    let surface = sel.surface()?;
    let metadata = MeshMetadata {
        source: sel.describe(),
        data: data.as_ref().map(DataFile::from_data),
        sampling: Some(spec),
    };
    let mesh = build_mesh(&surface, &spec, metadata)?;
    let format = mesh_format(args.format, &args.out);
    save_mesh(&mesh, &args.out, format)?;
    print_json(&json!({
        "schema": 1,
        "surface": sel.describe(),
        "output": args.out.display().to_string(),
        "format": format,
        "vertices": mesh.vertices.len(),
        "faces": mesh.faces.len(),
        "sampling": spec,
    }))?;
    Ok(Outcome::Pass)
}

fn verify(args: &VerifyArgs) -> henneberg::Result<Outcome> {
    let config = load_config(&args.surface.config)?;
    let sel = selector(&args.surface, &config)?;
    let seed = args.surface.seed.or(config.seed).unwrap_or(0);
    let data = sel
        .data()?
        .ok_or_else(|| usage(format!("{} has no Laurent Weierstrass data to verify", sel.describe())))?;
    let report = VerificationReport::build_seeded(&data, &sel.describe(), sel.isometry_m(), seed)?;
    let text = report.to_json()?;
    match &args.out {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(if report.pass { Outcome::Pass } else { Outcome::Fail })
}

fn search_m1(args: &SearchArgs) -> henneberg::Result<Outcome> {
    let grid = SearchGrid {
        r_min: args.r_min,
        r_max: args.r_max,
        r1_range: args.r1_min.zip(args.r1_max),
        n_radial: args.n_radial,
        n_angular: args.n_angular,
        ..SearchGrid::default()
    };
    let report = brute_search_m1(&grid)?;
    let all = report.all_henneberg(HENNEBERG_TOLERANCE);
    print_json(&json!({
        "schema": 1,
        "grid": grid,
        "grid_points": report.grid_points,
        "grid_minima": report.grid_minima,
        "minimizers": report.minimizers.iter().map(|m| json!({
            "r1": m.point.r1,
            "r2": m.point.r2,
            "theta2": m.point.theta2,
            "beta": m.point.beta,
            "residual": m.residual,
            "henneberg": m.point.is_henneberg(HENNEBERG_TOLERANCE),
        })).collect::<Vec<_>>(),
        "all_henneberg": all,
    }))?;
    Ok(if all { Outcome::Pass } else { Outcome::Fail })
}

fn continue_cmd(args: &ContinueArgs) -> henneberg::Result<Outcome> {
    let start = match &args.from {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str::<ModuliPoint>(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?
        }
        None => ModuliPoint::h2(),
    };
    let settings = ContinuationSettings {
        max_step: args.max_step,
        ..ContinuationSettings::default()
    };
    let result = continue_with(&start, args.r1, args.r2, &settings)?;
    let res = period_residuals(&result.point.to_data()?);
    let solved = res.is_solution(PERIOD_TOLERANCE);
    print_json(&json!({
        "schema": 1,
        "start": start,
        "point": result.point,
        "residual": result.residual,
        "path_steps": result.path_steps,
        "newton_iterations": result.newton_iterations,
        "min_abs_det": result.min_abs_det,
        "period": {
            "horizontal": [res.horizontal.re, res.horizontal.im],
            "vertical": res.vertical,
            "onesided": res.onesided,
            "solved": solved,
        },
    }))?;
    Ok(if solved { Outcome::Pass } else { Outcome::Fail })
}

/// Closed form whose unit-circle image is the hypocycloid with `n` cusps.
fn cusp_param(n: u64) -> henneberg::Result<(HmParam, String)> {
    if n < 3 {
        return Err(Error::Domain(format!("hypocycloids need at least 3 cusps, got {n}")));
    }
    let m32 = |v: u64| u32::try_from(v).map_err(|_| Error::Domain(format!("cusp count {n} too large")));
    Ok(if n % 2 == 1 {
        let m = m32(n - 1)?;
        (HmParam::Integer(m), format!("H_{m}"))
    } else if n % 4 == 0 {
        let m = m32(n / 2 - 1)?;
        (HmParam::Integer(m), format!("H_{m}^*"))
    } else {
        let k = m32((n - 2) / 4)?;
        (HmParam::InverseEven(k), format!("H_1/{}", 2 * k))
    })
}

fn bjorling(args: &BjorlingArgs) -> henneberg::Result<Outcome> {
    if args.curve != "hypocycloid" {
        return Err(usage(format!("unsupported curve {:?}", args.curve)));
    }
    let n = if args.astroid { 4 } else { args.cusps.expect("required by clap") };
    let (param, name) = cusp_param(n)?;
    let curve = AnalyticPlanarCurve::for_param(param)?;
    let cusps = curve.cusp_parameters(8192);
    if cusps.len() as u64 != n {
        return Err(Error::Domain(format!("found {} cusps on the curve, expected {n}", cusps.len())));
    }
    let w0 = Complex64::new(0.5 * (cusps[0] + cusps[1]), 0.0);
    let surface = bjorling_solve(&curve, w0, args.quad_order)?;
    let err = strip_error(
        &surface,
        |r, t| eval_hm_even(param, r, t),
        args.strip,
        args.margin,
        args.n_u,
        args.n_v,
    )?;
    let pass = err < BJORLING_TOLERANCE;
    let output = match &args.out {
        Some(path) => {
            let metadata = MeshMetadata {
                source: format!("bjorling hypocycloid cusps={n}"),
                data: None,
                sampling: None,
            };
            let mesh = build_bjorling_mesh(&surface, args.n_u.max(2), args.n_v.max(2), args.strip, args.margin, metadata)?;
            save_mesh(&mesh, path, mesh_format(args.format, path))?;
            Some(path.display().to_string())
        }
        None => None,
    };
    print_json(&json!({
        "schema": 1,
        "cusps": n,
        "closed_form": name,
        "base": w0.re,
        "arc": [surface.arc().0, surface.arc().1],
        "strip": args.strip,
        "quadrature_tolerance": QUADRATURE_TOLERANCE,
        "sup_error": err,
        "tolerance": BJORLING_TOLERANCE,
        "pass": pass,
        "output": output,
    }))?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("HF_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| format!("HF_THREADS must be a positive integer, got {value:?}"))?;
    if n == 0 {
        return Err("HF_THREADS must be a positive integer".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::InvalidConfig(_)
        | Error::Domain(_)
        | Error::NonFinite(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Verify(a) => verify(a),
        Command::SearchM1(a) => search_m1(a),
        Command::Continue(a) => continue_cmd(a),
        Command::Bjorling(a) => bjorling(a),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
