//! `pennerlab` command line: seed systems, richness checks, f_gamma, word
//! approximation, conjugate traces and density scans.
//!
//! Exit codes: 0 success, 1 validation error, 2 inconclusive.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pennerlab::algebra::{factor_over_z, ComplexApprox, ExactMatrix};
use pennerlab::curves::{
    assemble_rich_system, default_twist, richness_check, seed_system_with_twist, CurveSystem, Surface,
};
use pennerlab::densify::{
    approximate_word, density_scan, target_to_quadratic, trace_path, verify_conjugates, ScanConfig, SearchBudget,
    Verdict,
};
use pennerlab::par::ExecMode;
use pennerlab::proj::{build_frame, build_graph, f_gamma_charpoly, ClosedPath, GeneratorWord};
use serde::Serialize;

use output::{csv_document, emit, json_document, system_hash};

const EXIT_INVALID: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser)]
#[command(name = "pennerlab", version, about = "Penner word stretch factors and Galois-conjugate density witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the rich six-curve system of a built-in seed surface.
    Seed(SeedArgs),
    /// Check positivity, rank and CRG density of a curve system.
    RichCheck(RichArgs),
    /// Characteristic polynomial of f_gamma for a closed path.
    Fgamma(FgammaArgs),
    /// Search a generator word whose quadratic approximates the target.
    Approx(ApproxArgs),
    /// Track the conjugate of theta through u_k for a word or path.
    Verify(VerifyArgs),
    /// Density scan over a rectangular grid.
    Scan(ScanArgs),
}

#[derive(Args, Serialize)]
struct SeedArgs {
    /// S_0_6, S_1_3 or S_2_0 (S_2 for the closed surface).
    surface: String,
    /// Twist exponents, e.g. 1,1,2; defaults to the surface's standard vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    twist: Option<Vec<i64>>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct RichArgs {
    /// Curve system JSON, or a bare 3x3 matrix Y.
    #[arg(long)]
    omega: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct FgammaArgs {
    #[arg(long)]
    omega: PathBuf,
    /// 1-based vertices, e.g. 1,4,2,3 (closing vertex optional).
    #[arg(long, value_delimiter = ',', required = true)]
    path: Vec<usize>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SearchArgs {
    /// Search node budget.
    #[arg(long, default_value_t = SearchBudget::default().nodes)]
    budget: usize,
    #[arg(long, default_value_t = SearchBudget::default().max_len)]
    max_len: usize,
    #[arg(long, default_value_t = SearchBudget::default().beam_width)]
    beam_width: usize,
    /// Tie-breaking seed for the search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SearchArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget { nodes: self.budget, max_len: self.max_len, beam_width: self.beam_width, seed: self.seed }
    }
}

#[derive(Args, Serialize)]
struct ApproxArgs {
    #[arg(long)]
    omega: PathBuf,
    /// Target as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    theta: [f64; 2],
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    omega: PathBuf,
    /// Generator letters as 1-based triples i,j,j' separated by '/', e.g. 2,4,5/3,4,6.
    #[arg(long, value_parser = parse_letter, value_delimiter = '/', conflicts_with = "path", required_unless_present = "path")]
    word: Option<Vec<[usize; 3]>>,
    /// Closed path as 1-based vertices, used instead of a word.
    #[arg(long, value_delimiter = ',')]
    path: Option<Vec<usize>>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    theta: [f64; 2],
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    #[arg(long, default_value_t = 30)]
    k_max: u32,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ScanArgs {
    #[arg(long)]
    omega: PathBuf,
    /// X0,X1,Y0,Y1.
    #[arg(long, value_parser = parse_region, allow_hyphen_values = true, default_value = "-2,2,-2,2")]
    region: [f64; 4],
    #[arg(long, default_value_t = 1.0)]
    grid: f64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    k_min: u32,
    #[arg(long, default_value_t = 30)]
    k_max: u32,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunConfig<'a, T: Serialize> {
    command: &'a str,
    #[serde(flatten)]
    args: &'a T,
    threads: Option<usize>,
}

fn floats(s: &str, n: usize) -> std::result::Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("{p:?} is not a number")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got {}", v.len()));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(v)
}

fn parse_complex(s: &str) -> std::result::Result<[f64; 2], String> {
    let v = floats(s, 2)?;
    Ok([v[0], v[1]])
}

fn target(t: [f64; 2]) -> ComplexApprox {
    ComplexApprox::new(t[0], t[1], 0.0)
}

fn parse_region(s: &str) -> std::result::Result<[f64; 4], String> {
    let v = floats(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

fn parse_letter(t: &str) -> std::result::Result<[usize; 3], String> {
    let v = t
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("{p:?} is not a curve index")))
        .collect::<std::result::Result<Vec<usize>, _>>()?;
    <[usize; 3]>::try_from(v).map_err(|_| format!("letter {t:?} must be i,j,j'"))
}

fn threads() -> Result<Option<usize>> {
    match std::env::var("PENNERLAB_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => {
                Err(pennerlab::Error::InvalidArgument(format!("PENNERLAB_THREADS={s:?} must be a positive integer"))
                    .into())
            }
        },
    }
}

/// A curve system JSON object, or a bare 3x3 cross block.
fn load_system(path: &Path) -> Result<CurveSystem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let v = match v.get("result") {
        Some(inner) if v.get("config").is_some() => inner.clone(),
        _ => v,
    };
    if v.is_array() {
        let y: ExactMatrix = serde_json::from_value(v).map_err(|e| invalid(format!("matrix: {e}")))?;
        return Ok(assemble_rich_system(&y)?);
    }
    serde_json::from_value(v).map_err(|e| invalid(format!("curve system: {e}")))
}

fn invalid(msg: String) -> anyhow::Error {
    pennerlab::Error::InvalidArgument(msg).into()
}

fn finish_json<T: Serialize, R: Serialize>(
    name: &str,
    args: &T,
    hash: &str,
    status: &str,
    result: &R,
    out: Option<&Path>,
) -> Result<()> {
    let cfg = RunConfig { command: name, args, threads: threads()? };
    emit(out, &json_document(&cfg, hash, status, result)?)
}

fn cmd_seed(a: &SeedArgs) -> Result<u8> {
    let surface: Surface = a.surface.parse()?;
    let twist = match &a.twist {
        Some(t) => t.clone(),
        None => default_twist(surface)?,
    };
    let sys = seed_system_with_twist(surface, &twist)?;
    let hash = system_hash(&sys)?;
    finish_json("seed", a, &hash, "ok", &sys, a.out.as_deref())?;
    Ok(0)
}

fn cmd_rich_check(a: &RichArgs) -> Result<u8> {
    let sys = load_system(&a.omega)?;
    let report = richness_check(&sys);
    let status = if report.passes() { "pass" } else { "fail" };
    finish_json("rich-check", a, &system_hash(&sys)?, status, &report, a.out.as_deref())?;
    Ok(if report.passes() { 0 } else { EXIT_INVALID })
}

fn cmd_fgamma(a: &FgammaArgs) -> Result<u8> {
    let sys = load_system(&a.omega)?;
    let path = ClosedPath::from_one_based(&a.path, &build_graph(&sys.omega))?;
    let f = f_gamma_charpoly(&sys.omega, &path)?;
    let (prim, _) = f.primitive_integer()?;
    let fac = factor_over_z(&prim.to_exact())?;
    let factors: Vec<_> =
        fac.factors.iter().map(|(g, m)| serde_json::json!({ "factor": g, "multiplicity": m })).collect();
    let result = serde_json::json!({ "f_gamma": f, "degree": f.degree(), "factors": factors });
    finish_json("fgamma", a, &system_hash(&sys)?, "ok", &result, a.out.as_deref())?;
    Ok(0)
}

fn cmd_approx(a: &ApproxArgs) -> Result<u8> {
    let sys = load_system(&a.omega)?;
    let frame = build_frame(&sys.omega)?;
    let u = target_to_quadratic(target(a.theta))?;
    let hash = system_hash(&sys)?;
    match approximate_word(&u, &frame, a.eps, &a.search.budget()) {
        Ok(r) => {
            finish_json("approx", a, &hash, "ok", &r, a.out.as_deref())?;
            Ok(0)
        }
        Err(pennerlab::Error::SearchExhausted { best }) => {
            finish_json("approx", a, &hash, "exhausted", &best, a.out.as_deref())?;
            eprintln!("search budget exhausted; best word written");
            Ok(EXIT_INCONCLUSIVE)
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let sys = load_system(&a.omega)?;
    let theta = target(a.theta);
    let ks = a.k_min..=a.k_max;
    let trace = match (&a.word, &a.path) {
        (Some(w), _) => {
            verify_conjugates(&GeneratorWord::from_one_based(w)?, &theta, ks, &sys.omega, ExecMode::Parallel)?
        }
        (None, Some(p)) => {
            let path = ClosedPath::from_one_based(p, &build_graph(&sys.omega))?;
            trace_path(&path, &theta, ks, &sys.omega, ExecMode::Parallel)?
        }
        (None, None) => bail!(invalid("either --word or --path is required".into())),
    };
    let cfg = RunConfig { command: "verify", args: a, threads: threads()? };
    emit(a.out.as_deref(), &csv_document(&cfg, &system_hash(&sys)?, &trace.to_csv())?)?;
    let yes = trace.per_k.iter().any(|e| e.conjugate == Verdict::Yes);
    let open = trace.per_k.iter().any(|e| e.conjugate == Verdict::Inconclusive);
    if !yes && open {
        eprintln!("no k certified a conjugate and some were inconclusive");
        return Ok(EXIT_INCONCLUSIVE);
    }
    Ok(0)
}

fn cmd_scan(a: &ScanArgs) -> Result<u8> {
    let sys = load_system(&a.omega)?;
    let frame = build_frame(&sys.omega)?;
    let cfg = ScanConfig {
        region: a.region,
        grid: a.grid,
        eps: a.eps,
        k_min: a.k_min,
        k_max: a.k_max,
        budget: a.search.budget(),
        mode: ExecMode::Parallel,
    };
    let report = density_scan(&cfg, &frame, &sys.omega)?;
    let run = RunConfig { command: "scan", args: a, threads: threads()? };
    emit(a.out.as_deref(), &csv_document(&run, &system_hash(&sys)?, &report.to_csv())?)?;
    eprintln!("{} of {} evaluated targets hit, coverage {:.3}", report.hits, report.evaluated, report.coverage);
    Ok(0)
}

fn dispatch(cmd: &Command) -> Result<u8> {
    match cmd {
        Command::Seed(a) => cmd_seed(a),
        Command::RichCheck(a) => cmd_rich_check(a),
        Command::Fgamma(a) => cmd_fgamma(a),
        Command::Approx(a) => cmd_approx(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Scan(a) => cmd_scan(a),
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match threads()? {
        None => dispatch(&cli.command),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| anyhow!(e))?;
            pool.install(|| dispatch(&cli.command))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<pennerlab::Error>() {
        Some(pennerlab::Error::Inconclusive(_)) | Some(pennerlab::Error::NonConvergence { .. }) => EXIT_INCONCLUSIVE,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
