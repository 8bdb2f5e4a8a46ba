//! Command-line front end.
//!
//! Exit codes: 0 success, 1 bad configuration or input, 2 no bidiagonal
//! factorisation, 3 singular leading minor, 4 failed verification,
//! 5 internal inconsistency.

mod render;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bcf::{self, euler_gauss_alphas};
use crate::closed_forms::closed_form_alphas;
use crate::error::Error;
use crate::gauss_borel::{
    alphas_from_lu, alphas_from_minors, AlphaSequence, Method, MomentMatrixSet,
};
use crate::hessenberg::{assemble, gamma_expand};
use crate::moments::SystemSpec;
use crate::scalar;

pub use render::Format;

#[derive(Debug, Parser)]
#[command(
    name = "mopfact",
    version,
    about = "Exact bidiagonal factorisations of multiple orthogonal polynomial recurrences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute alpha_0..alpha_{count-1} with each selected method.
    Factor(FactorArgs),
    /// Run several methods and require exact agreement.
    Verify(FactorArgs),
    /// Print the recurrence bands gamma_n^[k] and the truncated Hessenberg matrix.
    Hessenberg(HessenbergArgs),
    /// Check the production-matrix and moment identities against path enumeration.
    Srcheck(SrcheckArgs),
    /// Print the normalised moment table.
    MomentsEcho(EchoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemName {
    JacobiPineiro,
    Laguerre,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Built-in system.
    #[arg(long, conflicts_with = "moments")]
    pub system: Option<SystemName>,
    /// JSON moment file: {"r": r, "moments": [["1", "1/2", ...], ...]}.
    #[arg(long)]
    pub moments: Option<PathBuf>,
    /// Number of functionals.
    #[arg(long)]
    pub r: Option<usize>,
    /// Comma-separated a_1,...,a_r.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Jacobi-Pineiro b.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Number of alpha values.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Comma-separated subset of gauss-borel,minors,bcf,closed-form, or "all".
    #[arg(long)]
    pub method: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HessenbergArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Size of the truncated Hessenberg matrix.
    #[arg(long, default_value_t = 4)]
    pub size: usize,
    #[arg(long, default_value = "gauss-borel")]
    pub method: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SrcheckArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    #[arg(long, default_value_t = 4)]
    pub kmax: usize,
    #[arg(long, default_value = "gauss-borel")]
    pub method: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EchoArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Moments per functional.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Why a command did not succeed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Config(String),
    Compute(Error),
    /// Verification ran but found a discrepancy; carries the rendered report.
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 1,
            Failure::Mismatch(_) => 4,
            Failure::Compute(e) => match e {
                Error::NoBidiagonalFactorisation { .. } => 2,
                Error::SingularLeadingMinor { .. } => 3,
                Error::Parse(_)
                | Error::InvalidSystem(_)
                | Error::DegenerateParameters(_)
                | Error::MomentTableExhausted { .. }
                | Error::FunctionalIndexOutOfRange { .. } => 1,
                _ => 5,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(msg) => write!(f, "{msg}"),
            Failure::Compute(e) => write!(f, "{e}"),
            Failure::Mismatch(_) => write!(f, "verification failed"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Validated configuration shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: SystemSpec,
    pub count: usize,
    pub methods: Vec<Method>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub fn resolve_system(args: &SystemArgs) -> CliResult<SystemSpec> {
    let spec = match (&args.system, &args.moments) {
        (Some(_), Some(_)) => {
            return Err(Failure::Config(
                "--system and --moments are exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(Failure::Config(
                "one of --system or --moments is required".into(),
            ))
        }
        (None, Some(path)) => {
            if args.a.is_some() || args.b.is_some() {
                return Err(Failure::Config(
                    "--a/--b apply only to built-in systems".into(),
                ));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            SystemSpec::from_moment_json(&text)?
        }
        (Some(name), None) => {
            let a = args
                .a
                .as_deref()
                .ok_or_else(|| Failure::Config("--a is required for built-in systems".into()))?;
            let a = scalar::parse_list(a)?;
            match name {
                SystemName::JacobiPineiro => {
                    let b = args.b.as_deref().ok_or_else(|| {
                        Failure::Config("--b is required for jacobi-pineiro".into())
                    })?;
                    SystemSpec::jacobi_pineiro(a, scalar::parse(b)?)?
                }
                SystemName::Laguerre => {
                    if args.b.is_some() {
                        return Err(Failure::Config("--b does not apply to laguerre".into()));
                    }
                    SystemSpec::laguerre(a)?
                }
            }
        }
    };
    if let Some(r) = args.r {
        if r != spec.r() {
            return Err(Failure::Config(format!(
                "--r {r} does not match the system, which has {} functionals",
                spec.r()
            )));
        }
    }
    Ok(spec)
}

pub fn parse_methods(list: &str, spec: &SystemSpec) -> CliResult<Vec<Method>> {
    let mut methods = if list == "all" {
        Method::ALL
            .into_iter()
            .filter(|m| *m != Method::ClosedForm || spec.is_builtin())
            .collect()
    } else {
        list.split(',')
            .map(|s| {
                s.parse::<Method>()
                    .map_err(|e| Failure::Config(e.to_string()))
            })
            .collect::<CliResult<Vec<_>>>()?
    };
    methods.sort();
    methods.dedup();
    if methods.contains(&Method::ClosedForm) && !spec.is_builtin() {
        return Err(Failure::Config(
            "closed-form needs a built-in system".into(),
        ));
    }
    Ok(methods)
}

fn config(
    system: &SystemArgs,
    count: usize,
    methods: &str,
    output: &OutputArgs,
) -> CliResult<RunConfig> {
    let spec = resolve_system(system)?;
    let methods = parse_methods(methods, &spec)?;
    if count == 0 {
        return Err(Failure::Config("--count must be positive".into()));
    }
    Ok(RunConfig {
        spec,
        count,
        methods,
        format: output.format,
        out: output.out.clone(),
    })
}

/// Runs every selected method; the LU and determinant routes share one set
/// of factorised moment matrices.
pub fn compute_alphas(
    spec: &SystemSpec,
    methods: &[Method],
    count: usize,
) -> crate::Result<Vec<AlphaSequence>> {
    if count == 0 {
        return methods
            .iter()
            .map(|&m| AlphaSequence::new(Vec::new(), m))
            .collect();
    }
    let needs_set = methods
        .iter()
        .any(|m| matches!(m, Method::GaussBorel | Method::Minors));
    let set = if needs_set {
        Some(MomentMatrixSet::for_max_index(spec, count - 1)?)
    } else {
        None
    };
    methods
        .iter()
        .map(|m| {
            let seq = match m {
                Method::GaussBorel => alphas_from_lu(set.as_ref().expect("set built"))?,
                Method::Minors => alphas_from_minors(set.as_ref().expect("set built"))?,
                Method::EulerGauss => euler_gauss_alphas(spec, count)?,
                Method::ClosedForm => closed_form_alphas(spec, count)?,
            };
            Ok(seq.truncated(count))
        })
        .collect()
}

fn single_method(list: &str, spec: &SystemSpec) -> CliResult<Method> {
    match parse_methods(list, spec)?.as_slice() {
        [m] => Ok(*m),
        _ => Err(Failure::Config(
            "exactly one --method is expected here".into(),
        )),
    }
}

fn cmd_factor(cfg: &RunConfig) -> CliResult<String> {
    let runs = compute_alphas(&cfg.spec, &cfg.methods, cfg.count)?;
    Ok(render::factor(cfg.spec.r(), &runs, cfg.format))
}

fn cmd_verify(cfg: &RunConfig) -> CliResult<String> {
    if cfg.methods.len() < 2 {
        return Err(Failure::Config("verify needs at least two methods".into()));
    }
    let runs = compute_alphas(&cfg.spec, &cfg.methods, cfg.count)?;
    let agree = runs.windows(2).all(|w| w[0].values() == w[1].values());
    let text = render::verify(cfg.spec.r(), &runs, cfg.format);
    if agree {
        Ok(text)
    } else {
        Err(Failure::Mismatch(text))
    }
}

fn cmd_hessenberg(args: &HessenbergArgs) -> CliResult<String> {
    let spec = resolve_system(&args.system)?;
    let method = single_method(&args.method, &spec)?;
    let m = args.size;
    if m == 0 {
        return Err(Failure::Config("--size must be positive".into()));
    }
    let r = spec.r();
    let count = (r + 1) * (m - 1) + 1;
    let alphas = compute_alphas(&spec, &[method], count)?.remove(0);
    let bands = gamma_expand(&alphas, r, m)?;
    let h = assemble(&alphas, r, m)?.product();
    if h != bands.to_matrix() {
        return Err(Error::InternalInconsistency(
            "factor product differs from the band expansion".into(),
        )
        .into());
    }
    Ok(render::hessenberg(
        r,
        method,
        &bands,
        &h,
        args.output.format,
    ))
}

fn cmd_srcheck(args: &SrcheckArgs) -> CliResult<String> {
    let spec = resolve_system(&args.system)?;
    let method = single_method(&args.method, &spec)?;
    let r = spec.r();
    let count = bcf::required_alpha_count(r, args.nmax, args.kmax);
    let alphas = compute_alphas(&spec, &[method], count)?.remove(0);
    let production = bcf::production_check(&alphas, r, args.nmax, args.kmax)?;
    let moments = bcf::moment_identity_check(&spec, &alphas, args.nmax)?;
    let passed = production.passed() && moments.iter().all(bcf::MomentCell::passed);
    let text = render::srcheck(
        r,
        method,
        args.nmax,
        args.kmax,
        &production,
        &moments,
        args.output.format,
    );
    if passed {
        Ok(text)
    } else {
        Err(Failure::Mismatch(text))
    }
}

fn cmd_echo(args: &EchoArgs) -> CliResult<String> {
    let spec = resolve_system(&args.system)?;
    if args.count == 0 {
        return Err(Failure::Config("--count must be positive".into()));
    }
    let file = spec.to_moment_file(args.count)?;
    Ok(render::moments(&file, args.output.format))
}

fn output_target(command: &Command) -> Option<&Path> {
    let out = match command {
        Command::Factor(a) | Command::Verify(a) => &a.output.out,
        Command::Hessenberg(a) => &a.output.out,
        Command::Srcheck(a) => &a.output.out,
        Command::MomentsEcho(a) => &a.output.out,
    };
    out.as_deref()
}

/// Runs a parsed command and returns the rendered output. A failed
/// verification still carries its report in [`Failure::Mismatch`].
pub fn execute(command: &Command) -> CliResult<String> {
    match command {
        Command::Factor(a) => {
            let methods = a.method.as_deref().unwrap_or("gauss-borel");
            cmd_factor(&config(&a.system, a.count, methods, &a.output)?)
        }
        Command::Verify(a) => {
            let methods = a.method.as_deref().unwrap_or("all");
            cmd_verify(&config(&a.system, a.count, methods, &a.output)?)
        }
        Command::Hessenberg(a) => cmd_hessenberg(a),
        Command::Srcheck(a) => cmd_srcheck(a),
        Command::MomentsEcho(a) => cmd_echo(a),
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("MOPFACT_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Config(format!(
            "MOPFACT_THREADS must be a positive integer, got {value:?}"
        ))
    })?;
    // A pool that already exists (repeated in-process runs) is kept.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn emit(text: &str, target: Option<&Path>) -> CliResult<()> {
    match target {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {f}");
        return f.exit_code();
    }
    let target = output_target(&cli.command);
    match execute(&cli.command) {
        Ok(text) => match emit(&text, target) {
            Ok(()) => 0,
            Err(f) => {
                eprintln!("error: {f}");
                f.exit_code()
            }
        },
        Err(f) => {
            if let Failure::Mismatch(report) = &f {
                if let Err(e) = emit(report, target) {
                    eprintln!("error: {e}");
                }
            }
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}
