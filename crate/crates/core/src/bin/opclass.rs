use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use opclass::analyze::{self, ContinuationOptions, ExtensionOptions, MatrixOptions, ShiftOptions, ToeplitzOptions};
use opclass::extensions::ExtensionSpec;
use opclass::io;
use opclass::linalg::DEFAULT_TOL;
use opclass::rational::{self, ExactRational};
use opclass::registry::{self, RegistryEntry};
use opclass::report::{ClassReportDocument, Subject, Tolerances};
use opclass::sample;
use opclass::shift::{Tail, WeightSequence};
use opclass::toeplitz::{self, MatrixSymbol};

/// Classify operators against normal, n-normal, subnormal and related classes.
#[derive(Parser)]
#[command(name = "opclass", version)]
struct Cli {
    /// Numerical tolerance for residual and PSD tests.
    #[arg(long, global = true, env = "OPCLASS_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Write the JSON report to this file ("-" for stdout).
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unilateral weighted shifts.
    #[command(subcommand)]
    Shift(ShiftCommand),
    /// Dense complex matrices.
    #[command(subcommand)]
    Matrix(AnalyzeOnly<MatrixArgs>),
    /// Finite sections of block Toeplitz operators.
    #[command(subcommand)]
    Toeplitz(AnalyzeOnly<ToeplitzArgs>),
    /// Restrictions of n-normal operators to invariant subspaces.
    #[command(subcommand)]
    Extend(AnalyzeOnly<ExtendArgs>),
    /// Known examples and their expected verdicts.
    #[command(subcommand)]
    Registry(RegistryCommand),
}

#[derive(Subcommand)]
enum AnalyzeOnly<A: Args> {
    /// Run the full class sweep.
    Analyze(A),
}

#[derive(Subcommand)]
enum ShiftCommand {
    /// Run the full class sweep on a weight sequence.
    Analyze(ShiftArgs),
    /// Extend a seed by the recurrence forced by n-quasinormality.
    DeriveQuasinormal(DeriveArgs),
}

#[derive(Args)]
struct ShiftArgs {
    /// Weights JSON file: {"prefix": [...], "tail": {"constant": x} | {"periodic": [...]}}.
    #[arg(long, conflicts_with_all = ["prefix", "tail_const", "tail_periodic"])]
    weights: Option<PathBuf>,
    /// Comma-separated prefix weights ("1/2,0.75").
    #[arg(long, value_name = "LIST")]
    prefix: Option<String>,
    /// Constant tail weight.
    #[arg(long, value_name = "X", conflicts_with = "tail_periodic")]
    tail_const: Option<String>,
    /// Comma-separated periodic tail cycle.
    #[arg(long, value_name = "LIST")]
    tail_periodic: Option<String>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Largest k for k-hyponormality.
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    /// Section size for the quadratic hyponormality probe.
    #[arg(long, default_value_t = 40)]
    truncation: usize,
}

#[derive(Args)]
struct DeriveArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated seed of length 2n-1 ("1,4/5,9/10").
    #[arg(long, value_name = "LIST")]
    seed: String,
    #[arg(long, default_value_t = 8)]
    steps: usize,
    /// Exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Escape bound for the boundedness probe.
    #[arg(long, default_value_t = 1e6)]
    bound: f64,
    /// Steps for the boundedness probe.
    #[arg(long, default_value_t = 500)]
    horizon: usize,
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix JSON file: {"rows": r, "cols": c, "entries": [[re, im], ...]}.
    file: PathBuf,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
}

#[derive(Args)]
struct ToeplitzArgs {
    /// Symbol JSON file: {"block_size": k, "coeffs": {"d": matrix, ...}}.
    file: PathBuf,
    #[arg(long, default_value_t = 16)]
    order: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = toeplitz::DEFAULT_GRID_POINTS)]
    grid: usize,
}

#[derive(Args)]
struct ExtendArgs {
    /// Extension JSON file: {"ambient": matrix, "subspace_basis": matrix, "n": int}.
    #[arg(required_unless_present = "seed")]
    file: Option<PathBuf>,
    /// Analyze a random sub-2-normal example generated from this seed instead.
    #[arg(long, conflicts_with = "file")]
    seed: Option<u64>,
    /// Largest moment index for the POVM check.
    #[arg(long, default_value_t = 4)]
    imax: usize,
    /// Power used by the quasinormality harness.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    /// Spectral-set test polynomial, constant term first; entries "re" or "re:im".
    #[arg(long, default_value = "0,1")]
    poly: String,
}

#[derive(Subcommand)]
enum RegistryCommand {
    /// Check every entry; exits 1 when an expected verdict is not reproduced.
    Run(RegistryArgs),
}

#[derive(Args)]
struct RegistryArgs {
    /// Only entries whose name contains this string.
    #[arg(long)]
    filter: Option<String>,
    /// Additional entries (JSON array) checked alongside the built-in ones.
    #[arg(long)]
    extra: Option<PathBuf>,
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Mismatch,
    Input(String),
}

impl From<opclass::Error> for Failure {
    fn from(e: opclass::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_list(text: &str) -> Result<Vec<ExactRational>, Failure> {
    text.split(',')
        .map(|s| rational::parse_rational(s.trim()).map_err(Failure::from))
        .collect()
}

fn emit_json(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        None => Ok(()),
        Some(p) if p.as_os_str() == "-" => {
            println!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
    }
}

fn emit(cli: &Cli, doc: &ClassReportDocument) -> Result<(), Failure> {
    if !matches!(&cli.json, Some(p) if p.as_os_str() == "-") {
        print!("{}", doc.to_markdown());
    }
    emit_json(&cli.json, &doc.to_json())
}

fn shift_weights(args: &ShiftArgs) -> Result<WeightSequence, Failure> {
    if let Some(path) = &args.weights {
        return Ok(io::from_json_str(&read(path)?)?);
    }
    let prefix = match &args.prefix {
        Some(p) if !p.trim().is_empty() => parse_list(p)?,
        _ => Vec::new(),
    };
    let tail = match (&args.tail_const, &args.tail_periodic) {
        (Some(c), None) => Tail::Constant(rational::parse_rational(c.trim())?),
        (None, Some(p)) => Tail::Periodic(parse_list(p)?),
        _ => {
            return Err(Failure::Input(
                "give --weights, or a tail with --tail-const or --tail-periodic".into(),
            ))
        }
    };
    Ok(WeightSequence::new(prefix, tail)?)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tol = cli.tol;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Input(format!("tolerance must be positive, got {tol}")));
    }
    match &cli.command {
        Command::Shift(ShiftCommand::Analyze(args)) => {
            let w = shift_weights(args)?;
            let opts = ShiftOptions {
                n: args.n,
                k_max: args.kmax,
                truncation: args.truncation,
                ..ShiftOptions::default()
            };
            emit(cli, &analyze::analyze_shift(&w, &opts, tol)?)
        }
        Command::Shift(ShiftCommand::DeriveQuasinormal(args)) => {
            let seed = parse_list(&args.seed)?;
            let opts = ContinuationOptions {
                n: args.n,
                steps: args.steps,
                exact: args.exact,
                bound: args.bound,
                horizon: args.horizon,
            };
            let doc = analyze::derive_quasinormal(&seed, &opts, tol)?;
            let to_stdout = matches!(&cli.json, Some(p) if p.as_os_str() == "-");
            if let Some(v) = doc.verdict("continuation").filter(|_| !to_stdout) {
                let weights: Vec<String> = v.detail["weights"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|x| x.as_str().map(str::to_owned).unwrap_or_else(|| x.to_string()))
                    .collect();
                println!("weights: {}", weights.join(", "));
            }
            emit(cli, &doc)
        }
        Command::Matrix(AnalyzeOnly::Analyze(args)) => {
            let t = io::parse_matrix(&read(&args.file)?)?;
            let opts = MatrixOptions {
                n: args.n,
                k_max: args.kmax,
            };
            emit(cli, &analyze::analyze_matrix(&t, &opts, tol)?)
        }
        Command::Toeplitz(AnalyzeOnly::Analyze(args)) => {
            let symbol: MatrixSymbol = io::from_json_str(&read(&args.file)?)?;
            let opts = ToeplitzOptions {
                order: args.order,
                n: args.n,
                grid_points: args.grid,
            };
            emit(cli, &analyze::analyze_toeplitz(&symbol, &opts, tol)?)
        }
        Command::Extend(AnalyzeOnly::Analyze(args)) => {
            let spec: ExtensionSpec = match (&args.file, args.seed) {
                (Some(path), _) => io::from_json_str(&read(path)?)?,
                (None, Some(seed)) => sample::rr_extension_spec(&mut sample::rng(seed), 2, 1),
                (None, None) => unreachable!("clap requires a file or a seed"),
            };
            let opts = ExtensionOptions {
                i_max: args.imax,
                m: args.m,
                k_max: args.kmax,
                poly: analyze::parse_complex_list(&args.poly)?,
            };
            emit(cli, &analyze::analyze_extension(&spec, &opts, tol)?)
        }
        Command::Registry(RegistryCommand::Run(args)) => {
            let mut entries = registry::builtin_entries();
            if let Some(path) = &args.extra {
                let extra: Vec<RegistryEntry> = io::from_json_str(&read(path)?)?;
                entries.extend(extra);
            }
            let report = registry::run(&entries, args.filter.as_deref(), tol);
            if !matches!(&cli.json, Some(p) if p.as_os_str() == "-") {
                for entry in &report.entries {
                    for claim in &entry.claims {
                        let status = if claim.pass { "PASS" } else { "FAIL" };
                        let observed = match claim.observed {
                            Some(true) => "holds",
                            Some(false) => "fails",
                            None => "error",
                        };
                        println!(
                            "{status}  {:<28} {:<48} expected {:<6} observed {observed}",
                            entry.name,
                            serde_json::to_string(&claim.claim).unwrap_or_default(),
                            serde_json::to_value(claim.expected)
                                .ok()
                                .and_then(|v| v.as_str().map(str::to_owned))
                                .unwrap_or_default(),
                        );
                    }
                }
                println!(
                    "{} entries, {}",
                    report.entries.len(),
                    if report.all_pass {
                        "all expected verdicts reproduced"
                    } else {
                        "MISMATCH"
                    }
                );
            }
            let mut doc = ClassReportDocument::new(
                Subject::Registry,
                serde_json::json!({
                    "filter": args.filter,
                    "entries": report.entries.iter().map(|e| e.name.as_str()).collect::<Vec<_>>(),
                }),
                Tolerances {
                    tol,
                    settings: Default::default(),
                },
            );
            for entry in &report.entries {
                doc.push(entry.name.clone(), entry.pass, entry);
            }
            emit_json(&cli.json, &doc.to_json())?;
            if report.all_pass {
                Ok(())
            } else {
                Err(Failure::Mismatch)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
