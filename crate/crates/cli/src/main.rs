use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use specfam::linalg::FieldMode;
use specfam_cli::error::Result;
use specfam_cli::gallery::{Operator, OperatorKind, OperatorSpec};
use specfam_cli::market::format_matrix_market;
use specfam_cli::report::{write_atomic, Report, RunConfig};
use specfam_cli::verify::{run, Scope};

#[derive(Debug, Parser)]
#[command(
    name = "specfam",
    version,
    about = "Spectral families of self-adjoint matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a gallery operator as a Matrix Market file.
    Gen(OperatorArgs),
    /// Build the spectral family by both routes and check it.
    Analyze(RunArgs),
    /// Split the operator into its nonpositive and nonnegative parts.
    Split(RunArgs),
    /// Riemann–Stieltjes sums, integral forms and operator reconstruction.
    Reconstruct(RunArgs),
    /// Run the full battery.
    Verify(RunArgs),
}

#[derive(Debug, Args)]
struct OperatorArgs {
    /// Operator kind; `--input` implies `file`.
    #[arg(long, value_enum, default_value = "laplacian1d")]
    kind: OperatorKind,
    /// Dimension; for `diagonal` it defaults to the spectrum length.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "real")]
    mode: Mode,
    /// Comma-separated eigenvalues for `--kind diagonal`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    spectrum: Vec<f64>,
    /// Matrix Market input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    operator: OperatorArgs,
    /// Largest partition refinement k.
    #[arg(long, default_value_t = 64)]
    k_max: u64,
    /// Multiplies every non-strict tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Mode {
    Real,
    Complex,
}

const DEFAULT_DIM: usize = 16;

impl OperatorArgs {
    fn spec(&self) -> OperatorSpec {
        let kind = if self.input.is_some() {
            OperatorKind::File
        } else {
            self.kind
        };
        let dim = match (self.dim, kind) {
            (Some(d), _) => d,
            (None, OperatorKind::Diagonal) => self.spectrum.len(),
            (None, _) => DEFAULT_DIM,
        };
        OperatorSpec {
            kind,
            dim,
            seed: self.seed,
            spectrum: self.spectrum.clone(),
            path: self.input.clone(),
            mode: match self.mode {
                Mode::Real => FieldMode::Real,
                Mode::Complex => FieldMode::Complex,
            },
        }
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => write_atomic(path, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|()| stdout.flush())
                    .map_err(|e| specfam_cli::error::CliError::Io {
                        path: "<stdout>".into(),
                        source: e,
                    })
            }
        }
    }
}

fn run_battery(scope: Scope, args: &RunArgs) -> Result<bool> {
    let spec = args.operator.spec();
    let (op, loaded) = spec.generate()?;
    if !(args.tol_scale > 0.0 && args.tol_scale.is_finite()) {
        return Err(specfam_cli::error::CliError::Spec(format!(
            "--tol-scale must be positive, got {}",
            args.tol_scale
        )));
    }
    let config = RunConfig {
        seed: args.operator.seed,
        k_max: args.k_max,
        tol_scale: args.tol_scale,
        ..RunConfig::default()
    };
    let mut report = Report::new(scope.name(), spec, loaded, config);
    match &op {
        Operator::Real(a) => run(a, scope, &config, &mut report),
        Operator::Complex(a) => run(a, scope, &config, &mut report),
    }
    let report = report.finish();
    args.operator.emit(&report.to_json()?)?;
    Ok(report.passed)
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(args) => {
            let (op, _) = args.spec().generate()?;
            let text = match &op {
                Operator::Real(a) => format_matrix_market(a),
                Operator::Complex(a) => format_matrix_market(a),
            };
            args.emit(&text)?;
            Ok(true)
        }
        Command::Analyze(args) => run_battery(Scope::Analyze, &args),
        Command::Split(args) => run_battery(Scope::Split, &args),
        Command::Reconstruct(args) => run_battery(Scope::Reconstruct, &args),
        Command::Verify(args) => run_battery(Scope::Verify, &args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
