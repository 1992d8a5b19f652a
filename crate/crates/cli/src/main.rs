use clap::{Args, Parser, Subcommand};
use ggue_core::Rational;
use ggue_pd::checks::{self, Mode};
use ggue_pd::commands::{self, FIGURE_LAMBDAS, FIGURE_N};
use ggue_pd::config::{default_precision, parse_rational, Format, NRange, RunConfig, MIN_PRECISION, PRECISION_ENV};
use ggue_pd::error::CliError;
use ggue_pd::output::emit;
use std::path::PathBuf;
use std::process::ExitCode;

/// Probability that a generalised GUE matrix is positive definite: exact
/// values from orthogonal polynomials and their large-N asymptotics.
#[derive(Parser, Debug)]
#[command(name = "ggue-pd", version)]
struct Cli {
    /// Working precision in decimal digits (default max(200, 12 N)).
    #[arg(long, global = true, env = PRECISION_ENV)]
    precision: Option<u32>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Output file; standard output if absent.
    #[arg(long = "out", global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// log P(N, lambda) exact and asymptotic over a grid.
    Positivity(GridArgs),
    /// Data of the exact-versus-asymptotic figure (defaults lambda = 0,1,2, N = 4..40 step 4).
    Figure1(GridArgs),
    /// Recurrence coefficients, string residuals and their large-N predictions.
    Coeffs(PointArgs),
    /// Certified log Z_N(s).
    Partition(PointArgs),
    /// Run the verification suite.
    Verify {
        /// Small grids, N <= 10; skips the convergence-rate checks.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Comma-separated lambda values, e.g. 0,1/2,2.5.
    #[arg(long, alias = "lambdas", allow_hyphen_values = true, value_delimiter = ',', value_parser = parse_rational)]
    lambda: Vec<Rational>,
    /// Single matrix size; overrides the range flags.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    n_min: Option<u32>,
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    n_step: Option<u32>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    s: Rational,
    #[arg(long)]
    n: u32,
}

impl GridArgs {
    fn config(self, cli: &Cli, defaults: (Vec<Rational>, NRange)) -> Result<RunConfig, CliError> {
        let lambdas = if self.lambda.is_empty() { defaults.0 } else { self.lambda };
        let range = match self.n {
            Some(n) => NRange::single(n),
            None => NRange {
                min: self.n_min.unwrap_or(defaults.1.min),
                max: self.n_max.unwrap_or(defaults.1.max),
                step: self.n_step.unwrap_or(defaults.1.step),
            },
        };
        RunConfig::new(cli.precision, lambdas, range, cli.out.clone(), cli.format)
    }
}

fn point_precision(cli: &Cli, p: &PointArgs) -> Result<u32, CliError> {
    if p.n < 1 {
        return Err(CliError::InvalidArgs("N must be at least 1".into()));
    }
    let digits = cli.precision.unwrap_or_else(|| default_precision(p.n));
    if digits < MIN_PRECISION {
        return Err(CliError::InvalidArgs(format!("precision must be at least {MIN_PRECISION} digits, got {digits}")));
    }
    Ok(digits)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let out = cli.out.clone();
    match cli.command {
        Command::Positivity(ref g) => {
            let g = GridArgs { lambda: g.lambda.clone(), ..*g };
            if g.lambda.is_empty() {
                return Err(CliError::InvalidArgs("--lambda is required".into()));
            }
            if g.n.is_none() && g.n_max.is_none() {
                return Err(CliError::InvalidArgs("give --n or --n-max".into()));
            }
            let default_min = g.n_min.or(g.n_max).unwrap_or(1);
            let config = g.config(&cli, (Vec::new(), NRange { min: default_min, max: default_min, step: 1 }))?;
            emit(&commands::cmd_positivity(&config)?, config.format, out.as_deref())
        }
        Command::Figure1(ref g) => {
            let g = GridArgs { lambda: g.lambda.clone(), ..*g };
            let lambdas = FIGURE_LAMBDAS.iter().map(|&l| Rational::int(l)).collect();
            let range = NRange { min: FIGURE_N.0, max: FIGURE_N.1, step: FIGURE_N.2 };
            let config = g.config(&cli, (lambdas, range))?;
            emit(&commands::cmd_figure1(&config)?, config.format, out.as_deref())
        }
        Command::Coeffs(ref p) => {
            let digits = point_precision(&cli, p)?;
            emit(&commands::cmd_coeffs(digits, &p.lambda, &p.s, p.n)?, cli.format, out.as_deref())
        }
        Command::Partition(ref p) => {
            let digits = point_precision(&cli, p)?;
            emit(&commands::cmd_partition(digits, &p.lambda, &p.s, p.n)?, cli.format, out.as_deref())
        }
        Command::Verify { quick } => {
            let report = checks::run(if quick { Mode::Quick } else { Mode::Full });
            let text = report.render();
            match &out {
                Some(p) => std::fs::write(p, &text)?,
                None => print!("{text}"),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification(format!("{} checks failed", report.failures().count())))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ggue-pd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
