use std::fs;
use std::io::{self, ErrorKind, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use action_triple::commutant::DEFAULT_BUDGET;
use action_triple::doc::{gen_classa, gen_liar, parse_scenario, run, Analysis, ScenarioDoc};
use action_triple::report::Format;
use action_triple::Error;

#[derive(Parser)]
#[command(
    name = "action-triple",
    version,
    about = "Exact analysis of update/discrimination/self-representation triples"
)]
struct Cli {
    /// Report encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis listed in a scenario file (`-` reads stdin).
    Analyze {
        /// Scenario file, or `-` for stdin.
        file: String,
    },
    /// Leibniz expansion of a named expression.
    Expand {
        /// Scenario file, or `-` for stdin.
        file: String,
        /// Name of an entry in `expressions`.
        #[arg(long)]
        expr: String,
    },
    /// Basis of the commutant of a named matrix.
    Commutant {
        /// Scenario file, or `-` for stdin.
        file: String,
        /// Name of an entry in `matrices`.
        #[arg(long)]
        matrix: String,
    },
    /// Search the common commutant of the named matrices for a projector.
    ProjectorSearch {
        /// Scenario file, or `-` for stdin.
        file: String,
        /// Comma-separated matrix names.
        #[arg(long, value_delimiter = ',', required = true)]
        of: Vec<String>,
        /// Maximum number of candidates tried.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Seed for random candidates (defaults to the document seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Defect between update-then-describe and describe-then-update.
    Diagonal {
        /// Scenario file, or `-` for stdin.
        file: String,
        /// Index into the admissible set (or the standard basis); all states when omitted.
        #[arg(long)]
        state: Option<usize>,
    },
    /// Closure and transcendence over the admissible set.
    Inclosure {
        /// Scenario file, or `-` for stdin.
        file: String,
    },
    /// Emit a scenario document.
    Gen {
        #[command(subcommand)]
        scenario: GenCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Liar collapse, a supplemented non-collapse and a commutant.
    Liar {
        /// Ambient dimension, at least 2.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Class A toy system; fixed update unless `--active`.
    #[command(name = "classA")]
    ClassA {
        /// Update swaps the feature halves instead of fixing them.
        #[arg(long)]
        active: bool,
        /// Ambient dimension, even.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_input(file: &str) -> Result<String, Failure> {
    let result = if file == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map(|_| text)
    } else {
        fs::read_to_string(file)
    };
    result.map_err(|e| Failure::Usage(format!("cannot read {file}: {e}")))
}

fn load(file: &str) -> Result<ScenarioDoc, Failure> {
    Ok(parse_scenario(&read_input(file)?)?)
}

fn single(file: &str, analysis: Analysis) -> Result<ScenarioDoc, Failure> {
    let mut doc = load(file)?;
    doc.analysis = vec![analysis];
    doc.validate()?;
    Ok(doc)
}

fn execute(cli: Cli) -> Result<String, Failure> {
    let doc = match cli.command {
        Command::Analyze { file } => load(&file)?,
        Command::Expand { file, expr } => single(&file, Analysis::Expand { expr })?,
        Command::Commutant { file, matrix } => single(&file, Analysis::Commutant { matrix })?,
        Command::ProjectorSearch { file, of, budget, seed } => {
            single(&file, Analysis::ProjectorSearch { of, budget: Some(budget), seed })?
        }
        Command::Diagonal { file, state } => single(&file, Analysis::Diagonal { state })?,
        Command::Inclosure { file } => single(&file, Analysis::Inclosure)?,
        Command::Gen { scenario } => {
            let doc = match scenario {
                GenCommand::Liar { dim } => gen_liar(dim)?,
                GenCommand::ClassA { active, dim } => gen_classa(dim, active)?,
            };
            return Ok(doc.to_json());
        }
    };
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    Ok(run(&doc).render(format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(out) => match io::stdout().write_all(out.as_bytes()) {
            Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
            _ => ExitCode::SUCCESS,
        },
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Parse { .. }) { 1 } else { 2 })
        }
    }
}
