#![allow(clippy::result_large_err)]

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qmut::doc::{self, Document, KindDoc, WordDocument};
use qmut::error::ApiError;
use qmut::ops::{self, GenerateAs, GenerateType, SideDoc};

/// Graded quiver mutation, exceptional sequences and squid recovery.
///
/// Commands other than `generate` and `serve` read a document on standard
/// input and write JSON to standard output. Errors are written to standard
/// error as JSON objects; the exit status is 1 for mathematical failures and
/// 2 for malformed input or bad arguments.
#[derive(Parser)]
#[command(name = "qmut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    Canonical,
    Squid,
}

#[derive(Clone, Copy, ValueEnum)]
enum AsArg {
    Graded,
    Sequence,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(name = "T")]
    T,
    #[value(name = "E")]
    E,
    #[value(name = "M")]
    M,
    #[value(name = "X")]
    X,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a canonical or squid document for a weight sequence.
    Generate {
        #[arg(long = "type", value_enum)]
        ty: TypeArg,
        /// Comma-separated weights, each at least 2.
        #[arg(long, allow_hyphen_values = false)]
        weights: String,
        #[arg(long = "as", value_enum, default_value = "graded")]
        as_: AsArg,
    },
    /// Mutate a graded quiver at vertex K (numbered from 1).
    Mutate {
        #[arg(long)]
        at: usize,
        /// Forget the grading and apply Fomin-Zelevinsky mutation.
        #[arg(long)]
        fz: bool,
    },
    /// Check rank additivity, or with --solve fill in missing ranks.
    Ranks {
        #[arg(long)]
        solve: bool,
    },
    /// Infer sink/source tags from ranks and degree-1 arrows.
    Tags,
    /// Validate invariants and rank additivity.
    Verify,
    /// Mutate an exceptional sequence at positions L and L+1.
    Exmutate {
        #[arg(long)]
        at: usize,
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Run the recovery pipeline and emit the result.
    Recover {
        /// Attach up to this many per-step states.
        #[arg(long)]
        states: Option<usize>,
    },
    /// Replay a mutation word from FILE on the document.
    Replay {
        #[arg(long)]
        word: std::path::PathBuf,
        #[arg(long)]
        backward: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "QMUT_ADDR", default_value = "127.0.0.1:8080")]
        addr: String,
    },
}

fn read_stdin() -> Result<Document, ApiError> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| ApiError::usage(format!("cannot read standard input: {e}")))?;
    doc::parse(&text)
}

fn run(cli: Cli) -> Result<(String, bool), ApiError> {
    let out = match cli.command {
        Command::Generate { ty, weights, as_ } => {
            let ty = match ty {
                TypeArg::Canonical => GenerateType::Canonical,
                TypeArg::Squid => GenerateType::Squid,
            };
            let as_ = match as_ {
                AsArg::Graded => GenerateAs::Graded,
                AsArg::Sequence => GenerateAs::Sequence,
            };
            doc::serialize(&ops::generate(ty, &weights, as_)?)
        }
        Command::Mutate { at, fz } => doc::serialize(&ops::mutate(&read_stdin()?, at, !fz)?.0),
        Command::Ranks { solve: true } => doc::serialize(&ops::solve_ranks(&read_stdin()?)?),
        Command::Ranks { solve: false } => {
            let report = ops::additivity(&read_stdin()?)?;
            let ok = report["ok"] == serde_json::Value::Bool(true);
            return Ok((doc::to_text(&report), ok));
        }
        Command::Tags => doc::serialize(&ops::infer_tags(&read_stdin()?)?),
        Command::Verify => {
            let report = ops::verify(&read_stdin()?)?;
            return Ok((doc::to_text(&report), report.ok));
        }
        Command::Exmutate { at, side, kind } => {
            let side = match side {
                SideArg::Left => SideDoc::Left,
                SideArg::Right => SideDoc::Right,
            };
            let kind = kind.map(|k| match k {
                KindArg::T => KindDoc::T,
                KindArg::E => KindDoc::E,
                KindArg::M => KindDoc::M,
                KindArg::X => KindDoc::X,
            });
            doc::serialize(&ops::exmutate(&read_stdin()?, at, side, kind)?.0)
        }
        Command::Recover { states } => doc::to_text(&ops::recover(&read_stdin()?, states)?),
        Command::Replay { word, backward } => {
            let text = std::fs::read_to_string(&word)
                .map_err(|e| ApiError::usage(format!("cannot read {}: {e}", word.display())))?;
            let w: WordDocument = doc::parse_json(&text)?;
            doc::serialize(&ops::replay(&read_stdin()?, &w, backward)?)
        }
        Command::Serve { addr } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| ApiError::internal(e.to_string()))?;
            rt.block_on(qmut::service::serve(&addr))
                .map_err(|e| ApiError::usage(format!("cannot serve on {addr}: {e}")))?;
            String::new()
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = ApiError::usage(e.render().to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
