//! `fosf`: fuzzy order-sorted feature terms from the command line.
//!
//! Exit status: 0 on success, 1 for unreadable or malformed input
//! (including ontologies that are cyclic or not lattices), 2 when input is
//! well formed but a semantic check fails. An inconsistent unification is
//! a result, not a failure.

mod commands;
mod session;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fuzzy_osf::semantics::HarnessConfig;

use commands::Output;
use session::{CliError, CliResult, Options, Session};

#[derive(Parser)]
#[command(name = "fosf", version, about = "Fuzzy order-sorted feature terms")]
struct Cli {
    /// Ontology file (sorts, features, edges, similarities).
    #[arg(long, global = true)]
    ontology: Option<String>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Show normalization steps.
    #[arg(long, global = true)]
    trace: bool,
    /// Answer degree queries from a dense closure matrix.
    #[arg(long, global = true)]
    dense: bool,
    /// Seed for randomized rule order and the theorem harness; 0 keeps the
    /// deterministic order.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an ontology file.
    Check { file: Option<String> },
    /// List every non-trivial positive subsumption degree.
    Closure,
    /// Degree to which one sort is a subsort of another.
    Degree { sub: String, sup: String },
    /// Greatest lower bound of two sorts.
    Glb { a: String, b: String },
    /// Normalize a clause (or, with --term, the clause of a term).
    Normalize {
        input: String,
        #[arg(long)]
        term: bool,
    },
    /// Unify two terms, or every `first ; second` line of a file.
    Unify {
        #[arg(required_unless_present = "batch")]
        first: Option<String>,
        #[arg(required_unless_present = "batch")]
        second: Option<String>,
        #[arg(long, conflicts_with_all = ["first", "second"])]
        batch: Option<String>,
    },
    /// Degree to which the first term is subsumed by the second.
    Subsumes { specific: String, general: String },
    /// Add fuzzy edges derived from the similarity lines of the ontology.
    Enrich,
    /// Graphviz of the ontology, or of a term.
    Dot { term: Option<String> },
    /// Denotation of a term in a finite interpretation.
    Eval {
        #[arg(long)]
        interp: String,
        term: String,
        element: Option<String>,
    },
    /// Run the randomized semantic checks.
    Theorems {
        #[arg(long, default_value_t = 4)]
        max_domain: usize,
        #[arg(long, default_value_t = 5)]
        max_sorts: usize,
        #[arg(long, default_value_t = 2)]
        max_features: usize,
        #[arg(long, default_value_t = 3)]
        max_tags: usize,
        #[arg(long, default_value_t = 200)]
        rounds: usize,
    },
}

fn session(cli: &Cli, options: Options) -> CliResult<Session> {
    let path = cli
        .ontology
        .as_deref()
        .ok_or_else(|| CliError::input("--ontology is required for this command"))?;
    Session::open(path, options)
}

/// Run the command; the flag is false when the output reports a failure.
fn run(cli: &Cli) -> CliResult<(Output, bool)> {
    let options = Options {
        json: cli.json,
        trace: cli.trace,
        dense: cli.dense,
        seed: cli.seed,
    };
    let ok = |o| Ok((o, true));
    match &cli.command {
        Command::Check { file } => {
            let path = file
                .as_deref()
                .or(cli.ontology.as_deref())
                .ok_or_else(|| CliError::input("no ontology file given"))?;
            ok(commands::check(path, &options)?)
        }
        Command::Closure => ok(commands::closure(&session(cli, options)?)),
        Command::Degree { sub, sup } => ok(commands::degree(&session(cli, options)?, sub, sup)?),
        Command::Glb { a, b } => ok(commands::glb(&session(cli, options)?, a, b)?),
        Command::Normalize { input, term } => {
            ok(commands::normalize(&session(cli, options)?, input, *term)?)
        }
        Command::Unify { first, second, batch } => {
            let s = session(cli, options)?;
            match (batch, first, second) {
                (Some(path), _, _) => commands::unify_batch(&s, path),
                (None, Some(a), Some(b)) => ok(commands::unify(&s, a, b)?),
                _ => Err(CliError::input("unify needs two terms or --batch")),
            }
        }
        Command::Subsumes { specific, general } => {
            ok(commands::subsumes(&session(cli, options)?, specific, general)?)
        }
        Command::Enrich => ok(commands::enrich(&session(cli, options)?)?),
        Command::Dot { term } => ok(commands::dot(&session(cli, options)?, term.as_deref())?),
        Command::Eval { interp, term, element } => ok(commands::eval(
            &session(cli, options)?,
            interp,
            term,
            element.as_deref(),
        )?),
        Command::Theorems { max_domain, max_sorts, max_features, max_tags, rounds } => {
            let config = HarnessConfig {
                seed: cli.seed,
                max_domain: *max_domain,
                max_sorts: *max_sorts,
                max_features: *max_features,
                max_tags: *max_tags,
                rounds: *rounds,
            };
            Ok(commands::theorems(&options, config))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((output, passed)) => {
            match output {
                Output::Text(t) => print!("{t}"),
                Output::Json(v) => println!("{}", serde_json::to_string_pretty(&v).expect("json")),
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                // Batch lines fail on bad input; the harness fails semantically.
                let code = if matches!(cli.command, Command::Unify { .. }) { 1 } else { 2 };
                ExitCode::from(code)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
