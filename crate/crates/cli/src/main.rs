use std::fs;
use std::process::ExitCode;

use ccview::relcore::{Bounds, StateSpace};
use ccview::text::{self, Workspace};
use ccview::translate::{check_translator, classify_join, translate};
use ccview::verify::{correspondence, delete_all_heuristic};
use ccview::views::{complement_of, eval};
use ccview::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

#[derive(Parser)]
#[command(name = "ccview", version, about = "Check view update translators over finite databases")]
struct Cli {
    /// Document to load; may be repeated, names resolve across all of them.
    #[arg(long = "input", global = true, value_name = "FILE")]
    inputs: Vec<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the view of a state.
    Eval {
        #[arg(long)]
        view: String,
        #[arg(long)]
        state: String,
    },
    /// Translate a view update at a state into a base update.
    Translate {
        #[arg(long)]
        view: String,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        update: String,
        #[arg(long)]
        state: String,
    },
    /// Check the translator laws over every enumerated state.
    Check {
        #[arg(long)]
        view: String,
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value_t = Bounds::default().max_tuples)]
        max_tuples: u32,
    },
    /// Print the constructive complement of a view.
    Complement {
        #[arg(long)]
        view: String,
    },
    /// Compare the equivalence a translator induces with a complement.
    Correspond {
        #[arg(long)]
        view: String,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        complement: String,
        #[arg(long, default_value_t = Bounds::default().max_tuples)]
        max_tuples: u32,
    },
    /// Classify a join view by the declared keys.
    Classify {
        #[arg(long)]
        join: String,
    },
    /// List every valid state of the schema in canonical order.
    Enumerate {
        #[arg(long, default_value_t = Bounds::default().max_tuples)]
        max_tuples: u32,
    },
    /// Delete every view row and print the base state left behind.
    Heuristic {
        #[arg(long)]
        view: String,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        state: String,
    },
}

enum Failure {
    /// Bad input or a refused operation.
    Input(String, String),
    /// A check ran and did not pass.
    Check(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let class = e.class().to_string();
        match e {
            Error::NotATranslator(_) => Failure::Check(class, e.to_string()),
            _ => Failure::Input(class, e.to_string()),
        }
    }
}

struct Output {
    body: String,
    passed: bool,
}

fn emit(format: Format, text: String, json: Json, passed: bool) -> Output {
    let body = match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&json).expect("json values serialize") + "\n",
    };
    Output { body, passed }
}

fn space(ws: &Workspace, max_tuples: u32) -> Result<StateSpace, Error> {
    StateSpace::enumerate(ws.schema.clone(), Bounds::with_max_tuples(max_tuples))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let mut docs = Vec::new();
    for path in &cli.inputs {
        let src = fs::read_to_string(path).map_err(|e| Failure::Input("IoError".into(), format!("{path}: {e}")))?;
        docs.push(src);
    }
    let ws = Workspace::parse_all(&docs.iter().map(String::as_str).collect::<Vec<_>>())?;
    let schema = &ws.schema;
    let f = cli.format;
    Ok(match cli.command {
        Command::Eval { view, state } => {
            let v = ws.view(&view)?;
            let shape = v.shape(schema)?;
            let out = eval(v, schema, ws.state(&state)?)?;
            emit(
                f,
                text::render_view_state(schema, &shape, &out) + "\n",
                text::json_view_state(schema, &shape, &out),
                true,
            )
        }
        Command::Translate { view, strategy, update, state } => {
            let v = ws.view(&view)?;
            let u = ws.update(&update, v)?;
            let t = translate(v, ws.strategy(&strategy)?, &u, ws.state(&state)?, schema)?;
            emit(
                f,
                text::render_base_update(schema, &t) + "\n",
                text::json_base_update(schema, &t),
                true,
            )
        }
        Command::Check { view, strategy, max_tuples } => {
            let v = ws.view(&view)?;
            let shape = v.shape(schema)?;
            let r = check_translator(v, &ws.strategy(&strategy)?, &space(&ws, max_tuples)?)?;
            emit(
                f,
                text::render_translator_report(schema, &shape, &r),
                text::json_translator_report(schema, &shape, &r),
                r.passed(),
            )
        }
        Command::Complement { view } => {
            let c = complement_of(ws.view(&view)?, schema)?;
            let printed = text::print_view(&c, schema);
            emit(f, printed.clone() + "\n", json!({ "complement": printed }), true)
        }
        Command::Correspond { view, strategy, complement, max_tuples } => {
            let c = ws.view(&complement)?;
            let shape = c.shape(schema)?;
            let sp = space(&ws, max_tuples)?;
            let r = correspondence(ws.view(&view)?, &ws.strategy(&strategy)?, c, &sp)?;
            emit(
                f,
                text::render_correspondence(schema, &shape, sp.states(), &r),
                text::json_correspondence(schema, &shape, sp.states(), &r),
                r.passed(),
            )
        }
        Command::Classify { join } => {
            let kind = classify_join(schema, ws.view(&join)?)?;
            emit(f, format!("{kind}\n"), json!({ "kind": kind.to_string() }), true)
        }
        Command::Enumerate { max_tuples } => {
            let sp = space(&ws, max_tuples)?;
            let lines: String = sp
                .states()
                .iter()
                .enumerate()
                .map(|(i, s)| format!("{i}: {}\n", text::render_state(schema, s)))
                .collect();
            let all: Vec<Json> = sp.states().iter().map(|s| text::json_state(schema, s)).collect();
            emit(f, lines, Json::Array(all), true)
        }
        Command::Heuristic { view, strategy, state } => {
            let left = delete_all_heuristic(ws.view(&view)?, ws.strategy(&strategy)?, ws.state(&state)?, schema)?;
            emit(
                f,
                text::render_state(schema, &left) + "\n",
                text::json_state(schema, &left),
                true,
            )
        }
    })
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let head = msg.split("Usage:").next().unwrap_or_default();
            eprintln!("error[UsageError] {}", one_line(head.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.body);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(class, msg)) => {
            eprintln!("error[{class}] {}", one_line(&msg));
            ExitCode::from(2)
        }
        Err(Failure::Check(class, msg)) => {
            eprintln!("error[{class}] {}", one_line(&msg));
            ExitCode::from(1)
        }
    }
}
