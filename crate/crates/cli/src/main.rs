//! Command-line frontend: ordering queries over sums of ideals, membership,
//! cover computation, and coverability checks (forward, backward or both).
//!
//! Exit codes: 0 true/yes/complete, 1 false/no, 2 usage or input errors,
//! 3 budget exhausted / unknown, 4 disagreement between conclusive methods.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wsts_core::downset::DownSet;
use wsts_core::engine::{self, Budget, CoverStatus, Verdict};
use wsts_core::json;
use wsts_core::models::{parse_model, ParsedModel};
use wsts_core::text;

const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_DISAGREEMENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "wsts",
    version,
    about = "Downward-closed set algebra and coverability for well-structured transition systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide inclusion between two sums of ideals over a type.
    Leq {
        /// Type expression, e.g. `fin{a,b}*` or `(nat * nat)`
        r#type: String,
        /// Left-hand sum of ideals
        lhs: String,
        /// Right-hand sum of ideals
        rhs: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Decide membership of a value in a sum of ideals over a type.
    Member {
        /// Type expression
        r#type: String,
        /// Value literal
        value: String,
        /// Sum of ideals
        sre: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compute the cover of a model from an initial state.
    Cover {
        /// Model file (petri or flcs format)
        model: PathBuf,
        /// Initial state literal
        init: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Decide whether a state covering the target is reachable.
    Coverable {
        /// Model file (petri or flcs format)
        model: PathBuf,
        /// Initial state literal
        init: String,
        /// Target state literal
        target: String,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Args)]
struct BudgetArgs {
    /// Rounds of the cover loop
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    max_rounds: u64,
    /// Longest transition composite to accelerate
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    max_composite_len: u64,
    /// Ideals added to the antichain before giving up
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    max_adds: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_rounds: self.max_rounds,
            max_composite_len: self.max_composite_len as usize,
            max_adds: self.max_adds,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Default, PartialEq, Eq)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Default, PartialEq, Eq)]
enum Method {
    #[default]
    Forward,
    Backward,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> Result<u8, String> {
    match command {
        Command::Leq {
            r#type,
            lhs,
            rhs,
            format,
        } => {
            let ty = text::parse_type(&r#type).map_err(stringify)?;
            let lhs = DownSet::from_ideals(ty.clone(), text::parse_sre(&ty, &lhs).map_err(stringify)?)
                .map_err(stringify)?;
            let rhs = DownSet::from_ideals(ty.clone(), text::parse_sre(&ty, &rhs).map_err(stringify)?)
                .map_err(stringify)?;
            let verdict = lhs.leq(&rhs).map_err(stringify)?;
            print_boolean(verdict, format);
            Ok(if verdict { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Member {
            r#type,
            value,
            sre,
            format,
        } => {
            let ty = text::parse_type(&r#type).map_err(stringify)?;
            let value = text::parse_value(&ty, &value).map_err(stringify)?;
            let downset =
                DownSet::from_ideals(ty.clone(), text::parse_sre(&ty, &sre).map_err(stringify)?)
                    .map_err(stringify)?;
            let verdict = downset.member(&value).map_err(stringify)?;
            print_boolean(verdict, format);
            Ok(if verdict { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Cover {
            model,
            init,
            budget,
            format,
        } => {
            let parsed = load_model(&model)?;
            let engine_model = parsed.to_model();
            let x0 = text::parse_value(engine_model.state_type(), &init).map_err(stringify)?;
            let result = engine_model.cover(&x0, &budget.budget()).map_err(stringify)?;
            match format {
                Format::Json => println!("{}", json::cover_result_to_json_string(&result)),
                Format::Text => {
                    println!("cover: {}", text::print_sre(result.cover.parts()));
                    println!("status: {}", result.status.as_str());
                    let s = &result.stats;
                    println!(
                        "stats: iterations={} accelerations={} composites={} adds={} truncated={}",
                        s.iterations,
                        s.accelerations_applied,
                        s.composites_explored,
                        s.adds,
                        s.truncated_accelerations
                    );
                }
            }
            Ok(match result.status {
                CoverStatus::Complete => EXIT_TRUE,
                CoverStatus::BudgetExhausted => EXIT_UNKNOWN,
            })
        }
        Command::Coverable {
            model,
            init,
            target,
            method,
            budget,
            format,
        } => {
            let parsed = load_model(&model)?;
            coverable(&parsed, &init, &target, method, &budget.budget(), format)
        }
    }
}

#[derive(Serialize)]
struct CoverableJson {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    forward: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    backward: Option<&'static str>,
}

fn coverable(
    parsed: &ParsedModel,
    init: &str,
    target: &str,
    method: Method,
    budget: &Budget,
    format: Format,
) -> Result<u8, String> {
    let engine_model = parsed.to_model();
    let state_type = engine_model.state_type().clone();
    let x0 = text::parse_value(&state_type, init).map_err(stringify)?;
    let y = text::parse_value(&state_type, target).map_err(stringify)?;

    let forward = match method {
        Method::Forward | Method::Both => {
            Some(engine_model.coverable_forward(&x0, &y, budget).map_err(stringify)?)
        }
        Method::Backward => None,
    };
    let backward = match method {
        Method::Backward | Method::Both => {
            let net = parsed
                .as_petri()
                .ok_or_else(|| "the backward method needs a Petri model".to_string())?;
            let x0 = net.value_marking(&x0).map_err(stringify)?;
            let y = net.value_marking(&y).map_err(stringify)?;
            Some(engine::coverable_backward(net, &x0, &y).map_err(stringify)?)
        }
        Method::Forward => None,
    };

    let backward_verdict = backward.map(|b| if b { Verdict::Yes } else { Verdict::No });
    let disagree = matches!(
        (forward, backward_verdict),
        (Some(Verdict::Yes), Some(Verdict::No)) | (Some(Verdict::No), Some(Verdict::Yes))
    );
    let verdict = match (forward, backward_verdict) {
        (Some(Verdict::Unknown) | None, Some(b)) => b,
        (Some(f), _) => f, // agreement or flagged disagreement below
        (None, None) => unreachable!("some method always runs"),
    };

    match format {
        Format::Json => {
            let doc = CoverableJson {
                verdict: verdict.as_str(),
                forward: forward.map(|f| f.as_str()),
                backward: backward_verdict.map(|b| b.as_str()),
            };
            println!("{}", serde_json::to_string(&doc).expect("verdict serialization"));
        }
        Format::Text => {
            if method == Method::Both {
                println!("forward: {}", display(forward.unwrap()));
                println!("backward: {}", display(backward_verdict.unwrap()));
            }
            println!("{}", display(verdict));
        }
    }

    if disagree {
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(match verdict {
        Verdict::Yes => EXIT_TRUE,
        Verdict::No => EXIT_FALSE,
        Verdict::Unknown => EXIT_UNKNOWN,
    })
}

fn display(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Yes => "Yes",
        Verdict::No => "No",
        Verdict::Unknown => "Unknown",
    }
}

fn print_boolean(verdict: bool, format: Format) {
    match format {
        Format::Text => println!("{verdict}"),
        Format::Json => println!("{}", serde_json::json!({ "result": verdict })),
    }
}

fn load_model(path: &PathBuf) -> Result<ParsedModel, String> {
    let contents = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_model(&contents).map_err(stringify)
}

fn stringify(err: wsts_core::Error) -> String {
    err.to_string()
}
