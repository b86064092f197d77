use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ftconsensus::graph::WeightedDigraph;
use ftconsensus::scenario::{
    analyze_graph, builtin_names, builtin_scenario, exit_code, parse_scenario, run, Command, RunOutcome, Scenario,
};
use ftconsensus::ScenarioError;

#[derive(Parser)]
#[command(
    name = "ftconsensus",
    version,
    about = "Finite-time consensus simulation and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate a scenario and write the trajectory CSV and diagnostics JSON.
    Simulate {
        /// Scenario file, or `builtin:<name>`.
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        diag: Option<PathBuf>,
        /// Also write the bound report here.
        #[arg(long)]
        bound: Option<PathBuf>,
    },
    /// Structural and spectral report for a graph or a scenario segment.
    Analyze {
        /// Graph JSON (`{"n": .., "weights": [[..]]}`), a scenario file, or
        /// `builtin:<name>`.
        #[arg(long)]
        graph: String,
        /// Schedule segment to analyze when the input is a scenario.
        #[arg(long, default_value_t = 0)]
        segment: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence-time bound report.
    Bound {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the names of the built-in scenarios.
    ListBuiltins,
    /// Write a built-in scenario document.
    Builtin {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &str) -> Result<String, ScenarioError> {
    fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_string(),
        source,
    })
}

fn load_scenario(arg: &str) -> Result<Scenario, ScenarioError> {
    match arg.strip_prefix("builtin:") {
        Some(name) => builtin_scenario(name),
        None => parse_scenario(&read(arg)?),
    }
}

fn analyze(graph: &str, segment: usize, out: Option<PathBuf>) -> Result<RunOutcome, ScenarioError> {
    if graph.starts_with("builtin:") {
        return run(&Command::Analyze { segment, out }, &load_scenario(graph)?);
    }
    let text = read(graph)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| ScenarioError::Json {
        path: "(document)".into(),
        message: e.to_string(),
    })?;
    if value.get("weights").is_none() {
        return run(&Command::Analyze { segment, out }, &parse_scenario(&text)?);
    }
    let de = &mut serde_json::Deserializer::from_str(&text);
    let g: WeightedDigraph = serde_path_to_error::deserialize(de).map_err(|e| ScenarioError::Json {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })?;
    let mut text = serde_json::to_string_pretty(&analyze_graph(&g)?).expect("report serializes");
    text.push('\n');
    let mut outcome = RunOutcome::default();
    match out {
        Some(p) => {
            fs::write(&p, text).map_err(|source| ScenarioError::Io {
                path: p.display().to_string(),
                source,
            })?;
            outcome.written.push(p);
        }
        None => outcome.stdout = text,
    }
    Ok(outcome)
}

fn dispatch(cmd: Cmd) -> Result<RunOutcome, ScenarioError> {
    match cmd {
        Cmd::Simulate {
            scenario,
            out,
            diag,
            bound,
        } => run(&Command::Simulate { out, diag, bound }, &load_scenario(&scenario)?),
        Cmd::Analyze { graph, segment, out } => analyze(&graph, segment, out),
        Cmd::Bound { scenario, out } => run(&Command::Bound { out }, &load_scenario(&scenario)?),
        Cmd::ListBuiltins => Ok(RunOutcome {
            stdout: builtin_names().iter().map(|n| format!("{n}\n")).collect(),
            ..Default::default()
        }),
        Cmd::Builtin { name, out } => run(&Command::Builtin { out }, &builtin_scenario(&name)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(outcome) => {
            let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
            for m in &outcome.messages {
                eprintln!("{m}");
            }
            for p in &outcome.written {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
