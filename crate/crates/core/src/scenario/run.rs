use std::fs;
use std::path::{Path, PathBuf};

use super::{analyze_graph, bound_report, Scenario};
use crate::error::{ScenarioError, SimError};
use crate::sim::simulate;

/// What to do with a scenario. Paths left as `None` fall back to
/// `<name>.csv`, `<name>.diag.json` and `<name>.bound.json` for `Simulate`
/// and to standard output for the JSON commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Simulate {
        out: Option<PathBuf>,
        diag: Option<PathBuf>,
        bound: Option<PathBuf>,
    },
    Analyze {
        segment: usize,
        out: Option<PathBuf>,
    },
    Bound {
        out: Option<PathBuf>,
    },
    /// Writes the scenario document itself.
    Builtin {
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOutcome {
    pub written: Vec<PathBuf>,
    /// Text destined for standard output.
    pub stdout: String,
    /// Status lines destined for standard error.
    pub messages: Vec<String>,
}

/// Process exit status for an error: 1 for invalid input, 2 for I/O, 3 for a
/// simulation that blew up.
pub fn exit_code(e: &ScenarioError) -> i32 {
    match e {
        ScenarioError::Io { .. } => 2,
        ScenarioError::Sim(SimError::Diverged { .. }) => 3,
        _ => 1,
    }
}

fn write(path: &Path, text: &str, outcome: &mut RunOutcome) -> Result<(), ScenarioError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| ScenarioError::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    outcome.written.push(path.to_path_buf());
    Ok(())
}

fn emit(path: Option<&PathBuf>, text: String, outcome: &mut RunOutcome) -> Result<(), ScenarioError> {
    match path {
        Some(p) => write(p, &text, outcome),
        None => {
            outcome.stdout.push_str(&text);
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn run(command: &Command, scenario: &Scenario) -> Result<RunOutcome, ScenarioError> {
    let mut outcome = RunOutcome::default();
    let name = &scenario.name;
    match command {
        Command::Simulate { out, diag, bound } => {
            let traj = simulate(
                &scenario.schedule,
                &scenario.protocol,
                &scenario.x0,
                &scenario.integrator,
            )?;
            let want = scenario.outputs;
            if want.trajectory || out.is_some() {
                let p = out.clone().unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
                write(&p, &traj.to_csv(), &mut outcome)?;
            }
            if want.diagnostics || diag.is_some() {
                let p = diag
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{name}.diag.json")));
                write(&p, &to_json(&traj.diagnostics()), &mut outcome)?;
            }
            if want.bound || bound.is_some() {
                let p = bound
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{name}.bound.json")));
                write(&p, &to_json(&bound_report(scenario)?), &mut outcome)?;
            }
            match (traj.convergence_time, traj.consensus_value) {
                (Some(t), Some(v)) => outcome
                    .messages
                    .push(format!("{name}: consensus at t = {t} with value {v}")),
                _ => outcome.messages.push(format!(
                    "{name}: disagreement {:.3e} still above consensus_tol {:.3e} at t_max = {}",
                    traj.disagreement.last().copied().unwrap_or(f64::NAN),
                    traj.consensus_tol,
                    scenario.integrator.t_max
                )),
            }
        }
        Command::Analyze { segment, out } => {
            let segs = scenario.schedule.segments();
            let seg = segs.get(*segment).ok_or_else(|| {
                ScenarioError::invalid(
                    "segment",
                    format!("{segment} is out of range; the schedule has {} segments", segs.len()),
                )
            })?;
            emit(out.as_ref(), to_json(&analyze_graph(&seg.graph)?), &mut outcome)?;
        }
        Command::Bound { out } => {
            emit(out.as_ref(), to_json(&bound_report(scenario)?), &mut outcome)?;
        }
        Command::Builtin { out } => {
            emit(out.as_ref(), scenario.to_json(), &mut outcome)?;
        }
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin_scenario;

    #[test]
    fn simulate_writes_requested_files() {
        let dir = tempfile::tempdir().unwrap();
        let s = builtin_scenario("two-agent").unwrap();
        let cmd = Command::Simulate {
            out: Some(dir.path().join("t.csv")),
            diag: Some(dir.path().join("d.json")),
            bound: Some(dir.path().join("b.json")),
        };
        let o = run(&cmd, &s).unwrap();
        assert_eq!(o.written.len(), 3);
        let diag: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
        assert_eq!(diag["conserved_kind"], "mean");
        assert!((diag["consensus_value"].as_f64().unwrap() - 0.35).abs() < 1e-12);
        assert!(o.messages[0].contains("consensus at"));
    }

    #[test]
    fn json_commands_default_to_stdout() {
        let s = builtin_scenario("cycle6").unwrap();
        let o = run(&Command::Bound { out: None }, &s).unwrap();
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        for key in ["V0", "constants", "bound", "thresholds"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(o.written.is_empty());
    }

    #[test]
    fn segment_out_of_range() {
        let s = builtin_scenario("counterexample").unwrap();
        let e = run(&Command::Analyze { segment: 5, out: None }, &s).unwrap_err();
        assert_eq!(exit_code(&e), 1);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        let s = builtin_scenario("cycle6").unwrap();
        let e = run(
            &Command::Bound {
                out: Some(blocker.join("sub").join("b.json")),
            },
            &s,
        )
        .unwrap_err();
        assert_eq!(exit_code(&e), 2);
    }
}
