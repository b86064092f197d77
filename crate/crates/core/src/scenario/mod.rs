//! Scenario documents, built-in scenarios and the command runner.
//!
//! A scenario document is JSON:
//!
//! ```json
//! {
//!   "name": "two-agent",
//!   "x0": [0.3, 0.4],
//!   "protocol": {"kind": "P2", "exponents": {"uniform": 0.5}},
//!   "graph": {"n": 2, "weights": [[0, 1], [1, 0]]}
//! }
//! ```
//!
//! Either `graph` (a fixed topology) or `schedule` (switching segments) must
//! be present. Everything else is optional.

mod builtins;
mod report;
mod run;

use serde::{Deserialize, Serialize};

pub use builtins::{builtin_names, builtin_scenario, stand_in_graph};
pub use report::{analyze_graph, bound_report, GershgorinReport, GraphReport};
pub use run::{exit_code, run, Command, RunOutcome};

use crate::analysis::ReferenceValues;
use crate::error::ScenarioError;
use crate::graph::WeightedDigraph;
use crate::protocol::{ExponentProfile, ProtocolKind, ProtocolSpec};
use crate::sim::{default_consensus_tol, smallest_exponent, IntegratorConfig, ScheduleDocument, SwitchingSchedule};

/// Which files `simulate` writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFlags {
    #[serde(default = "yes")]
    pub trajectory: bool,
    #[serde(default = "yes")]
    pub diagnostics: bool,
    #[serde(default)]
    pub bound: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputFlags {
    fn default() -> Self {
        OutputFlags {
            trajectory: true,
            diagnostics: true,
            bound: false,
        }
    }
}

/// Pair of uniform exponents whose rate crossover levels are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaPair {
    pub low: f64,
    pub high: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProtocolDocument {
    kind: ProtocolKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponents: Option<ExponentProfile>,
}

/// Raw scenario as written in JSON, before cross-field validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDocument {
    name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    description: String,
    x0: Vec<f64>,
    protocol: ProtocolDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<WeightedDigraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schedule: Option<ScheduleDocument>,
    #[serde(default)]
    integrator: IntegratorConfig,
    #[serde(default)]
    outputs: OutputFlags,
    #[serde(default, skip_serializing_if = "is_false")]
    require_symmetric_exponents: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    compare_alpha: Option<AlphaPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<ReferenceValues>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A validated scenario. The consensus tolerance is always resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub x0: Vec<f64>,
    pub protocol: ProtocolSpec,
    pub schedule: SwitchingSchedule,
    pub integrator: IntegratorConfig,
    pub outputs: OutputFlags,
    /// Reject exponent profiles with `alpha_ij != alpha_ji`.
    pub require_symmetric_exponents: bool,
    /// User-supplied `K1` for (P1) on strongly connected digraphs.
    pub k1: Option<f64>,
    pub compare_alpha: Option<AlphaPair>,
    pub reference: Option<ReferenceValues>,
}

/// Parses and validates a scenario document. Errors name the offending field.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: ScenarioDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ScenarioError::Json {
            path: if path == "." { "(document)".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })?;
    Scenario::from_document(doc)
}

impl Scenario {
    /// Pretty JSON that [`parse_scenario`] turns back into an equal scenario.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_document()).expect("scenario serializes");
        text.push('\n');
        text
    }

    pub fn n(&self) -> usize {
        self.schedule.n()
    }

    fn to_document(&self) -> ScenarioDocument {
        let fixed = self.schedule == SwitchingSchedule::fixed(self.schedule.segments()[0].graph.clone());
        let exponents = match self.protocol.kind {
            ProtocolKind::Linear => None,
            _ => Some(self.protocol.exponents.clone()),
        };
        ScenarioDocument {
            name: self.name.clone(),
            description: self.description.clone(),
            x0: self.x0.clone(),
            protocol: ProtocolDocument {
                kind: self.protocol.kind,
                exponents,
            },
            graph: fixed.then(|| self.schedule.segments()[0].graph.clone()),
            schedule: (!fixed).then(|| self.schedule.clone().into()),
            integrator: self.integrator.clone(),
            outputs: self.outputs,
            require_symmetric_exponents: self.require_symmetric_exponents,
            k1: self.k1,
            compare_alpha: self.compare_alpha,
            reference: self.reference.clone(),
        }
    }

    fn from_document(doc: ScenarioDocument) -> Result<Scenario, ScenarioError> {
        if doc.name.trim().is_empty() {
            return Err(ScenarioError::invalid("name", "must not be empty"));
        }
        let schedule = match (doc.graph, doc.schedule) {
            (Some(g), None) => SwitchingSchedule::fixed(g),
            (None, Some(s)) => {
                SwitchingSchedule::try_from(s).map_err(|e| ScenarioError::invalid("schedule", e.to_string()))?
            }
            (Some(_), Some(_)) => {
                return Err(ScenarioError::invalid(
                    "graph",
                    "give either `graph` or `schedule`, not both",
                ))
            }
            (None, None) => {
                return Err(ScenarioError::invalid(
                    "graph",
                    "one of `graph` or `schedule` is required",
                ))
            }
        };
        let n = schedule.n();
        if doc.x0.len() != n {
            return Err(ScenarioError::invalid(
                "x0",
                format!("has {} entries but the topology has {n} agents", doc.x0.len()),
            ));
        }
        if let Some(i) = doc.x0.iter().position(|v| !v.is_finite()) {
            return Err(ScenarioError::invalid(format!("x0[{i}]"), "must be finite"));
        }

        let exponents = match (doc.protocol.kind, doc.protocol.exponents) {
            (_, Some(e)) => e,
            (ProtocolKind::Linear, None) => ExponentProfile::Uniform(1.0),
            (k, None) => {
                return Err(ScenarioError::invalid(
                    "protocol.exponents",
                    format!("required for protocol {k}"),
                ))
            }
        };
        let protocol = ProtocolSpec::new(doc.protocol.kind, exponents)
            .map_err(|e| ScenarioError::invalid("protocol.exponents", e.to_string()))?;

        for (k, seg) in schedule.segments().iter().enumerate() {
            let (path, profile) = match &seg.exponents {
                Some(p) => {
                    p.validate_values(protocol.kind).map_err(|e| {
                        ScenarioError::invalid(format!("schedule.segments[{k}].exponents"), e.to_string())
                    })?;
                    (format!("schedule.segments[{k}].exponents"), p)
                }
                None => ("protocol.exponents".to_string(), &protocol.exponents),
            };
            profile
                .validate_for(protocol.kind, &seg.graph)
                .map_err(|e| ScenarioError::invalid(path.clone(), e.to_string()))?;
            if doc.require_symmetric_exponents {
                profile.check_symmetric_on(&seg.graph).map_err(|e| {
                    ScenarioError::invalid(
                        path.clone(),
                        format!("{e} (the scenario sets require_symmetric_exponents, under which the mean is conserved only for alpha_ij = alpha_ji)"),
                    )
                })?;
            }
        }

        let mut integrator = doc.integrator;
        integrator
            .validate()
            .map_err(|e| ScenarioError::invalid("integrator", e.to_string()))?;
        if integrator.consensus_tol.is_none() {
            integrator.consensus_tol = Some(default_consensus_tol(
                integrator.step,
                smallest_exponent(&protocol, &schedule),
            ));
        }

        if let Some(k1) = doc.k1 {
            if !(k1.is_finite() && k1 > 0.0) {
                return Err(ScenarioError::invalid("k1", format!("{k1} must be positive")));
            }
        }
        if let Some(pair) = doc.compare_alpha {
            if !(0.0 < pair.low && pair.low < pair.high && pair.high < 1.0) {
                return Err(ScenarioError::invalid(
                    "compare_alpha",
                    format!("need 0 < low < high < 1, got low = {}, high = {}", pair.low, pair.high),
                ));
            }
        }
        if let Some(r) = &doc.reference {
            if !(r.v0.is_finite() && r.v0 >= 0.0) {
                return Err(ScenarioError::invalid("reference.V0", "must be finite and nonnegative"));
            }
        }

        Ok(Scenario {
            name: doc.name,
            description: doc.description,
            x0: doc.x0,
            protocol,
            schedule,
            integrator,
            outputs: doc.outputs,
            require_symmetric_exponents: doc.require_symmetric_exponents,
            k1: doc.k1,
            compare_alpha: doc.compare_alpha,
            reference: doc.reference,
        })
    }
}
