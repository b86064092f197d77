//! Built-in scenarios. Each description records where its topology and
//! numbers come from.

use nalgebra::DMatrix;

use super::{AlphaPair, OutputFlags, Scenario};
use crate::analysis::ReferenceValues;
use crate::error::ScenarioError;
use crate::graph::WeightedDigraph;
use crate::protocol::{ExponentProfile, ProtocolKind, ProtocolSpec};
use crate::sim::{default_consensus_tol, smallest_exponent, IntegratorConfig, Repeat, Segment, SwitchingSchedule};

/// Initial state shared by the six-agent scenarios.
pub const SIX_AGENT_X0: [f64; 6] = [-5.0, -3.0, 7.0, 9.0, 4.0, 5.0];

const NAMES: [&str; 13] = [
    "two-agent",
    "cycle6",
    "path6",
    "cycle6-p1",
    "path6-p1",
    "cycle6-linear",
    "counterexample",
    "switching-demo",
    "leader-demo",
    "leader-group",
    "seven-agent",
    "g1-thresholds",
    "g1-thresholds-p2",
];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

/// Six-agent topologies `G1`..`G4`, all undirected with weight 2.
///
/// `G2` (6-cycle) and `G4` (6-path) are reconstructions confirmed by their
/// algebraic connectivities 2 and 0.5359. `G1` and `G3` are stand-ins: `G1`
/// has `lambda_2 = 0.8262`, `lambda_n = 8.7855` and edge energy 338 at
/// [`SIX_AGENT_X0`]; `G3` is the star `K_{1,5}`.
pub fn stand_in_graph(name: &str) -> Option<WeightedDigraph> {
    let g = match name {
        "G1" => WeightedDigraph::undirected(6, &[(0, 1), (0, 4), (0, 5), (1, 2), (1, 4), (2, 3)], 2.0),
        "G2" => WeightedDigraph::cycle(6, 2.0),
        "G3" => WeightedDigraph::undirected(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)], 2.0),
        "G4" => WeightedDigraph::path(6, 2.0),
        _ => return None,
    };
    Some(g.expect("built-in graph is valid"))
}

fn graph(name: &str) -> WeightedDigraph {
    stand_in_graph(name).expect("known stand-in")
}

/// Digraph from `(i, j, a_ij)` triples: agent `i` listens to agent `j`.
fn digraph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedDigraph {
    let mut w = DMatrix::zeros(n, n);
    for &(i, j, a) in edges {
        w[(i, j)] = a;
    }
    WeightedDigraph::new(w).expect("built-in graph is valid")
}

struct Builder {
    s: Scenario,
}

impl Builder {
    fn new(name: &str, description: &str, x0: &[f64], protocol: ProtocolSpec, schedule: SwitchingSchedule) -> Self {
        Builder {
            s: Scenario {
                name: name.into(),
                description: description.into(),
                x0: x0.to_vec(),
                protocol,
                schedule,
                integrator: IntegratorConfig::default(),
                outputs: OutputFlags::default(),
                require_symmetric_exponents: false,
                k1: None,
                compare_alpha: None,
                reference: None,
            },
        }
    }

    fn t_max(mut self, t: f64) -> Self {
        self.s.integrator.t_max = t;
        self
    }

    fn stride(mut self, k: usize) -> Self {
        self.s.integrator.record_stride = k;
        self
    }

    fn tol(mut self, tol: f64) -> Self {
        self.s.integrator.consensus_tol = Some(tol);
        self
    }

    fn symmetric(mut self) -> Self {
        self.s.require_symmetric_exponents = true;
        self
    }

    fn with_bound(mut self) -> Self {
        self.s.outputs.bound = true;
        self
    }

    fn reference(mut self, v0: f64, bound: Option<f64>) -> Self {
        self.s.reference = Some(ReferenceValues { v0, bound });
        self
    }

    fn compare(mut self, low: f64, high: f64) -> Self {
        self.s.compare_alpha = Some(AlphaPair { low, high });
        self
    }

    fn build(mut self) -> Scenario {
        if self.s.integrator.consensus_tol.is_none() {
            let a = smallest_exponent(&self.s.protocol, &self.s.schedule);
            self.s.integrator.consensus_tol = Some(default_consensus_tol(self.s.integrator.step, a));
        }
        self.s
    }
}

fn uniform(kind: ProtocolKind, a: f64) -> ProtocolSpec {
    ProtocolSpec::uniform(kind, a).expect("valid exponent")
}

fn fixed(g: WeightedDigraph) -> SwitchingSchedule {
    SwitchingSchedule::fixed(g)
}

fn periodic(graphs: Vec<WeightedDigraph>, duration: f64) -> SwitchingSchedule {
    let segments = graphs
        .into_iter()
        .map(|graph| Segment {
            duration,
            graph,
            exponents: None,
        })
        .collect();
    SwitchingSchedule::new(segments, Repeat::Forever).expect("valid schedule")
}

/// Looks up a built-in scenario by name.
pub fn builtin_scenario(name: &str) -> Result<Scenario, ScenarioError> {
    let p2 = uniform(ProtocolKind::P2, 0.5);
    let p1 = uniform(ProtocolKind::P1, 0.5);
    let x0 = &SIX_AGENT_X0;
    let s = match name {
        "two-agent" => Builder::new(
            name,
            "Two agents joined by a unit edge under P2 with alpha = 0.5. The quadratic Lyapunov function \
             obeys dV/dt = -2^1.5 V^0.75 exactly, so V reaches zero at 0.3162 s from V(0) = 0.0025.",
            &[0.3, 0.4],
            p2,
            fixed(WeightedDigraph::path(2, 1.0).expect("valid")),
        )
        .t_max(1.0)
        .stride(1)
        .symmetric()
        .with_bound()
        .reference(0.0025, Some(0.3162))
        .build(),
        "cycle6" => Builder::new(
            name,
            "Undirected 6-cycle with weights 2 (reconstructed G2: lambda2(L) = 2, lambda2(L(B)) = 2.5198 at \
             alpha = 0.5) under P2, alpha = 0.5. Reference bound 4.2085 s from V3(0) = 78.4167.",
            x0,
            p2,
            fixed(graph("G2")),
        )
        .t_max(10.0)
        .symmetric()
        .with_bound()
        .reference(78.4167, Some(4.2085))
        .build(),
        "path6" => Builder::new(
            name,
            "Undirected 6-path with weights 2 (reconstructed G4: lambda2(L) = 0.5359, lambda2(L(B)) = 0.6752 \
             at alpha = 0.5) under P2, alpha = 0.5. Reference bound 11.2999 s from V3(0) = 78.4167.",
            x0,
            p2,
            fixed(graph("G4")),
        )
        .symmetric()
        .with_bound()
        .reference(78.4167, Some(11.2999))
        .build(),
        "cycle6-p1" => Builder::new(
            name,
            "Reconstructed G2 under P1, alpha = 0.5. The reference bound 6.0638 s corresponds to V5(0) = 338, \
             whereas this topology gives V5(0) = 234; both bounds are reported.",
            x0,
            p1.clone(),
            fixed(graph("G2")),
        )
        .t_max(10.0)
        .with_bound()
        .reference(338.0, Some(6.0638))
        .build(),
        "path6-p1" => Builder::new(
            name,
            "Reconstructed G4 under P1, alpha = 0.5. The reference bound 16.2819 s corresponds to V5(0) = 338; \
             this topology gives V5(0) = 234.",
            x0,
            p1,
            fixed(graph("G4")),
        )
        .with_bound()
        .reference(338.0, Some(16.2819))
        .build(),
        "cycle6-linear" => Builder::new(
            name,
            "Reconstructed G2 under the linear protocol with the graph's own weights as gains. Consensus is \
             only asymptotic, so the 1e-6 tolerance is not met by 4.21 s.",
            x0,
            ProtocolSpec::linear(),
            fixed(graph("G2")),
        )
        .t_max(4.21)
        .tol(1e-6)
        .build(),
        "counterexample" => Builder::new(
            name,
            "Three agents alternating every second between A1 (edge 1-2) and A2 (edge 2-3) under P2 with \
             alpha_ij = 0.5 from x0 = (0.3, 0.4, 0). Neither topology is connected; each pair settles within its \
             window, so x(2k) = M^k x0 with M = [[0.5, 0.5, 0], [0.25, 0.25, 0.5], [0.25, 0.25, 0.5]] and \
             consensus is reached only asymptotically.",
            &[0.3, 0.4, 0.0],
            p2,
            periodic(
                vec![
                    WeightedDigraph::undirected(3, &[(0, 1)], 1.0).expect("valid"),
                    WeightedDigraph::undirected(3, &[(1, 2)], 1.0).expect("valid"),
                ],
                1.0,
            ),
        )
        .t_max(10.0)
        .symmetric()
        .build(),
        "switching-demo" => Builder::new(
            name,
            "Periodic switching G1 -> G2 -> G3 -> G4 with 0.25 s per topology under P2, alpha = 0.5. G1 and G3 \
             are stand-ins (reconstruction unavailable): G1 matches the inferred spectrum lambda2 = 0.8262, \
             lambda_n = 8.787; G3 is the star K_{1,5} with weights 2. K6 is attained on G4, giving the reference \
             bound 11.2999 s.",
            x0,
            p2,
            periodic(vec![graph("G1"), graph("G2"), graph("G3"), graph("G4")], 0.25),
        )
        .symmetric()
        .with_bound()
        .reference(78.4167, Some(11.2999))
        .build(),
        "leader-demo" => Builder::new(
            name,
            "Leader 0 with no neighbors; followers 1-2-3-4 form an undirected path and agents 1 and 4 hear the \
             leader. P2 with alpha = 0.5 drives every follower to the leader's initial state 2.",
            &[2.0, -1.0, 0.5, 3.0, -2.0],
            p2,
            fixed(digraph(
                5,
                &[
                    (1, 2, 1.0),
                    (2, 1, 1.0),
                    (2, 3, 1.0),
                    (3, 2, 1.0),
                    (3, 4, 1.0),
                    (4, 3, 1.0),
                    (1, 0, 1.0),
                    (4, 0, 1.0),
                ],
            )),
        )
        .with_bound()
        .build(),
        "leader-group" => Builder::new(
            name,
            "Leader 0 with no neighbors; followers form the directed cycle 1 -> 2 -> 3 -> 4 -> 1 and agent 1 \
             hears the leader. P1 with node exponents; the followers track the leader's state 1.",
            &[1.0, -1.0, 2.0, 0.0, 3.0],
            ProtocolSpec::new(ProtocolKind::P1, ExponentProfile::Node(vec![0.5, 0.6, 0.4, 0.5, 0.7])).expect("valid"),
            fixed(digraph(
                5,
                &[(2, 1, 1.0), (3, 2, 1.0), (4, 3, 1.0), (1, 4, 1.0), (1, 0, 1.0)],
            )),
        )
        .with_bound()
        .build(),
        "seven-agent" => Builder::new(
            name,
            "Seven agents under P1 with alpha = (0.3, 0.5, 0.7, 0.8, 0.5, 0.6, 0.55) from \
             x0 = (-0.6, -1, 0.4, 0, 1, 0.6, 0.2). The topology is a stand-in (reconstruction unavailable): a \
             directed ring 0 -> 1 -> ... -> 6 -> 0 with chords 0 -> 3, 2 -> 6 and 4 -> 0, unit weights. It is \
             strongly connected but not detail-balanced.",
            &[-0.6, -1.0, 0.4, 0.0, 1.0, 0.6, 0.2],
            ProtocolSpec::new(
                ProtocolKind::P1,
                ExponentProfile::Node(vec![0.3, 0.5, 0.7, 0.8, 0.5, 0.6, 0.55]),
            )
            .expect("valid"),
            fixed(digraph(
                7,
                &[
                    (1, 0, 1.0),
                    (2, 1, 1.0),
                    (3, 2, 1.0),
                    (4, 3, 1.0),
                    (5, 4, 1.0),
                    (6, 5, 1.0),
                    (0, 6, 1.0),
                    (3, 0, 1.0),
                    (6, 2, 1.0),
                    (0, 4, 1.0),
                ],
            )),
        )
        .with_bound()
        .build(),
        "g1-thresholds" => Builder::new(
            name,
            "Stand-in G1 (reconstruction unavailable; spectrum lambda2 = 0.8262, lambda_n = 8.787 inferred from \
             the reference crossover levels 7.4353 and 0.0569) under P1 with alpha = 0.3, compared against \
             alpha = 0.8. V5(0) = 338 at the six-agent initial state.",
            x0,
            uniform(ProtocolKind::P1, 0.3),
            fixed(graph("G1")),
        )
        .compare(0.3, 0.8)
        .with_bound()
        .reference(338.0, None)
        .build(),
        "g1-thresholds-p2" => Builder::new(
            name,
            "Stand-in G1 (reconstruction unavailable) under P2 with alpha = 0.3, compared against alpha = 0.8. \
             Reference crossover levels of V3 are 42674 and 0.000029.",
            x0,
            uniform(ProtocolKind::P2, 0.3),
            fixed(graph("G1")),
        )
        .compare(0.3, 0.8)
        .symmetric()
        .with_bound()
        .build(),
        _ => {
            return Err(ScenarioError::UnknownBuiltin {
                name: name.into(),
                valid: NAMES.to_vec(),
            })
        }
    };
    Ok(s)
}
