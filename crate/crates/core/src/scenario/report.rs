//! Bound reports and graph analysis reports.

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::Serialize;

use super::Scenario;
use crate::analysis::{
    bound_leader_p1, bound_p1_undirected, bound_p2_undirected, bound_strongly_connected_p1, bound_switching, deviation,
    k1_lower_bound, k1_sampled_min, k2_constant, k3_constant, k4_formula, k6_constant, leader_block_p1,
    leader_block_p2, mean, thresholds_thm5, thresholds_thm6, v_edge_energy, v_quadratic, weighted_power_sum,
    weighted_symmetric_laplacian, BoundReport, ReferenceComparison, Thresholds,
};
use crate::error::{AnalysisError, ScenarioError};
use crate::graph::{Condensation, WeightedDigraph};
use crate::protocol::{ExponentProfile, ProtocolKind};
use crate::sim::schedule_conserved_kind;
use crate::spectral::{
    algebraic_connectivity, gershgorin_contains, laplacian_spectrum, sym_eigenvalues, SpectralSummary, EIGEN_SLACK,
};

const K1_SAMPLES: usize = 20_000;
const K1_SEED: u64 = 0;

/// Closed-form settling bound as a function of `V0`.
#[derive(Debug, Clone, Copy)]
enum Formula {
    P1Undirected { lambda2: f64, alpha: f64 },
    P2 { lambda: f64, alpha: f64 },
    Switching { k6: f64, alpha0: f64 },
    StronglyConnected { k1: f64, k2: f64, alpha0: f64 },
    Leader { lambda1: f64, k3: f64, alpha0: f64 },
}

impl Formula {
    fn eval(self, v0: f64) -> Result<f64, AnalysisError> {
        match self {
            Formula::P1Undirected { lambda2, alpha } => bound_p1_undirected(v0, lambda2, alpha),
            Formula::P2 { lambda, alpha } => bound_p2_undirected(v0, lambda, alpha),
            Formula::Switching { k6, alpha0 } => bound_switching(v0, k6, alpha0),
            Formula::StronglyConnected { k1, k2, alpha0 } => bound_strongly_connected_p1(v0, k1, k2, alpha0),
            Formula::Leader { lambda1, k3, alpha0 } => bound_leader_p1(v0, lambda1, k3, alpha0),
        }
    }
}

struct Draft {
    method: &'static str,
    v0: f64,
    constants: BTreeMap<String, f64>,
    formula: Option<Formula>,
    notes: Vec<String>,
}

impl Draft {
    fn new(method: &'static str, v0: f64) -> Self {
        Draft {
            method,
            v0,
            constants: BTreeMap::new(),
            formula: None,
            notes: Vec::new(),
        }
    }

    fn set(&mut self, name: &str, value: f64) {
        self.constants.insert(name.to_string(), value);
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

fn v3_about(x: &[f64], c: f64) -> f64 {
    v_quadratic(&deviation(x, c), None).expect("no weights")
}

fn neg_laplacian_times(g: &WeightedDigraph, x: &[f64]) -> Vec<f64> {
    let y = -(g.laplacian() * DVector::from_row_slice(x));
    y.iter().copied().collect()
}

/// Fallback when no bound formula covers the configuration: report `V3` about the
/// conserved value (or the mean) and say why there is no bound.
fn unsupported(s: &Scenario, why: &str) -> Draft {
    let kind = schedule_conserved_kind(&s.protocol, &s.schedule);
    let mut d = Draft::new("none", v3_about(&s.x0, kind.value(&s.x0)));
    d.note(format!("no finite-time bound applies: {why}"));
    d.note("V0 is the quadratic disagreement about the conserved value (the mean when nothing is conserved)");
    d
}

fn p2_fixed(s: &Scenario, g: &WeightedDigraph, exps: &ExponentProfile) -> Result<Draft, AnalysisError> {
    let x0 = &s.x0;
    let Some(alpha0) = exps.max_exponent(g) else {
        return Ok(unsupported(s, "the graph has no edges"));
    };
    let uniform = exps.is_uniform_on(g);
    let alpha = exps.edge_values(g);

    if let Some(l) = g.root_leader() {
        let block = match leader_block_p2(g, l, alpha0) {
            Ok(b) => b,
            Err(e) => {
                return Ok(unsupported(
                    s,
                    &format!("leader-follower form needs undirected followers ({e})"),
                ))
            }
        };
        let mut d = Draft::new("p2-leader", v3_about(x0, x0[l]));
        let lambda1 = sym_eigenvalues(&block)?.lambda_min;
        let general = k4_formula(g, &alpha, alpha0, x0);
        if let Ok(k) = general {
            d.set("K4_general", k);
        }
        let k4 = if uniform { 1.0 } else { general? };
        d.set("alpha0", alpha0);
        d.set("K4", k4);
        d.set("lambda1(B_bar)", lambda1);
        d.note(format!(
            "leader is agent {l}; V0 is the quadratic disagreement about its state"
        ));
        if lambda1 > EIGEN_SLACK {
            d.formula = Some(Formula::P2 {
                lambda: k4 * lambda1,
                alpha: alpha0,
            });
        } else {
            d.note("the follower block is singular; some follower cannot hear the leader");
        }
        return Ok(d);
    }

    if !g.is_symmetric() {
        if let Some(w) = g.is_detail_balanced() {
            let c = w.dot(&DVector::from_row_slice(x0)) / w.sum();
            let v4 = v_quadratic(&deviation(x0, c), Some(w.as_slice()))?;
            let mut d = Draft::new("detail-balanced", v4);
            d.note("the digraph is detail-balanced: the omega-weighted mean is conserved and V4 decreases, but no closed-form bound is implemented");
            return Ok(d);
        }
        return Ok(unsupported(
            s,
            "the digraph is neither undirected, detail-balanced, nor led by a single agent",
        ));
    }
    if let Err(e) = exps.check_symmetric_on(g) {
        return Ok(unsupported(s, &format!("{e}")));
    }

    let mut d = Draft::new("p2-undirected", v3_about(x0, mean(x0)));
    let b = g.exponent_graph(alpha0);
    let lambda2_b = algebraic_connectivity(&b)?;
    d.set("alpha0", alpha0);
    d.set("lambda2(L)", algebraic_connectivity(g)?);
    d.set("lambda2(L(B))", lambda2_b);
    if lambda2_b <= EIGEN_SLACK {
        d.note("the graph is disconnected; no finite-time consensus");
        return Ok(d);
    }
    let general = k4_formula(g, &alpha, alpha0, x0);
    if let Ok(k) = general {
        d.set("K4_general", k);
    }
    let k4 = if uniform { 1.0 } else { general? };
    d.set("K4", k4);
    d.formula = Some(Formula::P2 {
        lambda: k4 * lambda2_b,
        alpha: alpha0,
    });
    Ok(d)
}

fn p1_fixed(s: &Scenario, g: &WeightedDigraph, exps: &ExponentProfile) -> Result<Draft, AnalysisError> {
    let x0 = &s.x0;
    let n = g.n();
    let alpha = exps.node_values(n);

    if let Some(l) = g.root_leader() {
        let (block, omega) = match leader_block_p1(g, l) {
            Ok(v) => v,
            Err(e) => {
                return Ok(unsupported(
                    s,
                    &format!("leader-follower form needs strongly connected followers ({e})"),
                ))
            }
        };
        let followers: Vec<usize> = (0..n).filter(|&i| i != l).collect();
        let alpha_bar: Vec<f64> = followers.iter().map(|&i| alpha[i]).collect();
        let y = neg_laplacian_times(g, x0);
        let y_bar: Vec<f64> = followers.iter().map(|&i| y[i]).collect();
        let mut d = Draft::new("p1-leader", weighted_power_sum(omega.as_slice(), &alpha_bar, &y_bar)?);
        let alpha0 = alpha_bar.iter().copied().fold(0.0, f64::max);
        let lambda1 = sym_eigenvalues(&block)?.lambda_min;
        d.set("alpha0", alpha0);
        d.set("lambda1(B_bar)", lambda1);
        d.note(format!(
            "leader is agent {l}; omega_bar is the follower left null vector normalized to sum 1"
        ));
        match k3_constant(omega.as_slice(), &alpha_bar, g, l, x0) {
            Ok(k3) => {
                d.set("K3", k3);
                d.formula = Some(Formula::Leader { lambda1, k3, alpha0 });
            }
            Err(e) => d.note(format!("K3 undefined: {e}")),
        }
        return Ok(d);
    }

    if g.is_symmetric() && exps.is_uniform_on(g) {
        let a = alpha[0];
        let mut d = Draft::new("p1-undirected", v_edge_energy(g, x0)?);
        let spectrum = laplacian_spectrum(g)?;
        let lambda2 = spectrum.lambda2.unwrap_or(0.0);
        d.set("alpha0", a);
        d.set("lambda2(L)", lambda2);
        d.set("lambda_n(L)", spectrum.lambda_max);
        if lambda2 > EIGEN_SLACK {
            d.formula = Some(Formula::P1Undirected { lambda2, alpha: a });
        } else {
            d.note("the graph is disconnected; no finite-time consensus");
        }
        return Ok(d);
    }

    if !g.is_strongly_connected() {
        return Ok(unsupported(
            s,
            "P1 needs a strongly connected digraph or a single leader",
        ));
    }
    let omega = g.left_null_vector()?;
    let y = neg_laplacian_times(g, x0);
    let mut d = Draft::new(
        "p1-strongly-connected",
        weighted_power_sum(omega.as_slice(), &alpha, &y)?,
    );
    let alpha0 = alpha.iter().copied().fold(0.0, f64::max);
    let b = weighted_symmetric_laplacian(g, omega.as_slice())?;
    d.set("alpha0", alpha0);
    d.set("K1_lower_bound", k1_lower_bound(&b)?);
    d.set("K1_sampled_min", k1_sampled_min(&b, K1_SAMPLES, K1_SEED));
    d.note("omega is the left null vector of L normalized to sum 1; K1 must be given for that normalization");
    d.note(format!(
        "K1_lower_bound = lambda2(B)/n is a valid lower bound on K1; K1_sampled_min is the smallest of {K1_SAMPLES} sampled Rayleigh quotients and is not certified"
    ));
    let k2 = match k2_constant(omega.as_slice(), &alpha, g, x0) {
        Ok(k2) => k2,
        Err(e) => {
            d.note(format!("K2 undefined: {e}"));
            return Ok(d);
        }
    };
    d.set("K2", k2);
    match s.k1 {
        Some(k1) => {
            d.set("K1", k1);
            d.formula = Some(Formula::StronglyConnected { k1, k2, alpha0 });
        }
        None => d.note("K1 not supplied; set `k1` in the scenario to obtain a bound"),
    }
    Ok(d)
}

fn p2_switching(s: &Scenario) -> Result<Draft, AnalysisError> {
    let x0 = &s.x0;
    let segs = s.schedule.segments();
    let profile = |k: usize| segs[k].exponents.as_ref().unwrap_or(&s.protocol.exponents);
    for (k, seg) in segs.iter().enumerate() {
        if !seg.graph.is_symmetric() {
            return Ok(unsupported(s, &format!("segment {k} is not undirected")));
        }
        if let Err(e) = profile(k).check_symmetric_on(&seg.graph) {
            return Ok(unsupported(s, &format!("segment {k}: {e}")));
        }
    }
    let mut d = Draft::new("switching", v3_about(x0, mean(x0)));
    let alpha0 = (0..segs.len())
        .filter_map(|k| profile(k).max_exponent(&segs[k].graph))
        .fold(0.0, f64::max);
    if alpha0 == 0.0 {
        d.note("no segment has edges");
        return Ok(d);
    }
    let uniform = (0..segs.len()).all(|k| {
        let p = profile(k);
        p.is_uniform_on(&segs[k].graph) && p.max_exponent(&segs[k].graph).map_or(true, |a| a == alpha0)
    });
    d.set("alpha0", alpha0);
    let mut values = Vec::with_capacity(segs.len());
    for (k, seg) in segs.iter().enumerate() {
        let lambda2_b = algebraic_connectivity(&seg.graph.exponent_graph(alpha0))?;
        let k4 = if uniform || lambda2_b <= EIGEN_SLACK {
            1.0
        } else {
            k4_formula(&seg.graph, &profile(k).edge_values(&seg.graph), alpha0, x0)?
        };
        d.set(&format!("K4*lambda2(L(B))[{k}]"), k4 * lambda2_b);
        values.push(if lambda2_b <= EIGEN_SLACK { 0.0 } else { k4 * lambda2_b });
    }
    match k6_constant(&values) {
        Ok(k6) => {
            d.set("K6", k6);
            d.formula = Some(Formula::Switching { k6, alpha0 });
        }
        Err(e) => d.note(format!(
            "{e}; a union of topologies that is connected only over time gives asymptotic consensus at best"
        )),
    }
    Ok(d)
}

fn thresholds(s: &Scenario, d: &mut Draft) -> Result<Option<Thresholds>, AnalysisError> {
    let Some(pair) = s.compare_alpha else { return Ok(None) };
    let g = &s.schedule.segments()[0].graph;
    if !s.schedule.is_fixed() || !g.is_symmetric() || !g.is_strongly_connected() {
        d.note("crossover levels need a fixed, connected, undirected topology");
        return Ok(None);
    }
    let n = g.n();
    match s.protocol.kind {
        ProtocolKind::P1 => {
            let spectrum = laplacian_spectrum(g)?;
            let lambda2 = spectrum.lambda2.unwrap_or(0.0);
            d.set("lambda2(L)", lambda2);
            d.set("lambda_n(L)", spectrum.lambda_max);
            d.note(format!(
                "thresholds are V5 levels: above eps_star alpha = {} decreases V5 faster, below eps_lower alpha = {} does",
                pair.high, pair.low
            ));
            Ok(Some(thresholds_thm5(
                n,
                lambda2,
                spectrum.lambda_max,
                pair.low,
                pair.high,
            )?))
        }
        ProtocolKind::P2 => {
            let lo = laplacian_spectrum(&g.exponent_graph(pair.low))?;
            let hi = laplacian_spectrum(&g.exponent_graph(pair.high))?;
            let (l2_lo, l2_hi) = (lo.lambda2.unwrap_or(0.0), hi.lambda2.unwrap_or(0.0));
            d.set("lambda2(L(B))@low", l2_lo);
            d.set("lambda_n(L(B))@low", lo.lambda_max);
            d.set("lambda2(L(B))@high", l2_hi);
            d.set("lambda_n(L(B))@high", hi.lambda_max);
            d.note(format!(
                "thresholds are V3 levels: above eps_star alpha = {} decreases V3 faster, below eps_lower alpha = {} does",
                pair.high, pair.low
            ));
            Ok(Some(thresholds_thm6(
                n,
                l2_lo,
                lo.lambda_max,
                l2_hi,
                hi.lambda_max,
                pair.low,
                pair.high,
            )?))
        }
        _ => {
            d.note("crossover levels are defined for P1 and P2 only");
            Ok(None)
        }
    }
}

/// Convergence-time bound for a scenario, with the inputs that produced it.
///
/// The method is chosen from the protocol and topology: undirected (P1 or
/// P2), single leader (P1 or P2), strongly connected digraph (P1, needs
/// `k1`), or switching undirected topologies (P2). Other configurations get
/// a report without a bound.
pub fn bound_report(s: &Scenario) -> Result<BoundReport, ScenarioError> {
    let seg = &s.schedule.segments()[0];
    let exps = seg.exponents.as_ref().unwrap_or(&s.protocol.exponents);
    let mut d = match (s.protocol.kind, s.schedule.is_fixed()) {
        (ProtocolKind::P2, true) => p2_fixed(s, &seg.graph, exps)?,
        (ProtocolKind::P1, true) => p1_fixed(s, &seg.graph, exps)?,
        (ProtocolKind::P2, false) => p2_switching(s)?,
        (ProtocolKind::P1, false) => unsupported(s, "switching bounds are implemented for P2 only"),
        (ProtocolKind::P3, _) => unsupported(s, "P3 has no closed-form settling bound here"),
        (ProtocolKind::Linear, _) => unsupported(s, "the linear protocol converges only asymptotically"),
    };
    let th = thresholds(s, &mut d)?;
    let bound = match d.formula {
        Some(f) => Some(f.eval(d.v0)?),
        None => None,
    };
    let reference = match &s.reference {
        Some(r) => {
            if (r.v0 - d.v0).abs() > 1e-4 * r.v0.abs().max(1.0) {
                d.note(format!(
                    "reference V0 = {} differs from the V0 = {} computed for this topology; both bounds are reported",
                    r.v0, d.v0
                ));
            }
            Some(ReferenceComparison {
                v0: r.v0,
                bound: r.bound,
                bound_from_reference_v0: match d.formula {
                    Some(f) => Some(f.eval(r.v0)?),
                    None => None,
                },
            })
        }
        None => None,
    };
    Ok(BoundReport {
        scenario: s.name.clone(),
        method: d.method.to_string(),
        v0: d.v0,
        constants: d.constants,
        bound,
        thresholds: th,
        notes: d.notes,
        reference,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GershgorinReport {
    /// Every Laplacian eigenvalue lies in the union of the row discs.
    pub holds: bool,
    /// Eigenvalues as `[re, im]`, sorted.
    pub eigenvalues: Vec<[f64; 2]>,
}

/// Structural and spectral facts about one topology.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphReport {
    pub n: usize,
    pub symmetric: bool,
    pub strongly_connected: bool,
    pub has_spanning_tree: bool,
    /// Vertices that reach every other vertex.
    pub leaders: Vec<usize>,
    /// A leader with no neighbors of its own, if there is one.
    pub root_leader: Option<usize>,
    pub condensation: Condensation,
    /// Weights `w` with `w_i a_ij = w_j a_ji`, normalized to sum 1.
    pub detail_balance: Option<Vec<f64>>,
    pub left_null_vector: Option<Vec<f64>>,
    /// Laplacian spectrum; undirected graphs only.
    pub laplacian_spectrum: Option<SpectralSummary>,
    pub lambda2: Option<f64>,
    pub gershgorin: GershgorinReport,
}

pub fn analyze_graph(g: &WeightedDigraph) -> Result<GraphReport, ScenarioError> {
    let l = g.laplacian();
    let symmetric = g.is_symmetric();
    let spectrum = if symmetric {
        Some(laplacian_spectrum(g).map_err(AnalysisError::from)?)
    } else {
        None
    };
    let mut eig: Vec<[f64; 2]> = match &spectrum {
        Some(s) => s.eigenvalues.iter().map(|&v| [v, 0.0]).collect(),
        None => l.clone().complex_eigenvalues().iter().map(|z| [z.re, z.im]).collect(),
    };
    eig.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let complex: Vec<_> = eig.iter().map(|z| nalgebra::Complex::new(z[0], z[1])).collect();
    Ok(GraphReport {
        n: g.n(),
        symmetric,
        strongly_connected: g.is_strongly_connected(),
        has_spanning_tree: g.has_spanning_tree(),
        leaders: g.leaders(),
        root_leader: g.root_leader(),
        condensation: g.scc_condensation(),
        detail_balance: g.is_detail_balanced().map(|w| w.iter().copied().collect()),
        left_null_vector: g.left_null_vector().ok().map(|w| w.iter().copied().collect()),
        lambda2: spectrum.as_ref().and_then(|s| s.lambda2),
        laplacian_spectrum: spectrum,
        gershgorin: GershgorinReport {
            holds: gershgorin_contains(&l, &complex),
            eigenvalues: eig,
        },
    })
}
