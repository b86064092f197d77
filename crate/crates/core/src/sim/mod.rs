//! Fixed-step integration of `x_i' = u_i` under switching topologies.

mod conserved;
mod output;
mod schedule;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

pub use conserved::{conserved_kind, conserved_quantity, schedule_conserved_kind, ConservedKind};
pub use output::Diagnostics;
pub use schedule::{Repeat, ScheduleDocument, Segment, SwitchingSchedule};

use crate::analysis::{v_edge_energy, v_quadratic, weighted_power_sum};
use crate::error::SimError;
use crate::protocol::{Dynamics, ExponentProfile, ProtocolKind, ProtocolSpec};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_T_MAX: f64 = 20.0;
pub const DEFAULT_RECORD_STRIDE: usize = 10;
const MIN_CONSENSUS_TOL: f64 = 1e-6;
const MAX_STEPS: f64 = 1e8;

fn default_step() -> f64 {
    DEFAULT_STEP
}

fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}

fn default_stride() -> usize {
    DEFAULT_RECORD_STRIDE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    /// Disagreement at which consensus is declared; derived from the step
    /// and the smallest exponent when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consensus_tol: Option<f64>,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            step: DEFAULT_STEP,
            t_max: DEFAULT_T_MAX,
            consensus_tol: None,
            record_stride: DEFAULT_RECORD_STRIDE,
        }
    }
}

impl IntegratorConfig {
    pub fn new(step: f64, t_max: f64) -> Self {
        IntegratorConfig {
            step,
            t_max,
            ..Default::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.consensus_tol = Some(tol);
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(SimError::Config(format!("step {} must be positive", self.step)));
        }
        if !(self.t_max.is_finite() && self.t_max >= self.step) {
            return Err(SimError::Config(format!(
                "t_max {} must be finite and at least the step {}",
                self.t_max, self.step
            )));
        }
        if self.t_max / self.step > MAX_STEPS {
            return Err(SimError::Config(format!(
                "t_max / step = {:e} exceeds the step budget {MAX_STEPS:e}",
                self.t_max / self.step
            )));
        }
        if let Some(tol) = self.consensus_tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(SimError::Config(format!("consensus_tol {tol} must be positive")));
            }
        }
        if self.record_stride == 0 {
            return Err(SimError::Config("record_stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// `max(1e-6, h^(1/(1-alpha_min)))`, or `1e-6` for the linear protocol.
pub fn default_consensus_tol(step: f64, alpha_min: f64) -> f64 {
    if alpha_min < 1.0 {
        MIN_CONSENSUS_TOL.max(step.powf(1.0 / (1.0 - alpha_min)))
    } else {
        MIN_CONSENSUS_TOL
    }
}

/// Sampled solution of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Strictly increasing sample times.
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `max_i x_i - min_i x_i` per sample.
    pub disagreement: Vec<f64>,
    /// Lyapunov function values per sample, when one applies.
    pub lyapunov: Option<Vec<f64>>,
    pub lyapunov_name: Option<&'static str>,
    /// Value of [`conserved_kind`](Self::conserved_kind) per sample.
    pub conserved: Vec<f64>,
    pub conserved_kind: ConservedKind,
    /// First time with disagreement at most `consensus_tol`.
    pub convergence_time: Option<f64>,
    /// Common value the state was snapped to at convergence.
    pub consensus_value: Option<f64>,
    pub consensus_tol: f64,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().map_or(&[], Vec::as_slice)
    }

    /// Index of the sample recorded at `t` (within `1e-12`), if any.
    pub fn sample_at(&self, t: f64) -> Option<usize> {
        self.times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

pub fn disagreement(x: &[f64]) -> f64 {
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Outcome of comparing a run's consensus value with an expected value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConsensusCheck {
    Pass,
    Fail,
    /// The run never reached its consensus tolerance.
    Indeterminate,
}

/// Whether the consensus value lies within `10 * consensus_tol` of `expected`.
pub fn expected_consensus_check(traj: &Trajectory, expected: f64) -> ConsensusCheck {
    match traj.consensus_value {
        None => ConsensusCheck::Indeterminate,
        Some(v) if (v - expected).abs() <= 10.0 * traj.consensus_tol => ConsensusCheck::Pass,
        Some(_) => ConsensusCheck::Fail,
    }
}

/// Lyapunov function recorded along a run.
enum Monitor {
    None,
    /// `V3`/`V4` about the conserved value.
    Quadratic {
        omega: Option<Vec<f64>>,
    },
    /// `V5` on the active (symmetric) topology.
    EdgeEnergy,
    /// Power sum of `y = -L x` restricted to `rows`.
    PowerSumOfY {
        omega: Vec<f64>,
        alpha: Vec<f64>,
        rows: Vec<usize>,
    },
    /// Power sum of the state itself.
    PowerSumOfX {
        omega: Vec<f64>,
        alpha: Vec<f64>,
    },
}

impl Monitor {
    fn choose(
        proto: &ProtocolSpec,
        schedule: &SwitchingSchedule,
        kind: &ConservedKind,
    ) -> (Monitor, Option<&'static str>) {
        let all_symmetric = schedule.segments().iter().all(|s| s.graph.is_symmetric());
        let profile = |k: usize| schedule.segments()[k].exponents.as_ref().unwrap_or(&proto.exponents);
        match proto.kind {
            ProtocolKind::P2 | ProtocolKind::Linear => match kind {
                ConservedKind::Mean | ConservedKind::Leader(_) => (Monitor::Quadratic { omega: None }, Some("V3")),
                ConservedKind::WeightedMean(w) => (
                    Monitor::Quadratic {
                        omega: Some(w.iter().copied().collect()),
                    },
                    Some("V4"),
                ),
                ConservedKind::None => (Monitor::None, None),
            },
            ProtocolKind::P1 => {
                if all_symmetric {
                    return (Monitor::EdgeEnergy, Some("V5"));
                }
                if !schedule.is_fixed() {
                    return (Monitor::None, None);
                }
                let g = &schedule.segments()[0].graph;
                let alpha = profile(0).node_values(g.n());
                if let ConservedKind::Leader(l) = kind {
                    let rows = crate::analysis::followers_of(g.n(), *l);
                    if let Ok(sub) = g.induced(&rows) {
                        if let Ok(w) = sub.left_null_vector() {
                            let alpha = rows.iter().map(|&i| alpha[i]).collect();
                            let omega = w.iter().copied().collect();
                            return (Monitor::PowerSumOfY { omega, alpha, rows }, Some("V2"));
                        }
                    }
                    return (Monitor::None, None);
                }
                match g.left_null_vector() {
                    Ok(w) => (
                        Monitor::PowerSumOfY {
                            omega: w.iter().copied().collect(),
                            alpha,
                            rows: (0..g.n()).collect(),
                        },
                        Some("V1"),
                    ),
                    Err(_) => (Monitor::None, None),
                }
            }
            ProtocolKind::P3 => match (kind, schedule.is_fixed()) {
                (ConservedKind::WeightedMean(w), true) => {
                    let g = &schedule.segments()[0].graph;
                    (
                        Monitor::PowerSumOfX {
                            omega: w.iter().copied().collect(),
                            alpha: profile(0).node_values(g.n()),
                        },
                        Some("power-sum"),
                    )
                }
                _ => (Monitor::None, None),
            },
        }
    }

    fn eval(&self, x: &[f64], kind: &ConservedKind, segment: &crate::graph::WeightedDigraph) -> Option<f64> {
        match self {
            Monitor::None => None,
            Monitor::Quadratic { omega } => {
                let c = kind.value(x);
                let delta: Vec<f64> = x.iter().map(|v| v - c).collect();
                v_quadratic(&delta, omega.as_deref()).ok()
            }
            Monitor::EdgeEnergy => v_edge_energy(segment, x).ok(),
            Monitor::PowerSumOfY { omega, alpha, rows } => {
                let xv = DVector::from_row_slice(x);
                let y = -(segment.laplacian() * xv);
                let y: Vec<f64> = rows.iter().map(|&i| y[i]).collect();
                weighted_power_sum(omega, alpha, &y).ok()
            }
            Monitor::PowerSumOfX { omega, alpha } => weighted_power_sum(omega, alpha, x).ok(),
        }
    }
}

/// Step refinement near consensus. The local slope of `sig(d, a)` scaled
/// by the largest in-weight sum is about `gain * a * d^(a-1)`, unbounded as
/// the disagreement `d` goes to 0; a fixed step then settles into a discrete
/// oscillation of size about `(h * gain)^(1/(1-a))` instead of reaching
/// consensus. Splitting the step so that `step * slope <= REFINE_SAFETY`
/// keeps every substep inside the stable region of RK4, and the number of
/// substeps grows only logarithmically in `1/d` because the flow shrinks `d`
/// by a fixed factor per refined substep.
struct Stiffness {
    gain: f64,
    alphas: [f64; 2],
    /// Whether the flow keeps every state inside the convex hull of `x0`.
    /// P3 with unequal node exponents does not.
    hull: bool,
}

const REFINE_SAFETY: f64 = 0.5;
const MAX_SUBSTEPS: f64 = 65536.0;

impl Stiffness {
    fn of(proto: &ProtocolSpec, exps: &ExponentProfile, g: &crate::graph::WeightedDigraph) -> Self {
        let sum = (0..g.n())
            .map(|i| g.neighbors(i).map(|j| g.weight(i, j)).sum::<f64>())
            .fold(0.0, f64::max);
        let (lo, hi) = match proto.kind {
            ProtocolKind::Linear => (1.0, 1.0),
            _ => (exps.min_exponent(g).unwrap_or(1.0), exps.max_exponent(g).unwrap_or(1.0)),
        };
        Stiffness {
            gain: sum.max(sum.powf(lo)),
            alphas: [lo, hi],
            hull: proto.kind != ProtocolKind::P3 || lo == hi,
        }
    }

    fn substeps(&self, d: f64, dt: f64) -> usize {
        if self.gain == 0.0 || d <= 0.0 {
            return 1;
        }
        let slope = self
            .alphas
            .iter()
            .map(|&a| self.gain * a * d.powf(a - 1.0))
            .fold(0.0, f64::max);
        (dt * slope / REFINE_SAFETY).ceil().clamp(1.0, MAX_SUBSTEPS) as usize
    }
}

const HULL_SLACK: f64 = 1e-10;

fn leaves_hull(x: &DVector<f64>, y: &DVector<f64>) -> bool {
    let slack = HULL_SLACK * (1.0 + x.amax());
    y.max() > x.max() + slack || y.min() < x.min() - slack
}

fn rk4(f: &Dynamics, x: &DVector<f64>, h: f64) -> DVector<f64> {
    let k1 = f.eval(x);
    let k2 = f.eval(&(x + &k1 * (h / 2.0)));
    let k3 = f.eval(&(x + &k2 * (h / 2.0)));
    let k4 = f.eval(&(x + &k3 * h));
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

pub(crate) fn smallest_exponent(proto: &ProtocolSpec, schedule: &SwitchingSchedule) -> f64 {
    if proto.kind == ProtocolKind::Linear {
        return 1.0;
    }
    schedule
        .segments()
        .iter()
        .filter_map(|s| {
            let p: &ExponentProfile = s.exponents.as_ref().unwrap_or(&proto.exponents);
            p.min_exponent(&s.graph)
        })
        .fold(1.0, f64::min)
}

struct Recorder {
    traj: Trajectory,
    lyapunov: Vec<f64>,
    has_lyapunov: bool,
}

impl Recorder {
    fn push(&mut self, t: f64, x: &DVector<f64>, monitor: &Monitor, schedule: &SwitchingSchedule) {
        if self.traj.times.last().is_some_and(|&last| t <= last) {
            return;
        }
        let xs: Vec<f64> = x.iter().copied().collect();
        let seg = &schedule.segments()[schedule.segment_index_at(t)].graph;
        self.traj.times.push(t);
        self.traj.disagreement.push(disagreement(&xs));
        self.traj.conserved.push(self.traj.conserved_kind.value(&xs));
        if self.has_lyapunov {
            self.lyapunov
                .push(monitor.eval(&xs, &self.traj.conserved_kind, seg).unwrap_or(f64::NAN));
        }
        self.traj.states.push(xs);
    }
}

/// Integrates the protocol from `x0` over `[0, t_max]` with classical RK4.
///
/// Steps land on every multiple of `step` and on every switch time; a step
/// that would cross a switch is cut at it. Once the disagreement falls to
/// the consensus tolerance the state is replaced by the conserved value (or
/// the current mean when nothing is conserved) and held.
pub fn simulate(
    schedule: &SwitchingSchedule,
    proto: &ProtocolSpec,
    x0: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory, SimError> {
    cfg.validate()?;
    let n = schedule.n();
    if x0.len() != n {
        return Err(SimError::Dimension {
            expected: n,
            got: x0.len(),
        });
    }
    if let Some(i) = x0.iter().position(|v| !v.is_finite()) {
        return Err(SimError::Config(format!("x0[{i}] is not finite")));
    }
    let dynamics = schedule
        .segments()
        .iter()
        .map(|s| {
            let exps = s.exponents.as_ref().unwrap_or(&proto.exponents);
            Dynamics::new(proto.kind, s.graph.clone(), exps)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let stiffness: Vec<Stiffness> = schedule
        .segments()
        .iter()
        .map(|s| Stiffness::of(proto, s.exponents.as_ref().unwrap_or(&proto.exponents), &s.graph))
        .collect();

    let h = cfg.step;
    let t_max = cfg.t_max;
    let eps = 1e-9 * h;
    let tol = cfg
        .consensus_tol
        .unwrap_or_else(|| default_consensus_tol(h, smallest_exponent(proto, schedule)));
    let kind = schedule_conserved_kind(proto, schedule);
    let (monitor, lyapunov_name) = Monitor::choose(proto, schedule, &kind);
    let switches = schedule.switch_times(t_max);

    let mut rec = Recorder {
        traj: Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            disagreement: Vec::new(),
            lyapunov: None,
            lyapunov_name,
            conserved: Vec::new(),
            conserved_kind: kind.clone(),
            convergence_time: None,
            consensus_value: None,
            consensus_tol: tol,
        },
        lyapunov: Vec::new(),
        has_lyapunov: lyapunov_name.is_some(),
    };

    let mut x = DVector::from_row_slice(x0);
    let snap = |x: &mut DVector<f64>| {
        let v = kind.value(x.as_slice());
        x.fill(v);
        v
    };
    if disagreement(x.as_slice()) <= tol {
        rec.traj.consensus_value = Some(snap(&mut x));
        rec.traj.convergence_time = Some(0.0);
    }
    rec.push(0.0, &x, &monitor, schedule);

    let mut t = 0.0;
    let mut k: u64 = 0;
    let mut next_switch = 0;
    while t < t_max {
        let mut t_next = (k + 1) as f64 * h;
        let mut on_grid = true;
        while next_switch < switches.len() && switches[next_switch] <= t + eps {
            next_switch += 1;
        }
        let mut at_switch = false;
        if let Some(&s) = switches.get(next_switch) {
            if s <= t_next + eps {
                at_switch = true;
                on_grid = s >= t_next - eps;
                t_next = s;
            }
        }
        if t_next >= t_max - eps {
            t_next = t_max;
        }

        if rec.traj.convergence_time.is_none() {
            let seg = schedule.segment_index_at(0.5 * (t + t_next));
            let dt = t_next - t;
            let mut m = stiffness[seg].substeps(disagreement(x.as_slice()), dt);
            // Near-coincident neighbours make the flow non-Lipschitz and RK4
            // can push an agent past the hull; retry such steps finer.
            x = loop {
                let mut y = x.clone();
                for _ in 0..m {
                    y = rk4(&dynamics[seg], &y, dt / m as f64);
                }
                if !stiffness[seg].hull || m as f64 >= MAX_SUBSTEPS || !leaves_hull(&x, &y) {
                    break y;
                }
                m *= 2;
            };
            if let Some(agent) = x.iter().position(|v| !v.is_finite()) {
                return Err(SimError::Diverged { time: t_next, agent });
            }
        }
        t = t_next;
        if on_grid {
            k += 1;
        }

        let mut detected = false;
        if rec.traj.convergence_time.is_none() && disagreement(x.as_slice()) <= tol {
            rec.traj.consensus_value = Some(snap(&mut x));
            rec.traj.convergence_time = Some(t);
            detected = true;
        }
        let stride_hit = on_grid && k % cfg.record_stride as u64 == 0;
        if stride_hit || at_switch || detected || t >= t_max {
            rec.push(t, &x, &monitor, schedule);
        }
    }

    let mut traj = rec.traj;
    if rec.has_lyapunov {
        traj.lyapunov = Some(rec.lyapunov);
    }
    Ok(traj)
}
