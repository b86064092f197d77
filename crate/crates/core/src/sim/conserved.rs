use nalgebra::DVector;

use super::SwitchingSchedule;
use crate::graph::WeightedDigraph;
use crate::protocol::{ExponentProfile, ProtocolKind, ProtocolSpec};

/// Quantity left invariant by the closed loop, which is also the final
/// consensus value when consensus is reached.
#[derive(Debug, Clone, PartialEq)]
pub enum ConservedKind {
    /// Arithmetic mean of the states.
    Mean,
    /// `w^T x / sum(w)` for the stored positive weights (normalized to sum 1).
    WeightedMean(DVector<f64>),
    /// State of the agent with no neighbors that leads the graph.
    Leader(usize),
    /// Nothing is conserved; the arithmetic mean is recorded for reference.
    None,
}

impl ConservedKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConservedKind::Mean => "mean",
            ConservedKind::WeightedMean(_) => "omega-mean",
            ConservedKind::Leader(_) => "leader",
            ConservedKind::None => "none",
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            ConservedKind::Mean | ConservedKind::None => x.iter().sum::<f64>() / x.len() as f64,
            ConservedKind::WeightedMean(w) => w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() / w.sum(),
            ConservedKind::Leader(l) => x[*l],
        }
    }

    fn agrees_with(&self, other: &ConservedKind) -> bool {
        match (self, other) {
            (ConservedKind::WeightedMean(a), ConservedKind::WeightedMean(b)) => (a - b).amax() <= 1e-12,
            _ => self == other,
        }
    }
}

/// Conserved kind for one topology under one protocol.
///
/// Precedence: a neighborless leader, then the mean (symmetric weights and
/// exponents under `P2`/`Linear`), then a detail-balance weighted mean
/// (`P2`/`Linear`), then the left null vector of `L` on strongly connected
/// graphs (`P3`/`Linear`).
pub fn conserved_kind(kind: ProtocolKind, exponents: &ExponentProfile, g: &WeightedDigraph) -> ConservedKind {
    if let Some(l) = g.root_leader() {
        return ConservedKind::Leader(l);
    }
    match kind {
        ProtocolKind::P1 => ConservedKind::None,
        ProtocolKind::P2 | ProtocolKind::Linear => {
            let symmetric_exponents = kind == ProtocolKind::Linear || exponents.check_symmetric_on(g).is_ok();
            if symmetric_exponents {
                if g.is_symmetric() {
                    return ConservedKind::Mean;
                }
                if let Some(w) = g.is_detail_balanced() {
                    return ConservedKind::WeightedMean(w);
                }
            }
            if kind == ProtocolKind::Linear {
                if let Ok(w) = g.left_null_vector() {
                    return ConservedKind::WeightedMean(w);
                }
            }
            ConservedKind::None
        }
        ProtocolKind::P3 => match g.left_null_vector() {
            Ok(w) => ConservedKind::WeightedMean(w),
            Err(_) => ConservedKind::None,
        },
    }
}

pub fn conserved_quantity(proto: &ProtocolSpec, g: &WeightedDigraph, x: &[f64]) -> (ConservedKind, f64) {
    let kind = conserved_kind(proto.kind, &proto.exponents, g);
    let value = kind.value(x);
    (kind, value)
}

/// Conserved kind shared by every segment of a schedule, or `None` when the
/// segments disagree.
pub fn schedule_conserved_kind(proto: &ProtocolSpec, schedule: &SwitchingSchedule) -> ConservedKind {
    let mut kinds = schedule.segments().iter().map(|seg| {
        let exps = seg.exponents.as_ref().unwrap_or(&proto.exponents);
        conserved_kind(proto.kind, exps, &seg.graph)
    });
    let first = kinds.next().unwrap_or(ConservedKind::None);
    if kinds.all(|k| k.agrees_with(&first)) {
        first
    } else {
        ConservedKind::None
    }
}
