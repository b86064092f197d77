use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::graph::WeightedDigraph;
use crate::protocol::ExponentProfile;

/// One constant piece of a switching schedule. Segments without exponents
/// use the protocol's profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub graph: WeightedDigraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<ExponentProfile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Repeat {
    /// Play the segments once; the last one then stays active.
    #[default]
    Once,
    /// Play the segment list `k` times; the last segment then stays active.
    Cycles(usize),
    Forever,
}

/// Piecewise-constant, right-continuous topology schedule: at a switch time
/// the new segment is already active.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleDocument", into = "ScheduleDocument")]
pub struct SwitchingSchedule {
    segments: Vec<Segment>,
    repeat: Repeat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleDocument {
    pub segments: Vec<Segment>,
    #[serde(default)]
    pub repeat: Repeat,
}

impl TryFrom<ScheduleDocument> for SwitchingSchedule {
    type Error = SimError;

    fn try_from(doc: ScheduleDocument) -> Result<Self, SimError> {
        SwitchingSchedule::new(doc.segments, doc.repeat)
    }
}

impl From<SwitchingSchedule> for ScheduleDocument {
    fn from(s: SwitchingSchedule) -> Self {
        ScheduleDocument {
            segments: s.segments,
            repeat: s.repeat,
        }
    }
}

impl SwitchingSchedule {
    pub fn new(segments: Vec<Segment>, repeat: Repeat) -> Result<Self, SimError> {
        let first = segments
            .first()
            .ok_or_else(|| SimError::Schedule("at least one segment is required".into()))?;
        let n = first.graph.n();
        for (k, seg) in segments.iter().enumerate() {
            if !(seg.duration.is_finite() && seg.duration > 0.0) {
                return Err(SimError::Schedule(format!(
                    "segment {k}: duration {} must be positive and finite",
                    seg.duration
                )));
            }
            if seg.graph.n() != n {
                return Err(SimError::Schedule(format!(
                    "segment {k} has {} agents, segment 0 has {n}",
                    seg.graph.n()
                )));
            }
        }
        if repeat == Repeat::Cycles(0) {
            return Err(SimError::Schedule("cycle count must be at least 1".into()));
        }
        Ok(SwitchingSchedule { segments, repeat })
    }

    /// A single topology active for all time.
    pub fn fixed(graph: WeightedDigraph) -> Self {
        SwitchingSchedule {
            segments: vec![Segment {
                duration: 1.0,
                graph,
                exponents: None,
            }],
            repeat: Repeat::Once,
        }
    }

    pub fn n(&self) -> usize {
        self.segments[0].graph.n()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn repeat(&self) -> Repeat {
        self.repeat
    }

    pub fn is_fixed(&self) -> bool {
        self.segments.len() == 1 && self.repeat != Repeat::Forever
    }

    fn period(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Number of played segments before the last one freezes, if finite.
    fn played(&self) -> Option<usize> {
        match self.repeat {
            Repeat::Once => Some(self.segments.len()),
            Repeat::Cycles(k) => Some(k * self.segments.len()),
            Repeat::Forever => None,
        }
    }

    /// Index into [`segments`](Self::segments) of the segment active at `t`.
    pub fn segment_index_at(&self, t: f64) -> usize {
        let m = self.segments.len();
        let period = self.period();
        let cycle = (t / period).floor().max(0.0);
        let mut offset = t - cycle * period;
        let mut local = m - 1;
        for (j, seg) in self.segments.iter().enumerate() {
            if offset < seg.duration {
                local = j;
                break;
            }
            offset -= seg.duration;
        }
        let played = cycle as usize * m + local;
        match self.played() {
            Some(total) if played >= total => m - 1,
            _ => local,
        }
    }

    /// Times in `(0, t_max]` at which the active segment changes.
    pub fn switch_times(&self, t_max: f64) -> Vec<f64> {
        let m = self.segments.len();
        let period = self.period();
        let mut prefix = Vec::with_capacity(m);
        let mut acc = 0.0;
        for seg in &self.segments {
            acc += seg.duration;
            prefix.push(acc);
        }
        let mut out = Vec::new();
        let mut played = 0usize;
        for cycle in 0usize.. {
            for &p in &prefix {
                played += 1;
                if self.played().is_some_and(|total| played >= total) {
                    return out;
                }
                let b = cycle as f64 * period + p;
                if b > t_max {
                    return out;
                }
                out.push(b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(duration: f64, w: f64) -> Segment {
        Segment {
            duration,
            graph: WeightedDigraph::path(2, w).unwrap(),
            exponents: None,
        }
    }

    #[test]
    fn repeating_schedule_switch_times() {
        let s = SwitchingSchedule::new(vec![seg(1.0, 1.0), seg(1.0, 2.0)], Repeat::Forever).unwrap();
        assert_eq!(s.switch_times(4.0), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.segment_index_at(0.5), 0);
        assert_eq!(s.segment_index_at(1.0), 1);
        assert_eq!(s.segment_index_at(2.5), 0);
        assert_eq!(s.segment_index_at(3.999), 1);
    }

    #[test]
    fn once_freezes_last_segment() {
        let s = SwitchingSchedule::new(vec![seg(0.25, 1.0), seg(0.25, 2.0), seg(0.5, 3.0)], Repeat::Once).unwrap();
        assert_eq!(s.switch_times(10.0), vec![0.25, 0.5]);
        assert_eq!(s.segment_index_at(7.3), 2);
        assert_eq!(s.segment_index_at(0.3), 1);
    }

    #[test]
    fn cycles_then_freeze() {
        let s = SwitchingSchedule::new(vec![seg(1.0, 1.0), seg(2.0, 2.0)], Repeat::Cycles(2)).unwrap();
        assert_eq!(s.switch_times(100.0), vec![1.0, 3.0, 4.0]);
        assert_eq!(s.segment_index_at(3.5), 0);
        assert_eq!(s.segment_index_at(50.0), 1);
    }

    #[test]
    fn invalid_schedules() {
        assert!(SwitchingSchedule::new(vec![], Repeat::Once).is_err());
        assert!(SwitchingSchedule::new(vec![seg(0.0, 1.0)], Repeat::Once).is_err());
        assert!(SwitchingSchedule::new(vec![seg(1.0, 1.0)], Repeat::Cycles(0)).is_err());
        let other = Segment {
            duration: 1.0,
            graph: WeightedDigraph::path(3, 1.0).unwrap(),
            exponents: None,
        };
        assert!(SwitchingSchedule::new(vec![seg(1.0, 1.0), other], Repeat::Once).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = SwitchingSchedule::new(vec![seg(1.0, 1.0), seg(1.0, 2.0)], Repeat::Cycles(3)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"cycles\":3"));
        let back: SwitchingSchedule = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let forever: SwitchingSchedule = serde_json::from_str(
            r#"{"segments":[{"duration":0.5,"graph":{"n":2,"weights":[[0,1],[1,0]]}}],"repeat":"forever"}"#,
        )
        .unwrap();
        assert_eq!(forever.repeat(), Repeat::Forever);
    }
}
