use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::Trajectory;

/// Summary of a run as written by `simulate --diag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub convergence_time: Option<f64>,
    pub consensus_value: Option<f64>,
    pub conserved_kind: String,
    pub final_state: Vec<f64>,
}

impl Trajectory {
    /// CSV with header `t,x_1,...,x_n,disagreement,conserved`; numbers carry
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in 1..=self.n() {
            let _ = write!(out, ",x_{i}");
        }
        out.push_str(",disagreement,conserved\n");
        for (k, t) in self.times.iter().enumerate() {
            let _ = write!(out, "{t:.16e}");
            for v in &self.states[k] {
                let _ = write!(out, ",{v:.16e}");
            }
            let _ = writeln!(out, ",{:.16e},{:.16e}", self.disagreement[k], self.conserved[k]);
        }
        out
    }

    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            convergence_time: self.convergence_time,
            consensus_value: self.consensus_value,
            conserved_kind: self.conserved_kind.name().to_string(),
            final_state: self.final_state().to_vec(),
        }
    }
}
