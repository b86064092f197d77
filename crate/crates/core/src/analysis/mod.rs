//! Lyapunov functions, rate constants, convergence-time bounds and rate
//! crossover thresholds.

mod bounds;
mod constants;
mod lyapunov;
mod thresholds;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use bounds::{
    bound_leader_p1, bound_p1_undirected, bound_p2_undirected, bound_strongly_connected_p1, bound_switching,
    comparison_solution, finite_time_bound,
};
pub(crate) use constants::k4_formula;
pub use constants::{
    followers_of, k1_lower_bound, k1_sampled_min, k2_constant, k3_constant, k4_constant, k4_general, k6_constant,
    leader_block_p1, leader_block_p2, weighted_symmetric_laplacian,
};
pub use lyapunov::{deviation, mean, v_edge_energy, v_quadratic, weighted_power_sum};
pub use thresholds::{thresholds_thm5, thresholds_thm6, uniform_weight_b_scale, Thresholds};

/// Values a scenario quotes for comparison (for instance published numbers).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues {
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
}

/// Reference values next to the bound recomputed from the reference `V0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    #[serde(rename = "V0")]
    pub v0: f64,
    pub bound: Option<f64>,
    pub bound_from_reference_v0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub scenario: String,
    pub method: String,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub constants: BTreeMap<String, f64>,
    pub bound: Option<f64>,
    pub thresholds: Option<Thresholds>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceComparison>,
}
