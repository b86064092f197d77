//! Finite-time consensus of continuous-time multi-agent systems.
//!
//! * [`graph`]: weighted digraphs, Laplacians, condensation, detail balance.
//! * [`spectral`]: symmetric eigenvalues and Gershgorin checks.
//! * [`protocol`]: signed-power control laws.
//! * [`sim`]: fixed-step integration under switching topologies.
//! * [`analysis`]: Lyapunov functions, constants and convergence-time bounds.
//! * [`scenario`]: scenario documents, built-ins and the command runner.

pub mod analysis;
pub mod error;
pub mod graph;
pub mod protocol;
pub mod scenario;
pub mod sim;
pub mod spectral;

pub use error::{AnalysisError, GraphError, ProtocolError, ScenarioError, SimError, SpectralError};
pub use graph::{Condensation, WeightedDigraph};
pub use protocol::{sig, ExponentProfile, ProtocolKind, ProtocolSpec};
pub use sim::{simulate, IntegratorConfig, Repeat, SwitchingSchedule, Trajectory};
pub use spectral::SpectralSummary;
