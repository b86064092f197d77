//! Consensus control laws.
//!
//! * `P1`: `u_i = sig(sum_j a_ij (x_j - x_i), alpha_i)`
//! * `P2`: `u_i = sum_j a_ij sig(x_j - x_i, alpha_ij)`
//! * `P3`: `u_i = sum_j a_ij (sig(x_j, alpha_j) - sig(x_i, alpha_i))`
//! * `Linear`: `u = -L(A) x`
//!
//! Agents without neighbors get `u_i = 0` under every law.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::ProtocolError;
use crate::graph::WeightedDigraph;

/// `sign(r) |r|^a`, continuous in `r` and exactly zero at `r = 0`.
#[inline]
pub fn sig(r: f64, a: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else if a == 1.0 {
        r
    } else {
        r.signum() * (a * r.abs().ln()).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    P1,
    P2,
    P3,
    #[serde(rename = "linear")]
    Linear,
}

impl ProtocolKind {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::P1 => "P1",
            ProtocolKind::P2 => "P2",
            ProtocolKind::P3 => "P3",
            ProtocolKind::Linear => "linear",
        }
    }

    /// Whether the law uses one exponent per agent (as opposed to per edge).
    pub fn is_node_based(self) -> bool {
        matches!(self, ProtocolKind::P1 | ProtocolKind::P3)
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponents of a protocol: one per agent (`alpha_i`) or one per ordered pair
/// (`alpha_ij`). Edge entries for non-neighbor pairs may be left undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentProfile {
    Uniform(f64),
    Node(Vec<f64>),
    Edge(Vec<Vec<Option<f64>>>),
}

impl ExponentProfile {
    /// Defined exponent values, ignoring entries on absent edges.
    fn defined_values(&self, g: &WeightedDigraph) -> Vec<f64> {
        match self {
            ExponentProfile::Uniform(a) => vec![*a],
            ExponentProfile::Node(v) => v.clone(),
            ExponentProfile::Edge(m) => {
                let mut out = Vec::new();
                for i in 0..g.n() {
                    for j in g.neighbors(i) {
                        if let Some(a) = m.get(i).and_then(|r| r.get(j)).copied().flatten() {
                            out.push(a);
                        }
                    }
                }
                out
            }
        }
    }

    /// Largest defined exponent (`alpha_0`).
    pub fn max_exponent(&self, g: &WeightedDigraph) -> Option<f64> {
        self.defined_values(g).into_iter().reduce(f64::max)
    }

    pub fn min_exponent(&self, g: &WeightedDigraph) -> Option<f64> {
        self.defined_values(g).into_iter().reduce(f64::min)
    }

    /// True when every defined exponent has the same value.
    pub fn is_uniform_on(&self, g: &WeightedDigraph) -> bool {
        let vals = self.defined_values(g);
        vals.windows(2).all(|w| w[0] == w[1])
    }

    /// Checks shape against `g` and that every defined value is admissible for
    /// `kind`.
    pub fn validate_for(&self, kind: ProtocolKind, g: &WeightedDigraph) -> Result<(), ProtocolError> {
        let n = g.n();
        match (kind, self) {
            (ProtocolKind::P2, ExponentProfile::Node(_)) => {
                return Err(ProtocolError::ProfileMismatch {
                    protocol: "P2",
                    expected: "edge (alpha_ij)",
                })
            }
            (k, ExponentProfile::Edge(_)) if k.is_node_based() => {
                return Err(ProtocolError::ProfileMismatch {
                    protocol: k.name(),
                    expected: "node (alpha_i)",
                })
            }
            _ => {}
        }
        match self {
            ExponentProfile::Uniform(_) => {}
            ExponentProfile::Node(v) if v.len() != n => {
                return Err(ProtocolError::Dimension {
                    expected: n,
                    got: v.len(),
                })
            }
            ExponentProfile::Edge(m) if m.len() != n || m.iter().any(|r| r.len() != n) => {
                return Err(ProtocolError::Dimension {
                    expected: n,
                    got: m.len(),
                })
            }
            _ => {}
        }
        if let ExponentProfile::Edge(m) = self {
            for i in 0..n {
                for j in g.neighbors(i) {
                    if m[i][j].is_none() {
                        return Err(ProtocolError::ExponentRange {
                            location: format!("alpha[{i}][{j}] (undefined on an edge)"),
                            value: f64::NAN,
                        });
                    }
                }
            }
        }
        self.validate_values(kind)
    }

    /// Range check independent of any graph.
    pub fn validate_values(&self, kind: ProtocolKind) -> Result<(), ProtocolError> {
        let entries: Vec<(String, f64)> = match self {
            ExponentProfile::Uniform(a) => vec![("alpha".to_string(), *a)],
            ExponentProfile::Node(v) => v.iter().enumerate().map(|(i, a)| (format!("alpha[{i}]"), *a)).collect(),
            ExponentProfile::Edge(m) => m
                .iter()
                .enumerate()
                .flat_map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .filter_map(move |(j, a)| a.map(|a| (format!("alpha[{i}][{j}]"), a)))
                })
                .collect(),
        };
        for (location, value) in entries {
            if kind == ProtocolKind::Linear {
                if value != 1.0 {
                    return Err(ProtocolError::LinearExponent);
                }
            } else if !(value > 0.0 && value < 1.0) {
                return Err(ProtocolError::ExponentRange { location, value });
            }
        }
        Ok(())
    }

    /// Checks `alpha_ij = alpha_ji` on every pair of mutual neighbors.
    pub fn check_symmetric_on(&self, g: &WeightedDigraph) -> Result<(), ProtocolError> {
        if let ExponentProfile::Edge(m) = self {
            for i in 0..g.n() {
                for j in (i + 1)..g.n() {
                    if g.weight(i, j) > 0.0 && g.weight(j, i) > 0.0 {
                        let (a, b) = (m[i][j], m[j][i]);
                        if a != b {
                            return Err(ProtocolError::AsymmetricExponents {
                                i,
                                j,
                                a: a.unwrap_or(f64::NAN),
                                b: b.unwrap_or(f64::NAN),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Per-agent exponents for `n` agents.
    pub fn node_values(&self, n: usize) -> Vec<f64> {
        match self {
            ExponentProfile::Uniform(a) => vec![*a; n],
            ExponentProfile::Node(v) => v.clone(),
            ExponentProfile::Edge(_) => panic!("edge exponents have no per-agent form"),
        }
    }

    /// Full `alpha_ij` matrix; pairs that are not edges get the largest
    /// defined exponent (their weight is zero, so the value never matters).
    pub fn edge_values(&self, g: &WeightedDigraph) -> DMatrix<f64> {
        let n = g.n();
        match self {
            ExponentProfile::Uniform(a) => DMatrix::from_element(n, n, *a),
            ExponentProfile::Node(_) => panic!("node exponents have no per-edge form"),
            ExponentProfile::Edge(m) => {
                let fill = self.max_exponent(g).unwrap_or(1.0);
                DMatrix::from_fn(n, n, |i, j| {
                    if g.weight(i, j) > 0.0 {
                        m[i][j].unwrap_or(fill)
                    } else {
                        fill
                    }
                })
            }
        }
    }
}

/// A consensus law together with its exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub kind: ProtocolKind,
    pub exponents: ExponentProfile,
}

impl ProtocolSpec {
    pub fn new(kind: ProtocolKind, exponents: ExponentProfile) -> Result<Self, ProtocolError> {
        match (kind, &exponents) {
            (ProtocolKind::P2, ExponentProfile::Node(_)) => Err(ProtocolError::ProfileMismatch {
                protocol: "P2",
                expected: "edge (alpha_ij)",
            }),
            (k, ExponentProfile::Edge(_)) if k.is_node_based() => Err(ProtocolError::ProfileMismatch {
                protocol: k.name(),
                expected: "node (alpha_i)",
            }),
            _ => {
                exponents.validate_values(kind)?;
                Ok(ProtocolSpec { kind, exponents })
            }
        }
    }

    pub fn linear() -> Self {
        ProtocolSpec {
            kind: ProtocolKind::Linear,
            exponents: ExponentProfile::Uniform(1.0),
        }
    }

    pub fn uniform(kind: ProtocolKind, alpha: f64) -> Result<Self, ProtocolError> {
        Self::new(kind, ExponentProfile::Uniform(alpha))
    }
}

/// A protocol bound to one topology with exponents resolved to dense form.
#[derive(Debug, Clone)]
pub struct Dynamics {
    kind: ProtocolKind,
    graph: WeightedDigraph,
    node_alpha: Vec<f64>,
    edge_alpha: DMatrix<f64>,
}

impl Dynamics {
    pub fn new(kind: ProtocolKind, graph: WeightedDigraph, exponents: &ExponentProfile) -> Result<Self, ProtocolError> {
        exponents.validate_for(kind, &graph)?;
        let n = graph.n();
        let (node_alpha, edge_alpha) = match kind {
            ProtocolKind::P1 | ProtocolKind::P3 => (exponents.node_values(n), DMatrix::zeros(0, 0)),
            ProtocolKind::P2 => (Vec::new(), exponents.edge_values(&graph)),
            ProtocolKind::Linear => (Vec::new(), DMatrix::zeros(0, 0)),
        };
        Ok(Dynamics {
            kind,
            graph,
            node_alpha,
            edge_alpha,
        })
    }

    pub fn kind(&self) -> ProtocolKind {
        self.kind
    }

    pub fn graph(&self) -> &WeightedDigraph {
        &self.graph
    }

    pub fn eval(&self, x: &DVector<f64>) -> DVector<f64> {
        match self.kind {
            ProtocolKind::P1 => rhs_p1(&self.graph, &self.node_alpha, x),
            ProtocolKind::P2 => rhs_p2(&self.graph, &self.edge_alpha, x),
            ProtocolKind::P3 => rhs_p3(&self.graph, &self.node_alpha, x),
            ProtocolKind::Linear => rhs_linear(&self.graph, x),
        }
    }
}

pub fn rhs_p1(g: &WeightedDigraph, alpha: &[f64], x: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(g.n(), |i, _| {
        let y: f64 = g.neighbors(i).map(|j| g.weight(i, j) * (x[j] - x[i])).sum();
        sig(y, alpha[i])
    })
}

pub fn rhs_p2(g: &WeightedDigraph, alpha: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(g.n(), |i, _| {
        g.neighbors(i)
            .map(|j| g.weight(i, j) * sig(x[j] - x[i], alpha[(i, j)]))
            .sum()
    })
}

pub fn rhs_p3(g: &WeightedDigraph, alpha: &[f64], x: &DVector<f64>) -> DVector<f64> {
    let s: Vec<f64> = x.iter().zip(alpha).map(|(&xi, &a)| sig(xi, a)).collect();
    DVector::from_fn(g.n(), |i, _| {
        g.neighbors(i).map(|j| g.weight(i, j) * (s[j] - s[i])).sum()
    })
}

pub fn rhs_linear(g: &WeightedDigraph, x: &DVector<f64>) -> DVector<f64> {
    -(g.laplacian() * x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;

    fn pair(w: f64) -> WeightedDigraph {
        WeightedDigraph::from_rows(&[vec![0.0, w], vec![w, 0.0]]).unwrap()
    }

    #[test]
    fn sig_values() {
        assert_eq!(sig(0.0, 0.5), 0.0);
        assert_relative_eq!(sig(-4.0, 0.5), -2.0, epsilon = 1e-14);
        assert_relative_eq!(sig(9.0, 0.5), 3.0, epsilon = 1e-14);
        assert_eq!(sig(-1.7, 1.0), -1.7);
        assert_eq!(sig(-0.3, 0.4), -sig(0.3, 0.4));
    }

    #[test]
    fn p1_pair() {
        let u = rhs_p1(&pair(1.0), &[0.5, 0.5], &dvector![0.0, 1.0]);
        assert_relative_eq!(u[0], 1.0);
        assert_relative_eq!(u[1], -1.0);
    }

    #[test]
    fn isolated_agent_stays_put() {
        let a1 = WeightedDigraph::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
        let x = dvector![0.3, 0.4, -2.0];
        assert_eq!(rhs_p1(&a1, &[0.5; 3], &x)[2], 0.0);
        assert_eq!(rhs_p2(&a1, &DMatrix::from_element(3, 3, 0.5), &x)[2], 0.0);
    }

    #[test]
    fn p2_pair() {
        let u = rhs_p2(&pair(1.0), &DMatrix::from_element(2, 2, 0.5), &dvector![0.3, 0.4]);
        assert_relative_eq!(u[0], 0.1f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(u[1], -(0.1f64.sqrt()), epsilon = 1e-14);
    }

    #[test]
    fn p3_pair() {
        let u = rhs_p3(&pair(1.0), &[0.5, 0.5], &dvector![1.0, -1.0]);
        assert_relative_eq!(u[0], -2.0);
        assert_relative_eq!(u[1], 2.0);
        assert_eq!(rhs_p3(&pair(1.0), &[0.5, 0.5], &dvector![0.0, 0.0]), dvector![0.0, 0.0]);
    }

    #[test]
    fn linear_by_hand() {
        let g = WeightedDigraph::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(rhs_linear(&g, &dvector![0.0, 1.0]), dvector![1.0, -2.0]);
    }

    #[test]
    fn consensus_states_are_equilibria() {
        let g = WeightedDigraph::cycle(5, 2.0).unwrap();
        let x = DVector::from_element(5, 3.25);
        assert_eq!(rhs_p1(&g, &[0.4; 5], &x).amax(), 0.0);
        assert_eq!(rhs_p2(&g, &DMatrix::from_element(5, 5, 0.4), &x).amax(), 0.0);
        assert_eq!(rhs_p3(&g, &[0.4; 5], &x).amax(), 0.0);
        assert_eq!(rhs_linear(&g, &x).amax(), 0.0);
    }

    #[test]
    fn spec_pairing_is_enforced() {
        assert!(ProtocolSpec::new(ProtocolKind::P2, ExponentProfile::Node(vec![0.5; 2])).is_err());
        assert!(ProtocolSpec::new(ProtocolKind::P1, ExponentProfile::Edge(vec![vec![None; 2]; 2])).is_err());
        assert!(ProtocolSpec::uniform(ProtocolKind::P1, 1.0).is_err());
        assert!(ProtocolSpec::uniform(ProtocolKind::P2, 0.0).is_err());
        assert!(ProtocolSpec::uniform(ProtocolKind::Linear, 0.5).is_err());
        assert!(ProtocolSpec::uniform(ProtocolKind::P3, 0.3).is_ok());
    }

    #[test]
    fn undefined_edge_exponents_take_the_maximum() {
        let g = WeightedDigraph::path(3, 1.0).unwrap();
        let m = vec![
            vec![None, Some(0.3), None],
            vec![Some(0.3), None, Some(0.7)],
            vec![None, Some(0.7), None],
        ];
        let p = ExponentProfile::Edge(m);
        p.validate_for(ProtocolKind::P2, &g).unwrap();
        let full = p.edge_values(&g);
        assert_eq!(full[(0, 2)], 0.7);
        assert_eq!(full[(0, 1)], 0.3);
        assert_eq!(p.max_exponent(&g), Some(0.7));
        assert_eq!(p.min_exponent(&g), Some(0.3));
        p.check_symmetric_on(&g).unwrap();
    }

    #[test]
    fn asymmetric_edge_exponents_detected() {
        let g = pair(1.0);
        let p = ExponentProfile::Edge(vec![vec![None, Some(0.3)], vec![Some(0.6), None]]);
        assert!(matches!(
            p.check_symmetric_on(&g),
            Err(ProtocolError::AsymmetricExponents { i: 0, j: 1, .. })
        ));
    }

    #[test]
    fn missing_exponent_on_edge_is_rejected() {
        let g = pair(1.0);
        let p = ExponentProfile::Edge(vec![vec![None, None], vec![Some(0.5), None]]);
        assert!(p.validate_for(ProtocolKind::P2, &g).is_err());
    }
}
