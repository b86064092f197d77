//! Weighted directed communication graphs.
//!
//! Edge convention used everywhere in this crate: `a[i][j] > 0` means agent
//! `i` receives information from agent `j`, i.e. the edge `(v_j, v_i)` exists
//! and `j` is a neighbor of `i`. Row `i` of the weight matrix therefore lists
//! the in-weights of agent `i`.

mod balance;
mod connectivity;

pub use connectivity::Condensation;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Weights below this are treated as structural zeros by the support-based
/// algorithms (detail balance, reachability).
pub const STRUCTURAL_ZERO: f64 = 1e-15;

/// Communication topology `G(A)`: agent count plus a nonnegative weight
/// matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GraphDocument", into = "GraphDocument")]
pub struct WeightedDigraph {
    weights: DMatrix<f64>,
}

/// JSON form of a graph: `{"n": int, "weights": [[row-major reals]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub weights: Vec<Vec<f64>>,
}

impl TryFrom<GraphDocument> for WeightedDigraph {
    type Error = GraphError;

    fn try_from(doc: GraphDocument) -> Result<Self, Self::Error> {
        if doc.weights.len() != doc.n {
            return Err(GraphError::Shape {
                n: doc.n,
                rows: doc.weights.len(),
                cols: doc.weights.first().map_or(0, Vec::len),
            });
        }
        if let Some(bad) = doc.weights.iter().find(|row| row.len() != doc.n) {
            return Err(GraphError::Shape {
                n: doc.n,
                rows: doc.n,
                cols: bad.len(),
            });
        }
        WeightedDigraph::from_rows(&doc.weights)
    }
}

impl From<WeightedDigraph> for GraphDocument {
    fn from(g: WeightedDigraph) -> Self {
        GraphDocument {
            n: g.n(),
            weights: g.rows(),
        }
    }
}

impl WeightedDigraph {
    /// Validates and wraps a square weight matrix.
    pub fn new(weights: DMatrix<f64>) -> Result<Self, GraphError> {
        let (rows, cols) = weights.shape();
        if rows == 0 {
            return Err(GraphError::Empty);
        }
        if rows != cols {
            return Err(GraphError::Shape { n: rows, rows, cols });
        }
        for i in 0..rows {
            for j in 0..cols {
                let value = weights[(i, j)];
                if !value.is_finite() || value < 0.0 {
                    return Err(GraphError::NegativeWeight { row: i, col: j, value });
                }
            }
            if weights[(i, i)] != 0.0 {
                return Err(GraphError::NonzeroDiagonal {
                    index: i,
                    value: weights[(i, i)],
                });
            }
        }
        Ok(WeightedDigraph { weights })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, GraphError> {
        let n = rows.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(GraphError::Shape {
                n,
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Self::new(DMatrix::zeros(n, n))
    }

    /// Undirected graph from an edge list with a common weight.
    pub fn undirected(n: usize, edges: &[(usize, usize)], weight: f64) -> Result<Self, GraphError> {
        let mut w = DMatrix::zeros(n, n);
        for &(i, j) in edges {
            w[(i, j)] = weight;
            w[(j, i)] = weight;
        }
        Self::new(w)
    }

    /// Undirected cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize, weight: f64) -> Result<Self, GraphError> {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::undirected(n, &edges, weight)
    }

    /// Undirected path `0-1-...-(n-1)`.
    pub fn path(n: usize, weight: f64) -> Result<Self, GraphError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::undirected(n, &edges, weight)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// `a_ij`: weight agent `i` places on information from agent `j`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| self.weights.row(i).iter().copied().collect())
            .collect()
    }

    /// Indices `j` with `a_ij > 0`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| self.weights[(i, j)] > 0.0)
    }

    pub fn has_neighbors(&self, i: usize) -> bool {
        self.neighbors(i).next().is_some()
    }

    pub fn is_symmetric(&self) -> bool {
        self.weights == self.weights.transpose()
    }

    /// Graph Laplacian: `l_ii = sum_k a_ik`, `l_ij = -a_ij`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut l = -self.weights.clone();
        for i in 0..n {
            l[(i, i)] = (0..n).filter(|&j| j != i).map(|j| self.weights[(i, j)]).sum();
        }
        l
    }

    /// Induced infinity norm of the Laplacian (maximum absolute row sum).
    pub fn laplacian_inf_norm(&self) -> f64 {
        let l = self.laplacian();
        (0..self.n())
            .map(|i| l.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Graph with weights `a_ij^(2/(1+alpha0))`; the support is unchanged.
    pub fn exponent_graph(&self, alpha0: f64) -> WeightedDigraph {
        let p = 2.0 / (1.0 + alpha0);
        let weights = self.weights.map(|a| if a > 0.0 { a.powf(p) } else { 0.0 });
        WeightedDigraph { weights }
    }

    /// Subgraph induced by `vertices`, inheriting weights. Vertex order follows
    /// the slice.
    pub fn induced(&self, vertices: &[usize]) -> Result<WeightedDigraph, GraphError> {
        let m = vertices.len();
        Self::new(DMatrix::from_fn(m, m, |r, c| self.weights[(vertices[r], vertices[c])]))
    }

    /// Weights of `diag(w) A + A^T diag(w)`, the undirected graph whose
    /// Laplacian equals `diag(w) L(A) + L(A)^T diag(w)` when `w^T L(A) = 0`.
    pub fn balanced_symmetrization(&self, w: &DVector<f64>) -> Result<WeightedDigraph, GraphError> {
        if w.len() != self.n() {
            return Err(GraphError::Dimension {
                expected: self.n(),
                got: w.len(),
            });
        }
        let scaled = DMatrix::from_diagonal(w) * &self.weights;
        Self::new(&scaled + scaled.transpose())
    }
}
