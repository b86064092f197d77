use std::collections::BTreeSet;

use nalgebra::DMatrix;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::{WeightedDigraph, STRUCTURAL_ZERO};

/// Strongly connected components and the DAG between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condensation {
    /// Components, each sorted ascending; ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    /// Component of each vertex.
    pub component_of: Vec<usize>,
    /// Condensation edges `(from, to)`: information flows from component
    /// `from` into component `to`.
    pub edges: Vec<(usize, usize)>,
}

impl Condensation {
    /// Components with no incoming condensation edge.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_incoming = vec![false; self.components.len()];
        for &(_, to) in &self.edges {
            has_incoming[to] = true;
        }
        (0..self.components.len()).filter(|&c| !has_incoming[c]).collect()
    }
}

impl WeightedDigraph {
    fn support_digraph(&self) -> DiGraph<(), ()> {
        let n = self.n();
        let mut g = DiGraph::with_capacity(n, n * n);
        let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.weight(i, j) > STRUCTURAL_ZERO {
                    // information flows j -> i
                    g.add_edge(nodes[j], nodes[i], ());
                }
            }
        }
        g
    }

    pub fn scc_condensation(&self) -> Condensation {
        let n = self.n();
        let mut components: Vec<Vec<usize>> = tarjan_scc(&self.support_digraph())
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        components.sort_by_key(|c| c[0]);

        let mut component_of = vec![0; n];
        for (c, members) in components.iter().enumerate() {
            for &v in members {
                component_of[v] = c;
            }
        }
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.weight(i, j) > STRUCTURAL_ZERO && component_of[i] != component_of[j] {
                    edges.insert((component_of[j], component_of[i]));
                }
            }
        }
        Condensation {
            components,
            component_of,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.scc_condensation().components.len() == 1
    }

    /// True iff some vertex reaches every other vertex along directed paths.
    pub fn has_spanning_tree(&self) -> bool {
        !self.leaders().is_empty()
    }

    /// Vertices that reach all others: the unique source component of the
    /// condensation, or nothing when there are several sources.
    pub fn leaders(&self) -> Vec<usize> {
        let cond = self.scc_condensation();
        match cond.sources().as_slice() {
            [only] => cond.components[*only].clone(),
            _ => Vec::new(),
        }
    }

    /// The unique leader whose in-weights are all zero, if the graph has one.
    pub fn root_leader(&self) -> Option<usize> {
        match self.leaders().as_slice() {
            [leader] if !self.has_neighbors(*leader) => Some(*leader),
            _ => None,
        }
    }

    /// Irreducibility test `(I + A)^(n-1) > 0` over the boolean semiring.
    pub fn is_irreducible(&self) -> bool {
        let n = self.n();
        let base = DMatrix::from_fn(n, n, |i, j| i == j || self.weight(i, j) > STRUCTURAL_ZERO);
        let mut result = DMatrix::from_fn(n, n, |i, j| i == j);
        let mut power = base;
        let mut e = n - 1;
        while e > 0 {
            if e & 1 == 1 {
                result = bool_mul(&result, &power);
            }
            power = bool_mul(&power, &power);
            e >>= 1;
        }
        result.iter().all(|&b| b)
    }
}

fn bool_mul(a: &DMatrix<bool>, b: &DMatrix<bool>) -> DMatrix<bool> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |i, j| (0..n).any(|k| a[(i, k)] && b[(k, j)]))
}
