#![allow(dead_code)]

use ftconsensus::graph::WeightedDigraph;
use ftconsensus::protocol::{ExponentProfile, ProtocolKind, ProtocolSpec};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn weight(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.1..3.0)
}

/// Each ordered pair is an edge with probability `p`.
pub fn digraph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> WeightedDigraph {
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(p) {
                w[(i, j)] = weight(rng);
            }
        }
    }
    WeightedDigraph::new(w).unwrap()
}

fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

pub fn strongly_connected(rng: &mut ChaCha8Rng, n: usize) -> WeightedDigraph {
    let mut w = digraph(rng, n, 0.2).weights().clone();
    let order = shuffled(rng, n);
    for k in 0..n {
        let (from, to) = (order[k], order[(k + 1) % n]);
        if from != to {
            w[(to, from)] = weight(rng);
        }
    }
    WeightedDigraph::new(w).unwrap()
}

pub fn connected_undirected(rng: &mut ChaCha8Rng, n: usize) -> WeightedDigraph {
    let mut w = DMatrix::zeros(n, n);
    let order = shuffled(rng, n);
    for k in 1..n {
        let parent = order[rng.random_range(0..k)];
        let a = weight(rng);
        w[(order[k], parent)] = a;
        w[(parent, order[k])] = a;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if w[(i, j)] == 0.0 && rng.random_bool(0.2) {
                let a = weight(rng);
                w[(i, j)] = a;
                w[(j, i)] = a;
            }
        }
    }
    WeightedDigraph::new(w).unwrap()
}

/// Random digraph containing a directed spanning tree.
pub fn with_spanning_tree(rng: &mut ChaCha8Rng, n: usize) -> WeightedDigraph {
    let mut w = digraph(rng, n, 0.15).weights().clone();
    let order = shuffled(rng, n);
    for k in 1..n {
        let parent = order[rng.random_range(0..k)];
        w[(order[k], parent)] = weight(rng);
    }
    WeightedDigraph::new(w).unwrap()
}

/// `a_ij = s_ij / w_i` for a random symmetric `s`, so `diag(w) A` is
/// symmetric.
pub fn detail_balanced(rng: &mut ChaCha8Rng, n: usize) -> WeightedDigraph {
    let s = connected_undirected(rng, n);
    let omega: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
    let w = DMatrix::from_fn(n, n, |i, j| s.weight(i, j) / omega[i]);
    WeightedDigraph::new(w).unwrap()
}

pub fn state(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()
}

pub fn alpha(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.2..0.95)
}

/// Random protocol valid on `g`; edge exponents are symmetric when
/// `symmetric` is set.
pub fn protocol(rng: &mut ChaCha8Rng, kind: ProtocolKind, g: &WeightedDigraph, symmetric: bool) -> ProtocolSpec {
    let n = g.n();
    let exps = match kind {
        ProtocolKind::Linear => return ProtocolSpec::linear(),
        ProtocolKind::P2 => {
            if rng.random_bool(0.5) {
                ExponentProfile::Uniform(alpha(rng))
            } else {
                let mut m = vec![vec![None; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        if g.weight(i, j) > 0.0 || g.weight(j, i) > 0.0 {
                            if symmetric && j < i {
                                m[i][j] = m[j][i];
                            } else {
                                m[i][j] = Some(alpha(rng));
                            }
                        }
                    }
                }
                ExponentProfile::Edge(m)
            }
        }
        _ => {
            if rng.random_bool(0.5) {
                ExponentProfile::Uniform(alpha(rng))
            } else {
                ExponentProfile::Node((0..n).map(|_| alpha(rng)).collect())
            }
        }
    };
    ProtocolSpec::new(kind, exps).unwrap()
}

pub fn any_kind(rng: &mut ChaCha8Rng) -> ProtocolKind {
    [
        ProtocolKind::P1,
        ProtocolKind::P2,
        ProtocolKind::P3,
        ProtocolKind::Linear,
    ][rng.random_range(0..4)]
}

/// Reachability closure by repeated boolean squaring.
pub fn reaches_all(g: &WeightedDigraph) -> bool {
    let n = g.n();
    let mut r = vec![vec![false; n]; n];
    for i in 0..n {
        r[i][i] = true;
        for j in 0..n {
            if g.weight(i, j) > 0.0 {
                r[j][i] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r.iter().all(|row| row.iter().all(|&b| b))
}
