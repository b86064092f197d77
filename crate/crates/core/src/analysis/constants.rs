use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{AnalysisError, GraphError};
use crate::graph::WeightedDigraph;
use crate::protocol::{ExponentProfile, ProtocolKind};
use crate::spectral::sym_eigenvalues;

fn check_alpha(alpha: &[f64]) -> Result<f64, AnalysisError> {
    for &a in alpha {
        if !(a > 0.0 && a < 1.0) {
            return Err(AnalysisError::ExponentRange(a));
        }
    }
    alpha
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or_else(|| AnalysisError::Dimension("exponent vector is empty".into()))
}

fn check_omega(omega: &[f64], expected: usize) -> Result<(), AnalysisError> {
    if omega.len() != expected {
        return Err(AnalysisError::Dimension(format!(
            "omega has length {}, expected {expected}",
            omega.len()
        )));
    }
    if let Some(w) = omega.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(AnalysisError::Domain(format!(
            "omega entries must be positive, got {w}"
        )));
    }
    Ok(())
}

fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `[sum_i (w_i/(1+a_i))^(2a0/(1+a0))]^-1 * min_i s^(2a_i - (1+a_i) 2a0/(1+a0))`.
///
/// The exponent is evaluated as `2(a_i - a0)/(1+a0)`, which is the same
/// quantity but exactly zero when `a_i = a0`.
fn power_ratio_constant(omega: &[f64], alpha: &[f64], alpha0: f64, s: f64) -> f64 {
    let e0 = 2.0 * alpha0 / (1.0 + alpha0);
    let sum: f64 = omega.iter().zip(alpha).map(|(w, a)| (w / (1.0 + a)).powf(e0)).sum();
    let min_term = alpha
        .iter()
        .map(|a| s.powf(2.0 * (a - alpha0) / (1.0 + alpha0)))
        .fold(f64::INFINITY, f64::min);
    min_term / sum
}

/// Rate constant `K2` of the power-sum Lyapunov function for (P1) on a
/// strongly connected graph.
pub fn k2_constant(omega: &[f64], alpha: &[f64], g: &WeightedDigraph, x0: &[f64]) -> Result<f64, AnalysisError> {
    let n = g.n();
    check_omega(omega, n)?;
    if alpha.len() != n || x0.len() != n {
        return Err(AnalysisError::Dimension(format!(
            "alpha has length {}, x0 has length {}, graph has {n} agents",
            alpha.len(),
            x0.len()
        )));
    }
    let alpha0 = check_alpha(alpha)?;
    let xinf = inf_norm(x0);
    if xinf == 0.0 {
        return Err(AnalysisError::ZeroState);
    }
    Ok(power_ratio_constant(
        omega,
        alpha,
        alpha0,
        g.laplacian_inf_norm() * xinf,
    ))
}

/// Follower indices in increasing order.
pub fn followers_of(n: usize, leader: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != leader).collect()
}

fn check_leader(g: &WeightedDigraph, leader: usize) -> Result<(), AnalysisError> {
    if leader >= g.n() || g.has_neighbors(leader) || g.n() < 2 {
        return Err(GraphError::NoLeader.into());
    }
    Ok(())
}

/// `K3`: the `K2` form over the followers, with the Laplacian norm of the
/// full graph and the full initial state.
pub fn k3_constant(
    omega_bar: &[f64],
    alpha_bar: &[f64],
    g: &WeightedDigraph,
    leader: usize,
    x0: &[f64],
) -> Result<f64, AnalysisError> {
    check_leader(g, leader)?;
    let m = g.n() - 1;
    check_omega(omega_bar, m)?;
    if alpha_bar.len() != m || x0.len() != g.n() {
        return Err(AnalysisError::Dimension(format!(
            "alpha_bar has length {}, x0 has length {}, expected {m} and {}",
            alpha_bar.len(),
            x0.len(),
            g.n()
        )));
    }
    let alpha0 = check_alpha(alpha_bar)?;
    let xinf = inf_norm(x0);
    if xinf == 0.0 {
        return Err(AnalysisError::ZeroState);
    }
    Ok(power_ratio_constant(
        omega_bar,
        alpha_bar,
        alpha0,
        g.laplacian_inf_norm() * xinf,
    ))
}

/// General `K4` expression evaluated with an explicit `alpha0`.
pub(crate) fn k4_formula(
    g: &WeightedDigraph,
    alpha: &DMatrix<f64>,
    alpha0: f64,
    x0: &[f64],
) -> Result<f64, AnalysisError> {
    let hi = x0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = x0.iter().copied().fold(f64::INFINITY, f64::min);
    let range = hi - lo;
    let p = 2.0 / (1.0 + alpha0);
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    for i in 0..g.n() {
        for j in g.neighbors(i) {
            let b = g.weight(i, j).powf(p);
            sum += b;
            let e = 2.0 * (alpha[(i, j)] - alpha0) / (1.0 + alpha0);
            if range == 0.0 && e != 0.0 {
                return Err(AnalysisError::DegenerateRange);
            }
            min = min.min(b * range.powf(e));
        }
    }
    if sum == 0.0 {
        return Err(AnalysisError::NotApplicable("graph has no edges".into()));
    }
    Ok(min / sum)
}

fn check_k4_inputs(g: &WeightedDigraph, alpha: &ExponentProfile, x0: &[f64]) -> Result<f64, AnalysisError> {
    if !g.is_symmetric() {
        return Err(GraphError::Asymmetric.into());
    }
    if x0.len() != g.n() {
        return Err(AnalysisError::Dimension(format!(
            "x0 has length {}, graph has {} agents",
            x0.len(),
            g.n()
        )));
    }
    alpha.validate_for(ProtocolKind::P2, g)?;
    alpha.check_symmetric_on(g)?;
    alpha
        .max_exponent(g)
        .ok_or_else(|| AnalysisError::NotApplicable("graph has no edges".into()))
}

/// `K4` without the uniform-exponent shortcut.
pub fn k4_general(g: &WeightedDigraph, alpha: &ExponentProfile, x0: &[f64]) -> Result<f64, AnalysisError> {
    let alpha0 = check_k4_inputs(g, alpha, x0)?;
    k4_formula(g, &alpha.edge_values(g), alpha0, x0)
}

/// `K4`: exactly 1 when every edge exponent is equal, otherwise
/// [`k4_general`].
pub fn k4_constant(g: &WeightedDigraph, alpha: &ExponentProfile, x0: &[f64]) -> Result<f64, AnalysisError> {
    check_k4_inputs(g, alpha, x0)?;
    if alpha.is_uniform_on(g) {
        Ok(1.0)
    } else {
        k4_general(g, alpha, x0)
    }
}

/// `K6 = min_t K4(t) lambda_2(L(B(t)))` over per-segment values.
pub fn k6_constant(segment_values: &[f64]) -> Result<f64, AnalysisError> {
    let k6 = segment_values.iter().copied().fold(f64::INFINITY, f64::min);
    if segment_values.is_empty() {
        return Err(AnalysisError::NotApplicable("schedule has no segments".into()));
    }
    if !(k6 > 0.0) {
        return Err(AnalysisError::NotApplicable(format!(
            "some segment has K4 * lambda2(L(B)) = {k6}; a disconnected segment admits no bound"
        )));
    }
    Ok(k6)
}

/// `1/2 (diag(w) L + L^T diag(w))`.
pub fn weighted_symmetric_laplacian(g: &WeightedDigraph, omega: &[f64]) -> Result<DMatrix<f64>, AnalysisError> {
    check_omega(omega, g.n())?;
    let l = g.laplacian();
    let d = DMatrix::from_diagonal(&DVector::from_row_slice(omega));
    let m = &d * &l;
    Ok((&m + m.transpose()) * 0.5)
}

/// Follower block for a leader under (P1):
/// `1/2 (diag(w) L(A_f) + L(A_f)^T diag(w)) + diag(w) diag(b)`, returned with
/// the follower weights `w` (left null vector of `L(A_f)`).
pub fn leader_block_p1(g: &WeightedDigraph, leader: usize) -> Result<(DMatrix<f64>, DVector<f64>), AnalysisError> {
    check_leader(g, leader)?;
    let followers = followers_of(g.n(), leader);
    let sub = g.induced(&followers)?;
    let omega = sub.left_null_vector()?;
    let b: Vec<f64> = followers.iter().map(|&i| g.weight(i, leader)).collect();
    if b.iter().all(|&v| v == 0.0) {
        return Err(GraphError::NoLeader.into());
    }
    let mut block = weighted_symmetric_laplacian(&sub, omega.as_slice())?;
    for (k, bk) in b.iter().enumerate() {
        block[(k, k)] += omega[k] * bk;
    }
    Ok((block, omega))
}

/// Follower block for a leader under (P2): `L(B_f) + diag(b^(2/(1+a0)))`
/// where `B_f` is the exponent graph of the (undirected) followers.
pub fn leader_block_p2(g: &WeightedDigraph, leader: usize, alpha0: f64) -> Result<DMatrix<f64>, AnalysisError> {
    check_leader(g, leader)?;
    let followers = followers_of(g.n(), leader);
    let sub = g.induced(&followers)?;
    if !sub.is_symmetric() {
        return Err(GraphError::Asymmetric.into());
    }
    let p = 2.0 / (1.0 + alpha0);
    let mut block = sub.exponent_graph(alpha0).laplacian();
    let mut any = false;
    for (k, &i) in followers.iter().enumerate() {
        let b = g.weight(i, leader);
        if b > 0.0 {
            any = true;
            block[(k, k)] += b.powf(p);
        }
    }
    if !any {
        return Err(GraphError::NoLeader.into());
    }
    Ok(block)
}

/// Certified lower bound `lambda_2(B) / n` on `K1`, where `B` is the
/// symmetrized weighted Laplacian of a strongly connected graph.
///
/// A unit vector with entries of both signs (or a zero entry) is at squared
/// distance at least `1/n` from `span(1)`, and `B` is positive on the
/// orthogonal complement of `span(1)`.
pub fn k1_lower_bound(b: &DMatrix<f64>) -> Result<f64, AnalysisError> {
    let s = sym_eigenvalues(b)?;
    Ok(s.lambda2.unwrap_or(0.0).max(0.0) / b.nrows() as f64)
}

/// Smallest Rayleigh quotient `xi^T B xi` over random unit vectors with
/// entries of both signs. Not a lower bound on `K1`; diagnostic only.
pub fn k1_sampled_min(b: &DMatrix<f64>, samples: usize, seed: u64) -> f64 {
    use rand::RngExt;
    let n = b.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut drawn = 0;
    while drawn < samples {
        let xi = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let pos = xi.iter().any(|&v| v > 0.0);
        let neg = xi.iter().any(|&v| v < 0.0);
        if !(pos && neg) {
            continue;
        }
        drawn += 1;
        let xi = xi.normalize();
        best = best.min((xi.transpose() * b * &xi)[0]);
    }
    best
}
