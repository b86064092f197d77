//! Dense symmetric eigenvalues by cyclic Jacobi rotations.

use nalgebra::{Complex, DMatrix};
use serde::Serialize;

use crate::error::SpectralError;
use crate::graph::WeightedDigraph;

/// Relative asymmetry accepted by [`sym_eigenvalues`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of the full norm.
pub const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;
/// Slack for eigenvalue sign and disc-membership predicates.
pub const EIGEN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Second smallest eigenvalue (positional, ties included); absent for 1x1.
    pub lambda2: Option<f64>,
    pub lambda_max: f64,
    pub lambda_min: f64,
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Result<SpectralSummary, SpectralError> {
    let (rows, cols) = m.shape();
    if rows != cols || rows == 0 {
        return Err(SpectralError::NotSquare { rows, cols });
    }
    let asymmetry = inf_norm(&(m - m.transpose()));
    if asymmetry > SYMMETRY_TOL * inf_norm(m) {
        return Err(SpectralError::Asymmetric { asymmetry });
    }
    let n = rows;
    let mut a = (m + m.transpose()) * 0.5;
    let scale = a.norm();

    let off_norm = |a: &DMatrix<f64>| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= JACOBI_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }
    if !converged {
        let off = off_norm(&a);
        if off > JACOBI_TOL * scale {
            return Err(SpectralError::NoConvergence {
                sweeps: MAX_SWEEPS,
                off,
            });
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(SpectralSummary {
        lambda2: eigenvalues.get(1).copied(),
        lambda_max: eigenvalues[n - 1],
        lambda_min: eigenvalues[0],
        eigenvalues,
    })
}

/// One Jacobi rotation zeroing `a[p][q]`.
fn rotate(a: &mut DMatrix<f64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
}

/// Spectrum of the Laplacian of an undirected graph.
pub fn laplacian_spectrum(g: &WeightedDigraph) -> Result<SpectralSummary, SpectralError> {
    if !g.is_symmetric() {
        let w = g.weights();
        return Err(SpectralError::Asymmetric {
            asymmetry: (w - w.transpose()).amax(),
        });
    }
    sym_eigenvalues(&g.laplacian())
}

/// `lambda_2(L(A))` of an undirected graph; zero for a single vertex.
pub fn algebraic_connectivity(g: &WeightedDigraph) -> Result<f64, SpectralError> {
    Ok(laplacian_spectrum(g)?.lambda2.unwrap_or(0.0))
}

pub fn smallest_eigenvalue_spd(m: &DMatrix<f64>) -> Result<f64, SpectralError> {
    Ok(sym_eigenvalues(m)?.lambda_min)
}

/// Whether each value lies in the union of the Gershgorin discs of `m`.
pub fn gershgorin_contains(m: &DMatrix<f64>, values: &[Complex<f64>]) -> bool {
    let discs: Vec<(f64, f64)> = (0..m.nrows())
        .map(|i| {
            let radius: f64 = (0..m.ncols()).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
            (m[(i, i)], radius)
        })
        .collect();
    values.iter().all(|z| {
        discs
            .iter()
            .any(|&(c, r)| (z - Complex::new(c, 0.0)).norm() <= r + EIGEN_SLACK)
    })
}

pub fn gershgorin_contains_real(m: &DMatrix<f64>, values: &[f64]) -> bool {
    let z: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    gershgorin_contains(m, &z)
}
