use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::{WeightedDigraph, STRUCTURAL_ZERO};
use crate::error::GraphError;

/// Relative tolerance of the detail-balance consistency sweep.
pub const DETAIL_BALANCE_TOL: f64 = 1e-10;

const PERRON_TOL: f64 = 1e-14;
const PERRON_MAX_ITER: usize = 10_000;

impl WeightedDigraph {
    /// Positive `w` with `w_i a_ij = w_j a_ji` for all pairs, normalized to
    /// sum 1, or `None` when no such scalars exist.
    ///
    /// Ratios are propagated breadth-first over the symmetrized support, then
    /// every pair is re-checked.
    pub fn is_detail_balanced(&self) -> Option<DVector<f64>> {
        let n = self.n();
        let present = |i: usize, j: usize| self.weight(i, j) > STRUCTURAL_ZERO;
        for i in 0..n {
            for j in 0..n {
                if present(i, j) != present(j, i) {
                    return None;
                }
            }
        }

        let mut w = vec![0.0; n];
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            w[root] = 1.0;
            let mut queue = VecDeque::from([root]);
            while let Some(i) = queue.pop_front() {
                for j in 0..n {
                    if !seen[j] && present(i, j) {
                        w[j] = w[i] * self.weight(i, j) / self.weight(j, i);
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }

        for i in 0..n {
            for j in (i + 1)..n {
                if !present(i, j) {
                    continue;
                }
                let lhs = w[i] * self.weight(i, j);
                let rhs = w[j] * self.weight(j, i);
                if (lhs - rhs).abs() > DETAIL_BALANCE_TOL * lhs.abs().max(rhs.abs()) {
                    return None;
                }
            }
        }
        let total: f64 = w.iter().sum();
        Some(DVector::from_iterator(n, w.into_iter().map(|v| v / total)))
    }

    /// Positive left null vector of the Laplacian, normalized to sum 1.
    ///
    /// With `d = max_i l_ii + 1`, the matrix `P = I - L/d` is row-stochastic,
    /// nonnegative, irreducible and has a positive diagonal, so its Perron
    /// vector is the unique stationary row vector `w^T P = w^T`, which is
    /// exactly `w^T L = 0`. The power iteration squares `P` between steps so
    /// that slowly mixing graphs still converge within the iteration cap.
    pub fn left_null_vector(&self) -> Result<DVector<f64>, GraphError> {
        if !self.is_strongly_connected() {
            return Err(GraphError::NotStronglyConnected);
        }
        let n = self.n();
        if n == 1 {
            return Ok(DVector::from_element(1, 1.0));
        }
        let l = self.laplacian();
        let d = (0..n).map(|i| l[(i, i)]).fold(0.0, f64::max) + 1.0;
        let mut p: DMatrix<f64> = DMatrix::identity(n, n) - &l / d;
        let mut w = DVector::from_element(n, 1.0 / n as f64);

        for _ in 0..PERRON_MAX_ITER {
            let mut next = p.tr_mul(&w);
            let s = next.sum();
            next /= s;
            let change = (&next - &w).amax() / next.amax();
            w = next;
            if change <= PERRON_TOL {
                break;
            }
            p = &p * &p;
            // keep rows stochastic against round-off drift
            for mut row in p.row_iter_mut() {
                let s = row.sum();
                row /= s;
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn asymmetric_pair() -> WeightedDigraph {
        WeightedDigraph::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap()
    }

    #[test]
    fn symmetric_graph_is_uniformly_balanced() {
        let g = WeightedDigraph::cycle(5, 3.0).unwrap();
        let w = g.is_detail_balanced().unwrap();
        for v in w.iter() {
            assert_relative_eq!(*v, 0.2, epsilon = 1e-15);
        }
    }

    #[test]
    fn pair_balance_ratio() {
        let w = asymmetric_pair().is_detail_balanced().unwrap();
        assert_relative_eq!(w[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(w[1], 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn one_way_cycle_is_not_balanced() {
        let g = WeightedDigraph::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]]).unwrap();
        assert!(g.is_detail_balanced().is_none());
    }

    #[test]
    fn inconsistent_cycle_ratios_are_rejected() {
        // bidirectional triangle whose ratio product around the loop is 2
        let g = WeightedDigraph::from_rows(&[vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 2.0], vec![1.0, 1.0, 0.0]]).unwrap();
        assert!(g.is_detail_balanced().is_none());
    }

    #[test]
    fn left_null_vector_of_pair() {
        let w = asymmetric_pair().left_null_vector().unwrap();
        assert_relative_eq!(w[0], 2.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(w[1], 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn left_null_vector_of_symmetric_and_vertex_transitive_graphs() {
        let sym = WeightedDigraph::path(4, 1.5).unwrap();
        let one_way = WeightedDigraph::from_rows(&[
            vec![0.0, 0.0, 0.0, 2.0],
            vec![2.0, 0.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0, 0.0],
            vec![0.0, 0.0, 2.0, 0.0],
        ])
        .unwrap();
        for g in [sym, one_way] {
            let w = g.left_null_vector().unwrap();
            for v in w.iter() {
                assert_relative_eq!(*v, 0.25, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn left_null_vector_requires_strong_connectivity() {
        let mut w = DMatrix::zeros(3, 3);
        w[(1, 0)] = 1.0;
        w[(2, 1)] = 1.0;
        let g = WeightedDigraph::new(w).unwrap();
        assert_eq!(g.left_null_vector(), Err(GraphError::NotStronglyConnected));
    }

    #[test]
    fn slowly_mixing_directed_ring_converges() {
        // long one-way ring with one weak link: tiny spectral gap
        let n = 8;
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            w[((i + 1) % n, i)] = if i == 0 { 1e-3 } else { 5.0 };
        }
        let g = WeightedDigraph::new(w).unwrap();
        let omega = g.left_null_vector().unwrap();
        let residual = (omega.transpose() * g.laplacian()).amax();
        assert!(residual <= 1e-10, "residual {residual:e}");
        assert!(omega.iter().all(|&v| v > 0.0));
    }
}
