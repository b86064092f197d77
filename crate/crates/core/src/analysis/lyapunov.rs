use crate::error::{AnalysisError, GraphError};
use crate::graph::WeightedDigraph;

fn check_len(what: &str, expected: usize, got: usize) -> Result<(), AnalysisError> {
    if expected == got {
        Ok(())
    } else {
        Err(AnalysisError::Dimension(format!(
            "{what} has length {got}, expected {expected}"
        )))
    }
}

/// `sum_i w_i / (a_i + 1) |y_i|^(a_i + 1)`.
pub fn weighted_power_sum(omega: &[f64], alpha: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    check_len("alpha", omega.len(), alpha.len())?;
    check_len("y", omega.len(), y.len())?;
    Ok(omega
        .iter()
        .zip(alpha)
        .zip(y)
        .map(|((w, a), v)| w / (a + 1.0) * v.abs().powf(a + 1.0))
        .sum())
}

/// `1/2 sum d_i^2`, or `1/2 sum w_i d_i^2` when weights are given.
pub fn v_quadratic(delta: &[f64], omega: Option<&[f64]>) -> Result<f64, AnalysisError> {
    match omega {
        None => Ok(0.5 * delta.iter().map(|d| d * d).sum::<f64>()),
        Some(w) => {
            check_len("omega", delta.len(), w.len())?;
            Ok(0.5 * delta.iter().zip(w).map(|(d, w)| w * d * d).sum::<f64>())
        }
    }
}

/// `1/4 sum_ij a_ij (x_j - x_i)^2` on an undirected graph.
pub fn v_edge_energy(g: &WeightedDigraph, x: &[f64]) -> Result<f64, AnalysisError> {
    if !g.is_symmetric() {
        return Err(GraphError::Asymmetric.into());
    }
    check_len("x", g.n(), x.len())?;
    let mut s = 0.0;
    for i in 0..g.n() {
        for j in g.neighbors(i) {
            let d = x[j] - x[i];
            s += g.weight(i, j) * d * d;
        }
    }
    Ok(0.25 * s)
}

/// `x - c 1`.
pub fn deviation(x: &[f64], c: f64) -> Vec<f64> {
    x.iter().map(|v| v - c).collect()
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DVector;

    const X0: [f64; 6] = [-5.0, -3.0, 7.0, 9.0, 4.0, 5.0];

    #[test]
    fn power_sum_examples() {
        assert_eq!(weighted_power_sum(&[1.0, 2.0], &[0.5, 0.3], &[0.0, 0.0]).unwrap(), 0.0);
        assert_relative_eq!(
            weighted_power_sum(&[1.0, 1.0], &[0.5, 0.5], &[1.0, -1.0]).unwrap(),
            4.0 / 3.0,
            epsilon = 1e-15
        );
        let base = weighted_power_sum(&[0.2, 0.7], &[0.4, 0.6], &[1.3, -0.2]).unwrap();
        let scaled = weighted_power_sum(&[0.6, 2.1], &[0.4, 0.6], &[1.3, -0.2]).unwrap();
        assert_relative_eq!(scaled, 3.0 * base, epsilon = 1e-15);
        assert!(weighted_power_sum(&[1.0], &[0.5, 0.5], &[1.0]).is_err());
    }

    #[test]
    fn quadratic_examples() {
        let delta = deviation(&X0, mean(&X0));
        assert!((v_quadratic(&delta, None).unwrap() - 78.4167).abs() < 1e-4);
        assert_eq!(v_quadratic(&[0.0; 4], None).unwrap(), 0.0);
        let ones = [1.0; 6];
        assert_eq!(
            v_quadratic(&delta, Some(&ones)).unwrap(),
            v_quadratic(&delta, None).unwrap()
        );
    }

    #[test]
    fn edge_energy_examples() {
        let g = WeightedDigraph::cycle(6, 2.0).unwrap();
        assert_relative_eq!(v_edge_energy(&g, &X0).unwrap(), 234.0, epsilon = 1e-12);
        assert_eq!(v_edge_energy(&g, &[1.5; 6]).unwrap(), 0.0);
        let x = DVector::from_row_slice(&X0);
        let quad = 0.5 * (x.transpose() * g.laplacian() * &x)[0];
        assert_relative_eq!(quad, 234.0, epsilon = 1e-12);
        let directed = WeightedDigraph::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert!(v_edge_energy(&directed, &[0.0, 1.0]).is_err());
    }
}
