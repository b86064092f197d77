use serde::{Deserialize, Serialize};

use crate::error::AnalysisError;

/// Lyapunov levels separating the regimes where the larger or the smaller
/// exponent decreases `V` faster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Above this level the larger exponent is faster.
    pub eps_star: f64,
    /// Below this level the smaller exponent is faster.
    pub eps_lower: f64,
}

fn check_order(lo: f64, hi: f64) -> Result<(), AnalysisError> {
    if 0.0 < lo && lo < hi && hi < 1.0 {
        Ok(())
    } else {
        Err(AnalysisError::ExponentOrder { low: lo, high: hi })
    }
}

/// Crossover levels of `V5` for (P1) with uniform exponents `lo < hi`.
pub fn thresholds_thm5(n: usize, lambda2: f64, lambda_n: f64, lo: f64, hi: f64) -> Result<Thresholds, AnalysisError> {
    check_order(lo, hi)?;
    if !(lambda2 > 0.0 && lambda2 <= lambda_n) {
        return Err(AnalysisError::Domain(format!(
            "need 0 < lambda2 <= lambda_n, got {lambda2} and {lambda_n}"
        )));
    }
    let n = n as f64;
    Ok(Thresholds {
        eps_star: n.powf((1.0 - lo) / (hi - lo)) / (2.0 * lambda2),
        eps_lower: 1.0 / (2.0 * lambda_n),
    })
}

/// Crossover levels of `V3` for (P2) with uniform exponents `lo < hi`; the
/// eigenvalues are those of `L(B)` at the respective exponent.
pub fn thresholds_thm6(
    n: usize,
    lambda2_lo: f64,
    lambda_n_lo: f64,
    lambda2_hi: f64,
    lambda_n_hi: f64,
    lo: f64,
    hi: f64,
) -> Result<Thresholds, AnalysisError> {
    check_order(lo, hi)?;
    for v in [lambda2_lo, lambda_n_lo, lambda2_hi, lambda_n_hi] {
        if !(v > 0.0) {
            return Err(AnalysisError::Domain(format!("eigenvalue {v} must be positive")));
        }
    }
    let n = n as f64;
    let d = hi - lo;
    let eps_star =
        0.25 * n.powf(2.0 * (1.0 - lo) / d) * lambda_n_lo.powf((1.0 + lo) / d) * lambda2_hi.powf((1.0 + hi) / -d);
    let eps_lower =
        0.25 * n.powf(2.0 * (1.0 - hi) / -d) * lambda_n_hi.powf((1.0 + hi) / -d) * lambda2_lo.powf((1.0 + lo) / d);
    Ok(Thresholds { eps_star, eps_lower })
}

/// Factor by which `L(B)` eigenvalues of a graph with all weights `w` exceed
/// those of `L(A)`: `w^(2/(1+alpha)) / w`.
pub fn uniform_weight_b_scale(w: f64, alpha: f64) -> f64 {
    w.powf(2.0 / (1.0 + alpha) - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_energy_threshold_examples() {
        let t = thresholds_thm5(6, 0.8262, 8.787, 0.3, 0.8).unwrap();
        assert!((t.eps_star - 7.4353).abs() < 1e-2);
        assert!((t.eps_lower - 0.0569).abs() < 1e-3);
        let c = thresholds_thm5(6, 2.0, 8.0, 0.3, 0.8).unwrap();
        assert!((c.eps_star - 6f64.powf(1.4) / 4.0).abs() < 1e-12);
        assert!((c.eps_star - 3.0715).abs() < 1e-3);
        assert!(thresholds_thm5(6, 2.0, 8.0, 0.8, 0.3).is_err());
        assert!(thresholds_thm5(6, 2.0, 8.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn quadratic_threshold_examples() {
        let t = thresholds_thm6(6, 1.2001, 12.763, 0.8923, 9.490, 0.3, 0.8).unwrap();
        assert!(((t.eps_star - 42674.0) / 42674.0).abs() < 2e-3, "{}", t.eps_star);
        assert!(((t.eps_lower - 2.9e-5) / 2.9e-5).abs() < 5e-2, "{}", t.eps_lower);
        assert!(thresholds_thm6(6, 1.0, 2.0, 1.0, 2.0, 0.9, 0.1).is_err());
    }

    #[test]
    fn quadratic_threshold_role_swap() {
        // eps_star as a function of (lambda_n at a, lambda_2 at b, a, b)
        let upper = |n: f64, ln_a: f64, l2_b: f64, a: f64, b: f64| {
            0.25 * n.powf(2.0 * (1.0 - a) / (b - a)) * ln_a.powf((1.0 + a) / (b - a)) * l2_b.powf((1.0 + b) / (a - b))
        };
        let (l2lo, lnlo, l2hi, lnhi, lo, hi) = (0.7, 6.0, 0.9, 7.5, 0.25, 0.65);
        let t = thresholds_thm6(5, l2lo, lnlo, l2hi, lnhi, lo, hi).unwrap();
        assert!((t.eps_star - upper(5.0, lnlo, l2hi, lo, hi)).abs() <= 1e-12 * t.eps_star);
        assert!((t.eps_lower - upper(5.0, lnhi, l2lo, hi, lo)).abs() <= 1e-12 * t.eps_lower);
    }

    #[test]
    fn b_scale() {
        assert!((uniform_weight_b_scale(2.0, 0.5) * 2.0 - 2.5198).abs() < 1e-4);
        assert!((uniform_weight_b_scale(2.0, 0.3) - 1.4525).abs() < 1e-4);
        assert!((uniform_weight_b_scale(2.0, 0.8) - 1.0801).abs() < 1e-4);
        assert_eq!(uniform_weight_b_scale(1.0, 0.4), 1.0);
    }
}
