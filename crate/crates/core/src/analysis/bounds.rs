//! Settling-time bounds from `dV/dt <= -K V^a`, `0 < a < 1`.

use crate::error::AnalysisError;

fn check_exponent(a: f64) -> Result<(), AnalysisError> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(AnalysisError::ExponentRange(a))
    }
}

fn check_inputs(v0: f64, k: f64) -> Result<(), AnalysisError> {
    if !(v0.is_finite() && v0 >= 0.0) {
        return Err(AnalysisError::Domain(format!(
            "V0 = {v0} must be finite and nonnegative"
        )));
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(AnalysisError::Domain(format!("rate constant K = {k} must be positive")));
    }
    Ok(())
}

/// `V0^(1-a) / (K (1-a))`: the latest time at which `V` can still be positive.
pub fn finite_time_bound(v0: f64, k: f64, a: f64) -> Result<f64, AnalysisError> {
    check_exponent(a)?;
    check_inputs(v0, k)?;
    Ok(v0.powf(1.0 - a) / (k * (1.0 - a)))
}

/// Solution of `dV/dt = -K V^a`, `V(0) = V0`, clamped at zero after it
/// reaches zero.
pub fn comparison_solution(v0: f64, k: f64, a: f64, t: f64) -> Result<f64, AnalysisError> {
    check_exponent(a)?;
    check_inputs(v0, k)?;
    let base = v0.powf(1.0 - a) - k * (1.0 - a) * t;
    Ok(if base <= 0.0 { 0.0 } else { base.powf(1.0 / (1.0 - a)) })
}

/// Protocol (P1) on an undirected graph with a uniform exponent, measured by
/// the edge energy `V5`.
pub fn bound_p1_undirected(v5_0: f64, lambda2: f64, alpha: f64) -> Result<f64, AnalysisError> {
    check_exponent(alpha)?;
    finite_time_bound(v5_0, (2.0 * lambda2).powf((1.0 + alpha) / 2.0), (1.0 + alpha) / 2.0)
}

/// Protocol (P2) on an undirected graph measured by `V3`; `lambda2_b` is
/// `lambda_2(L(B))` of the exponent graph, already multiplied by `K4` when
/// the exponents are not uniform.
pub fn bound_p2_undirected(v3_0: f64, lambda2_b: f64, alpha: f64) -> Result<f64, AnalysisError> {
    check_exponent(alpha)?;
    let k = 0.5 * (4.0 * lambda2_b).powf((1.0 + alpha) / 2.0);
    finite_time_bound(v3_0, k, (1.0 + alpha) / 2.0)
}

/// Switching-topology bound with `K6 = min_t K4(t) lambda_2(L(B(t)))`.
pub fn bound_switching(v3_0: f64, k6: f64, alpha0: f64) -> Result<f64, AnalysisError> {
    check_exponent(alpha0)?;
    check_inputs(v3_0, k6)?;
    Ok(2f64.powf(1.0 - alpha0) * v3_0.powf((1.0 - alpha0) / 2.0) / ((1.0 - alpha0) * k6.powf((1.0 + alpha0) / 2.0)))
}

/// Protocol (P1) on a strongly connected graph; `k1` must be supplied.
pub fn bound_strongly_connected_p1(v1_0: f64, k1: f64, k2: f64, alpha0: f64) -> Result<f64, AnalysisError> {
    check_exponent(alpha0)?;
    check_inputs(v1_0, k1 * k2)?;
    Ok((1.0 + alpha0) * v1_0.powf((1.0 - alpha0) / (1.0 + alpha0)) / (k1 * k2 * (1.0 - alpha0)))
}

/// Protocol (P1) with one leader and strongly connected followers.
pub fn bound_leader_p1(v2_0: f64, lambda1_b: f64, k3: f64, alpha0: f64) -> Result<f64, AnalysisError> {
    check_exponent(alpha0)?;
    finite_time_bound(v2_0, lambda1_b * k3, 2.0 * alpha0 / (1.0 + alpha0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const V3_0: f64 = 78.4167;

    #[test]
    fn settling_bound_examples() {
        assert_eq!(finite_time_bound(0.0, 1.0, 0.5).unwrap(), 0.0);
        let t = finite_time_bound(0.0025, 2f64.powf(1.5), 0.75).unwrap();
        assert!((t - 0.3162).abs() < 1e-4);
        assert!(finite_time_bound(1.0, 2.0, 0.5).unwrap() < finite_time_bound(1.0, 1.0, 0.5).unwrap());
        assert!(finite_time_bound(1.0, 1.0, 1.0).is_err());
        assert!(finite_time_bound(1.0, 1.0, 0.0).is_err());
        assert!(finite_time_bound(-1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn comparison_examples() {
        let k = 2f64.powf(1.5);
        assert_relative_eq!(
            comparison_solution(0.0025, k, 0.75, 0.0).unwrap(),
            0.0025,
            epsilon = 1e-15
        );
        assert_eq!(comparison_solution(0.0025, k, 0.75, 0.32).unwrap(), 0.0);
        let v = comparison_solution(0.0025, k, 0.75, 0.1).unwrap();
        let expected = (0.0025f64.powf(0.25) - k / 4.0 * 0.1).powi(4);
        assert_relative_eq!(v, expected, epsilon = 1e-15);
        assert!((v - 5.465e-4).abs() < 1e-6);
    }

    #[test]
    fn p1_bound_examples() {
        assert!((bound_p1_undirected(338.0, 2.0, 0.5).unwrap() - 6.0638).abs() < 1e-3);
        assert!((bound_p1_undirected(338.0, 0.5359, 0.5).unwrap() - 16.2819).abs() < 1e-2);
        assert_eq!(bound_p1_undirected(0.0, 2.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn p2_bound_examples() {
        assert!((bound_p2_undirected(V3_0, 2.5198, 0.5).unwrap() - 4.2085).abs() < 2e-3);
        assert!((bound_p2_undirected(V3_0, 0.6752, 0.5).unwrap() - 11.2999).abs() < 5e-3);
        assert_eq!(bound_p2_undirected(0.0, 2.5198, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn switching_bound_examples() {
        assert!((bound_switching(V3_0, 0.6752, 0.5).unwrap() - 11.2999).abs() < 5e-3);
        assert_eq!(bound_switching(0.0, 0.6752, 0.5).unwrap(), 0.0);
        for (v, k, a) in [(3.0, 0.2, 0.3), (78.4, 2.5, 0.5), (0.01, 7.0, 0.9)] {
            assert_relative_eq!(
                bound_switching(v, k, a).unwrap(),
                bound_p2_undirected(v, k, a).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn strongly_connected_examples() {
        assert_eq!(bound_strongly_connected_p1(0.0, 1.0, 1.0, 0.5).unwrap(), 0.0);
        assert_relative_eq!(
            bound_strongly_connected_p1(1.0, 1.0, 1.0, 0.5).unwrap(),
            3.0,
            epsilon = 1e-12
        );
        let (v, k1, k2, a) = (2.7, 0.3, 1.9, 0.35);
        assert_relative_eq!(
            bound_strongly_connected_p1(v, k1, k2, a).unwrap(),
            finite_time_bound(v, k1 * k2, 2.0 * a / (1.0 + a)).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn leader_examples() {
        assert_eq!(bound_leader_p1(0.0, 1.0, 1.0, 0.5).unwrap(), 0.0);
        let k3 = 1.5f64.powf(2.0 / 3.0);
        let t = bound_leader_p1(1.0, 1.0, k3, 0.5).unwrap();
        assert_relative_eq!(t, 3.0 / k3, epsilon = 1e-12);
        assert!((t - 2.289).abs() < 1e-3);
        assert!(bound_leader_p1(1.0, 2.0, k3, 0.5).unwrap() < t);
    }
}
