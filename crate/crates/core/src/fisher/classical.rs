use crate::error::{Error, Result};

/// Probabilities below this are treated as zero when checking for singular points.
const ZERO_PROB: f64 = 1e-14;

/// Default central-difference step `1e-6·max(1, |q0|)`.
pub fn default_step(q0: f64) -> f64 {
    1e-6 * q0.abs().max(1.0)
}

/// Single-parameter classical Fisher information `Σ_z (∂p_z/∂q)²/p_z` by central
/// differences.
pub fn classical_fisher<F>(model: F, q0: f64, step: Option<f64>) -> Result<f64>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    let h = step.unwrap_or_else(|| default_step(q0));
    if !(h > 0.0) {
        return Err(Error::Argument(format!("finite-difference step must be positive, got {h}")));
    }
    let p = model(q0)?;
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InternalConsistency(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    let up = model(q0 + h)?;
    let down = model(q0 - h)?;
    if up.len() != p.len() || down.len() != p.len() {
        return Err(Error::Shape {
            expected: p.len(),
            got: up.len().min(down.len()),
        });
    }
    let mut fisher = 0.0;
    for (z, &pz) in p.iter().enumerate() {
        let d = (up[z] - down[z]) / (2.0 * h);
        if pz <= ZERO_PROB {
            if d.abs() > 1e-8 {
                return Err(Error::SingularPoint { outcome: z });
            }
            continue;
        }
        fisher += d * d / pz;
    }
    Ok(fisher)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_model_gives_t_squared() {
        let t = 1.3;
        let model = |q: f64| Ok(vec![(q * t / 2.0).cos().powi(2), (q * t / 2.0).sin().powi(2)]);
        let f = classical_fisher(model, 0.7, None).unwrap();
        assert!((f - t * t).abs() / (t * t) < 1e-6);
    }

    #[test]
    fn constant_model_is_uninformative() {
        let f = classical_fisher(|_| Ok(vec![0.3, 0.7]), 0.1, None).unwrap();
        assert_eq!(f, 0.0);
    }

    #[test]
    fn linear_binomial_at_origin() {
        let f = classical_fisher(|q| Ok(vec![(1.0 + q) / 2.0, (1.0 - q) / 2.0]), 0.0, None).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn vanishing_outcome_with_slope_is_singular() {
        let model = |q: f64| Ok(vec![1.0 - q, q]);
        assert!(matches!(
            classical_fisher(model, 0.0, Some(1e-6)),
            Err(Error::SingularPoint { outcome: 1 })
        ));
    }
}
