use log::warn;
use serde::Serialize;

use super::{crb_linear, FisherMatrix, GeneratorSet};
use crate::error::{Error, Result};
use crate::network::NetworkConfig;
use crate::reparam::{known_structure_bound, naive_bound, orthogonal_completion};

/// `max_b α_b²/(t²‖ĝ_b‖_s²)` over generators with nonzero seminorm.
pub fn network_heisenberg_bound(alpha: &[f64], gens: &GeneratorSet, t: f64) -> Result<f64> {
    if alpha.len() != gens.len() {
        return Err(Error::Shape {
            expected: gens.len(),
            got: alpha.len(),
        });
    }
    let mut best: Option<f64> = None;
    for (b, (a, s)) in alpha.iter().zip(gens.seminorms()).enumerate() {
        if *s <= 0.0 {
            warn!("generator {b} has zero seminorm and is excluded from the network bound");
            continue;
        }
        let v = a * a / (t * t * s * s);
        best = Some(best.map_or(v, |m: f64| m.max(v)));
    }
    best.ok_or(Error::NoInformation)
}

/// Upper edge of the saturation window, as a multiple of the bound.
pub const SATURATION_FACTOR: f64 = 1.3;

/// `bound ≤ value ≤ 1.3·bound`.
pub fn saturates(bound: f64, value: f64) -> bool {
    value >= bound && value <= SATURATION_FACTOR * bound
}

/// Single-experiment variance bounds side by side (multiply by `1/M` for M shots).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    /// `‖α‖²/t²`.
    pub sql: f64,
    pub network_heisenberg: f64,
    /// `αᵀF̃_Q⁻¹α`; infinite when α overlaps the kernel.
    pub qcrb_linear: f64,
    /// Seminorm bound from the orthogonal completion, `β = α/‖α‖²`.
    pub naive_dual: f64,
    pub known_structure: f64,
    /// `M·Var(Q̂)` when an experiment has been run.
    pub empirical: Option<f64>,
}

impl BoundsReport {
    pub fn new(config: &NetworkConfig, qfi: &FisherMatrix, gens: &GeneratorSet) -> Result<Self> {
        let alpha = config.alpha();
        let t = config.t();
        let qcrb_linear = match crb_linear(alpha, qfi) {
            Ok(v) => v,
            Err(Error::UnboundedVariance { .. }) | Err(Error::NoInformation) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        Ok(Self {
            sql: config.alpha_norm_sq() / (t * t),
            network_heisenberg: network_heisenberg_bound(alpha, gens, t)?,
            qcrb_linear,
            naive_dual: naive_bound(&orthogonal_completion(alpha)?.beta(), t)?,
            known_structure: known_structure_bound(alpha, t)?,
            empirical: None,
        })
    }

    pub fn with_empirical(mut self, value: f64) -> Self {
        self.empirical = Some(value);
        self
    }

    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("sql", self.sql),
            ("network_heisenberg", self.network_heisenberg),
            ("qcrb_linear", self.qcrb_linear),
            ("naive_dual", self.naive_dual),
            ("known_structure", self.known_structure),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::qfi_matrix;
    use crate::protocols::run_partial_time_ghz;

    #[test]
    fn half_z_generators_give_inverse_t_squared() {
        let gens = GeneratorSet::half_z(3).unwrap();
        assert_eq!(network_heisenberg_bound(&[1.0, -0.2, 0.5], &gens, 1.0).unwrap(), 1.0);
        assert_eq!(network_heisenberg_bound(&[1.0, 0.2, 0.5], &gens, 2.0).unwrap(), 0.25);
    }

    #[test]
    fn asymmetric_pair_bound() {
        let gens = GeneratorSet::asymmetric_pair().unwrap();
        for a2 in [0.1, 0.5, 0.8] {
            let b = network_heisenberg_bound(&[1.0, a2], &gens, 1.0).unwrap();
            assert!((b - f64::max(0.25, a2 * a2)).abs() < 1e-15);
        }
    }

    #[test]
    fn average_of_all_fields() {
        let n = 4;
        let gens = GeneratorSet::half_z(n).unwrap();
        let t = 1.5;
        let sum_bound = network_heisenberg_bound(&vec![1.0; n], &gens, t).unwrap();
        let mean_bound = sum_bound / (n * n) as f64;
        assert!((mean_bound - 1.0 / ((n * n) as f64 * t * t)).abs() < 1e-15);
    }

    #[test]
    fn ghz_report_orders_bounds() {
        let cfg = NetworkConfig::new(vec![1.0, 0.5, -0.5], vec![0.1, 0.2, 0.3], 1.0).unwrap();
        let state = run_partial_time_ghz(&cfg).unwrap();
        let eff = GeneratorSet::scaled_half_z(cfg.alpha()).unwrap();
        let qfi = qfi_matrix(&state, &eff, cfg.t()).unwrap();
        let r = BoundsReport::new(&cfg, &qfi, &GeneratorSet::half_z(3).unwrap()).unwrap();
        assert!((r.qcrb_linear - 1.0).abs() < 1e-10);
        assert!(r.qcrb_linear >= r.network_heisenberg - 1e-10);
        assert!(r.sql >= r.network_heisenberg);
        assert!(r.naive_dual <= r.network_heisenberg + 1e-12);
        assert!((r.naive_dual - r.known_structure).abs() < 1e-12);
    }

    #[test]
    fn saturation_window() {
        assert!(saturates(1.0, 1.0));
        assert!(saturates(1.0, 1.29));
        assert!(!saturates(1.0, 0.99));
        assert!(!saturates(1.0, 1.31));
    }
}
