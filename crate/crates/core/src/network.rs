use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::MAX_QUBITS;

/// One sensing scenario: weights α, true fields θ and interrogation time t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    alpha: Vec<f64>,
    theta: Vec<f64>,
    t: f64,
}

pub const WEIGHT_TOL: f64 = 1e-12;

impl NetworkConfig {
    pub fn new(alpha: Vec<f64>, theta: Vec<f64>, t: f64) -> Result<Self> {
        let cfg = Self { alpha, theta, t };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.alpha.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::Size(format!("network size {n} outside 1..={MAX_QUBITS}")));
        }
        if self.theta.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: self.theta.len(),
            });
        }
        if self.alpha.iter().chain(&self.theta).any(|x| !x.is_finite()) {
            return Err(Error::Argument("alpha and theta must be finite".into()));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(Error::Argument(format!("t must be positive, got {}", self.t)));
        }
        let max = self.alpha.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if (max - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::Argument(format!("max|alpha| must equal 1 (got {max})")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `q = α·θ`.
    pub fn q(&self) -> f64 {
        dot(&self.alpha, &self.theta)
    }

    pub fn alpha_norm_sq(&self) -> f64 {
        dot(&self.alpha, &self.alpha)
    }

    pub fn with_theta(&self, theta: Vec<f64>) -> Result<Self> {
        Self::new(self.alpha.clone(), theta, self.t)
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        Self::new(self.alpha.clone(), self.theta.clone(), t)
    }

    /// θ shifted along α so that `q` grows by `dq`.
    pub fn shifted_q(&self, dq: f64) -> Result<Self> {
        let s = dq / self.alpha_norm_sq();
        let theta = self
            .theta
            .iter()
            .zip(&self.alpha)
            .map(|(th, a)| th + s * a)
            .collect();
        self.with_theta(theta)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
