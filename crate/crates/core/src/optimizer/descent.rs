use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DescentSettings {
    /// Trial step at the start of every line search.
    pub lr: f64,
    /// Step shrink factor on a rejected trial.
    pub backtrack: f64,
    /// Sufficient-decrease constant of the Armijo test.
    pub armijo: f64,
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Stop once the objective improves by less than this over `stall_window` iterations.
    pub stall_tol: f64,
    pub stall_window: usize,
    /// Relative central-difference step.
    pub fd_step: f64,
}

impl Default for DescentSettings {
    fn default() -> Self {
        Self {
            lr: 1.0,
            backtrack: 0.5,
            armijo: 1e-4,
            max_iters: 5000,
            grad_tol: 1e-8,
            stall_tol: 1e-12,
            stall_window: 50,
            fd_step: 1e-5,
        }
    }
}

impl DescentSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.lr, self.armijo, self.grad_tol, self.stall_tol, self.fd_step];
        if positive.iter().any(|v| !(*v > 0.0)) || !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::Argument(
                "descent settings must be positive with backtrack in (0, 1)".into(),
            ));
        }
        if self.max_iters == 0 || self.stall_window == 0 {
            return Err(Error::Argument("max_iters and stall_window must be at least 1".into()));
        }
        Ok(())
    }
}

/// Central differences with step `rel·max(1, |xᵢ|)`; one-sided where a neighbour is
/// infinite, zero where both are.
pub fn gradient_fd<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], rel: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    gradient_fd_by(f(x), x, rel, |i, v| {
        probe[i] = v;
        let out = f(&probe);
        probe[i] = x[i];
        out
    })
}

/// [`gradient_fd`] where `probe(i, v)` evaluates the objective at `x` with `xᵢ = v` and
/// `f0` is the value at `x`.
pub fn gradient_fd_by<P: FnMut(usize, f64) -> f64>(f0: f64, x: &[f64], rel: f64, mut probe: P) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let h = rel * x[i].abs().max(1.0);
            let up = probe(i, x[i] + h);
            let down = probe(i, x[i] - h);
            match (up.is_finite(), down.is_finite()) {
                (true, true) => (up - down) / (2.0 * h),
                (true, false) => (up - f0) / h,
                (false, true) => (f0 - down) / h,
                (false, false) => 0.0,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

/// Gradient descent with Armijo backtracking from a fixed base step.
pub fn descend<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], settings: &DescentSettings) -> Result<DescentOutcome> {
    descend_with(&f, |x| gradient_fd(&f, x, settings.fd_step), x0, settings)
}

/// [`descend`] with a caller-supplied gradient.
pub fn descend_with<F, G>(f: F, gradient: G, x0: &[f64], settings: &DescentSettings) -> Result<DescentOutcome>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    settings.validate()?;
    let mut x = x0.to_vec();
    let mut value = f(&x);
    if !value.is_finite() {
        return Err(Error::Argument("objective is not finite at the starting point".into()));
    }
    let mut history = vec![value];
    let mut grad_norm = f64::INFINITY;
    let mut iterations = 0;
    while iterations < settings.max_iters {
        let g = gradient(&x);
        grad_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if grad_norm < settings.grad_tol {
            break;
        }
        let mut step = settings.lr;
        let mut accepted = None;
        while step * grad_norm > 1e-15 * (1.0 + norm(&x)) {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - step * gi).collect();
            let v = f(&trial);
            if v <= value - settings.armijo * step * grad_norm * grad_norm {
                accepted = Some((trial, v));
                break;
            }
            step *= settings.backtrack;
        }
        let Some((trial, v)) = accepted else {
            break;
        };
        x = trial;
        value = v;
        iterations += 1;
        history.push(value);
        if history.len() > settings.stall_window {
            let old = history[history.len() - 1 - settings.stall_window];
            if old - value < settings.stall_tol {
                break;
            }
        }
    }
    Ok(DescentOutcome {
        x,
        value,
        iterations,
        grad_norm,
    })
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
