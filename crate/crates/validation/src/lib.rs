//! Shared fixtures for the acceptance checks: seeded random networks and a pass/fail tally.

use netsense_core::NetworkConfig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weights uniform in `[−1, 1]`, rescaled so that `max|αᵢ| = 1`.
pub fn random_alpha<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let m = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m > 1e-3 {
            return a.iter().map(|x| x / m).collect();
        }
    }
}

/// Random weights with fields uniform in `±theta_scale` and `t` uniform in `t_range`.
pub fn random_config<R: Rng>(rng: &mut R, n: usize, theta_scale: f64, t_range: (f64, f64)) -> NetworkConfig {
    let alpha = random_alpha(rng, n);
    let theta = (0..n).map(|_| rng.random_range(-theta_scale..=theta_scale)).collect();
    let t = rng.random_range(t_range.0..=t_range.1);
    NetworkConfig::new(alpha, theta, t).expect("random config is valid")
}

#[derive(Debug, Default)]
pub struct Tally {
    lines: Vec<(String, bool)>,
}

impl Tally {
    /// Print and record one criterion.
    pub fn record(&mut self, id: &str, pass: bool, detail: impl AsRef<str>) {
        let status = if pass { "PASS" } else { "FAIL" };
        let line = format!("criterion {id:<3} {status}  {}", detail.as_ref());
        println!("{line}");
        self.lines.push((line, pass));
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|(_, p)| !p).count()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}
