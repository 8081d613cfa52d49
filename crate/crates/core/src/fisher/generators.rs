use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::sim::{Pauli, PauliObservable};

/// Largest non-diagonal observable [`seminorm`] will eigensolve (`2¹⁰` dimensions).
pub const DENSE_SEMINORM_LIMIT: usize = 10;

/// `λ_max − λ_min`.
pub fn seminorm(obs: &PauliObservable) -> Result<f64> {
    if let Some(s) = local_z_seminorm(obs) {
        return Ok(s);
    }
    if let Some(diag) = obs.diagonal() {
        let (lo, hi) = diag
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| (lo.min(d), hi.max(d)));
        return Ok(hi - lo);
    }
    if obs.n_qubits() > DENSE_SEMINORM_LIMIT {
        return Err(Error::Size(format!(
            "dense seminorm limited to {DENSE_SEMINORM_LIMIT} qubits, got {}",
            obs.n_qubits()
        )));
    }
    let eig = SymmetricEigen::new(obs.to_dense()).eigenvalues;
    Ok(eig.max() - eig.min())
}

/// Exact value for sums of single-qubit Z terms plus identity: `2 Σ_q |Σ coeffs on q|`.
fn local_z_seminorm(obs: &PauliObservable) -> Option<f64> {
    let mut per_qubit = vec![0.0; obs.n_qubits()];
    for term in obs.terms() {
        let mut z_at = None;
        for (q, p) in term.letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::Z if z_at.is_none() => z_at = Some(q),
                _ => return None,
            }
        }
        if let Some(q) = z_at {
            per_qubit[q] += term.coeff;
        }
    }
    Some(per_qubit.iter().map(|c| 2.0 * c.abs()).sum())
}

/// Generators `ĝᵢ = ∂Ĥ/∂θᵢ` with cached seminorms.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    generators: Vec<PauliObservable>,
    seminorms: Vec<f64>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<PauliObservable>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::Argument("generator set is empty".into()));
        };
        let n = first.n_qubits();
        for g in &generators {
            if g.n_qubits() != n {
                return Err(Error::Shape {
                    expected: n,
                    got: g.n_qubits(),
                });
            }
        }
        let seminorms = generators.iter().map(seminorm).collect::<Result<_>>()?;
        Ok(Self {
            generators,
            seminorms,
        })
    }

    /// `wᵢ·½σ̂ᶻᵢ` for each qubit.
    pub fn scaled_half_z(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        let gens = weights
            .iter()
            .enumerate()
            .map(|(i, w)| PauliObservable::single(n, i, Pauli::Z, 0.5 * w))
            .collect::<Result<_>>()?;
        Self::new(gens)
    }

    /// `½σ̂ᶻᵢ` on each of `n` qubits.
    pub fn half_z(n: usize) -> Result<Self> {
        Self::scaled_half_z(&vec![1.0; n])
    }

    /// Two qubits: `σ̂ᶻ` on qubit 0 and `½σ̂ᶻ` on qubit 1.
    pub fn asymmetric_pair() -> Result<Self> {
        Self::scaled_half_z(&[2.0, 1.0])
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.generators[0].n_qubits()
    }

    pub fn generators(&self) -> &[PauliObservable] {
        &self.generators
    }

    pub fn seminorms(&self) -> &[f64] {
        &self.seminorms
    }
}
