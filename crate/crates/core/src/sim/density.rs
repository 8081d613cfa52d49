use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::PureState;
use crate::error::{Error, Result};

/// Reduced (or full) density matrix over a set of kept qubits.
///
/// Kept qubit `keep[j]` becomes bit `j` of the reduced index, so the LSB-first
/// convention carries over.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            n_qubits: state.n_qubits(),
            entries: &v * v.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let sym = nalgebra::SymmetricEigen::new(self.entries.clone());
        sym.eigenvalues.iter().copied().collect()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.entries.shape() != other.entries.shape() {
            return Err(Error::Shape {
                expected: self.entries.nrows(),
                got: other.entries.nrows(),
            });
        }
        Ok((&self.entries - &other.entries)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max))
    }
}

impl PureState {
    /// Traces out every qubit not in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Argument("partial trace needs at least one kept qubit".into()));
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::Argument("kept qubits must be distinct".into()));
        }
        for &q in &kept {
            self.check_qubit(q)?;
        }
        let n = self.n_qubits();
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        let spread = |bits: usize, qubits: &[usize]| -> usize {
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| bits >> j & 1 == 1)
                .map(|(_, &q)| 1usize << q)
                .sum()
        };
        let kept_dim = 1usize << kept.len();
        let env_dim = 1usize << traced.len();
        let kept_idx: Vec<usize> = (0..kept_dim).map(|a| spread(a, &kept)).collect();
        let env_idx: Vec<usize> = (0..env_dim).map(|e| spread(e, &traced)).collect();
        let amps = self.amplitudes();
        let mut rho = DMatrix::from_element(kept_dim, kept_dim, Complex64::new(0.0, 0.0));
        for a in 0..kept_dim {
            for b in a..kept_dim {
                let sum: Complex64 = env_idx
                    .iter()
                    .map(|&e| amps[kept_idx[a] | e] * amps[kept_idx[b] | e].conj())
                    .sum();
                rho[(a, b)] = sum;
                rho[(b, a)] = sum.conj();
            }
        }
        Ok(DensityMatrix {
            n_qubits: kept.len(),
            entries: rho,
        })
    }
}
