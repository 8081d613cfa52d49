use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::GeneratorSet;
use crate::error::{Error, Result};
use crate::sim::PureState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FisherKind {
    Quantum,
    Classical,
}

/// Symmetric PSD Fisher matrix tagged with its interrogation time.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix {
    pub entries: DMatrix<f64>,
    pub t: f64,
    pub kind: FisherKind,
}

impl FisherMatrix {
    pub fn new(entries: DMatrix<f64>, t: f64, kind: FisherKind) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Shape {
                expected: entries.nrows(),
                got: entries.ncols(),
            });
        }
        Ok(Self { entries, t, kind })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.entries - self.entries.transpose()).amax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone()).eigenvalues.min()
    }
}

/// `(F_Q)ᵢⱼ = 4t²(Re⟨ĝᵢĝⱼ⟩ − ⟨ĝᵢ⟩⟨ĝⱼ⟩)` on `state`.
pub fn qfi_matrix(state: &PureState, gens: &GeneratorSet, t: f64) -> Result<FisherMatrix> {
    if gens.n_qubits() != state.n_qubits() {
        return Err(Error::Shape {
            expected: state.n_qubits(),
            got: gens.n_qubits(),
        });
    }
    let psi = DVector::from_column_slice(state.amplitudes());
    let images: Vec<DVector<Complex64>> = gens
        .generators()
        .iter()
        .map(|g| g.apply(state).map(DVector::from_vec))
        .collect::<Result<_>>()?;
    let means: Vec<f64> = images.iter().map(|v| psi.dotc(v).re).collect();
    let k = gens.len();
    let mut f = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let corr = images[i].dotc(&images[j]).re;
            let v = 4.0 * t * t * (corr - means[i] * means[j]);
            f[(i, j)] = v;
            f[(j, i)] = v;
        }
    }
    FisherMatrix::new(f, t, FisherKind::Quantum)
}
