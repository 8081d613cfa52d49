//! Real linear combinations of Pauli strings.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{check_qubit_count, PureState};
use crate::error::{check_len, Error, Result};

const IMAG_RESIDUE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// One weighted Pauli string; `letters[q]` acts on qubit `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: f64,
    pub letters: Vec<Pauli>,
}

impl PauliTerm {
    /// Bit masks of the string: qubits carrying X or Y flip, qubits carrying Z or Y pick
    /// up a sign, and the number of Y letters fixes the overall power of `i`.
    fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut ys = 0u32;
        for (q, p) in self.letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Z => sign |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    ys += 1;
                }
            }
        }
        (flip, sign, ys)
    }
}

/// Hermitian observable `Σ cₖ Pₖ` over `n_qubits`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliObservable {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliObservable {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        for t in &terms {
            check_len(n_qubits, t.letters.len())?;
            if !t.coeff.is_finite() {
                return Err(Error::Argument(format!(
                    "observable coefficient {} is not finite",
                    t.coeff
                )));
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Vec::new())
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(
            n_qubits,
            vec![PauliTerm {
                coeff: 1.0,
                letters: vec![Pauli::I; n_qubits],
            }],
        )
    }

    /// `coeff · P` acting on `qubit` alone.
    pub fn single(n_qubits: usize, qubit: usize, pauli: Pauli, coeff: f64) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::Index {
                index: qubit,
                n_qubits,
            });
        }
        let mut letters = vec![Pauli::I; n_qubits];
        letters[qubit] = pauli;
        Self::new(n_qubits, vec![PauliTerm { coeff, letters }])
    }

    /// `Σᵢ coeffs[i] · Pᵢ` with one single-qubit term per qubit.
    pub fn local_sum(n_qubits: usize, pauli: Pauli, coeffs: &[f64]) -> Result<Self> {
        check_len(n_qubits, coeffs.len())?;
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(q, &coeff)| {
                let mut letters = vec![Pauli::I; n_qubits];
                letters[q] = pauli;
                PauliTerm { coeff, letters }
            })
            .collect();
        Self::new(n_qubits, terms)
    }

    /// Parity `⊗ σ̂ˣᵢ`.
    pub fn parity_x(n_qubits: usize) -> Result<Self> {
        Self::new(
            n_qubits,
            vec![PauliTerm {
                coeff: 1.0,
                letters: vec![Pauli::X; n_qubits],
            }],
        )
    }

    /// Collective spin `Ĵ = ½ Σ σ̂ᵢ` along one axis.
    pub fn collective(n_qubits: usize, pauli: Pauli) -> Result<Self> {
        Self::local_sum(n_qubits, pauli, &vec![0.5; n_qubits])
    }

    pub fn collective_x(n_qubits: usize) -> Result<Self> {
        Self::collective(n_qubits, Pauli::X)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| PauliTerm {
                coeff: t.coeff * factor,
                letters: t.letters.clone(),
            })
            .collect();
        Self {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    pub fn plus(&self, other: &PauliObservable) -> Result<Self> {
        check_len(self.n_qubits, other.n_qubits)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            n_qubits: self.n_qubits,
            terms,
        })
    }

    /// True when every term is built from `I` and `Z` only.
    pub fn is_z_diagonal(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.letters.iter().all(|p| matches!(p, Pauli::I | Pauli::Z)))
    }

    /// `Ô|ψ⟩` as a raw (unnormalized) amplitude vector.
    pub fn apply(&self, state: &PureState) -> Result<Vec<Complex64>> {
        check_len(self.n_qubits, state.n_qubits())?;
        let amps = state.amplitudes();
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for term in &self.terms {
            let (flip, sign, ys) = term.masks();
            let base = Complex64::new(term.coeff, 0.0) * Complex64::i().powu(ys);
            for (k, a) in amps.iter().enumerate() {
                let mut c = base;
                if (k & sign).count_ones() % 2 == 1 {
                    c = -c;
                }
                out[k ^ flip] += c * a;
            }
        }
        Ok(out)
    }

    /// `⟨ψ|Ô|ψ⟩`; the imaginary part must vanish to 1e-10 and is discarded.
    pub fn expectation(&self, state: &PureState) -> Result<f64> {
        let applied = self.apply(state)?;
        let value: Complex64 = state
            .amplitudes()
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum();
        if value.im.abs() > IMAG_RESIDUE * (1.0 + value.re.abs()) {
            return Err(Error::InternalConsistency(format!(
                "expectation has imaginary residue {}",
                value.im
            )));
        }
        Ok(value.re)
    }

    /// `⟨Ô²⟩ − ⟨Ô⟩²`.
    pub fn variance(&self, state: &PureState) -> Result<f64> {
        let applied = self.apply(state)?;
        let mean = self.expectation(state)?;
        let second: f64 = applied.iter().map(|a| a.norm_sqr()).sum();
        Ok((second - mean * mean).max(0.0))
    }

    /// Diagonal of a Z-diagonal observable in the computational basis.
    pub fn diagonal(&self) -> Option<Vec<f64>> {
        if !self.is_z_diagonal() {
            return None;
        }
        let dim = 1usize << self.n_qubits;
        let mut diag = vec![0.0; dim];
        for term in &self.terms {
            let (_, sign, _) = term.masks();
            for (k, d) in diag.iter_mut().enumerate() {
                if (k & sign).count_ones() % 2 == 1 {
                    *d -= term.coeff;
                } else {
                    *d += term.coeff;
                }
            }
        }
        Some(diag)
    }

    /// Dense `2ⁿ × 2ⁿ` matrix in the LSB-first basis ordering.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for term in &self.terms {
            let (flip, sign, ys) = term.masks();
            let base = Complex64::new(term.coeff, 0.0) * Complex64::i().powu(ys);
            for k in 0..dim {
                let mut c = base;
                if (k & sign).count_ones() % 2 == 1 {
                    c = -c;
                }
                m[(k ^ flip, k)] += c;
            }
        }
        m
    }
}
