use num_complex::Complex64;

use crate::error::{check_len, Error, Result};

/// Largest register the dense kernel will allocate.
pub const MAX_QUBITS: usize = 14;

const NORM_TOLERANCE: f64 = 1e-10;

/// Dense pure state over `n_qubits` qubits.
///
/// Qubit 0 is the least-significant bit of the amplitude index, and `|0⟩` is the
/// `+1` eigenstate of `σᶻ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Size(format!(
            "qubit count {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl PureState {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis_index(n_qubits, 0)
    }

    /// Computational basis state with the given amplitude index.
    pub fn basis_index(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Index {
                index,
                n_qubits,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Basis state from a bitstring, where character `i` is the value of qubit `i`.
    ///
    /// `"010"` sets qubit 1 and therefore lands on amplitude index 2.
    pub fn basis_state(n_qubits: usize, bits: &str) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        check_len(n_qubits, bits.chars().count())?;
        let mut index = 0usize;
        for (q, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => index |= 1 << q,
                other => {
                    return Err(Error::Argument(format!(
                        "bitstring character {other:?} is not 0 or 1"
                    )))
                }
            }
        }
        Self::basis_index(n_qubits, index)
    }

    /// `|+⟩^⊗n`.
    pub fn plus(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            n_qubits,
            amplitudes: vec![a; dim],
        })
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        amplitudes[0] = Complex64::new(h, 0.0);
        amplitudes[dim - 1] = Complex64::new(h, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps an amplitude vector. The vector must already be normalized.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        check_len(1 << n_qubits, amplitudes.len())?;
        let s = Self {
            n_qubits,
            amplitudes,
        };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Argument(format!(
                "amplitudes have norm {norm}, expected 1"
            )));
        }
        Ok(s)
    }

    /// Normalizes an arbitrary nonzero amplitude vector.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        check_len(1 << n_qubits, amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Argument("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_len(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`; the only comparison that ignores global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Computational-basis probabilities `|ψ_k|²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            Err(Error::Index {
                index: q,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Applies a Hadamard to every qubit, mapping x-basis amplitudes onto the
    /// computational basis.
    pub fn hadamard_all(&mut self) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for q in 0..self.n_qubits {
            let bit = 1usize << q;
            for k in 0..self.amplitudes.len() {
                if k & bit == 0 {
                    let a = self.amplitudes[k];
                    let b = self.amplitudes[k | bit];
                    self.amplitudes[k] = (a + b) * h;
                    self.amplitudes[k | bit] = (a - b) * h;
                }
            }
        }
    }

    /// Probabilities of x-basis outcomes. Outcome bit `i` set means qubit `i` read `−1`.
    pub fn x_basis_probabilities(&self) -> Vec<f64> {
        let mut rotated = self.clone();
        rotated.hadamard_all();
        rotated.probabilities()
    }
}
