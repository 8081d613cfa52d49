use std::sync::OnceLock;

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::Pauli;

/// Number of traceless Hermitian Pauli directions on two qubits.
pub const N_DIRECTIONS: usize = 15;

/// `P_a ⊗ P_b` for every pair except `I ⊗ I`, with `P_a` acting on qubit 0.
pub fn pauli_directions() -> &'static [Matrix4<Complex64>; N_DIRECTIONS] {
    static DIRS: OnceLock<[Matrix4<Complex64>; N_DIRECTIONS]> = OnceLock::new();
    DIRS.get_or_init(|| {
        let mut out = [Matrix4::zeros(); N_DIRECTIONS];
        let mut k = 0;
        for b in Pauli::ALL {
            for a in Pauli::ALL {
                if a == Pauli::I && b == Pauli::I {
                    continue;
                }
                out[k] = kron2(b.matrix(), a.matrix());
                k += 1;
            }
        }
        out
    })
}

/// Each direction has one nonzero per row: entry `(r, r ^ flip)` equals `values[r]`.
pub(crate) fn sparse_directions() -> &'static [(usize, [Complex64; 4]); N_DIRECTIONS] {
    static SPARSE: OnceLock<[(usize, [Complex64; 4]); N_DIRECTIONS]> = OnceLock::new();
    SPARSE.get_or_init(|| {
        pauli_directions().map(|m| {
            let flip = (0..4).find(|&c| m[(0, c)].norm() > 0.0).expect("Pauli row has an entry");
            (flip, std::array::from_fn(|r| m[(r, r ^ flip)]))
        })
    })
}

/// `Σ_a c_a P_a + base`.
pub(crate) fn control_hamiltonian(coefficients: &[f64], base: Matrix4<Complex64>) -> Matrix4<Complex64> {
    let mut h = base;
    for (c, (flip, values)) in coefficients.iter().zip(sparse_directions()) {
        for r in 0..4 {
            h[(r, r ^ flip)] += values[r] * c;
        }
    }
    h
}

/// Labels matching [`pauli_directions`], qubit 0 first.
pub fn direction_labels() -> Vec<String> {
    let name = |p: Pauli| match p {
        Pauli::I => 'I',
        Pauli::X => 'X',
        Pauli::Y => 'Y',
        Pauli::Z => 'Z',
    };
    let mut out = Vec::with_capacity(N_DIRECTIONS);
    for b in Pauli::ALL {
        for a in Pauli::ALL {
            if a == Pauli::I && b == Pauli::I {
                continue;
            }
            out.push(format!("{}{}", name(a), name(b)));
        }
    }
    out
}

/// `hi ⊗ lo` with `lo` on the least-significant bit.
fn kron2(hi: [[Complex64; 2]; 2], lo: [[Complex64; 2]; 2]) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, c| hi[r >> 1][c >> 1] * lo[r & 1][c & 1])
}

/// Piecewise-constant control Hamiltonian over `[0, t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlAnsatz {
    durations: Vec<f64>,
    /// Segment-major: coefficient `a` of segment `k` sits at `15k + a`.
    coefficients: Vec<f64>,
}

impl ControlAnsatz {
    pub fn new(durations: Vec<f64>, coefficients: Vec<f64>) -> Result<Self> {
        if durations.is_empty() {
            return Err(Error::Argument("control ansatz needs at least one segment".into()));
        }
        if durations.iter().any(|d| !(*d >= 0.0) || !d.is_finite()) {
            return Err(Error::Argument("segment durations must be finite and >= 0".into()));
        }
        if coefficients.len() != N_DIRECTIONS * durations.len() {
            return Err(Error::Shape {
                expected: N_DIRECTIONS * durations.len(),
                got: coefficients.len(),
            });
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::Argument("control coefficients must be finite".into()));
        }
        Ok(Self {
            durations,
            coefficients,
        })
    }

    /// `k` equal segments over `[0, t]`.
    pub fn uniform(k: usize, t: f64, coefficients: Vec<f64>) -> Result<Self> {
        Self::new(vec![t / k as f64; k], coefficients)
    }

    /// A short first segment of `prep_fraction·t` followed by `k − 1` equal segments; a
    /// single segment spans `[0, t]`.
    pub fn prepared_durations(k: usize, t: f64, prep_fraction: f64) -> Result<Vec<f64>> {
        if k == 0 {
            return Err(Error::Argument("control ansatz needs at least one segment".into()));
        }
        if !(prep_fraction > 0.0 && prep_fraction < 1.0) {
            return Err(Error::Argument(format!("prep_fraction must lie in (0, 1), got {prep_fraction}")));
        }
        if k == 1 {
            return Ok(vec![t]);
        }
        let rest = t * (1.0 - prep_fraction) / (k - 1) as f64;
        let mut d = vec![rest; k];
        d[0] = t * prep_fraction;
        Ok(d)
    }

    pub fn zeros(k: usize, t: f64) -> Result<Self> {
        Self::uniform(k, t, vec![0.0; N_DIRECTIONS * k])
    }

    /// Coefficients uniform in `[−scale, scale]`.
    pub fn random<R: Rng + ?Sized>(k: usize, t: f64, scale: f64, rng: &mut R) -> Result<Self> {
        let c = (0..N_DIRECTIONS * k)
            .map(|_| scale * (2.0 * rng.random::<f64>() - 1.0))
            .collect();
        Self::uniform(k, t, c)
    }

    pub fn segments(&self) -> usize {
        self.durations.len()
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }

    pub fn total_time(&self) -> f64 {
        self.durations.iter().sum()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn with_coefficients(&self, coefficients: &[f64]) -> Self {
        Self {
            durations: self.durations.clone(),
            coefficients: coefficients.to_vec(),
        }
    }

    pub fn segment(&self, k: usize) -> &[f64] {
        &self.coefficients[N_DIRECTIONS * k..N_DIRECTIONS * (k + 1)]
    }

    /// `Ĥ_c` on segment `k`.
    pub fn hamiltonian(&self, k: usize) -> Matrix4<Complex64> {
        control_hamiltonian(self.segment(k), Matrix4::zeros())
    }
}
