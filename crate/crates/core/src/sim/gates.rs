use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::PureState;
use crate::error::{check_len, Error, Result};

/// Control operations the protocols need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GateSpec {
    /// `σ̂ˣ` on one qubit.
    PauliX { target: usize },
    /// `exp(−i·angle·σ̂ᶻ/2)` on one qubit: bit 0 picks up `e^{−iη/2}`, bit 1 `e^{+iη/2}`.
    RotationZ { target: usize, angle: f64 },
    /// `exp(−i·(angle/2)·Σσ̂ˣᵢ)` on every qubit.
    CollectiveRotationX { angle: f64 },
}

impl PureState {
    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        match *gate {
            GateSpec::PauliX { target } => {
                self.check_qubit(target)?;
                let bit = 1usize << target;
                let amps = self.amplitudes_mut();
                for k in 0..amps.len() {
                    if k & bit == 0 {
                        amps.swap(k, k | bit);
                    }
                }
            }
            GateSpec::RotationZ { target, angle } => {
                self.check_qubit(target)?;
                check_angle(angle)?;
                let bit = 1usize << target;
                let lo = Complex64::from_polar(1.0, -angle / 2.0);
                let hi = lo.conj();
                for (k, a) in self.amplitudes_mut().iter_mut().enumerate() {
                    *a *= if k & bit == 0 { lo } else { hi };
                }
            }
            GateSpec::CollectiveRotationX { angle } => {
                check_angle(angle)?;
                let c = Complex64::new((angle / 2.0).cos(), 0.0);
                let s = Complex64::new(0.0, -(angle / 2.0).sin());
                let n = self.n_qubits();
                let amps = self.amplitudes_mut();
                for q in 0..n {
                    let bit = 1usize << q;
                    for k in 0..amps.len() {
                        if k & bit == 0 {
                            let a = amps[k];
                            let b = amps[k | bit];
                            amps[k] = c * a + s * b;
                            amps[k | bit] = s * a + c * b;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Free evolution under `Σ ½θᵢσ̂ᶻᵢ` for `duration`.
    ///
    /// The basis state with bits `b` gains `exp(−i·duration·Σᵢ sᵢθᵢ/2)` with
    /// `sᵢ = +1` for bit 0 and `−1` for bit 1.
    pub fn evolve_field(&mut self, theta: &[f64], duration: f64) -> Result<()> {
        check_len(self.n_qubits(), theta.len())?;
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::Argument(format!(
                "duration must be finite and nonnegative, got {duration}"
            )));
        }
        if duration == 0.0 {
            return Ok(());
        }
        let total: f64 = theta.iter().sum();
        for (k, a) in self.amplitudes_mut().iter_mut().enumerate() {
            // Σ sᵢθᵢ = Σθᵢ − 2 Σ_{bit i set} θᵢ
            let mut set = 0.0;
            let mut bits = k;
            while bits != 0 {
                let q = bits.trailing_zeros() as usize;
                set += theta[q];
                bits &= bits - 1;
            }
            let phase = -0.5 * duration * (total - 2.0 * set);
            *a *= Complex64::from_polar(1.0, phase);
        }
        Ok(())
    }
}

fn check_angle(angle: f64) -> Result<()> {
    if angle.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("gate angle {angle} is not finite")))
    }
}
