use num_complex::Complex64;

use super::gates::GateSpec;
use super::observable::{Pauli, PauliObservable};
use super::state::PureState;
use crate::error::{Error, Result};

/// `(|τ⟩ + |−τ⟩)/√2` for `τ ∈ {−1,0,1}ⁿ`, with `τⱼ = −1 ↦ |1⟩` and otherwise `|0⟩`.
///
/// The flag is `true` when both branches coincide (`τ = 0`), in which case the state is
/// `|0…0⟩` and carries no phase information.
pub fn ghz_like_state(tau: &[i8]) -> Result<(PureState, bool)> {
    let n = tau.len();
    super::state::check_qubit_count(n)?;
    let (mut minus, mut plus) = (0usize, 0usize);
    for (j, &t) in tau.iter().enumerate() {
        match t {
            -1 => minus |= 1 << j,
            1 => plus |= 1 << j,
            0 => {}
            other => {
                return Err(Error::Argument(format!(
                    "tau entries must be -1, 0 or 1, got {other} at position {j}"
                )))
            }
        }
    }
    if minus == plus {
        return Ok((PureState::basis_index(n, minus)?, true));
    }
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[minus] = h;
    amps[plus] = h;
    Ok((PureState::from_amplitudes(n, amps)?, false))
}

/// One-axis-twisted coherent state with its squeezing parameter.
#[derive(Debug, Clone)]
pub struct SqueezedState {
    pub state: PureState,
    /// `sqrt(Var Ĵ_y / (N/4))` on `state`.
    pub xi: f64,
    pub mu: f64,
    /// Angle of the post-twisting x rotation.
    pub rotation: f64,
}

const GOLDEN_TOL: f64 = 1e-10;

/// `exp(−i·mu·Ĵ_z²)` on `|+⟩^⊗n`, then the x rotation that minimizes `Var Ĵ_y`.
pub fn squeezed_state(n: usize, mu: f64) -> Result<SqueezedState> {
    if n < 2 {
        return Err(Error::Argument("squeezed states need at least 2 qubits".into()));
    }
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::Argument(format!("twisting mu must be finite and >= 0, got {mu}")));
    }
    let jy = PauliObservable::collective(n, Pauli::Y)?;
    if mu == 0.0 {
        let state = PureState::plus(n)?;
        return Ok(SqueezedState {
            state,
            xi: 1.0,
            mu,
            rotation: 0.0,
        });
    }
    let twisted = twist(n, mu)?;
    let var_at = |nu: f64| -> Result<f64> {
        let mut s = twisted.clone();
        s.apply_gate(&GateSpec::CollectiveRotationX { angle: nu })?;
        jy.variance(&s)
    };
    // Var Ĵ_y(ν) = A + B cos 2ν + C sin 2ν, so three samples fix the minimizer.
    let (v0, v1, v2) = (
        var_at(0.0)?,
        var_at(std::f64::consts::FRAC_PI_4)?,
        var_at(std::f64::consts::FRAC_PI_2)?,
    );
    let a = 0.5 * (v0 + v2);
    let (b, c) = (0.5 * (v0 - v2), v1 - a);
    let guess = 0.5 * (-c).atan2(-b);
    let nu = golden_section(guess - 0.05, guess + 0.05, GOLDEN_TOL, |x| {
        var_at(x).unwrap_or(f64::INFINITY)
    });
    let mut state = twisted;
    state.apply_gate(&GateSpec::CollectiveRotationX { angle: nu })?;
    let xi = (jy.variance(&state)? / (n as f64 / 4.0)).sqrt();
    Ok(SqueezedState {
        state,
        xi,
        mu,
        rotation: nu,
    })
}

/// Twisting strength in `[0, 1.5]` minimizing the achieved ξ.
pub fn optimal_twisting(n: usize) -> Result<SqueezedState> {
    let xi_of = |mu: f64| squeezed_state(n, mu).map(|s| s.xi).unwrap_or(f64::INFINITY);
    let grid: Vec<f64> = (0..=60).map(|k| 0.025 * k as f64).collect();
    let best = grid
        .iter()
        .copied()
        .min_by(|a, b| xi_of(*a).total_cmp(&xi_of(*b)))
        .unwrap_or(0.0);
    let lo = (best - 0.025).max(0.0);
    let hi = (best + 0.025).min(1.5);
    let mu = golden_section(lo, hi, 1e-8, xi_of);
    squeezed_state(n, mu)
}

/// Twisted state whose single-qubit contrast `⟨σ̂ˣᵢ⟩ = cos^{n−1}(mu)` equals `contrast`.
pub fn twisting_for_contrast(n: usize, contrast: f64) -> Result<SqueezedState> {
    if !(contrast > 0.0 && contrast <= 1.0) {
        return Err(Error::Argument(format!("contrast must lie in (0, 1], got {contrast}")));
    }
    if n < 2 {
        return Err(Error::Argument("squeezed states need at least 2 qubits".into()));
    }
    squeezed_state(n, contrast.powf(1.0 / (n as f64 - 1.0)).acos())
}

fn twist(n: usize, mu: f64) -> Result<PureState> {
    let mut s = PureState::plus(n)?;
    for (k, a) in s.amplitudes_mut().iter_mut().enumerate() {
        let m = 0.5 * (n as f64 - 2.0 * k.count_ones() as f64);
        *a *= Complex64::from_polar(1.0, -mu * m * m);
    }
    Ok(s)
}

/// Minimizer of a unimodal `f` on `[lo, hi]`.
pub(crate) fn golden_section(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}
