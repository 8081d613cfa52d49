use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64;

use super::ansatz::{control_hamiltonian, ControlAnsatz};
use crate::error::{Error, Result};
use crate::fisher::{FisherKind, FisherMatrix, GeneratorSet, KERNEL_RTOL, OVERLAP_RTOL};
use crate::sim::PureState;

/// Field values at which the controlled evolution is linearized.
pub const FIDUCIAL_THETA: [f64; 2] = [0.1, 0.1];

/// Two-qubit estimation problem for the control optimizer.
#[derive(Debug, Clone)]
pub struct Scenario {
    gens: [Generator; 2],
    pub generators: GeneratorSet,
    pub alpha: [f64; 2],
    pub t: f64,
    pub theta: [f64; 2],
    pub initial: PureState,
}

impl Scenario {
    pub fn new(generators: GeneratorSet, alpha: &[f64], t: f64, initial: PureState) -> Result<Self> {
        if generators.n_qubits() != 2 || generators.len() != 2 || initial.n_qubits() != 2 || alpha.len() != 2 {
            return Err(Error::Scope(
                "control optimization is limited to two qubits with two generators".into(),
            ));
        }
        if !(t > 0.0) {
            return Err(Error::Argument(format!("t must be positive, got {t}")));
        }
        let dense = |i: usize| -> Matrix4<Complex64> {
            let d = generators.generators()[i].to_dense();
            Matrix4::from_fn(|r, c| d[(r, c)])
        };
        Ok(Self {
            gens: [Generator::new(dense(0)), Generator::new(dense(1))],
            generators,
            alpha: [alpha[0], alpha[1]],
            t,
            theta: FIDUCIAL_THETA,
            initial,
        })
    }

    /// `σ̂ᶻ` on qubit 0, `½σ̂ᶻ` on qubit 1, `α = (1, α₂)`, `t = 1`, start in `|00⟩`.
    pub fn asymmetric(alpha2: f64) -> Result<Self> {
        Self::new(GeneratorSet::asymmetric_pair()?, &[1.0, alpha2], 1.0, PureState::zero(2)?)
    }

    fn field(&self) -> Matrix4<Complex64> {
        self.gens[0].dense() * Complex64::new(self.theta[0], 0.0) + self.gens[1].dense() * Complex64::new(self.theta[1], 0.0)
    }
}

/// `e^{−iHτ}` in the eigenbasis of `H`, with the Daleckii–Krein kernels of its directional
/// derivatives along each generator: `∂e^{−iHτ}[G] = V (V†GV ∘ Γ) V†`.
struct SegmentPropagator {
    v: Matrix4<Complex64>,
    vh: Matrix4<Complex64>,
    phases: Vector4<Complex64>,
    /// `V†GᵢV ∘ Γ`.
    kernels: [Matrix4<Complex64>; 2],
}

fn propagate_segment(h: &Matrix4<Complex64>, dt: f64, gens: &[Generator; 2]) -> SegmentPropagator {
    let eig = SymmetricEigen::new(*h);
    let v = eig.eigenvectors;
    let vh = v.adjoint();
    let lam = eig.eigenvalues;
    let half = Vector4::from_fn(|m, _| Complex64::from_polar(1.0, -0.5 * lam[m] * dt));
    let phases = half.component_mul(&half);
    let mut gamma = Matrix4::<Complex64>::zeros();
    for m in 0..4 {
        for n in 0..4 {
            let d = lam[m] - lam[n];
            gamma[(m, n)] = if d.abs() < 1e-10 {
                Complex64::new(0.0, -dt) * half[m] * half[n]
            } else if (d * dt).abs() < 1e-3 {
                half[m] * half[n] * Complex64::new(0.0, -2.0 * (0.5 * d * dt).sin() / d)
            } else {
                (phases[m] - phases[n]) / d
            };
        }
    }
    let kernels = [0, 1].map(|i| (vh * gens[i].left_mul(&v)).component_mul(&gamma));
    SegmentPropagator { v, vh, phases, kernels }
}

impl SegmentPropagator {
    fn apply(&self, e: &Evolution) -> Evolution {
        let w = self.vh * e.state;
        Evolution {
            state: self.v * self.phases.component_mul(&w),
            derivatives: [0, 1].map(|i| {
                self.v * (self.phases.component_mul(&(self.vh * e.derivatives[i])) + self.kernels[i] * w)
            }),
        }
    }

    fn block_map(&self) -> BlockMap {
        let mut vp = self.v;
        for m in 0..4 {
            let ph = self.phases[m];
            vp.column_mut(m).apply(|z| *z *= ph);
        }
        BlockMap {
            a: vp * self.vh,
            b: [0, 1].map(|i| self.v * self.kernels[i] * self.vh),
        }
    }
}

/// A generator as a dense matrix, kept as its diagonal when it has no off-diagonal part.
#[derive(Debug, Clone)]
enum Generator {
    Diagonal(Vector4<Complex64>),
    Dense(Matrix4<Complex64>),
}

impl Generator {
    fn new(m: Matrix4<Complex64>) -> Self {
        let off = (0..4).any(|r| (0..4).any(|c| r != c && m[(r, c)].norm() > 0.0));
        if off {
            Self::Dense(m)
        } else {
            Self::Diagonal(m.diagonal())
        }
    }

    fn dense(&self) -> Matrix4<Complex64> {
        match self {
            Self::Diagonal(d) => Matrix4::from_diagonal(d),
            Self::Dense(m) => *m,
        }
    }

    fn left_mul(&self, v: &Matrix4<Complex64>) -> Matrix4<Complex64> {
        match self {
            Self::Diagonal(d) => {
                let mut out = *v;
                for r in 0..4 {
                    out.row_mut(r).apply(|z| *z *= d[r]);
                }
                out
            }
            Self::Dense(m) => m * v,
        }
    }
}

/// Final state and its θ-derivatives under the controls.
#[derive(Debug, Clone, Copy)]
pub struct Evolution {
    pub state: Vector4<Complex64>,
    pub derivatives: [Vector4<Complex64>; 2],
}

/// Block-triangular map `(ψ, ∂ᵢψ) ↦ (Aψ, Bᵢψ + A∂ᵢψ)` of one or more segments.
#[derive(Clone, Copy)]
struct BlockMap {
    a: Matrix4<Complex64>,
    b: [Matrix4<Complex64>; 2],
}

impl BlockMap {
    fn identity() -> Self {
        Self {
            a: Matrix4::identity(),
            b: [Matrix4::zeros(); 2],
        }
    }

    /// `self` applied first, then `later`.
    fn then(&self, later: &BlockMap) -> Self {
        Self {
            a: later.a * self.a,
            b: [0, 1].map(|i| later.a * self.b[i] + later.b[i] * self.a),
        }
    }

    fn apply(&self, e: &Evolution) -> Evolution {
        Evolution {
            state: self.a * e.state,
            derivatives: [0, 1].map(|i| self.b[i] * e.state + self.a * e.derivatives[i]),
        }
    }
}

fn check_duration(ansatz: &ControlAnsatz, scenario: &Scenario) -> Result<()> {
    let total = ansatz.total_time();
    if (total - scenario.t).abs() > 1e-9 * scenario.t {
        return Err(Error::Argument(format!(
            "control segments span {total}, scenario time is {}",
            scenario.t
        )));
    }
    Ok(())
}

fn initial_evolution(scenario: &Scenario) -> Evolution {
    let amps = scenario.initial.amplitudes();
    Evolution {
        state: Vector4::new(amps[0], amps[1], amps[2], amps[3]),
        derivatives: [Vector4::zeros(); 2],
    }
}

fn segment(coefficients: &[f64], dt: f64, scenario: &Scenario) -> SegmentPropagator {
    let h = control_hamiltonian(coefficients, scenario.field());
    propagate_segment(&h, dt, &scenario.gens)
}

pub fn evolve(ansatz: &ControlAnsatz, scenario: &Scenario) -> Result<Evolution> {
    check_duration(ansatz, scenario)?;
    let mut e = initial_evolution(scenario);
    for k in 0..ansatz.segments() {
        e = segment(ansatz.segment(k), ansatz.durations()[k], scenario).apply(&e);
    }
    Ok(e)
}

fn qfi_of(e: &Evolution, t: f64) -> Result<FisherMatrix> {
    let f = qfi_entries(e);
    FisherMatrix::new(DMatrix::from_fn(2, 2, |i, j| f[(i, j)]), t, FisherKind::Quantum)
}

fn qfi_entries(e: &Evolution) -> Matrix2<f64> {
    let mut f = Matrix2::zeros();
    for i in 0..2 {
        for j in i..2 {
            let overlap = e.derivatives[i].dotc(&e.derivatives[j]);
            let a = e.derivatives[i].dotc(&e.state);
            let b = e.state.dotc(&e.derivatives[j]);
            let v = 4.0 * (overlap - a * b).re;
            f[(i, j)] = v;
            f[(j, i)] = v;
        }
    }
    f
}

/// [`crb_linear`] for a 2×2 matrix without heap allocation, with `+∞` for an unbounded
/// or information-free direction.
fn crb_linear_2x2(alpha: &[f64; 2], f: &Matrix2<f64>) -> f64 {
    let eig = SymmetricEigen::new(*f);
    let lmax = eig.eigenvalues.max();
    if !(lmax > 0.0) {
        return f64::INFINITY;
    }
    let a = Vector2::new(alpha[0], alpha[1]);
    let mut value = 0.0;
    let mut inside = Vector2::zeros();
    for m in 0..2 {
        if eig.eigenvalues[m] > KERNEL_RTOL * lmax {
            let v = eig.eigenvectors.column(m);
            let c = v.dot(&a);
            value += c * c / eig.eigenvalues[m];
            inside += v * c;
        }
    }
    if (a - inside).norm() / a.norm().max(f64::MIN_POSITIVE) > OVERLAP_RTOL {
        return f64::INFINITY;
    }
    value
}

fn objective_of(e: &Evolution, scenario: &Scenario) -> f64 {
    crb_linear_2x2(&scenario.alpha, &qfi_entries(e))
}

/// `F_ij = 4 Re(⟨∂ᵢψ|∂ⱼψ⟩ − ⟨∂ᵢψ|ψ⟩⟨ψ|∂ⱼψ⟩)` of the controlled evolution.
pub fn control_qfi(ansatz: &ControlAnsatz, scenario: &Scenario) -> Result<FisherMatrix> {
    qfi_of(&evolve(ansatz, scenario)?, scenario.t)
}

/// `αᵀF̃_Q⁻¹α`, or `+∞` when α is not in the image of `F_Q`.
pub fn objective_qcrb(ansatz: &ControlAnsatz, scenario: &Scenario) -> Result<f64> {
    Ok(objective_of(&evolve(ansatz, scenario)?, scenario))
}

/// Objective evaluations that change one segment at a time. The evolution before and the
/// map after every segment are cached, so a probe costs one segment propagation.
pub struct SegmentCache<'a> {
    scenario: &'a Scenario,
    durations: Vec<f64>,
    prefix: Vec<Evolution>,
    suffix: Vec<BlockMap>,
}

impl<'a> SegmentCache<'a> {
    pub fn new(ansatz: &ControlAnsatz, scenario: &'a Scenario) -> Result<Self> {
        check_duration(ansatz, scenario)?;
        let k = ansatz.segments();
        let props: Vec<SegmentPropagator> = (0..k)
            .map(|s| segment(ansatz.segment(s), ansatz.durations()[s], scenario))
            .collect();
        let mut prefix = Vec::with_capacity(k);
        let mut e = initial_evolution(scenario);
        for p in &props {
            prefix.push(e);
            e = p.apply(&e);
        }
        let mut suffix = vec![BlockMap::identity(); k];
        for s in (0..k.saturating_sub(1)).rev() {
            suffix[s] = props[s + 1].block_map().then(&suffix[s + 1]);
        }
        Ok(Self {
            scenario,
            durations: ansatz.durations().to_vec(),
            prefix,
            suffix,
        })
    }

    /// Objective with segment `k` replaced by `coefficients`.
    pub fn objective_with(&self, k: usize, coefficients: &[f64]) -> Result<f64> {
        let seg = segment(coefficients, self.durations[k], self.scenario);
        let e = self.suffix[k].apply(&seg.apply(&self.prefix[k]));
        Ok(objective_of(&e, self.scenario))
    }
}

/// `max_b α_b²/(t²‖ĝ_b‖_s²)` for the scenario.
pub fn theorem_floor(scenario: &Scenario) -> Result<f64> {
    crate::fisher::network_heisenberg_bound(&scenario.alpha, &scenario.generators, scenario.t)
}
