//! Dense state-vector kernel. Qubit 0 is the least-significant bit of the amplitude
//! index and `σ̂ᶻ|0⟩ = +|0⟩`.

mod density;
mod gates;
mod observable;
mod prep;
mod sampling;
mod state;

pub use density::DensityMatrix;
pub use gates::GateSpec;
pub use observable::{Pauli, PauliObservable, PauliTerm};
pub use prep::{ghz_like_state, optimal_twisting, squeezed_state, twisting_for_contrast, SqueezedState};
pub use sampling::{Basis, Outcome, OutcomeSampler};
pub use state::{PureState, MAX_QUBITS};
