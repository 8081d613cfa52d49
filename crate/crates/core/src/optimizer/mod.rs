//! Gradient-descent search over piecewise-constant two-qubit controls for the smallest
//! `αᵀF̃_Q⁻¹α`.

mod ansatz;
mod descent;
mod objective;
mod sweep;

pub use ansatz::{direction_labels, pauli_directions, ControlAnsatz, N_DIRECTIONS};
pub use descent::{descend, descend_with, gradient_fd, gradient_fd_by, DescentOutcome, DescentSettings};
pub use objective::{control_qfi, evolve, objective_qcrb, theorem_floor, Evolution, Scenario, SegmentCache, FIDUCIAL_THETA};
pub use sweep::{fig2_sweep, optimize, Fig2Row, OptResult, OptimizerSettings};
