//! Classical and quantum Fisher information and the variance bounds built from them.

mod bounds;
mod classical;
mod generators;
mod inverse;
mod qfi;

pub use bounds::{network_heisenberg_bound, saturates, BoundsReport, SATURATION_FACTOR};
pub use classical::{classical_fisher, default_step};
pub use generators::{seminorm, GeneratorSet, DENSE_SEMINORM_LIMIT};
pub use inverse::{crb_linear, projected_inverse, ProjectedInverse, KERNEL_RTOL, OVERLAP_RTOL};
pub use qfi::{qfi_matrix, FisherKind, FisherMatrix};
