//! Simulation and Fisher-information analysis for entangled qubit sensor networks that
//! estimate a linear combination `q = α·θ` of local fields.

pub mod error;
pub mod estimation;
pub mod fisher;
pub mod network;
pub mod optimizer;
pub mod protocols;
pub mod reparam;
pub mod seeds;
pub mod sim;

pub use error::{Error, Result};
pub use network::NetworkConfig;
