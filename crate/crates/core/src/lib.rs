//! Numerical toolkit for degraded cqq-wiretap channels.
//!
//! * [`linalg`], [`state`], [`channel`]: dense quantum states and channels.
//! * [`entropy`]: smooth conditional min- and max-entropies by semidefinite
//!   programming, finite-n AEP bounds and an inequality harness.
//! * [`wiretap`]: channel model, degradability certificates and capacities.
//! * [`codes`]: explicit wiretap codes, converse bounds and the `(ε, δ)` region.

pub mod channel;
pub mod codes;
pub mod entropy;
pub mod linalg;
mod lmi;
pub mod state;
pub mod wiretap;

pub use channel::{apply_channel, stinespring, Isometry, QuantumChannel};
pub use linalg::{kron, partial_trace, ComplexMatrix};
pub use state::{
    conditional_entropy, conditional_mutual_information, fidelity, purified_distance, purify,
    von_neumann_entropy, DensityOperator,
};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid subsystem selection: {0}")]
    Subsystem(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("joint dimension {needed} exceeds the budget {budget}")]
    Budget { needed: usize, budget: usize },
    #[error("i/o: {0}")]
    Io(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("outside converse region: ε + 2δ = {} ≥ 1", eps + 2.0 * delta)]
    OutsideConverseRegion { eps: f64, delta: f64 },
}

impl From<secrecy_sdp::SdpError> for Error {
    fn from(e: secrecy_sdp::SdpError) -> Self {
        Error::Solver(e.to_string())
    }
}
