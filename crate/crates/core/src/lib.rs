//! Exact-arithmetic toolkit for cluster scattering diagrams.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice`]: fixed data, seeds, pairings and the mutation maps.
//! * [`cones`]: rational polyhedral cones in double description.
//! * [`dilogprod`]: dilogarithm products and the ordering algorithm.
//! * [`seriesrep`]: truncated series and the principal x-representation.
//! * [`csd`]: walls, joints, path-ordered products and diagram construction.
//! * [`mutation`]: mutation of diagrams and equivalence testing.
//! * [`theta`]: broken lines and theta functions.
//! * [`io`] and [`presets`]: JSON formats and bundled seeds.
//!
//! All arithmetic is exact. Rationals are [`Q`] (arbitrary precision).

pub mod cones;
pub mod csd;
pub mod dilogprod;
pub mod io;
pub mod lattice;
pub mod mutation;
pub mod presets;
pub mod rat;
pub mod seriesrep;
pub mod suites;
pub mod theta;

pub use rat::Q;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("exchange matrix is not skew-symmetrizable by the given delta")]
    NotSkewSymmetrizable,
    #[error("direction {k} out of range for rank {rank}")]
    Direction { k: usize, rank: usize },
    #[error("curve is not admissible: {0}")]
    NotAdmissible(String),
    #[error("point not in general position: {reason}")]
    NotGeneral { reason: String, suggestion: Option<Vec<Q>> },
    #[error("diagram is inconsistent: {0}")]
    Inconsistent(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
