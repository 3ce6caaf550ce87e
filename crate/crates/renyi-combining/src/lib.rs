//! Information combining for conditional Rényi entropies of binary-input
//! channels.
//!
//! Given two independent pairs `(X1, Y1)`, `(X2, Y2)` with binary `X1`, `X2`,
//! this crate evaluates the conditional entropy of `X1 ⊕ X2` given both
//! observations and compares it against the two extremal predictions, obtained
//! by replacing each pair with a symmetric channel (BSC) or an erasure channel
//! (BEC) of matching conditional entropy. Which of the two is the upper and
//! which the lower bound depends on the curvature of a bivariate combining
//! curve, and that curvature changes with the entropy order α. The crate
//! provides:
//!
//! * scalar kernels: binary Rényi entropy, its inverses, the exponential
//!   k-transforms and the combining curves built from them ([`entropy`]);
//! * channel and joint-distribution models with the four conditional entropy
//!   variants (Arimoto, Hayashi, Jizba, Cachin) plus Shannon and min-entropy
//!   ([`channel`]);
//! * the combining construction, closed-form BSC/BEC bound expressions, gap
//!   functions, and direction-aware bound checking ([`combining`]);
//! * numerical curvature classification and the verification suites that
//!   back the claimed curvature regimes ([`analysis`]);
//! * one-step polar transforms, the order-α mutual information that is
//!   conserved by them, and polarization trees with per-level statistics
//!   ([`polar`]).
//!
//! Everything numeric is generic over [`real::Real`], with hardware `f64` and
//! a 192-bit software float as the two realizations. Several verification
//! targets are sign checks on quantities a few orders of magnitude above
//! double-precision round-off, where the extra head-room turns a plausible
//! result into a convincing one.
//!
//! With the default `parallel` feature the grid scans and batch checks run on
//! a rayon thread pool; disabling it yields a dependency-free sequential
//! build with identical results.

// Validation guards are written `!(x > lo)` on purpose: NaN fails the inner
// comparison and is rejected, where the un-negated form would wave it through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod combining;
pub mod entropy;
mod par;
pub mod polar;
pub mod real;
pub mod sampling;

use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument left the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested Rényi order is not defined for the operation.
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),
    /// A probability vector or channel failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    /// Mutually inconsistent or out-of-range configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A computation would materialize more state than the configured cap.
    #[error("resource limit: needed {needed} channel outputs, cap is {cap}")]
    ResourceLimit { needed: usize, cap: usize },
    /// Malformed textual input (numbers, ranges, channel shorthands).
    #[error("parse error: {0}")]
    Parse(String),
    /// Filesystem failure while loading or saving a channel.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Malformed channel JSON.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub use analysis::{classify_convexity, ConvexityVerdict, Precision};
pub use channel::{BinaryChannel, EntropyKind, JointDistribution};
pub use combining::{BoundReport, Curvature, Direction, Evidence, Verdict};
pub use entropy::{Alpha, CurveKind, KKind};
pub use polar::{polarize_tree, MergePolicy, PolarConfig, PolarRun};
pub use real::{Extended, Real};
