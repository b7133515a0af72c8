//! Exact probabilities for `(n, k, p, t)` lottery schemes, covering and
//! lottery design verification, greedy covering construction, and a seeded
//! Monte Carlo cross-check for the closed forms.
//!
//! Probabilities are exact rationals wherever the operands stay manageable
//! and fixed-point extended-precision reals otherwise (see [`Probability`]).

pub mod bench;
pub mod combin;
pub mod construct;
pub mod design;
mod error;
pub mod extended;
pub mod myth;
pub mod prob;
pub mod probability;
pub mod rational;
pub mod rng;
pub mod simulate;
pub mod verify;

pub use combin::{binomial, rank_colex, ratio_no_overlap, unrank_colex, BinomialTable, Subset};
pub use design::{Design, DesignKind};
pub use error::{Error, ParseError, Result};
pub use extended::ExtReal;
pub use prob::{HitSpectrum, Regime, Scheme, TicketModel};
pub use probability::Probability;
pub use rational::ExactRational;
pub use verify::VerificationReport;
