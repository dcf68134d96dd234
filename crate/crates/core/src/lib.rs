//! Exact-arithmetic counterfactual decision theory on finite spaces.
//!
//! Everything is built on exact rationals. A [`model::State`] is a joint law of
//! the full potential-outcome vector and covariates, a [`model::Policy`] maps
//! that state to a [`model::Law`] on decisions × outcomes × covariates, and a
//! [`model::UtilityTable`] scores every cell of that extended space.
//!
//! The remaining modules build on that data model:
//!
//! * [`valuation`]: expected utility, the induced preference, regret utilities.
//! * [`axioms`]: structural classification and witness search for the
//!   expected-utility axioms on the extended space.
//! * [`reduction`]: additive, standard, outcome and binary decompositions.
//! * [`identification`]: sharp bounds over the coupling polytope.
//! * [`projection`]: menu- and context-dependent choice on realized outcomes.
//! * [`extended`]: utilities on mean space and the monotone reduction.
//! * [`scenario`]: named worked examples, scenario files and reports.

pub mod axioms;
pub mod error;
pub mod exec;
pub mod extended;
pub mod identification;
pub mod model;
pub mod projection;
pub mod rational;
pub mod reduction;
pub mod scenario;
pub mod simplex;
pub mod valuation;
pub mod wire;

pub use error::{Error, Result};
pub use exec::Execution;
pub use rational::Rational;
