//! Finite-domain data model: spaces, states, policies, induced laws, utilities.
//!
//! Outcome vectors are stored in decision-index order and enumerated
//! lexicographically, so `Y(0)` is the most significant digit of a profile
//! index. All masses are exact rationals.

mod law;
mod policy;
mod space;
mod state;
mod utility;

pub use law::{induced_law, Law};
pub use policy::{Policy, PolicyKind};
pub use space::{same_space, OutcomeSpace, ProblemSpace, DEFAULT_COVARIATE};
pub(crate) use state::check_distribution;
pub use state::{Marginals, State};
pub use utility::UtilityTable;

use crate::{Rational, Result};
use std::sync::Arc;

/// Independent coupling of per-decision marginals at covariate `x`.
pub fn independent_coupling(
    space: &Arc<ProblemSpace>,
    marginals: &[Vec<Rational>],
    x: usize,
) -> Result<State> {
    State::independent(space, marginals, x)
}

/// Convex combination of laws on a shared space.
pub fn mix(laws: &[Law], weights: &[Rational]) -> Result<Law> {
    Law::mix(laws, weights)
}
