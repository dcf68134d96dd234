//! Utilities defined on mean outcomes, and their reduction to a pair of
//! monotone index functions `φ₀, φ₁` for binary decisions.

mod contrast;
mod phi;

pub use contrast::{
    check_crossing_assumptions, check_crossing_with, Assumption, ContrastForm, ContrastKind,
    CrossingReport, CrossingViolation, Interval,
};
pub use phi::{
    build_phi, check_equivalence, check_equivalence_with, phi0_monotonicity, EquivalenceMismatch,
    EquivalenceReport, Phi0Rule, PhiPair, PhiValue, BISECTION_BITS,
};

use std::sync::Arc;

use num_traits::Zero;

use crate::identification::{bound_functional, MarginalsSpec};
use crate::model::{Law, ProblemSpace, State, UtilityTable};
use crate::rational::sign;
use crate::valuation::decision_value;
use crate::{Error, Rational, Result};

pub fn mean_vector(state: &State) -> Vec<Rational> {
    state.means()
}

/// One decision's utility as a function of the mean vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtendedForm {
    /// Levels on `p₀ > p₁`, `p₀ < p₁` and `p₀ = p₁`.
    Asymmetric {
        greater: Rational,
        less: Rational,
        equal: Rational,
    },
    /// `c + c0·p₀ + c1·p₁ + c01·p₀p₁`.
    Product {
        c: Rational,
        c0: Rational,
        c1: Rational,
        c01: Rational,
    },
    /// `alpha + Σ_k beta[k]·p_k`.
    Additive {
        alpha: Rational,
        beta: Vec<Rational>,
    },
}

impl ExtendedForm {
    pub fn eval(&self, means: &[Rational]) -> Rational {
        match self {
            ExtendedForm::Asymmetric {
                greater,
                less,
                equal,
            } => match means[0].cmp(&means[1]) {
                std::cmp::Ordering::Greater => greater.clone(),
                std::cmp::Ordering::Less => less.clone(),
                std::cmp::Ordering::Equal => equal.clone(),
            },
            ExtendedForm::Product { c, c0, c1, c01 } => {
                c + c0 * &means[0] + c1 * &means[1] + c01 * &means[0] * &means[1]
            }
            ExtendedForm::Additive { alpha, beta } => beta
                .iter()
                .zip(means)
                .fold(alpha.clone(), |acc, (b, p)| acc + b * p),
        }
    }
}

/// Per-decision utilities on mean space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedUtility {
    space: Arc<ProblemSpace>,
    forms: Vec<ExtendedForm>,
}

impl ExtendedUtility {
    pub fn new(space: &Arc<ProblemSpace>, forms: Vec<ExtendedForm>) -> Result<Self> {
        if forms.len() != space.decisions() {
            return Err(Error::InvalidArgument(format!(
                "{} forms for {} decisions",
                forms.len(),
                space.decisions()
            )));
        }
        let k = space.decisions();
        for f in &forms {
            match f {
                ExtendedForm::Additive { beta, .. } if beta.len() != k => {
                    return Err(Error::InvalidArgument(format!(
                        "additive form needs {k} slopes"
                    )));
                }
                ExtendedForm::Asymmetric { .. } | ExtendedForm::Product { .. } if k != 2 => {
                    return Err(Error::InvalidArgument(
                        "asymmetric and product forms need two decisions".into(),
                    ));
                }
                _ => {}
            }
        }
        Ok(ExtendedUtility {
            space: space.clone(),
            forms,
        })
    }

    pub fn additive(
        space: &Arc<ProblemSpace>,
        alpha: Vec<Rational>,
        beta: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::InvalidArgument(
                "alpha and beta lengths differ".into(),
            ));
        }
        let forms = alpha
            .into_iter()
            .zip(beta)
            .map(|(alpha, beta)| ExtendedForm::Additive { alpha, beta })
            .collect();
        Self::new(space, forms)
    }

    pub fn space(&self) -> &Arc<ProblemSpace> {
        &self.space
    }

    pub fn forms(&self) -> &[ExtendedForm] {
        &self.forms
    }

    pub fn at(&self, d: usize, means: &[Rational]) -> Result<Rational> {
        self.space.check_decision(d)?;
        if means.len() != self.space.decisions() {
            return Err(Error::InvalidArgument(
                "mean vector has the wrong length".into(),
            ));
        }
        Ok(self.forms[d].eval(means))
    }

    /// Value of a law. Additive utilities are linear in the law; the others
    /// are only defined when one decision is taken with probability one.
    pub fn value(&self, law: &Law) -> Result<Rational> {
        crate::model::same_space(&self.space, law.space())
            .then_some(())
            .ok_or_else(|| Error::SpaceMismatch("extended utility and law".into()))?;
        if self
            .forms
            .iter()
            .all(|f| matches!(f, ExtendedForm::Additive { .. }))
        {
            let space = law.space();
            let mut total = Rational::zero();
            for (d, profile, _, p) in law.entries() {
                let y: Vec<Rational> = (0..space.decisions())
                    .map(|k| space.outcomes().value(space.digit(profile, k)).clone())
                    .collect();
                total += self.forms[d].eval(&y) * p;
            }
            return Ok(total);
        }
        let d = law
            .degenerate_decision()
            .ok_or_else(|| Error::Precondition("law randomizes over decisions".into()))?;
        self.at(d, &law.state_part().means())
    }

    pub fn value_of_state(&self, d: usize, state: &State) -> Result<Rational> {
        self.value(&Law::deterministic(d, state)?)
    }

    /// `Γ = ũ(1; p) − ũ(0; p)` as a closed form.
    pub fn contrast(&self) -> Result<ContrastForm> {
        if self.forms.len() != 2 {
            return Err(Error::Precondition("contrast needs two decisions".into()));
        }
        let interval = self.mean_interval()?;
        use ExtendedForm::*;
        Ok(match (&self.forms[0], &self.forms[1]) {
            (
                Asymmetric {
                    greater: g0,
                    less: l0,
                    equal: e0,
                },
                Asymmetric {
                    greater: g1,
                    less: l1,
                    equal: e1,
                },
            ) => ContrastForm::sign(g1 - g0, l1 - l0, e1 - e0, interval),
            (a, b) => {
                let (ac, a0, a1, a01) = bilinear_coefficients(a)?;
                let (bc, b0, b1, b01) = bilinear_coefficients(b)?;
                ContrastForm::bilinear(bc - ac, b0 - a0, b1 - a1, b01 - a01, interval)
            }
        })
    }

    fn mean_interval(&self) -> Result<Interval> {
        let values = self.space.outcomes().values();
        let lo = values.iter().min().cloned().unwrap_or_default();
        let hi = values.iter().max().cloned().unwrap_or_default();
        Interval::new(lo, hi)
            .map_err(|_| Error::Precondition("outcome values are all equal".into()))
    }
}

fn bilinear_coefficients(f: &ExtendedForm) -> Result<(Rational, Rational, Rational, Rational)> {
    match f {
        ExtendedForm::Product { c, c0, c1, c01 } => {
            Ok((c.clone(), c0.clone(), c1.clone(), c01.clone()))
        }
        ExtendedForm::Additive { alpha, beta } => Ok((
            alpha.clone(),
            beta[0].clone(),
            beta[1].clone(),
            Rational::zero(),
        )),
        ExtendedForm::Asymmetric { .. } => Err(Error::Precondition(
            "an asymmetric form paired with a smooth one has no closed-form contrast".into(),
        )),
    }
}

/// Low and high outcome indices of a binary, single-covariate, two-decision space.
fn binary_layout(utility: &UtilityTable) -> Result<(usize, usize)> {
    let space = utility.space();
    if space.decisions() != 2 {
        return Err(Error::Precondition(format!(
            "mean-space extensions need two decisions, got {}",
            space.decisions()
        )));
    }
    if space.outcome_count() != 2 {
        return Err(Error::Precondition(format!(
            "mean-space extensions need binary outcomes, got {}",
            space.outcome_count()
        )));
    }
    if space.covariate_count() != 1 {
        return Err(Error::Precondition(
            "mean-space extensions need a single covariate".into(),
        ));
    }
    let lo = space.outcomes().min_index();
    Ok((lo, 1 - lo))
}

/// Reads the table as levels on the three mean orderings. The table must
/// agree on the two tied profiles; otherwise the difference is reported.
pub fn asymmetric_extension(utility: &UtilityTable) -> Result<ExtendedUtility> {
    let (lo, hi) = binary_layout(utility)?;
    let mut forms = Vec::with_capacity(2);
    for d in 0..2 {
        let g = |a: usize, b: usize| utility.get(d, &[a, b], 0).clone();
        let (low_tie, high_tie) = (g(lo, lo), g(hi, hi));
        if low_tie != high_tie {
            return Err(Error::Precondition(format!(
                "decision {d} is not in indicator form: tied profiles give {} and {}, residual {}",
                crate::rational::format_rational(&low_tie),
                crate::rational::format_rational(&high_tie),
                crate::rational::format_rational(&(&high_tie - &low_tie)),
            )));
        }
        forms.push(ExtendedForm::Asymmetric {
            greater: g(hi, lo),
            less: g(lo, hi),
            equal: low_tie,
        });
    }
    ExtendedUtility::new(utility.space(), forms)
}

/// Multilinear extension: expected table utility under independent outcomes
/// with the given means.
pub fn product_extension(utility: &UtilityTable) -> Result<ExtendedUtility> {
    let (lo, hi) = binary_layout(utility)?;
    let outcomes = utility.space().outcomes();
    let (vlo, vhi) = (outcomes.value(lo).clone(), outcomes.value(hi).clone());
    let w = &vhi - &vlo;
    let mut forms = Vec::with_capacity(2);
    for d in 0..2 {
        let g = |a: usize, b: usize| utility.get(d, &[a, b], 0).clone();
        // Coefficients in q = (p − lo)/w, then re-expressed in p.
        let qc = g(lo, lo);
        let q0 = g(hi, lo) - &qc;
        let q1 = g(lo, hi) - &qc;
        let q01 = g(hi, hi) - g(hi, lo) - g(lo, hi) + &qc;
        let w2 = &w * &w;
        let c01 = &q01 / &w2;
        let c0 = &q0 / &w - &q01 * &vlo / &w2;
        let c1 = &q1 / &w - &q01 * &vlo / &w2;
        let c = &qc - (&q0 + &q1) * &vlo / &w + &q01 * &vlo * &vlo / &w2;
        forms.push(ExtendedForm::Product { c, c0, c1, c01 });
    }
    ExtendedUtility::new(utility.space(), forms)
}

pub fn asymmetric_contrast(utility: &UtilityTable) -> Result<ContrastForm> {
    asymmetric_extension(utility)?.contrast()
}

pub fn product_contrast(utility: &UtilityTable) -> Result<ContrastForm> {
    product_extension(utility)?.contrast()
}

fn choice(value: &Rational) -> Option<usize> {
    match sign(value) {
        1 => Some(1),
        -1 => Some(0),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityReport {
    pub means: Vec<Rational>,
    pub asymmetric_contrast: Rational,
    pub product_contrast: Rational,
    pub asymmetric_choice: Option<usize>,
    pub product_choice: Option<usize>,
    /// Couplings with these means, each with its table-based contrast.
    pub couplings: Vec<(State, Rational)>,
    /// Each extension gives one answer on every listed coupling.
    pub invariant: bool,
}

impl AmbiguityReport {
    pub fn choices_differ(&self) -> bool {
        self.asymmetric_choice != self.product_choice
    }
}

/// Compares the two extensions at the means of `state`, and evaluates them
/// again on several couplings sharing those means.
pub fn extension_ambiguity_demo(utility: &UtilityTable, state: &State) -> Result<AmbiguityReport> {
    let asym = asymmetric_extension(utility)?;
    let prod = product_extension(utility)?;
    let means = state.means();
    let contrast = |ext: &ExtendedUtility, s: &State| -> Result<Rational> {
        Ok(ext.value_of_state(1, s)? - ext.value_of_state(0, s)?)
    };
    let asymmetric_contrast = contrast(&asym, state)?;
    let product_contrast = contrast(&prod, state)?;

    let spec = MarginalsSpec::of_state(state)?;
    let bounds = bound_functional(&spec, |p| {
        utility.at(1, p, spec.covariate()) - utility.at(0, p, spec.covariate())
    })?;
    let mut candidates = vec![
        state.clone(),
        spec.independent_coupling(),
        bounds.argmin,
        bounds.argmax,
    ];
    candidates.dedup();
    let mut couplings = Vec::with_capacity(candidates.len());
    let mut invariant = true;
    for s in candidates {
        invariant &=
            contrast(&asym, &s)? == asymmetric_contrast && contrast(&prod, &s)? == product_contrast;
        let table = decision_value(1, &s, utility)? - decision_value(0, &s, utility)?;
        couplings.push((s, table));
    }
    Ok(AmbiguityReport {
        asymmetric_choice: choice(&asymmetric_contrast),
        product_choice: choice(&product_contrast),
        means,
        asymmetric_contrast,
        product_contrast,
        couplings,
        invariant,
    })
}
