use num_traits::{One, Signed, Zero};

use super::contrast::{
    check_crossing_assumptions, Assumption, ContrastForm, ContrastKind, Interval,
};
use crate::rational::{half, sign};
use crate::{Error, Execution, Rational, Result};

/// Bisection stops once the bracket is narrower than `2^-BISECTION_BITS`.
pub const BISECTION_BITS: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Phi0Rule {
    Identity,
    /// Crossing point of the slice `Γ(p₀, ·)`.
    Crossing(ContrastForm),
}

/// Monotone pair with `sign Γ(p₀,p₁) = sign(φ₁(p₁) − φ₀(p₀))`; `φ₁` is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPair {
    pub interval: Interval,
    pub rule: Phi0Rule,
}

/// A value of `φ₀`; bisected roots carry their final bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiValue {
    Exact(Rational),
    Bracket { lo: Rational, hi: Rational },
}

impl PhiValue {
    pub fn point(&self) -> Rational {
        match self {
            PhiValue::Exact(v) => v.clone(),
            PhiValue::Bracket { lo, hi } => (lo + hi) * half(),
        }
    }

    /// Sign of `p₁ − φ₀`, `None` when `p₁` falls inside a bisection bracket.
    pub fn sign_against(&self, p1: &Rational) -> Option<i8> {
        match self {
            PhiValue::Exact(v) => Some(sign(&(p1 - v))),
            PhiValue::Bracket { lo, hi } => {
                if p1 < lo {
                    Some(-1)
                } else if p1 > hi {
                    Some(1)
                } else {
                    None
                }
            }
        }
    }
}

impl PhiPair {
    pub fn identity(interval: Interval) -> Self {
        PhiPair {
            interval,
            rule: Phi0Rule::Identity,
        }
    }

    pub fn lower_sentinel(&self) -> Rational {
        &self.interval.lo - Rational::one()
    }

    pub fn upper_sentinel(&self) -> Rational {
        &self.interval.hi + Rational::one()
    }

    pub fn phi1(&self, p1: &Rational) -> Rational {
        p1.clone()
    }

    pub fn phi0(&self, p0: &Rational) -> PhiValue {
        let form = match &self.rule {
            Phi0Rule::Identity => return PhiValue::Exact(p0.clone()),
            Phi0Rule::Crossing(form) => form,
        };
        let (lo, hi) = (&self.interval.lo, &self.interval.hi);
        if form.eval(p0, lo).is_positive() {
            return PhiValue::Exact(self.lower_sentinel());
        }
        if form.eval(p0, hi).is_negative() {
            return PhiValue::Exact(self.upper_sentinel());
        }
        match &form.kind {
            ContrastKind::Bilinear { c, c0, c1, c01 } => {
                // Unique crossing rules out a zero slope here.
                PhiValue::Exact(-(c + c0 * p0) / (c1 + c01 * p0))
            }
            ContrastKind::Sign { .. } => PhiValue::Exact(p0.clone()),
            ContrastKind::Grid { .. } => bisect(|p1| form.eval(p0, p1), lo.clone(), hi.clone()),
        }
    }

    pub fn tabulate(&self, points: &[Rational]) -> Vec<(Rational, PhiValue)> {
        points.iter().map(|p| (p.clone(), self.phi0(p))).collect()
    }
}

fn bisect(f: impl Fn(&Rational) -> Rational, mut lo: Rational, mut hi: Rational) -> PhiValue {
    if f(&lo).is_zero() {
        return PhiValue::Exact(lo);
    }
    if f(&hi).is_zero() {
        return PhiValue::Exact(hi);
    }
    let tol = Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(BISECTION_BITS));
    while &hi - &lo > tol {
        let mid = (&lo + &hi) * half();
        let v = f(&mid);
        if v.is_zero() {
            return PhiValue::Exact(mid);
        }
        if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    PhiValue::Bracket { lo, hi }
}

/// Builds the pair after checking the crossing assumptions on a 1/64 sweep.
pub fn build_phi(form: &ContrastForm) -> Result<PhiPair> {
    let step = form.interval.width() / Rational::from_integer(64.into());
    let report = check_crossing_assumptions(form, &step)?;
    if let Some(v) = report.violations.first() {
        let which = match v.assumption {
            Assumption::BoundedMeans => "bounded means",
            Assumption::DecisionMonotonicity => "decision monotonicity",
            Assumption::UniqueCrossing => "unique crossing",
        };
        return Err(Error::Precondition(format!("{which} fails: {}", v.detail)));
    }
    Ok(PhiPair {
        interval: form.interval.clone(),
        rule: Phi0Rule::Crossing(form.clone()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceMismatch {
    pub p0: Rational,
    pub p1: Rational,
    pub contrast_sign: i8,
    pub phi_sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub checked: usize,
    pub mismatches: usize,
    /// Points inside a bisection bracket, where no sign is claimed.
    pub indeterminate: usize,
    /// Lexicographically first by `(p₀, p₁)`.
    pub first_mismatch: Option<EquivalenceMismatch>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }
}

pub fn check_equivalence(
    form: &ContrastForm,
    phi: &PhiPair,
    grid_step: &Rational,
) -> Result<EquivalenceReport> {
    check_equivalence_with(form, phi, grid_step, Execution::default())
}

pub fn check_equivalence_with(
    form: &ContrastForm,
    phi: &PhiPair,
    grid_step: &Rational,
    exec: Execution,
) -> Result<EquivalenceReport> {
    let lattice = form.interval.lattice(grid_step)?;
    let n = lattice.len();
    // Per row: (mismatches, indeterminate, first mismatch).
    let rows = exec.map(n, |i| {
        let p0 = &lattice[i];
        let phi0 = phi.phi0(p0);
        let mut bad = 0;
        let mut unknown = 0;
        let mut first = None;
        for p1 in &lattice {
            let Some(phi_sign) = phi0.sign_against(&phi.phi1(p1)) else {
                unknown += 1;
                continue;
            };
            let contrast_sign = sign(&form.eval(p0, p1));
            if contrast_sign != phi_sign {
                bad += 1;
                first.get_or_insert_with(|| EquivalenceMismatch {
                    p0: p0.clone(),
                    p1: p1.clone(),
                    contrast_sign,
                    phi_sign,
                });
            }
        }
        (bad, unknown, first)
    });
    let mismatches = rows.iter().map(|r| r.0).sum();
    let indeterminate = rows.iter().map(|r| r.1).sum();
    let first_mismatch = rows.into_iter().find_map(|r| r.2);
    Ok(EquivalenceReport {
        checked: n * n,
        mismatches,
        indeterminate,
        first_mismatch,
    })
}

/// First grid pair `p' < p''` with `φ₀(p') > φ₀(p'')`.
pub fn phi0_monotonicity(
    phi: &PhiPair,
    grid_step: &Rational,
) -> Result<Option<(Rational, Rational)>> {
    let lattice = phi.interval.lattice(grid_step)?;
    let values: Vec<Rational> = lattice.iter().map(|p| phi.phi0(p).point()).collect();
    for i in 0..lattice.len() {
        for j in i + 1..lattice.len() {
            if values[i] > values[j] {
                return Ok(Some((lattice[i].clone(), lattice[j].clone())));
            }
        }
    }
    Ok(None)
}
