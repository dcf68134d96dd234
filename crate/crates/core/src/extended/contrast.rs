use num_traits::{One, Signed, Zero};

use crate::rational::{half, sign};
use crate::{Error, Execution, Rational, Result};

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidArgument("interval needs lo < hi".into()));
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn contains(&self, p: &Rational) -> bool {
        &self.lo <= p && p <= &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `lo, lo + step, …`, always ending exactly at `hi`.
    pub fn lattice(&self, step: &Rational) -> Result<Vec<Rational>> {
        if !step.is_positive() {
            return Err(Error::InvalidArgument("grid step must be positive".into()));
        }
        let mut out = Vec::new();
        let mut p = self.lo.clone();
        while p < self.hi {
            out.push(p.clone());
            p += step;
        }
        out.push(self.hi.clone());
        Ok(out)
    }
}

/// Closed-form or tabulated contrast `Γ(p₀, p₁) = ũ(1; p) − ũ(0; p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContrastKind {
    /// `u0·1{p₀>p₁} + u1·1{p₀<p₁} + u01·1{p₀=p₁}`.
    Sign {
        u0: Rational,
        u1: Rational,
        u01: Rational,
    },
    /// `c + c0·p₀ + c1·p₁ + c01·p₀p₁`.
    Bilinear {
        c: Rational,
        c0: Rational,
        c1: Rational,
        c01: Rational,
    },
    /// Values at `points × points`, `values[i][j] = Γ(points[i], points[j])`,
    /// interpolated bilinearly in between.
    Grid {
        points: Vec<Rational>,
        values: Vec<Vec<Rational>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContrastForm {
    pub kind: ContrastKind,
    pub interval: Interval,
}

impl ContrastForm {
    pub fn sign(u0: Rational, u1: Rational, u01: Rational, interval: Interval) -> Self {
        ContrastForm {
            kind: ContrastKind::Sign { u0, u1, u01 },
            interval,
        }
    }

    pub fn bilinear(
        c: Rational,
        c0: Rational,
        c1: Rational,
        c01: Rational,
        interval: Interval,
    ) -> Self {
        ContrastForm {
            kind: ContrastKind::Bilinear { c, c0, c1, c01 },
            interval,
        }
    }

    /// Grid form; `points` must be strictly increasing from `lo` to `hi`.
    pub fn grid(points: Vec<Rational>, values: Vec<Vec<Rational>>) -> Result<Self> {
        if points.len() < 2 || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "grid points must increase strictly".into(),
            ));
        }
        if values.len() != points.len() || values.iter().any(|row| row.len() != points.len()) {
            return Err(Error::InvalidArgument(
                "grid values must be square over the points".into(),
            ));
        }
        let interval = Interval::new(points[0].clone(), points[points.len() - 1].clone())?;
        Ok(ContrastForm {
            kind: ContrastKind::Grid { points, values },
            interval,
        })
    }

    /// Tabulates any form on the lattice of `step`.
    pub fn tabulate(&self, step: &Rational) -> Result<Self> {
        let points = self.interval.lattice(step)?;
        let values = points
            .iter()
            .map(|p0| points.iter().map(|p1| self.eval(p0, p1)).collect())
            .collect();
        Self::grid(points, values)
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.kind, ContrastKind::Grid { .. })
    }

    /// Exact value; grid forms are interpolated bilinearly and clamped to `I`.
    pub fn eval(&self, p0: &Rational, p1: &Rational) -> Rational {
        match &self.kind {
            ContrastKind::Sign { u0, u1, u01 } => match p0.cmp(p1) {
                std::cmp::Ordering::Greater => u0.clone(),
                std::cmp::Ordering::Less => u1.clone(),
                std::cmp::Ordering::Equal => u01.clone(),
            },
            ContrastKind::Bilinear { c, c0, c1, c01 } => c + c0 * p0 + c1 * p1 + c01 * p0 * p1,
            ContrastKind::Grid { points, values } => {
                let (i, s) = locate(points, p0);
                let (j, t) = locate(points, p1);
                let one = Rational::one();
                let v = |a: usize, b: usize| &values[a][b];
                let (i2, j2) = ((i + 1).min(points.len() - 1), (j + 1).min(points.len() - 1));
                (&one - &s) * (&one - &t) * v(i, j)
                    + (&one - &s) * &t * v(i, j2)
                    + &s * (&one - &t) * v(i2, j)
                    + &s * &t * v(i2, j2)
            }
        }
    }

    /// Recommended decision: `Some(1)` for `Γ > 0`, `Some(0)` for `Γ < 0`.
    pub fn decision(&self, p0: &Rational, p1: &Rational) -> Option<usize> {
        match sign(&self.eval(p0, p1)) {
            1 => Some(1),
            -1 => Some(0),
            _ => None,
        }
    }
}

/// Cell index and fractional position of `p` on a sorted grid.
fn locate(points: &[Rational], p: &Rational) -> (usize, Rational) {
    let last = points.len() - 1;
    if p <= &points[0] {
        return (0, Rational::zero());
    }
    if p >= &points[last] {
        return (last, Rational::zero());
    }
    let i = points.partition_point(|q| q <= p) - 1;
    let t = (p - &points[i]) / (&points[i + 1] - &points[i]);
    (i, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    BoundedMeans,
    DecisionMonotonicity,
    UniqueCrossing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingViolation {
    pub assumption: Assumption,
    pub p0: Rational,
    pub p1: Option<Rational>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingReport {
    /// Closed forms are decided by exact coefficient analysis.
    pub exact: bool,
    pub bounded_means: bool,
    pub monotone: bool,
    pub unique_crossing: bool,
    pub checked_points: usize,
    pub violations: Vec<CrossingViolation>,
}

impl CrossingReport {
    pub fn passes(&self) -> bool {
        self.bounded_means && self.monotone && self.unique_crossing
    }
}

/// Verifies bounded means, decision monotonicity and unique crossing.
///
/// Closed forms are analysed exactly; every form is also swept on the
/// lattice of `grid_step`, where sign or slope violations are reported with
/// their coordinates.
pub fn check_crossing_assumptions(
    form: &ContrastForm,
    grid_step: &Rational,
) -> Result<CrossingReport> {
    check_crossing_with(form, grid_step, Execution::default())
}

pub fn check_crossing_with(
    form: &ContrastForm,
    grid_step: &Rational,
    exec: Execution,
) -> Result<CrossingReport> {
    let lattice = form.interval.lattice(grid_step)?;
    let mut violations = Vec::new();
    match &form.kind {
        ContrastKind::Sign { u0, u1, u01 } => sign_analysis(form, u0, u1, u01, &mut violations),
        ContrastKind::Bilinear { c, c0, c1, c01 } => {
            bilinear_analysis(form, c, c0, c1, c01, &mut violations)
        }
        ContrastKind::Grid { points, values } => grid_analysis(points, values, &mut violations),
    }
    if !form.is_closed_form() || violations.is_empty() {
        violations.extend(sweep(form, &lattice, exec));
    }
    let has = |a| {
        violations
            .iter()
            .any(|v: &CrossingViolation| v.assumption == a)
    };
    Ok(CrossingReport {
        exact: form.is_closed_form(),
        bounded_means: form.interval.lo < form.interval.hi,
        monotone: !has(Assumption::DecisionMonotonicity),
        unique_crossing: !has(Assumption::UniqueCrossing),
        checked_points: lattice.len() * lattice.len(),
        violations,
    })
}

fn violation(
    assumption: Assumption,
    p0: &Rational,
    p1: Option<&Rational>,
    detail: impl Into<String>,
) -> CrossingViolation {
    CrossingViolation {
        assumption,
        p0: p0.clone(),
        p1: p1.cloned(),
        detail: detail.into(),
    }
}

fn sign_analysis(
    form: &ContrastForm,
    u0: &Rational,
    u1: &Rational,
    u01: &Rational,
    out: &mut Vec<CrossingViolation>,
) {
    let mid = (&form.interval.lo + &form.interval.hi) * half();
    if !(u0 <= u01 && u01 <= u1) {
        out.push(violation(
            Assumption::DecisionMonotonicity,
            &mid,
            None,
            "sign form needs u0 <= u01 <= u1",
        ));
    }
    if u0.is_zero() || u1.is_zero() {
        out.push(violation(
            Assumption::UniqueCrossing,
            &mid,
            None,
            "a zero off-diagonal level gives a continuum of roots",
        ));
    }
    if u0.is_negative() && u1.is_positive() && !u01.is_zero() {
        out.push(violation(
            Assumption::UniqueCrossing,
            &mid,
            Some(&mid),
            "contrast changes sign on the diagonal without a root",
        ));
    }
}

fn bilinear_analysis(
    form: &ContrastForm,
    c: &Rational,
    c0: &Rational,
    c1: &Rational,
    c01: &Rational,
    out: &mut Vec<CrossingViolation>,
) {
    let iv = &form.interval;
    // Slopes are affine in the other mean, so endpoint signs decide them.
    for p in [&iv.lo, &iv.hi] {
        if (c1 + c01 * p).is_negative() {
            out.push(violation(
                Assumption::DecisionMonotonicity,
                p,
                None,
                "decreasing in p1",
            ));
        }
        if (c0 + c01 * p).is_positive() {
            out.push(violation(
                Assumption::DecisionMonotonicity,
                &iv.lo,
                Some(p),
                "increasing in p0",
            ));
        }
    }
    // A p1-slice has several roots only where it is identically zero.
    let flat = |p0: &Rational| (c1 + c01 * p0).is_zero() && (c + c0 * p0).is_zero();
    let candidate = if !c01.is_zero() {
        Some(-(c1 / c01))
    } else if c1.is_zero() {
        if c0.is_zero() {
            Some(iv.lo.clone())
        } else {
            Some(-(c / c0))
        }
    } else {
        None
    };
    if let Some(p0) = candidate.filter(|p| iv.contains(p) && flat(p)) {
        out.push(violation(
            Assumption::UniqueCrossing,
            &p0,
            None,
            "contrast vanishes on the whole slice",
        ));
    }
}

fn grid_analysis(points: &[Rational], values: &[Vec<Rational>], out: &mut Vec<CrossingViolation>) {
    let n = points.len();
    for i in 0..n {
        for j in 0..n {
            if j + 1 < n {
                if values[i][j] > values[i][j + 1] {
                    out.push(violation(
                        Assumption::DecisionMonotonicity,
                        &points[i],
                        Some(&points[j]),
                        "decreasing in p1",
                    ));
                }
                if values[i][j].is_zero() && values[i][j + 1].is_zero() {
                    out.push(violation(
                        Assumption::UniqueCrossing,
                        &points[i],
                        Some(&points[j]),
                        "zero on a whole grid segment",
                    ));
                }
            }
            if i + 1 < n && values[i][j] < values[i + 1][j] {
                out.push(violation(
                    Assumption::DecisionMonotonicity,
                    &points[i],
                    Some(&points[j]),
                    "increasing in p0",
                ));
            }
        }
    }
}

/// Adjacent-lattice comparisons of the evaluated contrast.
fn sweep(form: &ContrastForm, lattice: &[Rational], exec: Execution) -> Vec<CrossingViolation> {
    let n = lattice.len();
    let rows = exec.map(n, |i| {
        let row: Vec<Rational> = lattice
            .iter()
            .map(|p1| form.eval(&lattice[i], p1))
            .collect();
        row
    });
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if j + 1 < n && rows[i][j] > rows[i][j + 1] {
                out.push(violation(
                    Assumption::DecisionMonotonicity,
                    &lattice[i],
                    Some(&lattice[j]),
                    "decreasing in p1 on the sweep",
                ));
            }
            if i + 1 < n && rows[i][j] < rows[i + 1][j] {
                out.push(violation(
                    Assumption::DecisionMonotonicity,
                    &lattice[i],
                    Some(&lattice[j]),
                    "increasing in p0 on the sweep",
                ));
            }
        }
        if let Some(j) =
            (0..n.saturating_sub(1)).find(|&j| rows[i][j].is_zero() && rows[i][j + 1].is_zero())
        {
            out.push(violation(
                Assumption::UniqueCrossing,
                &lattice[i],
                Some(&lattice[j]),
                "two adjacent roots on the sweep",
            ));
        }
    }
    out
}
