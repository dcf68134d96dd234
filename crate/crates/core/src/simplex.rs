//! Exact rational simplex for `min/max c·x` subject to `A x = b`, `x ≥ 0`.
//!
//! Two phases on a dense tableau with Bland's rule, so the pivot sequence and
//! the reported optimal vertex are deterministic. Redundant equality rows are
//! detected after phase one and dropped.

use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub objective: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub value: Rational,
    /// A basic optimal solution.
    pub x: Vec<Rational>,
    pub pivots: usize,
}

impl LinearProgram {
    pub fn new(variables: usize) -> Self {
        LinearProgram {
            rows: Vec::new(),
            rhs: Vec::new(),
            objective: vec![Rational::zero(); variables],
        }
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn add_equality(&mut self, row: Vec<Rational>, rhs: Rational) {
        assert_eq!(row.len(), self.variables(), "row length");
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn solve(&self, sense: Sense) -> Result<Solution> {
        let cost: Vec<Rational> = match sense {
            Sense::Minimize => self.objective.clone(),
            Sense::Maximize => self.objective.iter().map(|c| -c).collect(),
        };
        let mut sol = Tableau::phase_one(self)?.phase_two(&cost)?;
        if sense == Sense::Maximize {
            sol.value = -sol.value;
        }
        Ok(sol)
    }
}

struct Tableau {
    /// `m` constraint rows of width `width + 1`; the last entry is the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Structural variable count; columns past it are artificial.
    n: usize,
    /// Structural plus artificial columns.
    width: usize,
    pivots: usize,
    reduced: Vec<Rational>,
}

impl Tableau {
    fn phase_one(lp: &LinearProgram) -> Result<Self> {
        let n = lp.variables();
        let m = lp.rows.len();
        let width = n + m;
        let mut rows = Vec::with_capacity(m);
        for (i, (row, b)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
            let flip = b.is_negative();
            let mut r: Vec<Rational> = row
                .iter()
                .map(|a| if flip { -a } else { a.clone() })
                .collect();
            r.resize(width, Rational::zero());
            r[n + i] = Rational::one();
            r.push(if flip { -b } else { b.clone() });
            rows.push(r);
        }
        let mut t = Tableau {
            rows,
            basis: (n..n + m).collect(),
            n,
            width,
            pivots: 0,
            reduced: Vec::new(),
        };
        let mut cost = vec![Rational::zero(); width];
        for c in &mut cost[n..] {
            *c = Rational::one();
        }
        t.optimize(&cost, width)?;
        let infeasibility: Rational = t
            .basis
            .iter()
            .zip(&t.rows)
            .filter(|(&j, _)| j >= n)
            .map(|(_, r)| r[width].clone())
            .sum();
        if infeasibility.is_positive() {
            return Err(Error::Infeasible);
        }
        t.drive_out_artificials();
        Ok(t)
    }

    fn phase_two(mut self, cost: &[Rational]) -> Result<Solution> {
        self.optimize(cost, self.n)?;
        let width = self.width;
        let mut x = vec![Rational::zero(); self.n];
        for (row, &j) in self.rows.iter().zip(&self.basis) {
            x[j] = row[width].clone();
        }
        let value = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(Solution {
            value,
            x,
            pivots: self.pivots,
        })
    }

    /// Minimizes `cost · x` letting only columns `< allowed` enter.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Result<()> {
        let width = self.width;
        // Reduced costs c_j − c_B B⁻¹ A_j, kept current by `pivot`.
        let mut reduced: Vec<Rational> = (0..width)
            .map(|j| cost.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if let Some(cb) = cost.get(b).filter(|c| !c.is_zero()) {
                for (r, a) in reduced.iter_mut().zip(row) {
                    if !a.is_zero() {
                        *r -= cb * a;
                    }
                }
            }
        }
        self.reduced = reduced;
        loop {
            let Some(j) = (0..allowed).find(|&j| self.reduced[j].is_negative()) else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = &row[width] / &row[j];
                    let better = match &leaving {
                        None => true,
                        Some((k, best)) => {
                            ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((i, _)) = leaving else {
                return Err(Error::Unbounded);
            };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&k| !pivot_row[k].is_zero())
            .collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &k in &support {
                row[k] -= &factor * &pivot_row[k];
            }
        }
        if c < self.reduced.len() && !self.reduced[c].is_zero() {
            let factor = self.reduced[c].clone();
            let len = self.reduced.len();
            for &k in support.iter().take_while(|&&k| k < len) {
                self.reduced[k] -= &factor * &pivot_row[k];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Pivots basic artificials (at zero level) onto structural columns and
    /// removes rows where that is impossible, which are linearly dependent.
    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.n {
                if let Some(j) = (0..self.n).find(|&j| !self.rows[i][j].is_zero()) {
                    self.pivot(i, j);
                } else {
                    self.rows.remove(i);
                    self.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn lp(rows: &[&[i64]], rhs: &[i64], obj: &[i64]) -> LinearProgram {
        let mut p = LinearProgram::new(obj.len());
        p.objective = obj.iter().map(|&v| int(v)).collect();
        for (r, &b) in rows.iter().zip(rhs) {
            p.add_equality(r.iter().map(|&v| int(v)).collect(), int(b));
        }
        p
    }

    #[test]
    fn small_program_both_senses() {
        // x + y + s = 4, x + 3y + t = 6; optimize x + 2y.
        let p = lp(&[&[1, 1, 1, 0], &[1, 3, 0, 1]], &[4, 6], &[1, 2, 0, 0]);
        let max = p.solve(Sense::Maximize).unwrap();
        assert_eq!(max.value, int(5));
        assert_eq!(max.x[..2], [int(3), int(1)]);
        assert_eq!(p.solve(Sense::Minimize).unwrap().value, int(0));
    }

    #[test]
    fn infeasible_unbounded_and_redundant() {
        assert_eq!(
            lp(&[&[1, 1]], &[-1], &[0, 0]).solve(Sense::Minimize),
            Err(Error::Infeasible)
        );
        assert_eq!(
            lp(&[&[1, -1]], &[0], &[1, 0]).solve(Sense::Maximize),
            Err(Error::Unbounded)
        );
        let p = lp(
            &[&[1, 1, 0], &[2, 2, 0], &[0, 1, 1]],
            &[1, 2, 1],
            &[0, 1, 0],
        );
        let s = p.solve(Sense::Maximize).unwrap();
        assert_eq!(s.value, int(1));
        let mut q = p.clone();
        q.objective = vec![rat(1, 3), int(0), int(0)];
        assert_eq!(q.solve(Sense::Maximize).unwrap().value, rat(1, 3));
    }

    #[test]
    fn empty_constraint_set() {
        let p = lp(&[], &[], &[1, 2]);
        assert_eq!(p.solve(Sense::Minimize).unwrap().value, int(0));
        assert_eq!(p.solve(Sense::Maximize), Err(Error::Unbounded));
    }
}
