//! Two-phase dense simplex method over exact rationals.
//!
//! Bland's rule is used for both entering and leaving variables, so the
//! method terminates on degenerate problems.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<(usize, Q)>,
    rel: Relation,
    rhs: Q,
}

/// Minimize `c·x` subject to linear rows and per-variable bounds.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    cost: Vec<Q>,
    lower: Vec<Option<Q>>,
    upper: Vec<Option<Q>>,
    rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with cost and optional bounds, returning its index.
    pub fn add_var(&mut self, cost: Q, lower: Option<Q>, upper: Option<Q>) -> usize {
        self.cost.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        self.cost.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Q)>, rel: Relation, rhs: Q) {
        self.rows.push(Row { coeffs, rel, rhs });
    }

    pub fn var_count(&self) -> usize {
        self.cost.len()
    }

    pub fn bounds(&self, j: usize) -> (Option<&Q>, Option<&Q>) {
        (self.lower[j].as_ref(), self.upper[j].as_ref())
    }

    pub fn set_bounds(&mut self, j: usize, lower: Option<Q>, upper: Option<Q>) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn cost(&self, j: usize) -> &Q {
        &self.cost[j]
    }

    /// Objective value of a point (no feasibility check).
    pub fn evaluate(&self, x: &[Q]) -> Q {
        self.cost.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Whether `x` satisfies every row and bound exactly.
    pub fn is_feasible(&self, x: &[Q]) -> bool {
        for j in 0..self.var_count() {
            if self.lower[j].as_ref().is_some_and(|l| &x[j] < l) || self.upper[j].as_ref().is_some_and(|u| &x[j] > u) {
                return false;
            }
        }
        self.rows.iter().all(|r| {
            let lhs: Q = r.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
            match r.rel {
                Relation::Le => lhs <= r.rhs,
                Relation::Eq => lhs == r.rhs,
                Relation::Ge => lhs >= r.rhs,
            }
        })
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        StandardForm::build(self)?.map_or(Ok(LpOutcome::Infeasible), |sf| sf.solve(self))
    }
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Debug, Clone)]
struct VarMap {
    offset: Q,
    terms: Vec<(usize, i64)>,
}

struct StandardForm {
    vars: Vec<VarMap>,
    // dense rows over structural columns, with relation and rhs
    rows: Vec<(Vec<Q>, Relation, Q)>,
    cost: Vec<Q>,
    offset_cost: Q,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Result<Option<StandardForm>> {
        let mut vars = Vec::with_capacity(lp.var_count());
        let mut ncols = 0;
        let mut upper_rows = Vec::new();
        for j in 0..lp.var_count() {
            let m = match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), u) => {
                    if let Some(u) = u {
                        if u < l {
                            return Ok(None);
                        }
                        upper_rows.push((ncols, u - l));
                    }
                    ncols += 1;
                    VarMap { offset: l.clone(), terms: vec![(ncols - 1, 1)] }
                }
                (None, Some(u)) => {
                    ncols += 1;
                    VarMap { offset: u.clone(), terms: vec![(ncols - 1, -1)] }
                }
                (None, None) => {
                    ncols += 2;
                    VarMap { offset: Q::zero(), terms: vec![(ncols - 2, 1), (ncols - 1, -1)] }
                }
            };
            vars.push(m);
        }
        let mut cost = vec![Q::zero(); ncols];
        let mut offset_cost = Q::zero();
        for (j, m) in vars.iter().enumerate() {
            offset_cost += &lp.cost[j] * &m.offset;
            for &(c, s) in &m.terms {
                cost[c] = if s > 0 { lp.cost[j].clone() } else { -lp.cost[j].clone() };
            }
        }
        let mut rows = Vec::with_capacity(lp.rows.len() + upper_rows.len());
        for r in &lp.rows {
            let mut dense = vec![Q::zero(); ncols];
            let mut rhs = r.rhs.clone();
            for (j, a) in &r.coeffs {
                if a.is_zero() {
                    continue;
                }
                let m = &vars[*j];
                rhs -= a * &m.offset;
                for &(c, s) in &m.terms {
                    if s > 0 {
                        dense[c] += a;
                    } else {
                        dense[c] -= a;
                    }
                }
            }
            rows.push((dense, r.rel, rhs));
        }
        for (c, u) in upper_rows {
            let mut dense = vec![Q::zero(); ncols];
            dense[c] = Q::one();
            rows.push((dense, Relation::Le, u));
        }
        Ok(Some(StandardForm { vars, rows, cost, offset_cost }))
    }

    fn solve(self, lp: &LinearProgram) -> Result<LpOutcome> {
        let ncols = self.cost.len();
        let m = self.rows.len();
        let nslack = self.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        // columns: structural | slacks | artificials | rhs
        let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut artificial_cols = Vec::new();
        let mut next_slack = ncols;
        let art_start = ncols + nslack;
        let mut next_art = art_start;
        let mut row_needs_art = Vec::with_capacity(m);
        for (dense, rel, rhs) in &self.rows {
            let mut row = vec![Q::zero(); art_start];
            row[..ncols].clone_from_slice(dense);
            let mut rhs = rhs.clone();
            let mut slack_col = None;
            if *rel != Relation::Eq {
                row[next_slack] = if *rel == Relation::Le { Q::one() } else { -Q::one() };
                slack_col = Some(next_slack);
                next_slack += 1;
            }
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                rhs = -rhs;
            }
            let unit_slack = slack_col.filter(|&c| row[c].is_one());
            row_needs_art.push(unit_slack.is_none());
            basis.push(unit_slack.unwrap_or(usize::MAX));
            row.push(rhs);
            tab.push(row);
        }
        let nart = row_needs_art.iter().filter(|&&b| b).count();
        let width = art_start + nart;
        for (i, row) in tab.iter_mut().enumerate() {
            let rhs = row.pop().unwrap();
            row.resize(width, Q::zero());
            if row_needs_art[i] {
                row[next_art] = Q::one();
                basis[i] = next_art;
                artificial_cols.push(next_art);
                next_art += 1;
            }
            row.push(rhs);
        }

        let mut phase1_cost = vec![Q::zero(); width];
        for &a in &artificial_cols {
            phase1_cost[a] = Q::one();
        }
        let allowed_all = vec![true; width];
        if nart > 0 {
            let bounded = run_simplex(&mut tab, &mut basis, &phase1_cost, &allowed_all)?;
            debug_assert!(bounded);
            let infeas: Q = basis.iter().enumerate().filter(|(_, &b)| b >= art_start).map(|(i, _)| tab[i][width].clone()).sum();
            if infeas.is_positive() {
                return Ok(LpOutcome::Infeasible);
            }
            // drive zero-level artificials out of the basis
            let mut i = 0;
            while i < tab.len() {
                if basis[i] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| !tab[i][j].is_zero()) {
                        pivot(&mut tab, &mut basis, i, j);
                    } else {
                        tab.remove(i);
                        basis.remove(i);
                        continue;
                    }
                }
                i += 1;
            }
        }
        let mut cost = vec![Q::zero(); width];
        cost[..ncols].clone_from_slice(&self.cost);
        let allowed: Vec<bool> = (0..width).map(|j| j < art_start).collect();
        if !run_simplex(&mut tab, &mut basis, &cost, &allowed)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut y = vec![Q::zero(); width];
        for (i, &b) in basis.iter().enumerate() {
            y[b] = tab[i][width].clone();
        }
        let x: Vec<Q> = self
            .vars
            .iter()
            .map(|m| {
                let mut v = m.offset.clone();
                for &(c, s) in &m.terms {
                    if s > 0 {
                        v += &y[c];
                    } else {
                        v -= &y[c];
                    }
                }
                v
            })
            .collect();
        let value = lp.evaluate(&x);
        debug_assert_eq!(value, self.offset_cost.clone() + self.cost.iter().zip(&y).map(|(c, v)| c * v).sum::<Q>());
        if !lp.is_feasible(&x) {
            return Err(Error::Solver("simplex returned an infeasible point".into()));
        }
        Ok(LpOutcome::Optimal { value, x })
    }
}

fn pivot(tab: &mut [Vec<Q>], basis: &mut [usize], r: usize, c: usize) {
    let p = tab[r][c].clone();
    if !p.is_one() {
        for v in tab[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
    }
    let prow = tab[r].clone();
    let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &j in &nz {
            let d = &f * &prow[j];
            row[j] -= d;
        }
    }
    basis[r] = c;
}

/// Runs the simplex loop; returns `false` if the objective is unbounded below.
fn run_simplex(tab: &mut [Vec<Q>], basis: &mut [usize], cost: &[Q], allowed: &[bool]) -> Result<bool> {
    let width = cost.len();
    let mut is_basic = vec![false; width];
    for &b in basis.iter() {
        is_basic[b] = true;
    }
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > 1_000_000 {
            return Err(Error::Solver("simplex iteration limit reached".into()));
        }
        let entering = (0..width).filter(|&j| allowed[j] && !is_basic[j]).find(|&j| {
            let mut r = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() && !tab[i][j].is_zero() {
                    r -= &cost[b] * &tab[i][j];
                }
            }
            r.is_negative()
        });
        let Some(c) = entering else {
            return Ok(true);
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..tab.len() {
            if tab[i][c].is_positive() {
                let ratio = &tab[i][width] / &tab[i][c];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Ok(false);
        };
        is_basic[basis[r]] = false;
        is_basic[c] = true;
        pivot(tab, basis, r, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{q_frac, q_int};

    #[test]
    fn small_textbook_lp() {
        // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q_int(-3), Some(q_int(0)), Some(q_int(3)));
        let y = lp.add_var(q_int(-2), Some(q_int(0)), None);
        lp.add_row(vec![(x, q_int(1)), (y, q_int(1))], Relation::Le, q_int(4));
        lp.add_row(vec![(x, q_int(1)), (y, q_int(3))], Relation::Le, q_int(6));
        match lp.solve().unwrap() {
            LpOutcome::Optimal { value, x: sol } => {
                assert_eq!(value, q_int(-11));
                assert_eq!(sol, vec![q_int(3), q_int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_and_equalities() {
        // min |t| style: minimize a + b with x = a - b, x = -5/2
        let mut lp = LinearProgram::new();
        let a = lp.add_var(q_int(1), Some(q_int(0)), None);
        let b = lp.add_var(q_int(1), Some(q_int(0)), None);
        let x = lp.add_var(q_int(0), None, None);
        lp.add_row(vec![(x, q_int(1)), (a, q_int(-1)), (b, q_int(1))], Relation::Eq, q_int(0));
        lp.add_row(vec![(x, q_int(1))], Relation::Eq, q_frac(-5, 2));
        let LpOutcome::Optimal { value, .. } = lp.solve().unwrap() else { panic!() };
        assert_eq!(value, q_frac(5, 2));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q_int(1), Some(q_int(0)), None);
        lp.add_row(vec![(x, q_int(1))], Relation::Le, q_int(-1));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new();
        lp.add_var(q_int(-1), Some(q_int(0)), None);
        assert_eq!(lp.solve().unwrap(), LpOutcome::Unbounded);
        let mut lp = LinearProgram::new();
        lp.add_var(q_int(1), Some(q_int(2)), Some(q_int(1)));
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q_int(1), Some(q_int(0)), None);
        let y = lp.add_var(q_int(2), Some(q_int(0)), None);
        lp.add_row(vec![(x, q_int(1)), (y, q_int(1))], Relation::Eq, q_int(3));
        lp.add_row(vec![(x, q_int(2)), (y, q_int(2))], Relation::Eq, q_int(6));
        lp.add_row(vec![(y, q_int(1))], Relation::Ge, q_int(1));
        let LpOutcome::Optimal { value, x: sol } = lp.solve().unwrap() else { panic!() };
        assert_eq!(value, q_int(4));
        assert_eq!(sol, vec![q_int(2), q_int(1)]);
    }
}
