//! Depth-first branch-and-bound on top of the exact simplex method.

use num_traits::One;

use super::lp::{LinearProgram, LpOutcome};
use crate::error::{Error, Result};
use crate::number::Q;

#[derive(Debug, Clone, PartialEq)]
pub struct IlpSolution {
    pub value: Q,
    pub x: Vec<Q>,
    pub nodes: usize,
}

/// Default cap on explored branch-and-bound nodes.
pub const DEFAULT_NODE_LIMIT: usize = 200_000;

/// Minimizes `lp` with the marked variables restricted to integers.
///
/// `incumbent` is a known feasible integer point used for pruning. Returns
/// `None` when no integer point exists.
pub fn solve_ilp(
    lp: &LinearProgram,
    integer: &[bool],
    incumbent: Option<Vec<Q>>,
    node_limit: usize,
) -> Result<Option<IlpSolution>> {
    let mut best: Option<(Q, Vec<Q>)> = None;
    if let Some(x) = incumbent {
        if !lp.is_feasible(&x) || integer.iter().zip(&x).any(|(&i, v)| i && !v.is_integer()) {
            return Err(Error::Solver("incumbent is not an integer-feasible point".into()));
        }
        best = Some((lp.evaluate(&x), x));
    }
    let mut stack = vec![lp.clone()];
    let mut nodes = 0usize;
    while let Some(node) = stack.pop() {
        nodes += 1;
        if nodes > node_limit {
            return Err(Error::Solver(format!("branch-and-bound node limit {node_limit} reached")));
        }
        let (value, x) = match node.solve()? {
            LpOutcome::Optimal { value, x } => (value, x),
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => return Err(Error::Solver("relaxation unbounded".into())),
        };
        if best.as_ref().is_some_and(|(b, _)| &value >= b) {
            continue;
        }
        let frac = (0..x.len()).find(|&j| integer[j] && !x[j].is_integer());
        let Some(j) = frac else {
            best = Some((value, x));
            continue;
        };
        let fl = x[j].floor();
        let (lo, hi) = node.bounds(j);
        let (lo, hi) = (lo.cloned(), hi.cloned());
        let mut down = node.clone();
        down.set_bounds(j, lo.clone(), Some(fl.clone()));
        let mut up = node;
        up.set_bounds(j, Some(fl + Q::one()), hi);
        // explore the side nearer the fractional value first
        if (&x[j] - x[j].floor()) * Q::from_integer(2.into()) < Q::one() {
            stack.push(up);
            stack.push(down);
        } else {
            stack.push(down);
            stack.push(up);
        }
    }
    Ok(best.map(|(value, x)| IlpSolution { value, x, nodes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{q_frac, q_int};
    use crate::optimize::lp::Relation;

    #[test]
    fn knapsack_like() {
        // max 5x + 4y s.t. 6x + 4y <= 24, x + 2y <= 6; LP optimum is fractional
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q_int(-5), Some(q_int(0)), None);
        let y = lp.add_var(q_int(-4), Some(q_int(0)), None);
        lp.add_row(vec![(x, q_int(6)), (y, q_int(4))], Relation::Le, q_int(24));
        lp.add_row(vec![(x, q_int(1)), (y, q_int(2))], Relation::Le, q_int(6));
        let LpOutcome::Optimal { value, .. } = lp.solve().unwrap() else { panic!() };
        assert_eq!(value, q_int(-21));
        let sol = solve_ilp(&lp, &[true, true], None, 1000).unwrap().unwrap();
        assert_eq!(sol.value, q_int(-20));
        assert_eq!(sol.x, vec![q_int(4), q_int(0)]);
    }

    #[test]
    fn no_integer_point() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var(q_int(1), Some(q_frac(1, 3)), Some(q_frac(2, 3)));
        lp.add_row(vec![(x, q_int(1))], Relation::Ge, q_int(0));
        assert!(solve_ilp(&lp, &[true], None, 100).unwrap().is_none());
    }
}
