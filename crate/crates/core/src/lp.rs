//! Exact two-phase simplex over arbitrary-precision rationals.
//!
//! The solver works on the standard form `min c·x, Ax = b, x ≥ 0` with `b ≥ 0`.
//! Every row carries an artificial column, which also makes the simplex
//! multipliers available at termination: callers that need a Farkas
//! certificate (the separation oracle) read them from the final tableau.
//! Pivoting follows Bland's rule, so the method cannot cycle.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{Rat, RatPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `coeffs · x  (relation)  rhs`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rat>, relation: Relation, rhs: Rat) -> Self {
        LinearConstraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn is_satisfied(&self, x: &[Rat]) -> bool {
        let lhs = crate::rat::dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(RatPoint),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: RatPoint },
    Unbounded,
    Infeasible,
}

/// Decides whether the system has a rational solution and returns one if so.
pub fn lp_feasible(constraints: &[LinearConstraint], dim: usize) -> Result<Feasibility> {
    match solve_general(None, constraints, dim)? {
        LpOutcome::Optimal { point, .. } => Ok(Feasibility::Feasible(point)),
        LpOutcome::Infeasible => Ok(Feasibility::Infeasible),
        LpOutcome::Unbounded => Err(Error::Internal(
            "feasibility problem reported unbounded".into(),
        )),
    }
}

/// Maximizes `objective · x` over the constraint system (variables are free).
pub fn lp_maximize(
    objective: &[Rat],
    constraints: &[LinearConstraint],
    dim: usize,
) -> Result<LpOutcome> {
    if objective.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: objective.len(),
        });
    }
    solve_general(Some(objective), constraints, dim)
}

fn solve_general(
    objective: Option<&[Rat]>,
    constraints: &[LinearConstraint],
    dim: usize,
) -> Result<LpOutcome> {
    for c in constraints {
        if c.coeffs.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: c.coeffs.len(),
            });
        }
    }
    let slack_count = constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let ncols = 2 * dim + slack_count;
    let mut rows = Vec::with_capacity(constraints.len());
    let mut rhs = Vec::with_capacity(constraints.len());
    let mut slack = 2 * dim;
    for c in constraints {
        let mut row = vec![Rat::zero(); ncols];
        for (j, v) in c.coeffs.iter().enumerate() {
            row[j] = v.clone();
            row[dim + j] = -v.clone();
        }
        match c.relation {
            Relation::Le => {
                row[slack] = Rat::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rat::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        let mut b = c.rhs.clone();
        if b.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            b = -b;
        }
        rows.push(row);
        rhs.push(b);
    }
    let cost: Option<Vec<Rat>> = objective.map(|obj| {
        let mut cost = vec![Rat::zero(); ncols];
        for (j, v) in obj.iter().enumerate() {
            cost[j] = -v.clone();
            cost[dim + j] = v.clone();
        }
        cost
    });
    let outcome = solve_standard(&rows, &rhs, cost.as_deref());
    Ok(match outcome {
        StdOutcome::Infeasible { .. } => LpOutcome::Infeasible,
        StdOutcome::Unbounded => LpOutcome::Unbounded,
        StdOutcome::Optimal { x, value, .. } => {
            let point = (0..dim).map(|j| &x[j] - &x[dim + j]).collect();
            LpOutcome::Optimal {
                value: -value,
                point: RatPoint(point),
            }
        }
    })
}

/// Result of [`solve_standard`].
#[derive(Debug, Clone)]
pub(crate) enum StdOutcome {
    /// Phase one ended with a positive artificial sum. `dual` are the phase-one
    /// simplex multipliers `π` with `πᵀA ≤ 0` and `πᵀb = phase1_value > 0`.
    Infeasible { dual: Vec<Rat>, phase1_value: Rat },
    /// `dual` satisfies `πᵀA ≤ c` and `πᵀb = value`.
    Optimal {
        x: Vec<Rat>,
        value: Rat,
        dual: Vec<Rat>,
    },
    Unbounded,
}

struct Tableau {
    /// `m` rows of `n + m + 1` entries: structural, artificial, rhs.
    rows: Vec<Vec<Rat>>,
    /// Reduced costs for every column, followed by `-z`.
    obj: Vec<Rat>,
    basis: Vec<usize>,
    n: usize,
    m: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.n + self.m
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let width = self.rhs_col() + 1;
        let piv = self.rows[r][e].clone();
        if !piv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..width).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !self.obj[e].is_zero() {
            let f = self.obj[e].clone();
            for &j in &nz {
                self.obj[j] -= &f * &prow[j];
            }
        }
        self.basis[r] = e;
    }

    /// Runs Bland's rule on the current objective row. Columns `>= allowed`
    /// never enter. Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs_col();
        loop {
            let entering = (0..allowed).find(|&j| self.obj[j].is_negative());
            let Some(e) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
    }
}

/// Two-phase simplex on `min cost·x, Ax = b, x ≥ 0` (`b ≥ 0` required).
/// With `cost = None` only phase one runs and `Optimal` carries value zero.
pub(crate) fn solve_standard(a: &[Vec<Rat>], b: &[Rat], cost: Option<&[Rat]>) -> StdOutcome {
    let m = a.len();
    let n = a.first().map_or_else(|| cost.map_or(0, |c| c.len()), |r| r.len());
    debug_assert!(b.iter().all(|v| !v.is_negative()));

    let mut rows = Vec::with_capacity(m);
    for (i, arow) in a.iter().enumerate() {
        let mut row = Vec::with_capacity(n + m + 1);
        row.extend(arow.iter().cloned());
        for k in 0..m {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        row.push(b[i].clone());
        rows.push(row);
    }
    let mut obj = vec![Rat::zero(); n + m + 1];
    for row in &rows {
        for j in 0..n {
            if !row[j].is_zero() {
                obj[j] -= &row[j];
            }
        }
        obj[n + m] -= &row[n + m];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (n..n + m).collect(),
        n,
        m,
    };

    // phase one never becomes unbounded: the objective is bounded below by zero
    t.run(n);
    let phase1_value = -t.obj[n + m].clone();
    if phase1_value.is_positive() {
        let dual = (0..m).map(|i| Rat::one() - &t.obj[n + i]).collect();
        return StdOutcome::Infeasible { dual, phase1_value };
    }

    // drive zero-level artificials out of the basis where possible
    for r in 0..m {
        if t.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, j);
            }
        }
    }

    let zeros;
    let cost = match cost {
        Some(c) => c,
        None => {
            zeros = vec![Rat::zero(); n];
            &zeros
        }
    };
    let mut obj = vec![Rat::zero(); n + m + 1];
    obj[..n].clone_from_slice(cost);
    for (i, row) in t.rows.iter().enumerate() {
        let bi = t.basis[i];
        let cb = if bi < n { &cost[bi] } else { continue };
        if cb.is_zero() {
            continue;
        }
        for j in 0..=n + m {
            if !row[j].is_zero() {
                obj[j] -= cb * &row[j];
            }
        }
    }
    t.obj = obj;
    if !t.run(n) {
        return StdOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        if bi < n {
            x[bi] = t.rows[i][n + m].clone();
        }
    }
    let value = -t.obj[n + m].clone();
    let dual = (0..m).map(|i| -t.obj[n + i].clone()).collect();
    StdOutcome::Optimal { x, value, dual }
}
