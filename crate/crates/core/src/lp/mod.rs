//! Linear programs in maximization form and a vertex-solution solver.
//!
//! The solver is a two-phase revised simplex with a dense basis inverse. It
//! always returns a basic (vertex) optimum, which the matching rounding step
//! depends on.

mod builders;
mod simplex;

use std::fmt::Write as _;

use thiserror::Error;

use crate::scalar::Scalar;

pub use builders::{build_3dm, build_rdp, build_upper_bound_lp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("pivot limit of {0} reached")]
    IterationLimit(u64),
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("basis became numerically singular")]
    Numerical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<T> {
    /// Sparse row as (variable, coefficient) pairs.
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

/// `maximize c·x subject to rows, x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(objective: Vec<T>) -> Self {
        LinearProgram {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint<T>] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    /// Adds `x_var ≤ bound` as an explicit row.
    pub fn add_upper_bound(&mut self, var: usize, bound: T) -> &mut Self {
        self.add_constraint(vec![(var, T::one())], Relation::Le, bound)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        for (r, c) in self.constraints.iter().enumerate() {
            if let Some((v, _)) = c.coeffs.iter().find(|(v, _)| *v >= n) {
                return Err(LpError::Malformed(format!("row {r} references variable {v} of {n}")));
            }
            let mut seen: Vec<usize> = c.coeffs.iter().map(|(v, _)| *v).collect();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(LpError::Malformed(format!("row {r} repeats a variable")));
            }
        }
        Ok(())
    }

    /// Evaluates the objective at `x`.
    pub fn evaluate(&self, x: &[T]) -> T {
        self.objective
            .iter()
            .zip(x)
            .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    /// Largest constraint violation at `x`, each scaled by `1 + |rhs|`.
    pub fn max_scaled_violation(&self, x: &[T]) -> f64 {
        let mut worst: f64 = x.iter().map(|v| (-v.to_f64_lossy()).max(0.0)).fold(0.0, f64::max);
        for c in &self.constraints {
            let lhs = c
                .coeffs
                .iter()
                .fold(T::zero(), |acc, (v, a)| acc + a.clone() * x[*v].clone())
                .to_f64_lossy();
            let rhs = c.rhs.to_f64_lossy();
            let excess = match c.relation {
                Relation::Le => lhs - rhs,
                Relation::Ge => rhs - lhs,
                Relation::Eq => (lhs - rhs).abs(),
            };
            worst = worst.max(excess.max(0.0) / (1.0 + rhs.abs()));
        }
        worst
    }

    /// CPLEX-style LP text, for cross-checking with external solvers.
    pub fn to_lp_text(&self) -> String {
        let mut out = String::from("Maximize\n obj:");
        let term = |out: &mut String, coef: &T, var: usize| {
            let v = coef.to_f64_lossy();
            let sign = if v < 0.0 { '-' } else { '+' };
            let _ = write!(out, " {sign} {} x{var}", v.abs());
        };
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_zero() {
                term(&mut out, c, j);
            }
        }
        out.push_str("\nSubject To\n");
        for (r, c) in self.constraints.iter().enumerate() {
            let _ = write!(out, " c{r}:");
            for (v, a) in &c.coeffs {
                term(&mut out, a, *v);
            }
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let _ = writeln!(out, " {rel} {}", c.rhs.to_f64_lossy());
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution<T> {
    pub values: Vec<T>,
    pub objective: T,
    /// The values form a vertex of the feasible polytope.
    pub is_basic: bool,
    /// Simplex pivots spent, both phases.
    pub pivots: u64,
}

impl<T: Scalar> FractionalSolution<T> {
    /// Indices of variables above the zero threshold.
    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_pos())
            .map(|(j, _)| j)
            .collect()
    }
}

/// Solves `lp` to a basic optimum.
pub fn solve<T: Scalar>(lp: &LinearProgram<T>) -> Result<FractionalSolution<T>, LpError> {
    simplex::solve(lp, None)
}

/// As [`solve`], giving up with [`LpError::IterationLimit`] after `max_pivots`.
pub fn solve_with_limit<T: Scalar>(
    lp: &LinearProgram<T>,
    max_pivots: u64,
) -> Result<FractionalSolution<T>, LpError> {
    simplex::solve(lp, Some(max_pivots))
}
