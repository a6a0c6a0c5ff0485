use super::{FractionalSolution, LinearProgram, LpError, Relation};
use crate::scalar::Scalar;

/// Pivots between full refactorizations of the basis inverse.
const REFACTOR_EVERY: u64 = 64;

/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_RUN: u32 = 24;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<T> {
    rows: usize,
    cols: Vec<Vec<(usize, T)>>,
    kind: Vec<ColKind>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Dense basis inverse, row-major `rows x rows`.
    binv: Vec<T>,
    xb: Vec<T>,
    pivots: u64,
    since_refactor: u64,
    limit: Option<u64>,
}

enum Outcome {
    Optimal,
    Unbounded,
}

pub(super) fn solve<T: Scalar>(
    lp: &LinearProgram<T>,
    limit: Option<u64>,
) -> Result<FractionalSolution<T>, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.num_constraints();

    // Objective scaling keeps reduced-cost tolerances meaningful for floats.
    let scale = if T::is_exact() {
        T::one()
    } else {
        let max = lp
            .objective()
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(), T::max_of);
        if max.is_zero() {
            T::one()
        } else {
            max
        }
    };

    let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    let mut kind = vec![ColKind::Structural; n];
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut pending_artificial = Vec::new();
    for (r, c) in lp.constraints().iter().enumerate() {
        let flip = c.rhs.is_negative();
        let relation = match (c.relation, flip) {
            (Relation::Le, true) => Relation::Ge,
            (Relation::Ge, true) => Relation::Le,
            (rel, _) => rel,
        };
        for (v, a) in &c.coeffs {
            if !a.is_zero() {
                let a = if flip { -a.clone() } else { a.clone() };
                cols[*v].push((r, a));
            }
        }
        rhs.push(if flip { -c.rhs.clone() } else { c.rhs.clone() });
        match relation {
            Relation::Le => {
                basis.push(cols.len());
                cols.push(vec![(r, T::one())]);
                kind.push(ColKind::Slack);
            }
            Relation::Ge => {
                cols.push(vec![(r, -T::one())]);
                kind.push(ColKind::Slack);
                basis.push(usize::MAX);
                pending_artificial.push(r);
            }
            Relation::Eq => {
                basis.push(usize::MAX);
                pending_artificial.push(r);
            }
        }
    }
    for r in pending_artificial {
        basis[r] = cols.len();
        cols.push(vec![(r, T::one())]);
        kind.push(ColKind::Artificial);
    }
    let mut in_basis = vec![false; cols.len()];
    for &b in &basis {
        in_basis[b] = true;
    }
    let mut binv = vec![T::zero(); m * m];
    for r in 0..m {
        binv[r * m + r] = T::one();
    }
    let mut tab = Tableau {
        rows: m,
        xb: rhs.clone(),
        cols,
        kind,
        rhs,
        basis,
        in_basis,
        binv,
        pivots: 0,
        since_refactor: 0,
        limit,
    };

    // Phase 1: maximize -(sum of artificials).
    if tab.kind.contains(&ColKind::Artificial) {
        let cost: Vec<T> = tab
            .kind
            .iter()
            .map(|k| if *k == ColKind::Artificial { -T::one() } else { T::zero() })
            .collect();
        match tab.run(&cost, true)? {
            Outcome::Optimal => {}
            Outcome::Unbounded => return Err(LpError::Numerical),
        }
        let infeasibility = tab
            .basis
            .iter()
            .zip(&tab.xb)
            .filter(|(b, _)| tab.kind[**b] == ColKind::Artificial)
            .fold(T::zero(), |acc, (_, x)| acc + x.clone());
        let rhs_norm = tab.rhs.iter().map(|v| v.abs()).fold(T::one(), T::max_of);
        let tol = if T::is_exact() {
            T::zero()
        } else {
            T::from_f64_lossy(1e-7) * rhs_norm
        };
        if infeasibility > tol {
            return Err(LpError::Infeasible);
        }
        tab.drive_out_artificials();
    }

    let mut cost: Vec<T> = vec![T::zero(); tab.cols.len()];
    for (j, c) in lp.objective().iter().enumerate() {
        cost[j] = c.clone() / scale.clone();
    }
    match tab.run(&cost, false)? {
        Outcome::Optimal => {}
        Outcome::Unbounded => return Err(LpError::Unbounded),
    }
    tab.refactor()?;

    let mut values = vec![T::zero(); n];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            let v = tab.xb[r].clone();
            values[b] = if v.is_negative() { T::zero() } else { v };
        }
    }
    let objective = lp.evaluate(&values);
    Ok(FractionalSolution {
        values,
        objective,
        is_basic: true,
        pivots: tab.pivots,
    })
}

impl<T: Scalar> Tableau<T> {
    fn binv_row(&self, r: usize) -> &[T] {
        &self.binv[r * self.rows..(r + 1) * self.rows]
    }

    /// B⁻¹·A_j
    fn ftran(&self, j: usize) -> Vec<T> {
        let m = self.rows;
        let mut w = vec![T::zero(); m];
        for (r, a) in &self.cols[j] {
            for (i, wi) in w.iter_mut().enumerate() {
                let b = &self.binv[i * m + r];
                if !b.is_zero() {
                    *wi = wi.clone() + b.clone() * a.clone();
                }
            }
        }
        w
    }

    fn duals(&self, cost: &[T]) -> Vec<T> {
        let m = self.rows;
        let mut y = vec![T::zero(); m];
        for (k, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (yi, bi) in y.iter_mut().zip(self.binv_row(k)) {
                if !bi.is_zero() {
                    *yi = yi.clone() + cb.clone() * bi.clone();
                }
            }
        }
        y
    }

    fn reduced_cost(&self, cost: &[T], y: &[T], j: usize) -> T {
        self.cols[j]
            .iter()
            .fold(cost[j].clone(), |acc, (r, a)| acc - y[*r].clone() * a.clone())
    }

    fn run(&mut self, cost: &[T], phase_one: bool) -> Result<Outcome, LpError> {
        let mut degenerate = 0u32;
        loop {
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let y = self.duals(cost);
            let mut entering: Option<(usize, T)> = None;
            for j in 0..self.cols.len() {
                if self.in_basis[j] || (!phase_one && self.kind[j] == ColKind::Artificial) {
                    continue;
                }
                let d = self.reduced_cost(cost, &y, j);
                if !d.is_pos() {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                if entering.as_ref().map_or(true, |(_, best)| d > *best) {
                    entering = Some((j, d));
                }
            }
            let Some((q, _)) = entering else {
                return Ok(Outcome::Optimal);
            };
            if let Some(limit) = self.limit {
                if self.pivots >= limit {
                    return Err(LpError::IterationLimit(limit));
                }
            }
            let w = self.ftran(q);
            let Some(leave) = self.ratio_test(&w, bland) else {
                return Ok(Outcome::Unbounded);
            };
            let step = self.xb[leave].clone() / w[leave].clone();
            if step.is_pos() {
                degenerate = 0;
            } else {
                degenerate = degenerate.saturating_add(1);
            }
            self.pivot(leave, q, &w);
        }
    }

    fn ratio_test(&self, w: &[T], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (i, wi) in w.iter().enumerate() {
            if !wi.is_pos() {
                continue;
            }
            let x = if self.xb[i].is_negative() {
                T::zero()
            } else {
                self.xb[i].clone()
            };
            let ratio = x / wi.clone();
            let better = match &best {
                None => true,
                Some((b, r)) => {
                    let diff = ratio.clone() - r.clone();
                    if diff.is_neg() {
                        true
                    } else if diff.is_pos() {
                        false
                    } else if bland {
                        self.basis[i] < self.basis[*b]
                    } else {
                        wi.abs() > w[*b].abs()
                    }
                }
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, q: usize, w: &[T]) {
        let m = self.rows;
        let pivot = w[r].clone();
        for c in 0..m {
            let v = self.binv[r * m + c].clone() / pivot.clone();
            self.binv[r * m + c] = v;
        }
        self.xb[r] = self.xb[r].clone() / pivot;
        let prow: Vec<T> = self.binv_row(r).to_vec();
        let xr = self.xb[r].clone();
        for (i, wi) in w.iter().enumerate() {
            if i == r || wi.is_zero() {
                continue;
            }
            for (c, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    let cell = &mut self.binv[i * m + c];
                    *cell = cell.clone() - wi.clone() * pv.clone();
                }
            }
            self.xb[i] = self.xb[i].clone() - wi.clone() * xr.clone();
        }
        self.in_basis[self.basis[r]] = false;
        self.in_basis[q] = true;
        self.basis[r] = q;
        self.pivots += 1;
        self.since_refactor += 1;
    }

    /// Recomputes B⁻¹ and the basic values from scratch by Gauss–Jordan
    /// elimination with partial pivoting.
    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.rows;
        let width = 2 * m;
        let mut aug = vec![T::zero(); m * width];
        for (k, &b) in self.basis.iter().enumerate() {
            for (r, a) in &self.cols[b] {
                aug[r * width + k] = a.clone();
            }
        }
        for r in 0..m {
            aug[r * width + m + r] = T::one();
        }
        for col in 0..m {
            let mut piv = col;
            for r in col + 1..m {
                if aug[r * width + col].abs() > aug[piv * width + col].abs() {
                    piv = r;
                }
            }
            if aug[piv * width + col].is_zero() || (!T::is_exact() && aug[piv * width + col].abs().to_f64_lossy() < 1e-13) {
                return Err(LpError::Numerical);
            }
            if piv != col {
                for c in 0..width {
                    aug.swap(piv * width + c, col * width + c);
                }
            }
            let p = aug[col * width + col].clone();
            for c in 0..width {
                aug[col * width + c] = aug[col * width + c].clone() / p.clone();
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = aug[r * width + col].clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..width {
                    let v = aug[col * width + c].clone();
                    if !v.is_zero() {
                        aug[r * width + c] = aug[r * width + c].clone() - f.clone() * v;
                    }
                }
            }
        }
        // Row `k` of B⁻¹ corresponds to basis position `k`.
        for k in 0..m {
            for c in 0..m {
                self.binv[k * m + c] = aug[k * width + m + c].clone();
            }
        }
        for k in 0..m {
            self.xb[k] = self
                .binv_row(k)
                .iter()
                .zip(&self.rhs)
                .fold(T::zero(), |acc, (b, v)| acc + b.clone() * v.clone());
        }
        self.since_refactor = 0;
        Ok(())
    }

    /// Pivots zero-valued artificials out of the basis where a replacement
    /// column exists; rows with none are redundant and keep their artificial.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows {
            if self.kind[self.basis[r]] != ColKind::Artificial {
                continue;
            }
            let row: Vec<T> = self.binv_row(r).to_vec();
            let candidate = (0..self.cols.len()).find(|&j| {
                if self.in_basis[j] || self.kind[j] == ColKind::Artificial {
                    return false;
                }
                let v = self.cols[j]
                    .iter()
                    .fold(T::zero(), |acc, (i, a)| acc + row[*i].clone() * a.clone());
                !v.is_negligible()
            });
            if let Some(j) = candidate {
                let w = self.ftran(j);
                self.pivot(r, j, &w);
            }
        }
    }
}
