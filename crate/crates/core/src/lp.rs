//! Dense two-phase simplex for small linear programs.
//!
//! Solves `max cᵀx` subject to `A x (≤ | = | ≥) b`, `x ≥ 0` with Bland's rule.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

const EPS: f64 = 1e-11;

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for (v, q) in row.iter_mut().zip(&pr) {
                        *v -= f * q;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · x` over the current basis; `allowed` masks entering columns.
    fn optimize(&mut self, obj: &[f64], allowed: &[bool]) -> Result<bool> {
        let m = self.rows.len();
        for _ in 0..10_000 {
            // reduced costs
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = obj[j];
                for i in 0..m {
                    rc -= obj[self.basis[i]] * self.rows[i][j];
                }
                if rc > EPS {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return Ok(true) };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.rows[i][c];
                if a > EPS {
                    let ratio = self.rows[i][self.cols] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - EPS
                                || (ratio <= lr + EPS && self.basis[i] < self.basis[li])
                            {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c),
            }
        }
        Err(Error::NonConvergence { iterations: 10_000, detail: "simplex cycling".into() })
    }
}

/// Maximizes `c · x` over `x ≥ 0` subject to the constraints.
pub fn maximize(c: &[f64], constraints: &[Constraint]) -> Result<LpOutcome> {
    let n = c.len();
    if constraints.iter().any(|k| k.coeffs.len() != n) {
        return Err(Error::Shape("constraint length differs from objective".into()));
    }
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|k| k.relation != Relation::Eq).count();
    let cols = n + n_slack + m; // structural, slack, artificial
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut slack = n;
    for (i, k) in constraints.iter().enumerate() {
        let sign = if k.rhs < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; cols + 1];
        for (r, a) in row.iter_mut().zip(&k.coeffs[..n]) {
            *r = sign * a;
        }
        match k.relation {
            Relation::Le => {
                row[slack] = sign;
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -sign;
                slack += 1;
            }
            Relation::Eq => {}
        }
        row[n + n_slack + i] = 1.0;
        row[cols] = sign * k.rhs;
        rows.push(row);
        basis.push(n + n_slack + i);
    }
    let mut t = Tableau { rows, basis, cols };
    let mut phase1 = vec![0.0; cols];
    for v in phase1.iter_mut().skip(n + n_slack) {
        *v = -1.0;
    }
    let all = vec![true; cols];
    t.optimize(&phase1, &all)?;
    let infeas: f64 = (0..m)
        .filter(|&i| t.basis[i] >= n + n_slack)
        .map(|i| t.rows[i][cols])
        .sum();
    if infeas > 1e-9 {
        return Ok(LpOutcome::Infeasible);
    }
    // drive remaining artificials out of the basis
    for i in 0..m {
        if t.basis[i] >= n + n_slack {
            if let Some(j) = (0..n + n_slack).find(|&j| t.rows[i][j].abs() > EPS) {
                t.pivot(i, j);
            }
        }
    }
    let mut obj = vec![0.0; cols];
    obj[..n].copy_from_slice(c);
    let mut allowed = vec![true; cols];
    for a in allowed.iter_mut().skip(n + n_slack) {
        *a = false;
    }
    if !t.optimize(&obj, &allowed)? {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![0.0; n];
    for i in 0..m {
        if t.basis[i] < n {
            x[t.basis[i]] = t.rows[i][cols];
        }
    }
    let value = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    Ok(LpOutcome::Optimal { value, x })
}

/// A free variable `y = x⁺ − x⁻` helper: expands coefficients for split variables.
pub fn split_free(coeffs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * coeffs.len());
    for &a in coeffs {
        out.push(a);
        out.push(-a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let cons = vec![
            Constraint { coeffs: vec![1.0, 0.0], relation: Relation::Le, rhs: 4.0 },
            Constraint { coeffs: vec![0.0, 2.0], relation: Relation::Le, rhs: 12.0 },
            Constraint { coeffs: vec![3.0, 2.0], relation: Relation::Le, rhs: 18.0 },
        ];
        match maximize(&[3.0, 5.0], &cons).unwrap() {
            LpOutcome::Optimal { value, x } => {
                assert!((value - 36.0).abs() < 1e-9);
                assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
            }
            o => panic!("{:?}", o),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let cons = vec![
            Constraint { coeffs: vec![1.0], relation: Relation::Ge, rhs: 2.0 },
            Constraint { coeffs: vec![1.0], relation: Relation::Le, rhs: 1.0 },
        ];
        assert_eq!(maximize(&[1.0], &cons).unwrap(), LpOutcome::Infeasible);
        let cons = vec![Constraint { coeffs: vec![1.0], relation: Relation::Ge, rhs: 2.0 }];
        assert_eq!(maximize(&[1.0], &cons).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_constraints() {
        // max -x - y, x + y = 3, x - y ≥ 1 → -3
        let cons = vec![
            Constraint { coeffs: vec![1.0, 1.0], relation: Relation::Eq, rhs: 3.0 },
            Constraint { coeffs: vec![1.0, -1.0], relation: Relation::Ge, rhs: 1.0 },
        ];
        match maximize(&[-1.0, -1.0], &cons).unwrap() {
            LpOutcome::Optimal { value, .. } => assert!((value + 3.0).abs() < 1e-9),
            o => panic!("{:?}", o),
        }
    }
}
