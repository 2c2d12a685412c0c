//! A small dense linear-program kernel over the probability simplex.
//!
//! Every program here has the fixed shape
//!
//! ```text
//! maximize   c·p
//! subject to A p ≤ b,    Σ_i p_i = 1,    p ≥ 0,
//! ```
//!
//! which is all the concentration optimizer needs. [`solve`] runs a
//! two-phase primal simplex on the dense tableau with Bland's smallest-index
//! pivot rule, which cannot cycle, so termination needs no perturbation
//! tricks. Problems are tiny — a handful of variables, a few dozen rows — so
//! recomputing reduced costs from scratch each pivot is perfectly fine and
//! keeps the code short enough to audit.
//!
//! [`enumerate_vertices_oracle`] is a deliberately independent second route
//! to the same answer: it enumerates every candidate vertex (each choice of
//! n−1 active constraints together with the simplex equality), solves the
//! resulting linear system directly, and keeps the best feasible point. It
//! exists so the simplex can be cross-checked mechanically; production code
//! should call [`solve`].

use itertools::Itertools;
use thiserror::Error;

/// Feasibility tolerance for solution checks.
pub const EPS_FEAS: f64 = 1e-9;

const PIVOT_TOL: f64 = 1e-10;
const REDUCED_COST_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-8;
const MAX_PIVOTS: usize = 10_000;

/// Construction-time validation failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("a linear program needs at least one variable")]
    NoVariables,
    #[error("non-finite entry in the {place}")]
    NonFinite { place: &'static str },
    #[error("constraint row {row} has {got} entries, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("{rows} constraint rows but {bounds} bounds")]
    BoundCount { rows: usize, bounds: usize },
    #[error("vertex oracle limited to 8 variables and 40 rows, got {variables} and {rows}")]
    OracleTooLarge { variables: usize, rows: usize },
}

/// `maximize objective·p` over `rows·p ≤ bounds`, `Σp = 1`, `p ≥ 0`.
/// The simplex constraint is implicit — never encode it as a row.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    bounds: Vec<f64>,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<f64>,
        rows: Vec<Vec<f64>>,
        bounds: Vec<f64>,
    ) -> Result<Self, LpError> {
        if objective.is_empty() {
            return Err(LpError::NoVariables);
        }
        if !objective.iter().all(|v| v.is_finite()) {
            return Err(LpError::NonFinite { place: "objective" });
        }
        if rows.len() != bounds.len() {
            return Err(LpError::BoundCount {
                rows: rows.len(),
                bounds: bounds.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != objective.len() {
                return Err(LpError::RowLength {
                    row: i,
                    expected: objective.len(),
                    got: row.len(),
                });
            }
            if !row.iter().all(|v| v.is_finite()) {
                return Err(LpError::NonFinite {
                    place: "constraint matrix",
                });
            }
        }
        if !bounds.iter().all(|v| v.is_finite()) {
            return Err(LpError::NonFinite { place: "bounds" });
        }
        Ok(LinearProgram {
            objective,
            rows,
            bounds,
        })
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn bounds(&self) -> &[f64] {
        &self.bounds
    }

    /// Independent feasibility check of a candidate point, within `eps`.
    pub fn is_feasible(&self, p: &[f64], eps: f64) -> bool {
        if p.len() != self.num_variables() {
            return false;
        }
        if p.iter().any(|&v| v < -eps) {
            return false;
        }
        if (p.iter().sum::<f64>() - 1.0).abs() > eps {
            return false;
        }
        self.rows
            .iter()
            .zip(&self.bounds)
            .all(|(row, &b)| dot(row, p) <= b + eps)
    }
}

/// Whether a program has any feasible point at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// The outcome of a solve. `optimal_value` and `solution` are meaningful
/// only when `status` is [`LpStatus::Optimal`]; an infeasible program
/// reports `-∞` and an empty vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub optimal_value: f64,
    pub solution: Vec<f64>,
}

impl LpSolution {
    fn infeasible() -> Self {
        LpSolution {
            status: LpStatus::Infeasible,
            optimal_value: f64::NEG_INFINITY,
            solution: Vec::new(),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves the program with a two-phase dense simplex (Bland's rule).
///
/// Deterministic: identical input pivots identically. The returned point is
/// re-verified against the original constraints before being handed back;
/// a verification failure would be a solver bug and panics rather than
/// returning a wrong answer.
pub fn solve(lp: &LinearProgram) -> LpSolution {
    let n = lp.num_variables();
    let m = lp.num_rows();

    // Standard form: slack per inequality, rows with negative bounds
    // negated (their slack enters with −1 and cannot seed the basis), one
    // artificial per uncovered row. Columns: [p | slacks | artificials].
    let mut a = vec![vec![0.0; n + m]; m + 1];
    let mut rhs = vec![0.0; m + 1];
    for i in 0..m {
        let sign = if lp.bounds[i] < 0.0 { -1.0 } else { 1.0 };
        for (dst, src) in a[i].iter_mut().zip(&lp.rows[i]) {
            *dst = sign * src;
        }
        a[i][n + i] = sign;
        rhs[i] = sign * lp.bounds[i];
    }
    a[m][..n].fill(1.0);
    rhs[m] = 1.0;

    let mut basis = vec![usize::MAX; m + 1];
    for i in 0..m {
        if a[i][n + i] > 0.0 {
            basis[i] = n + i;
        }
    }
    let mut ncols = n + m;
    for (r, b) in basis.iter_mut().enumerate() {
        if *b != usize::MAX {
            continue;
        }
        for (row, v) in a.iter_mut().enumerate() {
            v.push(if row == r { 1.0 } else { 0.0 });
        }
        *b = ncols;
        ncols += 1;
    }

    // Phase 1: minimize the artificial mass.
    let mut cost1 = vec![0.0; ncols];
    for c in cost1.iter_mut().skip(n + m) {
        *c = 1.0;
    }
    let artificial_mass = simplex_min(&mut a, &mut rhs, &mut basis, &cost1);
    if artificial_mass > PHASE1_TOL {
        return LpSolution::infeasible();
    }

    // Pivot leftover artificials out of the basis; a row where that is
    // impossible is redundant and gets dropped.
    let mut r = 0;
    while r < a.len() {
        if basis[r] >= n + m {
            if let Some(j) = (0..n + m).find(|&j| a[r][j].abs() > PIVOT_TOL) {
                pivot(&mut a, &mut rhs, &mut basis, r, j);
            } else {
                a.remove(r);
                rhs.remove(r);
                basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    for row in &mut a {
        row.truncate(n + m);
    }

    // Phase 2: maximize c·p as a minimization of −c·p.
    let mut cost2 = vec![0.0; n + m];
    for (c, obj) in cost2.iter_mut().zip(&lp.objective) {
        *c = -obj;
    }
    simplex_min(&mut a, &mut rhs, &mut basis, &cost2);

    let mut p = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            p[b] = rhs[r];
        }
    }
    assert!(
        lp.is_feasible(&p, EPS_FEAS),
        "simplex self-check failed: returned point violates the constraints"
    );
    LpSolution {
        status: LpStatus::Optimal,
        optimal_value: dot(&lp.objective, &p),
        solution: p,
    }
}

/// Bland-rule minimization loop. Returns the objective value of the final
/// basis under `cost`.
fn simplex_min(
    a: &mut [Vec<f64>],
    rhs: &mut [f64],
    basis: &mut [usize],
    cost: &[f64],
) -> f64 {
    let ncols = cost.len();
    for _ in 0..MAX_PIVOTS {
        // Reduced costs from scratch: c̄_j = c_j − Σ_r c_{basis(r)} a_{rj}.
        let entering = (0..ncols).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let z: f64 = basis
                .iter()
                .enumerate()
                .map(|(r, &b)| cost[b] * a[r][j])
                .sum();
            cost[j] - z < -REDUCED_COST_TOL
        });
        let Some(j) = entering else {
            return basis
                .iter()
                .enumerate()
                .map(|(r, &b)| cost[b] * rhs[r])
                .sum();
        };
        // Ratio test; ties broken by the smallest basic variable index
        // (the other half of Bland's rule).
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..a.len() {
            if a[r][j] > PIVOT_TOL {
                let ratio = rhs[r] / a[r][j];
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio - PIVOT_TOL
                            || (ratio <= lratio + PIVOT_TOL && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (r, _) = leave.expect("simplex-constrained program cannot be unbounded");
        pivot(a, rhs, basis, r, j);
    }
    panic!("simplex exceeded the pivot budget; Bland's rule should have terminated");
}

fn pivot(a: &mut [Vec<f64>], rhs: &mut [f64], basis: &mut [usize], r: usize, j: usize) {
    let scale = a[r][j];
    for v in a[r].iter_mut() {
        *v /= scale;
    }
    rhs[r] /= scale;
    for i in 0..a.len() {
        if i != r && a[i][j].abs() > 0.0 {
            let factor = a[i][j];
            let pivot_row = a[r].clone();
            for (v, pv) in a[i].iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
            rhs[i] -= factor * rhs[r];
        }
    }
    basis[r] = j;
}

/// Brute-force cross-check: visits every basic point (simplex equality plus
/// each choice of n−1 active constraints, drawn from the inequality rows
/// and the sign constraints), keeps the best feasible one.
///
/// Exponential in the worst case, hence the size cap; test code only.
pub fn enumerate_vertices_oracle(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.num_variables();
    let m = lp.num_rows();
    if n > 8 || m > 40 {
        return Err(LpError::OracleTooLarge {
            variables: n,
            rows: m,
        });
    }

    // Constraint i < m is rows[i]·p = bounds[i]; constraint m + j is p_j = 0.
    let active_row = |idx: usize| -> (Vec<f64>, f64) {
        if idx < m {
            (lp.rows[idx].clone(), lp.bounds[idx])
        } else {
            let mut e = vec![0.0; n];
            e[idx - m] = 1.0;
            (e, 0.0)
        }
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    for subset in (0..m + n).combinations(n - 1) {
        let mut mat = vec![vec![1.0; n]];
        let mut vec_b = vec![1.0];
        for &idx in &subset {
            let (row, b) = active_row(idx);
            mat.push(row);
            vec_b.push(b);
        }
        let Some(p) = gauss_solve(mat, vec_b) else {
            continue;
        };
        if !lp.is_feasible(&p, EPS_FEAS) {
            continue;
        }
        let value = dot(lp.objective(), &p);
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, p));
        }
    }

    Ok(match best {
        Some((optimal_value, solution)) => LpSolution {
            status: LpStatus::Optimal,
            optimal_value,
            solution,
        },
        None => LpSolution::infeasible(),
    })
}

/// Dense Gaussian elimination with partial pivoting; `None` on a singular
/// (or numerically singular) system.
fn gauss_solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .expect("finite matrix")
        })?;
        if m[piv][col].abs() < PIVOT_TOL {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        let pivot_b = b[col];
        for (offset, row) in lower.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            if f != 0.0 {
                for (v, pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= f * pv;
                }
                b[col + 1 + offset] -= f * pivot_b;
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for (coeff, xv) in m[row][row + 1..].iter().zip(&x[row + 1..]) {
            acc -= coeff * xv;
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}
