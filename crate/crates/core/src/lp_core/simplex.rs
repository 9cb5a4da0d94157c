//! Dense revised simplex for `min cᵀx` s.t. `Ax = b`, `0 ≤ x ≤ u`.
//!
//! Nonbasic variables sit at either bound and may flip between them without a
//! basis change. Pricing is Dantzig's rule until too many consecutive
//! degenerate pivots occur, after which Bland's smallest-index rule takes over
//! until the objective moves again. Phase 1 introduces artificial columns on
//! rows that have no usable unit slack column.

use nalgebra::{DMatrix, DVector};

use crate::error::SolveError;
use crate::limit::Limit;
use crate::tol::{BLAND_TRIGGER, TOL_FEAS, TOL_RC};

const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Basic(usize),
    Lower,
    Upper,
}

/// Raw simplex result: optimal vertex plus its basis.
#[derive(Clone, Debug)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    /// Basic column per row.
    pub basis: Vec<usize>,
    /// Nonbasic columns held at their upper limit.
    pub at_upper: Vec<usize>,
    pub objective: f64,
    pub iterations: usize,
}

struct Revised {
    a: DMatrix<f64>,
    b: DVector<f64>,
    upper: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<Status>,
    binv: DMatrix<f64>,
    xb: DVector<f64>,
    pivots_since_refactor: usize,
    iterations: usize,
    max_iterations: usize,
}

impl Revised {
    fn p(&self) -> usize {
        self.a.nrows()
    }

    fn refactor(&mut self) -> Result<(), SolveError> {
        let p = self.p();
        let mut bmat = DMatrix::zeros(p, p);
        for (r, &j) in self.basis.iter().enumerate() {
            bmat.set_column(r, &self.a.column(j));
        }
        self.binv = bmat.try_inverse().ok_or(SolveError::SingularBasis)?;
        let mut rhs = self.b.clone();
        for (j, s) in self.status.iter().enumerate() {
            if *s == Status::Upper {
                rhs.axpy(-self.upper[j], &self.a.column(j), 1.0);
            }
        }
        self.xb = &self.binv * rhs;
        self.pivots_since_refactor = 0;
        Ok(())
    }

    fn simplex_multipliers(&self, cost: &[f64]) -> DVector<f64> {
        let cb = DVector::from_iterator(self.p(), self.basis.iter().map(|&j| cost[j]));
        self.binv.tr_mul(&cb)
    }

    fn reduced_cost(&self, cost: &[f64], y: &DVector<f64>, j: usize) -> f64 {
        cost[j] - self.a.column(j).dot(y)
    }

    fn pivot(&mut self, row: usize, entering: usize, alpha: &DVector<f64>) {
        let p = self.p();
        let inv_piv = 1.0 / alpha[row];
        for c in 0..p {
            self.binv[(row, c)] *= inv_piv;
        }
        for r in 0..p {
            if r != row && alpha[r] != 0.0 {
                let f = alpha[r];
                for c in 0..p {
                    let v = self.binv[(row, c)];
                    self.binv[(r, c)] -= f * v;
                }
            }
        }
        self.basis[row] = entering;
        self.status[entering] = Status::Basic(row);
        self.pivots_since_refactor += 1;
    }

    /// Runs simplex iterations with the given costs over columns accepted by
    /// `eligible` until no improving column remains.
    fn optimize(&mut self, cost: &[f64], eligible: &dyn Fn(usize) -> bool) -> Result<(), SolveError> {
        let ncols = self.a.ncols();
        let mut degenerate_run = 0usize;
        loop {
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(SolveError::IterationLimit(self.max_iterations));
            }
            if self.pivots_since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let bland = degenerate_run >= BLAND_TRIGGER;
            let y = self.simplex_multipliers(cost);

            let mut entering: Option<(usize, f64)> = None;
            for j in 0..ncols {
                if !eligible(j) {
                    continue;
                }
                let dj = match self.status[j] {
                    Status::Basic(_) => continue,
                    Status::Lower if self.upper[j] > 0.0 => -self.reduced_cost(cost, &y, j),
                    Status::Upper => self.reduced_cost(cost, &y, j),
                    Status::Lower => continue,
                };
                if dj > TOL_RC && entering.is_none_or(|(_, best)| dj > best) {
                    entering = Some((j, dj));
                    if bland {
                        break;
                    }
                }
            }
            let Some((q, _)) = entering else {
                return Ok(());
            };

            let alpha = &self.binv * self.a.column(q);
            let sigma = if self.status[q] == Status::Upper { -1.0 } else { 1.0 };

            // Ratio test: basic i moves by -sigma * theta * alpha_i.
            let mut theta = self.upper[q];
            let mut leave: Option<(usize, bool)> = None;
            for i in 0..self.p() {
                let rate = sigma * alpha[i];
                let bi = self.basis[i];
                let (limit, to_upper) = if rate > PIVOT_TOL {
                    (self.xb[i].max(0.0) / rate, false)
                } else if rate < -PIVOT_TOL && self.upper[bi].is_finite() {
                    ((self.upper[bi] - self.xb[i]).max(0.0) / -rate, true)
                } else {
                    continue;
                };
                let tie = 1e-12 * limit.max(1.0);
                let take = match leave {
                    None => limit < theta,
                    Some((r, _)) => {
                        limit < theta - tie
                            || (limit <= theta + tie
                                && if bland {
                                    bi < self.basis[r]
                                } else {
                                    alpha[i].abs() > alpha[r].abs()
                                })
                    }
                };
                if take {
                    theta = theta.min(limit);
                    leave = Some((i, to_upper));
                }
            }
            if !theta.is_finite() {
                return Err(SolveError::Unbounded { column: q });
            }

            if theta <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }

            self.xb.axpy(-sigma * theta, &alpha, 1.0);
            match leave {
                // Bound flip: the entering column reaches its other bound first.
                None => {
                    self.status[q] = if sigma > 0.0 { Status::Upper } else { Status::Lower };
                }
                Some((row, to_upper)) => {
                    let leaving = self.basis[row];
                    let entering_value = if sigma > 0.0 { theta } else { self.upper[q] - theta };
                    self.pivot(row, q, &alpha);
                    self.xb[row] = entering_value;
                    self.status[leaving] = if to_upper { Status::Upper } else { Status::Lower };
                }
            }
        }
    }
}

fn row_scales(a: &DMatrix<f64>) -> Vec<f64> {
    a.row_iter()
        .map(|row| {
            let m = row.amax();
            if m > 0.0 {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect()
}

/// Solves the bounded-variable LP. Rows are scaled to unit max-norm first;
/// `x` is invariant under row scaling so no unscaling is needed.
pub fn solve_bounded(
    a: &DMatrix<f64>,
    b: &[f64],
    c: &[f64],
    upper: &[Limit],
) -> Result<SimplexOutcome, SolveError> {
    let (p, n) = a.shape();
    debug_assert_eq!(b.len(), p);
    debug_assert_eq!(c.len(), n);
    debug_assert_eq!(upper.len(), n);

    let scales = row_scales(a);
    let mut scaled = a.clone();
    for (r, s) in scales.iter().enumerate() {
        scaled.row_mut(r).scale_mut(*s);
    }
    let bs: Vec<f64> = b.iter().zip(&scales).map(|(v, s)| v * s).collect();

    // Pick a unit slack column per row where one exists; artificials elsewhere.
    let mut basis = vec![usize::MAX; p];
    let mut used = vec![false; n];
    for r in 0..p {
        if bs[r] < 0.0 {
            continue;
        }
        for j in 0..n {
            if used[j] || upper[j].is_finite() || scaled[(r, j)] <= 0.0 {
                continue;
            }
            if (0..p).all(|i| i == r || scaled[(i, j)] == 0.0) {
                basis[r] = j;
                used[j] = true;
                break;
            }
        }
    }
    let artificial_rows: Vec<usize> = (0..p).filter(|&r| basis[r] == usize::MAX).collect();
    let n_art = artificial_rows.len();
    let total = n + n_art;
    let mut full = scaled.resize_horizontally(total, 0.0);
    for (k, &r) in artificial_rows.iter().enumerate() {
        full[(r, n + k)] = if bs[r] < 0.0 { -1.0 } else { 1.0 };
        basis[r] = n + k;
    }

    let mut upper_f: Vec<f64> = upper.iter().map(|u| u.as_f64()).collect();
    upper_f.extend(std::iter::repeat_n(f64::INFINITY, n_art));
    let mut status = vec![Status::Lower; total];
    for (r, &j) in basis.iter().enumerate() {
        status[j] = Status::Basic(r);
    }

    let mut lp = Revised {
        a: full,
        b: DVector::from_vec(bs),
        upper: upper_f,
        basis,
        status,
        binv: DMatrix::identity(p, p),
        xb: DVector::zeros(p),
        pivots_since_refactor: 0,
        iterations: 0,
        max_iterations: 100 * (total + p) + 1000,
    };
    lp.refactor()?;

    let mut redundant = 0;
    if n_art > 0 {
        let mut phase1 = vec![0.0; total];
        for k in 0..n_art {
            phase1[n + k] = 1.0;
        }
        lp.optimize(&phase1, &|_| true)?;
        lp.refactor()?;
        let residual: f64 = (n..total)
            .filter_map(|j| match lp.status[j] {
                Status::Basic(r) => Some(lp.xb[r].abs()),
                _ => None,
            })
            .sum();
        if residual > TOL_FEAS {
            return Err(SolveError::Infeasible { residual });
        }
        for j in n..total {
            lp.upper[j] = 0.0;
            if lp.status[j] == Status::Upper {
                lp.status[j] = Status::Lower;
            }
        }
        // Drive zero-valued artificials out of the basis.
        for row in 0..p {
            if lp.basis[row] < n {
                continue;
            }
            let binv_row = lp.binv.row(row).clone_owned();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..n {
                if matches!(lp.status[j], Status::Basic(_)) {
                    continue;
                }
                let v = (binv_row.clone() * lp.a.column(j))[(0, 0)].abs();
                if v > PIVOT_TOL && best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((j, v));
                }
            }
            match best {
                Some((j, _)) => {
                    let alpha = &lp.binv * lp.a.column(j);
                    let art = lp.basis[row];
                    lp.pivot(row, j, &alpha);
                    lp.status[art] = Status::Lower;
                }
                None => redundant += 1,
            }
        }
        lp.refactor()?;
    }

    let mut phase2 = c.to_vec();
    phase2.extend(std::iter::repeat_n(0.0, n_art));
    lp.optimize(&phase2, &|j| j < n)?;
    lp.refactor()?;
    if redundant > 0 {
        return Err(SolveError::RankDeficient { redundant });
    }

    let mut x = vec![0.0; n];
    let mut at_upper = Vec::new();
    for j in 0..n {
        x[j] = match lp.status[j] {
            Status::Basic(r) => lp.xb[r],
            Status::Lower => 0.0,
            Status::Upper => {
                at_upper.push(j);
                lp.upper[j]
            }
        };
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(SimplexOutcome {
        x,
        basis: lp.basis,
        at_upper,
        objective,
        iterations: lp.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim(v: &[f64]) -> Vec<Limit> {
        v.iter().copied().map(Limit::from).collect()
    }

    #[test]
    fn two_agent_toy() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let out = solve_bounded(&a, &[3.0], &[0.0, -3.0, -1.0], &lim(&[f64::INFINITY, 2.0, 2.0])).unwrap();
        assert!((out.objective + 7.0).abs() < 1e-12);
        assert_eq!(out.basis, vec![2]);
        assert_eq!(out.at_upper, vec![1]);
        assert_eq!(out.x, vec![0.0, 2.0, 1.0]);
    }

    #[test]
    fn equality_rows_use_artificials() {
        // x1 + x2 = 2, x1 - x2 = 0 -> x = (1, 1)
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]);
        let out = solve_bounded(&a, &[2.0, 0.0], &[1.0, 1.0], &lim(&[5.0, 5.0])).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-12 && (out.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_is_reported() {
        let a = DMatrix::from_row_slice(1, 1, &[1.0]);
        let err = solve_bounded(&a, &[3.0], &[1.0], &lim(&[2.0])).unwrap_err();
        assert!(matches!(err, SolveError::Infeasible { .. }));
    }

    #[test]
    fn unbounded_is_reported() {
        // x1 - x2 = 0 with both free above and negative cost.
        let a = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let err = solve_bounded(&a, &[0.0], &[-1.0, 0.0], &lim(&[f64::INFINITY, f64::INFINITY])).unwrap_err();
        assert!(matches!(err, SolveError::Unbounded { .. }));
    }

    #[test]
    fn redundant_rows_are_rank_deficient() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 2.0, 2.0]);
        let err = solve_bounded(&a, &[1.0, 2.0], &[1.0, 2.0], &lim(&[5.0, 5.0])).unwrap_err();
        assert!(matches!(err, SolveError::RankDeficient { redundant: 1 }));
    }

    #[test]
    fn negative_rhs_is_handled() {
        // -x1 + x2 = -1, min x1 + x2 over [0, 3]^2 -> x = (1, 0)
        let a = DMatrix::from_row_slice(1, 2, &[-1.0, 1.0]);
        let out = solve_bounded(&a, &[-1.0], &[1.0, 1.0], &lim(&[3.0, 3.0])).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-12);
        assert!(out.x[1].abs() < 1e-12);
    }
}
