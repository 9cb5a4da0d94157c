use nalgebra::DMatrix;
use serde::Serialize;

use crate::lp_core::basis::numerical_rank;
use crate::lp_core::{AssembledLp, BasisPartition, PrimalSolution};
use crate::tol::{TOL_ACT, TOL_FEAS};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicCheck {
    pub ok: bool,
    /// First failed condition, if any.
    pub failure: Option<String>,
}

impl BasicCheck {
    fn fail(msg: String) -> Self {
        BasicCheck {
            ok: false,
            failure: Some(msg),
        }
    }
}

/// Largest budget residual `|Ax - b|` per row, measured on rows scaled to
/// unit max-norm and relative to `max(1, |b_r|)`.
pub fn budget_residual(lp: &AssembledLp, x: &[f64]) -> f64 {
    let ax = &lp.a * nalgebra::DVector::from_column_slice(x);
    (0..lp.p())
        .map(|r| {
            let row_scale = lp.a.row(r).amax();
            let s = if row_scale > 0.0 { 1.0 / row_scale } else { 1.0 };
            ((ax[r] - lp.b[r]) * s).abs() / (lp.b[r] * s).abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Extended basic-solution test: `Ax = b`, `|B| = p`, `rank(A_B) = p`, and
/// every nonbasic `x_j` at `0` or at `d_j`.
pub fn check_basic_solution(lp: &AssembledLp, x: &[f64], partition: &BasisPartition) -> BasicCheck {
    let (p, ell) = lp.a.shape();
    if x.len() != ell {
        return BasicCheck::fail(format!("x has {} entries, expected {ell}", x.len()));
    }
    let residual = budget_residual(lp, x);
    if residual > TOL_FEAS {
        return BasicCheck::fail(format!("budget residual {residual:e} exceeds tolerance"));
    }
    if partition.basic.len() != p {
        return BasicCheck::fail(format!("basis has {} indices, expected p = {p}", partition.basic.len()));
    }
    if partition.basic.iter().any(|&j| j >= ell) {
        return BasicCheck::fail("basis index out of range".into());
    }
    let mut ab = DMatrix::zeros(p, p);
    for (k, &j) in partition.basic.iter().enumerate() {
        ab.set_column(k, &lp.a.column(j));
    }
    if numerical_rank(&ab) < p {
        return BasicCheck::fail("basis columns are linearly dependent".into());
    }
    for j in 0..ell {
        if partition.basic.contains(&j) {
            continue;
        }
        let at_zero = x[j].abs() <= TOL_ACT;
        let at_limit = lp.d[j].finite().is_some_and(|d| (x[j] - d).abs() <= TOL_ACT);
        if !(at_zero || at_limit) {
            return BasicCheck::fail(format!("nonbasic index {j} strictly interior"));
        }
    }
    BasicCheck { ok: true, failure: None }
}

/// Report on the modelling assumptions at a computed optimum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub rank: usize,
    pub full_row_rank: bool,
    pub active_constraints: usize,
    pub ell: usize,
    /// Exactly `ℓ` constraints active at `x★` (non-degeneracy).
    pub exactly_ell_active: bool,
    /// Every finite upper limit is strictly positive.
    pub limits_positive: bool,
    pub unique: bool,
    pub boundary_condition: &'static str,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.full_row_rank && self.exactly_ell_active && self.limits_positive && self.unique
    }
}

/// Number of constraints active at `x`: the `p` budget rows plus every bound
/// met within `TOL_ACT`.
pub fn active_constraints(lp: &AssembledLp, x: &[f64]) -> usize {
    let bounds: usize = x
        .iter()
        .zip(&lp.d)
        .map(|(&xj, d)| {
            usize::from(xj.abs() <= TOL_ACT) + usize::from(d.finite().is_some_and(|d| (xj - d).abs() <= TOL_ACT))
        })
        .sum();
    lp.p() + bounds
}

pub fn audit_assumptions(lp: &AssembledLp, solution: &PrimalSolution) -> AuditReport {
    let rank = numerical_rank(&lp.a);
    let active = active_constraints(lp, &solution.x);
    AuditReport {
        rank,
        full_row_rank: rank == lp.p(),
        active_constraints: active,
        ell: lp.ell(),
        exactly_ell_active: active == lp.ell(),
        limits_positive: lp.d.iter().all(|d| d.finite().is_none_or(|v| v > 0.0)),
        unique: !solution.flags.non_unique,
        boundary_condition: "not checkable from one sample",
    }
}
