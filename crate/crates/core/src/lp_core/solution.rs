use std::ops::Range;

use serde::Serialize;

use crate::error::SolveError;
use crate::lp_core::basis::BasisFactor;
use crate::lp_core::simplex::solve_bounded;
use crate::lp_core::AssembledLp;
use crate::tol::{TOL_ACT, TOL_RC};

/// Partition of the variable indices into basic, at-zero and at-limit sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisPartition {
    pub basic: Vec<usize>,
    pub at_lower: Vec<usize>,
    pub at_upper: Vec<usize>,
}

impl BasisPartition {
    /// True when the three sets are disjoint and cover `0..ell`.
    pub fn covers(&self, ell: usize) -> bool {
        let mut seen = vec![false; ell];
        for &j in self.basic.iter().chain(&self.at_lower).chain(&self.at_upper) {
            if j >= ell || seen[j] {
                return false;
            }
            seen[j] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

/// Assumption flags raised by [`solve_primal`]. They never abort the solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveFlags {
    /// A basic variable sits at a bound: more than `ℓ` active constraints.
    pub degenerate: bool,
    /// A nonbasic reduced cost is zero: alternative optima exist.
    pub non_unique: bool,
}

impl SolveFlags {
    pub fn clean(&self) -> bool {
        !self.degenerate && !self.non_unique
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimalSolution {
    /// Slack block first, then agents in input order.
    pub x: Vec<f64>,
    pub objective: f64,
    pub partition: BasisPartition,
    pub agent_cols: Vec<Range<usize>>,
    pub flags: SolveFlags,
    pub iterations: usize,
}

impl PrimalSolution {
    pub fn m(&self) -> usize {
        self.agent_cols.len()
    }

    pub fn agent_x(&self, i: usize) -> &[f64] {
        &self.x[self.agent_cols[i].clone()]
    }
}

/// Reduced costs over the nonbasic sets, keyed by variable index.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedCosts {
    pub at_lower: Vec<(usize, f64)>,
    pub at_upper: Vec<(usize, f64)>,
}

impl ReducedCosts {
    /// Optimality sign pattern: `r ≥ -tol` at zero and `r ≤ tol` at the limit.
    pub fn optimal(&self, tol: f64) -> bool {
        self.at_lower.iter().all(|&(_, r)| r >= -tol) && self.at_upper.iter().all(|&(_, r)| r <= tol)
    }
}

/// `r = c_N - c_Bᵀ A_B⁻¹ A_N` for both nonbasic sets of `partition`.
pub fn reduced_costs(lp: &AssembledLp, partition: &BasisPartition) -> Result<ReducedCosts, SolveError> {
    let factor = BasisFactor::new(lp, &partition.basic)?;
    let rc = |&j: &usize| (j, factor.reduced_cost(lp.c[j], lp.a.column(j).iter().copied()));
    Ok(ReducedCosts {
        at_lower: partition.at_lower.iter().map(rc).collect(),
        at_upper: partition.at_upper.iter().map(rc).collect(),
    })
}

/// Solves the resource-sharing program and classifies the optimal vertex.
pub fn solve_primal(lp: &AssembledLp) -> Result<PrimalSolution, SolveError> {
    let ell = lp.ell();
    if ell < lp.p() {
        return Err(SolveError::Model(crate::error::ModelError::Shape(format!(
            "need at least p = {} variables, got {ell}",
            lp.p()
        ))));
    }
    let out = solve_bounded(&lp.a, &lp.b, &lp.c, &lp.d)?;
    let mut basic = out.basis.clone();
    basic.sort_unstable();
    let mut at_upper = out.at_upper.clone();
    at_upper.sort_unstable();
    let mut is_nonlower = vec![false; ell];
    for &j in basic.iter().chain(&at_upper) {
        is_nonlower[j] = true;
    }
    let at_lower: Vec<usize> = (0..ell).filter(|&j| !is_nonlower[j]).collect();
    let partition = BasisPartition {
        basic,
        at_lower,
        at_upper,
    };

    let degenerate = partition.basic.iter().any(|&j| {
        let x = out.x[j];
        x <= TOL_ACT || lp.d[j].finite().is_some_and(|d| d - x <= TOL_ACT)
    });
    let rc = reduced_costs(lp, &partition)?;
    let non_unique = rc
        .at_lower
        .iter()
        .chain(&rc.at_upper)
        .any(|&(_, r)| r.abs() <= TOL_RC);

    Ok(PrimalSolution {
        x: out.x,
        objective: out.objective,
        partition,
        agent_cols: lp.agent_cols.clone(),
        flags: SolveFlags {
            degenerate,
            non_unique,
        },
        iterations: out.iterations,
    })
}
