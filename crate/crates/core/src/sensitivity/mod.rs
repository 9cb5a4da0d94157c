//! Confidence bounds on the probability that a new agent changes the
//! optimal allocation, given the number of active agents in the sample.

mod poly;

use rayon::prelude::*;
use serde::Serialize;

use crate::duality::{dual_slack, DualCertificate};
use crate::error::BoundsError;
use crate::lp_core::{AssembledLp, PrimalSolution};
use crate::tol::TOL_ACT;

pub use poly::{explicit_upper_bound, ln_binomial, ln_binomial_column, poly_value, solve_roots, BoundPolynomial, PolyValue};

/// One row of the table, for a given number `k` of active agents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonRow {
    pub k: usize,
    pub t_low: f64,
    pub t_high: f64,
    pub eps_low: f64,
    pub eps_high: f64,
    pub eps_explicit: f64,
    /// Normalized polynomial residual at `t_low` (zero when `k = m`).
    pub residual_low: f64,
    pub residual_high: f64,
}

/// Lower and upper confidence bounds for every `k = 0..=m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonTable {
    pub m: usize,
    pub beta: f64,
    pub rows: Vec<EpsilonRow>,
}

fn row(m: usize, k: usize, beta: f64) -> Result<EpsilonRow, BoundsError> {
    let poly = BoundPolynomial::new(m, k, beta)?;
    let (t_low, t_high) = poly.roots()?;
    Ok(EpsilonRow {
        k,
        t_low,
        t_high,
        eps_low: (1.0 - t_high).max(0.0),
        eps_high: (1.0 - t_low).max(0.0),
        eps_explicit: explicit_upper_bound(m, k, beta)?,
        residual_low: if k < m { poly.residual(t_low) } else { 0.0 },
        residual_high: poly.residual(t_high),
    })
}

impl EpsilonTable {
    /// Builds all `m + 1` rows; rows are computed in parallel.
    pub fn new(m: usize, beta: f64) -> Result<Self, BoundsError> {
        if m == 0 {
            return Err(BoundsError::InvalidParameter("m must be at least 1".into()));
        }
        let rows = (0..=m).into_par_iter().map(|k| row(m, k, beta)).collect::<Result<Vec<_>, _>>()?;
        Ok(EpsilonTable { m, beta, rows })
    }

    pub fn row(&self, k: usize) -> Option<&EpsilonRow> {
        self.rows.get(k)
    }

    /// Largest normalized residual over all reported roots.
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual_low.max(r.residual_high)).fold(0.0, f64::max)
    }

    /// Values of `k` where the upper bound decreases from `k` to `k + 1`.
    /// Monotonicity is expected but not guaranteed, so this is informational.
    pub fn monotonicity_warnings(&self) -> Vec<usize> {
        self.rows
            .windows(2)
            .filter(|w| w[1].eps_high < w[0].eps_high)
            .map(|w| w[0].k)
            .collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "t_low", "t_high", "eps_low", "eps_high", "eps_explicit"])?;
        for r in &self.rows {
            w.write_record(&[
                r.k.to_string(),
                r.t_low.to_string(),
                r.t_high.to_string(),
                r.eps_low.to_string(),
                r.eps_high.to_string(),
                r.eps_explicit.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `epsilon_table(m, β)`.
pub fn epsilon_table(m: usize, beta: f64) -> Result<EpsilonTable, BoundsError> {
    EpsilonTable::new(m, beta)
}

/// Number of agents with at least one decision variable away from zero.
pub fn count_active_primal(solution: &PrimalSolution) -> usize {
    (0..solution.m())
        .filter(|&i| solution.agent_x(i).iter().any(|x| x.abs() > TOL_ACT))
        .count()
}

/// Number of active agents read from a dual certificate: agents with a
/// positive relaxation value, plus agents with zero relaxation value whose
/// reduced profit `-cⱼ - λᵀAⱼ` vanishes on some column.
pub fn count_active_dual(lp: &AssembledLp, dual: &DualCertificate) -> usize {
    lp.agent_cols
        .iter()
        .zip(&dual.h)
        .filter(|(range, &h)| h > TOL_ACT || (*range).clone().any(|j| dual_slack(lp, &dual.lambda, j).abs() <= TOL_ACT))
        .count()
}

/// Interval `[eps_low(s★), eps_high(s★)]` for the given optimum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SensitivityInterval {
    pub eps_low: f64,
    pub eps_high: f64,
    pub s_star: usize,
}

pub fn sensitivity_interval(solution: &PrimalSolution, table: &EpsilonTable) -> Result<SensitivityInterval, BoundsError> {
    if solution.m() != table.m {
        return Err(BoundsError::MismatchedSampleSize {
            table: table.m,
            solution: solution.m(),
        });
    }
    let s_star = count_active_primal(solution);
    Ok(interval_for(table, s_star))
}

/// Table lookup at `k = s★`.
pub fn interval_for(table: &EpsilonTable, s_star: usize) -> SensitivityInterval {
    let r = &table.rows[s_star];
    SensitivityInterval {
        eps_low: r.eps_low,
        eps_high: r.eps_high,
        s_star,
    }
}
