//! File formats shared by the command-line tool: instance JSON in, solution
//! and sensitivity JSON out.

use std::path::Path;

use serde::Serialize;

use crate::duality::{dual_from_basis, solve_dual_dm, DualCertificate};
use crate::error::Result;
use crate::lp_core::{audit_assumptions, solve_primal, AuditReport, BasisPartition, SharingProblem, SolveFlags};
use crate::sensitivity::{count_active_dual, count_active_primal, epsilon_table, sensitivity_interval};

pub fn load_instance(path: &Path) -> Result<SharingProblem> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Which route produced the multipliers in a [`SolutionReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualSource {
    /// Closed form from the optimal basis.
    Basis,
    /// Solved dual program; used when the optimum is degenerate or not
    /// unique and the closed form is not well defined.
    DualProgram,
}

/// Everything known about the optimum of one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionReport {
    pub x: Vec<f64>,
    pub objective: f64,
    pub partition: BasisPartition,
    pub flags: SolveFlags,
    pub iterations: usize,
    pub s_star: usize,
    pub dual: DualCertificate,
    pub dual_source: DualSource,
    pub audit: AuditReport,
}

pub fn solve_report(problem: &SharingProblem) -> Result<SolutionReport> {
    let lp = problem.assemble()?;
    let sol = solve_primal(&lp)?;
    let (dual, dual_source) = if sol.flags.clean() {
        (dual_from_basis(&lp, &sol.partition)?, DualSource::Basis)
    } else {
        (solve_dual_dm(&lp)?.certificate, DualSource::DualProgram)
    };
    let audit = audit_assumptions(&lp, &sol);
    Ok(SolutionReport {
        s_star: count_active_primal(&sol),
        audit,
        dual,
        dual_source,
        iterations: sol.iterations,
        flags: sol.flags,
        partition: sol.partition,
        objective: sol.objective,
        x: sol.x,
    })
}

/// Interval for one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityReport {
    pub m: usize,
    pub beta: f64,
    pub s_star: usize,
    pub s_star_dual: usize,
    pub eps_low: f64,
    pub eps_high: f64,
    pub flags: SolveFlags,
}

pub fn sensitivity_report(problem: &SharingProblem, beta: f64) -> Result<SensitivityReport> {
    let lp = problem.assemble()?;
    let sol = solve_primal(&lp)?;
    let dual = if sol.flags.clean() {
        dual_from_basis(&lp, &sol.partition)?
    } else {
        solve_dual_dm(&lp)?.certificate
    };
    let table = epsilon_table(problem.m(), beta)?;
    let iv = sensitivity_interval(&sol, &table)?;
    Ok(SensitivityReport {
        m: problem.m(),
        beta,
        s_star: iv.s_star,
        s_star_dual: count_active_dual(&lp, &dual),
        eps_low: iv.eps_low,
        eps_high: iv.eps_high,
        flags: sol.flags,
    })
}
