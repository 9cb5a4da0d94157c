//! Does a newly arriving agent change the optimal allocation?
//!
//! With a non-degenerate, unique optimum the answer is read off the reduced
//! costs of the newcomer's columns: the allocation changes exactly when one
//! of them is negative. The full re-solve of the enlarged program is kept as
//! an audit path.

use serde::Serialize;

use crate::error::{ArrivalError, SolveError};
use crate::lp_core::{solve_primal, AgentProfile, AssembledLp, BasisFactor, PrimalSolution};
use crate::tol::{TOL_ACT, TOL_RC};

/// Classification of one arrival.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArrivalVerdict {
    pub changes: bool,
    /// No entry is below `-tol_rc` but some entry is within `tol_rc` of zero.
    /// Such arrivals are classified as not changing the allocation.
    pub tie: bool,
    /// `c̄ᵀ - c_Bᵀ A_B⁻¹ Ā`.
    pub reduced_cost_vector: Vec<f64>,
    /// `max{0, -c̄ᵀ - λ★ᵀĀ} d̄`, with entries shifted by `tol_rc`.
    pub dual_form_value: f64,
    /// Base objective minus re-solved objective, when a re-solve was run.
    pub resolve_objective_delta: Option<f64>,
}

/// Precomputed multipliers of a clean optimal basis; evaluates arrivals in
/// `O(p · n̄)` each.
#[derive(Clone, Debug)]
pub struct ArrivalCertifier {
    p: usize,
    factor: BasisFactor,
}

impl ArrivalCertifier {
    pub fn new(solution: &PrimalSolution, lp: &AssembledLp) -> Result<Self, ArrivalError> {
        if !solution.flags.clean() {
            return Err(ArrivalError::DegenerateBase);
        }
        Ok(ArrivalCertifier {
            p: lp.p(),
            factor: BasisFactor::new(lp, &solution.partition.basic)?,
        })
    }

    /// `λ★ = -(c_Bᵀ A_B⁻¹)ᵀ`.
    pub fn lambda(&self) -> Vec<f64> {
        self.factor.multipliers().iter().map(|y| -y).collect()
    }

    pub fn verdict(&self, newcomer: &AgentProfile) -> Result<ArrivalVerdict, ArrivalError> {
        if newcomer.p() != self.p {
            return Err(ArrivalError::Dimension {
                expected: self.p,
                got: newcomer.p(),
            });
        }
        let lambda = self.lambda();
        let mut reduced = Vec::with_capacity(newcomer.n());
        let mut dual_form_value = 0.0;
        for j in 0..newcomer.n() {
            let c = newcomer.cost()[j];
            reduced.push(self.factor.reduced_cost(c, newcomer.usage_column(j)));
            let profit = -c - newcomer.usage_column(j).zip(&lambda).map(|(a, l)| a * l).sum::<f64>();
            dual_form_value += newcomer.limit()[j].scale((profit - TOL_RC).max(0.0));
        }
        let changes = reduced.iter().any(|&r| r < -TOL_RC);
        if changes != (dual_form_value > 0.0) {
            return Err(ArrivalError::FormMismatch);
        }
        let tie = !changes && reduced.iter().any(|&r| r.abs() <= TOL_RC);
        Ok(ArrivalVerdict {
            changes,
            tie,
            reduced_cost_vector: reduced,
            dual_form_value,
            resolve_objective_delta: None,
        })
    }
}

/// Reduced-cost classification of `newcomer` against the optimum of `lp`.
pub fn changes_solution(
    solution: &PrimalSolution,
    lp: &AssembledLp,
    newcomer: &AgentProfile,
) -> Result<ArrivalVerdict, ArrivalError> {
    ArrivalCertifier::new(solution, lp)?.verdict(newcomer)
}

/// Solves the program with `newcomer` appended as the last agent.
pub fn solve_augmented(lp: &AssembledLp, newcomer: &AgentProfile) -> Result<PrimalSolution, SolveError> {
    solve_primal(&lp.with_newcomer(newcomer)?)
}

/// Whether the enlarged optimum differs from `(x★, 0)`: the newcomer's
/// allocation is nonzero or the objective improved beyond `1e-8` relative.
pub fn resolution_changed(base: &PrimalSolution, augmented: &PrimalSolution) -> bool {
    let newcomer = augmented.agent_x(augmented.m() - 1);
    let improved = base.objective - augmented.objective > 1e-8 * base.objective.abs().max(1.0);
    improved || newcomer.iter().any(|x| x.abs() > TOL_ACT)
}

/// Certificate verdict followed by a full re-solve; fills
/// `resolve_objective_delta`.
pub fn verify_by_resolve(
    solution: &PrimalSolution,
    lp: &AssembledLp,
    newcomer: &AgentProfile,
) -> Result<(ArrivalVerdict, bool), ArrivalError> {
    let mut verdict = changes_solution(solution, lp, newcomer)?;
    let augmented = solve_augmented(lp, newcomer)?;
    verdict.resolve_objective_delta = Some(solution.objective - augmented.objective);
    Ok((verdict, resolution_changed(solution, &augmented)))
}

/// Outcome of a batch of arrivals.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ViolationEstimate {
    /// `changes / draws`.
    pub p_hat: f64,
    pub changes: usize,
    pub ties: usize,
    pub draws: usize,
    /// Draws that were also re-solved.
    pub audited: usize,
    /// Audited non-tie draws where the certificate and the re-solve disagree.
    pub audit_mismatches: usize,
}

/// Estimates the probability that an arrival changes the allocation from
/// `draws` newcomers. `sampler` receives the draw index so that callers can
/// key their random streams on it. Every `audit_every`-th draw (starting at
/// draw 0) is also re-solved in full; `None` disables the audit.
pub fn empirical_violation_probability<F>(
    solution: &PrimalSolution,
    lp: &AssembledLp,
    mut sampler: F,
    draws: usize,
    audit_every: Option<usize>,
) -> Result<ViolationEstimate, ArrivalError>
where
    F: FnMut(usize) -> AgentProfile,
{
    if draws == 0 {
        return Err(ArrivalError::NoDraws);
    }
    let certifier = ArrivalCertifier::new(solution, lp)?;
    let mut est = ViolationEstimate {
        draws,
        ..Default::default()
    };
    for draw in 0..draws {
        let newcomer = sampler(draw);
        let verdict = certifier.verdict(&newcomer)?;
        est.changes += verdict.changes as usize;
        est.ties += verdict.tie as usize;
        if audit_every.is_some_and(|every| every > 0 && draw % every == 0) {
            est.audited += 1;
            let changed = resolution_changed(solution, &solve_augmented(lp, &newcomer)?);
            if !verdict.tie && changed != verdict.changes {
                est.audit_mismatches += 1;
            }
        }
    }
    est.p_hat = est.changes as f64 / draws as f64;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limit::Limit;
    use crate::lp_core::SharingProblem;

    fn toy() -> (AssembledLp, PrimalSolution) {
        let agents = vec![
            AgentProfile::scalar(-3.0, 2.0, &[1.0]).unwrap(),
            AgentProfile::scalar(-1.0, 2.0, &[1.0]).unwrap(),
        ];
        let lp = SharingProblem::new(1, vec![3.0], agents).unwrap().assemble().unwrap();
        let sol = solve_primal(&lp).unwrap();
        (lp, sol)
    }

    #[test]
    fn profitable_newcomer_changes() {
        let (lp, sol) = toy();
        let newcomer = AgentProfile::scalar(-5.0, 1.0, &[1.0]).unwrap();
        let (v, changed) = verify_by_resolve(&sol, &lp, &newcomer).unwrap();
        assert!(v.changes && changed && !v.tie);
        assert_eq!(v.reduced_cost_vector, vec![-4.0]);
        assert!((v.resolve_objective_delta.unwrap() - 4.0).abs() < 1e-12);
        let aug = solve_augmented(&lp, &newcomer).unwrap();
        assert!((aug.objective + 11.0).abs() < 1e-12);
        assert_eq!(aug.agent_x(0), &[2.0]);
        assert!(aug.agent_x(1)[0].abs() < 1e-12);
        assert_eq!(aug.agent_x(2), &[1.0]);
    }

    #[test]
    fn cheap_newcomer_does_not_change() {
        let (lp, sol) = toy();
        let newcomer = AgentProfile::scalar(-0.5, 1.0, &[1.0]).unwrap();
        let (v, changed) = verify_by_resolve(&sol, &lp, &newcomer).unwrap();
        assert!(!v.changes && !changed && !v.tie);
        assert_eq!(v.reduced_cost_vector, vec![0.5]);
        assert_eq!(v.dual_form_value, 0.0);
        assert_eq!(v.resolve_objective_delta, Some(0.0));
    }

    #[test]
    fn duplicate_of_interior_agent_is_a_tie() {
        let (lp, sol) = toy();
        let newcomer = AgentProfile::scalar(-1.0, 2.0, &[1.0]).unwrap();
        let v = changes_solution(&sol, &lp, &newcomer).unwrap();
        assert!(!v.changes && v.tie);
    }

    #[test]
    fn useless_newcomer_keeps_objective() {
        let (lp, sol) = toy();
        let newcomer = AgentProfile::scalar(0.0, Limit::Infinite, &[0.0]).unwrap();
        let aug = solve_augmented(&lp, &newcomer).unwrap();
        assert_eq!(aug.agent_x(2), &[0.0]);
        assert_eq!(aug.objective, sol.objective);
    }

    #[test]
    fn degenerate_base_is_refused() {
        let agents = vec![AgentProfile::scalar(-1.0, 3.0, &[1.0]).unwrap()];
        let lp = SharingProblem::new(1, vec![3.0], agents).unwrap().assemble().unwrap();
        let sol = solve_primal(&lp).unwrap();
        assert!(sol.flags.degenerate);
        let newcomer = AgentProfile::scalar(-5.0, 1.0, &[1.0]).unwrap();
        assert_eq!(changes_solution(&sol, &lp, &newcomer), Err(ArrivalError::DegenerateBase));
    }

    #[test]
    fn wrong_dimension_is_refused() {
        let (lp, sol) = toy();
        let newcomer = AgentProfile::scalar(-5.0, 1.0, &[1.0, 2.0]).unwrap();
        assert!(matches!(
            changes_solution(&sol, &lp, &newcomer),
            Err(ArrivalError::Dimension { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn constant_samplers() {
        let (lp, sol) = toy();
        let hot = AgentProfile::scalar(-5.0, 1.0, &[1.0]).unwrap();
        let est = empirical_violation_probability(&sol, &lp, |_| hot.clone(), 50, Some(10)).unwrap();
        assert_eq!((est.p_hat, est.changes, est.audited, est.audit_mismatches), (1.0, 50, 5, 0));
        let cold = AgentProfile::scalar(-0.5, 1.0, &[1.0]).unwrap();
        let est = empirical_violation_probability(&sol, &lp, |_| cold.clone(), 50, None).unwrap();
        assert_eq!((est.p_hat, est.audited), (0.0, 0));
    }

    #[test]
    fn counting() {
        let (lp, sol) = toy();
        let hot = AgentProfile::scalar(-5.0, 1.0, &[1.0]).unwrap();
        let cold = AgentProfile::scalar(-0.5, 1.0, &[1.0]).unwrap();
        let est = empirical_violation_probability(&sol, &lp, |d| if d < 37 { hot.clone() } else { cold.clone() }, 100, None)
            .unwrap();
        assert_eq!(est.p_hat, 0.37);
        assert_eq!(
            empirical_violation_probability(&sol, &lp, |_| cold.clone(), 0, None),
            Err(ArrivalError::NoDraws)
        );
    }
}
