//! The resource-sharing linear program: model types, assembly into matrix
//! form, the bounded-variable simplex, and checks on the optimal vertex.

mod basis;
mod checks;
mod model;
pub mod simplex;
mod solution;

pub use basis::{numerical_rank, BasisFactor};
pub use checks::{
    active_constraints, audit_assumptions, budget_residual, check_basic_solution, AuditReport, BasicCheck,
};
pub use model::{assemble, AgentProfile, AssembledLp, SharingProblem};
pub use solution::{reduced_costs, solve_primal, BasisPartition, PrimalSolution, ReducedCosts, SolveFlags};
