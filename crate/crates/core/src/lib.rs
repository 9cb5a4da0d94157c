//! Optimal allocation for linear multi-agent resource-sharing problems, and
//! confidence intervals on the probability that a newly arriving agent
//! changes that allocation.
//!
//! The crate is organised bottom-up:
//!
//! - [`lp_core`]: the sharing program, its bounded-variable simplex solver
//!   and checks on the optimal vertex;
//! - [`duality`]: budget multipliers recovered in closed form and from two
//!   dual programs, plus complementary-slackness verification;
//! - [`sensitivity`]: the polynomial confidence bounds, active-agent counts
//!   and the resulting interval;
//! - [`new_agent`]: the reduced-cost certificate for an arriving agent and
//!   its empirical violation frequency;
//! - [`harness`]: the cargo-loading Monte Carlo campaigns.

pub mod duality;
pub mod error;
pub mod harness;
pub mod io;
pub mod limit;
pub mod lp_core;
pub mod new_agent;
pub mod sensitivity;
pub mod tol;

pub use error::{Error, Result};
pub use limit::Limit;
pub use lp_core::{assemble, solve_primal, AgentProfile, AssembledLp, PrimalSolution, SharingProblem};
