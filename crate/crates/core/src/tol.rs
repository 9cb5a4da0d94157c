//! Numerical tolerances shared by the solver, the dual checks and the
//! active-agent counts. All values apply to row-scaled data.

/// Feasibility of `Ax = b` and of the box constraints.
pub const TOL_FEAS: f64 = 1e-8;

/// Classification of a variable as sitting at a bound.
pub const TOL_ACT: f64 = 1e-7;

/// Sign tests on reduced costs.
pub const TOL_RC: f64 = 1e-9;

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
pub const BLAND_TRIGGER: usize = 50;
