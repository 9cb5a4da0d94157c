use std::ops::Range;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::limit::Limit;

/// One agent: per-unit costs, upper limits and per-unit resource usage.
///
/// `usage` is stored row-major, one row per resource, each of length `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAgent", into = "RawAgent")]
pub struct AgentProfile {
    cost: Vec<f64>,
    limit: Vec<Limit>,
    usage: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawAgent {
    c: Vec<f64>,
    d: Vec<Limit>,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
}

impl TryFrom<RawAgent> for AgentProfile {
    type Error = ModelError;

    fn try_from(raw: RawAgent) -> Result<Self, Self::Error> {
        AgentProfile::new(raw.c, raw.d, raw.a)
    }
}

impl From<AgentProfile> for RawAgent {
    fn from(agent: AgentProfile) -> Self {
        RawAgent {
            c: agent.cost,
            d: agent.limit,
            a: agent.usage,
        }
    }
}

impl AgentProfile {
    pub fn new(cost: Vec<f64>, limit: Vec<Limit>, usage: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let n = cost.len();
        if n == 0 {
            return Err(ModelError::Shape("agent has no decision variables".into()));
        }
        if limit.len() != n {
            return Err(ModelError::Shape(format!(
                "agent has {n} costs but {} upper limits",
                limit.len()
            )));
        }
        if usage.is_empty() {
            return Err(ModelError::Shape("agent usage matrix has no rows".into()));
        }
        if let Some(row) = usage.iter().find(|row| row.len() != n) {
            return Err(ModelError::Shape(format!(
                "agent usage row has {} entries, expected {n}",
                row.len()
            )));
        }
        if cost.iter().chain(usage.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(ModelError::Value("costs and usages must be finite".into()));
        }
        for d in &limit {
            if let Limit::Finite(v) = d {
                if !(v.is_finite() && *v > 0.0) {
                    return Err(ModelError::Value(format!(
                        "finite upper limits must be positive, got {v}"
                    )));
                }
            }
        }
        Ok(AgentProfile { cost, limit, usage })
    }

    /// Single-variable agent, the shape used throughout the cargo benchmark.
    pub fn scalar(cost: f64, limit: impl Into<Limit>, usage: &[f64]) -> Result<Self, ModelError> {
        AgentProfile::new(
            vec![cost],
            vec![limit.into()],
            usage.iter().map(|&a| vec![a]).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.cost.len()
    }

    /// Number of resource rows.
    pub fn p(&self) -> usize {
        self.usage.len()
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn limit(&self) -> &[Limit] {
        &self.limit
    }

    pub fn usage(&self) -> &[Vec<f64>] {
        &self.usage
    }

    pub fn usage_column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.usage.iter().map(move |row| row[j])
    }
}

/// The assembled resource-sharing problem before expansion into matrix form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem", into = "RawProblem")]
pub struct SharingProblem {
    n0: usize,
    b: Vec<f64>,
    agents: Vec<AgentProfile>,
}

#[derive(Serialize, Deserialize)]
struct RawProblem {
    p: usize,
    n0: usize,
    b: Vec<f64>,
    agents: Vec<AgentProfile>,
}

impl TryFrom<RawProblem> for SharingProblem {
    type Error = ModelError;

    fn try_from(raw: RawProblem) -> Result<Self, Self::Error> {
        if raw.p != raw.b.len() {
            return Err(ModelError::Shape(format!(
                "p = {} but b has {} entries",
                raw.p,
                raw.b.len()
            )));
        }
        SharingProblem::new(raw.n0, raw.b, raw.agents)
    }
}

impl From<SharingProblem> for RawProblem {
    fn from(problem: SharingProblem) -> Self {
        RawProblem {
            p: problem.b.len(),
            n0: problem.n0,
            b: problem.b,
            agents: problem.agents,
        }
    }
}

impl SharingProblem {
    /// `n0` leading budget rows are inequalities, the remaining `p - n0` are
    /// equalities.
    pub fn new(n0: usize, b: Vec<f64>, agents: Vec<AgentProfile>) -> Result<Self, ModelError> {
        let p = b.len();
        if p == 0 {
            return Err(ModelError::Shape("problem needs at least one resource".into()));
        }
        if n0 > p {
            return Err(ModelError::Shape(format!("n0 = {n0} exceeds p = {p}")));
        }
        if b.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(ModelError::Value("resource totals must be finite and non-negative".into()));
        }
        for (i, agent) in agents.iter().enumerate() {
            if agent.p() != p {
                return Err(ModelError::Agent {
                    agent: i,
                    what: format!("usage has {} rows, expected {p}", agent.p()),
                });
            }
        }
        Ok(SharingProblem { n0, b, agents })
    }

    pub fn p(&self) -> usize {
        self.b.len()
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn agents(&self) -> &[AgentProfile] {
        &self.agents
    }

    pub fn m(&self) -> usize {
        self.agents.len()
    }

    /// Total variable count `ℓ = n0 + Σ nⁱ`.
    pub fn ell(&self) -> usize {
        self.n0 + self.agents.iter().map(AgentProfile::n).sum::<usize>()
    }

    pub fn with_agent(&self, agent: AgentProfile) -> Result<Self, ModelError> {
        let mut agents = self.agents.clone();
        agents.push(agent);
        SharingProblem::new(self.n0, self.b.clone(), agents)
    }

    pub fn assemble(&self) -> Result<AssembledLp, ModelError> {
        assemble(self)
    }
}

/// The problem in matrix form: `min cᵀx` s.t. `Ax = b`, `0 ≤ x ≤ d`.
///
/// Columns are ordered slack block first, then agents in input order.
#[derive(Clone, Debug, PartialEq)]
pub struct AssembledLp {
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<Limit>,
    pub n0: usize,
    /// Column range `𝒥ⁱ` of each agent.
    pub agent_cols: Vec<Range<usize>>,
}

impl AssembledLp {
    /// Builds a matrix-form problem directly. Only shapes are validated, so
    /// data violating the modelling assumptions (zero limits, rank deficient
    /// budgets) can be fed to the audit.
    pub fn from_parts(
        a: DMatrix<f64>,
        b: Vec<f64>,
        c: Vec<f64>,
        d: Vec<Limit>,
        n0: usize,
        agent_cols: Vec<Range<usize>>,
    ) -> Result<Self, ModelError> {
        let (p, ell) = a.shape();
        if b.len() != p || c.len() != ell || d.len() != ell || n0 > p.min(ell) {
            return Err(ModelError::Shape("inconsistent matrix-form dimensions".into()));
        }
        let mut next = n0;
        for r in &agent_cols {
            if r.start != next || r.end <= r.start || r.end > ell {
                return Err(ModelError::Shape("agent column ranges must tile n0..ell".into()));
            }
            next = r.end;
        }
        if next != ell {
            return Err(ModelError::Shape("agent column ranges must tile n0..ell".into()));
        }
        Ok(AssembledLp { a, b, c, d, n0, agent_cols })
    }

    pub fn p(&self) -> usize {
        self.a.nrows()
    }

    pub fn ell(&self) -> usize {
        self.a.ncols()
    }

    pub fn m(&self) -> usize {
        self.agent_cols.len()
    }

    /// Agent owning column `j`, `None` for the slack block.
    pub fn owner(&self, j: usize) -> Option<usize> {
        if j < self.n0 {
            return None;
        }
        self.agent_cols.iter().position(|r| r.contains(&j))
    }

    /// Appends a newcomer's columns, giving the `(m+1)`-agent problem.
    pub fn with_newcomer(&self, agent: &AgentProfile) -> Result<AssembledLp, ModelError> {
        let p = self.p();
        if agent.p() != p {
            return Err(ModelError::Shape(format!(
                "newcomer has {} rows, expected {p}",
                agent.p()
            )));
        }
        let ell = self.ell();
        let n = agent.n();
        let mut a = self.a.clone().resize_horizontally(ell + n, 0.0);
        for j in 0..n {
            for (r, v) in agent.usage_column(j).enumerate() {
                a[(r, ell + j)] = v;
            }
        }
        let mut c = self.c.clone();
        c.extend_from_slice(agent.cost());
        let mut d = self.d.clone();
        d.extend_from_slice(agent.limit());
        let mut agent_cols = self.agent_cols.clone();
        agent_cols.push(ell..ell + n);
        Ok(AssembledLp {
            a,
            b: self.b.clone(),
            c,
            d,
            n0: self.n0,
            agent_cols,
        })
    }
}

/// Expands a [`SharingProblem`] into `A = [A⁰ A¹ … Aᵐ]`, `c = [0 c¹ … cᵐ]`,
/// `d = [+∞ d¹ … dᵐ]` with `A⁰ = [I_{n0}; 0]`.
pub fn assemble(problem: &SharingProblem) -> Result<AssembledLp, ModelError> {
    let p = problem.p();
    let n0 = problem.n0();
    let ell = problem.ell();
    let mut a = DMatrix::zeros(p, ell);
    let mut c = vec![0.0; ell];
    let mut d = vec![Limit::Infinite; ell];
    let mut agent_cols = Vec::with_capacity(problem.m());
    for r in 0..n0 {
        a[(r, r)] = 1.0;
    }
    let mut col = n0;
    for (i, agent) in problem.agents().iter().enumerate() {
        if agent.p() != p {
            return Err(ModelError::Agent {
                agent: i,
                what: format!("usage has {} rows, expected {p}", agent.p()),
            });
        }
        for j in 0..agent.n() {
            for (r, v) in agent.usage_column(j).enumerate() {
                a[(r, col + j)] = v;
            }
            c[col + j] = agent.cost()[j];
            d[col + j] = agent.limit()[j];
        }
        agent_cols.push(col..col + agent.n());
        col += agent.n();
    }
    Ok(AssembledLp {
        a,
        b: problem.b().to_vec(),
        c,
        d,
        n0,
        agent_cols,
    })
}
