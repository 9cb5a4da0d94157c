//! Budget multipliers and upper-limit multipliers of the sharing program,
//! recovered three ways: in closed form from the optimal basis, from the full
//! dual program, and from the relaxation-form dual where only the budget
//! constraint is dualized. All dual programs go through the same simplex as
//! the primal.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::SolveError;
use crate::limit::Limit;
use crate::lp_core::simplex::solve_bounded;
use crate::lp_core::{AssembledLp, BasisFactor, BasisPartition, PrimalSolution};
use crate::tol::TOL_ACT;

/// Optimal multipliers: `lambda` for the budget rows, `nu` for the upper
/// limits (length `ℓ`, zero on the slack block), `h` per agent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualCertificate {
    pub lambda: Vec<f64>,
    pub nu: Vec<f64>,
    pub h: Vec<f64>,
}

impl DualCertificate {
    /// `-λᵀb - Σ ν_j d_j` with `∞ · 0 = 0`.
    pub fn objective(&self, lp: &AssembledLp) -> f64 {
        let budget: f64 = self.lambda.iter().zip(&lp.b).map(|(l, b)| l * b).sum();
        let limits: f64 = self.nu.iter().zip(&lp.d).map(|(&nu, d)| d.scale(nu)).sum();
        -budget - limits
    }
}

/// `[-cᵀ - λᵀA]_j`.
pub fn dual_slack(lp: &AssembledLp, lambda: &[f64], j: usize) -> f64 {
    -lp.c[j] - lp.a.column(j).iter().zip(lambda).map(|(a, l)| a * l).sum::<f64>()
}

/// `λ★ = -(c_Bᵀ A_B⁻¹)ᵀ`.
pub fn dual_closed_form(lp: &AssembledLp, partition: &BasisPartition) -> Result<Vec<f64>, SolveError> {
    let factor = BasisFactor::new(lp, &partition.basic)?;
    Ok(factor.multipliers().iter().map(|y| -y).collect())
}

/// Completes a multiplier vector `λ` into a full certificate:
/// `ν_j = max{0, [-cᵀ - λᵀA]_j}` on finite limits (zero on infinite ones and
/// on the slack block) and `hⁱ = Σ_{j∈𝒥ⁱ} ν_j d_j`.
pub fn certificate_from_lambda(lp: &AssembledLp, lambda: Vec<f64>) -> DualCertificate {
    let mut nu = vec![0.0; lp.ell()];
    for range in &lp.agent_cols {
        for j in range.clone() {
            if lp.d[j].is_finite() {
                nu[j] = dual_slack(lp, &lambda, j).max(0.0);
            }
        }
    }
    let h = relaxation_values(lp, &nu);
    DualCertificate { lambda, nu, h }
}

/// Certificate built from the optimal basis through the closed form.
pub fn dual_from_basis(lp: &AssembledLp, partition: &BasisPartition) -> Result<DualCertificate, SolveError> {
    Ok(certificate_from_lambda(lp, dual_closed_form(lp, partition)?))
}

fn relaxation_values(lp: &AssembledLp, nu: &[f64]) -> Vec<f64> {
    lp.agent_cols
        .iter()
        .map(|range| range.clone().map(|j| lp.d[j].scale(nu[j])).sum())
        .collect()
}

/// Column layout shared by both dual transcriptions.
struct DualLayout {
    p: usize,
    n0: usize,
    /// Agent columns of the primal, one dual row each.
    rows: Vec<usize>,
    /// Primal columns with a finite limit, each owning a `ν` variable.
    nu_cols: Vec<usize>,
}

impl DualLayout {
    fn new(lp: &AssembledLp) -> Self {
        let rows: Vec<usize> = (lp.n0..lp.ell()).collect();
        let nu_cols = rows.iter().copied().filter(|&j| lp.d[j].is_finite()).collect();
        DualLayout {
            p: lp.p(),
            n0: lp.n0,
            rows,
            nu_cols,
        }
    }

    fn n_lambda(&self) -> usize {
        self.p + (self.p - self.n0)
    }

    /// Writes the constraint rows `-λᵀA_j - ν_j + s_j = c_j` into `a`
    /// starting at variable offset 0 (`λ⁺`, `λ⁻`, `ν`) and slack offset
    /// `slack_at`.
    fn fill(&self, lp: &AssembledLp, a: &mut DMatrix<f64>, slack_at: usize) -> Vec<f64> {
        let mut rhs = Vec::with_capacity(self.rows.len());
        for (r, &j) in self.rows.iter().enumerate() {
            for k in 0..self.p {
                a[(r, k)] = -lp.a[(k, j)];
            }
            for k in self.n0..self.p {
                a[(r, self.p + k - self.n0)] = lp.a[(k, j)];
            }
            if let Some(pos) = self.nu_cols.iter().position(|&c| c == j) {
                a[(r, self.n_lambda() + pos)] = -1.0;
            }
            a[(r, slack_at + r)] = 1.0;
            rhs.push(lp.c[j]);
        }
        rhs
    }

    fn lambda_costs(&self, lp: &AssembledLp) -> Vec<f64> {
        let mut c: Vec<f64> = lp.b.clone();
        c.extend(lp.b[self.n0..].iter().map(|b| -b));
        c
    }

    fn lambda_from(&self, x: &[f64]) -> Vec<f64> {
        (0..self.p)
            .map(|k| {
                let minus = if k >= self.n0 { x[self.p + k - self.n0] } else { 0.0 };
                x[k] - minus
            })
            .collect()
    }

    fn nu_from(&self, ell: usize, x: &[f64]) -> Vec<f64> {
        let mut nu = vec![0.0; ell];
        for (pos, &j) in self.nu_cols.iter().enumerate() {
            nu[j] = x[self.n_lambda() + pos];
        }
        nu
    }
}

/// Solution of one of the dual programs in maximization form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualSolution {
    pub certificate: DualCertificate,
    pub objective: f64,
}

/// Solves the full dual
/// `max -λᵀb - Σ νⁱᵀdⁱ` s.t. `λᵀA⁰ ≥ 0`, `-cⁱᵀ - λᵀAⁱ ≤ νⁱᵀ`, `νⁱ ≥ 0`.
///
/// Inequality rows get `λ_r ≥ 0` structurally; equality rows get a free
/// `λ_r = λ⁺_r - λ⁻_r`. Coordinates of `ν` under infinite limits are fixed at
/// zero.
pub fn solve_dual_dm(lp: &AssembledLp) -> Result<DualSolution, SolveError> {
    let layout = DualLayout::new(lp);
    if layout.rows.is_empty() {
        let cert = certificate_from_lambda(lp, vec![0.0; lp.p()]);
        let objective = cert.objective(lp);
        return Ok(DualSolution { certificate: cert, objective });
    }
    let n_nu = layout.nu_cols.len();
    let slack_at = layout.n_lambda() + n_nu;
    let ncols = slack_at + layout.rows.len();
    let mut a = DMatrix::zeros(layout.rows.len(), ncols);
    let rhs = layout.fill(lp, &mut a, slack_at);
    let mut cost = layout.lambda_costs(lp);
    cost.extend(layout.nu_cols.iter().map(|&j| lp.d[j].as_f64()));
    cost.resize(ncols, 0.0);
    let upper = vec![Limit::Infinite; ncols];
    let out = solve_bounded(&a, &rhs, &cost, &upper)?;
    let lambda = layout.lambda_from(&out.x);
    let nu = layout.nu_from(lp.ell(), &out.x);
    let h = relaxation_values(lp, &nu);
    Ok(DualSolution {
        certificate: DualCertificate { lambda, nu, h },
        objective: -out.objective,
    })
}

/// Solution of the relaxation-form dual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelaxedDual {
    pub lambda: Vec<f64>,
    pub h: Vec<f64>,
    pub objective: f64,
}

/// Solves the relaxation-form dual `max -λᵀb - Σ hⁱ` s.t. `λᵀA⁰ ≥ 0` and
/// `max{0, -cⁱᵀ - λᵀAⁱ} dⁱ ≤ hⁱ`, with the inner positive part lifted into
/// auxiliary `νⁱ ≥ -cⁱᵀ - λᵀAⁱ`, `νⁱ ≥ 0`, `νⁱᵀdⁱ ≤ hⁱ`.
pub fn solve_dual_dtilde(lp: &AssembledLp) -> Result<RelaxedDual, SolveError> {
    let layout = DualLayout::new(lp);
    let m = lp.m();
    if layout.rows.is_empty() {
        let lambda = vec![0.0; lp.p()];
        return Ok(RelaxedDual {
            objective: 0.0,
            lambda,
            h: vec![0.0; m],
        });
    }
    let n_nu = layout.nu_cols.len();
    let h_at = layout.n_lambda() + n_nu;
    let slack_at = h_at + m;
    let t_at = slack_at + layout.rows.len();
    let ncols = t_at + m;
    let nrows = layout.rows.len() + m;
    let mut a = DMatrix::zeros(nrows, ncols);
    let mut rhs = layout.fill(lp, &mut a, slack_at);
    for (i, range) in lp.agent_cols.iter().enumerate() {
        let r = layout.rows.len() + i;
        for j in range.clone() {
            if let Some(pos) = layout.nu_cols.iter().position(|&c| c == j) {
                a[(r, layout.n_lambda() + pos)] = lp.d[j].as_f64();
            }
        }
        a[(r, h_at + i)] = -1.0;
        a[(r, t_at + i)] = 1.0;
        rhs.push(0.0);
    }
    let mut cost = layout.lambda_costs(lp);
    cost.resize(h_at, 0.0);
    cost.extend(std::iter::repeat_n(1.0, m));
    cost.resize(ncols, 0.0);
    let upper = vec![Limit::Infinite; ncols];
    let out = solve_bounded(&a, &rhs, &cost, &upper)?;
    Ok(RelaxedDual {
        lambda: layout.lambda_from(&out.x),
        h: out.x[h_at..h_at + m].to_vec(),
        objective: -out.objective,
    })
}

/// Outcome of the complementary-slackness and strict-equivalence checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlacknessReport {
    /// `max_j |[x★ - d]_j ν★_j|` with `∞ · 0 = 0`.
    pub limit_products: f64,
    /// `max_j |[-cᵀ - λ★ᵀA - ν★ᵀ]_j x★_j|`.
    pub cost_products: f64,
    /// `x★_j ∈ (0, d_j) ⟺ [-cᵀ - λ★ᵀA]_j = 0` for every `j`.
    pub interior_equivalence: bool,
    /// `x★_j = d_j ⟺ ν★_j > 0` for every `j`.
    pub limit_equivalence: bool,
    pub failure: Option<String>,
}

impl SlacknessReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.limit_products <= tol && self.cost_products <= tol && self.interior_equivalence && self.limit_equivalence
    }
}

pub fn verify_complementary_slackness(
    lp: &AssembledLp,
    primal: &PrimalSolution,
    dual: &DualCertificate,
) -> SlacknessReport {
    let mut limit_products: f64 = 0.0;
    let mut cost_products: f64 = 0.0;
    let mut failure = None;
    let mut interior_equivalence = true;
    let mut limit_equivalence = true;
    for j in 0..lp.ell() {
        let x = primal.x[j];
        let nu = dual.nu[j];
        let gap = match lp.d[j] {
            Limit::Finite(d) => (x - d) * nu,
            Limit::Infinite if nu == 0.0 => 0.0,
            Limit::Infinite => f64::INFINITY,
        };
        limit_products = limit_products.max(gap.abs());
        let slack = dual_slack(lp, &dual.lambda, j);
        cost_products = cost_products.max(((slack - nu) * x).abs());

        let interior = x > TOL_ACT && lp.d[j].headroom(x) > TOL_ACT;
        if interior != (slack.abs() <= TOL_ACT) {
            interior_equivalence = false;
            failure.get_or_insert_with(|| format!("index {j}: interior = {interior}, dual slack = {slack:e}"));
        }
        let at_limit = lp.d[j].finite().is_some_and(|d| (x - d).abs() <= TOL_ACT);
        if at_limit != (nu > TOL_ACT) {
            limit_equivalence = false;
            failure.get_or_insert_with(|| format!("index {j}: at limit = {at_limit}, nu = {nu:e}"));
        }
    }
    SlacknessReport {
        limit_products,
        cost_products,
        interior_equivalence,
        limit_equivalence,
        failure,
    }
}
