use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::SolveError;
use crate::lp_core::AssembledLp;

/// Factorization of a basis matrix `A_B` together with the simplex
/// multipliers `yᵀ = c_Bᵀ A_B⁻¹`.
#[derive(Clone, Debug)]
pub struct BasisFactor {
    lu: LU<f64, Dyn, Dyn>,
    multipliers: DVector<f64>,
}

impl BasisFactor {
    pub fn new(lp: &AssembledLp, basic: &[usize]) -> Result<Self, SolveError> {
        let p = lp.p();
        if basic.len() != p {
            return Err(SolveError::SingularBasis);
        }
        let mut ab = DMatrix::zeros(p, p);
        for (k, &j) in basic.iter().enumerate() {
            ab.set_column(k, &lp.a.column(j));
        }
        if numerical_rank(&ab) < p {
            return Err(SolveError::SingularBasis);
        }
        let cb = DVector::from_iterator(p, basic.iter().map(|&j| lp.c[j]));
        let multipliers = ab
            .transpose()
            .lu()
            .solve(&cb)
            .ok_or(SolveError::SingularBasis)?;
        Ok(BasisFactor {
            lu: ab.lu(),
            multipliers,
        })
    }

    /// `yᵀ = c_Bᵀ A_B⁻¹`, so the budget multipliers are `λ★ = -y`.
    pub fn multipliers(&self) -> &DVector<f64> {
        &self.multipliers
    }

    /// `A_B⁻¹ v`.
    pub fn solve(&self, v: &DVector<f64>) -> Result<DVector<f64>, SolveError> {
        self.lu.solve(v).ok_or(SolveError::SingularBasis)
    }

    /// Reduced cost `c_j - yᵀ a` of a column `a` with cost `c_j`.
    pub fn reduced_cost<I: IntoIterator<Item = f64>>(&self, cost: f64, column: I) -> f64 {
        cost - column
            .into_iter()
            .zip(self.multipliers.iter())
            .map(|(a, y)| a * y)
            .sum::<f64>()
    }
}

/// Rank from singular values, relative threshold `1e-10 · σ_max`.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * top).count()
}
