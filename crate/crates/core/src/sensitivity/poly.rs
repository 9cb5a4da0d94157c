//! Evaluation of the confidence-bound polynomials and their roots.
//!
//! Every term `C(i,k) tⁱ⁻ᵏ` is handled as `exp(ln C(i,k) + (i-k) ln t)`, so
//! degree-`4m` polynomials with `m` in the thousands stay finite. The
//! positive part of the polynomial is a single monomial, which makes
//! `g(s) = ln P(eˢ) - ln N(eˢ)` concave in `s = ln t`: its two zeros are
//! found by locating the maximum and walking outward.

use serde::Serialize;

use crate::error::BoundsError;

/// Terms more than this many nats below the largest are dropped.
const PRUNE: f64 = 60.0;

/// `ln C(i, k)` for `i = k..=top`, accumulated with Kahan compensation.
pub fn ln_binomial_column(k: usize, top: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(top.saturating_sub(k) + 1);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    out.push(0.0);
    for i in k + 1..=top {
        let step = (k as f64 / (i - k) as f64).ln_1p() - comp;
        let next = sum + step;
        comp = (next - sum) - step;
        sum = next;
        out.push(sum);
    }
    out
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    assert!(k <= n, "k must not exceed n");
    let k = k.min(n - k);
    ln_binomial_column(k, n)[n - k]
}

fn check(m: usize, k: usize, beta: f64) -> Result<(), BoundsError> {
    if m == 0 {
        return Err(BoundsError::InvalidParameter("m must be at least 1".into()));
    }
    if k > m {
        return Err(BoundsError::InvalidParameter(format!("k = {k} exceeds m = {m}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(BoundsError::InvalidParameter(format!("beta = {beta} is not in (0, 1)")));
    }
    Ok(())
}

/// Value of a bound polynomial kept as sign and log-magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolyValue {
    pub sign: i8,
    /// `ln |value|`; `-inf` when the value is zero.
    pub ln_abs: f64,
    /// Value divided by the largest individual term.
    pub normalized: f64,
}

impl PolyValue {
    pub fn value(&self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }
}

/// The polynomial for one `(m, k, β)` as a list of log-coefficients.
#[derive(Clone, Debug)]
pub struct BoundPolynomial {
    m: usize,
    k: usize,
    beta: f64,
    /// `ln` of the coefficient of the single positive monomial and its power.
    pos: (f64, f64),
    /// Negative terms: `(ln coefficient, power)`.
    neg: Vec<(f64, f64)>,
}

struct Eval {
    /// `ln P - ln N`.
    gap: f64,
    /// `d gap / d ln t`.
    slope: f64,
    value: PolyValue,
}

impl BoundPolynomial {
    pub fn new(m: usize, k: usize, beta: f64) -> Result<Self, BoundsError> {
        check(m, k, beta)?;
        let col = ln_binomial_column(k, 4 * m);
        let mf = m as f64;
        let low = (beta / (2.0 * mf)).ln();
        let high = (beta / (6.0 * mf)).ln();
        let mut neg = Vec::with_capacity(4 * m - k);
        if k < m {
            for i in k..m {
                neg.push((low + col[i - k], (i - k) as f64));
            }
        }
        for i in m + 1..=4 * m {
            neg.push((high + col[i - k], (i - k) as f64));
        }
        let pos = if k < m { (col[m - k], (m - k) as f64) } else { (0.0, 0.0) };
        Ok(BoundPolynomial { m, k, beta, pos, neg })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Evaluates at `t ≥ 0`.
    pub fn value(&self, t: f64) -> Result<PolyValue, BoundsError> {
        if t.is_nan() || t < 0.0 || t.is_infinite() {
            return Err(BoundsError::InvalidParameter(format!("t = {t} must be finite and nonnegative")));
        }
        Ok(self.eval(t.ln()).value)
    }

    fn term(&self, (ln_a, e): (f64, f64), s: f64) -> f64 {
        if e == 0.0 {
            ln_a
        } else {
            ln_a + e * s
        }
    }

    fn eval(&self, s: f64) -> Eval {
        let lp = self.term(self.pos, s);
        let mut top = f64::NEG_INFINITY;
        let logs: Vec<f64> = self
            .neg
            .iter()
            .map(|&t| {
                let v = self.term(t, s);
                top = top.max(v);
                v
            })
            .collect();
        let (mut sum, mut comp, mut weighted) = (0.0f64, 0.0f64, 0.0f64);
        if top > f64::NEG_INFINITY {
            for (v, &(_, e)) in logs.iter().zip(&self.neg) {
                if *v < top - PRUNE {
                    continue;
                }
                let w = (v - top).exp();
                weighted += w * e;
                let y = w - comp;
                let next = sum + y;
                comp = (next - sum) - y;
                sum = next;
            }
        }
        let ln_n = if sum > 0.0 { top + sum.ln() } else { f64::NEG_INFINITY };
        let avg_power = if sum > 0.0 { weighted / sum } else { 0.0 };
        let slope = self.pos.1 - avg_power;

        let scale = lp.max(top);
        let p_scaled = (lp - scale).exp();
        let n_scaled = if sum > 0.0 { sum * (top - scale).exp() } else { 0.0 };
        let diff = p_scaled - n_scaled;
        let sign = if diff > 0.0 {
            1
        } else if diff < 0.0 {
            -1
        } else {
            0
        };
        let value = PolyValue {
            sign,
            ln_abs: scale + diff.abs().ln(),
            normalized: diff,
        };
        Eval {
            gap: lp - ln_n,
            slope,
            value,
        }
    }

    fn failure(&self) -> BoundsError {
        BoundsError::BracketFailure {
            m: self.m,
            k: self.k,
            beta: self.beta,
        }
    }

    /// Point of maximal `ln P - ln N` in `s = ln t`.
    fn peak(&self) -> Result<f64, BoundsError> {
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        while self.eval(lo).slope <= 0.0 {
            lo *= 2.0;
            if lo < -1e4 {
                return Err(self.failure());
            }
        }
        while self.eval(hi).slope >= 0.0 {
            hi *= 2.0;
            if hi > 1e4 {
                return Err(self.failure());
            }
        }
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid).slope > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Walks from `from` in direction `dir` until the polynomial is negative.
    fn walk(&self, from: f64, dir: f64) -> Result<f64, BoundsError> {
        let mut step = 1.0;
        loop {
            let s = from + dir * step;
            if self.eval(s).gap < 0.0 {
                return Ok(s);
            }
            step *= 2.0;
            if step > 1e4 {
                return Err(self.failure());
            }
        }
    }

    /// Bisects a sign change between `neg` (negative) and `pos` (positive),
    /// first in `ln t` and then in `t` down to adjacent floating-point values.
    fn bisect(&self, mut neg: f64, mut pos: f64) -> f64 {
        while (neg - pos).abs() > 1e-3 {
            let mid = 0.5 * (neg + pos);
            if self.eval(mid).gap < 0.0 {
                neg = mid;
            } else {
                pos = mid;
            }
        }
        let (mut tn, mut tp) = (neg.exp(), pos.exp());
        loop {
            let mid = 0.5 * (tn + tp);
            if mid == tn || mid == tp {
                break;
            }
            if self.eval(mid.ln()).gap < 0.0 {
                tn = mid;
            } else {
                tp = mid;
            }
        }
        let rn = self.eval(tn.ln()).value.normalized.abs();
        let rp = self.eval(tp.ln()).value.normalized.abs();
        if rn <= rp {
            tn
        } else {
            tp
        }
    }

    /// Roots `(t_low, t_high)`; for `k = m` the lower root is `0` by
    /// convention.
    pub fn roots(&self) -> Result<(f64, f64), BoundsError> {
        if self.k == self.m {
            // `g` decreases from `+∞`; any `s` with `g > 0` starts the walk.
            let mut s = 0.0;
            while self.eval(s).gap <= 0.0 {
                s -= 1.0 + s.abs();
                if s < -1e4 {
                    return Err(self.failure());
                }
            }
            let hi = self.walk(s, 1.0)?;
            return Ok((0.0, self.bisect(hi, s)));
        }
        let peak = self.peak()?;
        if self.eval(peak).gap <= 0.0 {
            return Err(self.failure());
        }
        let lo = self.walk(peak, -1.0)?;
        let hi = self.walk(peak, 1.0)?;
        Ok((self.bisect(lo, peak), self.bisect(hi, peak)))
    }

    /// `|normalized value|` at `t`.
    pub fn residual(&self, t: f64) -> f64 {
        self.eval(t.ln()).value.normalized.abs()
    }
}

/// Value of the bound polynomial for `(m, k, β)` at `t`.
pub fn poly_value(m: usize, k: usize, beta: f64, t: f64) -> Result<PolyValue, BoundsError> {
    BoundPolynomial::new(m, k, beta)?.value(t)
}

/// Roots `(t_low, t_high)` of the bound polynomial for `(m, k, β)`.
pub fn solve_roots(m: usize, k: usize, beta: f64) -> Result<(f64, f64), BoundsError> {
    BoundPolynomial::new(m, k, beta)?.roots()
}

/// Closed-form loose upper bound `1 - (β / (m C(m,k)))^{1/(m-k)}`, equal to
/// `1` at `k = m`. Applied unchanged at `k = 0`.
pub fn explicit_upper_bound(m: usize, k: usize, beta: f64) -> Result<f64, BoundsError> {
    check(m, k, beta)?;
    if k == m {
        return Ok(1.0);
    }
    let ln_ratio = beta.ln() - (m as f64).ln() - ln_binomial(m, k);
    Ok((1.0 - (ln_ratio / (m - k) as f64).exp()).clamp(0.0, 1.0))
}
