//! Exact rational evaluation of the bound polynomials.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn big(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Value of the polynomial for `(m, k, β)` at `t` and the magnitude of its
/// largest term.
pub fn poly(m: usize, k: usize, beta: f64, t: &BigRational) -> (BigRational, BigRational) {
    let beta = rational(beta);
    let mm = BigRational::from_integer(BigInt::from(m));
    let low = &beta / (BigRational::from_integer(2.into()) * &mm);
    let high = &beta / (BigRational::from_integer(6.into()) * &mm);
    let mut powers = vec![BigRational::one()];
    for e in 1..=4 * m - k {
        let next = &powers[e - 1] * t;
        powers.push(next);
    }
    let pow = |e: usize| powers[e].clone();
    let mut value = BigRational::zero();
    let mut top = BigRational::zero();
    let mut add = |term: BigRational, sign: i32| {
        if term > top {
            top = term.clone();
        }
        if sign > 0 {
            value += term;
        } else {
            value -= term;
        }
    };
    if k < m {
        add(big(binomial(m, k)) * pow(m - k), 1);
        for i in k..m {
            add(&low * big(binomial(i, k)) * pow(i - k), -1);
        }
    } else {
        add(BigRational::one(), 1);
    }
    for i in m + 1..=4 * m {
        add(&high * big(binomial(i, k)) * pow(i - k), -1);
    }
    (value, top)
}

/// `|value| / largest term` at an `f64` point, evaluated exactly.
pub fn normalized_residual(m: usize, k: usize, beta: f64, t: f64) -> f64 {
    let (v, top) = poly(m, k, beta, &rational(t));
    (v.abs() / top).to_f64().unwrap()
}

pub fn sign_at(m: usize, k: usize, beta: f64, t: f64) -> i32 {
    let (v, _) = poly(m, k, beta, &rational(t));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Bisection on `[lo, hi]` (sign change required) with exact sign tests,
/// for at most `iters` halvings.
pub fn bisect(m: usize, k: usize, beta: f64, lo: f64, hi: f64, iters: usize) -> f64 {
    let mut lo = rational(lo);
    let mut hi = rational(hi);
    let s_lo = poly(m, k, beta, &lo).0.is_positive();
    assert_ne!(s_lo, poly(m, k, beta, &hi).0.is_positive(), "no sign change");
    let two = BigRational::from_integer(2.into());
    for _ in 0..iters {
        // Midpoints are snapped to the nearest f64 to keep denominators small.
        let mid = rational(((&lo + &hi) / &two).to_f64().unwrap());
        if mid == lo || mid == hi {
            break;
        }
        if poly(m, k, beta, &mid).0.is_positive() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ((lo + hi) / two).to_f64().unwrap()
}
