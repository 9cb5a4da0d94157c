//! Comparisons against independent oracles: exact rational evaluation of
//! the bound polynomials and exhaustive vertex enumeration of small LPs.

mod common;

use common::exact;
use common::{max_abs_diff, random_problem, rel_gap, rng, vertex_oracle, Shape};
use num_traits::ToPrimitive;
use share_sense::lp_core::{solve_primal, AgentProfile, SharingProblem};
use share_sense::sensitivity::{epsilon_table, ln_binomial, poly_value, solve_roots};

// Roots for m = 1, k = 0, beta = 0.1, obtained by exact bisection.
const T_LOW_1_0: f64 = 0.050_043_933_284_056_4;
const T_HIGH_1_0: f64 = 3.511_600_883_865_04;

#[test]
fn frozen_roots_match_exact_bisection() {
    let lo = exact::bisect(1, 0, 0.1, 0.0, 1.0, 200);
    let hi = exact::bisect(1, 0, 0.1, 1.0, 10.0, 200);
    assert!((lo - T_LOW_1_0).abs() < 1e-15, "{lo}");
    assert!((hi - T_HIGH_1_0).abs() < 1e-14, "{hi}");
    let (elo, ehi) = solve_roots(1, 0, 0.1).unwrap();
    assert!((elo - T_LOW_1_0).abs() < 1e-12);
    assert!((ehi - T_HIGH_1_0).abs() < 1e-12);
    let row = &epsilon_table(1, 0.1).unwrap().rows[0];
    assert_eq!(row.eps_low, 0.0);
    assert!((row.eps_high - (1.0 - T_LOW_1_0)).abs() < 1e-12);
}

#[test]
fn polynomial_values_match_exact() {
    let (v, _) = exact::poly(1, 0, 0.1, &exact::rational(1.0));
    assert!((v.to_f64().unwrap() - 0.9).abs() < 1e-15);
    assert!((poly_value(1, 0, 0.1, 1.0).unwrap().value() - 0.9).abs() < 1e-14);
    for &(m, k, t) in &[(3usize, 1usize, 0.7), (5, 5, 0.4), (8, 0, 1.3), (12, 6, 0.05)] {
        let (v, top) = exact::poly(m, k, 0.01, &exact::rational(t));
        let got = poly_value(m, k, 0.01, t).unwrap();
        let err = (got.value() - v.to_f64().unwrap()).abs() / top.to_f64().unwrap();
        assert!(err < 1e-13, "m={m} k={k} t={t}: {err:e}");
    }
}

#[test]
fn roots_have_small_exact_residual_and_sign_pattern() {
    for &m in &[1usize, 2, 5, 10, 20] {
        for &beta in &[0.1, 1e-4, 1e-8] {
            for k in 0..=m {
                let (lo, hi) = solve_roots(m, k, beta).unwrap();
                let r = exact::normalized_residual(m, k, beta, hi);
                assert!(r < 1e-10, "m={m} k={k} beta={beta}: residual {r:e} at t_high");
                if k < m {
                    let r = exact::normalized_residual(m, k, beta, lo);
                    assert!(r < 1e-10, "m={m} k={k} beta={beta}: residual {r:e} at t_low");
                    assert_eq!(exact::sign_at(m, k, beta, lo / 2.0), -1);
                    assert_eq!(exact::sign_at(m, k, beta, 0.5 * (lo + hi)), 1);
                } else {
                    assert_eq!(lo, 0.0);
                    assert_eq!(exact::sign_at(m, k, beta, hi / 2.0), 1);
                }
                assert_eq!(exact::sign_at(m, k, beta, 2.0 * hi), -1);
            }
        }
    }
}

#[test]
fn log_binomials_match_integers() {
    for n in 0..=60 {
        for k in 0..=n {
            let exact = exact::binomial(n, k).to_f64().unwrap().ln();
            let got = ln_binomial(n, k);
            assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0), "C({n},{k})");
        }
    }
}

#[test]
fn toy_matches_vertex_oracle() {
    let agents = vec![
        AgentProfile::scalar(-3.0, 2.0, &[1.0]).unwrap(),
        AgentProfile::scalar(-1.0, 2.0, &[1.0]).unwrap(),
    ];
    let lp = SharingProblem::new(1, vec![3.0], agents).unwrap().assemble().unwrap();
    let oracle = vertex_oracle(&lp).unwrap();
    assert_eq!(oracle.objective, -7.0);
    assert_eq!(oracle.x, vec![0.0, 2.0, 1.0]);
    assert_eq!(solve_primal(&lp).unwrap().x, oracle.x);
}

#[test]
fn newcomer_example_matches_vertex_oracle() {
    let agents = vec![
        AgentProfile::scalar(-3.0, 2.0, &[1.0]).unwrap(),
        AgentProfile::scalar(-1.0, 2.0, &[1.0]).unwrap(),
        AgentProfile::scalar(-5.0, 1.0, &[1.0]).unwrap(),
    ];
    let lp = SharingProblem::new(1, vec![3.0], agents).unwrap().assemble().unwrap();
    let oracle = vertex_oracle(&lp).unwrap();
    assert_eq!(oracle.objective, -11.0);
    assert_eq!(oracle.x, vec![0.0, 2.0, 0.0, 1.0]);
}

#[test]
fn random_small_instances_match_vertex_oracle() {
    let mut r = rng(17);
    for _ in 0..100 {
        let lp = random_problem(&mut r, Shape { max_ell: 9, ..Shape::default() }).assemble().unwrap();
        let sol = solve_primal(&lp).unwrap();
        let oracle = vertex_oracle(&lp).unwrap();
        assert!(rel_gap(sol.objective, oracle.objective) < 1e-8);
        if oracle.unique {
            assert!(max_abs_diff(&sol.x, &oracle.x) < 1e-6);
        }
    }
}
