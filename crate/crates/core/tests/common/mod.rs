#![allow(dead_code)]

pub mod exact;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use share_sense::lp_core::{AgentProfile, AssembledLp, SharingProblem};
use share_sense::Limit;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random instance.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_ell: usize,
    pub max_p: usize,
    /// Probability that an agent variable has no upper limit.
    pub p_infinite: f64,
    /// Forces all rows to be equalities.
    pub equalities_only: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_ell: 12,
            max_p: 3,
            p_infinite: 0.15,
            equalities_only: false,
        }
    }
}

/// Strictly positive usage, so the feasible set is bounded. The budget is
/// built from a random feasible point.
pub fn random_problem<R: Rng>(rng: &mut R, shape: Shape) -> SharingProblem {
    let p = rng.gen_range(1..=shape.max_p);
    let n0 = if shape.equalities_only { 0 } else { rng.gen_range(0..=p) };
    let mut agents = Vec::new();
    let mut ell = n0;
    let mut point = Vec::new();
    let target = rng.gen_range((n0 + 1).max(p)..=shape.max_ell);
    while ell < target {
        let n = rng.gen_range(1..=2).min(target - ell);
        let cost: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..1.0)).collect();
        let limit: Vec<Limit> = (0..n)
            .map(|_| {
                if rng.gen_bool(shape.p_infinite) {
                    Limit::Infinite
                } else {
                    Limit::Finite(rng.gen_range(0.5..3.0))
                }
            })
            .collect();
        let usage: Vec<Vec<f64>> = (0..p).map(|_| (0..n).map(|_| rng.gen_range(0.1..2.0)).collect()).collect();
        for l in &limit {
            let cap = l.finite().unwrap_or(3.0);
            point.push(rng.gen_range(0.0..cap));
        }
        agents.push(AgentProfile::new(cost, limit, usage).unwrap());
        ell += n;
    }
    let mut b = vec![0.0; p];
    let mut col = 0;
    for a in &agents {
        for j in 0..a.n() {
            for (r, v) in a.usage_column(j).enumerate() {
                b[r] += v * point[col];
            }
            col += 1;
        }
    }
    for br in b.iter_mut().take(n0) {
        *br += rng.gen_range(0.0..2.0);
    }
    SharingProblem::new(n0, b, agents).unwrap()
}

/// Best vertex found by enumerating every basis and every assignment of the
/// nonbasic variables to their bounds.
#[derive(Clone, Debug)]
pub struct Vertex {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Whether every vertex within `1e-9` of the optimum has the same `x`.
    pub unique: bool,
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..n {
                        a[r][c] -= f * a[col][c];
                    }
                    rhs[r] -= f * rhs[col];
                }
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn vertex_oracle(lp: &AssembledLp) -> Option<Vertex> {
    let p = lp.p();
    let ell = lp.ell();
    let mut best: Option<Vertex> = None;
    let mut ties: Vec<Vec<f64>> = Vec::new();
    for basis in combinations(ell, p) {
        let nonbasic: Vec<usize> = (0..ell).filter(|j| !basis.contains(j)).collect();
        let finite: Vec<usize> = nonbasic.iter().copied().filter(|&j| lp.d[j].is_finite()).collect();
        let ab: Vec<Vec<f64>> = (0..p).map(|r| basis.iter().map(|&j| lp.a[(r, j)]).collect()).collect();
        for mask in 0u32..(1 << finite.len()) {
            let mut x = vec![0.0; ell];
            for (bit, &j) in finite.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    x[j] = lp.d[j].as_f64();
                }
            }
            let rhs: Vec<f64> = (0..p)
                .map(|r| lp.b[r] - (0..ell).map(|j| lp.a[(r, j)] * x[j]).sum::<f64>())
                .collect();
            let Some(xb) = solve_dense(ab.clone(), rhs) else {
                continue;
            };
            let feasible = basis
                .iter()
                .zip(&xb)
                .all(|(&j, &v)| v >= -1e-9 && lp.d[j].finite().map_or(true, |d| v <= d + 1e-9));
            if !feasible {
                continue;
            }
            for (&j, &v) in basis.iter().zip(&xb) {
                x[j] = v.max(0.0);
            }
            let obj: f64 = x.iter().zip(&lp.c).map(|(x, c)| x * c).sum();
            match &best {
                Some(b) if obj > b.objective + 1e-9 => {}
                Some(b) if obj > b.objective - 1e-9 => ties.push(x),
                _ => {
                    ties = vec![x.clone()];
                    best = Some(Vertex {
                        x,
                        objective: obj,
                        unique: true,
                    });
                }
            }
        }
    }
    best.map(|mut b| {
        b.unique = ties.iter().all(|t| t.iter().zip(&b.x).all(|(u, v)| (u - v).abs() < 1e-7));
        b
    })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Random newcomer compatible with `lp`.
pub fn random_newcomer<R: Rng>(rng: &mut R, p: usize) -> AgentProfile {
    let n = rng.gen_range(1..=2);
    let cost = (0..n).map(|_| rng.gen_range(-5.0..1.0)).collect();
    let limit = (0..n).map(|_| Limit::Finite(rng.gen_range(0.5..3.0))).collect();
    let usage = (0..p).map(|_| (0..n).map(|_| rng.gen_range(0.1..2.0)).collect()).collect();
    AgentProfile::new(cost, limit, usage).unwrap()
}
