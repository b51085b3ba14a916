//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use seedrl::environments::{Edge, Graph, RewardSource};

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Critical value of the two-sample KS statistic at level 0.001.
pub fn ks_critical_001(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.949 * ((n + m) / (n * m)).sqrt()
}

/// One-sample KS statistic against Uniform(0, 1).
pub fn ks_uniform(xs: &[f64]) -> f64 {
    let mut xs = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
        .fold(0.0, f64::max)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean and its Monte-Carlo standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Posterior mean and variance of a scalar parameter by brute-force
/// quadrature: `log_prior(x) + log_lik(x)` on `points` midpoints of `[lo, hi]`.
pub fn grid_posterior(
    lo: f64,
    hi: f64,
    points: usize,
    log_prior: impl Fn(f64) -> f64,
    log_lik: impl Fn(f64) -> f64,
) -> (f64, f64) {
    let h = (hi - lo) / points as f64;
    let xs: Vec<f64> = (0..points).map(|i| lo + (i as f64 + 0.5) * h).collect();
    let logs: Vec<f64> = xs.iter().map(|&x| log_prior(x) + log_lik(x)).collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let z: f64 = w.iter().sum();
    let m = xs.iter().zip(&w).map(|(x, w)| x * w).sum::<f64>() / z;
    let v = xs.iter().zip(&w).map(|(x, w)| (x - m).powi(2) * w).sum::<f64>() / z;
    (m, v)
}

pub fn log_normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (x - mean).powi(2) / var
}

/// Best total over all walks of at most `steps` edges from `state`,
/// stopping at absorbing vertices, with the first action that attains it
/// (lowest index on ties). Sums run from the end of the walk backwards.
pub fn enumerate_walks(graph: &Graph, theta: &[f64], state: usize, steps: usize) -> (Option<usize>, f64) {
    fn best(graph: &Graph, theta: &[f64], v: usize, steps: usize) -> f64 {
        if steps == 0 || graph.actions(v).is_empty() {
            return 0.0;
        }
        let mut out = f64::NEG_INFINITY;
        for e in graph.actions(v) {
            let total = reward(e, theta) + best(graph, theta, e.target, steps - 1);
            if total > out {
                out = total;
            }
        }
        out
    }
    if steps == 0 || graph.actions(state).is_empty() {
        return (None, 0.0);
    }
    let mut top: Option<(usize, f64)> = None;
    for (a, e) in graph.actions(state).iter().enumerate() {
        let total = reward(e, theta) + best(graph, theta, e.target, steps - 1);
        if top.is_none_or(|(_, t)| total > t) {
            top = Some((a, total));
        }
    }
    let (a, t) = top.unwrap();
    (Some(a), t)
}

fn reward(e: &Edge, theta: &[f64]) -> f64 {
    match e.reward {
        RewardSource::Fixed(r) => r,
        RewardSource::Param(i) => theta[i],
    }
}

/// Random directed graph with integer-valued parameters, some absorbing
/// vertices and occasional fixed-reward edges.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> (Graph, Vec<f64>) {
    let n = rng.random_range(2..=max_vertices);
    let mut theta = Vec::new();
    let mut actions = vec![Vec::new(); n];
    for (v, acts) in actions.iter_mut().enumerate() {
        if v > 0 && rng.random_bool(0.2) {
            continue;
        }
        for _ in 0..rng.random_range(1..=3) {
            let target = rng.random_range(0..n);
            let reward = if rng.random_bool(0.2) {
                RewardSource::Fixed(rng.random_range(-3..=3) as f64)
            } else {
                theta.push(rng.random_range(-5..=5) as f64);
                RewardSource::Param(theta.len() - 1)
            };
            acts.push(Edge { target, reward });
        }
    }
    (Graph::new(actions), theta)
}
