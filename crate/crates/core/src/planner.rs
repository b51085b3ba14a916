//! Finite-horizon planning by backward induction.
//!
//! Deterministic-transition environments are planned over their [`Graph`];
//! tabular models with sampled transition probabilities go through
//! [`plan_expected`]. Ties always resolve to the lowest action index.

use crate::environments::Graph;
use crate::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-9;

/// First action of an optimal policy and its value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plan {
    pub action: usize,
    pub value: f64,
}

/// Transition probabilities `p(s' | s, a)`, stored row-major by `(s, a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionModel {
    n_states: usize,
    n_actions: usize,
    probs: Vec<f64>,
}

impl TransitionModel {
    pub fn new(n_states: usize, n_actions: usize, probs: Vec<f64>) -> Result<Self> {
        let expected = n_states * n_actions * n_states;
        if probs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: probs.len() });
        }
        let model = Self { n_states, n_actions, probs };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        for (r, row) in self.probs.chunks(self.n_states).enumerate() {
            let total: f64 = row.iter().sum();
            if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (total - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidModel(format!(
                    "row (s={}, a={}) is not a probability vector (sum {total})",
                    r / self.n_actions,
                    r % self.n_actions
                )));
            }
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn row(&self, s: usize, a: usize) -> &[f64] {
        let o = (s * self.n_actions + a) * self.n_states;
        &self.probs[o..o + self.n_states]
    }
}

/// Plan request against a reward-parameterized deterministic graph.
#[derive(Clone, Copy, Debug)]
pub struct PlanRequest<'a> {
    pub graph: &'a Graph,
    pub theta: &'a [f64],
    pub state: usize,
    pub steps_remaining: usize,
}

/// Optimal value tables `V_0..=V_steps` over every state.
pub fn value_tables(graph: &Graph, theta: &[f64], steps: usize) -> Vec<Vec<f64>> {
    let n = graph.n_states();
    let mut tables = Vec::with_capacity(steps + 1);
    tables.push(vec![0.0; n]);
    for h in 1..=steps {
        let prev = &tables[h - 1];
        let next: Vec<f64> = (0..n)
            .map(|v| {
                graph
                    .actions(v)
                    .iter()
                    .map(|e| graph.edge_reward(e, theta) + prev[e.target])
                    .fold(None, |best: Option<f64>, q| Some(best.map_or(q, |b| if q > b { q } else { b })))
                    .unwrap_or(0.0)
            })
            .collect();
        tables.push(next);
    }
    tables
}

/// Backward induction over exactly `steps_remaining` stages; absorbing
/// states contribute zero thereafter.
pub fn plan(req: &PlanRequest<'_>) -> Result<Plan> {
    check_request(req)?;
    let tables = value_tables(req.graph, req.theta, req.steps_remaining - 1);
    Ok(best_first_action(req, &tables[req.steps_remaining - 1]))
}

/// Same as [`plan`], reusing tables from [`value_tables`] computed for the
/// same `theta` over at least `steps_remaining - 1` stages.
pub fn plan_with_tables(req: &PlanRequest<'_>, tables: &[Vec<f64>]) -> Result<Plan> {
    check_request(req)?;
    let tail = tables.get(req.steps_remaining - 1).ok_or_else(|| {
        Error::InvalidInput(format!("value tables cover {} stages, need {}", tables.len(), req.steps_remaining))
    })?;
    Ok(best_first_action(req, tail))
}

fn check_request(req: &PlanRequest<'_>) -> Result<()> {
    if req.state >= req.graph.n_states() {
        return Err(Error::InvalidInput(format!("state {} out of range", req.state)));
    }
    if req.steps_remaining == 0 {
        return Err(Error::NoAction("no steps remaining".into()));
    }
    if req.graph.is_absorbing(req.state) {
        return Err(Error::NoAction(format!("state {} is absorbing", req.state)));
    }
    Ok(())
}

fn best_first_action(req: &PlanRequest<'_>, tail: &[f64]) -> Plan {
    let graph = req.graph;
    let mut best: Option<Plan> = None;
    for (action, e) in graph.actions(req.state).iter().enumerate() {
        let value = graph.edge_reward(e, req.theta) + tail[e.target];
        if best.is_none_or(|b| value > b.value) {
            best = Some(Plan { action, value });
        }
    }
    best.expect("non-absorbing state has an action")
}

/// Backward induction with expectation over next states:
/// `V_h(s) = max_a [r(s,a) + Σ p(s'|s,a) V_{h-1}(s')]`.
/// `rewards` is indexed by `s * n_actions + a`.
pub fn plan_expected(model: &TransitionModel, rewards: &[f64], state: usize, steps_remaining: usize) -> Result<Plan> {
    model.validate()?;
    let (ns, na) = (model.n_states(), model.n_actions());
    if rewards.len() != ns * na {
        return Err(Error::DimensionMismatch { expected: ns * na, found: rewards.len() });
    }
    if state >= ns {
        return Err(Error::InvalidInput(format!("state {state} out of range")));
    }
    if steps_remaining == 0 {
        return Err(Error::NoAction("no steps remaining".into()));
    }
    if na == 0 {
        return Err(Error::NoAction("model has no actions".into()));
    }
    let q = |s: usize, a: usize, v: &[f64]| -> f64 {
        rewards[s * na + a] + model.row(s, a).iter().zip(v).map(|(p, x)| p * x).sum::<f64>()
    };
    let mut v = vec![0.0; ns];
    for _ in 1..steps_remaining {
        v = (0..ns)
            .map(|s| (1..na).fold(q(s, 0, &v), |best, a| best.max(q(s, a, &v))))
            .collect();
    }
    let mut best = Plan { action: 0, value: q(state, 0, &v) };
    for a in 1..na {
        let value = q(state, a, &v);
        if value > best.value {
            best = Plan { action: a, value };
        }
    }
    Ok(best)
}
