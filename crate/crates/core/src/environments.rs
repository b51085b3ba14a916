//! Benchmark environments: bipolar chain, parallel chains, maximum reward
//! path on an Erdős–Rényi graph, and a small tabular testbed with unknown
//! transitions.
//!
//! Each constructor returns the public [`EnvironmentSpec`] (what agents know,
//! including the shared prior) and the hidden [`TrueModel`].

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::beliefs::{BeliefState, DirichletBelief, FiniteScenarioBelief, GaussianVectorBelief, Scale};
use crate::planner::{plan_expected, value_tables, TransitionModel};
use crate::{Error, Result};

/// Graph generation gives up after this many rejected samples.
pub const MAX_GRAPH_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    BipolarChain,
    ParallelChains,
    MaxRewardPath,
    DirichletTestbed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RewardSource {
    Fixed(f64),
    /// Reward governed by the unknown parameter at this index.
    Param(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub target: usize,
    pub reward: RewardSource,
}

/// Deterministic transition structure. A state with no actions is absorbing.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    actions: Vec<Vec<Edge>>,
}

impl Graph {
    pub fn new(actions: Vec<Vec<Edge>>) -> Self {
        Self { actions }
    }

    pub fn n_states(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self, state: usize) -> &[Edge] {
        &self.actions[state]
    }

    pub fn is_absorbing(&self, state: usize) -> bool {
        self.actions[state].is_empty()
    }

    pub fn edge(&self, state: usize, action: usize) -> Result<&Edge> {
        self.actions
            .get(state)
            .and_then(|a| a.get(action))
            .ok_or(Error::InvalidAction { state, action })
    }

    pub fn edge_reward(&self, edge: &Edge, theta: &[f64]) -> f64 {
        match edge.reward {
            RewardSource::Fixed(r) => r,
            RewardSource::Param(i) => theta[i],
        }
    }

    pub fn max_degree(&self) -> usize {
        self.actions.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Tabular dynamics with known rewards `r(s, a)` and unknown transitions.
#[derive(Clone, Debug, PartialEq)]
pub struct TabularDynamics {
    pub n_states: usize,
    pub n_actions: usize,
    pub rewards: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Dynamics {
    Graph(Graph),
    Tabular(TabularDynamics),
}

/// How a parameter-governed reward is observed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewardNoise {
    None,
    Gaussian,
    /// `ln r ~ N(ln θ − σ²/2, σ²)`, so `E[r] = θ`.
    Lognormal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvironmentSpec {
    pub variant: Variant,
    /// Vertex (or state) count.
    pub n: usize,
    /// Chain count; zero outside parallel chains.
    pub chains: usize,
    pub horizon: usize,
    pub edge_probability: Option<f64>,
    pub noise_variance: f64,
    pub noise: RewardNoise,
    pub start: usize,
    pub dynamics: Dynamics,
    pub prior: BeliefState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrueModel {
    pub theta: Vec<f64>,
    pub scenario: Option<usize>,
    pub transitions: Option<TransitionModel>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepOutcome {
    pub next_state: usize,
    pub reward: f64,
    pub terminal: bool,
    pub param: Option<usize>,
}

impl EnvironmentSpec {
    pub fn graph(&self) -> Option<&Graph> {
        match &self.dynamics {
            Dynamics::Graph(g) => Some(g),
            Dynamics::Tabular(_) => None,
        }
    }

    pub fn n_states(&self) -> usize {
        match &self.dynamics {
            Dynamics::Graph(g) => g.n_states(),
            Dynamics::Tabular(t) => t.n_states,
        }
    }

    pub fn is_absorbing(&self, state: usize) -> bool {
        self.graph().is_some_and(|g| g.is_absorbing(state))
    }

    /// Optimal full-horizon value from the start state when the unknown
    /// parameters equal `theta`. Used to rank complete parameterizations.
    pub fn start_value(&self, theta: &[f64]) -> f64 {
        match &self.dynamics {
            Dynamics::Graph(g) => value_tables(g, theta, self.horizon)[self.horizon][self.start],
            Dynamics::Tabular(_) => 0.0,
        }
    }

    /// Closed-form optimum quoted for the bipolar chain (N/2 when the left
    /// edge is positive, N/2 + 1 otherwise). It differs by one from the
    /// planner's value on this graph; both are reported.
    pub fn stated_optimum(&self, truth: &TrueModel) -> Option<f64> {
        match (self.variant, truth.scenario) {
            (Variant::BipolarChain, Some(s)) => Some(self.n as f64 / 2.0 + if s == 0 { 0.0 } else { 1.0 }),
            _ => None,
        }
    }
}

/// Bipolar chain with `n` vertices; scenario 0 has the left edge positive.
pub fn make_bipolar_chain<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(EnvironmentSpec, TrueModel)> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidSpec(format!("bipolar chain needs an even vertex count >= 4, got {n}")));
    }
    let mut actions = vec![Vec::new(); n];
    for v in 1..n - 1 {
        let left = if v == 1 { RewardSource::Param(0) } else { RewardSource::Fixed(-1.0) };
        let right = if v == n - 2 { RewardSource::Param(1) } else { RewardSource::Fixed(-1.0) };
        actions[v] = vec![Edge { target: v - 1, reward: left }, Edge { target: v + 1, reward: right }];
    }
    let weight = n as f64;
    let scenarios = vec![vec![weight, -weight], vec![-weight, weight]];
    let scenario = usize::from(rng.random::<f64>() >= 0.5);
    let prior = FiniteScenarioBelief::new(scenarios.clone(), vec![0.5, 0.5])?;
    let spec = EnvironmentSpec {
        variant: Variant::BipolarChain,
        n,
        chains: 0,
        horizon: 3 * n / 2,
        edge_probability: None,
        noise_variance: 0.0,
        noise: RewardNoise::None,
        start: n / 2,
        dynamics: Dynamics::Graph(Graph::new(actions)),
        prior: BeliefState::Scenario(prior),
    };
    let truth = TrueModel { theta: scenarios[scenario].clone(), scenario: Some(scenario), transitions: None };
    Ok((spec, truth))
}

/// State id of depth `d` (1-based) on chain `c` (0-based).
pub fn chain_state(c: usize, depth: usize, horizon: usize) -> usize {
    1 + c * horizon + (depth - 1)
}

/// `c` chains of `h` edges from a shared source (state 0). Only the last
/// edge of chain `c` carries reward, with prior `N(mu0, sigma0_sq + c)`
/// (chains numbered from 1).
pub fn make_parallel_chains<R: Rng + ?Sized>(
    c: usize,
    h: usize,
    mu0: f64,
    sigma0_sq: f64,
    noise_variance: f64,
    rng: &mut R,
) -> Result<(EnvironmentSpec, TrueModel)> {
    if c == 0 || h == 0 {
        return Err(Error::InvalidSpec("parallel chains need C >= 1 and H >= 1".into()));
    }
    let reward_at = |chain: usize, depth: usize| {
        if depth == h { RewardSource::Param(chain) } else { RewardSource::Fixed(0.0) }
    };
    let mut actions = vec![Vec::new(); 1 + c * h];
    for chain in 0..c {
        actions[0].push(Edge { target: chain_state(chain, 1, h), reward: reward_at(chain, 1) });
        for depth in 1..h {
            actions[chain_state(chain, depth, h)] =
                vec![Edge { target: chain_state(chain, depth + 1, h), reward: reward_at(chain, depth + 1) }];
        }
    }
    let variances: Vec<f64> = (1..=c).map(|k| sigma0_sq + k as f64).collect();
    let theta = variances
        .iter()
        .map(|&v| Normal::new(mu0, v.sqrt()).map(|d| d.sample(rng)))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidPrior(e.to_string()))?;
    let prior = GaussianVectorBelief::diagonal(vec![mu0; c], variances, noise_variance, Scale::Normal)?;
    let spec = EnvironmentSpec {
        variant: Variant::ParallelChains,
        n: 1 + c * h,
        chains: c,
        horizon: h,
        edge_probability: None,
        noise_variance,
        noise: RewardNoise::Gaussian,
        start: 0,
        dynamics: Dynamics::Graph(Graph::new(actions)),
        prior: BeliefState::Gaussian(prior),
    };
    Ok((spec, TrueModel { theta, scenario: None, transitions: None }))
}

/// Lognormal edge-weight prior and likelihood for the maximum reward path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxPathPrior {
    pub log_mean: f64,
    pub log_variance: f64,
    pub noise_variance: f64,
    pub horizon: usize,
}

impl Default for MaxPathPrior {
    fn default() -> Self {
        Self { log_mean: 0.0, log_variance: 4.0, noise_variance: 0.01, horizon: 10 }
    }
}

/// Undirected edges of a `G(n, p)` sample with every vertex of degree >= 1,
/// listed as `(u, v)` with `u < v` in lexicographic order.
pub fn sample_admissible_graph<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Vec<(usize, usize)>> {
    for _ in 0..MAX_GRAPH_ATTEMPTS {
        let mut degree = vec![0usize; n];
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                    degree[u] += 1;
                    degree[v] += 1;
                }
            }
        }
        if degree.iter().all(|&d| d >= 1) {
            return Ok(edges);
        }
    }
    Err(Error::GraphGeneration { attempts: MAX_GRAPH_ATTEMPTS })
}

/// Maximum reward path on an Erdős–Rényi graph, starting at vertex 0.
pub fn make_max_reward_path<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    prior: MaxPathPrior,
    rng: &mut R,
) -> Result<(EnvironmentSpec, TrueModel)> {
    if n < 2 {
        return Err(Error::InvalidSpec(format!("max reward path needs N >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidSpec(format!("edge probability must lie in (0, 1], got {p}")));
    }
    if prior.horizon == 0 {
        return Err(Error::InvalidSpec("horizon must be positive".into()));
    }
    let edges = sample_admissible_graph(n, p, rng)?;
    let mut actions = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        actions[u].push(Edge { target: v, reward: RewardSource::Param(i) });
        actions[v].push(Edge { target: u, reward: RewardSource::Param(i) });
    }
    for list in &mut actions {
        list.sort_by_key(|e| e.target);
    }
    let log_weight = Normal::new(prior.log_mean, prior.log_variance.sqrt()).map_err(|e| Error::InvalidPrior(e.to_string()))?;
    let theta: Vec<f64> = (0..edges.len()).map(|_| log_weight.sample(rng).exp()).collect();
    let belief = GaussianVectorBelief::diagonal(
        vec![prior.log_mean; edges.len()],
        vec![prior.log_variance; edges.len()],
        prior.noise_variance,
        Scale::Lognormal,
    )?;
    let spec = EnvironmentSpec {
        variant: Variant::MaxRewardPath,
        n,
        chains: 0,
        horizon: prior.horizon,
        edge_probability: Some(p),
        noise_variance: prior.noise_variance,
        noise: RewardNoise::Lognormal,
        start: 0,
        dynamics: Dynamics::Graph(Graph::new(actions)),
        prior: BeliefState::Gaussian(belief),
    };
    Ok((spec, TrueModel { theta, scenario: None, transitions: None }))
}

/// Tabular testbed with unknown transitions drawn from a symmetric
/// Dirichlet prior. Rewards are known: `r(s, a) = s / (n_states - 1)`.
pub fn make_dirichlet_testbed<R: Rng + ?Sized>(
    n_states: usize,
    n_actions: usize,
    horizon: usize,
    alpha0: f64,
    rng: &mut R,
) -> Result<(EnvironmentSpec, TrueModel)> {
    if n_states < 2 || n_actions == 0 || horizon == 0 {
        return Err(Error::InvalidSpec("testbed needs >= 2 states, >= 1 action and H >= 1".into()));
    }
    let prior = DirichletBelief::uniform(n_states, n_actions, alpha0)?;
    let transitions = prior.sample(rng);
    let rewards = (0..n_states)
        .flat_map(|s| std::iter::repeat_n(s as f64 / (n_states - 1) as f64, n_actions))
        .collect();
    let spec = EnvironmentSpec {
        variant: Variant::DirichletTestbed,
        n: n_states,
        chains: 0,
        horizon,
        edge_probability: None,
        noise_variance: 0.0,
        noise: RewardNoise::None,
        start: 0,
        dynamics: Dynamics::Tabular(TabularDynamics { n_states, n_actions, rewards }),
        prior: BeliefState::Dirichlet(prior),
    };
    Ok((spec, TrueModel { theta: Vec::new(), scenario: None, transitions: Some(transitions) }))
}

/// Applies `action` in `state` as the `step_index`-th (1-based) step.
pub fn step<R: Rng + ?Sized>(
    spec: &EnvironmentSpec,
    truth: &TrueModel,
    state: usize,
    action: usize,
    step_index: usize,
    rng: &mut R,
) -> Result<StepOutcome> {
    match &spec.dynamics {
        Dynamics::Graph(g) => {
            let edge = g.edge(state, action)?;
            let (reward, param) = match edge.reward {
                RewardSource::Fixed(r) => (r, None),
                RewardSource::Param(i) => {
                    let theta = truth.theta[i];
                    let sigma = spec.noise_variance.sqrt();
                    let r = match spec.noise {
                        RewardNoise::None => theta,
                        RewardNoise::Gaussian => theta + sigma * rng.sample::<f64, _>(rand_distr::StandardNormal),
                        RewardNoise::Lognormal => {
                            let z: f64 = rng.sample(rand_distr::StandardNormal);
                            (theta.ln() - spec.noise_variance / 2.0 + sigma * z).exp()
                        }
                    };
                    (r, Some(i))
                }
            };
            Ok(StepOutcome {
                next_state: edge.target,
                reward,
                terminal: g.is_absorbing(edge.target) || step_index >= spec.horizon,
                param,
            })
        }
        Dynamics::Tabular(t) => {
            if state >= t.n_states || action >= t.n_actions {
                return Err(Error::InvalidAction { state, action });
            }
            let transitions = truth
                .transitions
                .as_ref()
                .ok_or_else(|| Error::InvalidModel("tabular environment without transitions".into()))?;
            let u: f64 = rng.random();
            let row = transitions.row(state, action);
            let mut cumulative = 0.0;
            let mut next_state = row.len() - 1;
            for (s2, p) in row.iter().enumerate() {
                cumulative += p;
                if u < cumulative {
                    next_state = s2;
                    break;
                }
            }
            Ok(StepOutcome {
                next_state,
                reward: t.rewards[state * t.n_actions + action],
                terminal: step_index >= spec.horizon,
                param: None,
            })
        }
    }
}

/// Value of the optimal policy on the true model from the start state.
pub fn optimal_reward(spec: &EnvironmentSpec, truth: &TrueModel) -> Result<f64> {
    match &spec.dynamics {
        Dynamics::Graph(_) => Ok(spec.start_value(&truth.theta)),
        Dynamics::Tabular(t) => {
            let transitions = truth
                .transitions
                .as_ref()
                .ok_or_else(|| Error::InvalidModel("tabular environment without transitions".into()))?;
            Ok(plan_expected(transitions, &t.rewards, spec.start, spec.horizon)?.value)
        }
    }
}

/// Writes the true edge weights as `u v theta_e` lines sorted by `(u, v)`.
/// Undirected graphs list each edge once with `u < v`.
pub fn write_edge_list<W: Write>(spec: &EnvironmentSpec, truth: &TrueModel, mut out: W) -> Result<()> {
    let Dynamics::Graph(g) = &spec.dynamics else {
        return Err(Error::InvalidSpec("edge list requires a graph environment".into()));
    };
    let undirected = spec.variant == Variant::MaxRewardPath;
    let mut rows = Vec::new();
    for u in 0..g.n_states() {
        for e in g.actions(u) {
            if undirected && e.target < u {
                continue;
            }
            rows.push((u, e.target, g.edge_reward(e, &truth.theta)));
        }
    }
    rows.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    writeln!(out, "u v theta_e")?;
    for (u, v, w) in rows {
        writeln!(out, "{u} {v} {w:.9}")?;
    }
    Ok(())
}
