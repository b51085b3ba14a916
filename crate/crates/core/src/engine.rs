//! Event-driven concurrent episode simulation.
//!
//! Each agent acts at the arrival times of its own unit-rate Poisson
//! process. Events are processed in global time order against one shared
//! posterior, so every decision sees exactly the observations made before
//! it by any agent.

use std::cell::RefCell;
use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::io::Write;

use rand::Rng;
use rand_distr::Exp1;
use sha2::{Digest, Sha256};

use crate::beliefs::BeliefState;
use crate::environments::{step, Dynamics, EnvironmentSpec, TrueModel};
use crate::environments::optimal_reward;
use crate::planner::{plan, plan_expected, plan_with_tables, value_tables, PlanRequest};
use crate::seeds::{SeedTree, SimRng, Stream};
use crate::strategies::{AgentSeed, AgentStrategy, ProposalContext, SampledModel, StrategyKind};
use crate::{Error, Result};

/// One transition, as shared with every agent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub time: f64,
    pub agent: usize,
    /// 1-based step index within the agent's path.
    pub step: usize,
    pub state: usize,
    pub action: usize,
    pub next_state: usize,
    pub reward: f64,
    /// Unknown parameter the reward speaks to, if any.
    pub param: Option<usize>,
}

/// `h` arrival times from a Poisson process with the given rate.
pub fn agent_arrivals<R: Rng + ?Sized>(h: usize, rate: f64, rng: &mut R) -> Vec<f64> {
    let mut t = 0.0;
    (0..h)
        .map(|_| {
            let gap: f64 = rng.sample(Exp1);
            t += gap / rate;
            t
        })
        .collect()
}

/// Arrival times for agents `0..k`, each from its own substream.
pub fn generate_arrivals(k: usize, h: usize, rate: f64, seeds: &SeedTree) -> Vec<Vec<f64>> {
    (0..k)
        .map(|agent| agent_arrivals(h, rate, &mut seeds.rng(Stream::Arrivals, agent as u64)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub agent: usize,
    pub step: usize,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.agent.cmp(&other.agent))
            .then(self.step.cmp(&other.step))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pending events ordered by time, ties by `(agent, step)`. Each agent has
/// at most one pending event.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<Event>>,
    pending: Vec<bool>,
}

impl EventQueue {
    pub fn new(agents: usize) -> Self {
        Self { heap: BinaryHeap::with_capacity(agents), pending: vec![false; agents] }
    }

    pub fn push(&mut self, event: Event) -> Result<()> {
        match self.pending.get_mut(event.agent) {
            Some(slot) if !*slot => *slot = true,
            Some(_) => return Err(Error::InvalidInput(format!("agent {} already has a pending event", event.agent))),
            None => return Err(Error::InvalidInput(format!("agent {} out of range", event.agent))),
        }
        self.heap.push(Reverse(event));
        Ok(())
    }

    pub fn pop(&mut self) -> Option<Event> {
        let Reverse(event) = self.heap.pop()?;
        self.pending[event.agent] = false;
        Some(event)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeConfig {
    pub strategy: StrategyKind,
    pub agents: usize,
    /// Confidence width for concurrent UCRL.
    pub beta: f64,
    pub rate: f64,
}

impl EpisodeConfig {
    pub fn new(strategy: StrategyKind, agents: usize) -> Self {
        Self { strategy, agents, beta: 1.0, rate: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentOutcome {
    pub agent: usize,
    pub activation_time: f64,
    pub steps: usize,
    pub total_reward: f64,
    pub regret: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeResult {
    pub agents: Vec<AgentOutcome>,
    pub optimal_reward: f64,
    /// Closed-form optimum where one is quoted alongside the planner's.
    pub stated_optimum: Option<f64>,
    pub master_seed: u64,
    pub config_hash: String,
    pub observations: Vec<Observation>,
}

impl EpisodeResult {
    pub fn mean_regret(&self) -> f64 {
        self.agents.iter().map(|a| a.regret).sum::<f64>() / self.agents.len() as f64
    }
}

/// Belief snapshot and choice at one decision.
#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub event: Event,
    pub state: usize,
    pub belief: BeliefState,
    pub model: SampledModel,
    pub action: usize,
}

/// Applies one observation to the shared posterior.
pub fn absorb_observation(belief: &mut BeliefState, obs: &Observation) -> Result<()> {
    match belief {
        BeliefState::Gaussian(b) => match obs.param {
            Some(i) => b.observe(i, obs.reward),
            None => Ok(()),
        },
        BeliefState::Scenario(b) => b.update(obs.param, obs.reward),
        BeliefState::Dirichlet(b) => b.update(obs.state, obs.action, obs.next_state),
    }
}

/// Posterior after replaying `observations` onto `prior`.
pub fn posterior_from(prior: &BeliefState, observations: &[Observation]) -> Result<BeliefState> {
    let mut belief = prior.clone();
    for obs in observations {
        absorb_observation(&mut belief, obs)?;
    }
    Ok(belief)
}

pub fn config_hash(text: &str) -> String {
    hex::encode(&Sha256::digest(text.as_bytes())[..8])
}

/// One concurrent episode with optional overrides for arrivals and seeds.
pub struct Simulation<'a> {
    spec: &'a EnvironmentSpec,
    truth: &'a TrueModel,
    config: EpisodeConfig,
    seeds: SeedTree,
    arrivals: Option<Vec<Vec<f64>>>,
    agent_seeds: Option<Vec<Option<AgentSeed>>>,
    config_hash: Option<String>,
}

impl<'a> Simulation<'a> {
    pub fn new(spec: &'a EnvironmentSpec, truth: &'a TrueModel, config: EpisodeConfig, seeds: SeedTree) -> Self {
        Self { spec, truth, config, seeds, arrivals: None, agent_seeds: None, config_hash: None }
    }

    pub fn with_arrivals(mut self, arrivals: Vec<Vec<f64>>) -> Self {
        self.arrivals = Some(arrivals);
        self
    }

    pub fn with_agent_seeds(mut self, seeds: Vec<Option<AgentSeed>>) -> Self {
        self.agent_seeds = Some(seeds);
        self
    }

    pub fn with_config_hash(mut self, hash: String) -> Self {
        self.config_hash = Some(hash);
        self
    }

    pub fn run(self) -> Result<EpisodeResult> {
        self.execute(None)
    }

    pub fn run_traced(self) -> Result<(EpisodeResult, Vec<Decision>)> {
        let mut trace = Vec::new();
        let result = self.execute(Some(&mut trace))?;
        Ok((result, trace))
    }

    fn execute(self, mut trace: Option<&mut Vec<Decision>>) -> Result<EpisodeResult> {
        let Simulation { spec, truth, config, seeds, arrivals, agent_seeds, config_hash: hash } = self;
        let k = config.agents;
        let h = spec.horizon;
        if k == 0 {
            return Err(Error::Config("at least one agent is required".into()));
        }
        if !(config.rate.is_finite() && config.rate > 0.0) {
            return Err(Error::Config(format!("arrival rate must be positive, got {}", config.rate)));
        }
        let arrivals = arrivals.unwrap_or_else(|| generate_arrivals(k, h, config.rate, &seeds));
        if arrivals.len() != k || arrivals.iter().any(|a| a.len() < h) {
            return Err(Error::Config("arrival overrides must give H times per agent".into()));
        }
        if let Some(list) = &agent_seeds {
            if list.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: list.len() });
            }
        }
        let mut strategies = (0..k)
            .map(|agent| match &agent_seeds {
                Some(list) => AgentStrategy::with_seed(
                    config.strategy,
                    &spec.prior,
                    list[agent].clone(),
                    seeds.rng(Stream::Resampling, agent as u64),
                ),
                None => AgentStrategy::new(config.strategy, &spec.prior, &seeds, agent),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut noise: Vec<SimRng> = (0..k).map(|a| seeds.rng(Stream::EnvironmentNoise, a as u64)).collect();

        let r_star = optimal_reward(spec, truth)?;
        // scenario ranking for optimism; the candidate set is fixed, so memoize
        let ranked: RefCell<Vec<(Vec<f64>, f64)>> = RefCell::new(Vec::new());
        let scenario_value = |theta: &[f64]| {
            if let Some((_, v)) = ranked.borrow().iter().find(|(t, _)| t.as_slice() == theta) {
                return *v;
            }
            let v = spec.start_value(theta);
            ranked.borrow_mut().push((theta.to_vec(), v));
            v
        };
        let mut belief = spec.prior.clone();
        let mut observations = Vec::with_capacity(k * h);
        let mut states = vec![spec.start; k];
        let mut totals = vec![0.0; k];
        let mut steps = vec![0usize; k];

        let mut tables = TableCache::new(matches!(spec.prior, BeliefState::Scenario(_)));
        let mut queue = EventQueue::new(k);
        for agent in 0..k {
            if !spec.is_absorbing(spec.start) {
                queue.push(Event { time: arrivals[agent][0], agent, step: 1 })?;
            }
        }

        while let Some(event) = queue.pop() {
            let agent = event.agent;
            let state = states[agent];
            let model = strategies[agent].propose(&ProposalContext {
                belief: &belief,
                prior: &spec.prior,
                history: &observations,
                beta: config.beta,
                scenario_value: &scenario_value,
            })?;
            let remaining = h - event.step + 1;
            let action = choose_action(spec, &model, state, remaining, &mut tables)?;
            if let Some(trace) = trace.as_deref_mut() {
                trace.push(Decision { event, state, belief: belief.clone(), model: model.clone(), action });
            }
            let outcome = step(spec, truth, state, action, event.step, &mut noise[agent])?;
            let obs = Observation {
                time: event.time,
                agent,
                step: event.step,
                state,
                action,
                next_state: outcome.next_state,
                reward: outcome.reward,
                param: outcome.param,
            };
            absorb_observation(&mut belief, &obs)?;
            observations.push(obs);
            states[agent] = outcome.next_state;
            totals[agent] += outcome.reward;
            steps[agent] = event.step;
            if !outcome.terminal {
                queue.push(Event { time: arrivals[agent][event.step], agent, step: event.step + 1 })?;
            }
        }

        let agents = (0..k)
            .map(|agent| AgentOutcome {
                agent,
                activation_time: arrivals[agent][0],
                steps: steps[agent],
                total_reward: totals[agent],
                regret: r_star - totals[agent],
            })
            .collect();
        let config_hash = hash.unwrap_or_else(|| {
            config_hash(&format!("{:?}|{}|{}|{:?}", spec.variant, spec.n, spec.horizon, config))
        });
        Ok(EpisodeResult {
            agents,
            optimal_reward: r_star,
            stated_optimum: spec.stated_optimum(truth),
            master_seed: seeds.master(),
            config_hash,
            observations,
        })
    }
}

/// Value tables for recently seen models. Only worthwhile when the set of
/// distinct models is small, as with finite scenarios.
struct TableCache {
    enabled: bool,
    entries: Vec<(Vec<f64>, Vec<Vec<f64>>)>,
}

impl TableCache {
    const CAPACITY: usize = 8;

    fn new(enabled: bool) -> Self {
        Self { enabled, entries: Vec::new() }
    }
}

fn choose_action(
    spec: &EnvironmentSpec,
    model: &SampledModel,
    state: usize,
    remaining: usize,
    cache: &mut TableCache,
) -> Result<usize> {
    match (&spec.dynamics, model) {
        (Dynamics::Graph(graph), model) => {
            let theta = model
                .theta()
                .ok_or_else(|| Error::InvalidModel("graph environment needs reward parameters".into()))?;
            let req = PlanRequest { graph, theta, state, steps_remaining: remaining };
            if !cache.enabled || remaining > spec.horizon {
                return Ok(plan(&req)?.action);
            }
            let pos = match cache.entries.iter().position(|(t, _)| t.as_slice() == theta) {
                Some(pos) => pos,
                None => {
                    if cache.entries.len() == TableCache::CAPACITY {
                        cache.entries.remove(0);
                    }
                    cache.entries.push((theta.to_vec(), value_tables(graph, theta, spec.horizon - 1)));
                    cache.entries.len() - 1
                }
            };
            Ok(plan_with_tables(&req, &cache.entries[pos].1)?.action)
        }
        (Dynamics::Tabular(t), SampledModel::Transitions(tm)) => Ok(plan_expected(tm, &t.rewards, state, remaining)?.action),
        (Dynamics::Tabular(_), _) => Err(Error::InvalidModel("tabular environment needs a transition model".into())),
    }
}

pub fn run_episode(
    spec: &EnvironmentSpec,
    truth: &TrueModel,
    config: EpisodeConfig,
    seeds: SeedTree,
) -> Result<EpisodeResult> {
    Simulation::new(spec, truth, config, seeds).run()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegretEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub replications: usize,
}

/// Mean over replications of the per-agent mean regret, with its
/// Monte-Carlo standard error.
pub fn bayes_regret(results: &[EpisodeResult]) -> Result<RegretEstimate> {
    if results.is_empty() {
        return Err(Error::EmptyInput("no replications"));
    }
    let per_rep: Vec<f64> = results.iter().map(EpisodeResult::mean_regret).collect();
    Ok(mean_and_std_error(&per_rep))
}

pub(crate) fn mean_and_std_error(values: &[f64]) -> RegretEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_error = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    RegretEstimate { mean, std_error, replications: values.len() }
}

/// Running sum of per-agent regret with agents in ascending activation time.
pub fn cumulative_regret_by_activation(result: &EpisodeResult) -> Vec<f64> {
    let mut order: Vec<&AgentOutcome> = result.agents.iter().collect();
    order.sort_by(|a, b| a.activation_time.total_cmp(&b.activation_time).then(a.agent.cmp(&b.agent)));
    order
        .iter()
        .scan(0.0, |acc, a| {
            *acc += a.regret;
            Some(*acc)
        })
        .collect()
}

/// One line per observation: `time agent step state action next_state reward`.
pub fn write_observation_log<W: Write>(mut out: W, observations: &[Observation]) -> Result<()> {
    for o in observations {
        writeln!(
            out,
            "{:.9} {} {} {} {} {} {:.9}",
            o.time, o.agent, o.step, o.state, o.action, o.next_state, o.reward
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environments::{make_bipolar_chain, make_parallel_chains};
    use crate::seeds::rng_from;

    #[test]
    fn arrivals_increase_and_repeat() {
        let tree = SeedTree::new(3);
        let a = generate_arrivals(5, 20, 1.0, &tree);
        assert!(a.iter().all(|times| times.windows(2).all(|w| w[0] < w[1]) && times[0] > 0.0));
        assert_eq!(a, generate_arrivals(5, 20, 1.0, &tree));
        // adding an agent leaves the others alone
        assert_eq!(&generate_arrivals(6, 20, 1.0, &tree)[..5], &a[..]);
    }

    #[test]
    fn queue_orders_by_time_then_agent() {
        let mut q = EventQueue::new(3);
        q.push(Event { time: 2.0, agent: 0, step: 1 }).unwrap();
        q.push(Event { time: 1.0, agent: 2, step: 1 }).unwrap();
        q.push(Event { time: 1.0, agent: 1, step: 4 }).unwrap();
        assert!(q.push(Event { time: 0.5, agent: 1, step: 5 }).is_err());
        let order: Vec<usize> = std::iter::from_fn(|| q.pop()).map(|e| e.agent).collect();
        assert_eq!(order, vec![1, 2, 0]);
        assert!(q.is_empty());
    }

    #[test]
    fn bayes_regret_arithmetic() {
        let outcome = |agent, regret| AgentOutcome { agent, activation_time: agent as f64, steps: 1, total_reward: 0.0, regret };
        let result = EpisodeResult {
            agents: vec![outcome(0, 0.0), outcome(1, 3.0)],
            optimal_reward: 5.0,
            stated_optimum: None,
            master_seed: 0,
            config_hash: String::new(),
            observations: Vec::new(),
        };
        let est = bayes_regret(std::slice::from_ref(&result)).unwrap();
        assert_eq!(est.mean, 1.5);
        assert_eq!(est.std_error, 0.0);
        assert!(matches!(bayes_regret(&[]), Err(Error::EmptyInput(_))));
        assert_eq!(cumulative_regret_by_activation(&result), vec![0.0, 3.0]);
    }

    #[test]
    fn known_model_has_zero_regret() {
        let (mut spec, truth) = make_parallel_chains(3, 4, 0.0, 100.0, 1e-12, &mut rng_from(5)).unwrap();
        // point prior at the truth
        spec.prior = BeliefState::Gaussian(
            crate::beliefs::GaussianVectorBelief::diagonal(truth.theta.clone(), vec![0.0; 3], 1e-12, crate::beliefs::Scale::Normal)
                .unwrap(),
        );
        for kind in [StrategyKind::SeedStandardGaussian, StrategyKind::ThompsonResampling, StrategyKind::Greedy] {
            let r = run_episode(&spec, &truth, EpisodeConfig::new(kind, 1), SeedTree::new(9)).unwrap();
            assert!(r.agents[0].regret.abs() < 1e-4, "{kind}: {}", r.agents[0].regret);
        }
    }

    #[test]
    fn bipolar_agents_stop_at_endpoints() {
        let (spec, truth) = make_bipolar_chain(10, &mut rng_from(1)).unwrap();
        let r = run_episode(&spec, &truth, EpisodeConfig::new(StrategyKind::SeedFiniteScenario, 20), SeedTree::new(2)).unwrap();
        for a in &r.agents {
            assert!(a.steps <= spec.horizon);
        }
        for o in r.observations.iter().filter(|o| o.param.is_some()) {
            assert!(o.next_state == 0 || o.next_state == 9);
        }
        // per-agent times and steps increase
        for agent in 0..20 {
            let mine: Vec<_> = r.observations.iter().filter(|o| o.agent == agent).collect();
            assert!(mine.windows(2).all(|w| w[0].time < w[1].time && w[0].step + 1 == w[1].step));
        }
    }

    #[test]
    fn observation_log_format() {
        let obs = Observation { time: 1.5, agent: 2, step: 1, state: 5, action: 0, next_state: 4, reward: -1.0, param: None };
        let mut buf = Vec::new();
        write_observation_log(&mut buf, &[obs]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1.500000000 2 1 5 0 4 -1.000000000\n");
    }
}
