//! Agent strategies: how an agent turns the shared posterior into a
//! concrete model at each of its decisions.
//!
//! Seed-sampling strategies draw an [`AgentSeed`] once per episode and map
//! `(posterior, seed)` deterministically to a model. Thompson resampling
//! draws afresh at every decision; concurrent UCRL and greedy are
//! deterministic functionals of the posterior.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::beliefs::{BeliefState, Covariance, DirichletBelief, FiniteScenarioBelief, GaussianVectorBelief, Scale};
use crate::engine::Observation;
use crate::planner::TransitionModel;
use crate::seeds::{derive, rng_from, SeedTree, SimRng, Stream};
use crate::{Error, Result};

/// A concrete model proposed by a strategy for one decision.
#[derive(Clone, Debug, PartialEq)]
pub enum SampledModel {
    /// Reward parameters on their natural scale.
    Rewards(Vec<f64>),
    /// One of a finite set of parameterizations.
    Scenario { index: usize, theta: Vec<f64> },
    Transitions(TransitionModel),
}

impl SampledModel {
    /// Reward parameters, for models that carry them.
    pub fn theta(&self) -> Option<&[f64]> {
        match self {
            SampledModel::Rewards(t) | SampledModel::Scenario { theta: t, .. } => Some(t),
            SampledModel::Transitions(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    SeedStandardGaussian,
    SeedMartingaleanGaussian,
    SeedExponentialDirichlet,
    SeedFiniteScenario,
    ThompsonResampling,
    ConcurrentUcrl,
    Greedy,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 7] = [
        StrategyKind::SeedStandardGaussian,
        StrategyKind::SeedMartingaleanGaussian,
        StrategyKind::SeedExponentialDirichlet,
        StrategyKind::SeedFiniteScenario,
        StrategyKind::ThompsonResampling,
        StrategyKind::ConcurrentUcrl,
        StrategyKind::Greedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::SeedStandardGaussian => "seed-standard-gaussian",
            StrategyKind::SeedMartingaleanGaussian => "seed-martingalean-gaussian",
            StrategyKind::SeedExponentialDirichlet => "seed-exponential-dirichlet",
            StrategyKind::SeedFiniteScenario => "seed-finite-scenario",
            StrategyKind::ThompsonResampling => "thompson-resampling",
            StrategyKind::ConcurrentUcrl => "concurrent-ucrl",
            StrategyKind::Greedy => "greedy",
        }
    }

    pub fn is_seed_sampling(self) -> bool {
        matches!(
            self,
            StrategyKind::SeedStandardGaussian
                | StrategyKind::SeedMartingaleanGaussian
                | StrategyKind::SeedExponentialDirichlet
                | StrategyKind::SeedFiniteScenario
        )
    }

    /// Whether the strategy can act on beliefs of this family.
    pub fn supports(self, belief: &BeliefState) -> bool {
        match (self, belief) {
            (StrategyKind::SeedStandardGaussian | StrategyKind::SeedMartingaleanGaussian, BeliefState::Gaussian(_)) => true,
            (StrategyKind::SeedExponentialDirichlet, BeliefState::Dirichlet(_)) => true,
            (StrategyKind::SeedFiniteScenario, BeliefState::Scenario(_)) => true,
            (StrategyKind::ConcurrentUcrl, BeliefState::Dirichlet(_)) => false,
            (StrategyKind::ThompsonResampling | StrategyKind::ConcurrentUcrl | StrategyKind::Greedy, _) => true,
            _ => false,
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownStrategy(s.to_string()))
    }
}

/// Indexed i.i.d. `N(mean, std_dev²)` values. The `j`-th value is a pure
/// function of the key and `j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbationStream {
    key: u64,
    mean: f64,
    std_dev: f64,
}

impl PerturbationStream {
    pub fn new(key: u64, mean: f64, std_dev: f64) -> Self {
        Self { key, mean, std_dev }
    }

    pub fn get(&self, j: usize) -> f64 {
        let z: f64 = rng_from(derive(self.key, &[j as u64])).sample(StandardNormal);
        self.mean + self.std_dev * z
    }
}

/// Indexed i.i.d. Exp(1) values keyed by `(s, a, s', i)`, generated on
/// demand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentialStreams {
    key: u64,
}

impl ExponentialStreams {
    pub fn new(key: u64) -> Self {
        Self { key }
    }

    /// `z_{s,a,s',i}` for `i >= 1`.
    pub fn get(&self, s: usize, a: usize, s2: usize, i: usize) -> f64 {
        rng_from(derive(self.key, &[s as u64, a as u64, s2 as u64, i as u64])).sample(Exp1)
    }

    /// `Σ_{i=1}^{count} z_{s,a,s',i}`.
    pub fn partial_sum(&self, s: usize, a: usize, s2: usize, count: usize) -> f64 {
        (1..=count).map(|i| self.get(s, a, s2, i)).sum()
    }
}

/// Seed of the martingalean-Gaussian scheme: a prior draw (on the
/// modelling scale) plus one perturbation per observation index.
#[derive(Clone, Debug, PartialEq)]
pub struct MartingaleanSeed {
    pub theta_hat_0: Vec<f64>,
    pub perturbations: PerturbationStream,
}

/// Per-agent randomness, fixed for the whole episode.
#[derive(Clone, Debug, PartialEq)]
pub enum AgentSeed {
    GaussianZ(Vec<f64>),
    Martingalean(MartingaleanSeed),
    ExponentialStreams(ExponentialStreams),
    UniformU(f64),
}

impl AgentSeed {
    /// Draws the seed a strategy of `kind` needs, or `None` for strategies
    /// that keep no seed.
    pub fn draw<R: Rng + ?Sized>(kind: StrategyKind, prior: &BeliefState, rng: &mut R) -> Result<Option<AgentSeed>> {
        let seed = match (kind, prior) {
            (StrategyKind::SeedStandardGaussian, BeliefState::Gaussian(b)) => {
                AgentSeed::GaussianZ((0..b.dim()).map(|_| rng.sample(StandardNormal)).collect())
            }
            (StrategyKind::SeedMartingaleanGaussian, BeliefState::Gaussian(b)) => {
                let z: Vec<f64> = (0..b.dim()).map(|_| rng.sample(StandardNormal)).collect();
                let theta_hat_0 = b.shift(&z)?;
                let sigma_sq = b.noise_variance();
                let mean = match b.scale() {
                    Scale::Normal => 0.0,
                    Scale::Lognormal => -sigma_sq / 2.0,
                };
                AgentSeed::Martingalean(MartingaleanSeed {
                    theta_hat_0,
                    perturbations: PerturbationStream::new(rng.random(), mean, sigma_sq.sqrt()),
                })
            }
            (StrategyKind::SeedExponentialDirichlet, BeliefState::Dirichlet(_)) => {
                AgentSeed::ExponentialStreams(ExponentialStreams::new(rng.random()))
            }
            (StrategyKind::SeedFiniteScenario, BeliefState::Scenario(_)) => AgentSeed::UniformU(rng.random()),
            (k, b) if k.is_seed_sampling() => {
                return Err(Error::Unsupported { strategy: k.name(), belief: b.family() });
            }
            _ => return Ok(None),
        };
        Ok(Some(seed))
    }
}

/// `μ_t + D_t z`, exponentiated for lognormal beliefs.
pub fn propose_standard_gaussian(belief: &GaussianVectorBelief, z: &[f64]) -> Result<SampledModel> {
    let shifted = belief.shift(z)?;
    Ok(SampledModel::Rewards(belief.to_natural(shifted)))
}

// The fit target for observation j. Normal: r_j + w_j. Lognormal:
// ln r_j − w_j with w_j ~ N(−σ²/2, σ²), which in law is an unbiased
// log-scale observation ln r_j + σ²/2 plus N(0, σ²) noise.
fn fit_target(scale: Scale, reward: f64, w: f64) -> Result<f64> {
    match scale {
        Scale::Normal => Ok(reward + w),
        Scale::Lognormal => {
            if !(reward > 0.0) {
                return Err(Error::InvalidInput(format!("lognormal reward must be positive, got {reward}")));
            }
            Ok(reward.ln() - w)
        }
    }
}

/// Sufficient statistics of the perturbed least-squares fit, extended
/// incrementally as the shared history grows. Observations are absorbed in
/// index order, so the result is bit-identical to a fit from scratch.
#[derive(Clone, Debug, PartialEq)]
pub struct MartingaleanFit {
    processed: usize,
    sums: Vec<f64>,
    counts: Vec<f64>,
}

impl MartingaleanFit {
    pub fn new(dim: usize) -> Self {
        Self { processed: 0, sums: vec![0.0; dim], counts: vec![0.0; dim] }
    }

    pub fn processed(&self) -> usize {
        self.processed
    }

    /// Absorbs `history[processed..]`.
    pub fn absorb(&mut self, history: &[Observation], seed: &MartingaleanSeed, scale: Scale) -> Result<()> {
        for (j, obs) in history.iter().enumerate().skip(self.processed) {
            if let Some(i) = obs.param {
                if i >= self.sums.len() {
                    return Err(Error::DimensionMismatch { expected: self.sums.len(), found: i + 1 });
                }
                self.sums[i] += fit_target(scale, obs.reward, seed.perturbations.get(j))?;
                self.counts[i] += 1.0;
            }
        }
        self.processed = history.len();
        Ok(())
    }

    /// Solves `(OᵀO + σ²Σ₀⁻¹) θ = Oᵀ(R + W) + σ²Σ₀⁻¹ θ̂₀` and maps the result
    /// to the natural scale.
    pub fn estimate(&self, prior: &GaussianVectorBelief, seed: &MartingaleanSeed) -> Result<Vec<f64>> {
        let dim = prior.dim();
        if seed.theta_hat_0.len() != dim || self.sums.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: seed.theta_hat_0.len() });
        }
        let sigma_sq = prior.noise_variance();
        let fitted = match prior.covariance() {
            Covariance::Diagonal(var) => (0..dim)
                .map(|i| {
                    if var[i] == 0.0 {
                        return seed.theta_hat_0[i];
                    }
                    let precision = sigma_sq / var[i];
                    (self.sums[i] + precision * seed.theta_hat_0[i]) / (self.counts[i] + precision)
                })
                .collect(),
            Covariance::Dense(sigma0) => {
                let mut lhs = sigma0.inverse_spd()?;
                let reg = lhs.mul_vec(&seed.theta_hat_0);
                let mut rhs = Vec::with_capacity(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        lhs[(i, j)] *= sigma_sq;
                    }
                    lhs[(i, i)] += self.counts[i];
                    rhs.push(self.sums[i] + sigma_sq * reg[i]);
                }
                lhs.solve_spd(&rhs)?
            }
        };
        Ok(prior.to_natural(fitted))
    }
}

/// Regularized least-squares fit to the agent's prior draw and the
/// perturbed history. Observations without a parameter index carry no
/// information and are skipped; perturbation `w_j` is bound to the global
/// index `j` of the observation in `history`.
pub fn propose_martingalean(
    prior: &GaussianVectorBelief,
    history: &[Observation],
    seed: &MartingaleanSeed,
) -> Result<SampledModel> {
    let mut fit = MartingaleanFit::new(prior.dim());
    fit.absorb(history, seed, prior.scale())?;
    Ok(SampledModel::Rewards(fit.estimate(prior, seed)?))
}

/// Normalized partial sums of the agent's Exp(1) streams.
pub fn propose_exponential_dirichlet(belief: &DirichletBelief, streams: &ExponentialStreams) -> Result<SampledModel> {
    if !belief.has_integer_alpha() {
        return Err(Error::InvalidPrior("exponential seed mapping requires integer Dirichlet parameters".into()));
    }
    let (ns, na) = (belief.n_states(), belief.n_actions());
    let mut probs = Vec::with_capacity(ns * na * ns);
    for s in 0..ns {
        for a in 0..na {
            let sums: Vec<f64> = (0..ns)
                .map(|s2| streams.partial_sum(s, a, s2, belief.alpha(s, a, s2) as usize))
                .collect();
            let total: f64 = sums.iter().sum();
            let mut row: Vec<f64> = sums.iter().map(|x| x / total).collect();
            // close the row exactly
            let head: f64 = row[..ns - 1].iter().sum();
            row[ns - 1] = (1.0 - head).max(0.0);
            probs.extend(row);
        }
    }
    Ok(SampledModel::Transitions(TransitionModel::new(ns, na, probs)?))
}

/// Inverse CDF of the current scenario posterior at the agent's uniform seed.
pub fn propose_finite_scenario_seed(belief: &FiniteScenarioBelief, u: f64) -> SampledModel {
    let index = belief.inverse_cdf(u);
    SampledModel::Scenario { index, theta: belief.scenario(index).to_vec() }
}

pub fn propose_thompson_resampling<R: Rng + ?Sized>(belief: &BeliefState, rng: &mut R) -> SampledModel {
    belief.sample_posterior(rng)
}

pub fn propose_ucrl(belief: &BeliefState, beta: f64, scenario_value: &dyn Fn(&[f64]) -> f64) -> Result<SampledModel> {
    belief.ucb_parameters(beta, scenario_value)
}

/// Posterior-mean model; lognormal beliefs use `exp(μ_t)`.
pub fn propose_greedy(belief: &BeliefState) -> SampledModel {
    match belief {
        BeliefState::Gaussian(b) => SampledModel::Rewards(b.upper_bound(0.0)),
        BeliefState::Scenario(b) => SampledModel::Rewards(b.mean()),
        BeliefState::Dirichlet(b) => SampledModel::Transitions(b.mean()),
    }
}

/// Inputs available to an agent at a decision.
pub struct ProposalContext<'a> {
    pub belief: &'a BeliefState,
    pub prior: &'a BeliefState,
    pub history: &'a [Observation],
    pub beta: f64,
    pub scenario_value: &'a dyn Fn(&[f64]) -> f64,
}

/// One agent's strategy: its kind, its fixed seed (if any), a private
/// resampling stream and cached fit statistics.
#[derive(Clone, Debug)]
pub struct AgentStrategy {
    kind: StrategyKind,
    seed: Option<AgentSeed>,
    fit: Option<MartingaleanFit>,
    rng: SimRng,
}

impl AgentStrategy {
    /// Seeds agent `agent` from the replication's seed tree.
    pub fn new(kind: StrategyKind, prior: &BeliefState, seeds: &SeedTree, agent: usize) -> Result<Self> {
        let seed = AgentSeed::draw(kind, prior, &mut seeds.rng(Stream::AgentSeed, agent as u64))?;
        Self::with_seed(kind, prior, seed, seeds.rng(Stream::Resampling, agent as u64))
    }

    pub fn with_seed(kind: StrategyKind, prior: &BeliefState, seed: Option<AgentSeed>, rng: SimRng) -> Result<Self> {
        if !kind.supports(prior) {
            return Err(Error::Unsupported { strategy: kind.name(), belief: prior.family() });
        }
        let fit = match (&seed, prior) {
            (Some(AgentSeed::Martingalean(_)), BeliefState::Gaussian(b)) => Some(MartingaleanFit::new(b.dim())),
            _ => None,
        };
        Ok(Self { kind, seed, fit, rng })
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn seed(&self) -> Option<&AgentSeed> {
        self.seed.as_ref()
    }

    pub fn propose(&mut self, ctx: &ProposalContext<'_>) -> Result<SampledModel> {
        let unsupported = || Error::Unsupported { strategy: self.kind.name(), belief: ctx.belief.family() };
        match self.kind {
            StrategyKind::SeedStandardGaussian => match (ctx.belief, &self.seed) {
                (BeliefState::Gaussian(b), Some(AgentSeed::GaussianZ(z))) => propose_standard_gaussian(b, z),
                _ => Err(unsupported()),
            },
            StrategyKind::SeedMartingaleanGaussian => match (ctx.prior, &self.seed, self.fit.as_mut()) {
                (BeliefState::Gaussian(prior), Some(AgentSeed::Martingalean(seed)), Some(fit)) => {
                    if fit.processed() > ctx.history.len() {
                        *fit = MartingaleanFit::new(prior.dim());
                    }
                    fit.absorb(ctx.history, seed, prior.scale())?;
                    Ok(SampledModel::Rewards(fit.estimate(prior, seed)?))
                }
                _ => Err(unsupported()),
            },
            StrategyKind::SeedExponentialDirichlet => match (ctx.belief, &self.seed) {
                (BeliefState::Dirichlet(b), Some(AgentSeed::ExponentialStreams(z))) => propose_exponential_dirichlet(b, z),
                _ => Err(unsupported()),
            },
            StrategyKind::SeedFiniteScenario => match (ctx.belief, &self.seed) {
                (BeliefState::Scenario(b), Some(AgentSeed::UniformU(u))) => Ok(propose_finite_scenario_seed(b, *u)),
                _ => Err(unsupported()),
            },
            StrategyKind::ThompsonResampling => Ok(propose_thompson_resampling(ctx.belief, &mut self.rng)),
            StrategyKind::ConcurrentUcrl => propose_ucrl(ctx.belief, ctx.beta, ctx.scenario_value),
            StrategyKind::Greedy => Ok(propose_greedy(ctx.belief)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(j: usize, param: Option<usize>, reward: f64) -> Observation {
        Observation { time: j as f64, agent: 0, step: j + 1, state: 0, action: 0, next_state: 0, reward, param }
    }

    #[test]
    fn names_round_trip() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
        }
        assert!(matches!("nosuch".parse::<StrategyKind>(), Err(Error::UnknownStrategy(_))));
    }

    #[test]
    fn zero_seed_gives_mean() {
        let b = GaussianVectorBelief::diagonal(vec![1.0, -1.0], vec![2.0, 3.0], 1.0, Scale::Normal).unwrap();
        assert_eq!(propose_standard_gaussian(&b, &[0.0, 0.0]).unwrap(), SampledModel::Rewards(vec![1.0, -1.0]));
        let l = GaussianVectorBelief::diagonal(vec![0.5], vec![4.0], 0.01, Scale::Lognormal).unwrap();
        assert_eq!(propose_standard_gaussian(&l, &[0.0]).unwrap(), SampledModel::Rewards(vec![0.5f64.exp()]));
    }

    #[test]
    fn unit_seed_moves_one_coordinate() {
        let b = GaussianVectorBelief::diagonal(vec![1.0, -1.0], vec![4.0, 9.0], 1.0, Scale::Normal).unwrap();
        assert_eq!(propose_standard_gaussian(&b, &[0.0, 1.0]).unwrap(), SampledModel::Rewards(vec![1.0, 2.0]));
        assert!(matches!(propose_standard_gaussian(&b, &[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn martingalean_empty_history_is_prior_draw() {
        let prior = GaussianVectorBelief::diagonal(vec![0.0, 0.0], vec![1.0, 2.0], 1.0, Scale::Normal).unwrap();
        let seed = MartingaleanSeed { theta_hat_0: vec![0.3, -0.7], perturbations: PerturbationStream::new(1, 0.0, 1.0) };
        assert_eq!(propose_martingalean(&prior, &[], &seed).unwrap(), SampledModel::Rewards(vec![0.3, -0.7]));

        let log_prior = GaussianVectorBelief::diagonal(vec![0.0], vec![4.0], 0.01, Scale::Lognormal).unwrap();
        let seed = MartingaleanSeed { theta_hat_0: vec![0.4], perturbations: PerturbationStream::new(1, -0.005, 0.1) };
        assert_eq!(propose_martingalean(&log_prior, &[], &seed).unwrap(), SampledModel::Rewards(vec![0.4f64.exp()]));
    }

    #[test]
    fn martingalean_scalar_closed_form() {
        let prior = GaussianVectorBelief::diagonal(vec![0.0], vec![1.0], 1.0, Scale::Normal).unwrap();
        // zero-variance stream gives w_1 = 0
        let seed = MartingaleanSeed { theta_hat_0: vec![0.0], perturbations: PerturbationStream::new(9, 0.0, 0.0) };
        let out = propose_martingalean(&prior, &[obs(0, Some(0), 2.0)], &seed).unwrap();
        assert_eq!(out, SampledModel::Rewards(vec![1.0]));
    }

    #[test]
    fn martingalean_dense_agrees_with_diagonal() {
        let diag = GaussianVectorBelief::diagonal(vec![0.0, 1.0], vec![1.5, 0.5], 0.7, Scale::Normal).unwrap();
        let dense = GaussianVectorBelief::dense(
            vec![0.0, 1.0],
            crate::linalg::Matrix::from_diagonal(&[1.5, 0.5]),
            0.7,
            Scale::Normal,
        )
        .unwrap();
        let seed = MartingaleanSeed { theta_hat_0: vec![0.2, 0.9], perturbations: PerturbationStream::new(5, 0.0, 0.7f64.sqrt()) };
        let history = [obs(0, Some(0), 1.0), obs(1, None, 0.0), obs(2, Some(1), 3.0), obs(3, Some(0), -0.5)];
        let a = propose_martingalean(&diag, &history, &seed).unwrap();
        let b = propose_martingalean(&dense, &history, &seed).unwrap();
        let (SampledModel::Rewards(a), SampledModel::Rewards(b)) = (a, b) else { panic!() };
        for i in 0..2 {
            assert!((a[i] - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn incremental_fit_is_bit_identical() {
        let prior = GaussianVectorBelief::diagonal(vec![0.0; 3], vec![1.0; 3], 0.5, Scale::Normal).unwrap();
        let seed = MartingaleanSeed { theta_hat_0: vec![0.1, 0.2, 0.3], perturbations: PerturbationStream::new(11, 0.0, 0.5f64.sqrt()) };
        let history: Vec<_> = (0..20).map(|j| obs(j, Some(j % 3), j as f64 * 0.37)).collect();
        let mut fit = MartingaleanFit::new(3);
        for end in [3, 7, 7, 20] {
            fit.absorb(&history[..end], &seed, Scale::Normal).unwrap();
        }
        let incremental = fit.estimate(&prior, &seed).unwrap();
        let SampledModel::Rewards(batch) = propose_martingalean(&prior, &history, &seed).unwrap() else { panic!() };
        assert_eq!(incremental, batch);
    }

    #[test]
    fn exponential_dirichlet_rows_close_exactly() {
        let mut b = DirichletBelief::uniform(4, 2, 1.0).unwrap();
        b.update(1, 1, 3).unwrap();
        b.update(1, 1, 3).unwrap();
        for key in 0..50 {
            let SampledModel::Transitions(t) = propose_exponential_dirichlet(&b, &ExponentialStreams::new(key)).unwrap() else {
                panic!()
            };
            for s in 0..4 {
                for a in 0..2 {
                    assert_eq!(t.row(s, a).iter().sum::<f64>(), 1.0);
                }
            }
        }
    }

    #[test]
    fn exponential_dirichlet_rejects_fractional_prior() {
        let b = DirichletBelief::uniform(2, 1, 0.5).unwrap();
        assert!(matches!(
            propose_exponential_dirichlet(&b, &ExponentialStreams::new(1)),
            Err(Error::InvalidPrior(_))
        ));
    }

    #[test]
    fn streams_are_stable() {
        let s = ExponentialStreams::new(77);
        assert_eq!(s.get(1, 0, 2, 5), s.get(1, 0, 2, 5));
        assert_ne!(s.get(1, 0, 2, 5), s.get(1, 0, 2, 6));
        let w = PerturbationStream::new(3, 0.0, 1.0);
        assert_eq!(w.get(42), w.get(42));
    }

    #[test]
    fn greedy_is_zero_width_ucrl() {
        let b = BeliefState::Gaussian(
            GaussianVectorBelief::diagonal(vec![0.5, 0.1], vec![3.0, 1.0], 1.0, Scale::Lognormal).unwrap(),
        );
        assert_eq!(propose_greedy(&b), propose_ucrl(&b, 0.0, &|_| 0.0).unwrap());
    }

    #[test]
    fn unsupported_pairs_are_rejected() {
        let prior = BeliefState::Scenario(FiniteScenarioBelief::new(vec![vec![1.0], vec![-1.0]], vec![0.5, 0.5]).unwrap());
        let tree = SeedTree::new(1);
        assert!(matches!(
            AgentStrategy::new(StrategyKind::SeedStandardGaussian, &prior, &tree, 0),
            Err(Error::Unsupported { .. })
        ));
        let dirichlet = BeliefState::Dirichlet(DirichletBelief::uniform(2, 1, 1.0).unwrap());
        assert!(AgentStrategy::new(StrategyKind::ConcurrentUcrl, &dirichlet, &tree, 0).is_err());
        assert!(AgentStrategy::new(StrategyKind::Greedy, &dirichlet, &tree, 0).is_ok());
    }
}
