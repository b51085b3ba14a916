use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seedrl::beliefs::BeliefState;
use seedrl::engine::{
    bayes_regret, cumulative_regret_by_activation, generate_arrivals, posterior_from, run_episode,
    write_observation_log, EpisodeConfig, Simulation,
};
use seedrl::environments::{
    chain_state, make_bipolar_chain, make_dirichlet_testbed, make_max_reward_path, make_parallel_chains, MaxPathPrior,
    RewardNoise, TrueModel,
};
use seedrl::seeds::{SeedTree, Stream};
use seedrl::strategies::{AgentSeed, AgentStrategy, SampledModel, StrategyKind};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn two_agent_transcript() {
    // C=2 chains of depth 2, prior variances 2 and 3, unit noise in the
    // belief but noiseless rewards so the transcript is exact.
    let (mut spec, _) = make_parallel_chains(2, 2, 0.0, 1.0, 1.0, &mut rng(1)).unwrap();
    spec.noise = RewardNoise::None;
    let truth = TrueModel { theta: vec![1.0, 3.0], scenario: None, transitions: None };
    let (result, trace) = Simulation::new(&spec, &truth, EpisodeConfig::new(StrategyKind::SeedStandardGaussian, 2), SeedTree::new(0))
        .with_arrivals(vec![vec![0.5, 1.0], vec![0.7, 1.5]])
        .with_agent_seeds(vec![Some(AgentSeed::GaussianZ(vec![1.0, 0.0])), Some(AgentSeed::GaussianZ(vec![0.0, 1.0]))])
        .run_traced()
        .unwrap();

    // t=0.5 agent 0 samples (√2, 0) and enters chain 0
    // t=0.7 agent 1 samples (0, √3) and enters chain 1
    // t=1.0 agent 0 traverses the last edge of chain 0: r=1, μ₀ = 2/3, v₀ = 2/3
    // t=1.5 agent 1 traverses the last edge of chain 1: r=3, μ₁ = 9/4, v₁ = 3/4
    let expected = [
        (0.5, 0, 1, 0, 0, chain_state(0, 1, 2), 0.0),
        (0.7, 1, 1, 0, 1, chain_state(1, 1, 2), 0.0),
        (1.0, 0, 2, chain_state(0, 1, 2), 0, chain_state(0, 2, 2), 1.0),
        (1.5, 1, 2, chain_state(1, 1, 2), 0, chain_state(1, 2, 2), 3.0),
    ];
    assert_eq!(result.observations.len(), 4);
    for (o, e) in result.observations.iter().zip(expected) {
        assert_eq!((o.time, o.agent, o.step, o.state, o.action, o.next_state, o.reward), e);
    }
    let models: Vec<&SampledModel> = trace.iter().map(|d| &d.model).collect();
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    assert_eq!(models[0], &SampledModel::Rewards(vec![r2, 0.0]));
    assert_eq!(models[1], &SampledModel::Rewards(vec![0.0, r3]));
    assert_eq!(models[2], &SampledModel::Rewards(vec![r2, 0.0]));
    // agent 1 sees agent 0's observation
    let mu0 = 2.0 / 3.0;
    let SampledModel::Rewards(m) = models[3] else { unreachable!() };
    assert!((m[0] - mu0).abs() < 1e-15 && (m[1] - r3).abs() < 1e-15);

    let BeliefState::Gaussian(last) = &trace[3].belief else { unreachable!() };
    assert!((last.mean()[0] - mu0).abs() < 1e-15 && (last.variance(0) - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!((last.mean()[1], last.variance(1)), (0.0, 3.0));

    assert_eq!(result.optimal_reward, 3.0);
    let regrets: Vec<f64> = result.agents.iter().map(|a| a.regret).collect();
    assert_eq!(regrets, vec![2.0, 0.0]);
    assert_eq!(result.agents[0].activation_time, 0.5);
    assert_eq!(bayes_regret(&[result]).unwrap().mean, 1.0);
}

#[test]
fn replay_is_bit_identical() {
    let (spec, truth) = make_max_reward_path(15, 0.35, MaxPathPrior { horizon: 5, ..Default::default() }, &mut rng(2)).unwrap();
    for kind in [
        StrategyKind::SeedStandardGaussian,
        StrategyKind::SeedMartingaleanGaussian,
        StrategyKind::ThompsonResampling,
        StrategyKind::ConcurrentUcrl,
        StrategyKind::Greedy,
    ] {
        let a = run_episode(&spec, &truth, EpisodeConfig::new(kind, 30), SeedTree::new(3)).unwrap();
        let b = run_episode(&spec, &truth, EpisodeConfig::new(kind, 30), SeedTree::new(3)).unwrap();
        assert_eq!(a, b, "{kind}");
        let mut la = Vec::new();
        let mut lb = Vec::new();
        write_observation_log(&mut la, &a.observations).unwrap();
        write_observation_log(&mut lb, &b.observations).unwrap();
        assert_eq!(la, lb);
    }
}

#[test]
fn decisions_never_see_the_future() {
    let (spec, truth) = make_parallel_chains(4, 3, 0.0, 10.0, 1.0, &mut rng(4)).unwrap();
    let (result, trace) =
        Simulation::new(&spec, &truth, EpisodeConfig::new(StrategyKind::SeedMartingaleanGaussian, 25), SeedTree::new(5))
            .run_traced()
            .unwrap();
    assert_eq!(trace.len(), result.observations.len());
    for d in &trace {
        let past: Vec<_> = result.observations.iter().filter(|o| o.time < d.event.time).cloned().collect();
        assert_eq!(posterior_from(&spec.prior, &past).unwrap(), d.belief);
    }
    let (spec, truth) = make_dirichlet_testbed(4, 2, 6, 1.0, &mut rng(6)).unwrap();
    let (result, trace) =
        Simulation::new(&spec, &truth, EpisodeConfig::new(StrategyKind::SeedExponentialDirichlet, 10), SeedTree::new(7))
            .run_traced()
            .unwrap();
    for d in &trace {
        let past: Vec<_> = result.observations.iter().filter(|o| o.time < d.event.time).cloned().collect();
        assert_eq!(posterior_from(&spec.prior, &past).unwrap(), d.belief);
    }
}

#[test]
fn adding_an_agent_leaves_others_unchanged() {
    let tree = SeedTree::new(8);
    let five = generate_arrivals(5, 10, 1.0, &tree);
    let six = generate_arrivals(6, 10, 1.0, &tree);
    assert_eq!(&six[..5], &five[..]);
    let (spec, _) = make_parallel_chains(3, 2, 0.0, 1.0, 1.0, &mut rng(9)).unwrap();
    for agent in 0..5 {
        let a = AgentStrategy::new(StrategyKind::SeedMartingaleanGaussian, &spec.prior, &tree, agent).unwrap();
        let b = AgentStrategy::new(StrategyKind::SeedMartingaleanGaussian, &spec.prior, &tree, agent).unwrap();
        assert_eq!(a.seed(), b.seed());
    }
    assert_ne!(tree.seed(Stream::AgentSeed, 0), tree.seed(Stream::AgentSeed, 1));
}

#[test]
fn regret_replays_from_the_observation_log() {
    let (spec, truth) = make_parallel_chains(5, 3, 0.0, 20.0, 1.0, &mut rng(10)).unwrap();
    let result = run_episode(&spec, &truth, EpisodeConfig::new(StrategyKind::ThompsonResampling, 40), SeedTree::new(11)).unwrap();
    let mut log = Vec::new();
    write_observation_log(&mut log, &result.observations).unwrap();
    let mut totals = vec![0.0; 40];
    for line in String::from_utf8(log).unwrap().lines() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(fields.len(), 7);
        totals[fields[1].parse::<usize>().unwrap()] += fields[6].parse::<f64>().unwrap();
    }
    let replayed = totals.iter().map(|t| result.optimal_reward - t).sum::<f64>() / 40.0;
    let est = bayes_regret(std::slice::from_ref(&result)).unwrap();
    assert!((replayed - est.mean).abs() < 1e-7, "{replayed} vs {}", est.mean);
}

#[test]
fn bipolar_agents_after_revelation_walk_straight() {
    let (spec, truth) = make_bipolar_chain(20, &mut rng(12)).unwrap();
    let result = run_episode(&spec, &truth, EpisodeConfig::new(StrategyKind::SeedFiniteScenario, 300), SeedTree::new(13)).unwrap();
    let reveal = result.observations.iter().find(|o| o.param.is_some()).map(|o| o.time).unwrap();
    let late: Vec<_> = result.agents.iter().filter(|a| a.activation_time > reveal).collect();
    assert!(!late.is_empty());
    for a in late {
        assert_eq!(a.regret, 0.0, "agent {} started at {}", a.agent, a.activation_time);
    }
    let series = cumulative_regret_by_activation(&result);
    assert!(series.windows(2).all(|w| w[1] >= w[0]));
    let total: f64 = result.agents.iter().map(|a| a.regret).sum();
    assert!((series.last().unwrap() - total).abs() < 1e-9);
}

#[test]
fn ucrl_herds_to_the_right_on_the_bipolar_prior() {
    let (spec, truth) = make_bipolar_chain(12, &mut rng(14)).unwrap();
    let (result, trace) =
        Simulation::new(&spec, &truth, EpisodeConfig::new(StrategyKind::ConcurrentUcrl, 20), SeedTree::new(15))
            .run_traced()
            .unwrap();
    let reveal = result.observations.iter().find(|o| o.param.is_some()).map(|o| o.time).unwrap();
    assert!(trace.iter().filter(|d| d.event.time <= reveal).all(|d| d.action == 1));
}

#[test]
fn ucrl_sends_everyone_to_the_widest_chain() {
    let (spec, truth) = make_parallel_chains(10, 5, 0.0, 100.0, 1.0, &mut rng(16)).unwrap();
    let (_, trace) = Simulation::new(&spec, &truth, EpisodeConfig::new(StrategyKind::ConcurrentUcrl, 30), SeedTree::new(17))
        .run_traced()
        .unwrap();
    let first = trace.iter().find(|d| d.event.step == 1).unwrap();
    assert_eq!(first.action, 9);
}

#[test]
fn single_chain_has_no_regret() {
    let (mut spec, truth) = make_parallel_chains(1, 3, 0.0, 100.0, 1.0, &mut rng(18)).unwrap();
    spec.noise = RewardNoise::None;
    for kind in [StrategyKind::SeedStandardGaussian, StrategyKind::ThompsonResampling, StrategyKind::ConcurrentUcrl] {
        let r = run_episode(&spec, &truth, EpisodeConfig::new(kind, 5), SeedTree::new(19)).unwrap();
        assert!(r.agents.iter().all(|a| a.steps == 3 && a.regret == 0.0));
    }
}
