//! The four seed-sampling maps. An agent's seed is drawn once; each
//! proposal is a deterministic function of the seed and the shared
//! posterior, so an agent's model only moves when the data do.

use seedrl::beliefs::{BeliefState, DirichletBelief, FiniteScenarioBelief, GaussianVectorBelief, Scale};
use seedrl::engine::Observation;
use seedrl::seeds::SeedTree;
use seedrl::strategies::{AgentStrategy, ProposalContext, StrategyKind};

fn show(kind: StrategyKind, prior: &BeliefState, posterior: &BeliefState, history: &[Observation]) -> seedrl::Result<()> {
    let tree = SeedTree::new(2024);
    let none = |_: &[f64]| 0.0;
    println!("{kind}");
    for agent in 0..3 {
        let mut s = AgentStrategy::new(kind, prior, &tree, agent)?;
        let before = s.propose(&ProposalContext { belief: prior, prior, history: &[], beta: 1.0, scenario_value: &none })?;
        let after = s.propose(&ProposalContext { belief: posterior, prior, history, beta: 1.0, scenario_value: &none })?;
        println!("  agent {agent}: prior {before:?}");
        println!("           posterior {after:?}");
    }
    Ok(())
}

fn main() -> seedrl::Result<()> {
    let prior = GaussianVectorBelief::diagonal(vec![0.0, 0.0], vec![4.0, 1.0], 0.25, Scale::Normal)?;
    let history = vec![Observation { time: 0.3, agent: 9, step: 1, state: 0, action: 0, next_state: 1, reward: 1.5, param: Some(0) }];
    let mut posterior = prior.clone();
    posterior.observe(0, 1.5)?;
    let (prior, posterior) = (BeliefState::Gaussian(prior), BeliefState::Gaussian(posterior));
    show(StrategyKind::SeedStandardGaussian, &prior, &posterior, &history)?;
    show(StrategyKind::SeedMartingaleanGaussian, &prior, &posterior, &history)?;

    let dirichlet = DirichletBelief::uniform(2, 1, 1.0)?;
    let mut updated = dirichlet.clone();
    updated.update(0, 0, 1)?;
    show(StrategyKind::SeedExponentialDirichlet, &BeliefState::Dirichlet(dirichlet), &BeliefState::Dirichlet(updated), &[])?;

    let scenarios = FiniteScenarioBelief::new(vec![vec![4.0, -4.0], vec![-4.0, 4.0]], vec![0.5, 0.5])?;
    let mut revealed = scenarios.clone();
    revealed.update(Some(1), 4.0)?;
    show(StrategyKind::SeedFiniteScenario, &BeliefState::Scenario(scenarios), &BeliefState::Scenario(revealed), &[])?;
    Ok(())
}
