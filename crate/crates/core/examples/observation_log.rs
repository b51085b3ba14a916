//! One traced episode: the shared observation log and each agent's outcome.
//!
//! `cargo run --example observation_log -- [strategy] [K]`

use std::io::stdout;

use seedrl::engine::{cumulative_regret_by_activation, write_observation_log, EpisodeConfig, Simulation};
use seedrl::environments::make_parallel_chains;
use seedrl::seeds::{rng_from, SeedTree};
use seedrl::strategies::StrategyKind;

fn main() -> seedrl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind: StrategyKind = args.first().map_or("seed-standard-gaussian", String::as_str).parse()?;
    let k: usize = args.get(1).map_or(4, |v| v.parse().expect("K"));
    let (spec, truth) = make_parallel_chains(3, 3, 0.0, 100.0, 1.0, &mut rng_from(3))?;
    println!("θ = {:?}", truth.theta);
    let (result, trace) = Simulation::new(&spec, &truth, EpisodeConfig::new(kind, k), SeedTree::new(5)).run_traced()?;
    println!("# time agent step state action next_state reward");
    write_observation_log(stdout(), &result.observations)?;
    for d in trace.iter().filter(|d| d.event.step == 1) {
        println!("agent {} picks chain {} at t={:.3}", d.event.agent, d.action, d.event.time);
    }
    for a in &result.agents {
        println!("agent {}: {} steps, reward {:.3}, regret {:.3}", a.agent, a.steps, a.total_reward, a.regret);
    }
    println!("cumulative regret by activation: {:?}", cumulative_regret_by_activation(&result));
    Ok(())
}
