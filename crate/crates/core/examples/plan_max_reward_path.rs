//! Samples a maximum-reward-path instance, writes its edge list and plans
//! with the true weights and with the prior median.
//!
//! `cargo run --example plan_max_reward_path -- [N] [H] [seed]`

use std::io::stdout;

use seedrl::beliefs::BeliefState;
use seedrl::environments::{make_max_reward_path, optimal_reward, write_edge_list, Dynamics, MaxPathPrior};
use seedrl::planner::{plan, PlanRequest};
use seedrl::seeds::rng_from;
use seedrl::strategies::propose_greedy;

fn main() -> seedrl::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let n = *args.first().unwrap_or(&12) as usize;
    let h = *args.get(1).unwrap_or(&4) as usize;
    let seed = *args.get(2).unwrap_or(&1);
    let p = 2.0 * (n as f64).ln() / n as f64;
    let (spec, truth) = make_max_reward_path(n, p, MaxPathPrior { horizon: h, ..Default::default() }, &mut rng_from(seed))?;
    write_edge_list(&spec, &truth, stdout())?;

    let Dynamics::Graph(graph) = &spec.dynamics else { unreachable!() };
    let mut state = spec.start;
    let mut path = vec![state];
    for m in 1..=h {
        let step = plan(&PlanRequest { graph, theta: &truth.theta, state, steps_remaining: h - m + 1 })?;
        state = graph.actions(state)[step.action].target;
        path.push(state);
    }
    println!("optimal {h}-step walk from {}: {path:?}, R* = {:.4}", spec.start, optimal_reward(&spec, &truth)?);

    let median = propose_greedy(&spec.prior);
    let BeliefState::Gaussian(_) = &spec.prior else { unreachable!() };
    let guess = plan(&PlanRequest { graph, theta: median.theta().unwrap(), state: spec.start, steps_remaining: h })?;
    println!("under the prior median every edge weighs 1: first action {}, value {:.1}", guess.action, guess.value);
    Ok(())
}
