//! Mean regret per agent on the bipolar chain as the number of agents grows.
//!
//! `cargo run --release --example bipolar_chain -- [N] [replications]`

use seedrl::bench::{preset_config, simulate};

fn main() -> seedrl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().map_or("20", String::as_str);
    let mut config = preset_config("bipolar")?;
    config.apply_overrides(&[format!("N={n}")])?;
    config.agents = vec![1, 10, 100];
    config.replications = args.get(1).map_or(100, |r| r.parse().expect("replications"));
    print!("{}", config.describe());
    let data = simulate(&config)?;
    println!("{:<24} {:>5} {:>12} {:>10}", "strategy", "K", "regret/agent", "s.e.");
    for row in &data.aggregate {
        println!("{:<24} {:>5} {:>12.3} {:>10.3}", row.strategy, row.agents, row.mean_regret_per_agent, row.std_error);
    }
    Ok(())
}
