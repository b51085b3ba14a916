//! Unknown transitions with Dirichlet priors: exponential-stream seeds
//! against resampling and greedy planning on the posterior mean.

use seedrl::bench::{preset_config, simulate};

fn main() -> seedrl::Result<()> {
    let mut config = preset_config("dirichlet-testbed")?;
    config.agents = vec![1, 10, 100];
    config.replications = 50;
    print!("{}", config.describe());
    let data = simulate(&config)?;
    for row in &data.aggregate {
        println!("{:<28} K={:<4} {:.4} ± {:.4}", row.strategy, row.agents, row.mean_regret_per_agent, row.std_error);
    }
    Ok(())
}
