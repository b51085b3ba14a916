//! Parallel chains at paper scale, written to `{out}/parallel_raw.csv` and
//! `{out}/parallel_aggregate.csv`.
//!
//! `cargo run --release --example parallel_chains_sweep -- [out] [replications]`

use std::path::PathBuf;

use seedrl::bench::{preset_config, run_sweep};

fn main() -> seedrl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config = preset_config("parallel")?;
    config.out = PathBuf::from(args.first().map_or("results", String::as_str));
    config.replications = args.get(1).map_or(100, |r| r.parse().expect("replications"));
    config.agents = vec![1, 10, 100, 1000];
    let data = run_sweep(&config)?;
    for row in &data.aggregate {
        println!("{:<28} K={:<5} {:.3} ± {:.3}", row.strategy, row.agents, row.mean_regret_per_agent, row.std_error);
    }
    println!("wrote {} and {}", config.raw_path().display(), config.aggregate_path().display());
    Ok(())
}
