//! Cumulative regret of concurrent agents on random graphs, ordered by
//! activation time, written to `{out}/maxpath_cumulative.csv`.
//!
//! `cargo run --release --example max_reward_path_cumulative -- [out] [N] [H] [K] [replications]`

use std::path::PathBuf;

use seedrl::bench::{emit_cumulative, preset_config};

fn main() -> seedrl::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let mut config = preset_config("maxpath")?;
    config.out = PathBuf::from(arg(0, "results"));
    config.apply_overrides(&[format!("N={}", arg(1, "30")), format!("H={}", arg(2, "6"))])?;
    config.agents = vec![arg(3, "1000").parse().expect("K")];
    config.replications = arg(4, "20").parse().expect("replications");
    print!("{}", config.describe());
    let data = emit_cumulative(&config)?;
    let k = config.agents[0];
    let seed = data.cumulative_for(seedrl::strategies::StrategyKind::SeedStandardGaussian, k).unwrap().values[k - 1];
    for series in &data.cumulative {
        let last = series.values[k - 1];
        println!("{:<28} final {:>14.1}  ({:+.1}% vs seed-standard-gaussian)", series.strategy, last, 100.0 * (last / seed - 1.0));
    }
    println!("wrote {}", config.cumulative_path().display());
    Ok(())
}
