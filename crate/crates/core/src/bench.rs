//! Experiment presets, parameter sweeps, CSV output and the command line.
//!
//! Within one replication every strategy and every agent count sees the
//! same true environment and the same per-agent random streams, so
//! differences between strategies are not diluted by sampling noise.
//!
//! CSV files start with a block of `#` comment lines echoing the resolved
//! configuration, followed by a header row. Columns:
//!
//! | file                    | columns |
//! |-------------------------|---------|
//! | `{preset}_raw.csv`      | preset, strategy, K, replication, agent_id, activation_time, total_reward, regret |
//! | `{preset}_aggregate.csv`| strategy, K, mean_regret_per_agent, std_error |
//! | `{preset}_cumulative.csv` | strategy, K, rank, cumulative_regret |

use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use rayon::prelude::*;

use crate::engine::{config_hash, cumulative_regret_by_activation, mean_and_std_error, EpisodeConfig, Simulation};
use crate::environments::{
    make_bipolar_chain, make_dirichlet_testbed, make_max_reward_path, make_parallel_chains, EnvironmentSpec,
    MaxPathPrior, TrueModel,
};
use crate::seeds::{SeedTree, Stream};
use crate::strategies::StrategyKind;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Bipolar,
    Parallel,
    Maxpath,
    DirichletTestbed,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Bipolar, Preset::Parallel, Preset::Maxpath, Preset::DirichletTestbed];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Bipolar => "bipolar",
            Preset::Parallel => "parallel",
            Preset::Maxpath => "maxpath",
            Preset::DirichletTestbed => "dirichlet-testbed",
        }
    }

    pub fn default_strategies(self) -> Vec<StrategyKind> {
        use StrategyKind::*;
        match self {
            Preset::Bipolar => vec![SeedFiniteScenario, ThompsonResampling, ConcurrentUcrl],
            Preset::Parallel | Preset::Maxpath => {
                vec![SeedStandardGaussian, SeedMartingaleanGaussian, ThompsonResampling, ConcurrentUcrl]
            }
            Preset::DirichletTestbed => vec![SeedExponentialDirichlet, ThompsonResampling, Greedy],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Environment parameters. Fields that a preset does not use are ignored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvParams {
    /// Vertices (bipolar, maxpath) or states (testbed).
    pub n: usize,
    pub chains: usize,
    pub horizon: usize,
    pub edge_probability: f64,
    /// Prior mean: of `θ` for parallel chains, of `ln θ` for maxpath.
    pub mu0: f64,
    /// Prior variance, same convention as `mu0`.
    pub sigma0_sq: f64,
    pub sigma_sq: f64,
    pub alpha0: f64,
    pub n_actions: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub strategies: Vec<StrategyKind>,
    pub agents: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub env: EnvParams,
    pub beta: f64,
    pub rate: f64,
    pub out: PathBuf,
}

pub const DEFAULT_REPLICATIONS: usize = 100;
pub const DEFAULT_AGENTS: [usize; 4] = [1, 10, 100, 1000];

fn edge_probability_for(n: usize) -> f64 {
    2.0 * (n as f64).ln() / n as f64
}

pub fn preset_config(name: &str) -> Result<ExperimentConfig> {
    let preset: Preset = name.parse()?;
    let base = EnvParams {
        n: 0,
        chains: 0,
        horizon: 0,
        edge_probability: 0.0,
        mu0: 0.0,
        sigma0_sq: 0.0,
        sigma_sq: 0.0,
        alpha0: 1.0,
        n_actions: 0,
    };
    let env = match preset {
        Preset::Bipolar => EnvParams { n: 100, horizon: 150, ..base },
        Preset::Parallel => EnvParams { chains: 10, horizon: 5, mu0: 0.0, sigma0_sq: 100.0, sigma_sq: 1.0, ..base },
        Preset::Maxpath => {
            let d = MaxPathPrior::default();
            EnvParams {
                n: 100,
                horizon: d.horizon,
                edge_probability: edge_probability_for(100),
                mu0: d.log_mean,
                sigma0_sq: d.log_variance,
                sigma_sq: d.noise_variance,
                ..base
            }
        }
        Preset::DirichletTestbed => EnvParams { n: 5, n_actions: 2, horizon: 10, alpha0: 1.0, ..base },
    };
    Ok(ExperimentConfig {
        preset,
        strategies: preset.default_strategies(),
        agents: DEFAULT_AGENTS.to_vec(),
        replications: DEFAULT_REPLICATIONS,
        seed: 0,
        env,
        beta: 1.0,
        rate: 1.0,
        out: PathBuf::from("results"),
    })
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{value}` for override `{key}`")))
}

impl ExperimentConfig {
    /// Applies `key=value` overrides. Keys: `N`, `C`, `H`, `p`, `mu0`,
    /// `sigma0_sq`, `sigma_sq`, `alpha0`, `A`, `beta`, `rate`. Changing `N`
    /// re-derives the bipolar horizon `3N/2` and the maxpath edge
    /// probability `2 ln N / N` unless those are overridden as well.
    pub fn apply_overrides<S: AsRef<str>>(&mut self, overrides: &[S]) -> Result<()> {
        let (mut set_n, mut set_h, mut set_p) = (false, false, false);
        for item in overrides {
            let item = item.as_ref();
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override `{item}` is not key=value")))?;
            let key = key.trim();
            match key {
                "N" => {
                    self.env.n = parse_value(key, value)?;
                    set_n = true;
                }
                "C" => self.env.chains = parse_value(key, value)?,
                "H" => {
                    self.env.horizon = parse_value(key, value)?;
                    set_h = true;
                }
                "p" => {
                    self.env.edge_probability = parse_value(key, value)?;
                    set_p = true;
                }
                "mu0" => self.env.mu0 = parse_value(key, value)?,
                "sigma0_sq" => self.env.sigma0_sq = parse_value(key, value)?,
                "sigma_sq" => self.env.sigma_sq = parse_value(key, value)?,
                "alpha0" => self.env.alpha0 = parse_value(key, value)?,
                "A" => self.env.n_actions = parse_value(key, value)?,
                "beta" => self.beta = parse_value(key, value)?,
                "rate" => self.rate = parse_value(key, value)?,
                _ => return Err(Error::Config(format!("unknown override key `{key}`"))),
            }
        }
        if set_n && !set_h && self.preset == Preset::Bipolar {
            self.env.horizon = 3 * self.env.n / 2;
        }
        if set_n && !set_p && self.preset == Preset::Maxpath {
            self.env.edge_probability = edge_probability_for(self.env.n);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.agents.is_empty() || self.agents[0] == 0 || self.agents.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("agent counts must be positive and strictly increasing".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("at least one strategy is required".into()));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::Config(format!("beta must be non-negative, got {}", self.beta)));
        }
        if !(self.rate.is_finite() && self.rate > 0.0) {
            return Err(Error::Config(format!("rate must be positive, got {}", self.rate)));
        }
        let (spec, _) = self.build_environment(&SeedTree::new(self.seed).replication(0))?;
        for &s in &self.strategies {
            if !s.supports(&spec.prior) {
                return Err(Error::Config(format!(
                    "strategy `{s}` does not apply to preset `{}` ({} beliefs)",
                    self.preset,
                    spec.prior.family()
                )));
            }
        }
        Ok(())
    }

    /// True environment for one replication, drawn from its own stream.
    pub fn build_environment(&self, tree: &SeedTree) -> Result<(EnvironmentSpec, TrueModel)> {
        let rng = &mut tree.rng(Stream::TrueModel, 0);
        let e = &self.env;
        match self.preset {
            Preset::Bipolar => {
                let (mut spec, truth) = make_bipolar_chain(e.n, rng)?;
                if e.horizon == 0 {
                    return Err(Error::InvalidSpec("horizon must be positive".into()));
                }
                spec.horizon = e.horizon;
                Ok((spec, truth))
            }
            Preset::Parallel => make_parallel_chains(e.chains, e.horizon, e.mu0, e.sigma0_sq, e.sigma_sq, rng),
            Preset::Maxpath => {
                let prior = MaxPathPrior {
                    log_mean: e.mu0,
                    log_variance: e.sigma0_sq,
                    noise_variance: e.sigma_sq,
                    horizon: e.horizon,
                };
                make_max_reward_path(e.n, e.edge_probability, prior, rng)
            }
            Preset::DirichletTestbed => make_dirichlet_testbed(e.n, e.n_actions, e.horizon, e.alpha0, rng),
        }
    }

    fn episode_config(&self, strategy: StrategyKind, agents: usize) -> EpisodeConfig {
        EpisodeConfig { strategy, agents, beta: self.beta, rate: self.rate }
    }

    /// Human-readable resolved configuration, one `key=value` per line.
    pub fn describe(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let e = &self.env;
        let mut s = String::new();
        let _ = writeln!(s, "preset={}", self.preset);
        let _ = writeln!(s, "strategies={}", join(self.strategies.iter().map(|k| k.to_string()).collect()));
        let _ = writeln!(s, "agents={}", join(self.agents.iter().map(|k| k.to_string()).collect()));
        let _ = writeln!(s, "replications={}", self.replications);
        let _ = writeln!(s, "seed={}", self.seed);
        let env = match self.preset {
            Preset::Bipolar => format!("N={} H={}", e.n, e.horizon),
            Preset::Parallel => {
                format!("C={} H={} mu0={} sigma0_sq={} sigma_sq={}", e.chains, e.horizon, e.mu0, e.sigma0_sq, e.sigma_sq)
            }
            Preset::Maxpath => format!(
                "N={} p={} H={} mu0={} sigma0_sq={} sigma_sq={}",
                e.n, e.edge_probability, e.horizon, e.mu0, e.sigma0_sq, e.sigma_sq
            ),
            Preset::DirichletTestbed => format!("N={} A={} H={} alpha0={}", e.n, e.n_actions, e.horizon, e.alpha0),
        };
        let _ = writeln!(s, "{env}");
        let _ = writeln!(s, "beta={} rate={}", self.beta, self.rate);
        s
    }

    pub fn hash(&self) -> String {
        config_hash(&self.describe())
    }

    pub fn raw_path(&self) -> PathBuf {
        self.out.join(format!("{}_raw.csv", self.preset))
    }

    pub fn aggregate_path(&self) -> PathBuf {
        self.out.join(format!("{}_aggregate.csv", self.preset))
    }

    pub fn cumulative_path(&self) -> PathBuf {
        self.out.join(format!("{}_cumulative.csv", self.preset))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub preset: Preset,
    pub strategy: StrategyKind,
    pub agents: usize,
    pub replication: usize,
    pub agent_id: usize,
    pub activation_time: f64,
    pub total_reward: f64,
    pub regret: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    pub strategy: StrategyKind,
    pub agents: usize,
    pub mean_regret_per_agent: f64,
    pub std_error: f64,
}

/// Cumulative regret by activation rank, averaged over replications.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulativeSeries {
    pub strategy: StrategyKind,
    pub agents: usize,
    pub values: Vec<f64>,
}

/// Everything a sweep produced, before it is written out.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepData {
    pub rows: Vec<ResultRow>,
    pub aggregate: Vec<AggregateRow>,
    pub cumulative: Vec<CumulativeSeries>,
    /// Planner optimum per replication.
    pub optimal_rewards: Vec<f64>,
}

impl SweepData {
    pub fn aggregate_for(&self, strategy: StrategyKind, agents: usize) -> Option<&AggregateRow> {
        self.aggregate.iter().find(|a| a.strategy == strategy && a.agents == agents)
    }

    pub fn cumulative_for(&self, strategy: StrategyKind, agents: usize) -> Option<&CumulativeSeries> {
        self.cumulative.iter().find(|c| c.strategy == strategy && c.agents == agents)
    }
}

struct ReplicationRun {
    optimal_reward: f64,
    /// Indexed `[strategy][agent count]`.
    episodes: Vec<Vec<(Vec<crate::engine::AgentOutcome>, Vec<f64>)>>,
}

/// Runs every (strategy, K, replication) cell. Replications run in
/// parallel; results are assembled in a fixed order.
pub fn simulate(config: &ExperimentConfig) -> Result<SweepData> {
    config.validate()?;
    let root = SeedTree::new(config.seed);
    let hash = config.hash();
    let runs = (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let tree = root.replication(r as u64);
            let (spec, truth) = config.build_environment(&tree)?;
            let mut optimal_reward = f64::NAN;
            let mut episodes = Vec::with_capacity(config.strategies.len());
            for &strategy in &config.strategies {
                let mut per_k = Vec::with_capacity(config.agents.len());
                for &k in &config.agents {
                    let result = Simulation::new(&spec, &truth, config.episode_config(strategy, k), tree)
                        .with_config_hash(hash.clone())
                        .run()?;
                    optimal_reward = result.optimal_reward;
                    let cumulative = cumulative_regret_by_activation(&result);
                    per_k.push((result.agents, cumulative));
                }
                episodes.push(per_k);
            }
            Ok(ReplicationRun { optimal_reward, episodes })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut aggregate = Vec::new();
    let mut cumulative = Vec::new();
    for (si, &strategy) in config.strategies.iter().enumerate() {
        for (ki, &k) in config.agents.iter().enumerate() {
            let mut means = Vec::with_capacity(runs.len());
            let mut sums = vec![0.0; k];
            for (r, run) in runs.iter().enumerate() {
                let (outcomes, cum) = &run.episodes[si][ki];
                for a in outcomes {
                    rows.push(ResultRow {
                        preset: config.preset,
                        strategy,
                        agents: k,
                        replication: r,
                        agent_id: a.agent,
                        activation_time: a.activation_time,
                        total_reward: a.total_reward,
                        regret: a.regret,
                    });
                }
                means.push(outcomes.iter().map(|a| a.regret).sum::<f64>() / k as f64);
                for (s, c) in sums.iter_mut().zip(cum) {
                    *s += c;
                }
            }
            let est = mean_and_std_error(&means);
            aggregate.push(AggregateRow { strategy, agents: k, mean_regret_per_agent: est.mean, std_error: est.std_error });
            let n = runs.len() as f64;
            cumulative.push(CumulativeSeries { strategy, agents: k, values: sums.into_iter().map(|s| s / n).collect() });
        }
    }
    Ok(SweepData { rows, aggregate, cumulative, optimal_rewards: runs.iter().map(|r| r.optimal_reward).collect() })
}

fn fmt9(x: f64) -> String {
    format!("{x:.9}")
}

fn header_block(config: &ExperimentConfig) -> String {
    let mut s = String::new();
    for line in config.describe().lines() {
        let _ = writeln!(s, "# {line}");
    }
    let _ = writeln!(s, "# config_hash={}", config.hash());
    if config.preset == Preset::Bipolar {
        let n = config.env.n;
        let _ = writeln!(
            s,
            "# regret is measured against the planner optimum, {} or {}; the closed-form values N/2 and N/2+1 ({} or {}) leave out the final endpoint edge",
            n / 2 + 1,
            n / 2 + 2,
            n / 2,
            n / 2 + 1
        );
    }
    s
}

fn write_csv<F>(config: &ExperimentConfig, path: &Path, header: &[&str], fill: F) -> Result<()>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<()>,
{
    let mut buf = header_block(config).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        fill(&mut w)?;
        w.flush()?;
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::File::create(path)?.write_all(&buf)?;
    Ok(())
}

pub fn write_raw(config: &ExperimentConfig, data: &SweepData, path: &Path) -> Result<()> {
    let header =
        ["preset", "strategy", "K", "replication", "agent_id", "activation_time", "total_reward", "regret"];
    write_csv(config, path, &header, |w| {
        for r in &data.rows {
            w.write_record([
                r.preset.name().to_string(),
                r.strategy.name().to_string(),
                r.agents.to_string(),
                r.replication.to_string(),
                r.agent_id.to_string(),
                fmt9(r.activation_time),
                fmt9(r.total_reward),
                fmt9(r.regret),
            ])?;
        }
        Ok(())
    })
}

pub fn write_aggregate(config: &ExperimentConfig, data: &SweepData, path: &Path) -> Result<()> {
    write_csv(config, path, &["strategy", "K", "mean_regret_per_agent", "std_error"], |w| {
        for a in &data.aggregate {
            w.write_record([
                a.strategy.name().to_string(),
                a.agents.to_string(),
                fmt9(a.mean_regret_per_agent),
                fmt9(a.std_error),
            ])?;
        }
        Ok(())
    })
}

pub fn write_cumulative(config: &ExperimentConfig, data: &SweepData, path: &Path) -> Result<()> {
    write_csv(config, path, &["strategy", "K", "rank", "cumulative_regret"], |w| {
        for c in &data.cumulative {
            for (i, v) in c.values.iter().enumerate() {
                w.write_record([c.strategy.name().to_string(), c.agents.to_string(), (i + 1).to_string(), fmt9(*v)])?;
            }
        }
        Ok(())
    })
}

/// Simulates and writes the raw and aggregate CSVs into `config.out`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepData> {
    let data = simulate(config)?;
    write_raw(config, &data, &config.raw_path())?;
    write_aggregate(config, &data, &config.aggregate_path())?;
    Ok(data)
}

/// Simulates and writes the cumulative-regret CSV into `config.out`.
pub fn emit_cumulative(config: &ExperimentConfig) -> Result<SweepData> {
    let data = simulate(config)?;
    write_cumulative(config, &data, &config.cumulative_path())?;
    Ok(data)
}

#[derive(Debug, Parser)]
#[command(name = "seedrl", about = "Concurrent exploration benchmarks")]
struct Cli {
    /// bipolar, parallel, maxpath or dirichlet-testbed
    #[arg(long)]
    preset: String,
    /// Strategy name; repeat for several. Defaults depend on the preset.
    #[arg(long = "strategy")]
    strategies: Vec<String>,
    /// Number of concurrent agents; repeat for a sweep.
    #[arg(long = "agents")]
    agents: Vec<usize>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// key=value, e.g. N=20 or sigma_sq=0.5
    #[arg(long = "override")]
    overrides: Vec<String>,
    /// Also write the cumulative-regret CSV.
    #[arg(long)]
    cumulative: bool,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let mut config = preset_config(&cli.preset)?;
    if !cli.strategies.is_empty() {
        config.strategies = cli.strategies.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    }
    if !cli.agents.is_empty() {
        config.agents = cli.agents.clone();
    }
    if let Some(r) = cli.replications {
        config.replications = r;
    }
    config.seed = cli.seed;
    config.out = cli.out.clone();
    config.apply_overrides(&cli.overrides)?;
    config.validate()?;
    Ok(config)
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_) | Error::UnknownPreset(_) | Error::UnknownStrategy(_) | Error::InvalidSpec(_) | Error::InvalidPrior(_)
    )
}

/// Entry point for the `seedrl` binary. Returns the process exit code:
/// 0 on success, 2 on usage or configuration errors, 1 on runtime errors.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let config = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return if is_config_error(&e) { 2 } else { 1 };
        }
    };
    print!("{}", config.describe());
    let run = || -> Result<()> {
        let data = simulate(&config)?;
        write_raw(&config, &data, &config.raw_path())?;
        write_aggregate(&config, &data, &config.aggregate_path())?;
        if cli.cumulative {
            write_cumulative(&config, &data, &config.cumulative_path())?;
        }
        for a in &data.aggregate {
            println!("{:<28} K={:<6} mean regret {:.4} ± {:.4}", a.strategy, a.agents, a.mean_regret_per_agent, a.std_error);
        }
        Ok(())
    };
    match run() {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if is_config_error(&e) {
                2
            } else {
                1
            }
        }
    }
}
