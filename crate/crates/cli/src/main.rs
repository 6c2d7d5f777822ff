mod render;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use teamsynth::agents::{validate, Scenario};
use teamsynth::executor::{behavior_log, check_local_satisfaction, format_log, simulate, SimulationConfig, DEFAULT_CAP};
use teamsynth::global::Strategy;
use teamsynth::io::{load_scenario, strategy_from_file, strategy_to_file, StrategyFile};
use teamsynth::pipeline::{run_pipeline, PipelineOptions, Synthesis};

#[derive(Parser)]
#[command(name = "teamsynth", version, about = "Strategy synthesis for teams of agents with motion and task specifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a scenario.
    Check { scenario: PathBuf },
    /// Synthesize one strategy per agent and write them as JSON files.
    Synthesize {
        scenario: PathBuf,
        /// Directory receiving `strategy_<id>.json`.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        opts: SynthOpts,
        /// Also write Graphviz files of every intermediate automaton.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Execute strategies with random durations and check every formula.
    Simulate {
        scenario: PathBuf,
        /// Strategy files; each holds one strategy or an array of them.
        #[arg(required = true)]
        strategies: Vec<PathBuf>,
        /// First seed; defaults to the scenario's simulation seed or 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of runs, with consecutive seeds.
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Write the behavior log of every run to this file.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Draw the grid and the agent trajectories.
    Render {
        scenario: PathBuf,
        #[arg(required = true)]
        strategies: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the synthesis and print the state counts of every stage.
    Stats {
        scenario: PathBuf,
        #[command(flatten)]
        opts: SynthOpts,
        /// Print the statistics as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct SynthOpts {
    /// One global product per dependency class.
    #[arg(long)]
    per_class: bool,
    /// State budget for materializing the centralized product; 0 keeps only
    /// the arithmetic estimate.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
}

impl SynthOpts {
    fn pipeline(&self) -> PipelineOptions {
        PipelineOptions { per_class: self.per_class, centralized_cap: Some(self.cap) }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Empty(String),
    #[error("{0}")]
    Verdict(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Empty(_) => 2,
            Failure::Verdict(_) => 3,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Scenario, Option<SimulationConfig>), Failure> {
    load_scenario(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_valid(path: &Path) -> Result<(Scenario, Option<SimulationConfig>), Failure> {
    let (sc, cfg) = load(path)?;
    let diags = validate(&sc);
    if !diags.is_empty() {
        let lines: Vec<String> = diags.iter().map(|d| format!("{}: {d}", path.display())).collect();
        return Err(Failure::Invalid(lines.join("\n")));
    }
    Ok((sc, cfg))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(StrategyFile),
    Many(Vec<StrategyFile>),
}

/// Loads strategy files and orders them by agent; every agent needs
/// exactly one.
fn load_strategies(paths: &[PathBuf], sc: &Scenario) -> Result<Vec<Strategy>, Failure> {
    let mut out: Vec<Option<Strategy>> = vec![None; sc.len()];
    for p in paths {
        let bad = |e: String| Failure::Invalid(format!("{}: {e}", p.display()));
        let files = match serde_json::from_str(&read(p)?).map_err(|e| bad(e.to_string()))? {
            OneOrMany::One(f) => vec![f],
            OneOrMany::Many(fs) => fs,
        };
        for f in &files {
            let s = strategy_from_file(f, sc).map_err(|e| bad(e.to_string()))?;
            let slot = &mut out[s.agent];
            if slot.is_some() {
                return Err(bad(format!("second strategy for agent {}", f.agent)));
            }
            *slot = Some(s);
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| Failure::Invalid(format!("no strategy for agent {}", sc.agents[i].name))))
        .collect()
}

fn pipeline(sc: &Scenario, opts: &PipelineOptions) -> Result<Synthesis, Failure> {
    run_pipeline(sc, opts).map_err(|e| {
        if e.is_emptiness() {
            Failure::Empty(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    })
}

fn check(path: &Path) -> Result<(), Failure> {
    let (sc, _) = load_valid(path)?;
    println!("{}: ok ({} agents, {} services)", path.display(), sc.len(), sc.services.len());
    Ok(())
}

fn synthesize(path: &Path, out: &Path, opts: &SynthOpts, dot_dir: Option<&Path>) -> Result<(), Failure> {
    let (sc, _) = load_valid(path)?;
    let syn = pipeline(&sc, &opts.pipeline())?;
    fs::create_dir_all(out).map_err(|e| Failure::Invalid(format!("{}: {e}", out.display())))?;
    for s in &syn.strategies {
        let file = strategy_to_file(s, &sc);
        let target = out.join(format!("strategy_{}.json", file.agent));
        write(&target, &serde_json::to_string_pretty(&file).expect("strategy records serialize"))?;
        println!("wrote {}", target.display());
    }
    if let Some(dir) = dot_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Invalid(format!("{}: {e}", dir.display())))?;
        for (name, text) in report::dot_files(&syn, &sc) {
            write(&dir.join(name), &text)?;
        }
    }
    print!("{}", report::stats_block(&syn.stats));
    Ok(())
}

fn stats(path: &Path, opts: &SynthOpts, json: bool) -> Result<(), Failure> {
    let (sc, _) = load_valid(path)?;
    let syn = pipeline(&sc, &opts.pipeline())?;
    if json {
        println!("{}", serde_json::to_string_pretty(&syn.stats).expect("stats serialize"));
    } else {
        print!("{}", report::stats_block(&syn.stats));
    }
    Ok(())
}

fn run_simulations(
    path: &Path,
    files: &[PathBuf],
    seed: Option<u64>,
    runs: u64,
    log: Option<&Path>,
) -> Result<(), Failure> {
    let (sc, cfg) = load_valid(path)?;
    let strategies = load_strategies(files, &sc)?;
    let base = cfg.unwrap_or_default();
    let first = seed.unwrap_or(base.seed);
    let mut logs = String::new();
    let mut failed = Vec::new();
    println!("{}", report::VERDICT_HEADER);
    for seed in first..first + runs {
        let cfg = SimulationConfig { seed, ..base.clone() };
        let sim = simulate(&strategies, &sc, &cfg).map_err(|e| match e {
            teamsynth::executor::SimError::Config(m) => Failure::Invalid(format!("simulation settings: {m}")),
            e => Failure::Verdict(format!("seed {seed}: {e}")),
        })?;
        let verdicts = check_local_satisfaction(&sim, &strategies, &sc).map_err(|e| Failure::Invalid(e.to_string()))?;
        for v in &verdicts {
            println!("{}", report::verdict_row(seed, v, &sc));
            if !v.holds() {
                failed.push(format!("seed {seed}, agent {}", sc.agents[v.agent].name));
            }
        }
        logs.push_str(&format!("# seed {seed}\n"));
        logs.push_str(&format_log(&behavior_log(&sim, &sc), &sc));
    }
    if let Some(p) = log {
        write(p, &logs)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verdict(format!("specification violated: {}", failed.join("; "))))
    }
}

fn draw(path: &Path, files: &[PathBuf], format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let (sc, _) = load_valid(path)?;
    let strategies = load_strategies(files, &sc)?;
    let scene = render::Scene::new(&sc, &strategies).map_err(|e| Failure::Invalid(e.to_string()))?;
    let text = match format {
        Format::Ascii => scene.ascii(),
        Format::Svg => scene.svg(),
    };
    match out {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { scenario } => check(scenario),
        Command::Synthesize { scenario, out, opts, dot_dir } => synthesize(scenario, out, opts, dot_dir.as_deref()),
        Command::Simulate { scenario, strategies, seed, runs, log } => {
            run_simulations(scenario, strategies, *seed, *runs, log.as_deref())
        }
        Command::Render { scenario, strategies, format, out } => draw(scenario, strategies, *format, out.as_deref()),
        Command::Stats { scenario, opts, json } => stats(scenario, opts, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
