//! `cacheroute`: run scenarios and presets, sweep parameters, and run the
//! self-checks.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 bad configuration
//! or output path, 3 the run itself failed (for example an unstable queue).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cacheroute::config::{PathKind, ScenarioFile};
use cacheroute::experiments::{
    find_preset, parse_range, presets, run_csv, sweep, tune_two_lru, PresetOptions, SweepDimension,
};
use cacheroute::sim::{run, PolicyKind};
use cacheroute::{validate, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cacheroute", version, about = "Joint caching and routing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario file or a preset and write one CSV per policy.
    Run(RunArgs),
    /// Sweep cache size, alpha or id-cache size and write one CSV.
    Sweep(SweepArgs),
    /// Run the numerical self-checks and print a pass/fail table.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// List or show the built-in presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset's scenario file and policies.
    Show { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Constant,
    Mm1,
}

#[derive(Args)]
struct Source {
    /// Scenario file (TOML).
    #[arg(conflicts_with = "preset", required_unless_present = "preset")]
    scenario: Option<PathBuf>,
    /// Built-in preset instead of a scenario file.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    arrivals: Option<u64>,
    #[arg(long)]
    cache_size: Option<usize>,
    #[arg(long, value_enum)]
    path: Option<PathArg>,
    /// Dotted `key=value` assignment, e.g. `policy.alpha=0.3`. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory.
    #[arg(long, env = "CACHEROUTE_OUT_DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    /// cache_size, alpha or id_cache_size.
    #[arg(long)]
    dimension: String,
    /// `start:end:step` or a comma-separated list.
    #[arg(long)]
    range: String,
    #[arg(long, default_value_t = 10)]
    replications: usize,
    /// Comma-separated policies for a cache-size sweep; defaults to the
    /// preset's policies or the scenario's policy.
    #[arg(long, value_delimiter = ',')]
    policies: Vec<String>,
}

enum Failure {
    Config(String),
    Runtime(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config() || matches!(e, Error::Io(_)) {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run(args) => cmd_run(&args.source),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Validate { seed } => {
            let checks = validate::run_all(seed)?;
            print!("{}", validate::format_report(&checks));
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Presets { action: PresetAction::List } => {
            for p in presets() {
                println!("{:<20} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Presets { action: PresetAction::Show { name } } => {
            let p = find_preset(&name)?;
            let names: Vec<_> = p.policies.iter().map(|k| k.name()).collect();
            println!("# policies: {}", names.join(", "));
            print!("{}", p.base.to_toml());
            Ok(())
        }
    }
}

fn options(src: &Source) -> PresetOptions {
    PresetOptions {
        seed: src.seed,
        arrivals: src.arrivals,
        cache_size: src.cache_size,
        path: src.path.map(|p| match p {
            PathArg::Constant => PathKind::Constant,
            PathArg::Mm1 => PathKind::Mm1,
        }),
        overrides: src.overrides.clone(),
    }
}

/// The scenario file after command-line adjustments, and the policies to
/// run on it.
fn resolve(src: &Source) -> Result<(ScenarioFile, Vec<PolicyKind>), Failure> {
    let opts = options(src);
    match (&src.preset, &src.scenario) {
        (Some(name), _) => {
            let preset = find_preset(name)?;
            Ok((preset.file(&opts)?, preset.policies))
        }
        (None, Some(path)) => {
            let base = ScenarioFile::load(path)?;
            let preset = cacheroute::experiments::Preset { name: "", description: "", base, policies: Vec::new() };
            let file = preset.file(&opts)?;
            let kind: PolicyKind = file.policy.kind.parse()?;
            Ok((file, vec![kind]))
        }
        (None, None) => Err(Failure::Config("give a scenario file or --preset".into())),
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn cmd_run(src: &Source) -> Result<(), Failure> {
    let (file, policies) = resolve(src)?;
    for kind in policies {
        let mut f = file.clone();
        f.policy.kind = kind.name().into();
        let mut scenario = f.to_scenario()?;
        tune_two_lru(&mut scenario)?;
        let report = run(&scenario)?;
        let path = write(&src.out, &format!("{}-{}.csv", file.name, kind), &run_csv(&report))?;
        println!("{:<20} mean_delay={:.6} -> {}", kind.name(), report.mean_delay(), path.display());
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let (file, mut policies) = resolve(&args.source)?;
    if !args.policies.is_empty() {
        policies = args.policies.iter().map(|p| p.parse()).collect::<Result<_, _>>()?;
    }
    let dimension: SweepDimension = args.dimension.parse()?;
    let values = parse_range(&args.range)?;
    let table = sweep(dimension, &file, &policies, &values, args.replications)?;
    let path = write(&args.source.out, &format!("{}-sweep-{}.csv", file.name, args.dimension), &table.to_csv())?;
    println!("{} rows -> {}", table.rows.len(), path.display());
    Ok(())
}
