use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use btq::config::{read_config, Overrides};
use btq::registry::{ids, lookup, run_many, REGISTRY};
use btq::{ExperimentResult, Verdict};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "btq", version, about = "Seeded Berezin-Toeplitz experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Run {
        id: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run every registered experiment.
    RunAll {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Print the registry.
    List,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Flat key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    h0: Option<f64>,
    #[arg(long)]
    ratio: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    strict: bool,
    /// Output file (`run`) or directory (`run-all`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

impl RunOpts {
    fn overrides(&self) -> anyhow::Result<Overrides> {
        let file = match &self.config {
            Some(path) => read_config(path)?,
            None => Overrides::default(),
        };
        let flags = Overrides {
            n: self.n,
            h0: self.h0,
            ratio: self.ratio,
            count: self.count,
            samples: self.samples,
            seed: self.seed,
            cutoff: self.cutoff,
            strict: self.strict.then_some(true),
            out: self.out.clone(),
            jobs: self.jobs,
        };
        Ok(file.merge(flags))
    }
}

fn emit(result: &ExperimentResult, out: Option<PathBuf>) -> anyhow::Result<()> {
    eprintln!("{}: {:?} in {:.2} s", result.id, result.verdict, result.wall_clock.as_secs_f64());
    match out {
        Some(path) => result.write(&path).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{}", result.to_json());
            Ok(())
        }
    }
}

fn execute(ids: &[&str], opts: &RunOpts, out_is_dir: bool) -> anyhow::Result<Verdict> {
    let o = opts.overrides()?;
    let configs = ids.iter().map(|id| o.apply(id)).collect::<anyhow::Result<Vec<_>>>()?;
    let jobs = o.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let (true, Some(dir)) = (out_is_dir, &o.out) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut verdicts = Vec::new();
    for (cfg, result) in configs.iter().zip(run_many(&configs, jobs)?) {
        let result = result.with_context(|| format!("experiment {}", cfg.id))?;
        let out = match (&o.out, out_is_dir) {
            (Some(dir), true) => Some(dir.join(format!("{}.json", cfg.id))),
            (path, _) => path.clone(),
        };
        emit(&result, out)?;
        verdicts.push(result.verdict);
    }
    Ok(Verdict::combine(verdicts))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::List => {
            for e in REGISTRY {
                println!("{:<16} {}", e.id, e.summary);
            }
            return ExitCode::SUCCESS;
        }
        Command::Run { id, opts } => match lookup(id) {
            Some(e) => execute(&[e.id], opts, false),
            None => Err(anyhow::anyhow!("unknown experiment id {id:?}; known ids: {}", ids().join(", "))),
        },
        Command::RunAll { opts } => execute(&ids(), opts, true),
    };
    match outcome {
        Ok(v) => ExitCode::from(v.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
