use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use maxdiss::scenario::{
    certify_members, load_tree_config, mv_stage, report, run_scenario, select_members, simulate, write_manifest,
    Manifest, ScenarioConfig,
};
use maxdiss::{Error, Result};

/// Galerkin flows on the torus, relative-energy certificates and maximal dissipative selection.
#[derive(Parser)]
#[command(version)]
struct Cli {
    /// Scenario config (JSON). Stages after `simulate` fall back to the tree's stored copy.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Artifact tree; overrides the config's `output`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "MAXDISS_THREADS")]
    threads: Option<usize>,
    /// Overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the candidate family.
    Simulate,
    /// Certify stored members against the test family.
    Certify,
    /// Select the least-energy mixture of stored members.
    Select,
    /// Build defects and select among measure-valued pairs (mv_ladder).
    Mv,
    /// Write CSV/JSON summaries of a finished tree.
    Report,
    /// All stages, then the manifest.
    Run,
}

fn config(cli: &Cli) -> Result<ScenarioConfig> {
    let mut cfg = match (&cli.config, &cli.out) {
        (Some(path), _) => ScenarioConfig::load(path)?,
        (None, Some(out)) => load_tree_config(out)?,
        (None, None) => {
            return Err(Error::Config { pointer: "/".into(), message: "need --config or --out".into() });
        }
    };
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn certified(cfg: &ScenarioConfig) -> Option<bool> {
    Manifest::load(&cfg.output).ok().and_then(|m| m.certified)
}

fn execute(cli: &Cli) -> Result<i32> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config { pointer: "/threads".into(), message: e.to_string() })?;
    }
    if let Command::Report = cli.command {
        let tree = cli.out.clone().map(Ok).unwrap_or_else(|| config(cli).map(|c| c.output))?;
        for path in report(&tree)? {
            println!("{}", path.display());
        }
        return Ok(0);
    }
    let cfg = config(cli)?;
    match cli.command {
        Command::Simulate => {
            for id in simulate(&cfg).map_err(|e| e.in_stage("simulate"))? {
                println!("member {id}");
            }
            write_manifest(&cfg, None)?;
            Ok(0)
        }
        Command::Certify => {
            let reps = certify_members(&cfg).map_err(|e| e.in_stage("certify"))?;
            let ok = reps.iter().all(|r| r.verdict);
            for r in &reps {
                println!("min margin {:.3e} verdict {}", r.min_margin(), r.verdict);
            }
            write_manifest(&cfg, Some(ok))?;
            Ok(if ok { 0 } else { 2 })
        }
        Command::Select => {
            let s = select_members(&cfg).map_err(|e| e.in_stage("select"))?;
            println!("{}", serde_json::to_string_pretty(&s)?);
            write_manifest(&cfg, certified(&cfg))?;
            Ok(0)
        }
        Command::Mv => {
            match mv_stage(&cfg).map_err(|e| e.in_stage("mv"))? {
                Some(s) => println!("{}", serde_json::to_string_pretty(&s)?),
                None => println!("no measure-valued stage for this scenario"),
            }
            write_manifest(&cfg, certified(&cfg))?;
            Ok(0)
        }
        Command::Run => {
            let s = run_scenario(&cfg)?;
            println!("certified {} members {:?}", s.certified, s.members);
            println!("lambda {:?} objective {:.6e}", s.selection.lambda.as_slice(), s.selection.objective);
            Ok(s.exit_code())
        }
        Command::Report => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
