use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lyadim::config::RunConfig;
use lyadim::exact::exact_for;
use lyadim::report::{default_projection, run_les, run_sweep, svg_scatter};
use lyadim::systems::{Constraint, SystemId, SystemSpec};
use lyadim::verify::{Status, Suite};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "lyadim", version, about = "Finite-time Lyapunov exponents and Lyapunov dimensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the catalog systems and their parameters.
    Systems {
        #[arg(long)]
        json: bool,
    },
    /// Finite-time exponents and Kaplan-Yorke dimension along one orbit (CSV).
    Les(RunArgs),
    /// Closed-form dimension report with all condition margins (JSON).
    Exact(RunArgs),
    /// Settle, classify, grid and sweep the dimension over an attractor.
    Sweep(RunArgs),
    /// Run the acceptance suite.
    Verify {
        /// Skip the long Lorenz attractor sweep.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, env = "LYADIM_JOBS")]
        jobs: Option<usize>,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// Flat JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<String>,
    /// Parameter overrides as name=value pairs.
    #[arg(long, num_args = 1.., value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Initial state, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    seed: Option<Vec<f64>>,
    #[arg(long)]
    seg_len: Option<f64>,
    #[arg(long)]
    n_factors: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    #[arg(long)]
    transient: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    t_sample: Option<f64>,
    #[arg(long)]
    sample_every: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    delta_attr: Option<f64>,
    #[arg(long)]
    trial_transient: Option<f64>,
    #[arg(long)]
    trial_window: Option<f64>,
    #[arg(long)]
    divergence_bound: Option<f64>,
    #[arg(long)]
    eps_eq: Option<f64>,
    /// Coordinate pair for the SVG scatter, e.g. 0,2.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    projection: Option<Vec<usize>>,
    #[arg(long, env = "LYADIM_JOBS")]
    jobs: Option<usize>,
    /// Write a scatter of the attractor sample.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

impl RunArgs {
    fn resolve(&self) -> anyhow::Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(name) = &self.system {
            let id = SystemId::from_name(name).ok_or_else(|| {
                lyadim::Error::InvalidArgument(format!("unknown system `{name}` (see `lyadim systems`)"))
            })?;
            if id != c.system {
                c.params.clear();
            }
            c.system = id;
        }
        c.params.extend(self.params.iter().cloned());
        macro_rules! overlay {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = v; } )* };
        }
        macro_rules! overlay_opt {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { c.$f = Some(v); } )* };
        }
        overlay!(n_factors, sweeps, rel_tol, abs_tol, initial_step, grid, t_sample, sample_every, epsilon);
        overlay!(trials, delta_attr, trial_transient, trial_window, divergence_bound, eps_eq);
        overlay_opt!(seed, seg_len, max_step, transient, jobs, svg);
        if let Some(p) = &self.projection {
            c.projection = Some([p[0], p[1]]);
        }
        c.validate()?;
        Ok(c)
    }
}

fn init_pool(jobs: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = jobs {
        if n == 0 {
            return Err(lyadim::Error::InvalidArgument("jobs must be >= 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("building the worker pool")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ParamRow {
    name: &'static str,
    constraint: Constraint,
    default: f64,
}

#[derive(Serialize)]
struct SystemRow {
    name: &'static str,
    kind: &'static str,
    dim: usize,
    equations: &'static str,
    params: Vec<ParamRow>,
}

fn cmd_systems(json: bool) -> anyhow::Result<()> {
    let rows: Vec<SystemRow> = SystemId::ALL
        .into_iter()
        .map(|id| SystemRow {
            name: id.name(),
            kind: id.kind().name(),
            dim: id.dim(),
            equations: id.equations(),
            params: id
                .params()
                .iter()
                .map(|p| ParamRow {
                    name: p.name,
                    constraint: p.constraint,
                    default: p.default,
                })
                .collect(),
        })
        .collect();
    if json {
        println!("{}", serde_json::to_string_pretty(&rows)?);
        return Ok(());
    }
    for r in rows {
        let params: Vec<String> = r.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
        println!("{:<28} {:<4} n={} {}", r.name, r.kind, r.dim, params.join(" "));
        println!("    {}", r.equations);
    }
    Ok(())
}

fn cmd_les(args: &RunArgs) -> anyhow::Result<()> {
    let cfg = args.resolve()?;
    init_pool(cfg.jobs)?;
    let report = run_les(&cfg)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.csv());
    }
    Ok(())
}

fn cmd_exact(args: &RunArgs) -> anyhow::Result<()> {
    let cfg = args.resolve()?;
    let spec: SystemSpec = cfg.spec()?;
    let report = exact_for(&spec)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn cmd_sweep(args: &RunArgs) -> anyhow::Result<()> {
    let cfg = args.resolve()?;
    init_pool(cfg.jobs)?;
    let (outcome, sample) = run_sweep(&cfg)?;
    if let Some(path) = &cfg.svg {
        let axes = cfg.projection.unwrap_or_else(|| default_projection(outcome.system.dim()));
        let title = format!(
            "{} sample, max d = {:.4}",
            outcome.system.id(),
            outcome.max_dimension()
        );
        std::fs::write(path, svg_scatter(&sample.points, axes, &title))
            .map_err(|e| lyadim::Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&outcome)?);
    } else {
        print!("{}", outcome.csv());
        eprintln!(
            "classification: {}; max d = {} at grid point {}",
            serde_json::to_string(&outcome.classification)?,
            outcome.max_dimension(),
            outcome.best.index
        );
    }
    Ok(())
}

fn cmd_verify(fast: bool, json: bool, jobs: Option<usize>) -> anyhow::Result<ExitCode> {
    init_pool(jobs)?;
    let suite = Suite::new(fast);
    let mut results = Vec::new();
    for id in Suite::ids() {
        let r = suite.run(id);
        if !json {
            println!("{}", r.line());
        }
        results.push(r);
    }
    let failed = results.iter().filter(|r| r.status == Status::Fail).count();
    if json {
        println!("{}", serde_json::to_string_pretty(&results)?);
    } else {
        println!("{} passed, {failed} failed, {} skipped",
            results.iter().filter(|r| r.passed()).count(),
            results.iter().filter(|r| r.status == Status::Skipped).count());
    }
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Systems { json } => cmd_systems(*json)?,
        Command::Les(a) => cmd_les(a)?,
        Command::Exact(a) => cmd_exact(a)?,
        Command::Sweep(a) => cmd_sweep(a)?,
        Command::Verify { fast, json, jobs } => return cmd_verify(*fast, *json, *jobs),
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<lyadim::Error>() {
        Some(e) if !e.is_input_error() => EXIT_NUMERIC,
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
