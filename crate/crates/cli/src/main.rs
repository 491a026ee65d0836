//! `flatcrane`: plan, compare, sweep and validate crane trajectories.
//!
//! Exit codes: 0 success, 1 infeasible plan or failed validation, 2
//! configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flatcrane::campaign::{self, thread_count};
use flatcrane::config::PlanConfig;
use flatcrane::report::fmt_sig9;
use flatcrane::Error;

#[derive(Debug, Parser)]
#[command(name = "flatcrane", version, about = "Anti-swing trajectory planner for double-pendulum tower cranes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize the configured move and write pareto.csv, trajectory.csv and summary.txt.
    Plan(Common),
    /// Repeat seeded runs of each algorithm and write runs.csv and stats.csv.
    Compare(Common),
    /// Evaluate a uniform grid of operating times and write sweep.csv and pareto.csv.
    Sweep(Common),
    /// Check a trajectory CSV against the limits and the dynamics oracle.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Trajectory file written by `plan`.
        trajectory: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured number of comparison runs.
    #[arg(long)]
    runs: Option<usize>,
    /// gde3 or co-gde3.
    #[arg(long)]
    algorithm: Option<String>,
    /// Output directory; overrides the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<PlanConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => PlanConfig::load(path)?,
            None => PlanConfig::reference_trolley(),
        };
        if let Some(seed) = self.seed {
            cfg.moea.seed = seed;
        }
        if let Some(runs) = self.runs {
            cfg.runs = runs;
        }
        if let Some(alg) = &self.algorithm {
            if alg != "gde3" && alg != "co-gde3" {
                return Err(Error::Config(format!("unknown algorithm '{alg}' (known: gde3, co-gde3)")));
            }
            cfg.algorithm = alg.clone();
        }
        if let Some(out) = &self.out {
            cfg.output_dir = Some(out.clone());
        }
        Ok(cfg)
    }
}

fn out_dir(cfg: &PlanConfig) -> PathBuf {
    cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."))
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn cmd_plan(common: &Common) -> Result<bool, Error> {
    let cfg = common.load()?;
    let outcome = campaign::plan(&cfg)?;
    let dir = out_dir(&cfg);
    outcome.selection.table().write(&dir.join("pareto.csv"))?;
    outcome.trajectory.write(&dir.join("trajectory.csv"))?;
    let summary = outcome.summary();
    write_text(&dir.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(true)
}

fn cmd_compare(common: &Common) -> Result<bool, Error> {
    let cfg = common.load()?;
    let problem = campaign::build_problem(&cfg)?;
    let algorithms: Vec<&str> = match &common.algorithm {
        Some(a) => vec![a.as_str()],
        None => vec!["gde3", "co-gde3"],
    };
    let cmp = campaign::compare(problem.as_ref(), &cfg.moea, &cfg.metrics, &algorithms, cfg.runs, thread_count()?)?;
    let dir = out_dir(&cfg);
    cmp.runs_table().write(&dir.join("runs.csv"))?;
    cmp.stats_table().write(&dir.join("stats.csv"))?;
    for row in &cmp.stats {
        println!(
            "{} {} {}: mean {} std {}",
            row.problem,
            row.algorithm,
            row.metric,
            fmt_sig9(row.stats.mean),
            fmt_sig9(row.stats.std)
        );
    }
    Ok(true)
}

fn cmd_sweep(common: &Common) -> Result<bool, Error> {
    let cfg = common.load()?;
    let (sw, sel) = campaign::sweep(&cfg)?;
    let dir = out_dir(&cfg);
    campaign::sweep_table(&sw).write(&dir.join("sweep.csv"))?;
    sel.table().write(&dir.join("pareto.csv"))?;
    let [f1, f2] = sel.selected_point();
    println!("grid points: {}", sw.rows.len());
    println!("front size: {}", sel.front.len());
    if let Some(t) = sw.min_feasible_time() {
        println!("min feasible t_op: {}", fmt_sig9(t));
    }
    println!(
        "selected t_op: {}\nselected f2: {}\nLambda: {}",
        fmt_sig9(f1),
        fmt_sig9(f2),
        fmt_sig9(sel.afmf.lambda_max)
    );
    Ok(true)
}

fn cmd_validate(common: &Common, trajectory: &Path) -> Result<bool, Error> {
    let cfg = common.load()?;
    let text = std::fs::read_to_string(trajectory)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", trajectory.display())))?;
    let report = campaign::validate(&cfg, &text)?;
    let rendered = report.render();
    if common.out.is_some() || cfg.output_dir.is_some() {
        write_text(&out_dir(&cfg).join("validation.txt"), &rendered)?;
    }
    print!("{rendered}");
    Ok(report.passed())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::StatsDomain(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Plan(c) => cmd_plan(c),
        Command::Compare(c) => cmd_compare(c),
        Command::Sweep(c) => cmd_sweep(c),
        Command::Validate { common, trajectory } => cmd_validate(common, trajectory),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
