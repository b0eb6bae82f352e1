use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use scalarep::config::OUT_DIR_ENV;
use scalarep::harness::{compare, format_compare_table, run_experiment, RunRecord};
use scalarep::output::{emit_outputs, load_record};
use scalarep::plot::plot_svg;
use scalarep::{Dynamics, Error, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "scalarep",
    version,
    about = "Adaptive weights for scalarized multi-objective optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment (all repeats) and write its outputs.
    Run(RunArgs),
    /// Run fixed weights against the other dynamics on the same seeds.
    Compare(RunArgs),
    /// Re-render the SVG figures of a finished run.
    Plot {
        /// Directory written by `run`.
        dir: PathBuf,
    },
    /// Print a commented config file with every default.
    InitConfig,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    dynamics: Option<DynamicsArg>,
    /// e.g. lame2_g0.25, lame3_g2, idtlz1_3
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    oracle_solver: bool,
    /// Worker threads, 0 = all cores.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DynamicsArg {
    Fixed,
    GradImage,
    Pairwise,
    PairwiseNoise,
}

impl From<DynamicsArg> for Dynamics {
    fn from(d: DynamicsArg) -> Self {
        match d {
            DynamicsArg::Fixed => Dynamics::Fixed,
            DynamicsArg::GradImage => Dynamics::GradImage,
            DynamicsArg::Pairwise => Dynamics::Pairwise,
            DynamicsArg::PairwiseNoise => Dynamics::PairwiseNoise,
        }
    }
}

enum Failure {
    Usage(Error),
    Runtime(Error),
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let mut cfg = ExperimentConfig::default();
            if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
                cfg.out_dir = dir.into();
            }
            cfg
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(d) = args.dynamics {
        cfg.dynamics = d.into();
    }
    if let Some(p) = &args.problem {
        cfg.problem = p.clone();
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(r) = args.repeats {
        cfg.repeats = r;
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    if args.oracle_solver {
        cfg.oracle_solver = true;
    }
    Ok(cfg)
}

fn write_run(record: &RunRecord, dir: &Path) -> Result<(), Error> {
    emit_outputs(record, dir)?;
    plot_svg(record, dir)?;
    Ok(())
}

fn write_runs(runs: &[RunRecord], dir: &Path) -> Result<(), Error> {
    if let [single] = runs {
        return write_run(single, dir);
    }
    for (r, record) in runs.iter().enumerate() {
        write_run(record, &dir.join(format!("rep-{r:02}")))?;
    }
    Ok(())
}

fn report(record: &RunRecord, dir: &Path) {
    let s = record.summary();
    println!(
        "seed {}: k = {}, energy = {:.6e}, igd = {:.6e}, {:.2}s -> {}",
        record.seed(),
        s.k,
        s.final_energy,
        s.final_igd,
        s.duration_secs,
        dir.display()
    );
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::InitConfig => {
            print!("{}", ExperimentConfig::template());
            Ok(())
        }
        Command::Plot { dir } => {
            let record = load_record(&dir).map_err(Failure::Runtime)?;
            for path in plot_svg(&record, &dir).map_err(Failure::Runtime)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Run(args) => {
            let cfg = build_config(&args).map_err(Failure::Usage)?;
            cfg.validate().map_err(Failure::Usage)?;
            let runs = run_experiment(&cfg).map_err(Failure::Runtime)?;
            write_runs(&runs, &cfg.out_dir).map_err(Failure::Runtime)?;
            for (r, record) in runs.iter().enumerate() {
                let dir = if runs.len() == 1 {
                    cfg.out_dir.clone()
                } else {
                    cfg.out_dir.join(format!("rep-{r:02}"))
                };
                report(record, &dir);
            }
            Ok(())
        }
        Command::Compare(args) => {
            let cfg = build_config(&args).map_err(Failure::Usage)?;
            let set: Vec<Dynamics> = match args.dynamics {
                Some(d) if Dynamics::from(d) != Dynamics::Fixed => vec![Dynamics::Fixed, d.into()],
                _ => Dynamics::ALL.to_vec(),
            };
            // validate against a dynamics every problem supports
            ExperimentConfig {
                dynamics: Dynamics::Fixed,
                ..cfg.clone()
            }
            .validate()
            .map_err(Failure::Usage)?;
            let problem = cfg.problem().map_err(Failure::Usage)?;
            let rows = compare(&cfg, &set).map_err(Failure::Runtime)?;
            for row in &rows {
                write_runs(&row.runs, &cfg.out_dir.join(row.dynamics.as_str()))
                    .map_err(Failure::Runtime)?;
            }
            print!("{}", format_compare_table(&problem.to_string(), &rows));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
