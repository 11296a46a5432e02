use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kdda::harness::report::{
    boundary_csv, curve_csv, repeats_csv, report_csv, table1, timing_csv, write_output,
};
use kdda::harness::{
    emit_boundary_grid, run_experiment_on, sweep_m, sweep_sigma, CurvePoint, ExperimentConfig,
    Report,
};

#[derive(Parser)]
#[command(version, about = "KDDA + SVM recognition experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (k_train, method) cell and write report CSVs.
    Run(Common),
    /// Error rate against the SVM's RBF σ² (`sweep.sigma2`).
    SweepSigma(Common),
    /// Error rate against the KDDA feature count (`sweep.m`, default 1..C-1).
    SweepM(Common),
    /// Predicted classes on a grid over a 2-D feature space.
    Boundary(Common),
    /// Run the k_train list and print a recognition-rate table.
    Table1(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (key = value lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Overrides the configured base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured repeat count.
    #[arg(long)]
    repeats: Option<usize>,
}

impl Common {
    fn load(&self) -> kdda::Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_file(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(repeats) = self.repeats {
            cfg.repeats = repeats;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Repeats that failed, which decides the exit status.
type Failures = usize;

fn write_report(out: &Path, report: &Report) -> kdda::Result<()> {
    write_output(out, "report.csv", &report_csv(report))?;
    write_output(out, "repeats.csv", &repeats_csv(report))?;
    write_output(out, "timing.csv", &timing_csv(report))
}

fn curve_failures(points: &[CurvePoint]) -> Failures {
    points.iter().map(|p| p.repeats - p.completed).sum()
}

fn execute(command: &Command) -> kdda::Result<Failures> {
    let (Command::Run(args)
    | Command::SweepSigma(args)
    | Command::SweepM(args)
    | Command::Boundary(args)
    | Command::Table1(args)) = command;
    let cfg = args.load()?;
    let ds = cfg.load_dataset()?;
    eprintln!(
        "dataset: {} samples, {} classes, dimension {}",
        ds.len(),
        ds.num_classes(),
        ds.dim()
    );
    match command {
        Command::Run(_) => {
            let report = run_experiment_on(&ds, &cfg)?;
            write_report(&args.out, &report)?;
            for cell in &report.cells {
                println!(
                    "k={} {}: mean {} over {}/{} repeats",
                    cell.k_train,
                    cell.method,
                    cell.mean_rate()
                        .map_or("NA".into(), |m| format!("{:.4}", m)),
                    cell.completed(),
                    cell.outcomes.len()
                );
            }
            Ok(report.failed_repeats())
        }
        Command::Table1(_) => {
            let report = run_experiment_on(&ds, &cfg)?;
            write_report(&args.out, &report)?;
            let table = table1(&report);
            write_output(&args.out, "table1.txt", &table)?;
            print!("{table}");
            Ok(report.failed_repeats())
        }
        Command::SweepSigma(_) => {
            if cfg.sweep_sigma2.is_empty() {
                return Err(kdda::Error::InvalidConfig(
                    "`sweep.sigma2` lists no values".into(),
                ));
            }
            let curve = sweep_sigma(&ds, &cfg, &cfg.sweep_sigma2)?;
            let csv = curve_csv("sigma2", &curve);
            write_output(&args.out, "sweep_sigma.csv", &csv)?;
            print!("{csv}");
            Ok(curve_failures(&curve))
        }
        Command::SweepM(_) => {
            let ms = if cfg.sweep_m.is_empty() {
                (1..ds.num_classes()).collect()
            } else {
                cfg.sweep_m.clone()
            };
            let curve = sweep_m(&ds, &cfg, &ms)?;
            let csv = curve_csv("m", &curve);
            write_output(&args.out, "sweep_m.csv", &csv)?;
            print!("{csv}");
            Ok(curve_failures(&curve))
        }
        Command::Boundary(_) => {
            let out = emit_boundary_grid(&ds, &cfg)?;
            write_output(&args.out, "boundary.csv", &boundary_csv(&out.grid))?;
            write_output(&args.out, "boundary_train.csv", &boundary_csv(&out.train))?;
            println!(
                "{} grid points over x [{}, {}], y [{}, {}]",
                out.grid.len(),
                out.bounds[0],
                out.bounds[1],
                out.bounds[2],
                out.bounds[3]
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("{failed} repeat(s) failed; see repeats.csv or the curve's completed column");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
