use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use yamabe_lab::cli::pipeline::{Stage, EXIT_CONFIG};
use yamabe_lab::cli::{builtins, resolve, run, write_outputs, RunOutcome, ScenarioConfig, Stages};

/// Equivariant Yamabe bound laboratory.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Largest level t to scan.
    #[arg(long, global = true)]
    t_max: Option<f64>,
    /// Tolerance for W bound checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cells per axis for the grid cross-check (0 disables).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Directory for report.json and the scan CSVs.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Omit wall-clock data so reports are byte-reproducible.
    #[arg(long, global = true)]
    no_timestamps: bool,
    /// Seed for sampled orbit searches.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every stage of a scenario (file path or builtin name).
    Run { config: String },
    /// List builtin scenarios.
    List,
    /// Run only the topology checks.
    CheckTopology { config: String },
    /// Run the blow-up and level-set scans and write the CSV tables.
    Scan { config: String },
}

impl Cli {
    fn apply(&self, config: &mut ScenarioConfig) -> Result<()> {
        if let Some(t) = self.t_max {
            config.solver.t_max = t;
        }
        if let Some(t) = self.tol {
            config.solver.tol = t;
        }
        if let Some(g) = self.grid {
            config.solver.grid_cells = g;
        }
        if let Some(s) = self.seed {
            config.solver.seed = s;
        }
        if self.no_timestamps {
            config.output.timestamps = false;
        }
        if let Some(dir) = &self.out_dir {
            config.output.dir = Some(dir.clone());
        }
        config.validate()?;
        Ok(())
    }
}

fn print_summary(outcome: &RunOutcome) {
    let report = &outcome.report;
    println!("scenario {}", report.name);
    for (stage, status) in [
        ("topology", stage_status(&report.topology)),
        ("geometry", stage_status(&report.geometry)),
        ("levelset", stage_status(&report.levelset)),
        ("quotient", stage_status(&report.quotient)),
        ("grid", stage_status(&report.grid)),
    ] {
        println!("  {stage:<9} {status}");
    }
    for v in &report.verdicts {
        println!(
            "  [{}] {}: {}",
            if v.pass { "pass" } else { "FAIL" },
            v.name,
            v.detail
        );
    }
    println!("exit code {}", report.exit_code);
}

fn stage_status<T>(stage: &Stage<T>) -> String {
    match stage {
        Stage::Ran(_) => "ran".into(),
        Stage::Skipped { reason } => format!("skipped ({reason})"),
        Stage::Failed { error } => format!("failed: {error}"),
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let (arg, stages) = match &cli.command {
        Command::List => {
            for entry in builtins::CATALOG {
                println!("{:<16} {}", entry.name, entry.description);
            }
            return Ok(0);
        }
        Command::Run { config } => (config, Stages::All),
        Command::CheckTopology { config } => (config, Stages::TopologyOnly),
        Command::Scan { config } => (config, Stages::ScanOnly),
    };
    let mut config = resolve(arg)?;
    cli.apply(&mut config)?;
    let outcome = run(&config, stages)?;
    print_summary(&outcome);
    if stages != Stages::TopologyOnly {
        let dir = config
            .output
            .dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("out").join(&config.name));
        let written = write_outputs(&outcome, &dir)
            .with_context(|| format!("writing outputs to {}", dir.display()))?;
        for path in written {
            println!("wrote {}", path.display());
        }
    }
    Ok(outcome.report.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
