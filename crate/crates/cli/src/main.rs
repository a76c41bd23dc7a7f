use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use forecast_game::{Execution, ExperimentSummary};
use forecast_game_cli::{
    run, seed_check, sweep, verdict, AlphaSelection, CliError, Overrides, ScenarioFile,
};

/// Exit status of `verdict` when the machine cannot learn.
const CANNOT_LEARN: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fgame",
    version,
    about = "Simulate the repeated forecasting game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its summary, traces and calibration series.
    Run(ScenarioArgs),
    /// Run a scenario once per assessed forecast.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Comma-separated grid values, or `grid` for every grid point.
        #[arg(long, default_value = "grid")]
        alphas: String,
    },
    /// Decide learnability from the summaries in a directory and its subdirectories.
    Verdict {
        #[arg(long, value_name = "PATH")]
        dir: PathBuf,
    },
    /// Run a scenario twice and byte-compare the outputs.
    SeedCheck(ScenarioArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    #[arg(long, value_name = "N")]
    rounds: Option<u32>,
    #[arg(long, value_name = "R")]
    replications: Option<u32>,
    #[arg(long, value_name = "PATH")]
    out_dir: Option<PathBuf>,
    /// Skip trace CSVs even if the scenario asks for them.
    #[arg(long)]
    no_traces: bool,
    /// Run replications on one thread.
    #[arg(long)]
    serial: bool,
}

impl ScenarioArgs {
    fn load(&self) -> Result<ScenarioFile, CliError> {
        let mut file = ScenarioFile::load(&self.scenario)?;
        file.apply(&Overrides {
            seed: self.seed,
            rounds: self.rounds,
            replications: self.replications,
            out_dir: self.out_dir.clone(),
            no_traces: self.no_traces,
        });
        Ok(file)
    }

    fn execution(&self) -> Execution {
        if self.serial {
            Execution::Serial
        } else {
            Execution::Parallel
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("fgame: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Run(args) => {
            let file = args.load()?;
            let summary = run(&file, args.execution())?;
            print_summary(&file.name, &summary);
            println!("wrote {}", file.output.out_dir.display());
            Ok(0)
        }
        Command::Sweep { scenario, alphas } => {
            let file = scenario.load()?;
            let selection = AlphaSelection::parse(&alphas)?;
            println!("alpha\tdeviations\tlast_deviation\tp_final");
            for summary in sweep(&file, &selection, scenario.execution())? {
                for a in &summary.per_alpha {
                    println!(
                        "{}\t{}\t{}\t{}",
                        a.alpha,
                        a.deviations,
                        show(a.last_deviation),
                        show(a.p_final)
                    );
                }
            }
            println!("wrote {}", file.output.out_dir.display());
            Ok(0)
        }
        Command::Verdict { dir } => {
            let v = verdict(&dir)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("verdicts serialize")
            );
            Ok(if v.can_learn() { 0 } else { CANNOT_LEARN })
        }
        Command::SeedCheck(args) => {
            let file = args.load()?;
            let check = seed_check(&file)?;
            for path in &check.mismatches {
                println!("differs: {}", path.display());
            }
            println!(
                "{}: {} files compared, {}",
                file.name,
                check.files_compared,
                if check.identical() {
                    "identical"
                } else {
                    "MISMATCH"
                }
            );
            Ok(if check.identical() { 0 } else { 1 })
        }
    }
}

fn print_summary(name: &str, s: &ExperimentSummary) {
    let c = &s.calibration;
    println!(
        "{name}: alpha={} selected={} p_final={} band={}",
        c.alpha,
        c.n_selected,
        show(c.p_final),
        show(c.band_halfwidth)
    );
    if let Some(v) = &s.verdict {
        match (&v.reason, v.alpha0) {
            (Some(reason), _) => println!("verdict: {} ({reason})", v.kind),
            (None, Some(alpha0)) => println!("verdict: {} (alpha0={alpha0})", v.kind),
            _ => println!("verdict: {}", v.kind),
        }
    }
}

fn show<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}
