//! The `run`, `sweep`, `verdict` and `seed-check` commands.
//!
//! Every command writes plain files under an output directory:
//!
//! ```text
//! out_dir/summary.json
//! out_dir/traces/rep_<i>.csv        (emit_traces)
//! out_dir/series/alpha_<v>.csv      (emit_series, replication 0)
//! out_dir/alpha_<v>/...             (sweep, one run layout per alpha)
//! out_dir/sweep.csv                 (sweep)
//! out_dir/verdict.json              (verdict)
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use forecast_game::calibration::write_series_csv;
use forecast_game::inference::learnability_verdict;
use forecast_game::{
    calibration_series, Execution, ExperimentResult, ExperimentSummary, Forecast, Game,
    ProbabilityGrid, VerdictSummary,
};

use crate::error::CliError;
use crate::scenario::{ForecasterSpec, ScenarioFile};

pub const SUMMARY_FILE: &str = "summary.json";
pub const VERDICT_FILE: &str = "verdict.json";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const SWEEP_HEADER: [&str; 5] = [
    "alpha",
    "deviations",
    "last_deviation",
    "p_final",
    "abs_dev",
];

/// Runs the scenario and writes its output layout into `file.output.out_dir`.
pub fn run(file: &ScenarioFile, execution: Execution) -> Result<ExperimentSummary, CliError> {
    let config = file.to_config()?;
    let result = Game::new(config)?.run_experiment(execution)?;
    write_run(file, &result)?;
    Ok(result.summary)
}

fn write_run(file: &ScenarioFile, result: &ExperimentResult) -> Result<(), CliError> {
    let dir = &file.output.out_dir;
    create_dir(dir)?;
    write_json(&dir.join(SUMMARY_FILE), &result.summary)?;
    if file.output.emit_traces {
        let traces_dir = dir.join("traces");
        create_dir(&traces_dir)?;
        for trace in &result.traces {
            let path = traces_dir.join(format!("rep_{}.csv", trace.replication_index));
            trace.write_csv(create(&path)?)?;
        }
    }
    if let (true, Some(first)) = (file.output.emit_series, result.traces.first()) {
        let series_dir = dir.join("series");
        create_dir(&series_dir)?;
        let alpha = file.to_config()?.assessed_alpha;
        let path = series_dir.join(format!("alpha_{alpha}.csv"));
        write_series_csv(&calibration_series(first, alpha), create(&path)?)?;
    }
    Ok(())
}

/// Which forecasts a sweep visits.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSelection {
    Grid,
    List(Vec<f64>),
}

impl AlphaSelection {
    /// `"grid"` or a comma-separated list of grid values.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        if s.trim() == "grid" {
            return Ok(Self::Grid);
        }
        s.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Config(format!("bad alpha {v:?} in --alphas")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::List)
    }

    pub fn resolve(&self, grid: &ProbabilityGrid) -> Result<Vec<Forecast>, CliError> {
        match self {
            Self::Grid => Ok(grid.points().collect()),
            Self::List(values) => values
                .iter()
                .map(|&x| grid.exact(x).map_err(CliError::from))
                .collect(),
        }
    }
}

/// Runs the scenario once per alpha, each into `out_dir/alpha_<v>`, and
/// tabulates the per-alpha statistics in `out_dir/sweep.csv`.
///
/// The assessed alpha always follows the sweep; a constant forecaster does too.
pub fn sweep(
    file: &ScenarioFile,
    alphas: &AlphaSelection,
    execution: Execution,
) -> Result<Vec<ExperimentSummary>, CliError> {
    let base = file.to_config()?;
    let out_dir = &file.output.out_dir;
    let mut summaries = Vec::new();
    for alpha in alphas.resolve(&base.grid)? {
        let mut one = file.clone();
        one.alpha = alpha.value();
        if let ForecasterSpec::Constant { alpha: a } = &mut one.forecaster {
            *a = alpha.value();
        }
        one.output.out_dir = out_dir.join(format!("alpha_{alpha}"));
        summaries.push(run(&one, execution)?);
    }

    let path = out_dir.join(SWEEP_FILE);
    let mut w = csv::Writer::from_writer(create(&path)?);
    let data = |e: csv::Error| CliError::Data {
        path: path.clone(),
        message: e.to_string(),
    };
    w.write_record(SWEEP_HEADER).map_err(data)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for s in &summaries {
        for a in &s.per_alpha {
            w.write_record([
                a.alpha.to_string(),
                a.deviations.to_string(),
                opt(a.last_deviation.map(|t| t.to_string())),
                opt(a.p_final.map(|p| p.to_string())),
                opt(a.abs_dev.map(|d| d.to_string())),
            ])
            .map_err(data)?;
        }
    }
    w.flush().map_err(|e| CliError::io(&path, e))?;
    Ok(summaries)
}

/// Summary files in `dir` and its immediate subdirectories, sorted.
pub fn find_summaries(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut found = Vec::new();
    let top = dir.join(SUMMARY_FILE);
    if top.is_file() {
        found.push(top);
    }
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        let candidate = path.join(SUMMARY_FILE);
        if path.is_dir() && candidate.is_file() {
            found.push(candidate);
        }
    }
    found.sort();
    Ok(found)
}

pub fn read_summary(path: &Path) -> Result<ExperimentSummary, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Data {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Pools the per-alpha analyses of every summary under `dir`, decides
/// learnability, and writes `dir/verdict.json`.
pub fn verdict(dir: &Path) -> Result<VerdictSummary, CliError> {
    let paths = find_summaries(dir)?;
    if paths.is_empty() {
        return Err(CliError::Data {
            path: dir.to_path_buf(),
            message: format!("no {SUMMARY_FILE} here or in any immediate subdirectory"),
        });
    }
    let mut grid: Option<ProbabilityGrid> = None;
    let mut analyses = Vec::new();
    for path in &paths {
        let summary = read_summary(path)?;
        let g = ProbabilityGrid::new(summary.grid)?;
        match grid {
            None => grid = Some(g),
            Some(seen) if seen != g => {
                return Err(CliError::Config(format!(
                    "{} uses grid {} but earlier summaries use {}",
                    path.display(),
                    summary.grid,
                    seen.resolution()
                )))
            }
            Some(_) => {}
        }
        for a in &summary.per_alpha {
            analyses.push(a.to_analysis(&g)?);
        }
    }
    let verdict = VerdictSummary::from(learnability_verdict(&analyses)?);
    write_json(&dir.join(VERDICT_FILE), &verdict)?;
    Ok(verdict)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedCheck {
    pub files_compared: usize,
    /// Relative paths that differ or exist in only one run.
    pub mismatches: Vec<PathBuf>,
}

impl SeedCheck {
    pub fn identical(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Runs the scenario twice into scratch directories, once across threads and
/// once serially, and compares every output byte for byte.
pub fn seed_check(file: &ScenarioFile) -> Result<SeedCheck, CliError> {
    let scratch = tempfile::tempdir().map_err(|e| CliError::io(&std::env::temp_dir(), e))?;
    let mut dirs = Vec::new();
    for (name, execution) in [
        ("first", Execution::Parallel),
        ("second", Execution::Serial),
    ] {
        let mut one = file.clone();
        one.output.out_dir = scratch.path().join(name);
        run(&one, execution)?;
        dirs.push(one.output.out_dir);
    }
    compare_trees(&dirs[0], &dirs[1])
}

/// Byte comparison of two directory trees.
pub fn compare_trees(a: &Path, b: &Path) -> Result<SeedCheck, CliError> {
    let (left, right) = (list_files(a)?, list_files(b)?);
    let mut mismatches: Vec<PathBuf> = left
        .iter()
        .filter(|p| !right.contains(p))
        .chain(right.iter().filter(|p| !left.contains(p)))
        .cloned()
        .collect();
    let mut files_compared = 0;
    for rel in left.iter().filter(|p| right.contains(p)) {
        let read =
            |root: &Path| fs::read(root.join(rel)).map_err(|e| CliError::io(&root.join(rel), e));
        if read(a)? != read(b)? {
            mismatches.push(rel.clone());
        }
        files_compared += 1;
    }
    mismatches.sort();
    Ok(SeedCheck {
        files_compared,
        mismatches,
    })
}

fn list_files(root: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    let mut pending = vec![root.to_path_buf()];
    while let Some(dir) = pending.pop() {
        for entry in fs::read_dir(&dir).map_err(|e| CliError::io(&dir, e))? {
            let path = entry.map_err(|e| CliError::io(&dir, e))?.path();
            if path.is_dir() {
                pending.push(path);
            } else {
                out.push(
                    path.strip_prefix(root)
                        .expect("walk stays under root")
                        .to_path_buf(),
                );
            }
        }
    }
    out.sort();
    Ok(out)
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent() {
        create_dir(parent)?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Data {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}
