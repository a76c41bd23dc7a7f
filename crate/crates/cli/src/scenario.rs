//! Scenario files: the TOML form of a [`ScenarioConfig`] plus output options.

use std::fs;
use std::path::{Path, PathBuf};

use forecast_game::{
    FlipSchedule, Forecast, ForecasterStrategy, GridMix, MoveOrder, NatureStrategy, PerverseRule,
    ProbSchedule, ProbabilityGrid, ScenarioConfig,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default = "default_grid")]
    pub grid: u32,
    pub move_order: MoveOrder,
    pub rounds: u32,
    pub replications: u32,
    pub seed: u64,
    /// Assessed forecast: the selection criterion for the test set.
    pub alpha: f64,
    #[serde(default)]
    pub burn_in: u32,
    pub detection_window: u32,
    pub assurance_window: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub second_order_times: Vec<u32>,
    pub nature: NatureSpec,
    pub forecaster: ForecasterSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

fn default_grid() -> u32 {
    11
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NatureSpec {
    Iid {
        p: f64,
    },
    OakesAdversary,
    UniformlyPerverse {
        #[serde(default)]
        rule: RuleSpec,
        /// Weights per grid point for the simultaneous-move mix; uniform when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<Vec<f64>>,
    },
    SelectivelyPerverse {
        favored: f64,
        #[serde(default)]
        off_favored: RuleSpec,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        flips: Vec<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stopping_time: Option<u32>,
        /// Alternate forever with this period instead of settling.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        period: Option<u32>,
    },
    TruthfulRevealer {
        /// True probabilities cycled round by round; a single value is constant.
        schedule: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleSpec {
    #[default]
    OakesMap,
    MaxDistance,
}

impl From<RuleSpec> for PerverseRule {
    fn from(r: RuleSpec) -> Self {
        match r {
            RuleSpec::OakesMap => PerverseRule::OakesMap,
            RuleSpec::MaxDistance => PerverseRule::MaxDistance,
        }
    }
}

impl From<PerverseRule> for RuleSpec {
    fn from(r: PerverseRule) -> Self {
        match r {
            PerverseRule::OakesMap => RuleSpec::OakesMap,
            PerverseRule::MaxDistance => RuleSpec::MaxDistance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForecasterSpec {
    Constant {
        alpha: f64,
    },
    EmpiricalFrequency {
        #[serde(default = "default_prior_successes")]
        prior_successes: f64,
        #[serde(default = "default_prior_trials")]
        prior_trials: f64,
    },
    Mimic,
}

fn default_prior_successes() -> f64 {
    1.0
}

fn default_prior_trials() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub emit_traces: bool,
    #[serde(default = "yes")]
    pub emit_series: bool,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn yes() -> bool {
    true
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            out_dir: default_out_dir(),
            emit_traces: false,
            emit_series: true,
        }
    }
}

/// Command-line replacements for scenario fields.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub rounds: Option<u32>,
    pub replications: Option<u32>,
    pub out_dir: Option<PathBuf>,
    pub no_traces: bool,
}

impl ScenarioFile {
    pub fn parse(text: &str, origin: &Path) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|span| line_col(text, span.start))
                .unwrap_or((1, 1));
            CliError::Parse {
                path: origin.to_path_buf(),
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario files always serialize")
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(rounds) = overrides.rounds {
            self.rounds = rounds;
        }
        if let Some(reps) = overrides.replications {
            self.replications = reps;
        }
        if let Some(dir) = &overrides.out_dir {
            self.output.out_dir = dir.clone();
        }
        if overrides.no_traces {
            self.output.emit_traces = false;
        }
    }

    /// Builds and validates the engine configuration.
    pub fn to_config(&self) -> Result<ScenarioConfig, CliError> {
        let grid = ProbabilityGrid::new(self.grid)?;
        let at = |x: f64| grid.exact(x);
        let nature = match &self.nature {
            NatureSpec::Iid { p } => NatureStrategy::Iid { p: at(*p)? },
            NatureSpec::OakesAdversary => NatureStrategy::OakesAdversary,
            NatureSpec::UniformlyPerverse { rule, weights } => NatureStrategy::UniformlyPerverse {
                machine_first_rule: (*rule).into(),
                simultaneous_mix: weights.clone().map_or(GridMix::Uniform, GridMix::Weights),
            },
            NatureSpec::SelectivelyPerverse {
                favored,
                off_favored,
                flips,
                stopping_time,
                period,
            } => {
                let schedule = match (stopping_time, period) {
                    (Some(ts), None) => FlipSchedule::Finite {
                        flips: flips.clone(),
                        stopping_time: *ts,
                    },
                    (None, Some(period)) if flips.is_empty() => {
                        FlipSchedule::Periodic { period: *period }
                    }
                    _ => {
                        return Err(CliError::Config(
                            "selectively_perverse needs either stopping_time (with optional flips) or period".into(),
                        ))
                    }
                };
                NatureStrategy::SelectivelyPerverse {
                    favored: at(*favored)?,
                    schedule,
                    off_favored: (*off_favored).into(),
                }
            }
            NatureSpec::TruthfulRevealer { schedule } => {
                let values = schedule
                    .iter()
                    .map(|&x| at(x))
                    .collect::<Result<Vec<_>, _>>()?;
                match values.as_slice() {
                    [] => {
                        return Err(CliError::Config(
                            "truthful_revealer schedule is empty".into(),
                        ))
                    }
                    [p] => NatureStrategy::TruthfulRevealer {
                        schedule: ProbSchedule::Constant(*p),
                    },
                    _ => NatureStrategy::TruthfulRevealer {
                        schedule: ProbSchedule::Cycle(values),
                    },
                }
            }
        };
        let forecaster = match &self.forecaster {
            ForecasterSpec::Constant { alpha } => {
                ForecasterStrategy::Constant { alpha: at(*alpha)? }
            }
            ForecasterSpec::EmpiricalFrequency {
                prior_successes,
                prior_trials,
            } => ForecasterStrategy::EmpiricalFrequency {
                prior_successes: *prior_successes,
                prior_trials: *prior_trials,
            },
            ForecasterSpec::Mimic => ForecasterStrategy::Mimic,
        };
        let config = ScenarioConfig {
            grid,
            nature,
            forecaster,
            move_order: self.move_order,
            rounds: self.rounds,
            replications: self.replications,
            master_seed: self.seed,
            assessed_alpha: at(self.alpha)?,
            burn_in: self.burn_in,
            detection_window: self.detection_window,
            assurance_window: self.assurance_window,
            second_order_times: self.second_order_times.clone(),
        };
        config.validate()?;
        Ok(config)
    }

    /// The file that describes `config`.
    pub fn from_config(name: &str, config: &ScenarioConfig, output: OutputSpec) -> Self {
        let v = |f: Forecast| f.value();
        let nature = match &config.nature {
            NatureStrategy::Iid { p } => NatureSpec::Iid { p: v(*p) },
            NatureStrategy::OakesAdversary => NatureSpec::OakesAdversary,
            NatureStrategy::UniformlyPerverse {
                machine_first_rule,
                simultaneous_mix,
            } => NatureSpec::UniformlyPerverse {
                rule: (*machine_first_rule).into(),
                weights: match simultaneous_mix {
                    GridMix::Uniform => None,
                    GridMix::Weights(w) => Some(w.clone()),
                },
            },
            NatureStrategy::SelectivelyPerverse {
                favored,
                schedule,
                off_favored,
            } => {
                let (flips, stopping_time, period) = match schedule {
                    FlipSchedule::Finite {
                        flips,
                        stopping_time,
                    } => (flips.clone(), Some(*stopping_time), None),
                    FlipSchedule::Periodic { period } => (vec![], None, Some(*period)),
                };
                NatureSpec::SelectivelyPerverse {
                    favored: v(*favored),
                    off_favored: (*off_favored).into(),
                    flips,
                    stopping_time,
                    period,
                }
            }
            NatureStrategy::TruthfulRevealer { schedule } => NatureSpec::TruthfulRevealer {
                schedule: match schedule {
                    ProbSchedule::Constant(p) => vec![v(*p)],
                    ProbSchedule::Cycle(values) => values.iter().map(|&p| v(p)).collect(),
                },
            },
        };
        let forecaster = match &config.forecaster {
            ForecasterStrategy::Constant { alpha } => ForecasterSpec::Constant { alpha: v(*alpha) },
            ForecasterStrategy::EmpiricalFrequency {
                prior_successes,
                prior_trials,
            } => ForecasterSpec::EmpiricalFrequency {
                prior_successes: *prior_successes,
                prior_trials: *prior_trials,
            },
            ForecasterStrategy::Mimic => ForecasterSpec::Mimic,
        };
        Self {
            name: name.to_string(),
            grid: config.grid.resolution(),
            move_order: config.move_order,
            rounds: config.rounds,
            replications: config.replications,
            seed: config.master_seed,
            alpha: v(config.assessed_alpha),
            burn_in: config.burn_in,
            detection_window: config.detection_window,
            assurance_window: config.assurance_window,
            second_order_times: config.second_order_times.clone(),
            nature,
            forecaster,
            output,
        }
    }
}

/// One-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}
