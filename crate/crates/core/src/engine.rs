//! The repeated forecasting game.
//!
//! Each round the two players move in the scenario's fixed order, the outcome
//! is drawn from `Bernoulli(P_t)`, and the round is appended to the trace. The
//! test-set flag is fixed from the forecast alone, before the outcome exists.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forecaster::{decide_forecast, ForecasterStrategy};
use crate::grid::{Forecast, ProbabilityGrid};
use crate::nature::{Nature, NatureStrategy};
use crate::record::{History, MoveOrder, RoundRecord, Trace};
use crate::rng::{bernoulli, RngStream, StreamTag};
use crate::summary::{summarize, ExperimentSummary};

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub grid: ProbabilityGrid,
    pub nature: NatureStrategy,
    pub forecaster: ForecasterStrategy,
    pub move_order: MoveOrder,
    pub rounds: u32,
    pub replications: u32,
    pub master_seed: u64,
    /// Selection criterion: round `t` is in the test set iff the forecast equals this.
    pub assessed_alpha: Forecast,
    pub burn_in: u32,
    /// Trailing window (in selected rounds) that decides perverse vs. settled.
    pub detection_window: u32,
    /// Deviation-free run (in selected rounds) after which the machine is self-assured.
    pub assurance_window: u32,
    /// Rounds at which the second-order probability is estimated; empty means first, middle, last.
    pub second_order_times: Vec<u32>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.nature.validate(&self.grid, self.move_order)?;
        self.forecaster.validate(&self.grid, self.move_order)?;
        if !self.grid.contains(self.assessed_alpha) {
            return Err(Error::Config(
                "assessed alpha is not on the configured grid".into(),
            ));
        }
        if self.rounds == 0 {
            return Err(Error::Config("rounds must be positive".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be positive".into()));
        }
        if self.burn_in >= self.rounds {
            return Err(Error::Config(format!(
                "burn_in {} must be below rounds {}",
                self.burn_in, self.rounds
            )));
        }
        if self.detection_window == 0 || self.detection_window > self.rounds - self.burn_in {
            return Err(Error::Config(format!(
                "detection window {} must lie in 1..={}",
                self.detection_window,
                self.rounds - self.burn_in
            )));
        }
        if self.assurance_window < self.detection_window {
            return Err(Error::Config(
                "assurance window must be at least the detection window".into(),
            ));
        }
        if let Some(t) = self.second_order_times.iter().find(|&&t| t >= self.rounds) {
            return Err(Error::Config(format!(
                "second-order time {t} is past the horizon"
            )));
        }
        Ok(())
    }

    pub fn second_order_times(&self) -> Vec<u32> {
        if !self.second_order_times.is_empty() {
            return self.second_order_times.clone();
        }
        let mut ts = vec![0, self.rounds / 2, self.rounds.saturating_sub(1)];
        ts.dedup();
        ts
    }
}

/// The per-round streams: Nature's mixing draw and the outcome draw.
#[derive(Debug, Clone)]
pub struct RoundStreams {
    pub nature: RngStream,
    pub outcome: RngStream,
}

impl RoundStreams {
    pub fn for_round(master_seed: u64, replication: u32, t: u32) -> Self {
        Self {
            nature: RngStream::new(master_seed, replication, t, StreamTag::Nature),
            outcome: RngStream::new(master_seed, replication, t, StreamTag::Outcome),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub traces: Vec<Trace>,
    pub summary: ExperimentSummary,
}

/// A configuration with its strategies validated and bound.
#[derive(Debug, Clone)]
pub struct Game {
    config: ScenarioConfig,
    nature: Nature,
}

impl Game {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config
            .forecaster
            .validate(&config.grid, config.move_order)?;
        if !config.grid.contains(config.assessed_alpha) {
            return Err(Error::Config(
                "assessed alpha is not on the configured grid".into(),
            ));
        }
        let nature = Nature::new(config.nature.clone(), config.move_order, config.grid)?;
        Ok(Self { config, nature })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn run_round(
        &self,
        history: &History<'_>,
        t: u32,
        streams: &mut RoundStreams,
    ) -> Result<RoundRecord> {
        let cfg = &self.config;
        let forecast_with = |revealed| {
            decide_forecast(
                &cfg.forecaster,
                &cfg.grid,
                cfg.move_order,
                history,
                revealed,
                t,
            )
        };
        let (forecast, true_prob) = match cfg.move_order {
            MoveOrder::MachineFirst => {
                let forecast = forecast_with(None)?;
                let p = self
                    .nature
                    .decide(history, Some(forecast), t, &mut streams.nature)?;
                (forecast, p)
            }
            MoveOrder::NatureFirst => {
                let p = self.nature.decide(history, None, t, &mut streams.nature)?;
                (forecast_with(Some(p))?, p)
            }
            MoveOrder::Simultaneous => {
                let forecast = forecast_with(None)?;
                let p = self.nature.decide(history, None, t, &mut streams.nature)?;
                (forecast, p)
            }
        };
        let selected = forecast == cfg.assessed_alpha;
        let outcome = bernoulli(true_prob, &mut streams.outcome);
        Ok(RoundRecord {
            t,
            forecast,
            true_prob,
            outcome,
            selected,
            move_order: cfg.move_order,
        })
    }

    pub fn run_replication(&self, replication: u32) -> Result<Trace> {
        let cfg = &self.config;
        let mut trace = Trace::with_capacity(replication, cfg.master_seed, cfg.rounds as usize);
        let mut ones = 0u64;
        for t in 0..cfg.rounds {
            let history = History::with_ones(trace.records(), ones);
            let mut streams = RoundStreams::for_round(cfg.master_seed, replication, t);
            let record = self.run_round(&history, t, &mut streams)?;
            ones += record.outcome.get() as u64;
            trace.push(record)?;
        }
        Ok(trace)
    }

    pub fn run_experiment(&self, execution: Execution) -> Result<ExperimentResult> {
        self.config.validate()?;
        let reps = 0..self.config.replications;
        let traces: Vec<Trace> = match execution {
            Execution::Serial => reps
                .map(|r| self.run_replication(r))
                .collect::<Result<_>>()?,
            Execution::Parallel => reps
                .into_par_iter()
                .map(|r| self.run_replication(r))
                .collect::<Result<_>>()?,
        };
        let summary = summarize(&self.config, &traces)?;
        Ok(ExperimentResult { traces, summary })
    }
}

pub fn run_round(
    config: &ScenarioConfig,
    history: &History<'_>,
    t: u32,
    streams: &mut RoundStreams,
) -> Result<RoundRecord> {
    Game::new(config.clone())?.run_round(history, t, streams)
}

/// Runs one replication; `rounds == 0` yields an empty trace.
pub fn run_replication(config: &ScenarioConfig, replication: u32) -> Result<Trace> {
    Game::new(config.clone())?.run_replication(replication)
}

pub fn run_experiment(config: &ScenarioConfig) -> Result<ExperimentResult> {
    Game::new(config.clone())?.run_experiment(Execution::Parallel)
}
