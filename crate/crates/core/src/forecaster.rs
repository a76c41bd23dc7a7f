//! Machine forecasting strategies.
//!
//! A forecast for round `t` is a function of the history through `t - 1` and,
//! when Nature moves first, of her revealed move. Nothing else reaches the
//! strategy, so forecasts cannot look ahead.

use crate::error::{Error, Result};
use crate::grid::{Forecast, ProbabilityGrid};
use crate::record::{History, MoveOrder};

#[derive(Debug, Clone, PartialEq)]
pub enum ForecasterStrategy {
    Constant {
        alpha: Forecast,
    },
    /// Smoothed empirical frequency `(a + successes) / (b + trials)`, snapped
    /// to the grid. With `a = b = 0` and no data it emits the grid midpoint.
    EmpiricalFrequency {
        prior_successes: f64,
        prior_trials: f64,
    },
    /// Copies Nature's revealed move; `NatureFirst` only.
    Mimic,
}

impl ForecasterStrategy {
    pub const DEFAULT_EMPIRICAL: ForecasterStrategy = ForecasterStrategy::EmpiricalFrequency {
        prior_successes: 1.0,
        prior_trials: 2.0,
    };

    pub fn name(&self) -> &'static str {
        match self {
            ForecasterStrategy::Constant { .. } => "constant",
            ForecasterStrategy::EmpiricalFrequency { .. } => "empirical_frequency",
            ForecasterStrategy::Mimic => "mimic",
        }
    }

    pub fn validate(&self, grid: &ProbabilityGrid, order: MoveOrder) -> Result<()> {
        match self {
            ForecasterStrategy::Constant { alpha } if !grid.contains(*alpha) => Err(Error::Config(
                format!("{alpha} is not on the configured grid"),
            )),
            ForecasterStrategy::EmpiricalFrequency {
                prior_successes: a,
                prior_trials: b,
            } if !(a.is_finite() && b.is_finite() && *a >= 0.0 && a <= b) => Err(Error::Config(
                format!("empirical prior needs 0 <= a <= b, got a={a}, b={b}"),
            )),
            ForecasterStrategy::Mimic if order != MoveOrder::NatureFirst => Err(Error::Config(
                "mimic needs Nature's move revealed; move order must be nature_first".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Chooses the machine's forecast for round `t`.
///
/// `revealed_true_prob` must be present exactly when Nature moved first.
pub fn decide_forecast(
    strategy: &ForecasterStrategy,
    grid: &ProbabilityGrid,
    move_order: MoveOrder,
    history: &History<'_>,
    revealed_true_prob: Option<Forecast>,
    t: u32,
) -> Result<Forecast> {
    let nature_first = move_order == MoveOrder::NatureFirst;
    if revealed_true_prob.is_some() != nature_first {
        return Err(Error::Contract {
            who: "forecaster",
            order: move_order,
            detail: if nature_first {
                "Nature's move must be revealed when she moves first"
            } else {
                "Nature's move is hidden unless she moves first"
            },
        });
    }
    if history.len() != t as usize {
        return Err(Error::Integrity(format!(
            "forecast for round {t} given a history of {} rounds",
            history.len()
        )));
    }

    match strategy {
        ForecasterStrategy::Constant { alpha } => Ok(*alpha),
        ForecasterStrategy::EmpiricalFrequency {
            prior_successes,
            prior_trials,
        } => {
            let trials = prior_trials + history.len() as f64;
            if trials == 0.0 {
                return grid.snap(0.5);
            }
            grid.snap((prior_successes + history.ones() as f64) / trials)
        }
        ForecasterStrategy::Mimic => {
            let revealed = revealed_true_prob.expect("checked above");
            grid.snap(revealed.value())
        }
    }
}
