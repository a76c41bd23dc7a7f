//! A simulator for the repeated forecasting game between Nature and a machine.
//!
//! Nature emits a true probability each round, the machine emits a forecast,
//! and an outcome is drawn. The crate records the resulting sample paths and
//! measures, at finite horizon, whether the machine's test sets are calibrated,
//! how often the players' moves coincide, and whether the machine can learn
//! Nature's probability at all.
//!
//! ```
//! use forecast_game::{
//!     run_experiment, ForecasterStrategy, MoveOrder, NatureStrategy, ProbabilityGrid, ScenarioConfig,
//! };
//!
//! let grid = ProbabilityGrid::new(11).unwrap();
//! let alpha = grid.exact(0.3).unwrap();
//! let config = ScenarioConfig {
//!     grid,
//!     nature: NatureStrategy::OakesAdversary,
//!     forecaster: ForecasterStrategy::Constant { alpha },
//!     move_order: MoveOrder::MachineFirst,
//!     rounds: 2_000,
//!     replications: 2,
//!     master_seed: 1,
//!     assessed_alpha: alpha,
//!     burn_in: 0,
//!     detection_window: 100,
//!     assurance_window: 500,
//!     second_order_times: vec![],
//! };
//! let result = run_experiment(&config).unwrap();
//! // Nature answers 0.3 with f(0.3) = 0.8 every round, so the test set is miscalibrated.
//! let p = result.summary.calibration.p_final.unwrap();
//! assert!((p - 0.8).abs() < 0.05);
//! ```

pub mod calibration;
pub mod engine;
pub mod error;
pub mod forecaster;
pub mod grid;
pub mod inference;
pub mod nature;
pub mod record;
pub mod rng;
pub mod summary;

pub use calibration::{
    calibration_series, martingale_diagnostic, CalibrationAccumulator, CalibrationReport,
};
pub use engine::{
    run_experiment, run_replication, run_round, Execution, ExperimentResult, Game, RoundStreams,
    ScenarioConfig,
};
pub use error::{Error, Result};
pub use forecaster::{decide_forecast, ForecasterStrategy};
pub use grid::{snap_to_grid, Forecast, ProbabilityGrid};
pub use inference::{
    learnability_verdict, AlphaAnalysis, AlphaStatus, CannotLearnReason, PerversityReport,
    PerversityVerdict, SecondOrderClass, SecondOrderEstimate, Verdict,
};
pub use nature::{
    decide_true_prob, oakes_map, FlipSchedule, GridMix, Nature, NatureStrategy, PerverseRule,
    ProbSchedule,
};
pub use record::{History, MoveOrder, Outcome, RoundRecord, Trace};
pub use rng::{bernoulli, RngStream, StreamTag};
pub use summary::{ExperimentSummary, VerdictSummary};
