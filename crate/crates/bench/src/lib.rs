//! Shared fixtures for the criterion benchmarks.

use forecast_game::{
    ForecasterStrategy, GridMix, MoveOrder, NatureStrategy, PerverseRule, ProbabilityGrid,
    ScenarioConfig,
};

/// A calibrated i.i.d. scenario: Nature emits 0.3, the machine forecasts 0.3.
pub fn iid_config(rounds: u32, replications: u32) -> ScenarioConfig {
    let grid = ProbabilityGrid::new(11).unwrap();
    let alpha = grid.exact(0.3).unwrap();
    ScenarioConfig {
        grid,
        nature: NatureStrategy::Iid { p: alpha },
        forecaster: ForecasterStrategy::Constant { alpha },
        move_order: MoveOrder::MachineFirst,
        rounds,
        replications,
        master_seed: 7,
        assessed_alpha: alpha,
        burn_in: 0,
        detection_window: rounds.min(1000),
        assurance_window: rounds.min(10_000),
        second_order_times: vec![],
    }
}

/// Simultaneous play against a uniformly mixing Nature with an empirical-frequency forecaster.
pub fn simultaneous_config(rounds: u32, replications: u32) -> ScenarioConfig {
    let grid = ProbabilityGrid::new(11).unwrap();
    ScenarioConfig {
        nature: NatureStrategy::UniformlyPerverse {
            machine_first_rule: PerverseRule::OakesMap,
            simultaneous_mix: GridMix::Uniform,
        },
        forecaster: ForecasterStrategy::DEFAULT_EMPIRICAL,
        move_order: MoveOrder::Simultaneous,
        assessed_alpha: grid.half().unwrap(),
        ..iid_config(rounds, replications)
    }
}
