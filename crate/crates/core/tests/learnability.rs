//! Stopping-time detection and the learnability verdict on generated traces.

use forecast_game::inference::{
    analyze_alpha, assurance_check, detect_perversity, estimate_stopping_time, population_after,
    population_empirical, winning_vs_learning_demo, PerversityVerdict,
};
use forecast_game::{
    learnability_verdict, CannotLearnReason, Execution, FlipSchedule, Forecast, ForecasterStrategy,
    Game, GridMix, MoveOrder, NatureStrategy, PerverseRule, ProbabilityGrid, ScenarioConfig, Trace,
    Verdict,
};

const WINDOW: u32 = 1_000;
const W_MIN: u32 = 10_000;

fn grid() -> ProbabilityGrid {
    ProbabilityGrid::new(11).unwrap()
}

fn p(x: f64) -> Forecast {
    grid().exact(x).unwrap()
}

fn selective(schedule: FlipSchedule) -> NatureStrategy {
    NatureStrategy::SelectivelyPerverse {
        favored: p(0.3),
        schedule,
        off_favored: PerverseRule::OakesMap,
    }
}

fn standard_schedule() -> FlipSchedule {
    FlipSchedule::Finite {
        flips: vec![1_000, 2_000, 3_000],
        stopping_time: 5_000,
    }
}

fn run(nature: NatureStrategy, alpha: Forecast, rounds: u32, replications: u32) -> Vec<Trace> {
    let cfg = ScenarioConfig {
        grid: grid(),
        nature,
        forecaster: ForecasterStrategy::Constant { alpha },
        move_order: MoveOrder::MachineFirst,
        rounds,
        replications,
        master_seed: 99,
        assessed_alpha: alpha,
        burn_in: 0,
        detection_window: WINDOW,
        assurance_window: W_MIN.min(rounds),
        second_order_times: vec![],
    };
    Game::new(cfg)
        .unwrap()
        .run_experiment(Execution::Parallel)
        .unwrap()
        .traces
}

fn sweep(nature: NatureStrategy, rounds: u32) -> Verdict {
    let analyses: Vec<_> = grid()
        .points()
        .map(|alpha| {
            let traces = run(nature.clone(), alpha, rounds, 3);
            analyze_alpha(&traces, alpha, 0, WINDOW, W_MIN).unwrap()
        })
        .collect();
    learnability_verdict(&analyses).unwrap()
}

#[test]
fn selective_nature_conforms_after_stopping_time() {
    let traces = run(selective(standard_schedule()), p(0.3), 20_000, 4);
    for trace in &traces {
        for r in trace.records().iter().filter(|r| r.t > 5_000) {
            assert_eq!(r.true_prob, p(0.3));
        }
        assert_eq!(trace.records()[5_000].true_prob, p(0.8));
    }
    let estimate = estimate_stopping_time(&traces, p(0.3), WINDOW).unwrap();
    assert!((5_000..=5_000 + WINDOW).contains(&estimate), "{estimate}");
}

#[test]
fn stopping_time_estimate_never_underestimates() {
    for ts in [200u32, 777, 3_000, 9_999] {
        let flips = vec![ts / 4, ts / 2];
        let schedule = FlipSchedule::Finite {
            flips,
            stopping_time: ts,
        };
        let traces = run(selective(schedule), p(0.3), ts + 2 * WINDOW, 2);
        let estimate = estimate_stopping_time(&traces, p(0.3), WINDOW).unwrap();
        assert!(estimate >= ts, "t_s={ts} estimate={estimate}");
    }
}

#[test]
fn stopping_time_for_iid_and_uniform() {
    let iid = run(NatureStrategy::Iid { p: p(0.3) }, p(0.3), 5_000, 3);
    assert_eq!(estimate_stopping_time(&iid, p(0.3), WINDOW), Some(0));
    let uniform = run(
        NatureStrategy::UniformlyPerverse {
            machine_first_rule: PerverseRule::OakesMap,
            simultaneous_mix: GridMix::Uniform,
        },
        p(0.3),
        5_000,
        3,
    );
    assert_eq!(estimate_stopping_time(&uniform, p(0.3), WINDOW), None);
}

#[test]
fn post_stopping_population_recovers_favored_value() {
    let traces = run(selective(standard_schedule()), p(0.3), 110_000, 1);
    let ts = estimate_stopping_time(&traces, p(0.3), WINDOW).unwrap();
    let population = population_after(&traces, p(0.3), ts);
    assert!(population.len() >= 100_000);
    let freq = population_empirical(&population).unwrap();
    assert!((freq - 0.3).abs() <= 0.012, "{freq}");
}

#[test]
fn verdicts_over_the_grid() {
    assert_eq!(
        sweep(
            NatureStrategy::UniformlyPerverse {
                machine_first_rule: PerverseRule::OakesMap,
                simultaneous_mix: GridMix::Uniform,
            },
            20_000
        ),
        Verdict::CannotLearn {
            reason: CannotLearnReason::UniformPerversity
        }
    );
    assert_eq!(
        sweep(selective(standard_schedule()), 30_000),
        Verdict::CanLearn {
            alpha0: p(0.3),
            learned_value: p(0.3)
        }
    );
    assert_eq!(
        sweep(selective(standard_schedule()), 5_000 + W_MIN / 2),
        Verdict::CannotLearn {
            reason: CannotLearnReason::NotSelfAssured
        }
    );
    let gap = FlipSchedule::Finite {
        flips: vec![1_000, 16_000],
        stopping_time: 20_000,
    };
    assert_eq!(
        sweep(selective(gap), 40_000),
        Verdict::CannotLearn {
            reason: CannotLearnReason::FalseSelfAssurance
        }
    );
}

#[test]
fn can_learn_only_without_post_assurance_deviations() {
    let traces = run(selective(standard_schedule()), p(0.3), 30_000, 5);
    let analysis = analyze_alpha(&traces, p(0.3), 0, WINDOW, W_MIN).unwrap();
    assert!(matches!(
        learnability_verdict(&[analysis]).unwrap(),
        Verdict::CanLearn { .. }
    ));
    for trace in &traces {
        let check = assurance_check(trace, p(0.3), 0, W_MIN);
        let at = check.assured_at.unwrap();
        assert!(trace
            .records()
            .iter()
            .filter(|r| r.t > at)
            .all(|r| r.true_prob == p(0.3)));
    }
}

#[test]
fn frequent_wins_without_learning() {
    let traces = run(
        selective(FlipSchedule::Periodic { period: 1_000 }),
        p(0.3),
        100_000,
        2,
    );
    for trace in &traces {
        let demo = winning_vs_learning_demo(trace, p(0.3), 0, 5_000).unwrap();
        assert!(demo.win_rate >= 0.4, "{}", demo.win_rate);
        assert_eq!(demo.verdict, PerversityVerdict::PersistentlyDeviating);
        let report = detect_perversity(trace, p(0.3), 0, 5_000).unwrap();
        assert!(report.deviation_count_post_burn_in > 40_000);
    }
}
