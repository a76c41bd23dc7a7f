//! Nature's data-generating strategies.
//!
//! Each round Nature emits the true probability `P_t` of the associated event
//! given the history. Depending on the move order she may see the machine's
//! forecast for the round before deciding.

use crate::error::{Error, Result};
use crate::grid::{Forecast, ProbabilityGrid};
use crate::record::{History, MoveOrder};
use crate::rng::RngStream;

/// How a perverse Nature moves away from a forecast she has observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerverseRule {
    /// Respond with `f(forecast)`, see [`oakes_map`].
    #[default]
    OakesMap,
    /// Respond with the grid endpoint farthest from the forecast (ties to 0).
    MaxDistance,
}

/// Distribution over grid points used when Nature cannot see the forecast.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum GridMix {
    #[default]
    Uniform,
    /// Unnormalized non-negative weights, one per grid point.
    Weights(Vec<f64>),
}

impl GridMix {
    /// Probability mass the mix places on `point`.
    pub fn mass(&self, point: Forecast) -> f64 {
        match self {
            GridMix::Uniform => 1.0 / point.grid().resolution() as f64,
            GridMix::Weights(w) => w[point.index() as usize] / w.iter().sum::<f64>(),
        }
    }

    fn sample(&self, grid: &ProbabilityGrid, stream: &mut RngStream) -> Forecast {
        let index = match self {
            GridMix::Uniform => stream.below(grid.resolution() as u64) as u32,
            GridMix::Weights(w) => {
                let total: f64 = w.iter().sum();
                let mut u = stream.uniform() * total;
                let mut chosen = w.iter().rposition(|&x| x > 0.0).unwrap_or(0);
                for (i, &x) in w.iter().enumerate() {
                    if x > 0.0 && u < x {
                        chosen = i;
                        break;
                    }
                    u -= x;
                }
                chosen as u32
            }
        };
        grid.forecast(index).expect("mix index within grid")
    }

    fn validate(&self, grid: &ProbabilityGrid) -> Result<()> {
        if let GridMix::Weights(w) = self {
            if w.len() != grid.resolution() as usize {
                return Err(Error::Config(format!(
                    "mix has {} weights for a grid of {} points",
                    w.len(),
                    grid.resolution()
                )));
            }
            if w.iter().any(|x| !x.is_finite() || *x < 0.0) || w.iter().sum::<f64>() <= 0.0 {
                return Err(Error::Config(
                    "mix weights must be finite, non-negative and not all zero".into(),
                ));
            }
        }
        Ok(())
    }
}

/// When a selectively perverse Nature deviates from her favored forecast.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlipSchedule {
    /// Nature changes her mind at each of `flips` and for the last time at
    /// `stopping_time`; she conforms at every round after it. Episodes
    /// alternate backwards from the stopping time, so `(last flip, t_s]` is
    /// perverse, the episode before it conforming, and so on.
    Finite { flips: Vec<u32>, stopping_time: u32 },
    /// Never settles: perverse on `[2kP, (2k+1)P)`, conforming on `[(2k+1)P, (2k+2)P)`.
    Periodic { period: u32 },
}

impl FlipSchedule {
    pub fn stopping_time(&self) -> Option<u32> {
        match self {
            FlipSchedule::Finite { stopping_time, .. } => Some(*stopping_time),
            FlipSchedule::Periodic { .. } => None,
        }
    }

    /// Whether Nature is perverse toward her favored forecast at round `t`.
    pub fn perverse_at(&self, t: u32) -> bool {
        match self {
            FlipSchedule::Finite {
                flips,
                stopping_time,
            } => {
                if t > *stopping_time {
                    return false;
                }
                let pending = 1 + flips.len() - flips.partition_point(|&f| f < t);
                pending % 2 == 1
            }
            FlipSchedule::Periodic { period } => (t / period).is_multiple_of(2),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            FlipSchedule::Finite {
                flips,
                stopping_time,
            } => {
                if flips.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config(
                        "flip schedule must be strictly increasing".into(),
                    ));
                }
                if flips.last().is_some_and(|&f| f >= *stopping_time) {
                    return Err(Error::Config(
                        "every flip must come before the stopping time".into(),
                    ));
                }
            }
            FlipSchedule::Periodic { period } => {
                if *period == 0 {
                    return Err(Error::Config("flip period must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// The true-probability schedule of a [`NatureStrategy::TruthfulRevealer`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbSchedule {
    Constant(Forecast),
    /// `values[t % values.len()]`.
    Cycle(Vec<Forecast>),
}

impl ProbSchedule {
    pub fn at(&self, t: u32) -> Forecast {
        match self {
            ProbSchedule::Constant(p) => *p,
            ProbSchedule::Cycle(values) => values[t as usize % values.len()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NatureStrategy {
    /// Same true probability every round.
    Iid { p: Forecast },
    /// Reacts to the observed forecast `a` with `f(a)`.
    OakesAdversary,
    /// Deviates from every forecast. With the forecast in view she applies
    /// `machine_first_rule`; otherwise she draws from `simultaneous_mix`.
    UniformlyPerverse {
        machine_first_rule: PerverseRule,
        simultaneous_mix: GridMix,
    },
    /// Deviates from every forecast except `favored`, which she honors only
    /// outside perverse episodes of `schedule`.
    SelectivelyPerverse {
        favored: Forecast,
        schedule: FlipSchedule,
        off_favored: PerverseRule,
    },
    /// Emits a known schedule; under `NatureFirst` the value is revealed to the machine.
    TruthfulRevealer { schedule: ProbSchedule },
}

impl NatureStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            NatureStrategy::Iid { .. } => "iid",
            NatureStrategy::OakesAdversary => "oakes_adversary",
            NatureStrategy::UniformlyPerverse { .. } => "uniformly_perverse",
            NatureStrategy::SelectivelyPerverse { .. } => "selectively_perverse",
            NatureStrategy::TruthfulRevealer { .. } => "truthful_revealer",
        }
    }

    /// Checks grid membership and move-order compatibility.
    pub fn validate(&self, grid: &ProbabilityGrid, order: MoveOrder) -> Result<()> {
        let on_grid = |f: &Forecast| {
            if grid.contains(*f) {
                Ok(())
            } else {
                Err(Error::Config(format!("{f} is not on the configured grid")))
            }
        };
        let needs_half = |rule: PerverseRule| {
            if rule == PerverseRule::OakesMap && grid.half().is_none() {
                Err(Error::Config(format!(
                    "the Oakes map needs 1/2 on the grid; resolution {} has none",
                    grid.resolution()
                )))
            } else {
                Ok(())
            }
        };
        let needs_machine_first = |what: &str| {
            if order == MoveOrder::MachineFirst {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{what} must observe the forecast; move order must be machine_first"
                )))
            }
        };
        match self {
            NatureStrategy::Iid { p } => on_grid(p),
            NatureStrategy::OakesAdversary => {
                needs_machine_first("oakes_adversary")?;
                needs_half(PerverseRule::OakesMap)
            }
            NatureStrategy::UniformlyPerverse {
                machine_first_rule,
                simultaneous_mix,
            } => {
                if order == MoveOrder::MachineFirst {
                    needs_half(*machine_first_rule)?;
                }
                simultaneous_mix.validate(grid)
            }
            NatureStrategy::SelectivelyPerverse {
                favored,
                schedule,
                off_favored,
            } => {
                on_grid(favored)?;
                needs_machine_first("selectively_perverse")?;
                needs_half(*off_favored)?;
                schedule.validate()
            }
            NatureStrategy::TruthfulRevealer { schedule } => match schedule {
                ProbSchedule::Constant(p) => on_grid(p),
                ProbSchedule::Cycle(values) => {
                    if values.is_empty() {
                        return Err(Error::Config("revealer cycle is empty".into()));
                    }
                    values.iter().try_for_each(on_grid)
                }
            },
        }
    }
}

/// `f(x) = x + 1/2` on `[0, 1/2]`, `f(x) = 1 - x` on `(1/2, 1]`.
///
/// Computed on grid indices, so the grid must contain 1/2. `f` has no fixed
/// point: `f(x) > x` on the lower branch and `f(x) < 1/2 < x` on the upper.
pub fn oakes_map(x: Forecast) -> Result<Forecast> {
    let grid = x.grid();
    let half = grid
        .half()
        .ok_or_else(|| {
            Error::Config(format!(
                "the Oakes map needs 1/2 on the grid; resolution {} has none",
                grid.resolution()
            ))
        })?
        .index();
    let i = x.index();
    let image = if i <= half {
        i + half
    } else {
        grid.steps() - i
    };
    grid.forecast(image)
}

/// The grid endpoint farthest from `x`, ties toward 0.
pub fn max_distance(x: Forecast) -> Forecast {
    let grid = x.grid();
    if 2 * x.index() >= grid.steps() {
        grid.zero()
    } else {
        grid.one()
    }
}

fn apply_rule(rule: PerverseRule, x: Forecast) -> Result<Forecast> {
    match rule {
        PerverseRule::OakesMap => oakes_map(x),
        PerverseRule::MaxDistance => Ok(max_distance(x)),
    }
}

/// A validated strategy bound to its grid and move order.
#[derive(Debug, Clone)]
pub struct Nature {
    strategy: NatureStrategy,
    move_order: MoveOrder,
    grid: ProbabilityGrid,
}

impl Nature {
    pub fn new(
        strategy: NatureStrategy,
        move_order: MoveOrder,
        grid: ProbabilityGrid,
    ) -> Result<Self> {
        strategy.validate(&grid, move_order)?;
        Ok(Self {
            strategy,
            move_order,
            grid,
        })
    }

    pub fn strategy(&self) -> &NatureStrategy {
        &self.strategy
    }

    pub fn move_order(&self) -> MoveOrder {
        self.move_order
    }

    /// Emits `P_t`. `observed_forecast` must be present exactly under `MachineFirst`.
    pub fn decide(
        &self,
        _history: &History<'_>,
        observed_forecast: Option<Forecast>,
        t: u32,
        stream: &mut RngStream,
    ) -> Result<Forecast> {
        let machine_first = self.move_order == MoveOrder::MachineFirst;
        if observed_forecast.is_some() != machine_first {
            return Err(Error::Contract {
                who: "nature",
                order: self.move_order,
                detail: if machine_first {
                    "forecast must be observed when the machine moves first"
                } else {
                    "forecast must not be visible unless the machine moves first"
                },
            });
        }
        if let Some(f) = observed_forecast {
            if !self.grid.contains(f) {
                return Err(Error::Config(format!("observed forecast {f} is off-grid")));
            }
        }

        match &self.strategy {
            NatureStrategy::Iid { p } => Ok(*p),
            NatureStrategy::OakesAdversary => oakes_map(observed_forecast.expect("checked above")),
            NatureStrategy::UniformlyPerverse {
                machine_first_rule,
                simultaneous_mix,
            } => match observed_forecast {
                Some(f) => apply_rule(*machine_first_rule, f),
                None => Ok(simultaneous_mix.sample(&self.grid, stream)),
            },
            NatureStrategy::SelectivelyPerverse {
                favored,
                schedule,
                off_favored,
            } => {
                let f = observed_forecast.expect("validated machine_first");
                if f == *favored && !schedule.perverse_at(t) {
                    Ok(*favored)
                } else {
                    apply_rule(*off_favored, f)
                }
            }
            NatureStrategy::TruthfulRevealer { schedule } => Ok(schedule.at(t)),
        }
    }
}

/// Free-function form of [`Nature::decide`] that validates on every call.
pub fn decide_true_prob(
    strategy: &NatureStrategy,
    grid: &ProbabilityGrid,
    move_order: MoveOrder,
    history: &History<'_>,
    observed_forecast: Option<Forecast>,
    t: u32,
    stream: &mut RngStream,
) -> Result<Forecast> {
    Nature::new(strategy.clone(), move_order, *grid)?.decide(history, observed_forecast, t, stream)
}
