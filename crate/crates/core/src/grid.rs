//! The countable set of forecast values a machine can compute.
//!
//! Every probability in the game, whether forecast by the machine or emitted by
//! Nature, lives on a finite uniform grid `{0, 1/(G-1), ..., 1}`. Grid points
//! are identified by their integer index, so "the forecast equals alpha" is an
//! exact integer comparison with no floating tolerance.

use std::fmt;

use crate::error::{Error, Result};

/// Tolerance used only when parsing decimal text back onto the grid.
const PARSE_TOLERANCE: f64 = 1e-9;

/// A uniform probability grid with `resolution` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProbabilityGrid {
    steps: u16,
}

impl ProbabilityGrid {
    pub const DEFAULT_RESOLUTION: u32 = 11;

    pub fn new(resolution: u32) -> Result<Self> {
        if !(2..=65536).contains(&resolution) {
            return Err(Error::Resolution(resolution));
        }
        Ok(Self {
            steps: (resolution - 1) as u16,
        })
    }

    /// Number of grid points `G`.
    pub fn resolution(&self) -> u32 {
        self.steps as u32 + 1
    }

    /// Number of intervals between grid points, `G - 1`.
    pub fn steps(&self) -> u32 {
        self.steps as u32
    }

    pub fn forecast(&self, index: u32) -> Result<Forecast> {
        if index > self.steps() {
            return Err(Error::GridIndex {
                index,
                resolution: self.resolution(),
            });
        }
        Ok(Forecast {
            index: index as u16,
            steps: self.steps,
        })
    }

    pub fn zero(&self) -> Forecast {
        Forecast {
            index: 0,
            steps: self.steps,
        }
    }

    pub fn one(&self) -> Forecast {
        Forecast {
            index: self.steps,
            steps: self.steps,
        }
    }

    /// Grid point representing 1/2, if the grid has one.
    pub fn half(&self) -> Option<Forecast> {
        self.steps.is_multiple_of(2).then_some(Forecast {
            index: self.steps / 2,
            steps: self.steps,
        })
    }

    pub fn contains(&self, f: Forecast) -> bool {
        f.steps == self.steps
    }

    /// All grid points in increasing order.
    pub fn points(&self) -> impl DoubleEndedIterator<Item = Forecast> + ExactSizeIterator + '_ {
        let steps = self.steps;
        (0..=steps).map(move |index| Forecast { index, steps })
    }

    /// Nearest grid point to `x`; an exact tie goes to the smaller index.
    pub fn snap(&self, x: f64) -> Result<Forecast> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(x));
        }
        let scaled = x * self.steps as f64;
        let lower = scaled.floor();
        let index = if scaled - lower > 0.5 {
            lower + 1.0
        } else {
            lower
        };
        Ok(Forecast {
            index: (index as u32).min(self.steps()) as u16,
            steps: self.steps,
        })
    }

    /// Parses a decimal probability that must already be a grid value.
    pub fn exact(&self, x: f64) -> Result<Forecast> {
        let f = self.snap(x).map_err(|_| Error::OffGrid(x))?;
        if (f.value() - x).abs() > PARSE_TOLERANCE {
            return Err(Error::OffGrid(x));
        }
        Ok(f)
    }
}

impl Default for ProbabilityGrid {
    fn default() -> Self {
        Self {
            steps: (Self::DEFAULT_RESOLUTION - 1) as u16,
        }
    }
}

/// Free-function form of [`ProbabilityGrid::snap`].
pub fn snap_to_grid(x: f64, grid: &ProbabilityGrid) -> Result<Forecast> {
    grid.snap(x)
}

/// A grid-valued probability: a machine forecast or a true probability.
///
/// Equality is grid-index equality. Values from grids of different
/// resolution never compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forecast {
    steps: u16,
    index: u16,
}

impl Forecast {
    pub fn index(&self) -> u32 {
        self.index as u32
    }

    pub fn grid(&self) -> ProbabilityGrid {
        ProbabilityGrid { steps: self.steps }
    }

    pub fn value(&self) -> f64 {
        self.index as f64 / self.steps as f64
    }
}

impl fmt::Display for Forecast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}
