//! Round records, traces, and the trace CSV format.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Forecast, ProbabilityGrid};

/// Indicator of the associated event: 1 if it occurred, else 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Outcome(bool);

impl Outcome {
    pub const ZERO: Outcome = Outcome(false);
    pub const ONE: Outcome = Outcome(true);

    pub fn get(self) -> u8 {
        self.0 as u8
    }

    pub fn occurred(self) -> bool {
        self.0
    }

    pub fn from_indicator(y: u8) -> Result<Self> {
        match y {
            0 => Ok(Self::ZERO),
            1 => Ok(Self::ONE),
            other => Err(Error::Format(format!(
                "outcome must be 0 or 1, got {other}"
            ))),
        }
    }
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        Outcome(b)
    }
}

/// Who moves first within a round. Fixed for a whole scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveOrder {
    Simultaneous,
    NatureFirst,
    MachineFirst,
}

impl MoveOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            MoveOrder::Simultaneous => "simultaneous",
            MoveOrder::NatureFirst => "nature_first",
            MoveOrder::MachineFirst => "machine_first",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "simultaneous" => Ok(MoveOrder::Simultaneous),
            "nature_first" => Ok(MoveOrder::NatureFirst),
            "machine_first" => Ok(MoveOrder::MachineFirst),
            other => Err(Error::Format(format!("unknown move order {other:?}"))),
        }
    }
}

/// One round of the game.
///
/// `true_prob` is Nature's conditional probability of the event given the
/// history, `forecast` the machine's. `selected` is the test-set flag, fixed
/// before the outcome was drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundRecord {
    pub t: u32,
    pub forecast: Forecast,
    pub true_prob: Forecast,
    pub outcome: Outcome,
    pub selected: bool,
    pub move_order: MoveOrder,
}

impl RoundRecord {
    /// Whether the machine's forecast matched Nature's move (the machine won the round).
    pub fn matched(&self) -> bool {
        self.forecast == self.true_prob
    }
}

/// The prefix of a trace visible when deciding round `len()`.
#[derive(Debug, Clone, Copy)]
pub struct History<'a> {
    records: &'a [RoundRecord],
    ones: u64,
}

impl<'a> History<'a> {
    pub fn new(records: &'a [RoundRecord]) -> Self {
        let ones = records.iter().map(|r| r.outcome.get() as u64).sum();
        Self { records, ones }
    }

    /// Caller guarantees `ones` is the outcome count of `records`.
    pub(crate) fn with_ones(records: &'a [RoundRecord], ones: u64) -> Self {
        Self { records, ones }
    }

    pub fn empty() -> Self {
        Self {
            records: &[],
            ones: 0,
        }
    }

    pub fn records(&self) -> &'a [RoundRecord] {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of past rounds whose event occurred.
    pub fn ones(&self) -> u64 {
        self.ones
    }
}

/// One realized sample path: records `0..T` of a single replication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    records: Vec<RoundRecord>,
    pub replication_index: u32,
    pub master_seed: u64,
}

impl Trace {
    pub fn new(replication_index: u32, master_seed: u64) -> Self {
        Self {
            records: Vec::new(),
            replication_index,
            master_seed,
        }
    }

    pub fn with_capacity(replication_index: u32, master_seed: u64, capacity: usize) -> Self {
        Self {
            records: Vec::with_capacity(capacity),
            replication_index,
            master_seed,
        }
    }

    /// Appends the next record. Its `t` must equal the current length.
    pub fn push(&mut self, record: RoundRecord) -> Result<()> {
        if record.t as usize != self.records.len() {
            return Err(Error::Integrity(format!(
                "record t={} appended at position {}",
                record.t,
                self.records.len()
            )));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[RoundRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// History visible at round `t`, i.e. records `0..t`.
    pub fn history(&self, t: usize) -> History<'_> {
        History::new(&self.records[..t.min(self.records.len())])
    }

    /// Writes the trace as CSV with header `t,forecast,true_prob,outcome,selected,move_order`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Format(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.records {
            w.write_record(&[
                r.t.to_string(),
                r.forecast.to_string(),
                r.true_prob.to_string(),
                r.outcome.get().to_string(),
                (r.selected as u8).to_string(),
                r.move_order.as_str().to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Format(e.to_string()))?;
        Ok(())
    }

    /// Reads a trace written by [`Trace::write_csv`]. Probabilities must be grid values.
    pub fn read_csv<R: Read>(
        reader: R,
        grid: &ProbabilityGrid,
        replication_index: u32,
        master_seed: u64,
    ) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| Error::Format(e.to_string()))?
            .clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::Format(format!("unexpected header {header:?}")));
        }
        let mut trace = Trace::new(replication_index, master_seed);
        for (line, row) in rdr.records().enumerate() {
            let row = row.map_err(|e| Error::Format(e.to_string()))?;
            let field = |i: usize| -> Result<&str> {
                row.get(i)
                    .ok_or_else(|| Error::Format(format!("row {}: missing column {i}", line + 1)))
            };
            let bad = |what: &str| Error::Format(format!("row {}: bad {what}", line + 1));
            let prob = |i: usize, what: &str| -> Result<Forecast> {
                let x: f64 = field(i)?.parse().map_err(|_| bad(what))?;
                grid.exact(x)
            };
            let record = RoundRecord {
                t: field(0)?.parse().map_err(|_| bad("t"))?,
                forecast: prob(1, "forecast")?,
                true_prob: prob(2, "true_prob")?,
                outcome: Outcome::from_indicator(field(3)?.parse().map_err(|_| bad("outcome"))?)?,
                selected: match field(4)? {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad("selected")),
                },
                move_order: MoveOrder::parse(field(5)?)?,
            };
            trace.push(record)?;
        }
        Ok(trace)
    }
}

pub const CSV_HEADER: [&str; 6] = [
    "t",
    "forecast",
    "true_prob",
    "outcome",
    "selected",
    "move_order",
];
