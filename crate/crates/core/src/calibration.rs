//! Test-set calibration: the selected-round hit rate `p_k` and the martingale
//! whose convergence drives it toward the assessed forecast.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Forecast;
use crate::record::{RoundRecord, Trace};

/// Two-sided 99.9% standard normal quantile.
pub const Z_999: f64 = 3.290_526_731_491_926;

/// Streaming counts over the rounds selected by `forecast == alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CalibrationAccumulator {
    alpha: Forecast,
    n_selected: u64,
    n_hits: u64,
}

impl CalibrationAccumulator {
    pub fn new(alpha: Forecast) -> Self {
        Self {
            alpha,
            n_selected: 0,
            n_hits: 0,
        }
    }

    pub fn alpha(&self) -> Forecast {
        self.alpha
    }

    pub fn n_selected(&self) -> u64 {
        self.n_selected
    }

    pub fn n_hits(&self) -> u64 {
        self.n_hits
    }

    /// Adds one round. The stored flag must agree with `forecast == alpha`.
    pub fn update(&mut self, record: &RoundRecord) -> Result<()> {
        if record.selected != (record.forecast == self.alpha) {
            return Err(Error::InconsistentSelection { t: record.t });
        }
        if record.selected {
            self.n_selected += 1;
            self.n_hits += record.outcome.get() as u64;
        }
        Ok(())
    }

    pub fn from_trace(trace: &Trace, alpha: Forecast) -> Result<Self> {
        let mut acc = Self::new(alpha);
        for r in trace.records() {
            acc.update(r)?;
        }
        Ok(acc)
    }

    /// Combines two disjoint accumulations for the same alpha.
    pub fn merge(self, other: Self) -> Result<Self> {
        if self.alpha != other.alpha {
            return Err(Error::Integrity(format!(
                "merging accumulators for {} and {}",
                self.alpha, other.alpha
            )));
        }
        Ok(Self {
            alpha: self.alpha,
            n_selected: self.n_selected + other.n_selected,
            n_hits: self.n_hits + other.n_hits,
        })
    }

    /// `n_hits / n_selected`; an error when nothing was selected.
    pub fn p_k(&self) -> Result<f64> {
        if self.n_selected == 0 {
            return Err(Error::EmptyTestSet);
        }
        Ok(self.n_hits as f64 / self.n_selected as f64)
    }

    pub fn report(&self, z: f64) -> CalibrationReport {
        let alpha = self.alpha.value();
        let p_final = self.p_k().ok();
        let abs_dev = p_final.map(|p| (p - alpha).abs());
        let band_halfwidth = band_halfwidth(alpha, self.n_selected, z);
        CalibrationReport {
            alpha,
            n_selected: self.n_selected,
            p_final,
            abs_dev,
            band_halfwidth,
            within_band: match (abs_dev, band_halfwidth) {
                (Some(d), Some(h)) => Some(d <= h),
                _ => None,
            },
        }
    }
}

/// Value-returning form of [`CalibrationAccumulator::update`].
pub fn update(acc: CalibrationAccumulator, record: &RoundRecord) -> Result<CalibrationAccumulator> {
    let mut next = acc;
    next.update(record)?;
    Ok(next)
}

/// Half-width `z * sqrt(alpha (1 - alpha) / n)` of the binomial band around alpha.
pub fn band_halfwidth(alpha: f64, n: u64, z: f64) -> Option<f64> {
    (n > 0).then(|| z * (alpha * (1.0 - alpha) / n as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub alpha: f64,
    pub n_selected: u64,
    pub p_final: Option<f64>,
    pub abs_dev: Option<f64>,
    pub band_halfwidth: Option<f64>,
    pub within_band: Option<bool>,
}

/// `(k, p_k)` after each round whose forecast equals `alpha`.
pub fn calibration_series(trace: &Trace, alpha: Forecast) -> Vec<(u64, f64)> {
    let mut k = 0u64;
    let mut hits = 0u64;
    trace
        .records()
        .iter()
        .filter(|r| r.forecast == alpha)
        .map(|r| {
            k += 1;
            hits += r.outcome.get() as u64;
            (k, hits as f64 / k as f64)
        })
        .collect()
}

pub fn write_series_csv<W: Write>(series: &[(u64, f64)], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let fmt = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(["k", "p_k"]).map_err(fmt)?;
    for (k, p) in series {
        w.write_record(&[k.to_string(), p.to_string()])
            .map_err(fmt)?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}

/// Partial sums of `X_t = xi_t (Y_t - Yhat_t) / (xi_1 + ... + xi_t)`, one per selected round.
///
/// `Yhat_t` is the forecast and `xi_t` the stored selection flag. When the
/// forecast is the true probability the sums form a martingale with bounded
/// second moment; a persistent gap between them shows up as drift.
pub fn martingale_diagnostic(trace: &Trace) -> Vec<f64> {
    let mut selected = 0u64;
    let mut sum = 0.0;
    let mut out = Vec::new();
    for r in trace.records().iter().filter(|r| r.selected) {
        selected += 1;
        sum += (r.outcome.get() as f64 - r.forecast.value()) / selected as f64;
        out.push(sum);
    }
    out
}

/// `(alpha, n_selected, n_hits)` for every forecast value that occurs in the trace.
pub fn calibration_curve(trace: &Trace) -> Vec<(Forecast, u64, u64)> {
    let mut counts: BTreeMap<Forecast, (u64, u64)> = BTreeMap::new();
    for r in trace.records() {
        let e = counts.entry(r.forecast).or_default();
        e.0 += 1;
        e.1 += r.outcome.get() as u64;
    }
    counts.into_iter().map(|(f, (n, h))| (f, n, h)).collect()
}
