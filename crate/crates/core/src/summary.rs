//! Experiment summaries: the JSON-facing view of an experiment's statistics.

use serde::{Deserialize, Serialize};

use crate::calibration::{martingale_diagnostic, CalibrationAccumulator, CalibrationReport, Z_999};
use crate::engine::ScenarioConfig;
use crate::error::{Error, Result};
use crate::grid::{Forecast, ProbabilityGrid};
use crate::inference::{
    analyze_alpha, assurance_check, detect_perversity, estimate_second_order, learnability_verdict,
    self_assurance, test_set_counts, AlphaAnalysis, AlphaStatus, CannotLearnReason,
    PerversityVerdict, Verdict,
};
use crate::record::{MoveOrder, Trace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSummary {
    pub grid: u32,
    pub alpha: f64,
    pub nature: String,
    pub forecaster: String,
    pub move_order: MoveOrder,
    pub rounds: u32,
    pub replications: u32,
    pub master_seed: u64,
    pub burn_in: u32,
    pub detection_window: u32,
    pub assurance_window: u32,
    /// Pooled over replications.
    pub calibration: CalibrationReport,
    pub expected_abs_deviation: Option<f64>,
    pub fraction_within_band: Option<f64>,
    pub martingale: MartingaleSummary,
    pub per_alpha: Vec<AlphaSummary>,
    pub second_order: Vec<SecondOrderSummary>,
    pub verdict: Option<VerdictSummary>,
    pub verdict_error: Option<String>,
    pub per_replication: Vec<ReplicationSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplicationSummary {
    pub index: u32,
    pub n_selected: u64,
    pub n_hits: u64,
    pub p_final: Option<f64>,
    pub abs_dev: Option<f64>,
    pub within_band: Option<bool>,
    pub deviations: Option<u64>,
    pub last_deviation: Option<u32>,
    pub perversity: String,
    pub self_assured: bool,
    pub assured_at: Option<u32>,
    pub martingale_final: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MartingaleSummary {
    pub replications: u32,
    pub mean_final: Option<f64>,
    pub std_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecondOrderSummary {
    pub t: u32,
    pub alpha: f64,
    pub fraction: f64,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSummary {
    pub alpha: f64,
    pub status: String,
    pub deviations: u64,
    pub last_deviation: Option<u32>,
    pub self_assured: bool,
    pub ever_assured: bool,
    pub assured_at: Option<u32>,
    pub deviations_after_assurance: u64,
    pub stopping_time: Option<u32>,
    pub population_size: u64,
    pub population_empirical: Option<f64>,
    pub learned_value: Option<f64>,
    pub win_rate: Option<f64>,
    pub mean_deviation_magnitude: Option<f64>,
    pub p_final: Option<f64>,
    pub abs_dev: Option<f64>,
}

impl AlphaSummary {
    pub fn from_analysis(a: &AlphaAnalysis, p_final: Option<f64>, abs_dev: Option<f64>) -> Self {
        Self {
            alpha: a.alpha.value(),
            status: status_str(a.status).into(),
            deviations: a.deviations,
            last_deviation: a.last_deviation,
            self_assured: a.self_assured,
            ever_assured: a.ever_assured,
            assured_at: a.assured_at,
            deviations_after_assurance: a.deviations_after_assurance,
            stopping_time: a.stopping_time,
            population_size: a.population_size,
            population_empirical: a.population_empirical,
            learned_value: a.learned_value.map(|f| f.value()),
            win_rate: a.win_rate,
            mean_deviation_magnitude: a.mean_deviation_magnitude,
            p_final,
            abs_dev,
        }
    }

    pub fn to_analysis(&self, grid: &ProbabilityGrid) -> Result<AlphaAnalysis> {
        let status = match self.status.as_str() {
            "persistent" => AlphaStatus::Persistent,
            "settled" => AlphaStatus::Settled,
            "insufficient_data" => AlphaStatus::InsufficientData,
            other => return Err(Error::Format(format!("unknown alpha status {other:?}"))),
        };
        Ok(AlphaAnalysis {
            alpha: grid.exact(self.alpha)?,
            status,
            deviations: self.deviations,
            last_deviation: self.last_deviation,
            self_assured: self.self_assured,
            ever_assured: self.ever_assured,
            assured_at: self.assured_at,
            deviations_after_assurance: self.deviations_after_assurance,
            stopping_time: self.stopping_time,
            population_size: self.population_size,
            population_empirical: self.population_empirical,
            learned_value: self.learned_value.map(|x| grid.exact(x)).transpose()?,
            win_rate: self.win_rate,
            mean_deviation_magnitude: self.mean_deviation_magnitude,
        })
    }
}

fn status_str(s: AlphaStatus) -> &'static str {
    match s {
        AlphaStatus::Persistent => "persistent",
        AlphaStatus::Settled => "settled",
        AlphaStatus::InsufficientData => "insufficient_data",
    }
}

/// `{kind, reason}` for CannotLearn, `{kind, alpha0, learned_value}` for CanLearn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictSummary {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learned_value: Option<f64>,
}

impl VerdictSummary {
    pub fn can_learn(&self) -> bool {
        self.kind == "CanLearn"
    }
}

impl From<Verdict> for VerdictSummary {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::CanLearn {
                alpha0,
                learned_value,
            } => Self {
                kind: "CanLearn".into(),
                reason: None,
                alpha0: Some(alpha0.value()),
                learned_value: Some(learned_value.value()),
            },
            Verdict::CannotLearn { reason } => Self {
                kind: "CannotLearn".into(),
                reason: Some(reason.as_str().into()),
                alpha0: None,
                learned_value: None,
            },
        }
    }
}

pub fn parse_reason(s: &str) -> Option<CannotLearnReason> {
    [
        CannotLearnReason::UniformPerversity,
        CannotLearnReason::NotSelfAssured,
        CannotLearnReason::FalseSelfAssurance,
    ]
    .into_iter()
    .find(|r| r.as_str() == s)
}

fn perversity_str(v: PerversityVerdict) -> &'static str {
    match v {
        PerversityVerdict::AtMostFinitelyOften => "at_most_finitely_often",
        PerversityVerdict::PersistentlyDeviating => "persistently_deviating",
    }
}

/// Pooled `p_T` and mean `|p_T - alpha|` for one alpha; `None` when any test set is empty.
pub fn alpha_rates(traces: &[Trace], alpha: Forecast) -> (Option<f64>, Option<f64>) {
    let mut selected = 0u64;
    let mut hits = 0u64;
    let mut abs_sum = 0.0;
    let mut all_nonempty = true;
    for trace in traces {
        let (n, h) = test_set_counts(trace, alpha);
        selected += n;
        hits += h;
        if n == 0 {
            all_nonempty = false;
        } else {
            abs_sum += (h as f64 / n as f64 - alpha.value()).abs();
        }
    }
    let pooled = (selected > 0).then(|| hits as f64 / selected as f64);
    let mean_abs = (all_nonempty && !traces.is_empty()).then(|| abs_sum / traces.len() as f64);
    (pooled, mean_abs)
}

pub fn summarize(config: &ScenarioConfig, traces: &[Trace]) -> Result<ExperimentSummary> {
    let alpha = config.assessed_alpha;

    let mut pooled = CalibrationAccumulator::new(alpha);
    let mut per_replication = Vec::with_capacity(traces.len());
    let mut finals = Vec::new();
    for trace in traces {
        let acc = CalibrationAccumulator::from_trace(trace, alpha)?;
        pooled = pooled.merge(acc)?;
        let rep = acc.report(Z_999);
        let (deviations, last_deviation, perversity, self_assured) =
            match detect_perversity(trace, alpha, config.burn_in, config.detection_window) {
                Ok(r) => (
                    Some(r.deviation_count_post_burn_in),
                    r.last_deviation_time,
                    perversity_str(r.verdict),
                    self_assurance(&r, config.assurance_window),
                ),
                Err(Error::InsufficientData { .. }) => (None, None, "insufficient_data", false),
                Err(e) => return Err(e),
            };
        let martingale_final = martingale_diagnostic(trace).last().copied();
        finals.extend(martingale_final);
        per_replication.push(ReplicationSummary {
            index: trace.replication_index,
            n_selected: acc.n_selected(),
            n_hits: acc.n_hits(),
            p_final: rep.p_final,
            abs_dev: rep.abs_dev,
            within_band: rep.within_band,
            deviations,
            last_deviation,
            perversity: perversity.into(),
            self_assured,
            assured_at: assurance_check(trace, alpha, config.burn_in, config.assurance_window)
                .assured_at,
            martingale_final,
        });
    }

    let (p_final, abs_dev) = alpha_rates(traces, alpha);
    let within: Vec<bool> = per_replication
        .iter()
        .filter_map(|r| r.within_band)
        .collect();
    let fraction_within_band = (within.len() == traces.len() && !traces.is_empty())
        .then(|| within.iter().filter(|&&b| b).count() as f64 / within.len() as f64);

    let analysis = analyze_alpha(
        traces,
        alpha,
        config.burn_in,
        config.detection_window,
        config.assurance_window,
    )?;
    let (verdict, verdict_error) = match learnability_verdict(std::slice::from_ref(&analysis)) {
        Ok(v) => (Some(v.into()), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let second_order = config
        .second_order_times()
        .into_iter()
        .map(|t| {
            estimate_second_order(traces, t, alpha).map(|e| SecondOrderSummary {
                t,
                alpha: alpha.value(),
                fraction: e.fraction,
                class: e.classification.as_str().into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentSummary {
        grid: config.grid.resolution(),
        alpha: alpha.value(),
        nature: config.nature.name().into(),
        forecaster: config.forecaster.name().into(),
        move_order: config.move_order,
        rounds: config.rounds,
        replications: config.replications,
        master_seed: config.master_seed,
        burn_in: config.burn_in,
        detection_window: config.detection_window,
        assurance_window: config.assurance_window,
        calibration: pooled.report(Z_999),
        expected_abs_deviation: abs_dev,
        fraction_within_band,
        martingale: martingale_summary(&finals),
        per_alpha: vec![AlphaSummary::from_analysis(&analysis, p_final, abs_dev)],
        second_order,
        verdict,
        verdict_error,
        per_replication,
    })
}

fn martingale_summary(finals: &[f64]) -> MartingaleSummary {
    let n = finals.len();
    let mean = (n > 0).then(|| finals.iter().sum::<f64>() / n as f64);
    let std_error = mean.filter(|_| n > 1).map(|m| {
        let var = finals.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    });
    MartingaleSummary {
        replications: n as u32,
        mean_final: mean,
        std_error,
    }
}
