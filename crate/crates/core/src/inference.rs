//! Estimators and detectors over sets of traces.
//!
//! Infinite-horizon notions are replaced by horizon-relative proxies:
//! "deviates infinitely often" means a deviation inside the final
//! `window` selected rounds, and self-assurance means a deviation-free run of
//! at least `w_min` selected rounds. These are finite evidence, not the
//! almost-sure statements themselves.

use crate::error::{Error, Result};
use crate::grid::Forecast;
use crate::record::{Outcome, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SecondOrderClass {
    /// `P(P_t = alpha) ~ 1`: the machine sees Nature's move before its own.
    NatureFirstLike,
    /// Strictly between 0 and 1: neither player sees the other's move.
    Interior,
    /// `P(P_t = alpha) ~ 0`: Nature sees the forecast and avoids it.
    MachineFirstPerverseLike,
}

impl SecondOrderClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SecondOrderClass::NatureFirstLike => "nature_first_like",
            SecondOrderClass::Interior => "interior",
            SecondOrderClass::MachineFirstPerverseLike => "machine_first_perverse_like",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderThresholds {
    /// Fractions at or above this are classed as ~1.
    pub upper: f64,
    /// Fractions at or below this are classed as ~0.
    pub lower: f64,
}

impl SecondOrderThresholds {
    /// `1 - 1/(2R)` and `1/(2R)`: with `R` replications only exact 0 and 1 pass.
    pub fn for_replications(r: usize) -> Self {
        let half_step = 1.0 / (2.0 * r.max(1) as f64);
        Self {
            upper: 1.0 - half_step,
            lower: half_step,
        }
    }

    pub fn classify(&self, fraction: f64) -> SecondOrderClass {
        if fraction >= self.upper {
            SecondOrderClass::NatureFirstLike
        } else if fraction <= self.lower {
            SecondOrderClass::MachineFirstPerverseLike
        } else {
            SecondOrderClass::Interior
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderEstimate {
    pub t: u32,
    pub alpha: Forecast,
    pub fraction: f64,
    pub classification: SecondOrderClass,
}

/// Share of replications whose true probability at round `t` equals `alpha`.
pub fn estimate_second_order(
    traces: &[Trace],
    t: u32,
    alpha: Forecast,
) -> Result<SecondOrderEstimate> {
    estimate_second_order_with(
        traces,
        t,
        alpha,
        SecondOrderThresholds::for_replications(traces.len()),
    )
}

pub fn estimate_second_order_with(
    traces: &[Trace],
    t: u32,
    alpha: Forecast,
    thresholds: SecondOrderThresholds,
) -> Result<SecondOrderEstimate> {
    if traces.is_empty() {
        return Err(Error::Integrity(
            "second-order estimate over zero traces".into(),
        ));
    }
    let mut hits = 0usize;
    for trace in traces {
        let rec = trace
            .records()
            .get(t as usize)
            .ok_or(Error::RoundOutOfRange {
                t,
                len: trace.len(),
            })?;
        hits += (rec.true_prob == alpha) as usize;
    }
    let fraction = hits as f64 / traces.len() as f64;
    Ok(SecondOrderEstimate {
        t,
        alpha,
        fraction,
        classification: thresholds.classify(fraction),
    })
}

/// `(selected, hits)` over the rounds whose forecast equals `alpha`.
pub fn test_set_counts(trace: &Trace, alpha: Forecast) -> (u64, u64) {
    trace
        .records()
        .iter()
        .filter(|r| r.forecast == alpha)
        .fold((0, 0), |(n, h), r| (n + 1, h + r.outcome.get() as u64))
}

/// Final test-set hit rate `p_T` of one trace.
pub fn final_rate(trace: &Trace, alpha: Forecast) -> Result<f64> {
    match test_set_counts(trace, alpha) {
        (0, _) => Err(Error::EmptyTestSetIn {
            replication: trace.replication_index,
        }),
        (n, h) => Ok(h as f64 / n as f64),
    }
}

/// Mean over replications of `|p_T - alpha|`.
pub fn expected_abs_deviation(traces: &[Trace], alpha: Forecast) -> Result<f64> {
    if traces.is_empty() {
        return Err(Error::Integrity(
            "expected deviation over zero traces".into(),
        ));
    }
    let total = traces
        .iter()
        .map(|t| final_rate(t, alpha).map(|p| (p - alpha.value()).abs()))
        .sum::<Result<f64>>()?;
    Ok(total / traces.len() as f64)
}

/// Share of replications with `|p_T - alpha| <= halfwidth`.
pub fn fraction_within_band(traces: &[Trace], alpha: Forecast, halfwidth: f64) -> Result<f64> {
    if traces.is_empty() {
        return Err(Error::Integrity("band fraction over zero traces".into()));
    }
    let mut inside = 0usize;
    for t in traces {
        inside += ((final_rate(t, alpha)? - alpha.value()).abs() <= halfwidth) as usize;
    }
    Ok(inside as f64 / traces.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerversityVerdict {
    /// No deviation inside the final window.
    AtMostFinitelyOften,
    PersistentlyDeviating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerversityReport {
    pub alpha: Forecast,
    pub deviation_count_post_burn_in: u64,
    pub last_deviation_time: Option<u32>,
    pub verdict: PerversityVerdict,
    /// Selected rounds since the last deviation.
    pub trailing_quiet: u64,
    pub window: u32,
    pub selected_post_burn_in: u64,
    /// Mean `|P_t - alpha|` over deviations.
    pub mean_deviation_magnitude: Option<f64>,
}

/// Counts test-set rounds after `burn_in` where Nature's move differs from `alpha`.
pub fn detect_perversity(
    trace: &Trace,
    alpha: Forecast,
    burn_in: u32,
    window: u32,
) -> Result<PerversityReport> {
    let horizon = trace.len() as u64;
    if window == 0 || window as u64 > horizon.saturating_sub(burn_in as u64) {
        return Err(Error::Config(format!(
            "window {window} must lie in 1..={} (rounds {horizon}, burn-in {burn_in})",
            horizon.saturating_sub(burn_in as u64)
        )));
    }
    let mut selected = 0u64;
    let mut deviations = 0u64;
    let mut last = None;
    let mut quiet = 0u64;
    let mut magnitude = 0.0;
    for r in trace.records().iter().skip(burn_in as usize) {
        if r.forecast != alpha {
            continue;
        }
        selected += 1;
        if r.true_prob != alpha {
            deviations += 1;
            last = Some(r.t);
            quiet = 0;
            magnitude += (r.true_prob.value() - alpha.value()).abs();
        } else {
            quiet += 1;
        }
    }
    if selected < window as u64 {
        return Err(Error::InsufficientData {
            needed: window as u64,
            have: selected,
        });
    }
    Ok(PerversityReport {
        alpha,
        deviation_count_post_burn_in: deviations,
        last_deviation_time: last,
        verdict: if quiet >= window as u64 {
            PerversityVerdict::AtMostFinitelyOften
        } else {
            PerversityVerdict::PersistentlyDeviating
        },
        trailing_quiet: quiet,
        window,
        selected_post_burn_in: selected,
        mean_deviation_magnitude: (deviations > 0).then(|| magnitude / deviations as f64),
    })
}

/// Estimated stopping time: one past the last test-set deviation, maximized
/// over replications. `None` if any replication still deviates inside its
/// final `window` selected rounds.
pub fn estimate_stopping_time(traces: &[Trace], alpha0: Forecast, window: u32) -> Option<u32> {
    if traces.is_empty() {
        return None;
    }
    let mut estimate = 0u32;
    for trace in traces {
        let mut last = None;
        let mut quiet = 0u64;
        for r in trace.records().iter().filter(|r| r.forecast == alpha0) {
            if r.true_prob != alpha0 {
                last = Some(r.t);
                quiet = 0;
            } else {
                quiet += 1;
            }
        }
        if let Some(t) = last {
            if quiet < window as u64 {
                return None;
            }
            estimate = estimate.max(t + 1);
        }
    }
    Some(estimate)
}

/// The machine is self-assured once the test set has been deviation-free for `w_min` selected rounds.
pub fn self_assurance(report: &PerversityReport, w_min: u32) -> bool {
    report.verdict == PerversityVerdict::AtMostFinitelyOften
        && report.trailing_quiet >= w_min as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssuranceReport {
    /// First round at which the deviation-free run reached `w_min`.
    pub assured_at: Option<u32>,
    /// Test-set deviations after `assured_at`.
    pub deviations_after: u64,
}

/// Replays the self-assurance rule along the trace and checks it against what followed.
pub fn assurance_check(
    trace: &Trace,
    alpha: Forecast,
    burn_in: u32,
    w_min: u32,
) -> AssuranceReport {
    let mut quiet = 0u64;
    let mut assured_at = None;
    let mut after = 0u64;
    for r in trace.records().iter().skip(burn_in as usize) {
        if r.forecast != alpha {
            continue;
        }
        let deviated = r.true_prob != alpha;
        if assured_at.is_some() {
            after += deviated as u64;
            continue;
        }
        if deviated {
            quiet = 0;
        } else {
            quiet += 1;
            if quiet >= w_min as u64 {
                assured_at = Some(r.t);
            }
        }
    }
    AssuranceReport {
        assured_at,
        deviations_after: after,
    }
}

/// Empirical frequency of the event in a population of indicators.
pub fn population_empirical(outcomes: &[Outcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let ones: u64 = outcomes.iter().map(|y| y.get() as u64).sum();
    Ok(ones as f64 / outcomes.len() as f64)
}

/// Outcomes of test-set rounds at or after `from`, pooled over replications.
pub fn population_after(traces: &[Trace], alpha: Forecast, from: u32) -> Vec<Outcome> {
    traces
        .iter()
        .flat_map(|t| t.records().iter().skip(from as usize))
        .filter(|r| r.forecast == alpha)
        .map(|r| r.outcome)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinningReport {
    /// Fraction of test-set rounds in which the forecast matched Nature's move.
    pub win_rate: f64,
    pub wins: u64,
    pub deviations: u64,
    pub verdict: PerversityVerdict,
}

/// Win rate next to the perversity verdict: frequent wins need not mean the
/// machine has learned anything.
pub fn winning_vs_learning_demo(
    trace: &Trace,
    alpha: Forecast,
    burn_in: u32,
    window: u32,
) -> Result<WinningReport> {
    let report = detect_perversity(trace, alpha, burn_in, window)?;
    let wins = report.selected_post_burn_in - report.deviation_count_post_burn_in;
    Ok(WinningReport {
        win_rate: wins as f64 / report.selected_post_burn_in as f64,
        wins,
        deviations: report.deviation_count_post_burn_in,
        verdict: report.verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlphaStatus {
    Persistent,
    Settled,
    InsufficientData,
}

/// Everything the learnability verdict needs to know about one assessed forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaAnalysis {
    pub alpha: Forecast,
    pub status: AlphaStatus,
    pub deviations: u64,
    pub last_deviation: Option<u32>,
    /// Every replication is self-assured at the horizon.
    pub self_assured: bool,
    /// Some replication became self-assured somewhere along its path.
    pub ever_assured: bool,
    pub assured_at: Option<u32>,
    pub deviations_after_assurance: u64,
    pub stopping_time: Option<u32>,
    pub population_size: u64,
    pub population_empirical: Option<f64>,
    pub learned_value: Option<Forecast>,
    pub win_rate: Option<f64>,
    pub mean_deviation_magnitude: Option<f64>,
}

/// Folds the per-replication detectors for one alpha into an [`AlphaAnalysis`].
pub fn analyze_alpha(
    traces: &[Trace],
    alpha: Forecast,
    burn_in: u32,
    window: u32,
    w_min: u32,
) -> Result<AlphaAnalysis> {
    if traces.is_empty() {
        return Err(Error::Integrity("analysis over zero traces".into()));
    }
    let mut status = AlphaStatus::Settled;
    let mut self_assured = true;
    let mut deviations = 0u64;
    let mut last_deviation: Option<u32> = None;
    let mut selected = 0u64;
    let mut magnitude = 0.0;
    for trace in traces {
        match detect_perversity(trace, alpha, burn_in, window) {
            Ok(report) => {
                if report.verdict == PerversityVerdict::PersistentlyDeviating
                    && status == AlphaStatus::Settled
                {
                    status = AlphaStatus::Persistent;
                }
                self_assured &= self_assurance(&report, w_min);
                deviations += report.deviation_count_post_burn_in;
                selected += report.selected_post_burn_in;
                last_deviation = last_deviation.max(report.last_deviation_time);
                magnitude += report.mean_deviation_magnitude.unwrap_or(0.0)
                    * report.deviation_count_post_burn_in as f64;
            }
            Err(Error::InsufficientData { .. }) => {
                status = AlphaStatus::InsufficientData;
                self_assured = false;
            }
            Err(e) => return Err(e),
        }
    }
    if status != AlphaStatus::Settled {
        self_assured = false;
    }

    let checks: Vec<AssuranceReport> = traces
        .iter()
        .map(|t| assurance_check(t, alpha, burn_in, w_min))
        .collect();
    let ever_assured = checks.iter().any(|c| c.assured_at.is_some());
    let assured_at = checks.iter().filter_map(|c| c.assured_at).max();
    let deviations_after_assurance = checks.iter().map(|c| c.deviations_after).sum();

    let stopping_time = estimate_stopping_time(traces, alpha, window);
    let population = stopping_time
        .map(|ts| population_after(traces, alpha, ts))
        .unwrap_or_default();
    let population_empirical = population_empirical(&population).ok();
    let learned_value = population_empirical
        .map(|p| alpha.grid().snap(p))
        .transpose()?;

    Ok(AlphaAnalysis {
        alpha,
        status,
        deviations,
        last_deviation,
        self_assured,
        ever_assured,
        assured_at,
        deviations_after_assurance,
        stopping_time,
        population_size: population.len() as u64,
        population_empirical,
        learned_value,
        win_rate: (status != AlphaStatus::InsufficientData && selected > 0)
            .then(|| (selected - deviations) as f64 / selected as f64),
        mean_deviation_magnitude: (deviations > 0).then(|| magnitude / deviations as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CannotLearnReason {
    UniformPerversity,
    NotSelfAssured,
    FalseSelfAssurance,
}

impl CannotLearnReason {
    pub fn as_str(self) -> &'static str {
        match self {
            CannotLearnReason::UniformPerversity => "UniformPerversity",
            CannotLearnReason::NotSelfAssured => "NotSelfAssured",
            CannotLearnReason::FalseSelfAssurance => "FalseSelfAssurance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    CanLearn {
        alpha0: Forecast,
        learned_value: Forecast,
    },
    CannotLearn {
        reason: CannotLearnReason,
    },
}

/// Walks the learnability decision tree over per-alpha analyses.
///
/// 1. Every alpha deviates persistently and none ever settled: uniform perversity.
/// 2. Some alpha looked settled long enough for assurance, then deviated again: false assurance.
/// 3. Some alpha is settled and the machine is assured of it: it can learn, and the
///    population after the estimated stopping time must reproduce that alpha.
/// 4. Otherwise some alpha settled but assurance never came.
pub fn learnability_verdict(analyses: &[AlphaAnalysis]) -> Result<Verdict> {
    if analyses.is_empty() {
        return Err(Error::Integrity("verdict over zero analyses".into()));
    }
    for (i, a) in analyses.iter().enumerate() {
        if analyses[..i].iter().any(|b| b.alpha == a.alpha) {
            return Err(Error::Integrity(format!(
                "alpha {} analysed twice",
                a.alpha
            )));
        }
        if a.self_assured && a.status != AlphaStatus::Settled {
            return Err(Error::Integrity(format!(
                "alpha {} is both self-assured and {:?}",
                a.alpha, a.status
            )));
        }
        if a.deviations_after_assurance > 0 && !a.ever_assured {
            return Err(Error::Integrity(format!(
                "alpha {} has post-assurance deviations without an assurance point",
                a.alpha
            )));
        }
    }
    let usable: Vec<&AlphaAnalysis> = analyses
        .iter()
        .filter(|a| a.status != AlphaStatus::InsufficientData)
        .collect();
    if usable.is_empty() {
        return Err(Error::Integrity(
            "no alpha has enough selected rounds".into(),
        ));
    }

    if usable
        .iter()
        .all(|a| a.status == AlphaStatus::Persistent && !a.ever_assured)
    {
        return Ok(Verdict::CannotLearn {
            reason: CannotLearnReason::UniformPerversity,
        });
    }
    if usable
        .iter()
        .any(|a| a.ever_assured && a.deviations_after_assurance > 0)
    {
        return Ok(Verdict::CannotLearn {
            reason: CannotLearnReason::FalseSelfAssurance,
        });
    }
    if let Some(a) = usable.iter().find(|a| a.self_assured) {
        let learned = a.learned_value.ok_or_else(|| {
            Error::Integrity(format!(
                "alpha {} assured without a post-stopping population",
                a.alpha
            ))
        })?;
        if learned != a.alpha {
            return Err(Error::Integrity(format!(
                "learned value {learned} differs from the settled forecast {}",
                a.alpha
            )));
        }
        return Ok(Verdict::CanLearn {
            alpha0: a.alpha,
            learned_value: learned,
        });
    }
    Ok(Verdict::CannotLearn {
        reason: CannotLearnReason::NotSelfAssured,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ProbabilityGrid;
    use crate::record::{MoveOrder, RoundRecord};

    fn g() -> ProbabilityGrid {
        ProbabilityGrid::new(11).unwrap()
    }

    fn f(x: f64) -> Forecast {
        g().exact(x).unwrap()
    }

    /// Constant forecast `alpha`; `deviate[t]` decides whether Nature moved to 0.8.
    fn scripted(alpha: f64, deviate: &[bool], y: impl Fn(usize) -> u8) -> Trace {
        let mut trace = Trace::new(0, 0);
        for (t, &d) in deviate.iter().enumerate() {
            trace
                .push(RoundRecord {
                    t: t as u32,
                    forecast: f(alpha),
                    true_prob: if d { f(0.8) } else { f(alpha) },
                    outcome: Outcome::from_indicator(y(t)).unwrap(),
                    selected: true,
                    move_order: MoveOrder::MachineFirst,
                })
                .unwrap();
        }
        trace
    }

    #[test]
    fn second_order_classes() {
        let th = SecondOrderThresholds::for_replications(10);
        assert_eq!(th.classify(1.0), SecondOrderClass::NatureFirstLike);
        assert_eq!(th.classify(0.9), SecondOrderClass::Interior);
        assert_eq!(th.classify(0.1), SecondOrderClass::Interior);
        assert_eq!(th.classify(0.0), SecondOrderClass::MachineFirstPerverseLike);

        let always = scripted(0.3, &[false; 5], |_| 0);
        let never = scripted(0.3, &[true; 5], |_| 0);
        let est = estimate_second_order(&[always.clone(), never], 2, f(0.3)).unwrap();
        assert_eq!(est.fraction, 0.5);
        assert_eq!(est.classification, SecondOrderClass::Interior);
        assert!(matches!(
            estimate_second_order(&[always], 9, f(0.3)),
            Err(Error::RoundOutOfRange { t: 9, len: 5 })
        ));
    }

    #[test]
    fn perversity_and_stopping_time() {
        let mut dev = vec![false; 100];
        dev[10] = true;
        dev[40] = true;
        let trace = scripted(0.3, &dev, |_| 0);
        let r = detect_perversity(&trace, f(0.3), 0, 50).unwrap();
        assert_eq!(r.deviation_count_post_burn_in, 2);
        assert_eq!(r.last_deviation_time, Some(40));
        assert_eq!(r.verdict, PerversityVerdict::AtMostFinitelyOften);
        assert_eq!(r.trailing_quiet, 59);
        assert!((r.mean_deviation_magnitude.unwrap() - 0.5).abs() < 1e-12);
        assert!(self_assurance(&r, 59));
        assert!(!self_assurance(&r, 60));

        let late = detect_perversity(&trace, f(0.3), 0, 60).unwrap();
        assert_eq!(late.verdict, PerversityVerdict::PersistentlyDeviating);
        assert!(!self_assurance(&late, 10));

        let burned = detect_perversity(&trace, f(0.3), 41, 50).unwrap();
        assert_eq!(burned.deviation_count_post_burn_in, 0);
        assert_eq!(burned.last_deviation_time, None);

        assert_eq!(
            estimate_stopping_time(std::slice::from_ref(&trace), f(0.3), 50),
            Some(41)
        );
        assert_eq!(estimate_stopping_time(std::slice::from_ref(&trace), f(0.3), 60), None);
        let clean = scripted(0.3, &[false; 100], |_| 0);
        assert_eq!(
            estimate_stopping_time(&[clean, trace], f(0.3), 50),
            Some(41)
        );
    }

    #[test]
    fn perversity_errors() {
        let trace = scripted(0.3, &[false; 10], |_| 0);
        assert!(matches!(
            detect_perversity(&trace, f(0.3), 5, 6),
            Err(Error::Config(_))
        ));
        assert_eq!(
            detect_perversity(&trace, f(0.4), 0, 5),
            Err(Error::InsufficientData { needed: 5, have: 0 })
        );
    }

    #[test]
    fn assurance_replay() {
        // quiet 0..20, deviation at 20, quiet after
        let mut dev = vec![false; 60];
        dev[20] = true;
        let trace = scripted(0.3, &dev, |_| 0);
        let early = assurance_check(&trace, f(0.3), 0, 10);
        assert_eq!(early.assured_at, Some(9));
        assert_eq!(early.deviations_after, 1);
        let late = assurance_check(&trace, f(0.3), 0, 30);
        assert_eq!(late.assured_at, Some(50));
        assert_eq!(late.deviations_after, 0);
    }

    #[test]
    fn population() {
        let ys = [1, 0, 1, 1].map(|y| Outcome::from_indicator(y).unwrap());
        assert_eq!(population_empirical(&ys).unwrap(), 0.75);
        assert_eq!(population_empirical(&[Outcome::ZERO; 7]).unwrap(), 0.0);
        assert_eq!(population_empirical(&[]), Err(Error::EmptyPopulation));
    }

    #[test]
    fn abs_deviation() {
        let ones = scripted(1.0, &[false; 20], |_| 1);
        assert_eq!(
            expected_abs_deviation(std::slice::from_ref(&ones), f(1.0)).unwrap(),
            0.0
        );
        let mut other = ones.clone();
        other.replication_index = 7;
        assert_eq!(
            expected_abs_deviation(&[ones, other], f(0.5)),
            Err(Error::EmptyTestSetIn { replication: 0 })
        );
    }

    #[test]
    fn winning_report() {
        let dev: Vec<bool> = (0..100).map(|t| t % 2 == 0).collect();
        let trace = scripted(0.3, &dev, |_| 0);
        let w = winning_vs_learning_demo(&trace, f(0.3), 0, 10).unwrap();
        assert_eq!(w.win_rate, 0.5);
        assert_eq!(w.verdict, PerversityVerdict::PersistentlyDeviating);
    }

    fn analysis(alpha: f64, status: AlphaStatus) -> AlphaAnalysis {
        AlphaAnalysis {
            alpha: f(alpha),
            status,
            deviations: 0,
            last_deviation: None,
            self_assured: false,
            ever_assured: false,
            assured_at: None,
            deviations_after_assurance: 0,
            stopping_time: None,
            population_size: 0,
            population_empirical: None,
            learned_value: None,
            win_rate: None,
            mean_deviation_magnitude: None,
        }
    }

    #[test]
    fn verdict_tree() {
        use AlphaStatus::*;
        let uniform = vec![analysis(0.1, Persistent), analysis(0.3, Persistent)];
        assert_eq!(
            learnability_verdict(&uniform).unwrap(),
            Verdict::CannotLearn {
                reason: CannotLearnReason::UniformPerversity
            }
        );

        let not_assured = vec![analysis(0.1, Persistent), analysis(0.3, Settled)];
        assert_eq!(
            learnability_verdict(&not_assured).unwrap(),
            Verdict::CannotLearn {
                reason: CannotLearnReason::NotSelfAssured
            }
        );

        let mut learned = analysis(0.3, Settled);
        learned.self_assured = true;
        learned.ever_assured = true;
        learned.learned_value = Some(f(0.3));
        assert_eq!(
            learnability_verdict(&[analysis(0.1, Persistent), learned.clone()]).unwrap(),
            Verdict::CanLearn {
                alpha0: f(0.3),
                learned_value: f(0.3)
            }
        );

        let mut fooled = learned.clone();
        fooled.deviations_after_assurance = 3;
        assert_eq!(
            learnability_verdict(&[fooled]).unwrap(),
            Verdict::CannotLearn {
                reason: CannotLearnReason::FalseSelfAssurance
            }
        );

        let mut wrong = learned.clone();
        wrong.learned_value = Some(f(0.4));
        assert!(matches!(
            learnability_verdict(&[wrong]),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn verdict_integrity() {
        let mut conflicted = analysis(0.3, AlphaStatus::Persistent);
        conflicted.self_assured = true;
        assert!(matches!(
            learnability_verdict(&[conflicted]),
            Err(Error::Integrity(_))
        ));
        let dup = vec![
            analysis(0.3, AlphaStatus::Persistent),
            analysis(0.3, AlphaStatus::Persistent),
        ];
        assert!(learnability_verdict(&dup).is_err());
        assert!(learnability_verdict(&[]).is_err());
        assert!(learnability_verdict(&[analysis(0.3, AlphaStatus::InsufficientData)]).is_err());
    }
}
