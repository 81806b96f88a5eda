//! The weather-report demonstration.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use serde::Serialize;

use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::loss::report_loss;
use crate::model::{Report, ReportSequence, Summary};
use crate::numerics::stream_rng;
use crate::summarizers::{known_p_summarize, mu, universal_summarize};

pub const WEATHER_FIXTURE: &str = include_str!("../../fixtures/weather.json");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventMark {
    pub event: String,
    pub occurred: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoSummary {
    pub method: String,
    pub j: usize,
    pub events: Vec<EventMark>,
    /// Expected loss for the known-distribution summary, `μ` for the universal one.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemoOutput {
    pub report: Vec<EventMark>,
    pub history_len: usize,
    pub seed: u64,
    pub summaries: Vec<DemoSummary>,
}

fn marks(scenario: &Scenario, summary: &Summary) -> Vec<EventMark> {
    summary
        .entries()
        .map(|(event, occurred)| EventMark {
            event: scenario.event_name(event),
            occurred,
        })
        .collect()
}

/// Known-distribution and universal summaries of the scenario's report for
/// `j` and `j + 1` events. The universal summarizer sees `n - 1` past reports
/// drawn from the scenario distribution.
pub fn run_demo(scenario: &Scenario, seed: u64) -> Result<DemoOutput> {
    let alphabet = scenario.alphabet()?;
    let p = scenario.distribution()?;
    let u = scenario.weights()?;
    let x = scenario
        .report()?
        .ok_or_else(|| Error::Config("the demo needs a report".into()))?;
    let n = scenario.n.unwrap_or(1);

    let index = WeightedIndex::new(p.probs()).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = stream_rng(seed, 0);
    let mut reports = vec![x];
    reports.extend((1..n).map(|_| Report::from_mask(index.sample(&mut rng) as u32)));
    let sequence = ReportSequence::new(alphabet, reports)?;

    let everything = Summary::of_report(x, alphabet.full_mask());
    let mut summaries = Vec::new();
    for j in [scenario.j, scenario.j + 1] {
        if j > alphabet.events() as usize {
            continue;
        }
        let known = known_p_summarize(&p, x, j, &u)?;
        summaries.push(DemoSummary {
            method: "known distribution".into(),
            j,
            events: marks(scenario, &known),
            score: report_loss(&p, x, &known, &u)?,
        });
        let universal = universal_summarize(&sequence, j, &u)?;
        summaries.push(DemoSummary {
            method: format!("universal, {} past reports", n - 1),
            j,
            events: marks(scenario, &universal),
            score: crate::scalar::Scalar::as_f64(&mu(&sequence, j, &u)?),
        });
    }
    Ok(DemoOutput {
        report: marks(scenario, &everything),
        history_len: n - 1,
        seed,
        summaries,
    })
}

/// [`run_demo`] on the bundled weather fixture.
pub fn weather_demo() -> Result<DemoOutput> {
    let scenario = Scenario::from_json(WEATHER_FIXTURE)?;
    let seed = scenario.seed.unwrap_or(0);
    run_demo(&scenario, seed)
}

fn write_marks(f: &mut fmt::Formatter<'_>, marks: &[EventMark]) -> fmt::Result {
    for m in marks {
        writeln!(f, "    {:<16} {}", m.event, if m.occurred { "yes" } else { "no" })?;
    }
    Ok(())
}

impl fmt::Display for DemoOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Report:")?;
        write_marks(f, &self.report)?;
        for s in &self.summaries {
            writeln!(f)?;
            writeln!(f, "{} (j = {}, score {:.4}):", s.method, s.j, s.score)?;
            write_marks(f, &s.events)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(s: &DemoSummary) -> Vec<&str> {
        s.events.iter().map(|m| m.event.as_str()).collect()
    }

    #[test]
    fn weather_summaries() {
        let demo = weather_demo().unwrap();
        assert_eq!(demo.report.len(), 7);
        assert_eq!(demo.summaries.len(), 4);
        for s in &demo.summaries {
            assert_eq!(s.events.len(), s.j);
        }
        assert_eq!(names(&demo.summaries[0]), ["High UV index", "Typhoon"]);
        assert_eq!(names(&demo.summaries[2]), ["High UV index", "Smog", "Typhoon"]);
        assert!(demo.summaries.iter().all(|s| names(s).contains(&"Typhoon")));
        assert!(!demo.summaries[2].events[1].occurred);
    }

    #[test]
    fn demo_is_reproducible() {
        let a = weather_demo().unwrap();
        let b = weather_demo().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }
}
