//! JSON scenario files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::ReportDistribution;
use crate::model::{Alphabet, Report, ReportSequence, ReportSet, SemanticWeights};

pub const SCHEMA_VERSION: u32 = 1;

const EXPLICIT_SUM_TOLERANCE: f64 = 1e-9;

/// A report written either as a mask or as one 0/1 flag per event, event 1 first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReportSpec {
    Mask(u32),
    Flags(Vec<u8>),
}

impl ReportSpec {
    pub fn resolve(&self, alphabet: Alphabet) -> Result<Report> {
        match self {
            ReportSpec::Mask(m) => alphabet.report(*m),
            ReportSpec::Flags(flags) => {
                if flags.len() != alphabet.events() as usize {
                    return Err(Error::Config(format!(
                        "report has {} flags, expected {}",
                        flags.len(),
                        alphabet.events()
                    )));
                }
                let mut mask = 0;
                for (bit, &f) in flags.iter().enumerate() {
                    match f {
                        0 => {}
                        1 => mask |= 1 << bit,
                        other => {
                            return Err(Error::Config(format!("report flag must be 0 or 1, got {other}")))
                        }
                    }
                }
                alphabet.report(mask)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureComponent {
    pub weight: f64,
    pub marginals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    #[default]
    Uniform,
    Explicit { probs: Vec<f64> },
    Product { marginals: Vec<f64> },
    Mixture { components: Vec<MixtureComponent> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntrySpec {
    pub report: ReportSpec,
    pub set: Vec<ReportSpec>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightsSpec {
    #[default]
    Identification,
    PerEvent { weights: Vec<f64> },
    Explicit { entries: Vec<WeightEntrySpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Loss,
    Summarize,
    Universal,
    AvgLoss,
    Mc,
    Converge,
    Verify,
    Demo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyLevel {
    #[default]
    Quick,
    Full,
}

/// An experiment configuration.
///
/// `report` is the current report `x(1)`; `history` holds `x(2), ..., x(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub v: u8,
    #[serde(default = "default_j")]
    pub j: usize,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub distribution: DistributionSpec,
    #[serde(default)]
    pub weights: WeightsSpec,
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub report: Option<ReportSpec>,
    #[serde(default)]
    pub history: Vec<ReportSpec>,
    #[serde(default)]
    pub n_grid: Option<Vec<usize>>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub level: Option<VerifyLevel>,
    #[serde(default)]
    pub event_names: Option<Vec<String>>,
}

fn default_j() -> usize {
    1
}

impl Scenario {
    /// A bare scenario over `v` events with uniform `p` and identification weights.
    pub fn new(v: u8) -> Self {
        Scenario {
            schema: SCHEMA_VERSION,
            description: None,
            v,
            j: 1,
            n: None,
            distribution: DistributionSpec::Uniform,
            weights: WeightsSpec::Identification,
            experiment: None,
            samples: None,
            seed: None,
            tolerance: None,
            report: None,
            history: Vec::new(),
            n_grid: None,
            trials: None,
            level: None,
            event_names: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(Error::from)
    }

    /// Checks every field that can be checked without running anything.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        let alphabet = self.alphabet()?;
        if self.j == 0 || self.j > self.v as usize {
            return Err(Error::Config(format!("j must lie in 1..={}, got {}", self.v, self.j)));
        }
        if self.n == Some(0) {
            return Err(Error::Config("n must be at least 1".into()));
        }
        self.distribution().map_err(into_config)?;
        self.weights().map_err(into_config)?;
        if let Some(r) = &self.report {
            r.resolve(alphabet).map_err(into_config)?;
        }
        for r in &self.history {
            r.resolve(alphabet).map_err(into_config)?;
        }
        if let Some(grid) = &self.n_grid {
            if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Config("n_grid must be non-empty, positive and strictly ascending".into()));
            }
        }
        if let Some(tol) = self.tolerance {
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(Error::Config(format!("tolerance must be finite and >= 0, got {tol}")));
            }
        }
        if let Some(names) = &self.event_names {
            if names.len() != self.v as usize {
                return Err(Error::Config(format!(
                    "expected {} event names, got {}",
                    self.v,
                    names.len()
                )));
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        Alphabet::new(self.v).map_err(into_config)
    }

    pub fn distribution(&self) -> Result<ReportDistribution<f64>> {
        let alphabet = self.alphabet()?;
        let p = match &self.distribution {
            DistributionSpec::Uniform => ReportDistribution::uniform(alphabet),
            DistributionSpec::Explicit { probs } => {
                if probs.len() != alphabet.size() {
                    return Err(Error::Config(format!(
                        "explicit distribution needs {} entries, got {}",
                        alphabet.size(),
                        probs.len()
                    )));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > EXPLICIT_SUM_TOLERANCE {
                    return Err(Error::Config(format!("explicit distribution sums to {total}, not 1")));
                }
                ReportDistribution::from_weights(alphabet, probs.clone())?
            }
            DistributionSpec::Product { marginals } => ReportDistribution::product(alphabet, marginals)?,
            DistributionSpec::Mixture { components } => mixture(alphabet, components)?,
        };
        Ok(p)
    }

    pub fn weights(&self) -> Result<SemanticWeights> {
        let alphabet = self.alphabet()?;
        match &self.weights {
            WeightsSpec::Identification => Ok(SemanticWeights::identification(alphabet)),
            WeightsSpec::PerEvent { weights } => {
                SemanticWeights::per_event(alphabet, weights).map_err(into_config)
            }
            WeightsSpec::Explicit { entries } => {
                let mut u = SemanticWeights::new(alphabet);
                for e in entries {
                    let x = e.report.resolve(alphabet)?;
                    let set: ReportSet = e
                        .set
                        .iter()
                        .map(|r| r.resolve(alphabet))
                        .collect::<Result<_>>()?;
                    u.insert(x, set, e.weight).map_err(into_config)?;
                }
                Ok(u)
            }
        }
    }

    pub fn report(&self) -> Result<Option<Report>> {
        let alphabet = self.alphabet()?;
        self.report.as_ref().map(|r| r.resolve(alphabet)).transpose()
    }

    /// `x(1)` followed by the history.
    pub fn sequence(&self) -> Result<Option<ReportSequence>> {
        let alphabet = self.alphabet()?;
        let Some(current) = self.report()? else {
            return Ok(None);
        };
        let mut reports = vec![current];
        for r in &self.history {
            reports.push(r.resolve(alphabet)?);
        }
        Ok(Some(ReportSequence::new(alphabet, reports)?))
    }

    /// Name of 1-based event `event`.
    pub fn event_name(&self, event: u8) -> String {
        self.event_names
            .as_ref()
            .and_then(|names| names.get(event as usize - 1).cloned())
            .unwrap_or_else(|| format!("event {event}"))
    }
}

fn mixture(alphabet: Alphabet, components: &[MixtureComponent]) -> Result<ReportDistribution<f64>> {
    if components.is_empty() {
        return Err(Error::Config("mixture needs at least one component".into()));
    }
    let mut total = vec![0.0; alphabet.size()];
    for c in components {
        if !(c.weight >= 0.0) || !c.weight.is_finite() {
            return Err(Error::Config(format!("mixture weight must be finite and >= 0, got {}", c.weight)));
        }
        let part = ReportDistribution::product(alphabet, &c.marginals)?;
        for (t, p) in total.iter_mut().zip(part.probs()) {
            *t += c.weight * p;
        }
    }
    ReportDistribution::from_weights(alphabet, total)
}

fn into_config(e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Config(msg),
        other => other,
    }
}
