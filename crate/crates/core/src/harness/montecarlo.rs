//! Monte Carlo estimates of the uniform-average loss and the convergence experiment.

use std::collections::HashMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::loss::{report_loss, ReportDistribution};
use crate::model::{Alphabet, Report, ReportSequence, SemanticWeights, Summary};
use crate::numerics::{simplex_uniform_sample, stream_rng};
use crate::summarizers::{min_semantic_loss, universal_summarize};

pub const MIN_MC_SAMPLES: u64 = 1_000;

/// Samples drawn from each seeded stream.
pub const STREAM_LEN: u64 = 10_000;

/// Welford accumulator; merging is Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &RunningStats) -> RunningStats {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / count as f64;
        RunningStats {
            count,
            mean: self.mean + delta * weight,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * weight,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Runs `samples` draws split into fixed streams and merges them in stream order,
/// so the result does not depend on the number of worker threads.
fn run_streams<F>(samples: u64, seed: u64, draw_stream: F) -> Result<RunningStats>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, u64) -> Result<RunningStats> + Sync,
{
    let streams = samples.div_ceil(STREAM_LEN);
    let parts: Vec<Result<RunningStats>> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let len = STREAM_LEN.min(samples - s * STREAM_LEN);
            let mut rng = stream_rng(seed, s);
            draw_stream(&mut rng, len)
        })
        .collect();
    parts
        .into_iter()
        .try_fold(RunningStats::default(), |acc, part| Ok(acc.merge(&part?)))
}

fn sample_sequence<R: Rng + ?Sized>(
    alphabet: Alphabet,
    index: &WeightedIndex<f64>,
    n: usize,
    rng: &mut R,
) -> Result<ReportSequence> {
    let reports = (0..n)
        .map(|_| Report::from_mask(index.sample(rng) as u32))
        .collect();
    ReportSequence::new(alphabet, reports)
}

/// `Σ_W u(x, W) (1 - p(W ∩ X(y)) / p(X(y)))` in floating point.
fn draw_loss(p: &[f64], x: Report, y: &Summary, u: &SemanticWeights) -> Result<f64> {
    let alphabet = u.alphabet();
    let denominator: f64 = y.consistent_reports(alphabet).map(|r| p[r.index()]).sum();
    if !(denominator > 0.0) {
        return Err(Error::UndefinedInterpretation(format!("summary {y} has zero probability")));
    }
    Ok(u
        .entries_for(x)
        .map(|e| {
            let within: f64 = e
                .set
                .iter()
                .filter(|r| y.is_consistent_with(*r))
                .map(|r| p[r.index()])
                .sum();
            e.weight * (1.0 - within / denominator)
        })
        .sum())
}

fn check_mc_inputs(alphabet: Alphabet, j: usize, n: usize, u: &SemanticWeights, samples: u64) -> Result<()> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::Domain(format!(
            "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("sequence length must be at least 1".into()));
    }
    if j == 0 || j > alphabet.events() as usize {
        return Err(Error::Domain(format!("summary length must lie in 1..={}", alphabet.events())));
    }
    if u.alphabet() != alphabet {
        return Err(Error::Domain("weights are over a different alphabet".into()));
    }
    Ok(())
}

/// Draws `p` uniformly from the simplex and `x^n` i.i.d. from `p`, then scores
/// `policy(x^n)` against `p`.
pub fn mc_uniform_avg_loss_with<F>(
    alphabet: Alphabet,
    j: usize,
    n: usize,
    u: &SemanticWeights,
    samples: u64,
    seed: u64,
    policy: F,
) -> Result<McEstimate>
where
    F: Fn(&ReportSequence) -> Result<Summary> + Sync,
{
    check_mc_inputs(alphabet, j, n, u, samples)?;
    let stats = run_streams(samples, seed, |rng, len| {
        let mut stats = RunningStats::default();
        for _ in 0..len {
            let p = simplex_uniform_sample(alphabet.size(), rng)?;
            let index = WeightedIndex::new(&p).map_err(|e| Error::Domain(e.to_string()))?;
            let seq = sample_sequence(alphabet, &index, n, rng)?;
            let y = policy(&seq)?;
            if y.len() != j || !y.is_consistent_with(seq.current()) {
                return Err(Error::Domain(format!("policy returned invalid summary {y}")));
            }
            stats.push(draw_loss(&p, seq.current(), &y, u)?);
        }
        Ok(stats)
    })?;
    Ok(McEstimate {
        estimate: stats.mean(),
        std_error: stats.std_error(),
        samples,
        seed,
    })
}

/// [`mc_uniform_avg_loss_with`] for the universal summarizer.
pub fn mc_uniform_avg_loss(
    alphabet: Alphabet,
    j: usize,
    n: usize,
    u: &SemanticWeights,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_mc_inputs(alphabet, j, n, u, samples)?;
    let stats = run_streams(samples, seed, |rng, len| {
        // the universal choice depends only on x(1) and the counts
        let mut cache: HashMap<(Report, Vec<u64>), Summary> = HashMap::new();
        let mut stats = RunningStats::default();
        for _ in 0..len {
            let p = simplex_uniform_sample(alphabet.size(), rng)?;
            let index = WeightedIndex::new(&p).map_err(|e| Error::Domain(e.to_string()))?;
            let seq = sample_sequence(alphabet, &index, n, rng)?;
            let mut counts = vec![0u64; alphabet.size()];
            for r in seq.reports() {
                counts[r.index()] += 1;
            }
            let key = (seq.current(), counts);
            let y = match cache.get(&key) {
                Some(y) => *y,
                None => {
                    let y = universal_summarize(&seq, j, u)?;
                    cache.insert(key, y);
                    y
                }
            };
            stats.push(draw_loss(&p, seq.current(), &y, u)?);
        }
        Ok(stats)
    })?;
    Ok(McEstimate {
        estimate: stats.mean(),
        std_error: stats.std_error(),
        samples,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub universal_loss: f64,
    pub std_error: f64,
    pub known_p_min: f64,
    pub gap: f64,
}

/// Loss of the universal summarizer under a fixed `p` for each history length.
///
/// Each trial draws `x(2), ..., x(n)` from `p` and averages the loss over
/// `x(1) ~ p` exactly.
pub fn convergence_experiment(
    p: &ReportDistribution<f64>,
    j: usize,
    u: &SemanticWeights,
    n_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<ConvergenceRow>> {
    if n_grid.is_empty() || n_grid[0] == 0 || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("n_grid must be non-empty, positive and strictly ascending".into()));
    }
    if trials == 0 {
        return Err(Error::Domain("at least one trial is needed".into()));
    }
    let alphabet = p.alphabet();
    let known_p_min = min_semantic_loss(p, j, u)?;
    let index = WeightedIndex::new(p.probs()).map_err(|e| Error::Domain(e.to_string()))?;
    let support: Vec<Report> = p.support().collect();
    n_grid
        .iter()
        .enumerate()
        .map(|(g, &n)| {
            let losses: Vec<Result<f64>> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream_rng(seed, ((g as u64) << 32) | t);
                    let history: Vec<Report> = (1..n)
                        .map(|_| Report::from_mask(index.sample(&mut rng) as u32))
                        .collect();
                    let mut loss = 0.0;
                    for &x in &support {
                        let mut reports = Vec::with_capacity(n);
                        reports.push(x);
                        reports.extend_from_slice(&history);
                        let seq = ReportSequence::new(alphabet, reports)?;
                        let y = universal_summarize(&seq, j, u)?;
                        loss += p.prob(x) * report_loss(p, x, &y, u)?;
                    }
                    Ok(loss)
                })
                .collect();
            let mut stats = RunningStats::default();
            for l in losses {
                stats.push(l?);
            }
            Ok(ConvergenceRow {
                n,
                universal_loss: stats.mean(),
                std_error: stats.std_error(),
                known_p_min,
                gap: stats.mean() - known_p_min,
            })
        })
        .collect()
}
