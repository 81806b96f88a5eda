//! Optimal summarizers.
//!
//! With the report distribution known, the best summary of `x` minimizes
//! `Σ_W u(x, W) (1 - i_y(W))` over the truthful candidates. Without it, the
//! universal summarizer scores candidates with add-one estimates built from
//! the report history:
//!
//! * `q(a) = (n π(a) + 1) / (n + |X|)`
//! * `q̂(a) = (n π(a) + 1 + [a = x(1)]) / (n + |X| + 1)`
//!
//! and minimizes `μ(x^n) = min_y Σ_W u(x(1), W) (1 - q(W ∩ X(y)) / q̂(X(y)))`.
//!
//! The exact loss of any history-driven policy averaged over a uniformly drawn
//! distribution is `Σ_{x^n} Σ_W u(x(1), W) (1 - η) / (|T| |P_n|)` where
//! `η = q(W ∩ X(y)) · Σ_k (b+k)! c! / ((c+k)! b!)`, `c = n + |X|` and
//! `b = c - (c+1) q̂(X(y))`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::loss::{report_loss, weight, ReportDistribution};
use crate::model::{
    consistent_summaries, empirical, num_types, Alphabet, EmpiricalCounts, Report, ReportSequence,
    ReportSet, SemanticWeights, Summary,
};
use crate::numerics::{epsilon, series_closed_form, series_sum_factorial_ratio};
use crate::scalar::Scalar;

/// Default bound on `|X|^n` for exhaustive enumeration.
pub const DEFAULT_ENUM_CAP: u128 = 1_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "SEMSUM_ENUM_CAP";

pub fn enumeration_cap() -> u128 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

fn check_enumerable(alphabet: Alphabet, n: usize) -> Result<u128> {
    let cap = enumeration_cap();
    let needed = (alphabet.size() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::ResourceCap { needed, cap });
    }
    Ok(needed)
}

fn check_length(alphabet: Alphabet, j: usize) -> Result<()> {
    if j == 0 || j > alphabet.events() as usize {
        return Err(Error::Domain(format!(
            "summary length must lie in 1..={}, got {j}",
            alphabet.events()
        )));
    }
    Ok(())
}

/// Index of the first minimum; earlier candidates win ties.
fn argmin_first<T: PartialOrd>(scores: &[T]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s < scores[best] {
            best = i;
        }
    }
    best
}

/// Every candidate summary of `x` with its known-distribution score.
pub fn known_p_scores<T: Scalar>(
    p: &ReportDistribution<T>,
    x: Report,
    j: usize,
    u: &SemanticWeights,
) -> Result<Vec<(Summary, T)>> {
    if *p.prob(x) <= T::zero() {
        return Err(Error::Domain(format!(
            "report {x} has zero probability; no summary is needed"
        )));
    }
    consistent_summaries(p.alphabet(), x, j)?
        .into_iter()
        .map(|y| Ok((y, report_loss(p, x, &y, u)?)))
        .collect()
}

/// The loss-minimizing summary of `x` when `p` is known.
pub fn known_p_summarize<T: Scalar>(
    p: &ReportDistribution<T>,
    x: Report,
    j: usize,
    u: &SemanticWeights,
) -> Result<Summary> {
    let scored = known_p_scores(p, x, j, u)?;
    let scores: Vec<T> = scored.iter().map(|(_, s)| s.clone()).collect();
    Ok(scored[argmin_first(&scores)].0)
}

/// The known-distribution optimal summary for every report in the support.
pub fn known_p_policy<T: Scalar>(
    p: &ReportDistribution<T>,
    j: usize,
    u: &SemanticWeights,
) -> Result<BTreeMap<Report, Summary>> {
    p.support()
        .map(|x| Ok((x, known_p_summarize(p, x, j, u)?)))
        .collect()
}

/// `Σ_x p(x) min_y Σ_W u(x, W) (1 - i_y(W))`.
pub fn min_semantic_loss<T: Scalar>(
    p: &ReportDistribution<T>,
    j: usize,
    u: &SemanticWeights,
) -> Result<T> {
    check_length(p.alphabet(), j)?;
    let mut total = T::zero();
    for x in p.support() {
        let scored = known_p_scores(p, x, j, u)?;
        let scores: Vec<T> = scored.into_iter().map(|(_, s)| s).collect();
        let best = scores[argmin_first(&scores)].clone();
        total = total + p.prob(x).clone() * best;
    }
    Ok(total)
}

/// Add-one estimates `q` and `q̂` from a report sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceEstimates {
    counts: EmpiricalCounts,
    current: Report,
    q: Vec<BigRational>,
    q_hat: Vec<BigRational>,
}

impl LaplaceEstimates {
    pub fn n(&self) -> u64 {
        self.counts.n()
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.alphabet_size()
    }

    pub fn counts(&self) -> &EmpiricalCounts {
        &self.counts
    }

    pub fn current(&self) -> Report {
        self.current
    }

    pub fn q(&self, a: Report) -> &BigRational {
        &self.q[a.index()]
    }

    pub fn q_hat(&self, a: Report) -> &BigRational {
        &self.q_hat[a.index()]
    }

    pub fn q_mass(&self, reports: impl IntoIterator<Item = Report>) -> BigRational {
        reports
            .into_iter()
            .fold(BigRational::zero(), |acc, r| acc + &self.q[r.index()])
    }

    pub fn q_hat_mass(&self, reports: impl IntoIterator<Item = Report>) -> BigRational {
        reports
            .into_iter()
            .fold(BigRational::zero(), |acc, r| acc + &self.q_hat[r.index()])
    }

    /// `q(W ∩ X(y))`.
    pub fn q_within(&self, set: &ReportSet, y: &Summary) -> BigRational {
        self.q_mass(set.iter().filter(|r| y.is_consistent_with(*r)))
    }
}

/// `q^(x^n)` and `q̂^(x^n)` as exact rationals.
pub fn laplace(sequence: &ReportSequence) -> LaplaceEstimates {
    let counts = empirical(sequence);
    let current = sequence.current();
    let n = counts.n();
    let size = counts.alphabet_size() as u64;
    let big = |v: u64| BigInt::from(v);
    let q = counts
        .counts()
        .iter()
        .map(|&c| BigRational::new(big(c + 1), big(n + size)))
        .collect();
    let q_hat = counts
        .counts()
        .iter()
        .enumerate()
        .map(|(a, &c)| {
            let extra = u64::from(a == current.index());
            BigRational::new(big(c + 1 + extra), big(n + size + 1))
        })
        .collect();
    LaplaceEstimates {
        counts,
        current,
        q,
        q_hat,
    }
}

/// Series arguments `(b, c)` for `η`, with `c = n + |X|` and
/// `b = c - (c + 1) q̂(X(y))`.
pub fn eta_series_arguments(est: &LaplaceEstimates, y: &Summary, alphabet: Alphabet) -> Result<(u64, u64)> {
    if !y.is_consistent_with(est.current()) {
        return Err(Error::Domain(format!(
            "summary {y} is inconsistent with the current report {}",
            est.current()
        )));
    }
    let c = est.n() + est.alphabet_size() as u64;
    let scaled = est.q_hat_mass(y.consistent_reports(alphabet))
        * BigRational::from_integer(BigInt::from(c + 1));
    let b = BigRational::from_integer(BigInt::from(c)) - scaled;
    if !b.is_integer() || b < BigRational::zero() {
        return Err(Error::Domain(format!("series argument b = {b} is not a non-negative integer")));
    }
    let b = b.to_integer().to_u64().expect("b fits in u64");
    if c < b + 2 {
        return Err(Error::Divergent {
            b: b as i64,
            c: c as i64,
        });
    }
    Ok((b, c))
}

fn validate_eta_inputs(sequence: &ReportSequence, y: &Summary) -> Result<()> {
    check_length(sequence.alphabet(), y.len())?;
    if !y.is_consistent_with(sequence.current()) {
        return Err(Error::Domain(format!(
            "summary {y} is inconsistent with the current report {}",
            sequence.current()
        )));
    }
    Ok(())
}

/// `η` via the exact closed form of the series.
pub fn eta_exact(sequence: &ReportSequence, y: &Summary, set: &ReportSet) -> Result<BigRational> {
    validate_eta_inputs(sequence, y)?;
    let est = laplace(sequence);
    eta_from_estimates(&est, y, set, sequence.alphabet())
}

fn eta_from_estimates(
    est: &LaplaceEstimates,
    y: &Summary,
    set: &ReportSet,
    alphabet: Alphabet,
) -> Result<BigRational> {
    let (b, c) = eta_series_arguments(est, y, alphabet)?;
    Ok(est.q_within(set, y) * series_closed_form(b, c)?)
}

/// `η` with its certified truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedValue {
    pub value: f64,
    pub error_bound: f64,
}

/// `η` by term-by-term summation; the true value lies in
/// `[value, value + error_bound]` and `error_bound < tol`.
pub fn eta(sequence: &ReportSequence, y: &Summary, set: &ReportSet, tol: f64) -> Result<CertifiedValue> {
    validate_eta_inputs(sequence, y)?;
    let est = laplace(sequence);
    eta_series_from_estimates(&est, y, set, sequence.alphabet(), tol)
}

fn eta_series_from_estimates(
    est: &LaplaceEstimates,
    y: &Summary,
    set: &ReportSet,
    alphabet: Alphabet,
    tol: f64,
) -> Result<CertifiedValue> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let (b, c) = eta_series_arguments(est, y, alphabet)?;
    let q = est.q_within(set, y).as_f64();
    if q == 0.0 {
        return Ok(CertifiedValue {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    let series = series_sum_factorial_ratio(b, c, tol / q)?;
    Ok(CertifiedValue {
        value: q * series.value,
        error_bound: q * series.tail_bound,
    })
}

/// All `|X|^n` sequences, in odometer order with `x(1)` varying slowest.
pub fn all_sequences(alphabet: Alphabet, n: usize) -> impl Iterator<Item = ReportSequence> {
    let size = alphabet.size() as u32;
    let mut digits = if n == 0 { None } else { Some(vec![0u32; n]) };
    std::iter::from_fn(move || {
        let current = digits.clone()?;
        let seq = ReportSequence::from_masks(alphabet, &current).expect("masks in range");
        let d = digits.as_mut().expect("checked above");
        let mut pos = n;
        loop {
            if pos == 0 {
                digits = None;
                break;
            }
            pos -= 1;
            d[pos] += 1;
            if d[pos] < size {
                break;
            }
            d[pos] = 0;
        }
        Some(seq)
    })
}

struct SequenceWeights {
    types: BigUint,
}

impl SequenceWeights {
    fn new(alphabet: Alphabet, n: usize) -> Result<Self> {
        Ok(Self {
            types: num_types(n as u64, alphabet.size() as u64)?,
        })
    }

    /// `1 / (|T^n_(x^n)| |P_n(X)|)`.
    fn of(&self, counts: &EmpiricalCounts) -> BigRational {
        let den = counts.type_class_size() * &self.types;
        BigRational::new(BigInt::one(), BigInt::from(den))
    }
}

fn checked_policy_choice(
    sequence: &ReportSequence,
    y: Summary,
    j: usize,
) -> Result<Summary> {
    if y.len() != j || !y.is_consistent_with(sequence.current()) {
        return Err(Error::Domain(format!(
            "policy maps sequence with current report {} to invalid summary {y}",
            sequence.current()
        )));
    }
    Ok(y)
}

/// Exact uniform-average semantic loss of a deterministic history-driven policy.
pub fn uniform_avg_loss_exact<F>(
    policy: F,
    n: usize,
    alphabet: Alphabet,
    j: usize,
    u: &SemanticWeights,
) -> Result<BigRational>
where
    F: Fn(&ReportSequence) -> Summary,
{
    check_length(alphabet, j)?;
    check_enumerable(alphabet, n)?;
    let weights = SequenceWeights::new(alphabet, n)?;
    let mut total = BigRational::zero();
    for seq in all_sequences(alphabet, n) {
        let y = checked_policy_choice(&seq, policy(&seq), j)?;
        let mut entries = u.entries_for(seq.current()).peekable();
        if entries.peek().is_none() {
            continue;
        }
        let est = laplace(&seq);
        let mut term = BigRational::zero();
        for e in entries {
            let eta = eta_from_estimates(&est, &y, &e.set, alphabet)?;
            term += weight::<BigRational>(e.weight)? * (BigRational::one() - eta);
        }
        total += term * weights.of(est.counts());
    }
    Ok(total)
}

/// The same loss evaluated through the truncated series; the true value lies
/// in `[value - error_bound, value]`.
pub fn uniform_avg_loss_series<F>(
    policy: F,
    n: usize,
    alphabet: Alphabet,
    j: usize,
    u: &SemanticWeights,
    tol: f64,
) -> Result<CertifiedValue>
where
    F: Fn(&ReportSequence) -> Summary,
{
    check_length(alphabet, j)?;
    check_enumerable(alphabet, n)?;
    let weights = SequenceWeights::new(alphabet, n)?;
    let mut value = 0.0;
    let mut error_bound = 0.0;
    for seq in all_sequences(alphabet, n) {
        let y = checked_policy_choice(&seq, policy(&seq), j)?;
        let mut entries = u.entries_for(seq.current()).peekable();
        if entries.peek().is_none() {
            continue;
        }
        let est = laplace(&seq);
        let mass = weights.of(est.counts()).as_f64();
        for e in entries {
            let eta = eta_series_from_estimates(&est, &y, &e.set, alphabet, tol)?;
            value += mass * e.weight * (1.0 - eta.value);
            error_bound += mass * e.weight * eta.error_bound;
        }
    }
    Ok(CertifiedValue { value, error_bound })
}

/// Every candidate with its `μ`-criterion score
/// `Σ_W u(x(1), W) (1 - q(W ∩ X(y)) / q̂(X(y)))`.
pub fn universal_scores(
    sequence: &ReportSequence,
    j: usize,
    u: &SemanticWeights,
) -> Result<Vec<(Summary, BigRational)>> {
    let alphabet = sequence.alphabet();
    let x = sequence.current();
    let candidates = consistent_summaries(alphabet, x, j)?;
    let entries: Vec<_> = u.entries_for(x).collect();
    if entries.is_empty() {
        return Ok(candidates.into_iter().map(|y| (y, BigRational::zero())).collect());
    }
    let est = laplace(sequence);
    candidates
        .into_iter()
        .map(|y| {
            let denominator = est.q_hat_mass(y.consistent_reports(alphabet));
            let mut score = BigRational::zero();
            for e in &entries {
                let ratio = est.q_within(&e.set, &y) / &denominator;
                score += weight::<BigRational>(e.weight)? * (BigRational::one() - ratio);
            }
            Ok((y, score))
        })
        .collect()
}

/// The candidate attaining `μ(x^n)`, earliest events mask on ties.
pub fn universal_summarize(
    sequence: &ReportSequence,
    j: usize,
    u: &SemanticWeights,
) -> Result<Summary> {
    Ok(universal_choice(sequence, j, u)?.0)
}

/// `μ(x^n)`.
pub fn mu(sequence: &ReportSequence, j: usize, u: &SemanticWeights) -> Result<BigRational> {
    Ok(universal_choice(sequence, j, u)?.1)
}

fn universal_choice(
    sequence: &ReportSequence,
    j: usize,
    u: &SemanticWeights,
) -> Result<(Summary, BigRational)> {
    let mut scored = universal_scores(sequence, j, u)?;
    let best = {
        let scores: Vec<&BigRational> = scored.iter().map(|(_, s)| s).collect();
        argmin_first(&scores)
    };
    Ok(scored.swap_remove(best))
}

/// `u* [ (|X|-1)|X| / (n - √n + |X| - 1) · ε(|X| 2^{-j}) + ε(√n) ]`.
pub fn lambda_bound(n: u64, alphabet: Alphabet, j: usize, u: &SemanticWeights) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("lambda bound needs n >= 1".into()));
    }
    check_length(alphabet, j)?;
    let u_star = u.u_star();
    if u_star == 0.0 {
        return Ok(0.0);
    }
    let size = alphabet.size() as f64;
    let nf = n as f64;
    let root = nf.sqrt();
    let fraction = (size - 1.0) * size / (nf - root + size - 1.0);
    let cell = size / (1u64 << j) as f64;
    Ok(u_star * (fraction * epsilon(cell)? + epsilon(root)?))
}

/// Exact minimum uniform-average loss against its `μ` bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalLossReport {
    pub n: usize,
    pub j: usize,
    /// Uniform-average loss of the universal summarizer.
    pub exact_value: BigRational,
    /// `Σ_{x^n} μ(x^n) / (|T| |P_n|)`.
    pub mu_sum: BigRational,
    pub lambda_bound: f64,
    pub u_star: f64,
}

impl UniversalLossReport {
    /// `λ_n = Σμ/(|T||P_n|) - exact`.
    pub fn implied_lambda(&self) -> BigRational {
        &self.mu_sum - &self.exact_value
    }

    pub fn bracket_holds(&self) -> bool {
        let gap = self.implied_lambda();
        gap >= BigRational::zero() && gap.as_f64() <= self.lambda_bound
    }
}

/// Loss of the universal summarizer together with `Σμ` and the `λ_n` bound.
pub fn min_uniform_avg_loss(
    n: usize,
    alphabet: Alphabet,
    j: usize,
    u: &SemanticWeights,
) -> Result<UniversalLossReport> {
    check_length(alphabet, j)?;
    check_enumerable(alphabet, n)?;
    let weights = SequenceWeights::new(alphabet, n)?;
    let mut exact_value = BigRational::zero();
    let mut mu_sum = BigRational::zero();
    for seq in all_sequences(alphabet, n) {
        let mut entries = u.entries_for(seq.current()).peekable();
        if entries.peek().is_none() {
            continue;
        }
        let (y, mu_value) = universal_choice(&seq, j, u)?;
        let est = laplace(&seq);
        let mut term = BigRational::zero();
        for e in entries {
            let eta = eta_from_estimates(&est, &y, &e.set, alphabet)?;
            term += weight::<BigRational>(e.weight)? * (BigRational::one() - eta);
        }
        let mass = weights.of(est.counts());
        exact_value += term * &mass;
        mu_sum += mu_value * mass;
    }
    let report = UniversalLossReport {
        n,
        j,
        exact_value,
        mu_sum,
        lambda_bound: lambda_bound(n as u64, alphabet, j, u)?,
        u_star: u.u_star(),
    };
    if !report.bracket_holds() {
        return Err(Error::Verification(format!(
            "loss {} escapes [Σμ - λ̄, Σμ] = [{} - {}, {}]",
            report.exact_value, report.mu_sum, report.lambda_bound, report.mu_sum
        )));
    }
    Ok(report)
}
