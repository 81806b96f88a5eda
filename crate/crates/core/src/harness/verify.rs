//! The verification suite behind `semsum verify`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;

use super::montecarlo::{convergence_experiment, mc_uniform_avg_loss};
use super::oracles::{adaptive_simpson, compositions, ln_big, sequences, zeta_tail_oracle};
use super::scenario::VerifyLevel;
use crate::error::Result;
use crate::loss::{
    f_divergence_point, interpretation, semantic_loss, semantic_loss_definitional, set_loss,
    ConvexGenerator, Extended, ReportDistribution,
};
use crate::model::{
    consistent_summaries, factorial, multinomial, num_types, Alphabet, Report, ReportSet,
    SemanticWeights, Summary,
};
use crate::numerics::checks::{
    exp_ratio_bound, series_sandwich, sqrt_ratio_bound, stirling_ratio_bound,
};
use crate::numerics::{
    beta_integral, beta_integral_exact, epsilon, robbins_bounds, series_closed_form,
    simplex_uniform_sample, stream_rng, zeta_tail_bounds, FactorialRatioSeries,
};
use crate::scalar::{Exact, Scalar};
use crate::summarizers::{
    all_sequences, eta_exact, eta_series_arguments, laplace, min_semantic_loss,
    min_uniform_avg_loss, universal_summarize, uniform_avg_loss_exact,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// One checked property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub name: String,
    /// Number of individual comparisons behind the row.
    pub checks: u64,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    pub seed: Option<u64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub level: VerifyLevel,
    pub seed: u64,
    pub rows: Vec<MetricRow>,
    pub wall_time_secs: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &MetricRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

struct Plan {
    loss_instances: usize,
    optimality_instances: usize,
    mc_samples: u64,
    series_c_max: u64,
    series_check_terms: u64,
    beta_max: u32,
    counting_n_max: u64,
    inequality_samples: u64,
    super_loose_max: u64,
    divergence_instances: usize,
    convergence_grid: Vec<usize>,
    convergence_trials: u64,
}

impl Plan {
    fn for_level(level: VerifyLevel) -> Self {
        match level {
            VerifyLevel::Quick => Plan {
                loss_instances: 20,
                optimality_instances: 10,
                mc_samples: 50_000,
                series_c_max: 80,
                series_check_terms: 200,
                beta_max: 8,
                counting_n_max: 4,
                inequality_samples: 20_000,
                super_loose_max: 300,
                divergence_instances: 200,
                convergence_grid: vec![1, 10, 100],
                convergence_trials: 50,
            },
            VerifyLevel::Full => Plan {
                loss_instances: 60,
                optimality_instances: 20,
                mc_samples: 1_000_000,
                series_c_max: 200,
                series_check_terms: 1_000,
                beta_max: 12,
                counting_n_max: 5,
                inequality_samples: 200_000,
                super_loose_max: 1_000,
                divergence_instances: 2_000,
                convergence_grid: vec![1, 10, 100, 1000],
                convergence_trials: 200,
            },
        }
    }
}

pub fn verify_all(level: VerifyLevel) -> Result<RunReport> {
    verify_all_seeded(level, DEFAULT_SEED)
}

/// Runs every check at `level`; stochastic rows derive their seeds from `seed`.
pub fn verify_all_seeded(level: VerifyLevel, seed: u64) -> Result<RunReport> {
    let start = Instant::now();
    let plan = Plan::for_level(level);
    let mc = mc_rows(plan.mc_samples, seed.wrapping_add(3))?;
    let rows = vec![
        check_loss_definition(plan.loss_instances, seed.wrapping_add(1))?,
        check_known_p_optimality(plan.optimality_instances, seed.wrapping_add(2))?,
        mc.agreement,
        mc.reading,
        check_series_grid(plan.series_c_max, plan.series_check_terms)?,
        check_eta_envelope()?,
        check_bracket()?,
        check_universal_optimality()?,
        check_beta_integral(plan.beta_max),
        check_counting_identities(plan.counting_n_max)?,
        check_robbins()?,
        check_exp_ratio(plan.inequality_samples, seed.wrapping_add(4)),
        check_stirling_ratio(plan.inequality_samples, seed.wrapping_add(5)),
        check_sqrt_ratio(plan.super_loose_max),
        check_zeta_tail()?,
        check_f_divergences(plan.divergence_instances, seed.wrapping_add(6))?,
        check_convergence(&plan.convergence_grid, plan.convergence_trials, seed.wrapping_add(7))?,
    ];
    Ok(RunReport {
        level,
        seed,
        rows,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn row(name: &str, checks: u64, value: f64, bound: f64, pass: bool, seed: Option<u64>, note: &str) -> MetricRow {
    MetricRow {
        name: name.to_string(),
        checks,
        value,
        bound,
        pass,
        seed,
        note: note.to_string(),
    }
}

/// Random exact distribution with small integer weights; some reports may get zero mass.
pub fn random_exact_distribution<R: Rng + ?Sized>(alphabet: Alphabet, rng: &mut R) -> Result<ReportDistribution<Exact>> {
    let mut weights: Vec<u64> = (0..alphabet.size())
        .map(|_| if rng.random_ratio(1, 8) { 0 } else { rng.random_range(1..=20) })
        .collect();
    if weights.iter().all(|&w| w == 0) {
        weights[0] = 1;
    }
    let weights = weights
        .into_iter()
        .map(|w| BigRational::from_integer(BigInt::from(w)))
        .collect();
    ReportDistribution::from_weights(alphabet, weights)
}

/// Up to `max_entries` entries with weights in `{1/4, 1/2, 3/4, 1}`.
pub fn random_weights<R: Rng + ?Sized>(alphabet: Alphabet, max_entries: usize, rng: &mut R) -> SemanticWeights {
    let mut u = SemanticWeights::new(alphabet);
    let entries = rng.random_range(1..=max_entries);
    for _ in 0..entries {
        let x = Report::from_mask(rng.random_range(0..alphabet.size() as u32));
        let set: ReportSet = alphabet
            .reports()
            .filter(|r| *r == x || rng.random_bool(0.4))
            .collect();
        let weight = rng.random_range(1..=4) as f64 / 4.0;
        // a repeated (x, W) pair is simply skipped
        let _ = u.insert(x, set, weight);
    }
    u
}

/// One uniformly chosen consistent summary per report.
pub fn random_policy<R: Rng + ?Sized>(alphabet: Alphabet, j: usize, rng: &mut R) -> Result<Vec<Summary>> {
    alphabet
        .reports()
        .map(|x| {
            let candidates = consistent_summaries(alphabet, x, j)?;
            Ok(*candidates.choose(rng).expect("at least one candidate"))
        })
        .collect()
}

fn check_loss_definition(instances: usize, seed: u64) -> Result<MetricRow> {
    const GRID: usize = 200;
    let mut rng = stream_rng(seed, 0);
    let mut worst: f64 = 0.0;
    let mut exact_mismatches = 0;
    for _ in 0..instances {
        let v = rng.random_range(1..=3u8);
        let alphabet = Alphabet::new(v)?;
        let j = rng.random_range(1..=v as usize);
        let p = random_exact_distribution(alphabet, &mut rng)?;
        let u = random_weights(alphabet, 5, &mut rng);
        let policy = random_policy(alphabet, j, &mut rng)?;
        let choose = |x: Report| policy[x.index()];
        let closed = semantic_loss(&p, choose, &u)?;
        let definitional = semantic_loss_definitional(&p, choose, &u, GRID)?;
        if definitional.constructive != closed {
            exact_mismatches += 1;
        }
        let tolerance = 2.0 * alphabet.size() as f64 / GRID as f64;
        worst = worst.max((definitional.grid - closed.as_f64()).abs() / tolerance);
    }
    Ok(row(
        "loss_closed_form_vs_definition",
        instances as u64,
        worst,
        1.0,
        worst <= 1.0 && exact_mismatches == 0,
        Some(seed),
        &format!("grid deviation / (2|X|/{GRID}); {exact_mismatches} exact mismatches of the constructive minimizer"),
    ))
}

fn check_known_p_optimality(instances: usize, seed: u64) -> Result<MetricRow> {
    let mut rng = stream_rng(seed, 0);
    let alphabet = Alphabet::new(2)?;
    let candidates: Vec<Vec<Summary>> = alphabet
        .reports()
        .map(|x| consistent_summaries(alphabet, x, 1))
        .collect::<Result<_>>()?;
    let mut failures = 0;
    let mut checks = 0;
    let mut smallest_margin: Option<Exact> = None;
    for _ in 0..instances {
        let p = random_exact_distribution(alphabet, &mut rng)?;
        let u = random_weights(alphabet, 5, &mut rng);
        let optimum = min_semantic_loss(&p, 1, &u)?;
        let mut best: Option<Exact> = None;
        for choice in 0..(1u32 << alphabet.size()) {
            let choose = |x: Report| candidates[x.index()][((choice >> x.index()) & 1) as usize];
            let loss = semantic_loss(&p, choose, &u)?;
            checks += 1;
            let margin = &loss - &optimum;
            if smallest_margin.as_ref().is_none_or(|m| margin < *m) {
                smallest_margin = Some(margin);
            }
            if best.as_ref().is_none_or(|b| loss < *b) {
                best = Some(loss);
            }
        }
        if best != Some(optimum) {
            failures += 1;
        }
    }
    let margin = smallest_margin.map(|m| m.as_f64()).unwrap_or(0.0);
    Ok(row(
        "known_p_optimal_policy",
        checks,
        margin,
        0.0,
        failures == 0 && margin >= 0.0,
        Some(seed),
        "min over all deterministic policies minus the optimum, exact; v=2, j=1",
    ))
}

struct McRows {
    agreement: MetricRow,
    reading: MetricRow,
}

fn mc_rows(samples: u64, seed: u64) -> Result<McRows> {
    let alphabet = Alphabet::new(2)?;
    let u = SemanticWeights::identification(alphabet);
    let mut worst_z: f64 = 0.0;
    let mut first_exact = None;
    let mut first_mc = None;
    for n in 1..=3 {
        let exact = min_uniform_avg_loss(n, alphabet, 1, &u)?.exact_value;
        let estimate = mc_uniform_avg_loss(alphabet, 1, n, &u, samples, seed)?;
        let z = (exact.as_f64() - estimate.estimate).abs() / estimate.std_error;
        worst_z = worst_z.max(z);
        if n == 1 {
            first_exact = Some(exact);
            first_mc = Some(estimate);
        }
    }
    let first_exact = first_exact.expect("n = 1 evaluated");
    let first_mc = first_mc.expect("n = 1 evaluated");
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let agreement = row(
        "average_loss_exact_vs_monte_carlo",
        3,
        worst_z,
        4.0,
        worst_z <= 4.0 && first_exact == third,
        Some(seed),
        &format!("max |exact - estimate| / std error over n = 1..3, {samples} samples; exact n=1 value {first_exact}"),
    );

    // the same average with the bare factor in place of the factorial:
    // every η shrinks by (n+|X|-1)!
    let policy = |s: &crate::model::ReportSequence| universal_summarize(s, 1, &u).expect("valid inputs");
    let mut bare = BigRational::zero();
    let types = num_types(1, alphabet.size() as u64)?;
    for seq in all_sequences(alphabet, 1) {
        let y = policy(&seq);
        let est = laplace(&seq);
        let c = est.n() + alphabet.size() as u64;
        let shrink = BigRational::from_integer(BigInt::from(factorial(c - 1)));
        for e in u.entries_for(seq.current()) {
            let eta = eta_exact(&seq, &y, &e.set)? / &shrink;
            let mass = BigRational::new(
                BigInt::one(),
                BigInt::from(est.counts().type_class_size() * &types),
            );
            bare += (BigRational::one() - eta) * mass;
        }
    }
    let factorial_reading = uniform_avg_loss_exact(policy, 1, alphabet, 1, &u)?;
    let z_factorial = (factorial_reading.as_f64() - first_mc.estimate).abs() / first_mc.std_error;
    let z_bare = (bare.as_f64() - first_mc.estimate).abs() / first_mc.std_error;
    let reading = row(
        "series_factor_reading",
        2,
        z_bare,
        4.0,
        z_factorial <= 4.0 && z_bare > 4.0,
        Some(seed),
        &format!(
            "n=1: factorial reading {:.6} (z = {z_factorial:.2}), bare-factor reading {:.6} (z = {z_bare:.1}); estimate {:.6}",
            factorial_reading.as_f64(),
            bare.as_f64(),
            first_mc.estimate
        ),
    );
    Ok(McRows { agreement, reading })
}

fn check_series_grid(c_max: u64, check_terms: u64) -> Result<MetricRow> {
    let mut violations = 0;
    let mut closed_form_misses = 0;
    let mut checks = 0;
    for b in 1..=c_max.saturating_sub(2) {
        for c in b + 2..=c_max {
            checks += 1;
            if !series_sandwich(b, c)?.holds() {
                violations += 1;
            }
            let mut series = FactorialRatioSeries::new(b, c)?;
            for _ in 0..check_terms {
                series.advance();
            }
            let closed = series_closed_form(b, c)?.as_f64();
            let gap = closed - series.value();
            let slack = 1e-12 * closed;
            if gap < -slack || gap > series.tail_bound() + slack {
                closed_form_misses += 1;
            }
        }
    }
    Ok(row(
        "series_envelope_grid",
        checks,
        (violations + closed_form_misses) as f64,
        0.0,
        violations == 0 && closed_form_misses == 0,
        None,
        &format!(
            "1 <= b, b+2 <= c <= {c_max}: {violations} envelope violations, {closed_form_misses} closed-form misses"
        ),
    ))
}

fn check_eta_envelope() -> Result<MetricRow> {
    let mut checks = 0;
    let mut failures = 0;
    for v in 1..=2u8 {
        let alphabet = Alphabet::new(v)?;
        let u = SemanticWeights::identification(alphabet).combined(&SemanticWeights::per_event(
            alphabet,
            &vec![1.0; v as usize],
        )?)?;
        for n in 1..=3 {
            for seq in all_sequences(alphabet, n) {
                let est = laplace(&seq);
                for j in 1..=v as usize {
                    for y in consistent_summaries(alphabet, seq.current(), j)? {
                        let (b, _) = eta_series_arguments(&est, &y, alphabet)?;
                        if b < 1 {
                            continue;
                        }
                        let q_hat = est.q_hat_mass(y.consistent_reports(alphabet));
                        let c1 = BigRational::from_integer(BigInt::from(est.n() + alphabet.size() as u64 + 1));
                        let slack = 1.0 + epsilon((&c1 * &q_hat).as_f64())?;
                        for e in u.entries_for(seq.current()) {
                            checks += 1;
                            let eta = eta_exact(&seq, &y, &e.set)?;
                            let ratio = est.q_within(&e.set, &y) / &q_hat;
                            if eta < ratio || eta.as_f64() > ratio.as_f64() * slack {
                                failures += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(row(
        "eta_envelope",
        checks,
        failures as f64,
        0.0,
        failures == 0,
        None,
        "q(W∩X(y))/q̂(X(y)) <= η <= that ratio times 1+ε((c+1)q̂(X(y))), v <= 2, n <= 3",
    ))
}

fn check_bracket() -> Result<MetricRow> {
    let mut checks = 0;
    let mut worst_ratio: f64 = 0.0;
    let mut pass = true;
    let mut smallest_gap: Option<f64> = None;
    for v in 1..=2u8 {
        let alphabet = Alphabet::new(v)?;
        let u = SemanticWeights::identification(alphabet);
        for n in 1..=3 {
            checks += 1;
            match min_uniform_avg_loss(n, alphabet, 1, &u) {
                Ok(report) => {
                    let gap = report.implied_lambda();
                    pass &= gap > BigRational::zero();
                    let g = gap.as_f64();
                    smallest_gap = Some(smallest_gap.map_or(g, |s: f64| s.min(g)));
                    worst_ratio = worst_ratio.max(g / report.lambda_bound);
                }
                Err(_) => pass = false,
            }
        }
    }
    Ok(row(
        "universal_loss_bracket",
        checks,
        worst_ratio,
        1.0,
        pass && worst_ratio <= 1.0,
        None,
        &format!(
            "max (Σμ - exact) / λ bound over v <= 2, n <= 3, j = 1; smallest Σμ - exact = {:.6}",
            smallest_gap.unwrap_or(f64::NAN)
        ),
    ))
}

/// Per `(x(1), counts)` the universal choice must minimize that group's share
/// of the exact average loss; the total over type-symmetric policies
/// separates into these groups.
fn check_universal_optimality() -> Result<MetricRow> {
    let alphabet = Alphabet::new(2)?;
    let u = SemanticWeights::identification(alphabet);
    let mut checks = 0;
    let mut failures = 0;
    for n in 1..=3 {
        let mut groups: BTreeMap<(Report, Vec<u64>), Vec<Exact>> = BTreeMap::new();
        let mut chosen: BTreeMap<(Report, Vec<u64>), usize> = BTreeMap::new();
        for seq in all_sequences(alphabet, n) {
            let est = laplace(&seq);
            let key = (seq.current(), est.counts().counts().to_vec());
            let candidates = consistent_summaries(alphabet, seq.current(), 1)?;
            let universal = universal_summarize(&seq, 1, &u)?;
            let index = candidates.iter().position(|y| *y == universal).expect("candidate");
            chosen.insert(key.clone(), index);
            let slot = groups
                .entry(key)
                .or_insert_with(|| vec![BigRational::zero(); candidates.len()]);
            for (k, y) in candidates.iter().enumerate() {
                for e in u.entries_for(seq.current()) {
                    slot[k] += BigRational::one() - eta_exact(&seq, y, &e.set)?;
                }
            }
        }
        for (key, losses) in &groups {
            checks += 1;
            let pick = &losses[chosen[key]];
            if losses.iter().any(|l| l < pick) {
                failures += 1;
            }
        }
    }
    Ok(row(
        "universal_policy_optimal",
        checks,
        failures as f64,
        0.0,
        failures == 0,
        None,
        "v=2, j=1, n <= 3, identification weights; groups where another summary beats the universal choice",
    ))
}

fn check_beta_integral(max: u32) -> MetricRow {
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for a in 0..=max {
        for b in 0..=max {
            for c in [0.5, 1.0, 1.75] {
                checks += 1;
                let closed = beta_integral(a, b, c);
                let integrand = |x: f64| (c - x).powi(a as i32) * x.powi(b as i32);
                let quad = adaptive_simpson(&integrand, 0.0, c, closed * 1e-14);
                worst = worst.max((closed - quad).abs() / closed);
            }
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            let exact = beta_integral_exact(a, b, &half).as_f64();
            worst = worst.max((exact - beta_integral(a, b, 0.5)).abs() / exact);
        }
    }
    row(
        "beta_integral_vs_quadrature",
        checks,
        worst,
        1e-10,
        worst <= 1e-10,
        None,
        &format!("max relative error, a, b <= {max}"),
    )
}

fn check_counting_identities(n_max: u64) -> Result<MetricRow> {
    let mut checks = 0;
    let mut failures = 0;
    for k in 1..=4usize {
        for n in 1..=n_max {
            let types = BigRational::from_integer(BigInt::from(num_types(n, k as u64)?));
            let mut normalization = BigRational::zero();
            let mut first_counts: BTreeMap<(Vec<u64>, usize), u64> = BTreeMap::new();
            for s in sequences(n as usize, k) {
                let mut counts = vec![0u64; k];
                s.iter().for_each(|&d| counts[d] += 1);
                let class = BigRational::from_integer(BigInt::from(multinomial(&counts)));
                normalization += BigRational::one() / (class * &types);
                *first_counts.entry((counts, s[0])).or_default() += 1;
            }
            checks += 1;
            failures += usize::from(!normalization.is_one());

            let all_types = compositions(n, k);
            for a in 0..k {
                checks += 1;
                let total = all_types.iter().fold(BigRational::zero(), |acc, rho| {
                    acc + BigRational::new(BigInt::from(rho[a]), BigInt::from(n))
                });
                let expected = BigRational::new(BigInt::one(), BigInt::from(k));
                failures += usize::from(total / &types != expected);
            }

            for rho in &all_types {
                let class = BigInt::from(multinomial(rho));
                for a in 0..k {
                    checks += 1;
                    let count = first_counts.get(&(rho.clone(), a)).copied().unwrap_or(0);
                    let lhs = BigRational::new(BigInt::from(count), class.clone());
                    let rhs = BigRational::new(BigInt::from(rho[a]), BigInt::from(n));
                    failures += usize::from(lhs != rhs);
                }
            }
        }
    }
    Ok(row(
        "type_counting_identities",
        checks,
        failures as f64,
        0.0,
        failures == 0,
        None,
        &format!("normalization, mean type and first-symbol identities, n <= {n_max}, |X| <= 4"),
    ))
}

fn check_robbins() -> Result<MetricRow> {
    let mut failures = 0;
    for m in 1..=170 {
        let (lo, hi) = robbins_bounds(m)?;
        let exact = ln_big(&factorial(m));
        if !(lo <= exact && exact <= hi) {
            failures += 1;
        }
    }
    Ok(row(
        "robbins_factorial_bounds",
        170,
        failures as f64,
        0.0,
        failures == 0,
        None,
        "m = 1..170 against exact factorials",
    ))
}

fn check_exp_ratio(samples: u64, seed: u64) -> MetricRow {
    let mut rng = stream_rng(seed, 0);
    let mut failures = 0;
    for _ in 0..samples {
        let a = rng.random_range(f64::MIN_POSITIVE..=1000.0);
        let b = rng.random_range(0.0..1.0) * a;
        if b > 0.0 && b < a && !exp_ratio_bound(a, b) {
            failures += 1;
        }
    }
    row(
        "exp_ratio_inequality",
        samples,
        failures as f64,
        0.0,
        failures == 0,
        Some(seed),
        "(a/b)^b e^{-(a-b)} <= 1 on random 0 < b < a <= 1000",
    )
}

fn check_stirling_ratio(samples: u64, seed: u64) -> MetricRow {
    let mut rng = stream_rng(seed, 0);
    let mut failures = 0;
    for _ in 0..samples {
        let a = rng.random_range(2..=1000u64);
        let b = rng.random_range(1..a);
        let j = rng.random_range(1..=1000u64);
        if !stirling_ratio_bound(a, b, j) {
            failures += 1;
        }
    }
    row(
        "stirling_ratio_inequality",
        samples,
        failures as f64,
        0.0,
        failures == 0,
        Some(seed),
        "e^{-x}(1+x/j)^{x+j+1/2} increasing in x on random integers b < a <= 1000, j <= 1000",
    )
}

fn check_sqrt_ratio(c_max: u64) -> MetricRow {
    let mut checks = 0;
    let mut failures = 0;
    for b in 1..=c_max.saturating_sub(2) {
        for c in b + 2..=c_max {
            checks += 1;
            failures += u64::from(!sqrt_ratio_bound(b, c));
        }
    }
    row(
        "sqrt_ratio_inequality",
        checks,
        failures as f64,
        0.0,
        failures == 0,
        None,
        &format!("sqrt(c/b) <= 2^((c-b)/2), 1 <= b, b+2 <= c <= {c_max}"),
    )
}

fn check_zeta_tail() -> Result<MetricRow> {
    let mut checks = 0;
    let mut failures = 0;
    for k in 1..=40u64 {
        for t in [1.25, 1.5, 2.0, 3.0, 6.0] {
            checks += 1;
            let (lower, upper) = zeta_tail_bounds(k, t)?;
            let (lo, hi) = zeta_tail_oracle(k, t, 20_000);
            if !(lower <= lo && hi <= upper) {
                failures += 1;
            }
        }
    }
    Ok(row(
        "zeta_tail_bounds",
        checks,
        failures as f64,
        0.0,
        failures == 0,
        None,
        "direct sums with convex remainder bounds, k <= 40",
    ))
}

fn check_f_divergences(instances: usize, seed: u64) -> Result<MetricRow> {
    let mut rng = stream_rng(seed, 0);
    let generators = ConvexGenerator::builtins();
    let mut points: Vec<Vec<(f64, Extended)>> = vec![Vec::new(); generators.len()];
    let mut tv_worst: f64 = 0.0;
    for _ in 0..instances {
        let v = rng.random_range(1..=3u8);
        let alphabet = Alphabet::new(v)?;
        let j = rng.random_range(1..=v as usize);
        let probs = simplex_uniform_sample(alphabet.size(), &mut rng)?;
        let p = ReportDistribution::from_weights(alphabet, probs)?;
        let x = Report::from_mask(rng.random_range(0..alphabet.size() as u32));
        let y = *consistent_summaries(alphabet, x, j)?.choose(&mut rng).expect("candidate");
        let i = interpretation(&p, &y)?;
        let ix = *i.prob(x);
        for (g, f) in generators.iter().enumerate() {
            points[g].push((ix, f_divergence_point(f, x, &i)));
        }
        let tv = f_divergence_point(&generators[0], x, &i).finite().unwrap_or(f64::NAN);
        let direct = set_loss(&ReportSet::singleton(x), &i);
        tv_worst = tv_worst.max((tv - direct).abs());
    }
    let mut inversions = 0;
    for series in &mut points {
        series.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in series.windows(2) {
            let rises = match (w[0].1, w[1].1) {
                (Extended::Finite(a), Extended::Finite(b)) => b > a + 1e-12 * a.abs().max(1.0),
                (Extended::Finite(_), Extended::Infinite) => true,
                _ => false,
            };
            inversions += usize::from(rises && w[1].0 > w[0].0);
        }
    }
    let tolerance = 4.0 * f64::EPSILON;
    Ok(row(
        "f_divergence_monotone",
        (instances * generators.len()) as u64,
        tv_worst,
        tolerance,
        inversions == 0 && tv_worst <= tolerance,
        Some(seed),
        &format!("{inversions} increases in i_y(x) across TV, KL, reverse KL, chi-square; value is max |TV - set loss|"),
    ))
}

fn check_convergence(grid: &[usize], trials: u64, seed: u64) -> Result<MetricRow> {
    let alphabet = Alphabet::new(2)?;
    let u = SemanticWeights::identification(alphabet);
    let p = ReportDistribution::new(alphabet, vec![0.1, 0.2, 0.3, 0.4])?;
    let rows = convergence_experiment(&p, 1, &u, grid, trials, seed)?;
    let first = rows.first().expect("non-empty grid");
    let last = rows.last().expect("non-empty grid");
    Ok(row(
        "universal_convergence",
        (grid.len() as u64) * trials,
        last.gap,
        first.gap,
        last.gap < first.gap,
        Some(seed),
        &format!("gap at n={} vs n={}, {trials} trials, p = (0.1, 0.2, 0.3, 0.4)", last.n, first.n),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_instances_are_valid() {
        let mut rng = stream_rng(1, 0);
        let alphabet = Alphabet::new(3).unwrap();
        for _ in 0..20 {
            let p = random_exact_distribution(alphabet, &mut rng).unwrap();
            assert!(p.support().count() >= 1);
            let u = random_weights(alphabet, 5, &mut rng);
            assert!(!u.is_empty() && u.len() <= 5);
            let policy = random_policy(alphabet, 2, &mut rng).unwrap();
            for x in alphabet.reports() {
                assert!(policy[x.index()].is_consistent_with(x));
                assert_eq!(policy[x.index()].len(), 2);
            }
        }
    }

    #[test]
    fn deterministic_rows_pass() {
        assert!(check_series_grid(30, 100).unwrap().pass);
        assert!(check_eta_envelope().unwrap().pass);
        assert!(check_bracket().unwrap().pass);
        assert!(check_universal_optimality().unwrap().pass);
        assert!(check_beta_integral(4).pass);
        assert!(check_counting_identities(3).unwrap().pass);
        assert!(check_robbins().unwrap().pass);
        assert!(check_sqrt_ratio(100).pass);
        assert!(check_zeta_tail().unwrap().pass);
    }

    #[test]
    fn seeded_rows_pass() {
        assert!(check_loss_definition(5, 3).unwrap().pass);
        assert!(check_known_p_optimality(3, 4).unwrap().pass);
        assert!(check_exp_ratio(2_000, 5).pass);
        assert!(check_stirling_ratio(2_000, 6).pass);
        assert!(check_f_divergences(100, 7).unwrap().pass);
    }
}
