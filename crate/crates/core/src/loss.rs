//! Summary interpretation, semantic loss and pointwise f-divergences.
//!
//! The end user decodes a summary `y` through the conditional distribution
//! `i_y(x) = 1{x ∈ X(y)} p(x) / p(X(y))`. The loss of conveying a meaning-class
//! `W` is the smallest variational distance from `i_y` to a distribution
//! supported on `W`, which equals `1 - i_y(W)`.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::model::{Alphabet, Report, ReportSet, SemanticWeights, Summary};
use crate::scalar::Scalar;

/// A probability vector over the `2^v` reports, indexed by mask.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDistribution<T> {
    alphabet: Alphabet,
    probs: Vec<T>,
}

impl<T: Scalar> ReportDistribution<T> {
    pub fn new(alphabet: Alphabet, probs: Vec<T>) -> Result<Self> {
        if probs.len() != alphabet.size() {
            return Err(Error::Domain(format!(
                "distribution needs {} entries, got {}",
                alphabet.size(),
                probs.len()
            )));
        }
        if probs.iter().any(|p| *p < T::zero()) {
            return Err(Error::Domain("probabilities must be non-negative".into()));
        }
        let total = probs.iter().cloned().fold(T::zero(), |a, b| a + b);
        if !total.is_unit_sum() {
            return Err(Error::Domain(format!(
                "probabilities sum to {}, not 1",
                total.as_f64()
            )));
        }
        Ok(Self { alphabet, probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.size() as u64;
        Self {
            alphabet,
            probs: vec![T::from_ratio(1, n); alphabet.size()],
        }
    }

    /// Point mass on `report`.
    pub fn degenerate(alphabet: Alphabet, report: Report) -> Result<Self> {
        let mut probs = vec![T::zero(); alphabet.size()];
        *probs
            .get_mut(report.index())
            .ok_or_else(|| Error::Domain(format!("report {report} out of range")))? = T::one();
        Ok(Self { alphabet, probs })
    }

    /// Normalizes non-negative weights in this backing.
    pub fn from_weights(alphabet: Alphabet, weights: Vec<T>) -> Result<Self> {
        let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if total <= T::zero() {
            return Err(Error::Domain("weights must have positive total".into()));
        }
        let probs = weights.into_iter().map(|w| w / total.clone()).collect();
        Self::new(alphabet, probs)
    }

    /// Independent events with the given occurrence probabilities.
    pub fn product(alphabet: Alphabet, marginals: &[T]) -> Result<Self> {
        if marginals.len() != alphabet.events() as usize {
            return Err(Error::Domain(format!(
                "expected {} marginals, got {}",
                alphabet.events(),
                marginals.len()
            )));
        }
        if marginals.iter().any(|m| *m < T::zero() || *m > T::one()) {
            return Err(Error::Domain("marginals must lie in [0, 1]".into()));
        }
        let probs = alphabet
            .reports()
            .map(|x| {
                marginals
                    .iter()
                    .enumerate()
                    .fold(T::one(), |acc, (bit, m)| {
                        if (x.mask() >> bit) & 1 == 1 {
                            acc * m.clone()
                        } else {
                            acc * (T::one() - m.clone())
                        }
                    })
            })
            .collect();
        Ok(Self { alphabet, probs })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn prob(&self, report: Report) -> &T {
        &self.probs[report.index()]
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn mass(&self, reports: impl IntoIterator<Item = Report>) -> T {
        reports
            .into_iter()
            .fold(T::zero(), |acc, r| acc + self.probs[r.index()].clone())
    }

    /// `p(X(y))`.
    pub fn summary_mass(&self, y: &Summary) -> T {
        self.mass(y.consistent_reports(self.alphabet))
    }

    /// Reports with positive probability.
    pub fn support(&self) -> impl Iterator<Item = Report> + '_ {
        self.alphabet
            .reports()
            .filter(move |r| self.probs[r.index()] > T::zero())
    }

    pub fn to_f64(&self) -> ReportDistribution<f64> {
        ReportDistribution {
            alphabet: self.alphabet,
            probs: self.probs.iter().map(Scalar::as_f64).collect(),
        }
    }
}

impl ReportDistribution<f64> {
    /// Exact rational copy, renormalized so the entries sum to exactly 1.
    pub fn to_exact(&self) -> Result<ReportDistribution<BigRational>> {
        let weights = self
            .probs
            .iter()
            .map(|p| <BigRational as Scalar>::from_f64(*p))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Domain("non-finite probability".into()))?;
        ReportDistribution::from_weights(self.alphabet, weights)
    }
}

/// The summary interpretation `i_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation<T> {
    summary: Summary,
    probs: Vec<T>,
}

impl<T: Scalar> Interpretation<T> {
    pub fn summary(&self) -> &Summary {
        &self.summary
    }

    pub fn prob(&self, report: Report) -> &T {
        &self.probs[report.index()]
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// `i_y(W)`.
    pub fn mass(&self, set: &ReportSet) -> T {
        set.iter()
            .filter(|r| self.summary.is_consistent_with(*r))
            .fold(T::zero(), |acc, r| acc + self.probs[r.index()].clone())
    }
}

/// `i_y(x) = p(x) / p(X(y))` on `X(y)`, zero elsewhere.
pub fn interpretation<T: Scalar>(
    p: &ReportDistribution<T>,
    y: &Summary,
) -> Result<Interpretation<T>> {
    let mass = p.summary_mass(y);
    if mass <= T::zero() {
        return Err(Error::UndefinedInterpretation(y.to_string()));
    }
    let mut probs = vec![T::zero(); p.alphabet().size()];
    for x in y.consistent_reports(p.alphabet()) {
        probs[x.index()] = p.prob(x).clone() / mass.clone();
    }
    Ok(Interpretation {
        summary: *y,
        probs,
    })
}

/// `1 - i(W)`: the minimum variational distance from `i` to `P(W)`.
pub fn set_loss<T: Scalar>(set: &ReportSet, i: &Interpretation<T>) -> T {
    T::one() - i.mass(set)
}

/// `Σ_W u(x, W) (1 - i_y(W))` for a single report and summary.
pub fn report_loss<T: Scalar>(
    p: &ReportDistribution<T>,
    x: Report,
    y: &Summary,
    u: &SemanticWeights,
) -> Result<T> {
    let mut entries = u.entries_for(x).peekable();
    if entries.peek().is_none() {
        return Ok(T::zero());
    }
    let i = interpretation(p, y)?;
    entries.try_fold(T::zero(), |acc, e| {
        Ok(acc + weight::<T>(e.weight)? * set_loss(&e.set, &i))
    })
}

pub(crate) fn weight<T: Scalar>(w: f64) -> Result<T> {
    T::from_f64(w).ok_or_else(|| Error::Domain(format!("weight {w} is not finite")))
}

fn check_policy(x: Report, y: &Summary) -> Result<()> {
    if y.is_consistent_with(x) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "policy maps report {x} to inconsistent summary {y}"
        )))
    }
}

/// Semantic loss of a deterministic policy, in closed form:
/// `Σ_x p(x) Σ_W u(x, W) (1 - i_{policy(x)}(W))`.
pub fn semantic_loss<T, F>(p: &ReportDistribution<T>, policy: F, u: &SemanticWeights) -> Result<T>
where
    T: Scalar,
    F: Fn(Report) -> Summary,
{
    let mut total = T::zero();
    for x in p.support() {
        let y = policy(x);
        check_policy(x, &y)?;
        total = total + p.prob(x).clone() * report_loss(p, x, &y, u)?;
    }
    Ok(total)
}

/// Loss evaluated from the variational-distance definition.
///
/// `constructive` evaluates each inner infimum at an explicit minimizer
/// (the interpretation restricted to `W` plus an even share of the missing
/// mass) and measures its distance directly. `grid` minimizes the distance
/// over every distribution on `W` whose entries are multiples of
/// `1 / grid_resolution`.
#[derive(Debug, Clone, PartialEq)]
pub struct DefinitionalLoss<T> {
    pub constructive: T,
    pub grid: f64,
    pub grid_resolution: usize,
}

impl<T: Scalar> DefinitionalLoss<T> {
    /// Best available value: the smaller of the two upper estimates.
    pub fn value(&self) -> f64 {
        self.constructive.as_f64().min(self.grid)
    }
}

/// `Σ_a |q(a) - i(a)| / 2`.
pub fn variational_distance<T: Scalar>(q: &[T], i: &[T]) -> T {
    let two = T::from_ratio(2, 1);
    q.iter()
        .zip(i)
        .fold(T::zero(), |acc, (a, b)| {
            acc + (a.clone() - b.clone()).abs_value()
        })
        / two
}

/// A distribution on `set` dominating `i` pointwise on `set`.
pub fn constructive_minimizer<T: Scalar>(set: &ReportSet, i: &Interpretation<T>) -> Vec<T> {
    let n = i.probs().len();
    let missing = T::one() - i.mass(set);
    let share = missing / T::from_ratio(set.len() as u64, 1);
    let mut q = vec![T::zero(); n];
    for a in set.iter() {
        q[a.index()] = i.prob(a).clone() + share.clone();
    }
    q
}

/// Minimum of `Σ_{a∈W} |k_a/G - i(a)|` over non-negative integers summing to `G`,
/// by dynamic programming over the coordinates of `W`.
fn grid_min_distance(set: &ReportSet, i: &[f64], resolution: usize) -> f64 {
    let g = resolution as f64;
    let mut best = vec![f64::INFINITY; resolution + 1];
    best[0] = 0.0;
    for a in set.iter() {
        let target = i[a.index()];
        let mut next = vec![f64::INFINITY; resolution + 1];
        for (used, &base) in best.iter().enumerate() {
            if !base.is_finite() {
                continue;
            }
            for k in 0..=resolution - used {
                let cost = base + (k as f64 / g - target).abs();
                if cost < next[used + k] {
                    next[used + k] = cost;
                }
            }
        }
        best = next;
    }
    let outside: f64 = i
        .iter()
        .enumerate()
        .filter(|(idx, _)| !set.contains(Report::from_mask(*idx as u32)))
        .map(|(_, v)| v)
        .sum();
    (best[resolution] + outside) / 2.0
}

/// Semantic loss from its definition, for cross-checking [`semantic_loss`].
pub fn semantic_loss_definitional<T, F>(
    p: &ReportDistribution<T>,
    policy: F,
    u: &SemanticWeights,
    grid_resolution: usize,
) -> Result<DefinitionalLoss<T>>
where
    T: Scalar,
    F: Fn(Report) -> Summary,
{
    if grid_resolution < 10 {
        return Err(Error::Domain(format!(
            "grid resolution must be at least 10, got {grid_resolution}"
        )));
    }
    let mut constructive = T::zero();
    let mut grid = 0.0;
    for x in p.support() {
        let y = policy(x);
        check_policy(x, &y)?;
        let mut entries = u.entries_for(x).peekable();
        if entries.peek().is_none() {
            continue;
        }
        let i = interpretation(p, &y)?;
        let i_f64: Vec<f64> = i.probs().iter().map(Scalar::as_f64).collect();
        let px = p.prob(x).clone();
        for e in entries {
            let w = weight::<T>(e.weight)?;
            let q = constructive_minimizer(&e.set, &i);
            let dist = variational_distance(&q, i.probs());
            constructive = constructive + px.clone() * w * dist;
            grid += px.as_f64() * e.weight * grid_min_distance(&e.set, &i_f64, grid_resolution);
        }
    }
    Ok(DefinitionalLoss {
        constructive,
        grid,
        grid_resolution,
    })
}

/// A real number or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(*v),
            Extended::Infinite => None,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

/// A convex `f` on `(0, ∞)` with `f(1) = 0`, plus its boundary behaviour.
///
/// `f_at_zero` is `lim_{t→0} f(t)` and `slope_at_infinity` is
/// `lim_{t→∞} f(t)/t`; either may be infinite.
#[derive(Debug, Clone, Copy)]
pub struct ConvexGenerator {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
    pub f_at_zero: Extended,
    pub slope_at_infinity: Extended,
}

impl ConvexGenerator {
    /// `|t - 1| / 2`; variational distance.
    pub fn total_variation() -> Self {
        Self {
            name: "total-variation",
            f: |t| (t - 1.0).abs() / 2.0,
            f_at_zero: Extended::Finite(0.5),
            slope_at_infinity: Extended::Finite(0.5),
        }
    }

    /// `t ln t`; Kullback-Leibler divergence.
    pub fn kullback_leibler() -> Self {
        Self {
            name: "kl",
            f: |t| if t == 0.0 { 0.0 } else { t * t.ln() },
            f_at_zero: Extended::Finite(0.0),
            slope_at_infinity: Extended::Infinite,
        }
    }

    /// `-ln t`; reverse Kullback-Leibler divergence.
    pub fn reverse_kl() -> Self {
        Self {
            name: "reverse-kl",
            f: |t| -t.ln(),
            f_at_zero: Extended::Infinite,
            slope_at_infinity: Extended::Finite(0.0),
        }
    }

    /// `(t - 1)^2`; Pearson chi-square divergence.
    pub fn chi_square() -> Self {
        Self {
            name: "chi-square",
            f: |t| (t - 1.0) * (t - 1.0),
            f_at_zero: Extended::Finite(1.0),
            slope_at_infinity: Extended::Infinite,
        }
    }

    pub fn builtins() -> [Self; 4] {
        [
            Self::total_variation(),
            Self::kullback_leibler(),
            Self::reverse_kl(),
            Self::chi_square(),
        ]
    }

    /// Midpoint convexity spot check on `points` (pairs and a few mixing weights).
    pub fn spot_check_convexity(&self, points: &[f64]) -> bool {
        let lambdas = [0.1, 0.25, 0.5, 0.75, 0.9];
        points.iter().all(|&a| {
            points.iter().all(|&b| {
                lambdas.iter().all(|&l| {
                    let lhs = (self.f)(l * a + (1.0 - l) * b);
                    let rhs = l * (self.f)(a) + (1.0 - l) * (self.f)(b);
                    lhs <= rhs + 1e-12 * (1.0 + rhs.abs())
                })
            })
        })
    }
}

/// `D_f(1_x ‖ i) = f(0) + i(x) [f(1/i(x)) - f(0)]`.
///
/// When `i(x) = 0` the value is `f(0) + lim_{t→∞} f(t)/t`; when `f(0)` is
/// infinite the value is infinite unless `i(x) = 1`.
pub fn f_divergence_point<T: Scalar>(
    f: &ConvexGenerator,
    x: Report,
    i: &Interpretation<T>,
) -> Extended {
    let ix = i.prob(x).as_f64().clamp(0.0, 1.0);
    if ix == 0.0 {
        return match (f.f_at_zero, f.slope_at_infinity) {
            (Extended::Finite(f0), Extended::Finite(s)) => Extended::Finite(f0 + s),
            _ => Extended::Infinite,
        };
    }
    match f.f_at_zero {
        Extended::Finite(f0) => Extended::Finite(f0 + ix * ((f.f)(1.0 / ix) - f0)),
        Extended::Infinite if ix == 1.0 => Extended::Finite((f.f)(1.0)),
        Extended::Infinite => Extended::Infinite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Exact};

    fn ab(v: u8) -> Alphabet {
        Alphabet::new(v).unwrap()
    }

    fn p1234() -> ReportDistribution<Exact> {
        ReportDistribution::new(
            ab(2),
            vec![ratio(1, 10), ratio(2, 10), ratio(3, 10), ratio(4, 10)],
        )
        .unwrap()
    }

    #[test]
    fn distribution_validation() {
        assert!(ReportDistribution::new(ab(1), vec![0.5, 0.4]).is_err());
        assert!(ReportDistribution::new(ab(1), vec![1.5, -0.5]).is_err());
        assert!(ReportDistribution::new(ab(1), vec![0.5]).is_err());
        let exact = ReportDistribution::new(ab(2), vec![0.1, 0.2, 0.3, 0.4])
            .unwrap()
            .to_exact()
            .unwrap();
        let total = exact.mass(ab(2).reports());
        assert!(total.is_unit_sum());
        let prod = ReportDistribution::product(ab(2), &[0.5, 0.25]).unwrap();
        assert_eq!(prod.probs(), &[0.375, 0.375, 0.125, 0.125]);
    }

    #[test]
    fn interpretation_uniform_and_skewed() {
        let a = ab(2);
        let y = Summary::new(a, 0b01, 0b01).unwrap();
        let uni = ReportDistribution::<Exact>::uniform(a);
        let i = interpretation(&uni, &y).unwrap();
        assert_eq!(i.probs(), &[ratio(0, 1), ratio(1, 2), ratio(0, 1), ratio(1, 2)]);

        let i = interpretation(&p1234(), &y).unwrap();
        assert_eq!(*i.prob(Report::from_mask(1)), ratio(1, 3));
        assert_eq!(*i.prob(Report::from_mask(3)), ratio(2, 3));
        assert!(i.probs().iter().cloned().fold(ratio(0, 1), |a, b| a + b).is_unit_sum());
    }

    #[test]
    fn interpretation_of_impossible_summary() {
        let a = ab(2);
        let p = ReportDistribution::new(a, vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        let y = Summary::new(a, 0b01, 0b01).unwrap();
        assert!(matches!(
            interpretation(&p, &y),
            Err(Error::UndefinedInterpretation(_))
        ));
    }

    #[test]
    fn set_loss_cases() {
        let a = ab(2);
        let y = Summary::new(a, 0b01, 0b01).unwrap();
        let i = interpretation(&p1234(), &y).unwrap();
        let all = ReportSet::all(a);
        assert_eq!(set_loss(&all, &i), ratio(0, 1));
        let disjoint = ReportSet::new([Report::from_mask(0), Report::from_mask(2)]);
        assert_eq!(set_loss(&disjoint, &i), ratio(1, 1));
        let w = ReportSet::singleton(Report::from_mask(3));
        assert_eq!(set_loss(&w, &i), ratio(1, 3));
    }

    #[test]
    fn set_loss_matches_grid_search() {
        // brute force over q on {3}∪{1} with step 1/1000
        let a = ab(2);
        let y = Summary::new(a, 0b01, 0b01).unwrap();
        let i = interpretation(&p1234().to_f64(), &y).unwrap();
        let w = ReportSet::new([Report::from_mask(3)]);
        let mut best = f64::INFINITY;
        for k in 0..=1000 {
            let mut q = vec![0.0; 4];
            q[3] = k as f64 / 1000.0;
            // mass not on W is not allowed; only k = 1000 is a distribution on W
            if k != 1000 {
                continue;
            }
            best = best.min(variational_distance(&q, i.probs()));
        }
        assert!((best - set_loss(&w, &i)).abs() < 1e-12);
        let w2 = ReportSet::new([Report::from_mask(1), Report::from_mask(2)]);
        let mut best = f64::INFINITY;
        for k in 0..=1000 {
            let mut q = vec![0.0; 4];
            q[1] = k as f64 / 1000.0;
            q[2] = 1.0 - q[1];
            best = best.min(variational_distance(&q, i.probs()));
        }
        assert!((best - set_loss(&w2, &i)).abs() < 1e-3);
    }

    #[test]
    fn semantic_loss_example() {
        let a = ab(2);
        let u = SemanticWeights::identification(a);
        // per-report argmax of i_y(x), enumerated by hand
        let policy = |x: Report| {
            let events = match x.mask() {
                0 | 1 => 0b10,
                _ => 0b01,
            };
            Summary::of_report(x, events)
        };
        let loss = semantic_loss(&p1234(), policy, &u).unwrap();
        assert_eq!(loss, ratio(41, 120));
        let empty = SemanticWeights::new(a);
        assert_eq!(semantic_loss(&p1234(), policy, &empty).unwrap(), ratio(0, 1));
        let full = |x: Report| Summary::of_report(x, 0b11);
        assert_eq!(semantic_loss(&p1234(), full, &u).unwrap(), ratio(0, 1));
    }

    #[test]
    fn inconsistent_policy_rejected() {
        let a = ab(2);
        let u = SemanticWeights::identification(a);
        let bad = |_x: Report| Summary::new(a, 0b01, 0b01).unwrap();
        assert!(matches!(
            semantic_loss(&p1234(), bad, &u),
            Err(Error::Domain(_))
        ));
        // a zero-probability report may map anywhere
        let p = ReportDistribution::new(a, vec![0.0, 0.5, 0.0, 0.5]).unwrap();
        assert!(semantic_loss(&p, bad, &u).is_ok());
    }

    #[test]
    fn definitional_loss_cases() {
        let a = ab(2);
        let u = SemanticWeights::identification(a);
        let policy = |x: Report| Summary::of_report(x, 0b01);
        let closed = semantic_loss(&p1234(), policy, &u).unwrap();
        let def = semantic_loss_definitional(&p1234(), policy, &u, 200).unwrap();
        assert_eq!(def.constructive, closed);
        // singleton W: only one q, grid is exact
        assert!((def.grid - closed.as_f64()).abs() < 1e-12);
        let empty = SemanticWeights::new(a);
        let def = semantic_loss_definitional(&p1234(), policy, &empty, 50).unwrap();
        assert_eq!(def.constructive, ratio(0, 1));
        assert_eq!(def.grid, 0.0);
        assert!(semantic_loss_definitional(&p1234(), policy, &u, 9).is_err());
    }

    #[test]
    fn f_divergence_closed_forms() {
        let a = ab(2);
        let y = Summary::new(a, 0b01, 0b01).unwrap();
        let i = interpretation(&p1234().to_f64(), &y).unwrap();
        let x = Report::from_mask(1);
        let ix = 1.0 / 3.0;
        let tv = f_divergence_point(&ConvexGenerator::total_variation(), x, &i);
        let sl = set_loss(&ReportSet::singleton(x), &i);
        assert!((tv.finite().unwrap() - sl).abs() <= 4.0 * f64::EPSILON);
        let kl = f_divergence_point(&ConvexGenerator::kullback_leibler(), x, &i);
        assert!((kl.finite().unwrap() + f64::ln(ix)).abs() < 1e-12);
        let chi = f_divergence_point(&ConvexGenerator::chi_square(), x, &i);
        assert!((chi.finite().unwrap() - (1.0 - ix) / ix).abs() < 1e-12);
        assert_eq!(
            f_divergence_point(&ConvexGenerator::reverse_kl(), x, &i),
            Extended::Infinite
        );
    }

    #[test]
    fn f_divergence_boundaries() {
        let a = ab(2);
        let full = Summary::new(a, 0b11, 0b11).unwrap();
        let i = interpretation(&p1234().to_f64(), &full).unwrap();
        let x = Report::from_mask(3);
        for g in ConvexGenerator::builtins() {
            assert_eq!(f_divergence_point(&g, x, &i), Extended::Finite(0.0), "{}", g.name);
        }
        // i(x) = 0
        let y = Summary::new(a, 0b01, 0b01).unwrap();
        let i = interpretation(&p1234().to_f64(), &y).unwrap();
        let outside = Report::from_mask(0);
        assert_eq!(
            f_divergence_point(&ConvexGenerator::total_variation(), outside, &i),
            Extended::Finite(1.0)
        );
        assert!(f_divergence_point(&ConvexGenerator::kullback_leibler(), outside, &i).is_infinite());
        assert!(f_divergence_point(&ConvexGenerator::chi_square(), outside, &i).is_infinite());
        assert!(f_divergence_point(&ConvexGenerator::reverse_kl(), outside, &i).is_infinite());
    }

    #[test]
    fn builtin_generators_are_convex() {
        let grid: Vec<f64> = (1..=40).map(|k| k as f64 * 0.25).collect();
        for g in ConvexGenerator::builtins() {
            assert!(g.spot_check_convexity(&grid), "{}", g.name);
            assert!((g.f)(1.0).abs() < 1e-15, "{}", g.name);
        }
        let concave = ConvexGenerator {
            name: "sqrt",
            f: |t: f64| -(t.sqrt()) + 1.0 - 2.0 * (t - 1.0).max(0.0),
            f_at_zero: Extended::Finite(1.0),
            slope_at_infinity: Extended::Finite(-2.0),
        };
        assert!(!concave.spot_check_convexity(&grid));
    }
}
