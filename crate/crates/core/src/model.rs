//! Reports, summaries, empirical statistics and type counting.
//!
//! A report over `v` possible events is a `v`-bit mask: event `e` (1-based)
//! occurred iff bit `e - 1` is set. A summary picks `j` events and states
//! whether each occurred; summaries are always truthful, so a summary is
//! built from the report it describes and can never contradict it.
//!
//! All enumeration is in increasing bitmask order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hard cap on the number of possible events; keeps `2^v` enumerable.
pub const MAX_EVENTS: u8 = 16;

/// The set of possible events `{1, .., v}` and the report space `2^v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    v: u8,
}

impl Alphabet {
    pub fn new(v: u8) -> Result<Self> {
        if v == 0 || v > MAX_EVENTS {
            return Err(Error::Domain(format!(
                "number of events must lie in 1..={MAX_EVENTS}, got {v}"
            )));
        }
        Ok(Self { v })
    }

    /// Number of possible events `v`.
    pub fn events(&self) -> u8 {
        self.v
    }

    /// Size of the report space, `2^v`.
    pub fn size(&self) -> usize {
        1usize << self.v
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.v) - 1) as u32
    }

    pub fn contains(&self, report: Report) -> bool {
        (report.0 as usize) < self.size()
    }

    pub fn report(&self, mask: u32) -> Result<Report> {
        let r = Report(mask);
        if self.contains(r) {
            Ok(r)
        } else {
            Err(Error::Domain(format!(
                "report mask {mask} out of range for v = {}",
                self.v
            )))
        }
    }

    /// Every report, in increasing mask order.
    pub fn reports(&self) -> impl Iterator<Item = Report> {
        (0..self.size() as u32).map(Report)
    }
}

/// A full assignment of the `v` events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report(u32);

impl Report {
    /// Wraps a mask without range checking; see [`Alphabet::report`].
    pub const fn from_mask(mask: u32) -> Self {
        Report(mask)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    /// Whether 1-based event `event` occurred.
    pub fn has_event(&self, event: u8) -> bool {
        event >= 1 && (self.0 >> (event - 1)) & 1 == 1
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of reports, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReportSet(Vec<Report>);

impl ReportSet {
    pub fn new(reports: impl IntoIterator<Item = Report>) -> Self {
        let mut v: Vec<Report> = reports.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn singleton(report: Report) -> Self {
        Self(vec![report])
    }

    pub fn all(alphabet: Alphabet) -> Self {
        Self(alphabet.reports().collect())
    }

    pub fn contains(&self, report: Report) -> bool {
        self.0.binary_search(&report).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Report> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &ReportSet) -> bool {
        self.iter().all(|r| other.contains(r))
    }

    pub fn union(&self, other: &ReportSet) -> ReportSet {
        ReportSet::new(self.iter().chain(other.iter()))
    }
}

impl FromIterator<Report> for ReportSet {
    fn from_iter<I: IntoIterator<Item = Report>>(iter: I) -> Self {
        ReportSet::new(iter)
    }
}

/// `x^n`: the current report followed by the report history.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReportSequence {
    alphabet: Alphabet,
    reports: Vec<Report>,
}

impl ReportSequence {
    pub fn new(alphabet: Alphabet, reports: Vec<Report>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::Domain("report sequence must be non-empty".into()));
        }
        if let Some(bad) = reports.iter().find(|r| !alphabet.contains(**r)) {
            return Err(Error::Domain(format!(
                "report {bad} out of range for v = {}",
                alphabet.events()
            )));
        }
        Ok(Self { alphabet, reports })
    }

    pub fn from_masks(alphabet: Alphabet, masks: &[u32]) -> Result<Self> {
        Self::new(alphabet, masks.iter().copied().map(Report).collect())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// `x(1)`.
    pub fn current(&self) -> Report {
        self.reports[0]
    }

    pub fn history(&self) -> &[Report] {
        &self.reports[1..]
    }

    pub fn reports(&self) -> &[Report] {
        &self.reports
    }

    pub fn len(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A truthful `j`-event summary `(events, values)`.
///
/// `values` holds the occurrence bits of the selected events, at the events'
/// own bit positions; bits outside `events` are always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Summary {
    events: u32,
    values: u32,
}

impl Summary {
    pub fn new(alphabet: Alphabet, events: u32, values: u32) -> Result<Self> {
        if events & !alphabet.full_mask() != 0 || events == 0 {
            return Err(Error::Domain(format!(
                "events mask {events:#b} is empty or out of range for v = {}",
                alphabet.events()
            )));
        }
        if values & !events != 0 {
            return Err(Error::Domain(format!(
                "values {values:#b} set bits outside the selected events {events:#b}"
            )));
        }
        Ok(Self { events, values })
    }

    /// The summary of `report` that reveals exactly the events in `events`.
    pub fn of_report(report: Report, events: u32) -> Self {
        Self {
            events,
            values: report.mask() & events,
        }
    }

    pub fn events_mask(&self) -> u32 {
        self.events
    }

    pub fn values_mask(&self) -> u32 {
        self.values
    }

    /// `j`, the number of selected events.
    pub fn len(&self) -> usize {
        self.events.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.events == 0
    }

    /// Selected events (1-based) with their occurrence bits.
    pub fn entries(&self) -> impl Iterator<Item = (u8, bool)> + '_ {
        (0..32u8)
            .filter(|b| (self.events >> b) & 1 == 1)
            .map(|b| (b + 1, (self.values >> b) & 1 == 1))
    }

    /// `x ∈ X(y)`.
    pub fn is_consistent_with(&self, report: Report) -> bool {
        report.mask() & self.events == self.values
    }

    /// `X(y)` in increasing mask order.
    pub fn consistent_reports(&self, alphabet: Alphabet) -> impl Iterator<Item = Report> {
        let free = alphabet.full_mask() & !self.events;
        let values = self.values;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let sub = next?;
            // submasks of `free` in increasing order
            next = if sub == free {
                None
            } else {
                Some(sub.wrapping_sub(free) & free)
            };
            Some(Report(values | sub))
        })
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (event, occurred)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{event}={}", u8::from(occurred))?;
        }
        write!(f, "}}")
    }
}

/// Event masks with exactly `j` of `v` bits set, increasing.
pub(crate) fn event_subsets(v: u8, j: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << v;
    let mut next = if j == 0 || j > v as usize {
        None
    } else {
        Some((1u64 << j) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        // Gosper's hack
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        let succ = (((r ^ cur) >> 2) / c) | r;
        next = (succ < limit).then_some(succ);
        Some(cur as u32)
    })
}

/// All `C(v, j)` truthful summaries of `x`, ordered by events mask.
pub fn consistent_summaries(alphabet: Alphabet, x: Report, j: usize) -> Result<Vec<Summary>> {
    if j == 0 || j > alphabet.events() as usize {
        return Err(Error::Domain(format!(
            "summary length must lie in 1..={}, got {j}",
            alphabet.events()
        )));
    }
    if !alphabet.contains(x) {
        return Err(Error::Domain(format!("report {x} out of range")));
    }
    Ok(event_subsets(alphabet.events(), j)
        .map(|events| Summary::of_report(x, events))
        .collect())
}

/// `X(y) = {x : y ⊂ x}`.
pub fn consistent_reports(alphabet: Alphabet, y: &Summary) -> ReportSet {
    ReportSet(y.consistent_reports(alphabet).collect())
}

/// Occurrence counts `n·π^(x^n)` over the report alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmpiricalCounts {
    counts: Vec<u64>,
    n: u64,
}

impl EmpiricalCounts {
    /// Counts over an alphabet of `counts.len()` symbols.
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let n = counts.iter().sum();
        Self { counts, n }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, report: Report) -> u64 {
        self.counts.get(report.index()).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `π^(x^n)(a)`.
    pub fn frequency<T: Scalar>(&self, report: Report) -> T {
        T::from_ratio(self.count(report), self.n.max(1))
    }

    /// Non-zero entries as a map.
    pub fn support(&self) -> BTreeMap<Report, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(i, c)| (Report(i as u32), *c))
            .collect()
    }

    /// `|T^n_(x^n)|`.
    pub fn type_class_size(&self) -> BigUint {
        multinomial(&self.counts)
    }

    pub fn ln_type_class_size(&self) -> f64 {
        ln_factorial(self.n) - self.counts.iter().map(|&c| ln_factorial(c)).sum::<f64>()
    }
}

/// Empirical counts of `x^n`.
pub fn empirical(sequence: &ReportSequence) -> EmpiricalCounts {
    let mut counts = vec![0u64; sequence.alphabet().size()];
    for r in sequence.reports() {
        counts[r.index()] += 1;
    }
    EmpiricalCounts::from_counts(counts)
}

/// `|T^n|` for the given counts: `n! / Π counts(a)!`.
pub fn type_class_size(counts: &EmpiricalCounts) -> BigUint {
    counts.type_class_size()
}

/// `|P_n(X)| = C(n + |X| - 1, |X| - 1)`.
pub fn num_types(n: u64, alphabet_size: u64) -> Result<BigUint> {
    if n == 0 || alphabet_size == 0 {
        return Err(Error::Domain(format!(
            "num_types needs n >= 1 and |X| >= 1, got n = {n}, |X| = {alphabet_size}"
        )));
    }
    Ok(binomial(n + alphabet_size - 1, alphabet_size - 1))
}

pub fn ln_num_types(n: u64, alphabet_size: u64) -> f64 {
    ln_binomial(n + alphabet_size - 1, alphabet_size - 1)
}

pub fn factorial(m: u64) -> BigUint {
    (2..=m).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    // running product stays integral: C(n-k+i, i) at step i
    (1..=k).fold(BigUint::one(), |acc, i| acc * (n - k + i) / i)
}

pub fn multinomial(counts: &[u64]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &c in counts {
        total += c;
        acc *= binomial(total, c);
    }
    acc
}

/// `ln m!`, exact summation for small `m`, Stirling series beyond.
pub fn ln_factorial(m: u64) -> f64 {
    if m < 256 {
        return (2..=m).map(|k| (k as f64).ln()).sum();
    }
    let x = m as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Importance `u(x, W)` that a summary conveys `x ∈ W`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub report: Report,
    pub set: ReportSet,
    pub weight: f64,
}

/// Sparse semantic weights `u : X × 2^X → R+`.
///
/// Entries always satisfy `x ∈ W`, carry a finite non-negative weight, and
/// there is at most one entry per `(x, W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticWeights {
    alphabet: Alphabet,
    entries: Vec<WeightEntry>,
    by_report: BTreeMap<Report, Vec<usize>>,
}

impl SemanticWeights {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            entries: Vec::new(),
            by_report: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn insert(&mut self, report: Report, set: ReportSet, weight: f64) -> Result<()> {
        if !self.alphabet.contains(report) || set.iter().any(|r| !self.alphabet.contains(r)) {
            return Err(Error::Domain("weight entry references an out-of-range report".into()));
        }
        if !set.contains(report) {
            return Err(Error::Domain(format!(
                "weight entry for report {report} must have the report in its set"
            )));
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::Domain(format!(
                "weights must be finite and non-negative, got {weight}"
            )));
        }
        if self.entries_for(report).any(|e| e.set == set) {
            return Err(Error::Domain(format!(
                "duplicate weight entry for report {report}"
            )));
        }
        self.by_report
            .entry(report)
            .or_default()
            .push(self.entries.len());
        self.entries.push(WeightEntry {
            report,
            set,
            weight,
        });
        Ok(())
    }

    /// `u(x, {x}) = 1` for every report.
    pub fn identification(alphabet: Alphabet) -> Self {
        let mut u = Self::new(alphabet);
        for x in alphabet.reports() {
            u.insert(x, ReportSet::singleton(x), 1.0)
                .expect("identification entries are valid");
        }
        u
    }

    /// `u(x, W_e(x)) = weights[e-1]`, where `W_e(x)` holds the reports that
    /// agree with `x` on event `e`.
    pub fn per_event(alphabet: Alphabet, weights: &[f64]) -> Result<Self> {
        if weights.len() != alphabet.events() as usize {
            return Err(Error::Domain(format!(
                "expected {} per-event weights, got {}",
                alphabet.events(),
                weights.len()
            )));
        }
        let mut u = Self::new(alphabet);
        for x in alphabet.reports() {
            for (bit, &w) in weights.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let event_mask = 1u32 << bit;
                let set = alphabet
                    .reports()
                    .filter(|r| r.mask() & event_mask == x.mask() & event_mask)
                    .collect();
                u.insert(x, set, w)?;
            }
        }
        Ok(u)
    }

    pub fn entries(&self) -> &[WeightEntry] {
        &self.entries
    }

    /// Entries with first argument `report`.
    pub fn entries_for(&self, report: Report) -> impl Iterator<Item = &WeightEntry> + '_ {
        self.by_report
            .get(&report)
            .into_iter()
            .flatten()
            .map(move |&i| &self.entries[i])
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.entries.iter().map(|e| e.weight).sum()
    }

    /// `u* = Σ_x |X|^{-1} Σ_W u(x, W)`.
    pub fn u_star(&self) -> f64 {
        self.total_weight() / self.alphabet.size() as f64
    }

    /// Pointwise sum `u + other`.
    pub fn combined(&self, other: &SemanticWeights) -> Result<SemanticWeights> {
        if self.alphabet != other.alphabet {
            return Err(Error::Domain("weights over different alphabets".into()));
        }
        let mut merged: BTreeMap<(Report, ReportSet), f64> = BTreeMap::new();
        for e in self.entries.iter().chain(other.entries.iter()) {
            *merged.entry((e.report, e.set.clone())).or_default() += e.weight;
        }
        let mut u = SemanticWeights::new(self.alphabet);
        for ((x, w_set), w) in merged {
            u.insert(x, w_set, w)?;
        }
        Ok(u)
    }
}

/// Exact `π^(x^n)(a)` as a rational.
pub fn frequency_exact(counts: &EmpiricalCounts, report: Report) -> BigRational {
    counts.frequency(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn ab(v: u8) -> Alphabet {
        Alphabet::new(v).unwrap()
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::new(17).is_err());
        assert_eq!(ab(16).size(), 65536);
        assert!(ab(2).report(4).is_err());
    }

    #[test]
    fn summaries_v2_j1_mask3() {
        let s = consistent_summaries(ab(2), Report(3), 1).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0], Summary::new(ab(2), 0b01, 0b01).unwrap());
        assert_eq!(s[1], Summary::new(ab(2), 0b10, 0b10).unwrap());
        assert_eq!(s[0].entries().collect::<Vec<_>>(), vec![(1, true)]);
        assert_eq!(s[1].entries().collect::<Vec<_>>(), vec![(2, true)]);
    }

    #[test]
    fn summaries_counts_and_order() {
        let s = consistent_summaries(ab(7), Report(0b1010101), 2).unwrap();
        assert_eq!(s.len(), 21);
        assert!(s.windows(2).all(|w| w[0].events_mask() < w[1].events_mask()));
        let full = consistent_summaries(ab(3), Report(5), 3).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].values_mask(), 5);
        assert!(consistent_summaries(ab(3), Report(5), 0).is_err());
        assert!(consistent_summaries(ab(3), Report(5), 4).is_err());
    }

    #[test]
    fn consistent_report_sets() {
        let a = ab(2);
        let y = Summary::new(a, 0b01, 0b01).unwrap();
        assert_eq!(
            consistent_reports(a, &y),
            ReportSet::new([Report(1), Report(3)])
        );
        let a3 = ab(3);
        let full = Summary::new(a3, 0b111, 0b101).unwrap();
        assert_eq!(consistent_reports(a3, &full).len(), 1);
        let y2 = Summary::new(a3, 0b010, 0).unwrap();
        let xs = consistent_reports(a3, &y2);
        assert_eq!(xs.len(), 4);
        assert!(xs.iter().all(|r| !r.has_event(2)));
    }

    #[test]
    fn empirical_counts_example() {
        let seq = ReportSequence::from_masks(ab(1), &[0, 1, 1, 1]).unwrap();
        let c = empirical(&seq);
        assert_eq!(c.count(Report(0)), 1);
        assert_eq!(c.count(Report(1)), 3);
        assert_eq!(frequency_exact(&c, Report(0)), ratio(1, 4));
        assert_eq!(c.type_class_size(), BigUint::from(4u32));

        let constant = ReportSequence::from_masks(ab(2), &[2; 5]).unwrap();
        let c = empirical(&constant);
        assert_eq!(c.support(), BTreeMap::from([(Report(2), 5)]));
        assert_eq!(c.type_class_size(), BigUint::from(1u32));

        let single = ReportSequence::from_masks(ab(2), &[3]).unwrap();
        assert_eq!(empirical(&single).support(), BTreeMap::from([(Report(3), 1)]));
        assert!(ReportSequence::from_masks(ab(2), &[]).is_err());
    }

    #[test]
    fn type_class_size_matches_enumeration() {
        // sequences of length 4 over {a, b} with two of each
        let brute = (0u32..16).filter(|m| m.count_ones() == 2).count();
        let c = EmpiricalCounts::from_counts(vec![2, 2]);
        assert_eq!(c.type_class_size(), BigUint::from(brute));
        assert_eq!(brute, 6);
    }

    #[test]
    fn num_types_matches_enumeration() {
        assert_eq!(num_types(2, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(num_types(1, 4).unwrap(), BigUint::from(4u32));
        let mut brute = 0;
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    let _d = 3 - a - b - c;
                    brute += 1;
                }
            }
        }
        assert_eq!(num_types(3, 4).unwrap(), BigUint::from(brute as u32));
        assert_eq!(brute, 20);
        assert!(num_types(0, 4).is_err());
    }

    #[test]
    fn log_space_counting_agrees() {
        let c = EmpiricalCounts::from_counts(vec![3, 5, 0, 7]);
        let exact: f64 = num_traits::ToPrimitive::to_f64(&c.type_class_size()).unwrap();
        assert!((c.ln_type_class_size() - exact.ln()).abs() < 1e-10);
        let exact_types: f64 = num_traits::ToPrimitive::to_f64(&num_types(15, 4).unwrap()).unwrap();
        assert!((ln_num_types(15, 4) - exact_types.ln()).abs() < 1e-10);
        let big = num_traits::ToPrimitive::to_f64(&factorial(300)).unwrap_or(f64::INFINITY);
        assert!(big.is_infinite());
        // Stirling branch against exact log of a large factorial via digits
        let f = factorial(400);
        let bits = f.bits() as f64;
        assert!((ln_factorial(400) / std::f64::consts::LN_2 - bits).abs() < 1.0);
    }

    #[test]
    fn weights_validation() {
        let a = ab(2);
        let mut u = SemanticWeights::new(a);
        assert!(u.insert(Report(1), ReportSet::singleton(Report(2)), 1.0).is_err());
        assert!(u.insert(Report(1), ReportSet::singleton(Report(1)), -1.0).is_err());
        assert!(u.insert(Report(1), ReportSet::singleton(Report(1)), f64::NAN).is_err());
        u.insert(Report(1), ReportSet::singleton(Report(1)), 2.0).unwrap();
        assert!(u.insert(Report(1), ReportSet::singleton(Report(1)), 1.0).is_err());
        assert_eq!(u.entries_for(Report(1)).count(), 1);
        assert_eq!(u.entries_for(Report(0)).count(), 0);
    }

    #[test]
    fn per_event_sets_contain_report() {
        let a = ab(3);
        let u = SemanticWeights::per_event(a, &[1.0, 0.0, 2.0]).unwrap();
        assert_eq!(u.len(), 16);
        for e in u.entries() {
            assert!(e.set.contains(e.report));
            assert_eq!(e.set.len(), 4);
        }
        assert_eq!(SemanticWeights::identification(a).u_star(), 1.0);
    }
}
