use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use semsum::loss::{f_divergence_point, interpretation, semantic_loss, set_loss, ConvexGenerator, Extended};
use semsum::model::{consistent_reports, consistent_summaries};
use semsum::numerics::checks::series_partial_exact;
use semsum::numerics::{series_closed_form, FactorialRatioSeries};
use semsum::summarizers::{known_p_scores, universal_scores};
use semsum::{Alphabet, Exact, Report, ReportDistribution, ReportSequence, ReportSet, SemanticWeights, Summary};

fn exact_distribution(alphabet: Alphabet, weights: &[u32]) -> ReportDistribution<Exact> {
    let w = weights
        .iter()
        .take(alphabet.size())
        .map(|&w| BigRational::from_integer(BigInt::from(w)))
        .collect();
    ReportDistribution::from_weights(alphabet, w).unwrap()
}

fn weights_from(alphabet: Alphabet, raw: &[(u32, u32, u8)]) -> SemanticWeights {
    let mut u = SemanticWeights::new(alphabet);
    for &(x, set_bits, quarter) in raw {
        let x = Report::from_mask(x % alphabet.size() as u32);
        let set: ReportSet = alphabet
            .reports()
            .filter(|r| *r == x || (set_bits >> r.index()) & 1 == 1)
            .collect();
        let _ = u.insert(x, set, f64::from(quarter) / 4.0);
    }
    u
}

fn permute_mask(mask: u32, perm: &[usize]) -> u32 {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (from, &to)| acc | (((mask >> from) & 1) << to))
}

fn dist_strategy() -> impl Strategy<Value = (u8, Vec<u32>)> {
    (1u8..=3).prop_flat_map(|v| (Just(v), prop::collection::vec(1u32..=20, 1usize << v)))
}

fn weight_strategy() -> impl Strategy<Value = Vec<(u32, u32, u8)>> {
    prop::collection::vec((0u32..8, any::<u32>(), 1u8..=4), 1..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summaries_partition_reports(v in 1u8..=5, events in 1u32..32) {
        let alphabet = Alphabet::new(v).unwrap();
        let events = events & alphabet.full_mask();
        prop_assume!(events != 0);
        let mut seen = vec![0u32; alphabet.size()];
        let mut values = 0u32;
        loop {
            let y = Summary::new(alphabet, events, values).unwrap();
            for r in consistent_reports(alphabet, &y).iter() {
                seen[r.index()] += 1;
            }
            if values == events {
                break;
            }
            values = ((values | !events) + 1) & events;
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn candidates_are_consistent(v in 1u8..=6, x in any::<u32>(), j in 1usize..=6) {
        let alphabet = Alphabet::new(v).unwrap();
        prop_assume!(j <= v as usize);
        let x = Report::from_mask(x & alphabet.full_mask());
        let candidates = consistent_summaries(alphabet, x, j).unwrap();
        prop_assert_eq!(candidates.len() as u64, binomial(v as u64, j as u64));
        for y in &candidates {
            prop_assert_eq!(y.len(), j);
            prop_assert!(consistent_reports(alphabet, y).contains(x));
        }
        prop_assert!(candidates.windows(2).all(|w| w[0].events_mask() < w[1].events_mask()));
    }

    #[test]
    fn interpretation_is_normalized((v, w) in dist_strategy(), x in 0u32..8, j in 1usize..=3) {
        let alphabet = Alphabet::new(v).unwrap();
        prop_assume!(j <= v as usize);
        let p = exact_distribution(alphabet, &w);
        let x = Report::from_mask(x % alphabet.size() as u32);
        for y in consistent_summaries(alphabet, x, j).unwrap() {
            let i = interpretation(&p, &y).unwrap();
            let total = i.probs().iter().fold(BigRational::zero(), |a, b| a + b);
            prop_assert!(total.is_one());
            for r in alphabet.reports() {
                if !y.is_consistent_with(r) {
                    prop_assert!(i.prob(r).is_zero());
                }
            }
        }
    }

    #[test]
    fn set_loss_shrinks_as_set_grows(
        (v, w) in dist_strategy(), x in 0u32..8, small in any::<u32>(), extra in any::<u32>()
    ) {
        let alphabet = Alphabet::new(v).unwrap();
        let p = exact_distribution(alphabet, &w);
        let x = Report::from_mask(x % alphabet.size() as u32);
        let y = consistent_summaries(alphabet, x, 1).unwrap()[0];
        let i = interpretation(&p, &y).unwrap();
        let inner: ReportSet = alphabet.reports().filter(|r| (small >> r.index()) & 1 == 1).collect();
        let outer = inner.union(&alphabet.reports().filter(|r| (extra >> r.index()) & 1 == 1).collect());
        let (a, b) = (set_loss(&inner, &i), set_loss(&outer, &i));
        prop_assert!(b <= a);
        prop_assert!(b >= BigRational::zero() && a <= BigRational::one());
    }

    #[test]
    fn loss_is_linear_in_weights(
        (v, w) in dist_strategy(), first in weight_strategy(), second in weight_strategy(), picks in any::<u64>()
    ) {
        let alphabet = Alphabet::new(v).unwrap();
        let p = exact_distribution(alphabet, &w);
        let u1 = weights_from(alphabet, &first);
        let u2 = weights_from(alphabet, &second);
        let both = u1.combined(&u2).unwrap();
        let policy: Vec<Summary> = alphabet
            .reports()
            .map(|x| {
                let c = consistent_summaries(alphabet, x, 1).unwrap();
                c[(picks >> (2 * x.index())) as usize % c.len()]
            })
            .collect();
        let choose = |x: Report| policy[x.index()];
        let separate = semantic_loss(&p, choose, &u1).unwrap() + semantic_loss(&p, choose, &u2).unwrap();
        prop_assert_eq!(semantic_loss(&p, choose, &both).unwrap(), separate);
    }

    #[test]
    fn divergence_falls_as_interpretation_mass_rises(
        (v, w) in dist_strategy(), x in 0u32..8, boost in 1u32..50
    ) {
        let alphabet = Alphabet::new(v).unwrap();
        let x = Report::from_mask(x % alphabet.size() as u32);
        let y = consistent_summaries(alphabet, x, 1).unwrap()[0];
        let mut raised = w.clone();
        raised[x.index()] += boost;
        let low = interpretation(&exact_distribution(alphabet, &w).to_f64(), &y).unwrap();
        let high = interpretation(&exact_distribution(alphabet, &raised).to_f64(), &y).unwrap();
        prop_assert!(high.prob(x) >= low.prob(x));
        for f in ConvexGenerator::builtins() {
            let (a, b) = (f_divergence_point(&f, x, &low), f_divergence_point(&f, x, &high));
            match (a, b) {
                (Extended::Finite(a), Extended::Finite(b)) => prop_assert!(b <= a + 1e-12, "{}: {b} > {a}", f.name),
                (Extended::Infinite, _) => {}
                (Extended::Finite(_), Extended::Infinite) => prop_assert!(false, "{} became infinite", f.name),
            }
        }
    }

    #[test]
    fn known_p_scores_follow_event_relabeling(
        (v, w) in dist_strategy(), raw in weight_strategy(), x in 0u32..8, j in 1usize..=3, rot in 0usize..3
    ) {
        let alphabet = Alphabet::new(v).unwrap();
        prop_assume!(j <= v as usize);
        let perm: Vec<usize> = (0..v as usize).map(|i| (i + rot) % v as usize).collect();
        let p = exact_distribution(alphabet, &w);
        let u = weights_from(alphabet, &raw);
        let x = Report::from_mask(x % alphabet.size() as u32);

        let mut moved = vec![BigRational::zero(); alphabet.size()];
        for r in alphabet.reports() {
            moved[permute_mask(r.mask(), &perm) as usize] = p.prob(r).clone();
        }
        let p2 = ReportDistribution::new(alphabet, moved).unwrap();
        let mut u2 = SemanticWeights::new(alphabet);
        for e in u.entries() {
            let set = e.set.iter().map(|r| Report::from_mask(permute_mask(r.mask(), &perm))).collect();
            u2.insert(Report::from_mask(permute_mask(e.report.mask(), &perm)), set, e.weight).unwrap();
        }

        let original: BTreeMap<(u32, u32), Exact> = known_p_scores(&p, x, j, &u)
            .unwrap()
            .into_iter()
            .map(|(y, s)| ((permute_mask(y.events_mask(), &perm), permute_mask(y.values_mask(), &perm)), s))
            .collect();
        let x2 = Report::from_mask(permute_mask(x.mask(), &perm));
        let relabeled: BTreeMap<(u32, u32), Exact> = known_p_scores(&p2, x2, j, &u2)
            .unwrap()
            .into_iter()
            .map(|(y, s)| ((y.events_mask(), y.values_mask()), s))
            .collect();
        prop_assert_eq!(original, relabeled);
    }

    #[test]
    fn universal_scores_follow_event_relabeling(
        v in 2u8..=3, masks in prop::collection::vec(0u32..8, 1..12), raw in weight_strategy(), rot in 1usize..3
    ) {
        let alphabet = Alphabet::new(v).unwrap();
        let perm: Vec<usize> = (0..v as usize).map(|i| (i + rot) % v as usize).collect();
        let masks: Vec<u32> = masks.iter().map(|m| m % alphabet.size() as u32).collect();
        let moved: Vec<u32> = masks.iter().map(|&m| permute_mask(m, &perm)).collect();
        let u = weights_from(alphabet, &raw);
        let mut u2 = SemanticWeights::new(alphabet);
        for e in u.entries() {
            let set = e.set.iter().map(|r| Report::from_mask(permute_mask(r.mask(), &perm))).collect();
            u2.insert(Report::from_mask(permute_mask(e.report.mask(), &perm)), set, e.weight).unwrap();
        }
        let s1 = ReportSequence::from_masks(alphabet, &masks).unwrap();
        let s2 = ReportSequence::from_masks(alphabet, &moved).unwrap();
        let a: BTreeMap<(u32, u32), Exact> = universal_scores(&s1, 1, &u)
            .unwrap()
            .into_iter()
            .map(|(y, s)| ((permute_mask(y.events_mask(), &perm), permute_mask(y.values_mask(), &perm)), s))
            .collect();
        let b: BTreeMap<(u32, u32), Exact> = universal_scores(&s2, 1, &u2)
            .unwrap()
            .into_iter()
            .map(|(y, s)| ((y.events_mask(), y.values_mask()), s))
            .collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn series_brackets_closed_form(b in 0u64..60, gap in 2u64..40, terms in 1u64..400) {
        let c = b + gap;
        let mut series = FactorialRatioSeries::new(b, c).unwrap();
        for _ in 0..terms {
            series.advance();
        }
        let closed = series_closed_form(b, c).unwrap();
        let partial = series_partial_exact(b, c, terms);
        prop_assert!(partial <= closed);
        let closed_f = semsum::Scalar::as_f64(&closed);
        prop_assert!((semsum::Scalar::as_f64(&partial) - series.value()).abs() <= 1e-12 * closed_f);
        prop_assert!(closed_f <= series.value() + series.tail_bound() + 1e-12 * closed_f);
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
