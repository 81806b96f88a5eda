//! Numerical kernels: the factorial-ratio series with a certified tail,
//! the `ε(a)` envelope, Beta integrals, uniform simplex sampling and the
//! bounding inequalities the series envelope is built from.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::model::factorial;

/// Term budget for [`series_sum_factorial_ratio`].
pub const MAX_SERIES_TERMS: u64 = 200_000_000;

/// Partial sum of a positive series with a certified bound on what is left.
///
/// The true sum lies in `[value, value + tail_bound]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub tail_bound: f64,
    pub terms_used: u64,
}

impl SeriesResult {
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

/// Incremental evaluation of `Σ_{k≥0} s(k)`, `s(k) = (b+k)! c! / ((c+k)! b!)`.
///
/// Terms follow from `s(k+1) = s(k) (b+k+1)/(c+k+1)`. After `s(K)` has been
/// added, the remaining terms satisfy
/// `s(k) ≤ s(K) ((c+K+1)/(c+k+1))^(c-b)` (from `1 - t ≤ e^{-t}` and an
/// integral bound on the harmonic sum), so the tail is at most
/// `s(K) (c+K+1) / (c-b-1)`.
#[derive(Debug, Clone)]
pub struct FactorialRatioSeries {
    b: u64,
    c: u64,
    next_index: u64,
    next_term: f64,
    sum: f64,
    last_term: f64,
}

impl FactorialRatioSeries {
    pub fn new(b: u64, c: u64) -> Result<Self> {
        if c < b + 2 {
            return Err(Error::Divergent {
                b: b as i64,
                c: c as i64,
            });
        }
        Ok(Self {
            b,
            c,
            next_index: 0,
            next_term: 1.0,
            sum: 0.0,
            last_term: 0.0,
        })
    }

    /// Adds the next term.
    pub fn advance(&mut self) {
        let k = self.next_index as f64;
        self.sum += self.next_term;
        self.last_term = self.next_term;
        self.next_term *= (self.b as f64 + k + 1.0) / (self.c as f64 + k + 1.0);
        self.next_index += 1;
    }

    pub fn terms(&self) -> u64 {
        self.next_index
    }

    pub fn value(&self) -> f64 {
        self.sum
    }

    /// Certified bound on the terms not yet added.
    pub fn tail_bound(&self) -> f64 {
        if self.next_index == 0 {
            return f64::INFINITY;
        }
        let last = self.next_index - 1;
        self.last_term * (self.c + last + 1) as f64 / (self.c - self.b - 1) as f64
    }

    pub fn result(&self) -> SeriesResult {
        SeriesResult {
            value: self.sum,
            tail_bound: self.tail_bound(),
            terms_used: self.next_index,
        }
    }
}

/// `Σ_{k≥0} (b+k)! c! / ((c+k)! b!)`, summed until the certified tail drops
/// below `tol`. With `tol == 0` the exact closed form
/// [`series_closed_form`] is returned with a zero tail.
pub fn series_sum_factorial_ratio(b: u64, c: u64, tol: f64) -> Result<SeriesResult> {
    let mut series = FactorialRatioSeries::new(b, c)?;
    if tol == 0.0 {
        let exact = series_closed_form(b, c)?;
        return Ok(SeriesResult {
            value: crate::scalar::Scalar::as_f64(&exact),
            tail_bound: 0.0,
            terms_used: 0,
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    loop {
        series.advance();
        if series.tail_bound() < tol {
            return Ok(series.result());
        }
        if series.terms() >= MAX_SERIES_TERMS {
            return Err(Error::SeriesBudget {
                tol,
                terms: series.terms(),
            });
        }
    }
}

/// `c / (c - b - 1)`, the exact value of the factorial-ratio series.
pub fn series_closed_form(b: u64, c: u64) -> Result<BigRational> {
    if c < b + 2 {
        return Err(Error::Divergent {
            b: b as i64,
            c: c as i64,
        });
    }
    Ok(BigRational::new(
        BigInt::from(c),
        BigInt::from(c - b - 1),
    ))
}

/// `ε(a) = 3 (1 + ln a)/a + 4 e^{1/12} 2^{-a/2}`.
pub fn epsilon(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("epsilon needs a > 0, got {a}")));
    }
    Ok(3.0 * (1.0 + a.ln()) / a + 4.0 * (1.0f64 / 12.0).exp() * (-a / 2.0).exp2())
}

/// `∫_0^c (c - x)^a x^b dx = a! b! / (a+b+1)! · c^{a+b+1}`.
pub fn beta_integral(a: u32, b: u32, c: f64) -> f64 {
    let coefficient = crate::scalar::Scalar::as_f64(&beta_coefficient(a, b));
    coefficient * c.powi((a + b + 1) as i32)
}

/// Exact rational form of [`beta_integral`].
pub fn beta_integral_exact(a: u32, b: u32, c: &BigRational) -> BigRational {
    beta_coefficient(a, b) * Pow::pow(c, a + b + 1)
}

fn beta_coefficient(a: u32, b: u32) -> BigRational {
    let num = factorial(a as u64) * factorial(b as u64);
    let den = factorial((a + b + 1) as u64);
    BigRational::new(num.into(), den.into())
}

/// Seeded generator for Monte Carlo stream `stream`.
///
/// ChaCha is counter based; distinct streams of the same seed never overlap,
/// so work can be split across threads without changing any draw.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A point uniform on the `(dim-1)`-simplex: normalized i.i.d. exponentials.
pub fn simplex_uniform_sample<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Vec<f64>> {
    if dim < 2 {
        return Err(Error::Domain(format!("simplex dimension must be >= 2, got {dim}")));
    }
    let mut draws: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    for d in &mut draws {
        *d /= total;
    }
    Ok(draws)
}

/// Bounds `((k+1)^{-(t-1)}/(t-1), k^{-(t-1)}/(t-1))` on `Σ_{j>k} j^{-t}`.
pub fn zeta_tail_bounds(k: u64, t: f64) -> Result<(f64, f64)> {
    if k < 1 || !(t > 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "zeta tail bounds need k >= 1 and t > 1, got k = {k}, t = {t}"
        )));
    }
    let s = t - 1.0;
    Ok(((k as f64 + 1.0).powf(-s) / s, (k as f64).powf(-s) / s))
}

/// Robbins' bounds on `ln m!`:
/// `ln √(2π) + (m+½) ln m - m + 1/(12m+1)` and the same with `1/(12m)`.
pub fn robbins_bounds(m: u64) -> Result<(f64, f64)> {
    if m < 1 {
        return Err(Error::Domain("Robbins bounds need m >= 1".into()));
    }
    let x = m as f64;
    let base = 0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * x.ln() - x;
    Ok((base + 1.0 / (12.0 * x + 1.0), base + 1.0 / (12.0 * x)))
}

/// Predicates for the inequalities behind the series envelope.
pub mod checks {
    use super::*;

    /// Outcome of certifying the series envelope at one `(b, c)`.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub enum SandwichVerdict {
        /// `[value, value + tail]` lies inside `[lower, upper]`.
        Holds { terms: u64 },
        /// The certified interval lies (partly) outside the envelope.
        Violated {
            value: f64,
            tail: f64,
            lower: f64,
            upper: f64,
        },
    }

    impl SandwichVerdict {
        pub fn holds(&self) -> bool {
            matches!(self, SandwichVerdict::Holds { .. })
        }
    }

    /// `[(c+1)/(c-b), (c+1)/(c-b) (1 + ε(c-b))]`.
    pub fn sandwich_envelope(b: u64, c: u64) -> Result<(f64, f64)> {
        if b < 1 || c < b + 2 {
            return Err(Error::Domain(format!(
                "envelope needs 1 <= b and b + 2 <= c, got b = {b}, c = {c}"
            )));
        }
        let d = (c - b) as f64;
        let lower = (c as f64 + 1.0) / d;
        Ok((lower, lower * (1.0 + epsilon(d)?)))
    }

    /// Sums the series until its certified interval is decided against the envelope.
    pub fn series_sandwich(b: u64, c: u64) -> Result<SandwichVerdict> {
        let (lower, upper) = sandwich_envelope(b, c)?;
        let mut series = FactorialRatioSeries::new(b, c)?;
        loop {
            series.advance();
            let value = series.value();
            let tail = series.tail_bound();
            if value >= lower && value + tail <= upper {
                return Ok(SandwichVerdict::Holds {
                    terms: series.terms(),
                });
            }
            if value > upper || series.terms() >= MAX_SERIES_TERMS {
                return Ok(SandwichVerdict::Violated {
                    value,
                    tail,
                    lower,
                    upper,
                });
            }
        }
    }

    /// `(a/b)^b e^{-(a-b)} ≤ 1` for reals `a > b > 0`, checked in log space.
    pub fn exp_ratio_bound(a: f64, b: f64) -> bool {
        let gap = a - b;
        b * (gap / b).ln_1p() - gap <= 4.0 * f64::EPSILON * gap
    }

    /// `e^{-b}(1+b/j)^{b+j+½} ≤ e^{-a}(1+a/j)^{a+j+½}` for integers `a > b`, `j ≥ 1`.
    pub fn stirling_ratio_bound(a: u64, b: u64, j: u64) -> bool {
        let log_f = |x: f64| -x + (x + j as f64 + 0.5) * (x / j as f64).ln_1p();
        log_f(b as f64) - log_f(a as f64) <= 0.0
    }

    /// `√(c/b) ≤ 2^{(c-b)/2}`, i.e. `c ≤ b · 2^{c-b}`, decided in integers.
    pub fn sqrt_ratio_bound(b: u64, c: u64) -> bool {
        let gap = c - b;
        if gap >= 64 {
            return true;
        }
        (c as u128) <= (b as u128) << gap
    }

    /// Exact ratio `b! c! ... ` helper: `s(k)` as a rational, for small arguments.
    pub fn series_term_exact(b: u64, c: u64, k: u64) -> BigRational {
        let num = factorial(b + k) * factorial(c);
        let den = factorial(c + k) * factorial(b);
        BigRational::new(num.into(), den.into())
    }

    /// `Σ_{k<terms} s(k)` in exact arithmetic.
    pub fn series_partial_exact(b: u64, c: u64, terms: u64) -> BigRational {
        let mut term = BigRational::one();
        let mut sum = BigRational::new(0.into(), 1.into());
        for k in 0..terms {
            sum += &term;
            term *= BigRational::new((b + k + 1).into(), (c + k + 1).into());
        }
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::checks::*;
    use super::*;
    use crate::scalar::{ratio, Scalar};

    #[test]
    fn telescoping_examples() {
        // s(k) = 6/((k+2)(k+3)) telescopes to 3
        let oracle = |k_max: u64| -> f64 {
            (0..k_max).map(|k| 6.0 / ((k + 2) as f64 * (k + 3) as f64)).sum()
        };
        let r = series_sum_factorial_ratio(1, 3, 1e-6).unwrap();
        assert!(r.value <= 3.0 && 3.0 <= r.upper() + 1e-12);
        assert!((r.value - oracle(r.terms_used)).abs() < 1e-9);
        assert_eq!(series_closed_form(1, 3).unwrap(), ratio(3, 1));

        // b = 0, c = 2: Σ 2/((k+1)(k+2)) = 2
        let r = series_sum_factorial_ratio(0, 2, 1e-6).unwrap();
        assert!(r.value <= 2.0 && 2.0 <= r.upper() + 1e-12);
        assert_eq!(series_closed_form(0, 2).unwrap(), ratio(2, 1));
    }

    #[test]
    fn divergent_series_rejected() {
        assert!(matches!(
            series_sum_factorial_ratio(3, 4, 1e-6),
            Err(Error::Divergent { b: 3, c: 4 })
        ));
        assert!(series_closed_form(5, 5).is_err());
        assert!(series_sum_factorial_ratio(1, 5, -1.0).is_err());
    }

    #[test]
    fn zero_tolerance_uses_closed_form() {
        let r = series_sum_factorial_ratio(4, 9, 0.0).unwrap();
        assert_eq!(r.value, 9.0 / 4.0);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn tail_certificate_dominates_exact_tail() {
        // exact partial sums far out stand in for the true remainder
        for (b, c) in [(1u64, 3u64), (2, 5), (0, 4), (5, 8)] {
            let mut s = FactorialRatioSeries::new(b, c).unwrap();
            for _ in 0..10 {
                s.advance();
            }
            let certified = s.tail_bound();
            let head = series_partial_exact(b, c, 10);
            let far = series_partial_exact(b, c, 400);
            let partial_tail = (far - head).as_f64();
            assert!(partial_tail <= certified, "b={b} c={c}");
        }
    }

    #[test]
    fn epsilon_values() {
        assert!((epsilon(4.0).unwrap() - 2.8766).abs() < 1e-4);
        assert!((epsilon(2.0).unwrap() - 4.7136).abs() < 1e-4);
        assert!(epsilon(0.0).is_err());
        assert!(epsilon(-1.0).is_err());
        let mut prev = f64::INFINITY;
        for k in 1..2000 {
            let e = epsilon(k as f64 * 0.5 + 1.0).unwrap();
            assert!(e < prev);
            prev = e;
        }
        assert!(epsilon(1e9).unwrap() < 1e-7);
    }

    #[test]
    fn beta_integral_values() {
        assert_eq!(beta_integral_exact(1, 1, &ratio(1, 1)), ratio(1, 6));
        assert_eq!(beta_integral_exact(0, 0, &ratio(1, 2)), ratio(1, 2));
        assert_eq!(beta_integral_exact(2, 3, &ratio(1, 1)), ratio(1, 60));
        assert!((beta_integral(2, 3, 1.0) - 1.0 / 60.0).abs() < 1e-16);
    }

    #[test]
    fn simplex_sample_is_deterministic() {
        let a = simplex_uniform_sample(5, &mut stream_rng(9, 0)).unwrap();
        let b = simplex_uniform_sample(5, &mut stream_rng(9, 0)).unwrap();
        assert_eq!(a, b);
        let c = simplex_uniform_sample(5, &mut stream_rng(9, 1)).unwrap();
        assert_ne!(a, c);
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(a.iter().all(|&x| x >= 0.0));
        assert!(simplex_uniform_sample(1, &mut stream_rng(9, 0)).is_err());
    }

    #[test]
    fn zeta_bounds_examples() {
        let (lo, hi) = zeta_tail_bounds(1, 2.0).unwrap();
        assert_eq!((lo, hi), (0.5, 1.0));
        let truth = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!(lo < truth && truth < hi);
        let (lo, hi) = zeta_tail_bounds(10, 3.0).unwrap();
        assert!((lo - 1.0 / 242.0).abs() < 1e-15);
        assert!((hi - 1.0 / 200.0).abs() < 1e-15);
        assert!(zeta_tail_bounds(0, 2.0).is_err());
        assert!(zeta_tail_bounds(1, 1.0).is_err());
    }

    #[test]
    fn robbins_small_cases() {
        let (lo, hi) = robbins_bounds(1).unwrap();
        assert!((lo.exp() - 0.9959).abs() < 1e-4);
        assert!((hi.exp() - 1.0023).abs() < 1e-4);
        let (lo, hi) = robbins_bounds(10).unwrap();
        let exact = 3_628_800f64.ln();
        assert!(lo <= exact && exact <= hi);
        assert!(robbins_bounds(0).is_err());
    }

    #[test]
    fn support_predicates_spot_checks() {
        assert!(exp_ratio_bound(3.0, 1.0));
        assert!(exp_ratio_bound(1.000001, 1.0));
        assert!(stirling_ratio_bound(5, 2, 3));
        assert!(sqrt_ratio_bound(1, 3));
        assert!(sqrt_ratio_bound(100, 102));
        assert!(series_sandwich(1, 3).unwrap().holds());
        assert!(sandwich_envelope(0, 3).is_err());
    }

    #[test]
    fn exact_term_matches_recurrence() {
        assert_eq!(series_term_exact(1, 3, 2), ratio(6, 20));
        assert_eq!(series_partial_exact(1, 3, 3), ratio(1, 1) + ratio(1, 2) + ratio(3, 10));
    }
}
