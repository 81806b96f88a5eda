//! Independent reference computations used by the verification suite.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Bracket on `Σ_{j>k} j^{-t}`: the first `extra` terms summed directly, the
/// rest bounded by the trapezoid and midpoint rules for a convex summand.
pub fn zeta_tail_oracle(k: u64, t: f64, extra: u64) -> (f64, f64) {
    let last = k + extra;
    let head: f64 = (k + 1..=last).rev().map(|j| (j as f64).powf(-t)).sum();
    let s = t - 1.0;
    let start = (last + 1) as f64;
    let trapezoid = start.powf(-s) / s + 0.5 * start.powf(-t);
    let midpoint = (last as f64 + 0.5).powf(-s) / s;
    (head + trapezoid, head + midpoint)
}

/// `ln m` for a big integer, accurate to double precision.
pub fn ln_big(m: &BigUint) -> f64 {
    if m.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = m.bits();
    if bits < 1000 {
        return m.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (m >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// All count vectors of `n` over `k` symbols.
pub fn compositions(n: u64, k: usize) -> Vec<Vec<u64>> {
    fn fill(n: u64, k: usize, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if prefix.len() + 1 == k {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=n {
            prefix.push(first);
            fill(n - first, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        fill(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// All sequences of length `n` over `k` symbols, as digit vectors.
pub fn sequences(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..k).map(move |d| {
                    let mut t = s.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_functions() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
        let v = adaptive_simpson(&|x: f64| x.powi(7), 0.0, 1.0, 1e-14);
        assert!((v - 0.125).abs() < 1e-12);
    }

    #[test]
    fn zeta_oracle_brackets_basel_tail() {
        let exact = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        let (lo, hi) = zeta_tail_oracle(1, 2.0, 10_000);
        assert!(lo <= exact && exact <= hi);
        assert!(hi - lo < 1e-9);
    }

    #[test]
    fn ln_big_matches_float() {
        let m = BigUint::from(3_628_800u64);
        assert!((ln_big(&m) - 3_628_800f64.ln()).abs() < 1e-12);
        let huge = BigUint::from(1u8) << 3000;
        assert!((ln_big(&huge) - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn enumerations_have_expected_sizes() {
        assert_eq!(compositions(3, 4).len(), 20);
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(sequences(3, 3).len(), 27);
    }
}
