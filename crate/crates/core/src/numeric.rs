//! Small numeric helpers shared across modules: iterated logarithms,
//! thread-count independent reductions, and primality by trial division.

use rayon::prelude::*;

/// Fixed block size for parallel reductions. Changing it changes the
/// rounding of every float sum in the crate, so treat it as part of the
/// output format.
pub const REDUCTION_CHUNK: usize = 1 << 14;

/// `log_1 x = max(log x, 1)`.
pub fn log1(x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        x.ln().max(1.0)
    }
}

/// `log_k x = log_1(log_{k-1} x)`, so `log_k x >= 1` for every `k >= 1`.
pub fn log_k(x: f64, k: u32) -> f64 {
    assert!(k >= 1, "iterated logarithm needs k >= 1");
    let mut v = log1(x);
    for _ in 1..k {
        v = log1(v);
    }
    v
}

pub fn log2_iter(x: f64) -> f64 {
    log_k(x, 2)
}

pub fn log3_iter(x: f64) -> f64 {
    log_k(x, 3)
}

/// Sums `f(i)` for `i in range` with a fixed chunking and a pairwise tree
/// over the chunk partials. The result does not depend on the size of the
/// rayon pool.
pub fn det_sum<F>(range: std::ops::Range<usize>, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let start = range.start;
    let len = range.end.saturating_sub(start);
    if len == 0 {
        return 0.0;
    }
    let chunks = len.div_ceil(REDUCTION_CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = start + c * REDUCTION_CHUNK;
            let hi = (lo + REDUCTION_CHUNK).min(range.end);
            let mut s = 0.0;
            for i in lo..hi {
                s += f(i);
            }
            s
        })
        .collect();
    pairwise(&partials)
}

/// Deterministic sum of a slice of values.
pub fn det_sum_slice(values: &[f64]) -> f64 {
    det_sum(0..values.len(), |i| values[i])
}

fn pairwise(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise(l) + pairwise(r)
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}
