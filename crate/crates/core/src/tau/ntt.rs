//! Exact integer convolution by number-theoretic transforms modulo several
//! 62-bit primes, recombined by Garner's mixed-radix CRT.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::{Error, Result};

/// `(prime, primitive root)`; every prime is `< 2^62` and `≡ 1 (mod 2^24)`.
pub const NTT_PRIMES: [(u64, u64); 6] = [
    (4_611_686_018_326_724_609, 3),
    (4_611_686_018_309_947_393, 5),
    (4_611_686_018_058_289_153, 5),
    (4_611_686_017_974_403_073, 3),
    (4_611_686_017_773_076_481, 3),
    (4_611_686_017_554_972_673, 5),
];

/// Largest supported transform length.
pub const MAX_NTT_LOG2: u32 = 24;

const PAR_BLOCK: usize = 1 << 12;

/// Montgomery arithmetic modulo an odd `p < 2^62`, with `R = 2^64`.
#[derive(Debug, Clone, Copy)]
struct Mont {
    p: u64,
    pinv: u64,
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut pinv = p;
        for _ in 0..6 {
            pinv = pinv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(pinv)));
        }
        debug_assert_eq!(p.wrapping_mul(pinv), 1);
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = (r as u128 * r as u128 % p as u128) as u64;
        Self { p, pinv, r2 }
    }

    #[inline(always)]
    fn redc(&self, x: u128) -> u64 {
        let m = (x as u64).wrapping_mul(self.pinv);
        let y = ((m as u128 * self.p as u128) >> 64) as u64;
        let (out, borrow) = ((x >> 64) as u64).overflowing_sub(y);
        if borrow {
            out.wrapping_add(self.p)
        } else {
            out
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn enter(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    #[cfg(test)]
    fn leave(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Twiddle tables laid out so that `tw[half + j] = w_{2·half}^j`.
struct Twiddles {
    forward: Vec<u64>,
    inverse: Vec<u64>,
}

impl Twiddles {
    fn new(m: &Mont, root: u64, n: usize) -> Self {
        let p = m.p;
        let w_n = pow_mod(root, (p - 1) / n as u64, p);
        let w_n_inv = inv_mod(w_n, p);
        let mut forward = vec![0u64; n.max(2)];
        let mut inverse = vec![0u64; n.max(2)];
        let mut half = 1;
        while half < n {
            let step = (n / (2 * half)) as u64;
            let w = m.enter(pow_mod(w_n, step, p));
            let wi = m.enter(pow_mod(w_n_inv, step, p));
            let (mut a, mut b) = (m.enter(1), m.enter(1));
            for j in 0..half {
                forward[half + j] = a;
                inverse[half + j] = b;
                a = m.mul(a, w);
                b = m.mul(b, wi);
            }
            half *= 2;
        }
        Self { forward, inverse }
    }
}

fn butterflies_dif(m: &Mont, lo: &mut [u64], hi: &mut [u64], tw: &[u64]) {
    for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
        let (u, v) = (*x, *y);
        *x = m.add(u, v);
        *y = m.mul(m.sub(u, v), w);
    }
}

fn butterflies_dit(m: &Mont, lo: &mut [u64], hi: &mut [u64], tw: &[u64]) {
    for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
        let u = *x;
        let v = m.mul(*y, w);
        *x = m.add(u, v);
        *y = m.sub(u, v);
    }
}

fn layer(
    m: &Mont,
    a: &mut [u64],
    half: usize,
    tw: &[u64],
    kernel: fn(&Mont, &mut [u64], &mut [u64], &[u64]),
) {
    let tw = &tw[half..2 * half];
    if half >= PAR_BLOCK {
        for block in a.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            lo.par_chunks_mut(PAR_BLOCK)
                .zip(hi.par_chunks_mut(PAR_BLOCK))
                .zip(tw.par_chunks(PAR_BLOCK))
                .for_each(|((l, h), t)| kernel(m, l, h, t));
        }
    } else {
        a.par_chunks_mut((2 * half).max(PAR_BLOCK))
            .for_each(|chunk| {
                for block in chunk.chunks_mut(2 * half) {
                    let (lo, hi) = block.split_at_mut(half);
                    kernel(m, lo, hi, tw);
                }
            });
    }
}

/// Natural order in, bit-reversed order out.
fn forward(m: &Mont, a: &mut [u64], tw: &Twiddles) {
    let mut half = a.len() / 2;
    while half >= 1 {
        layer(m, a, half, &tw.forward, butterflies_dif);
        half /= 2;
    }
}

/// Bit-reversed order in, natural order out; unscaled.
fn inverse(m: &Mont, a: &mut [u64], tw: &Twiddles) {
    let mut half = 1;
    while half < a.len() {
        layer(m, a, half, &tw.inverse, butterflies_dit);
        half *= 2;
    }
}

/// Residues of `coeffs` modulo `p`, squared as a polynomial and truncated to
/// `out_len` terms.
fn square_mod(coeffs: &[i128], out_len: usize, p: u64, root: u64) -> Vec<u64> {
    let n = (2 * coeffs.len())
        .saturating_sub(1)
        .max(1)
        .next_power_of_two();
    let m = Mont::new(p);
    let tw = Twiddles::new(&m, root, n);
    let mut a = vec![0u64; n];
    a[..coeffs.len()]
        .par_iter_mut()
        .zip(coeffs.par_iter())
        .for_each(|(dst, &c)| *dst = m.enter(c.rem_euclid(p as i128) as u64));
    forward(&m, &mut a, &tw);
    a.par_iter_mut().for_each(|x| *x = m.mul(*x, *x));
    inverse(&m, &mut a, &tw);
    // plain n^{-1}: one more REDC both scales and leaves Montgomery form
    let n_inv = inv_mod(n as u64 % p, p);
    a.truncate(out_len);
    a.par_iter_mut().for_each(|x| *x = m.mul(*x, n_inv));
    a
}

/// Moduli whose product exceeds twice the largest possible absolute output
/// coefficient of squaring `coeffs` (truncated to `out_len`).
pub fn moduli_for_square(coeffs: &[i128], out_len: usize, available: &[u64]) -> Result<Vec<u64>> {
    let max_abs = coeffs
        .par_iter()
        .map(|c| c.unsigned_abs())
        .max()
        .unwrap_or(0);
    let terms = coeffs.len().min(out_len).max(1);
    let bound = BigInt::from(max_abs) * BigInt::from(max_abs) * BigInt::from(terms) * 2u32;
    let mut product = BigInt::one();
    let mut chosen = Vec::new();
    for &p in available {
        if product > bound {
            break;
        }
        product *= p;
        chosen.push(p);
    }
    if product <= bound {
        return Err(Error::Configuration(format!(
            "{} NTT moduli give {} bits of CRT capacity, squaring needs {}",
            available.len(),
            product.bits(),
            bound.bits() + 1
        )));
    }
    Ok(chosen)
}

pub fn root_of(p: u64) -> Result<u64> {
    NTT_PRIMES
        .iter()
        .find(|&&(q, _)| q == p)
        .map(|&(_, g)| g)
        .ok_or_else(|| Error::Configuration(format!("{p} is not in the NTT prime table")))
}

/// Exact square of the integer polynomial `coeffs`, truncated to `out_len`
/// coefficients. `moduli` must already satisfy [`moduli_for_square`].
pub fn square_truncated(coeffs: &[i128], out_len: usize, moduli: &[u64]) -> Result<Vec<BigInt>> {
    if coeffs.is_empty() || out_len == 0 {
        return Ok(vec![BigInt::zero(); out_len]);
    }
    let n = (2 * coeffs.len() - 1).next_power_of_two();
    if n > 1usize << MAX_NTT_LOG2 {
        return Err(Error::Configuration(format!(
            "transform length {n} exceeds 2^{MAX_NTT_LOG2}"
        )));
    }
    let roots = moduli
        .iter()
        .map(|&p| root_of(p))
        .collect::<Result<Vec<_>>>()?;
    let residues: Vec<Vec<u64>> = moduli
        .par_iter()
        .zip(roots.par_iter())
        .map(|(&p, &g)| square_mod(coeffs, out_len, p, g))
        .collect();
    let crt = Crt::new(moduli);
    let len = out_len.min(residues[0].len());
    let mut out: Vec<BigInt> = (0..len)
        .into_par_iter()
        .map(|i| {
            let r: Vec<u64> = residues.iter().map(|v| v[i]).collect();
            crt.combine_signed(&r)
        })
        .collect();
    out.resize(out_len, BigInt::zero());
    Ok(out)
}

/// Garner recombination into the symmetric range `(-M/2, M/2]`.
pub struct Crt {
    moduli: Vec<u64>,
    // inv[i][j] = m_i^{-1} mod m_j for i < j
    inv: Vec<Vec<u64>>,
    radix: Vec<BigInt>,
    product: BigInt,
    half: BigInt,
}

impl Crt {
    pub fn new(moduli: &[u64]) -> Self {
        let k = moduli.len();
        let mut inv = vec![vec![0u64; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                inv[i][j] = inv_mod(moduli[i] % moduli[j], moduli[j]);
            }
        }
        let mut radix = Vec::with_capacity(k);
        let mut acc = BigInt::one();
        for &m in moduli {
            radix.push(acc.clone());
            acc *= m;
        }
        let half = &acc >> 1;
        Self {
            moduli: moduli.to_vec(),
            inv,
            radix,
            product: acc,
            half,
        }
    }

    pub fn combine_signed(&self, residues: &[u64]) -> BigInt {
        let k = self.moduli.len();
        let mut digits = [0u64; 8];
        let digits = &mut digits[..k];
        for j in 0..k {
            let mj = self.moduli[j] as u128;
            let mut t = residues[j] as u128 % mj;
            for (i, &d) in digits[..j].iter().enumerate() {
                let d = d as u128 % mj;
                t = (t + mj - d) % mj * self.inv[i][j] as u128 % mj;
            }
            digits[j] = t as u64;
        }
        let mut x = BigInt::zero();
        for (d, r) in digits.iter().zip(&self.radix) {
            if *d != 0 {
                x += r * *d;
            }
        }
        if x > self.half {
            x -= &self.product;
        }
        x
    }
}
