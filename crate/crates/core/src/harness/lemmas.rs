use super::Checkpoints;
use crate::arith::{NormalizedSequence, SpfSieve};
use crate::numeric::det_sum;
use crate::report::{Bound, ReportTable, VerificationReport};
use crate::{Error, Result};

/// Partial sums `∑|a_n|/n`, `∑|a_n|²`, `∑|a_n|²/n` and `∑|a_n|^γ` per
/// checkpoint, with growth exponents fitted between consecutive
/// checkpoints.
///
/// Exponents are against `log x`: `β` in `(log x)^β` for the `1/n`-weighted
/// sums and in `x (log x)^β` for the unweighted ones. For `∑|a_n|^γ` the
/// implied constant `c` of `x (log x)^{-γ/2 + cγ²}` is reported too. With
/// `square_mean_band`, `∑|a_n|²/n / log x` at the largest checkpoint must fall in
/// `[lo, hi]`.
pub fn verify_lemma_sums(
    seq: &NormalizedSequence,
    gammas: &[f64],
    checkpoints: &Checkpoints,
    square_mean_band: Option<(f64, f64)>,
) -> Result<VerificationReport> {
    if let Some(g) = gammas.iter().find(|&&g| !(g > 0.0 && g <= 2.0)) {
        return Err(Error::InvalidInput(format!(
            "γ must lie in (0, 2], got {g}"
        )));
    }
    if checkpoints.last() > seq.limit() {
        return Err(Error::Range {
            value: checkpoints.last(),
            limit: seq.limit(),
        });
    }
    let mut report = VerificationReport::new("lemma-sums");
    report
        .param("checkpoints", format!("{:?}", checkpoints.as_slice()))
        .param("gammas", format!("{gammas:?}"))
        .param("source", seq.source().name());

    let mut cols = vec![
        "x".to_string(),
        "abs_over_n".into(),
        "sq".into(),
        "sq_over_n".into(),
        "sq_over_n_over_log_x".into(),
    ];
    cols.extend(gammas.iter().map(|g| format!("pow_{g}")));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut sums = ReportTable::new("sums", &col_refs);

    let mut rows: Vec<(f64, Vec<f64>)> = Vec::new();
    for &x in checkpoints.as_slice() {
        let r = 1..x as usize + 1;
        let a = |n: usize| seq.a(n as u64).abs();
        let abs_n = det_sum(r.clone(), |n| a(n) / n as f64);
        let sq = det_sum(r.clone(), |n| a(n) * a(n));
        let sq_n = det_sum(r.clone(), |n| a(n) * a(n) / n as f64);
        let mut row = vec![
            x as f64,
            abs_n,
            sq,
            sq_n,
            sq_n / (x as f64).ln().max(f64::MIN_POSITIVE),
        ];
        for &g in gammas {
            row.push(det_sum(r.clone(), |n| a(n).powf(g)));
        }
        sums.push(&row);
        rows.push((x as f64, row));
    }
    report.tables.push(sums);

    let mut ecols = vec![
        "x_lo".to_string(),
        "x_hi".into(),
        "beta_abs_over_n".into(),
        "beta_sq".into(),
        "beta_sq_over_n".into(),
    ];
    for g in gammas {
        ecols.push(format!("beta_pow_{g}"));
        ecols.push(format!("fitted_c_{g}"));
    }
    let ecol_refs: Vec<&str> = ecols.iter().map(String::as_str).collect();
    let mut exps = ReportTable::new("exponents", &ecol_refs);
    for w in rows.windows(2) {
        let (x0, r0) = (&w[0].0, &w[0].1);
        let (x1, r1) = (&w[1].0, &w[1].1);
        let dll = x1.ln().ln() - x0.ln().ln();
        let weighted = |i: usize| (r1[i].ln() - r0[i].ln()) / dll;
        let scaled = |i: usize| ((r1[i] / x1).ln() - (r0[i] / x0).ln()) / dll;
        let mut row = vec![*x0, *x1, weighted(1), scaled(2), weighted(3)];
        for (j, &g) in gammas.iter().enumerate() {
            let beta = scaled(5 + j);
            row.push(beta);
            row.push((beta + g / 2.0) / (g * g));
        }
        exps.push(&row);
    }
    report.tables.push(exps);

    if let Some((lo, hi)) = square_mean_band {
        let last = &rows.last().expect("nonempty").1;
        report.check(
            format!("sq_over_n_over_log_x_{}", checkpoints.last()),
            last[4],
            Bound::between(lo, hi),
        );
    }
    Ok(report)
}

/// Hall–Tenenbaum mean-value inequality for a nonnegative multiplicative `f`
/// given as `f(1)..f(x)`:
/// `∑ f(n) <= (A + B + 1) x / log x · ∑ f(n)/n`, with
/// `A = max_{p<=x} (1/p) ∑_{q<=p} f(q) log q` and
/// `B = ∑_{p^α<=x, α>=2} f(p^α) log(p^α) / p^α`.
pub fn verify_hall_tenenbaum(f: &[f64], sieve: &SpfSieve) -> Result<VerificationReport> {
    let x = f.len() as u64;
    if x < 2 {
        return Err(Error::InvalidInput("Hall–Tenenbaum needs x >= 2".into()));
    }
    if sieve.limit() < x {
        return Err(Error::Range {
            value: x,
            limit: sieve.limit(),
        });
    }
    if let Some(i) = f.iter().position(|&v| !(v >= 0.0)) {
        return Err(Error::InvalidInput(format!(
            "f({}) = {} is not a nonnegative number",
            i + 1,
            f[i]
        )));
    }
    let fv = |n: u64| f[n as usize - 1];
    let primes = sieve.primes_up_to(x);

    let mut theta = 0.0;
    let mut a_const: f64 = 0.0;
    for &p in primes {
        let p = p as u64;
        theta += fv(p) * (p as f64).ln();
        a_const = a_const.max(theta / p as f64);
    }
    let mut b_const = 0.0;
    for &p in primes {
        let p = p as u64;
        let mut q = p.saturating_mul(p);
        while q <= x {
            b_const += fv(q) * (q as f64).ln() / q as f64;
            q = match q.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    let n = x as usize;
    let lhs = det_sum(0..n, |i| f[i]);
    let harmonic = det_sum(0..n, |i| f[i] / (i + 1) as f64);
    let xf = x as f64;
    let rhs = (a_const + b_const + 1.0) * xf / xf.ln() * harmonic;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };

    let mut report = VerificationReport::new("hall-tenenbaum");
    report.param("x", x);
    let mut t = ReportTable::new(
        "terms",
        &["x", "A", "B", "lhs", "sum_f_over_n", "rhs", "ratio"],
    );
    t.push(&[xf, a_const, b_const, lhs, harmonic, rhs, ratio]);
    report.tables.push(t);
    report.check("lhs_over_rhs", ratio, Bound::at_most(1.0));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SequenceSource;

    #[test]
    fn harmonic_for_constant_one() {
        let v = vec![1.0; 1000];
        let seq = NormalizedSequence::from_values(SequenceSource::Synthetic, &v).unwrap();
        let cps = Checkpoints::new(vec![100, 1000], 1000).unwrap();
        let r = verify_lemma_sums(&seq, &[1.0], &cps, None).unwrap();
        let h: f64 = (1..=1000).map(|n| 1.0 / n as f64).sum();
        let got = r.table("sums").unwrap().column("abs_over_n").unwrap()[1].unwrap();
        assert!((got - h).abs() < 1e-12);
        assert!(verify_lemma_sums(&seq, &[0.0], &cps, None).is_err());
    }

    #[test]
    fn zero_tail_sums_are_small() {
        let v: Vec<f64> = (1..=500).map(|n| f64::from(n == 1)).collect();
        let seq = NormalizedSequence::from_values(SequenceSource::Synthetic, &v).unwrap();
        let cps = Checkpoints::new(vec![500], 500).unwrap();
        let r = verify_lemma_sums(&seq, &[0.5, 2.0], &cps, None).unwrap();
        assert!(r.table("sums").unwrap().rows[0][1..4]
            .iter()
            .all(|v| v.unwrap() <= 1.0));
    }

    #[test]
    fn hall_tenenbaum_trivial_functions() {
        let sieve = SpfSieve::new(10_000).unwrap();
        let ones = verify_hall_tenenbaum(&vec![1.0; 10_000], &sieve).unwrap();
        assert!(ones.all_passed());
        let a = ones.table("terms").unwrap().column("A").unwrap()[0].unwrap();
        assert!(a > 0.8 && a < 1.3, "{a}");
        let zeros = verify_hall_tenenbaum(&vec![0.0; 100], &sieve).unwrap();
        assert!(zeros.all_passed());
        let mut neg = vec![1.0; 100];
        neg[10] = -1.0;
        assert!(verify_hall_tenenbaum(&neg, &sieve).is_err());
    }
}
