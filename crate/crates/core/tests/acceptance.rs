//! Acceptance suite: one block per criterion, one PASS/FAIL line per
//! sub-check and a summary line per criterion. Exits non-zero if any
//! criterion fails.
//!
//! Targets are computed here independently of the library where possible
//! (closed forms, point enumeration, direct products).

use std::f64::consts::PI;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use satotate_core::arith::{PrimePowerRule, SpfSieve};
use satotate_core::ec::{kappa_partial, trace_at_prime, trace_series, CurveSpec};
use satotate_core::harness::{
    check_assumptions, default_angle_grid, verify_hall_tenenbaum, verify_lemma_sums, verify_thm1,
    verify_thm2, verify_thm3, AssumptionOptions, Checkpoints, Standardization, SupportFilter,
    Thm3Bounds,
};
use satotate_core::stats::{
    abs_cos_integral, h_gamma, half_density, ks_statistic, prime_angle_summary,
    signed_cos_integral, st_cdf, st_log_moments, Ecdf,
};
use satotate_core::synthetic::{
    build_synthetic_sequence, prime_angle, SyntheticSpec, DEFAULT_SEED,
};
use satotate_core::tau::{
    expand_delta, integrity_check, normalize_tau, tau_angles, tau_naive_oracle, ExactTauTable,
    TauConfig,
};
use satotate_core::tolerances as tol;
use satotate_core::{AngleSeries, NormalizedSequence, VerificationReport};

const TAU_N: u64 = 1_000_000;
const SYNTH_N: u64 = 10_000_000;

struct TauFixture {
    table: ExactTauTable,
    seq: NormalizedSequence,
    angles: AngleSeries,
    elapsed: Duration,
}

fn tau() -> &'static TauFixture {
    static F: OnceLock<TauFixture> = OnceLock::new();
    F.get_or_init(|| {
        let t0 = Instant::now();
        let table = expand_delta(&TauConfig::new(TAU_N)).expect("τ expansion");
        let elapsed = t0.elapsed();
        let seq = normalize_tau(&table);
        let angles = tau_angles(&table).expect("τ angles");
        TauFixture {
            table,
            seq,
            angles,
            elapsed,
        }
    })
}

fn sieve() -> &'static SpfSieve {
    static S: OnceLock<SpfSieve> = OnceLock::new();
    S.get_or_init(|| SpfSieve::new(SYNTH_N).unwrap())
}

struct SynthFixture {
    angles: AngleSeries,
    seq: NormalizedSequence,
}

fn synth() -> &'static SynthFixture {
    static F: OnceLock<SynthFixture> = OnceLock::new();
    F.get_or_init(|| {
        let spec = SyntheticSpec::new(SYNTH_N, DEFAULT_SEED, PrimePowerRule::default());
        let s = build_synthetic_sequence(&spec, sieve()).unwrap();
        SynthFixture {
            angles: s.angles,
            seq: s.sequence,
        }
    })
}

#[derive(Default)]
struct Criterion {
    id: u32,
    title: &'static str,
    passed: bool,
    lines: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Self {
            id,
            title,
            passed: true,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.passed &= ok;
        let line = format!(
            "  [{}] {}.{} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            self.id,
            self.lines.len() + 1
        );
        println!("{line}");
        self.lines.push(line);
    }

    fn within(&mut self, name: &str, got: f64, target: f64, tol: f64) {
        let ok = (got - target).abs() <= tol;
        self.check(name, ok, format!("{got:.12} vs {target:.12} ± {tol:e}"));
    }

    fn at_most(&mut self, name: &str, got: f64, max: f64) {
        self.check(name, got <= max, format!("{got:.6e} <= {max:e}"));
    }

    fn report(&mut self, name: &str, r: &VerificationReport) {
        let failed: Vec<String> = r
            .failed_checks()
            .map(|c| format!("{}={:?} ({})", c.name, c.observed, c.bound))
            .collect();
        let detail = if failed.is_empty() {
            format!("{} checks passed", r.checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        };
        self.check(name, r.all_passed(), detail);
    }
}

fn column(r: &VerificationReport, table: &str, col: &str) -> Vec<f64> {
    r.table(table)
        .unwrap()
        .column(col)
        .unwrap()
        .into_iter()
        .map(|v| v.unwrap_or(f64::NAN))
        .collect()
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(1, "exact τ");
    let fast = expand_delta(&TauConfig::new(2000)).unwrap();
    let slow = tau_naive_oracle(2000).unwrap();
    c.check(
        "expand_delta(2000) == naive oracle",
        fast == slow,
        format!("{} coefficients compared", slow.limit()),
    );
    let f = tau();
    c.check(
        "expand_delta(10^6) within 5 min",
        f.elapsed <= Duration::from_secs(300),
        format!("{:.2?}", f.elapsed),
    );
    let prefix = ExactTauTable::from_values(f.table.values()[..100_000].to_vec()).unwrap();
    let r = integrity_check(&prefix);
    for name in [
        "multiplicativity_failures",
        "divisor_bound_failures",
        "congruence_691_failures",
    ] {
        let v = r.get_check(name).unwrap().observed.unwrap();
        c.check(&format!("N=10^5 {name}"), v == 0.0, format!("{v}"));
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "Sato–Tate constants by quadrature");
    c.within("h(2)", h_gamma(2.0).unwrap(), 1.0, tol::H2_TOL);
    c.within("h(1)", h_gamma(1.0).unwrap(), tol::H1_TARGET, tol::H1_TOL);
    let (m1, m2) = st_log_moments();
    c.within("m1", m1, -0.5, tol::LOG_MOMENT_TOL);
    c.within("m2", m2, 0.5 + PI * PI / 12.0, tol::LOG_MOMENT_TOL);
    c.within(
        "∫ cos·sin²",
        signed_cos_integral(),
        0.0,
        tol::ELEMENTARY_INTEGRAL_TOL,
    );
    c.within(
        "∫ |cos|·sin² (stated 1/3)",
        abs_cos_integral(),
        tol::STATED_ABS_COS_INTEGRAL,
        tol::ELEMENTARY_INTEGRAL_TOL,
    );
    let hd = half_density();
    c.within(
        "half-density",
        hd,
        2.0 / 3.0 - 3f64.sqrt() / (2.0 * PI),
        tol::ELEMENTARY_INTEGRAL_TOL,
    );
    c.check(
        "half-density > 0.39",
        hd > tol::HALF_DENSITY_FLOOR,
        format!("{hd:.9}"),
    );
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "τ Sato–Tate statistics, p <= 10^6");
    let s = prime_angle_summary(&tau().angles, &[1.0, 2.0]).unwrap();
    c.within("mean 2|cos|", s.moments[0].mean, 0.8488, tol::TAU_H1_TOL);
    c.check(
        "mean 2cos in [-0.02, 0.02]",
        s.mean_2cos.abs() <= tol::TAU_MEAN_2COS_MAX,
        format!("{:.6}", s.mean_2cos),
    );
    c.within(
        "mean (2cos)^2",
        s.moments[1].mean,
        1.0,
        tol::TAU_SECOND_MOMENT_TOL,
    );
    c.within(
        "mean |cos| (stated 1/3)",
        s.mean_abs_cos,
        1.0 / 3.0,
        tol::TAU_ABS_COS_TOL,
    );
    c.within(
        "fraction |cos| >= 1/2",
        s.frac_abs_cos_half,
        tol::TAU_HALF_FRACTION_TARGET,
        tol::TAU_HALF_FRACTION_TOL,
    );
    c.at_most("KS vs Sato–Tate", s.ks, tol::TAU_KS_MAX);
    c
}

fn synthetic_bits(threads: usize, limit: u64) -> Vec<u64> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| {
        let sieve = SpfSieve::new(limit).unwrap();
        let spec = SyntheticSpec::new(limit, DEFAULT_SEED, PrimePowerRule::default());
        let s = build_synthetic_sequence(&spec, &sieve).unwrap();
        let mut bits: Vec<u64> = s
            .angles
            .records()
            .iter()
            .map(|r| r.theta.to_bits())
            .collect();
        bits.extend(s.sequence.values().iter().map(|v| v.to_bits()));
        bits
    })
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "synthetic sampler");
    let n = 1_000_000u64;
    let draws: Vec<_> = (1..=n).map(|i| prime_angle(DEFAULT_SEED, i)).collect();
    let attempts: u64 = draws.iter().map(|d| d.attempts as u64).sum();
    let ecdf = Ecdf::new(draws.iter().map(|d| d.theta).collect()).unwrap();
    let ks = ks_statistic(&ecdf, |a| st_cdf(a.clamp(0.0, PI)).unwrap());
    c.at_most("KS at 10^6 draws", ks, tol::SAMPLER_KS_MAX);
    c.within(
        "acceptance rate",
        n as f64 / attempts as f64,
        0.5,
        tol::SAMPLER_ACCEPT_TOL,
    );
    let base = synthetic_bits(1, n);
    for t in [4, 8] {
        let same = synthetic_bits(t, n) == base;
        c.check(
            &format!("bit-identical at 1 vs {t} threads"),
            same,
            format!("{} words", base.len()),
        );
    }
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "Theorem 2 on τ");
    let cps = Checkpoints::new(vec![1_000, 10_000, 100_000, 1_000_000], TAU_N).unwrap();
    let r = verify_thm2(&tau().seq, &cps, sieve(), Some(tol::THM2_RATIO_MAX)).unwrap();
    let s = column(&r, "windows", "S");
    let t = column(&r, "windows", "T");
    for ((x, s), t) in cps.as_slice().iter().zip(&s).zip(&t) {
        c.check(
            &format!("|S| <= T at x={x}"),
            s.abs() <= *t,
            format!("|S|={:.4} T={t:.4}", s.abs()),
        );
    }
    let ratio = *column(&r, "windows", "ratio").last().unwrap();
    c.at_most("|S|/T at x=10^6", ratio, tol::THM2_RATIO_MAX);
    c.report("report flags", &r);
    c
}

/// Exceedance fractions at 10^5, 10^6, 10^7 for seed 42, pinned after the
/// first run.
const THM1_PINNED: [f64; 3] = [0.3514870297405948, 0.3509477018954038, 0.350163670032734];

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "Theorem 1 on synthetic");
    let cps = Checkpoints::new(vec![100_000, 1_000_000, 10_000_000], SYNTH_N).unwrap();
    let r = verify_thm1(&synth().seq, 0.25, &cps, Some(tol::THM1_MONOTONE_SLACK)).unwrap();
    let f = column(&r, "exceedance", "above_fraction");
    for (i, w) in f.windows(2).enumerate() {
        c.check(
            &format!("non-increasing step {}", i + 1),
            w[1] <= w[0] + tol::THM1_MONOTONE_SLACK,
            format!("{:.6} -> {:.6}", w[0], w[1]),
        );
    }
    if THM1_PINNED.iter().all(|v| v.is_finite()) {
        for (x, (got, want)) in cps.as_slice().iter().zip(f.iter().zip(THM1_PINNED)) {
            c.within(&format!("regression x={x}"), *got, want, 1e-12);
        }
    } else {
        println!("  [INFO] 6 fractions to pin: {f:?}");
    }
    c.report("report flags", &r);
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(7, "Theorem 3 on synthetic, x = 10^6");
    let x = 1_000_000;
    let bounds = Thm3Bounds {
        ks_max: Some(tol::THM3_KS_MAX),
        skew_max: Some(tol::THM3_SKEW_MAX),
        mu_band: Some((tol::THM3_MU_TARGET, tol::THM3_MU_TOL)),
        sigma2_band: Some((tol::THM3_SIGMA2_TARGET, tol::THM3_SIGMA2_TOL)),
    };
    let seq = synth().seq.truncated(x);
    let r = verify_thm3(
        &seq,
        x,
        &SupportFilter::nonzero(),
        Standardization::SelfStandardized,
        sieve(),
        &bounds,
    )
    .unwrap();
    let rel = r
        .get_check("additive_identity_rel")
        .unwrap()
        .observed
        .unwrap_or(f64::NAN);
    c.at_most(
        "additive identity (relative)",
        rel,
        tol::ADDITIVE_IDENTITY_REL,
    );
    let ks = column(&r, "standardized", "ks")[0];
    let skew = column(&r, "standardized", "skewness")[0];
    c.at_most("self-standardized KS", ks, tol::THM3_KS_MAX);
    c.at_most("|skewness|", skew.abs(), tol::THM3_SKEW_MAX);
    let mu = column(&r, "log-moments", "mu_over_log2x")[0];
    let s2 = column(&r, "log-moments", "sigma2_over_log2x")[0];
    c.within("μ/log₂x", mu, tol::THM3_MU_TARGET, tol::THM3_MU_TOL);
    c.within(
        "σ²/log₂x",
        s2,
        tol::THM3_SIGMA2_TARGET,
        tol::THM3_SIGMA2_TOL,
    );
    c.report("report flags", &r);
    c
}

/// `p + 1 - #E(F_p)` by counting points directly.
fn enumerate_trace(a: i64, b: i64, p: i64) -> i64 {
    let mut count = 1;
    for x in 0..p {
        for y in 0..p {
            if (y * y - (x * x * x + a * x + b)).rem_euclid(p) == 0 {
                count += 1;
            }
        }
    }
    p + 1 - count
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(8, "elliptic engine");
    let e11 = CurveSpec::new(1, 1).unwrap();
    let t = trace_at_prime(&e11, 5).unwrap();
    c.check(
        "t_5(A=1,B=1) = -3",
        t == -3 && enumerate_trace(1, 1, 5) == -3,
        format!("{t}"),
    );

    let e = CurveSpec::new(-1, 1).unwrap();
    let s = trace_series(&e, 100_000).unwrap();
    let hasse = s
        .records()
        .iter()
        .filter(|r| r.good && (r.t * r.t) as f64 > 4.0 * r.p as f64)
        .count();
    c.check(
        "Hasse at good p <= 10^5 (A=-1,B=1)",
        hasse == 0,
        format!("{hasse} violations"),
    );

    let cm = CurveSpec::new(0, 1).unwrap();
    let s = trace_series(&cm, 100_000).unwrap();
    let nonzero = s
        .records()
        .iter()
        .filter(|r| r.good && r.p % 3 == 2 && r.t != 0)
        .count();
    c.check(
        "y²=x³+1: t_p = 0 at good p ≡ 2 mod 3",
        nonzero == 0,
        format!("{nonzero} exceptions"),
    );

    let zero_primes: Vec<i64> = (2..=20i64)
        .filter(|&p| (2..p).all(|d| p % d != 0))
        .filter(|&p| enumerate_trace(0, 1, p) == 0)
        .collect();
    let hand: f64 = zero_primes.iter().map(|&p| 1.0 - 1.0 / p as f64).product();
    let k = kappa_partial(&s, 20).unwrap();
    c.within(
        &format!("κ(20) vs enumerated zero primes {zero_primes:?}"),
        k.value,
        hand,
        tol::KAPPA_TOL,
    );
    let listed = 0.5 * 0.8 * (10.0 / 11.0) * (16.0 / 17.0);
    println!(
        "  [INFO] 8 product over the listed set {{2, 5, 11, 17}} = {listed:.12}; \
         p = 3 is additive for this model (t_3 = {})",
        enumerate_trace(0, 1, 3)
    );
    c
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::new(9, "lemma suite");
    let x = 100_000usize;
    let ones = verify_hall_tenenbaum(&vec![1.0; x], sieve()).unwrap();
    c.report("Hall–Tenenbaum f ≡ 1, x = 10^5", &ones);
    let sq: Vec<f64> = tau().seq.values()[..x].iter().map(|a| a * a).collect();
    let r = verify_hall_tenenbaum(&sq, sieve()).unwrap();
    c.report("Hall–Tenenbaum f = |a_n|² (τ), x = 10^5", &r);
    let cps = Checkpoints::new(vec![10_000, 100_000, 1_000_000], TAU_N).unwrap();
    let r = verify_lemma_sums(&tau().seq, &[0.5, 1.0, 2.0], &cps, Some(tol::SQUARE_MEAN_BAND)).unwrap();
    let v = *column(&r, "sums", "sq_over_n_over_log_x").last().unwrap();
    c.check(
        "∑|a_n|²/n / log x in [0.1, 10] at 10^6",
        (tol::SQUARE_MEAN_BAND.0..=tol::SQUARE_MEAN_BAND.1).contains(&v),
        format!("{v:.6}"),
    );
    c
}

fn all_reports() -> Vec<String> {
    let t = tau();
    let s = synth();
    let small = ExactTauTable::from_values(t.table.values()[..20_000].to_vec()).unwrap();
    let cps = Checkpoints::new(vec![10_000, 100_000, 1_000_000], TAU_N).unwrap();
    let synth_seq = s.seq.truncated(1_000_000);
    let synth_angles = AngleSeries::new(1_000_000, s.angles.up_to(1_000_000).to_vec()).unwrap();
    let reports = [
        integrity_check(&small),
        verify_thm1(&synth_seq, 0.25, &cps, Some(tol::THM1_MONOTONE_SLACK)).unwrap(),
        verify_thm2(&t.seq, &cps, sieve(), Some(tol::THM2_RATIO_MAX)).unwrap(),
        verify_thm3(
            &synth_seq,
            1_000_000,
            &SupportFilter::nonzero(),
            Standardization::SelfStandardized,
            sieve(),
            &Thm3Bounds::default(),
        )
        .unwrap(),
        verify_lemma_sums(&t.seq, &[0.5, 1.0], &cps, None).unwrap(),
        verify_hall_tenenbaum(
            &t.seq.values()[..100_000]
                .iter()
                .map(|a| a * a)
                .collect::<Vec<_>>(),
            sieve(),
        )
        .unwrap(),
        check_assumptions(
            &synth_seq,
            &synth_angles,
            &AssumptionOptions {
                a: 2.0,
                grid: default_angle_grid(360),
                checkpoints: cps.clone(),
                k_max: 6,
                a2_max: None,
            },
        )
        .unwrap(),
        prime_angle_summary(&t.angles, &[0.5, 1.0, 2.0])
            .unwrap()
            .to_report(),
    ];
    reports
        .iter()
        .map(|r| serde_json::to_string(r).unwrap())
        .collect()
}

fn criterion_10() -> Criterion {
    let mut c = Criterion::new(10, "determinism");
    // fixtures are built outside the pools; only the verifiers run inside
    let _ = (tau(), synth(), sieve());
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(all_reports)
    };
    let base = run(1);
    for threads in [4, 8, 1] {
        let other = run(threads);
        let same = other == base;
        let label = if threads == 1 {
            "repeat run, 1 thread".to_string()
        } else {
            format!("{threads} threads vs 1")
        };
        c.check(
            &format!("reports byte-identical: {label}"),
            same,
            format!(
                "{} reports, {} bytes",
                base.len(),
                base.iter().map(String::len).sum::<usize>()
            ),
        );
    }
    let a = synthetic_bits(1, 100_000);
    let b = synthetic_bits(8, 100_000);
    c.check(
        "synthetic sequence, equal seeds",
        a == b,
        format!("{} words", a.len()),
    );
    let tau_small = expand_delta(&TauConfig::new(50_000)).unwrap();
    let tau_again = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap()
        .install(|| expand_delta(&TauConfig::new(50_000)).unwrap());
    c.check(
        "τ table, 1 pool vs 8 threads",
        tau_small == tau_again && tau_small.tau(2) == &BigInt::from(-24),
        "50000 coefficients".into(),
    );
    c
}

fn main() {
    let filter: Option<u32> = std::env::args()
        .skip(1)
        .find(|a| !a.starts_with('-'))
        .and_then(|a| a.parse().ok());
    let criteria: [(u32, fn() -> Criterion); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    println!("acceptance criteria");
    let mut summary = Vec::new();
    for (id, run) in criteria {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        let t0 = Instant::now();
        let c = run();
        let line = format!(
            "{} criterion {}: {} ({:.1?})",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            t0.elapsed()
        );
        println!("{line}");
        summary.push((c.passed, line));
    }
    println!("\nsummary");
    for (_, line) in &summary {
        println!("{line}");
    }
    let failed = summary.iter().filter(|(ok, _)| !ok).count();
    println!(
        "{} of {} criteria passed",
        summary.len() - failed,
        summary.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
