use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use satotate_core::ec::{
    ec_normalized_sequence, kappa_partial, supersingular_census, supersingular_census_angles,
    trace_series, CurveSpec, TraceSeries,
};
use satotate_core::harness::{
    check_assumptions, default_angle_grid, verify_hall_tenenbaum, verify_lemma_sums, verify_thm1,
    verify_thm2, verify_thm3, AssumptionOptions, Checkpoints, SupportFilter, SupportMode,
    Thm3Bounds,
};
use satotate_core::stats::{prime_angle_summary, prime_log_moments, STConstants};
use satotate_core::synthetic::{build_synthetic_sequence, SyntheticSpec, DEFAULT_SEED};
use satotate_core::tau::{expand_delta, integrity_check, normalize_tau, tau_angles, TauConfig};
use satotate_core::{
    AngleSeries, NormalizedSequence, PrimePowerRule, ReportTable, SpfSieve, VerificationReport,
};

use crate::cache::{load_cache, save_cache, Cached};
use crate::config::{parse_limit, Config};
use crate::emit::{checks_csv, report_json, table_csv, write_report};
use crate::{
    Cli, Command, OutputFormat, RuleArgs, Source, SourceArgs, StatsCommand, VerifyCommand,
    EXIT_FAILED, EXIT_OK,
};

pub enum CliError {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(anyhow!("{msg}"))
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

impl From<crate::cache::CacheError> for CliError {
    fn from(e: crate::cache::CacheError) -> Self {
        CliError::Runtime(e.into())
    }
}

/// Bad parameters are usage errors; anything else the core reports
/// (corruption, incomplete data) is a runtime failure.
impl From<satotate_core::Error> for CliError {
    fn from(e: satotate_core::Error) -> Self {
        use satotate_core::Error as E;
        match e {
            E::Range { .. }
            | E::InvalidInput(_)
            | E::Configuration(_)
            | E::Domain(..)
            | E::Capacity(_) => CliError::Usage(e.into()),
            _ => CliError::Runtime(e.into()),
        }
    }
}

struct Ctx {
    cfg: Config,
    cache_dir: PathBuf,
    out_dir: PathBuf,
    format: OutputFormat,
    timing: bool,
}

pub fn run(cli: Cli) -> CliResult<i32> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(CliError::Usage)?,
        None => Config::default(),
    };
    if let Some(n) = cli.threads.or(cfg.threads) {
        // A pool may already exist when embedded (tests); the cap is then best-effort.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| cfg.cache_dir.clone())
        .unwrap_or_else(|| PathBuf::from(".satotate-cache"));
    let ctx = Ctx {
        out_dir: cli.out.clone().unwrap_or_else(|| cache_dir.join("reports")),
        format: cli.format.or(cfg.format).unwrap_or(OutputFormat::Json),
        timing: cli.timing,
        cache_dir,
        cfg,
    };
    match cli.command {
        Command::Tau(a) => cmd_tau(&ctx, a.limit, a.check, a.export_csv.as_deref()),
        Command::Ec(a) => cmd_ec(&ctx, a.curve, a.limit),
        Command::Synth(a) => cmd_synth(&ctx, a.limit, a.seed, &a.rule),
        Command::Angles(a) => {
            let t = Instant::now();
            let angles = load_angles(&ctx, &a.src, None)?;
            let gammas = a
                .gammas
                .or_else(|| ctx.cfg.gammas.clone())
                .unwrap_or_else(|| vec![0.5, 1.0, 1.5, 2.0]);
            let mut report = prime_angle_summary(&angles, &gammas)?.to_report();
            report.param("source", source_name(a.src.source));
            finish(&ctx, "angles", report, t)
        }
        Command::Constants => cmd_constants(&ctx),
        Command::Verify(v) => cmd_verify(&ctx, v),
        Command::Stats(s) => cmd_stats(&ctx, s),
    }
}

fn source_name(s: Source) -> &'static str {
    match s {
        Source::Tau => "tau",
        Source::Ec => "ec",
        Source::Synth => "synth",
    }
}

fn require<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| usage(format!("missing --{flag} (flag or config key)")))
}

fn rule_of(args: &RuleArgs) -> CliResult<PrimePowerRule> {
    let d = PrimePowerRule::default();
    Ok(PrimePowerRule::new(
        args.rule.unwrap_or(d.kind),
        args.rho.unwrap_or(d.rho),
    )?)
}

fn curve_tag((a, b): (i64, i64)) -> String {
    format!("{a}_{b}")
}

fn rule_tag(rule: &PrimePowerRule) -> String {
    format!("{}-{}", rule.kind.name(), rule.rho)
}

/// Cache files are `<stem>-<limit>.astc`.
fn cache_path(ctx: &Ctx, stem: &str, limit: u64) -> PathBuf {
    ctx.cache_dir.join(format!("{stem}-{limit}.astc"))
}

/// The requested limit exactly, or else the smallest cached limit that
/// reaches `need` (the largest when `need` is unknown).
fn find_cache(
    ctx: &Ctx,
    stem: &str,
    exact: Option<u64>,
    need: Option<u64>,
) -> Option<(PathBuf, u64)> {
    if let Some(n) = exact {
        let p = cache_path(ctx, stem, n);
        return p.is_file().then_some((p, n));
    }
    let prefix = format!("{stem}-");
    let mut found: Vec<u64> = std::fs::read_dir(&ctx.cache_dir)
        .ok()?
        .filter_map(|e| {
            let name = e.ok()?.file_name().into_string().ok()?;
            name.strip_prefix(&prefix)?
                .strip_suffix(".astc")?
                .parse()
                .ok()
        })
        .collect();
    found.sort_unstable();
    let pick = match need {
        Some(need) => found.into_iter().find(|&n| n >= need)?,
        None => found.pop()?,
    };
    Some((cache_path(ctx, stem, pick), pick))
}

struct Stems {
    norm: String,
    angles: String,
    describe: String,
}

fn stems(ctx: &Ctx, src: &SourceArgs) -> CliResult<Stems> {
    Ok(match src.source {
        Source::Tau => Stems {
            norm: "tau-norm".into(),
            angles: "tau-angles".into(),
            describe: "τ (run `satotate tau --limit N`)".into(),
        },
        Source::Ec => {
            let c = curve_tag(require(src.curve.or(ctx.cfg.curve), "curve")?);
            Stems {
                norm: format!("ec-norm-{c}"),
                angles: format!("ec-angles-{c}"),
                describe: format!("curve {c} (run `satotate ec --curve A,B --limit P`)"),
            }
        }
        Source::Synth => {
            let seed = src.seed.or(ctx.cfg.seed).unwrap_or(DEFAULT_SEED);
            let rule = rule_of(&src.rule)?;
            Stems {
                norm: format!("synth-norm-{seed}-{}", rule_tag(&rule)),
                angles: format!("synth-angles-{seed}"),
                describe: format!("synthetic seed {seed} (run `satotate synth` or pass --limit)"),
            }
        }
    })
}

/// Synthetic sequences are derivable from their parameters, so a missing
/// cache is rebuilt when a limit is known.
fn derive_synth(ctx: &Ctx, src: &SourceArgs, need: Option<u64>) -> CliResult<Option<()>> {
    if src.source != Source::Synth {
        return Ok(None);
    }
    let Some(limit) = src.limit.or(ctx.cfg.limit).or(need) else {
        return Ok(None);
    };
    build_synth(ctx, limit, src.seed, &src.rule)?;
    Ok(Some(()))
}

fn load_sequence(ctx: &Ctx, src: &SourceArgs, need: Option<u64>) -> CliResult<NormalizedSequence> {
    let st = stems(ctx, src)?;
    let exact = src.limit.or(ctx.cfg.limit);
    let hit = match find_cache(ctx, &st.norm, exact, need) {
        Some(hit) => hit,
        None => {
            derive_synth(ctx, src, need)?;
            find_cache(ctx, &st.norm, exact, need).ok_or_else(|| {
                usage(format!(
                    "no cached sequence for {} reaching {} in {}",
                    st.describe,
                    need.or(exact).map_or("any limit".into(), |n| n.to_string()),
                    ctx.cache_dir.display()
                ))
            })?
        }
    };
    match load_cache(&hit.0).with_context(|| hit.0.display().to_string())? {
        Cached::Normalized(s) => Ok(s),
        other => Err(anyhow!("{} holds a {:?} cache", hit.0.display(), other.kind()).into()),
    }
}

fn load_angles(ctx: &Ctx, src: &SourceArgs, need: Option<u64>) -> CliResult<AngleSeries> {
    let st = stems(ctx, src)?;
    let exact = src.limit.or(ctx.cfg.limit);
    let hit = match find_cache(ctx, &st.angles, exact, need) {
        Some(hit) => hit,
        None => {
            derive_synth(ctx, src, need)?;
            find_cache(ctx, &st.angles, exact, need).ok_or_else(|| {
                usage(format!(
                    "no cached angles for {} in {}",
                    st.describe,
                    ctx.cache_dir.display()
                ))
            })?
        }
    };
    match load_cache(&hit.0).with_context(|| hit.0.display().to_string())? {
        Cached::Angles(a) => Ok(a),
        other => Err(anyhow!("{} holds a {:?} cache", hit.0.display(), other.kind()).into()),
    }
}

fn sieve_for(limit: u64) -> CliResult<SpfSieve> {
    Ok(SpfSieve::new(limit.max(2))?)
}

fn store(ctx: &Ctx, stem: &str, limit: u64, data: &Cached) -> CliResult<PathBuf> {
    std::fs::create_dir_all(&ctx.cache_dir)
        .with_context(|| format!("creating {}", ctx.cache_dir.display()))?;
    let path = cache_path(ctx, stem, limit);
    save_cache(&path, data).with_context(|| path.display().to_string())?;
    Ok(path)
}

/// Emits the report (files plus stdout) and maps its flags to an exit code.
fn finish(
    ctx: &Ctx,
    stem: &str,
    mut report: VerificationReport,
    started: Instant,
) -> CliResult<i32> {
    if ctx.timing {
        report.runtime_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    let written = write_report(&ctx.out_dir, stem, &report)?;
    let mut out = std::io::stdout().lock();
    match ctx.format {
        OutputFormat::Json => writeln!(out, "{}", report_json(&report)?)?,
        OutputFormat::Csv => {
            for t in &report.tables {
                writeln!(out, "# {}", t.name)?;
                write!(out, "{}", table_csv(t)?)?;
            }
            writeln!(out, "# checks")?;
            write!(out, "{}", checks_csv(&report)?)?;
        }
    }
    let failed: Vec<_> = report.failed_checks().map(|c| c.name.as_str()).collect();
    eprintln!(
        "{}: {} checks, {} failed; wrote {} files under {}",
        report.name,
        report.checks.len(),
        failed.len(),
        written.len(),
        ctx.out_dir.display()
    );
    for name in &failed {
        eprintln!("  FAIL {name}");
    }
    Ok(exit_code(&report))
}

pub(crate) fn exit_code(report: &VerificationReport) -> i32 {
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn cmd_tau(ctx: &Ctx, limit: Option<u64>, check: bool, export: Option<&Path>) -> CliResult<i32> {
    let t = Instant::now();
    let limit = require(limit.or(ctx.cfg.limit), "limit")?;
    let table = expand_delta(&TauConfig::new(limit))?;
    let norm = normalize_tau(&table);
    let angles = tau_angles(&table)?;
    let mut paths = vec![
        store(ctx, "tau-norm", limit, &Cached::Normalized(norm))?,
        store(ctx, "tau-angles", limit, &Cached::Angles(angles))?,
    ];
    if let Some(path) = export {
        let mut w = csv::Writer::from_path(path).with_context(|| path.display().to_string())?;
        w.write_record(["n", "tau"]).context("writing export")?;
        for (i, v) in table.values().iter().enumerate() {
            w.write_record([(i + 1).to_string(), v.to_string()])
                .context("writing export")?;
        }
        w.flush()?;
        paths.push(path.to_path_buf());
    }
    let report = check.then(|| integrity_check(&table));
    paths.insert(0, store(ctx, "tau-exact", limit, &Cached::ExactTau(table))?);
    for p in &paths {
        eprintln!("wrote {}", p.display());
    }
    match report {
        Some(r) => finish(ctx, &format!("tau-integrity-{limit}"), r, t),
        None => Ok(EXIT_OK),
    }
}

fn cmd_ec(ctx: &Ctx, curve: Option<(i64, i64)>, limit: Option<u64>) -> CliResult<i32> {
    let t = Instant::now();
    let (a, b) = require(curve.or(ctx.cfg.curve), "curve")?;
    let limit = require(limit.or(ctx.cfg.limit), "limit")?;
    let spec = CurveSpec::new(a, b)?;
    let series = trace_series(&spec, limit)?;
    let sieve = sieve_for(limit)?;
    let norm = ec_normalized_sequence(&series, &sieve, limit)?;
    let angles = series.angles()?;
    let tag = curve_tag((a, b));
    for p in [
        store(
            ctx,
            &format!("ec-traces-{tag}"),
            limit,
            &Cached::Traces(series.clone()),
        )?,
        store(
            ctx,
            &format!("ec-norm-{tag}"),
            limit,
            &Cached::Normalized(norm),
        )?,
        store(
            ctx,
            &format!("ec-angles-{tag}"),
            limit,
            &Cached::Angles(angles),
        )?,
    ] {
        eprintln!("wrote {}", p.display());
    }
    let mut report = supersingular_census(&series);
    report
        .param("curve", format!("{a},{b}"))
        .param("bad_primes", format!("{:?}", series.bad_primes()));
    report.tables.push(kappa_table(&series, &decades(limit))?);
    finish(ctx, &format!("ec-{tag}-{limit}"), report, t)
}

fn decades(limit: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = std::iter::successors(Some(10u64), |x| x.checked_mul(10))
        .take_while(|&x| x < limit)
        .collect();
    xs.push(limit);
    xs
}

fn kappa_table(series: &TraceSeries, xs: &[u64]) -> CliResult<ReportTable> {
    let mut t = ReportTable::new("kappa", &["x", "kappa", "zero_primes"]);
    for &x in xs {
        let k = kappa_partial(series, x)?;
        t.push(&[x as f64, k.value, k.zero_primes.len() as f64]);
    }
    Ok(t)
}

fn build_synth(
    ctx: &Ctx,
    limit: u64,
    seed: Option<u64>,
    rule: &RuleArgs,
) -> CliResult<VerificationReport> {
    let seed = seed.or(ctx.cfg.seed).unwrap_or(DEFAULT_SEED);
    let rule = rule_of(rule)?;
    let sieve = sieve_for(limit)?;
    let s = build_synthetic_sequence(&SyntheticSpec::new(limit, seed, rule), &sieve)?;
    for p in [
        store(
            ctx,
            &format!("synth-norm-{seed}-{}", rule_tag(&rule)),
            limit,
            &Cached::Normalized(s.sequence),
        )?,
        store(
            ctx,
            &format!("synth-angles-{seed}"),
            limit,
            &Cached::Angles(s.angles),
        )?,
    ] {
        eprintln!("wrote {}", p.display());
    }
    let mut report = VerificationReport::new("synthetic");
    report
        .param("limit", limit)
        .param("seed", seed)
        .param("rule", rule.kind.name())
        .param("rho", rule.rho)
        .param("attempts", s.attempts);
    let mut t = ReportTable::new("growth-violations", &["p", "k", "magnitude", "bound"]);
    for v in &s.violations {
        t.push(&[v.p as f64, v.k as f64, v.magnitude, v.bound]);
    }
    report.tables.push(t);
    Ok(report)
}

fn cmd_synth(ctx: &Ctx, limit: Option<u64>, seed: Option<u64>, rule: &RuleArgs) -> CliResult<i32> {
    let t = Instant::now();
    let limit = require(limit.or(ctx.cfg.limit), "limit")?;
    let report = build_synth(ctx, limit, seed, rule)?;
    let stem = format!("synth-{}-{limit}", report.parameters["seed"]);
    finish(ctx, &stem, report, t)
}

fn cmd_constants(ctx: &Ctx) -> CliResult<i32> {
    let c = STConstants::compute();
    let rows: [(&str, f64, &str); 8] = [
        (
            "h1",
            c.h1,
            "h(1) = E[|2cos θ|] by adaptive Simpson quadrature",
        ),
        ("clt_c", c.clt_c, "closed form 1/2 + π²/12"),
        (
            "clt_c_quadrature",
            c.clt_c_quadrature,
            "quadrature of E[log²(2|cos θ|)]",
        ),
        ("log_mean", c.log_mean, "quadrature of E[log(2|cos θ|)]"),
        (
            "abs_cos_moment",
            c.abs_cos_moment,
            "quadrature of ∫_0^π |cos θ| sin²θ dθ",
        ),
        (
            "signed_cos_moment",
            c.signed_cos_moment,
            "quadrature of ∫_0^π cos θ sin²θ dθ",
        ),
        (
            "half_density",
            c.half_density,
            "quadrature of (4/π)∫_0^{π/3} sin²θ dθ",
        ),
        (
            "half_density_closed",
            c.half_density_closed,
            "closed form 2/3 − √3/(2π)",
        ),
    ];
    let mut out = std::io::stdout().lock();
    match ctx.format {
        OutputFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .iter()
                .map(|(k, v, how)| {
                    (
                        k.to_string(),
                        serde_json::json!({ "value": v, "provenance": how }),
                    )
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&map).map_err(anyhow::Error::from)?
            )?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["constant", "value", "provenance"])
                .map_err(anyhow::Error::from)?;
            for (k, v, how) in rows {
                w.write_record([k, &v.to_string(), how])
                    .map_err(anyhow::Error::from)?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

/// Largest count in a checkpoint list, for picking a cache before the
/// list can be validated against it.
fn max_checkpoint(text: &str) -> CliResult<u64> {
    text.split(',')
        .map(|s| parse_limit(s.trim()).map_err(CliError::Usage))
        .try_fold(0, |m, n| Ok(m.max(n?)))
}

fn checkpoints_for(text: Option<&str>, limit: u64) -> CliResult<Checkpoints> {
    match text {
        Some(t) => Ok(Checkpoints::parse(t, limit)?),
        None => Ok(Checkpoints::new(vec![limit], limit)?),
    }
}

fn cmd_verify(ctx: &Ctx, cmd: VerifyCommand) -> CliResult<i32> {
    let t = Instant::now();
    let cp_text = |flag: &Option<String>| flag.clone().or_else(|| ctx.cfg.checkpoints.clone());
    let (stem, report) = match cmd {
        VerifyCommand::Thm1 {
            src,
            epsilon,
            checkpoints,
            monotone_slack,
        } => {
            let cp = cp_text(&checkpoints);
            let need = cp.as_deref().map(max_checkpoint).transpose()?;
            let seq = load_sequence(ctx, &src, need)?;
            let cps = checkpoints_for(cp.as_deref(), seq.limit())?;
            let eps = epsilon.or(ctx.cfg.epsilon).unwrap_or(0.25);
            let mut r = verify_thm1(&seq, eps, &cps, monotone_slack)?;
            r.param("source", seq.source().name());
            ("thm1", r)
        }
        VerifyCommand::Thm2 {
            src,
            checkpoints,
            ratio_max,
        } => {
            let cp = cp_text(&checkpoints);
            let need = cp.as_deref().map(max_checkpoint).transpose()?;
            let seq = load_sequence(ctx, &src, need)?;
            let cps = checkpoints_for(cp.as_deref(), seq.limit())?;
            let sieve = sieve_for(cps.last())?;
            let mut r = verify_thm2(&seq, &cps, &sieve, ratio_max)?;
            r.param("source", seq.source().name());
            ("thm2", r)
        }
        VerifyCommand::Thm3 {
            src,
            x,
            filter,
            a,
            standardization,
            ks_max,
            skew_max,
            mu_band,
            sigma2_band,
        } => {
            let seq = load_sequence(ctx, &src, x)?;
            let x = x.unwrap_or(seq.limit());
            let filter = match filter {
                SupportMode::All => SupportFilter::all(),
                SupportMode::Nonzero => SupportFilter::nonzero(),
                SupportMode::FloorA => SupportFilter::floor_a(a.or(ctx.cfg.a).unwrap_or(2.0))?,
            };
            let bounds = Thm3Bounds {
                ks_max,
                skew_max,
                mu_band,
                sigma2_band,
            };
            let sieve = sieve_for(x)?;
            let mut r = verify_thm3(&seq, x, &filter, standardization, &sieve, &bounds)?;
            r.param("source", seq.source().name());
            ("thm3", r)
        }
        VerifyCommand::LemmaSums {
            src,
            gammas,
            checkpoints,
            square_mean_band,
        } => {
            let cp = cp_text(&checkpoints);
            let need = cp.as_deref().map(max_checkpoint).transpose()?;
            let seq = load_sequence(ctx, &src, need)?;
            let cps = checkpoints_for(cp.as_deref(), seq.limit())?;
            let gammas = gammas
                .or_else(|| ctx.cfg.gammas.clone())
                .unwrap_or_else(|| vec![0.5, 1.0, 1.5, 2.0]);
            let mut r = verify_lemma_sums(&seq, &gammas, &cps, square_mean_band)?;
            r.param("source", seq.source().name());
            ("lemma-sums", r)
        }
        VerifyCommand::HallTenenbaum { src, x, power } => {
            if !(power > 0.0 && power.is_finite()) {
                return Err(usage(format!("--power must be positive, got {power}")));
            }
            let seq = load_sequence(ctx, &src, x)?;
            let x = x.unwrap_or(seq.limit());
            let f: Vec<f64> = seq.values()[..x as usize]
                .iter()
                .map(|v| v.abs().powf(power))
                .collect();
            let sieve = sieve_for(x)?;
            let mut r = verify_hall_tenenbaum(&f, &sieve)?;
            r.param("source", seq.source().name()).param("power", power);
            ("hall-tenenbaum", r)
        }
        VerifyCommand::Assumptions {
            src,
            a,
            grid,
            checkpoints,
            k_max,
            a2_max,
        } => {
            let cp = cp_text(&checkpoints);
            let need = cp.as_deref().map(max_checkpoint).transpose()?;
            let seq = load_sequence(ctx, &src, need)?;
            let angles = load_angles(ctx, &src, Some(seq.limit()))?;
            let cps = checkpoints_for(cp.as_deref(), angles.limit().min(seq.limit()))?;
            let opts = AssumptionOptions {
                a: a.or(ctx.cfg.a).unwrap_or(2.0),
                grid: default_angle_grid(grid),
                checkpoints: cps,
                k_max,
                a2_max,
            };
            let mut r = check_assumptions(&seq, &angles, &opts)?;
            r.param("source", seq.source().name());
            ("assumptions", r)
        }
    };
    let src_tag = report.parameters.get("source").cloned().unwrap_or_default();
    finish(ctx, &format!("{stem}-{src_tag}"), report, t)
}

fn load_traces(
    ctx: &Ctx,
    curve: (i64, i64),
    exact: Option<u64>,
    need: Option<u64>,
) -> CliResult<TraceSeries> {
    let stem = format!("ec-traces-{}", curve_tag(curve));
    let (path, _) = find_cache(ctx, &stem, exact, need).ok_or_else(|| {
        usage(format!(
            "no cached traces for curve {} in {} (run `satotate ec`)",
            curve_tag(curve),
            ctx.cache_dir.display()
        ))
    })?;
    match load_cache(&path).with_context(|| path.display().to_string())? {
        Cached::Traces(t) => Ok(t),
        other => Err(anyhow!("{} holds a {:?} cache", path.display(), other.kind()).into()),
    }
}

fn cmd_stats(ctx: &Ctx, cmd: StatsCommand) -> CliResult<i32> {
    let t = Instant::now();
    match cmd {
        StatsCommand::LogMoments { src, x, floor } => {
            let angles = load_angles(ctx, &src, x)?;
            let xs = match x {
                Some(x) => vec![x],
                None => decades(angles.limit()),
            };
            let mut report = VerificationReport::new("log-moments");
            report
                .param("source", source_name(src.source))
                .param("floor", floor);
            let mut table = ReportTable::new(
                "log-moments",
                &[
                    "x",
                    "mu",
                    "sigma2",
                    "support",
                    "mu_over_log2x",
                    "sigma2_over_log2x",
                ],
            );
            for x in xs {
                let m = prime_log_moments(&angles, x, floor)?;
                let l2 = (x as f64).ln().ln();
                table.push(&[
                    x as f64,
                    m.mu,
                    m.sigma2,
                    m.support as f64,
                    m.mu / l2,
                    m.sigma2 / l2,
                ]);
            }
            report.tables.push(table);
            finish(
                ctx,
                &format!("log-moments-{}", source_name(src.source)),
                report,
                t,
            )
        }
        StatsCommand::Census { src } => {
            let angles = load_angles(ctx, &src, None)?;
            let mut report = supersingular_census_angles(&angles);
            report.param("source", source_name(src.source));
            finish(
                ctx,
                &format!("census-{}", source_name(src.source)),
                report,
                t,
            )
        }
        StatsCommand::Kappa {
            curve,
            limit,
            checkpoints,
        } => {
            let curve = require(curve.or(ctx.cfg.curve), "curve")?;
            let cp = checkpoints.or_else(|| ctx.cfg.checkpoints.clone());
            let need = cp.as_deref().map(max_checkpoint).transpose()?;
            let series = load_traces(ctx, curve, limit.or(ctx.cfg.limit), need)?;
            let xs = match cp.as_deref() {
                Some(text) => Checkpoints::parse(text, series.limit())?
                    .as_slice()
                    .to_vec(),
                None => decades(series.limit()),
            };
            let mut report = VerificationReport::new("kappa");
            report.param("curve", format!("{},{}", curve.0, curve.1));
            report.tables.push(kappa_table(&series, &xs)?);
            let last = kappa_partial(&series, *xs.last().expect("checkpoints are non-empty"))?;
            report.param("zero_primes_at_last", format!("{:?}", last.zero_primes));
            finish(ctx, &format!("kappa-{}", curve_tag(curve)), report, t)
        }
    }
}
