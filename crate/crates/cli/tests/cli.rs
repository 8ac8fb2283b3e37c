use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use satotate_cli::cache::{load_cache, save_cache, CacheError, Cached};
use satotate_core::{
    AngleRecord, AngleSeries, NormalizedSequence, SequenceSource, VerificationReport,
};
use tempfile::TempDir;

fn satotate(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satotate"))
        .args(args)
        .env("SATOTATE_CACHE_DIR", dir.join("cache"))
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_report(path: &Path) -> VerificationReport {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn smoke_tau_then_thm2() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&satotate(d.path(), &["tau", "--limit", "100"])), 0);
    let out = satotate(d.path(), &["verify", "thm2", "--checkpoints", "50,100"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let printed: VerificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(printed.all_passed());
    assert_eq!(
        printed,
        read_report(&d.path().join("cache/reports/thm2-tau.json"))
    );
}

#[test]
fn missing_sequence_is_usage_error() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&satotate(d.path(), &["verify", "thm1"])), 2);
    assert_eq!(
        code(&satotate(
            d.path(),
            &["verify", "thm1", "--source", "ec", "--curve", "0,1"]
        )),
        2
    );
}

#[test]
fn unknown_flags_and_bad_values_are_usage_errors() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&satotate(d.path(), &["--bogus", "constants"])), 2);
    assert_eq!(code(&satotate(d.path(), &["tau", "--limit", "0"])), 2);
    assert_eq!(code(&satotate(d.path(), &["tau"])), 2);
    assert_eq!(
        code(&satotate(
            d.path(),
            &["ec", "--curve", "0,0", "--limit", "100"]
        )),
        2
    );
    assert_eq!(
        code(&satotate(d.path(), &["verify", "thm1", "--epsilon", "0.9"])),
        2
    );
    assert_eq!(
        code(&satotate(d.path(), &["--threads", "0", "constants"])),
        2
    );
    assert_eq!(code(&satotate(d.path(), &["--help"])), 0);
}

#[test]
fn constants_match_published_values() {
    let d = TempDir::new().unwrap();
    let out = satotate(d.path(), &["constants"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let h1 = v["h1"]["value"].as_f64().unwrap();
    assert!((h1 - 0.848826).abs() < 1e-6, "{h1}");
    let c = v["clt_c"]["value"].as_f64().unwrap();
    assert!((c - (0.5 + std::f64::consts::PI.powi(2) / 12.0)).abs() < 1e-15);
    assert!(v["clt_c"]["provenance"]
        .as_str()
        .unwrap()
        .contains("closed form"));
    let csv = satotate(d.path(), &["constants", "--format", "csv"]);
    assert!(String::from_utf8(csv.stdout)
        .unwrap()
        .starts_with("constant,value,provenance"));
}

#[test]
fn exit_code_follows_report_flags() {
    let d = TempDir::new().unwrap();
    satotate(d.path(), &["tau", "--limit", "200"]);
    let out = satotate(
        d.path(),
        &[
            "verify",
            "thm2",
            "--checkpoints",
            "100,200",
            "--ratio-max",
            "1e-9",
        ],
    );
    assert_eq!(code(&out), 1);
    let r = read_report(&d.path().join("cache/reports/thm2-tau.json"));
    assert!(!r.all_passed() && r.flags_consistent());
    let out = satotate(
        d.path(),
        &[
            "verify",
            "thm2",
            "--checkpoints",
            "100,200",
            "--ratio-max",
            "10",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(read_report(&d.path().join("cache/reports/thm2-tau.json")).all_passed());
}

fn parse_csv(path: &Path) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut rd = csv::Reader::from_path(path).unwrap();
    let head = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|c| (!c.is_empty()).then(|| c.parse().unwrap()))
                .collect()
        })
        .collect();
    (head, rows)
}

#[test]
fn csv_rows_equal_json_rows() {
    let d = TempDir::new().unwrap();
    satotate(d.path(), &["synth", "--limit", "5000"]);
    for (args, stem) in [
        (
            vec![
                "verify",
                "thm1",
                "--source",
                "synth",
                "--checkpoints",
                "1e3,5e3",
            ],
            "thm1-synthetic",
        ),
        (
            vec!["verify", "thm3", "--source", "synth"],
            "thm3-synthetic",
        ),
        (
            vec![
                "verify",
                "lemma-sums",
                "--source",
                "synth",
                "--checkpoints",
                "500,5000",
            ],
            "lemma-sums-synthetic",
        ),
        (
            vec!["verify", "assumptions", "--source", "synth"],
            "assumptions-synthetic",
        ),
    ] {
        let out = satotate(d.path(), &args);
        assert!(code(&out) <= 1, "{}", String::from_utf8_lossy(&out.stderr));
        let dir = d.path().join("cache/reports");
        let report = read_report(&dir.join(format!("{stem}.json")));
        assert!(!report.tables.is_empty());
        for t in &report.tables {
            let (head, rows) = parse_csv(&dir.join(format!("{stem}.{}.csv", t.name)));
            assert_eq!(head, t.columns, "{stem}.{}", t.name);
            assert_eq!(rows, t.rows, "{stem}.{}", t.name);
        }
    }
}

#[test]
fn reports_do_not_depend_on_threads() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let run = |d: &Path, threads: &str| {
        satotate(
            d,
            &[
                "--threads",
                threads,
                "synth",
                "--limit",
                "20000",
                "--seed",
                "7",
            ],
        );
        let out = satotate(
            d,
            &[
                "--threads",
                threads,
                "verify",
                "thm3",
                "--source",
                "synth",
                "--seed",
                "7",
            ],
        );
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    assert_eq!(run(a.path(), "1"), run(b.path(), "4"));
    assert_eq!(
        std::fs::read(
            a.path()
                .join("cache/synth-norm-7-hecke-chebyshev-0.1-20000.astc")
        )
        .unwrap(),
        std::fs::read(
            b.path()
                .join("cache/synth-norm-7-hecke-chebyshev-0.1-20000.astc")
        )
        .unwrap()
    );
}

#[test]
fn config_file_feeds_flags() {
    let d = TempDir::new().unwrap();
    std::fs::write(
        d.path().join("run.cfg"),
        "limit = 150\ncheckpoints = 50,150\n",
    )
    .unwrap();
    assert_eq!(
        code(&satotate(d.path(), &["--config", "run.cfg", "tau"])),
        0
    );
    assert!(d.path().join("cache/tau-norm-150.astc").is_file());
    // the flag wins over the file
    assert_eq!(
        code(&satotate(
            d.path(),
            &["--config", "run.cfg", "tau", "--limit", "60"]
        )),
        0
    );
    assert!(d.path().join("cache/tau-norm-60.astc").is_file());
    let out = satotate(d.path(), &["--config", "run.cfg", "verify", "thm1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = read_report(&d.path().join("cache/reports/thm1-tau.json"));
    assert_eq!(
        r.table("exceedance").unwrap().column("x").unwrap(),
        vec![Some(50.0), Some(150.0)]
    );

    std::fs::write(d.path().join("bad.cfg"), "epsilon = 3\n").unwrap();
    assert_eq!(
        code(&satotate(d.path(), &["--config", "bad.cfg", "constants"])),
        2
    );
    assert_eq!(
        code(&satotate(
            d.path(),
            &["--config", "missing.cfg", "constants"]
        )),
        2
    );
}

#[test]
fn corrupted_cache_is_refused() {
    let d = TempDir::new().unwrap();
    satotate(d.path(), &["tau", "--limit", "100"]);
    let path = d.path().join("cache/tau-norm-100.astc");
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
    let out = satotate(d.path(), &["verify", "thm2"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("checksum"));
    assert!(matches!(
        load_cache(&path),
        Err(CacheError::Checksum { .. })
    ));
}

#[test]
fn exact_table_round_trips_through_files() {
    let d = TempDir::new().unwrap();
    satotate(
        d.path(),
        &["tau", "--limit", "1000", "--export-csv", "tau.csv"],
    );
    let Cached::ExactTau(t) = load_cache(&d.path().join("cache/tau-exact-1000.astc")).unwrap()
    else {
        panic!("wrong cache kind");
    };
    let direct =
        satotate_core::tau::expand_delta(&satotate_core::tau::TauConfig::new(1000)).unwrap();
    assert_eq!(t, direct);
    let mut rd = csv::Reader::from_path(d.path().join("tau.csv")).unwrap();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.unwrap();
        assert_eq!(rec[0].parse::<usize>().unwrap(), i + 1);
        assert_eq!(rec[1], direct.values()[i].to_string());
    }
}

fn arb_angles() -> impl Strategy<Value = AngleSeries> {
    proptest::collection::vec(0.0..std::f64::consts::PI, 0..40).prop_map(|thetas| {
        let primes = [
            2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
            83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
        ];
        let recs = thetas
            .iter()
            .zip(primes)
            .map(|(&t, p)| AngleRecord::from_angle(p, t))
            .collect();
        AngleSeries::new(200, recs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalized_caches_round_trip(values in proptest::collection::vec(-1e6f64..1e6, 1..200)) {
        let mut values = values;
        values[0] = 1.0;
        let d = TempDir::new().unwrap();
        let path = d.path().join("n.astc");
        let seq = NormalizedSequence::from_values(SequenceSource::Synthetic, &values).unwrap();
        save_cache(&path, &Cached::Normalized(seq.clone())).unwrap();
        prop_assert_eq!(load_cache(&path).unwrap(), Cached::Normalized(seq));
    }

    #[test]
    fn angle_caches_round_trip(angles in arb_angles()) {
        let d = TempDir::new().unwrap();
        let path = d.path().join("a.astc");
        save_cache(&path, &Cached::Angles(angles.clone())).unwrap();
        prop_assert_eq!(load_cache(&path).unwrap(), Cached::Angles(angles));
    }

    #[test]
    fn any_single_byte_flip_is_detected(pos in 0usize..1000, bit in 0u8..8) {
        let seq = NormalizedSequence::from_values(SequenceSource::Tau, &[1.0, -0.5, 0.25, 0.125]).unwrap();
        let bytes = satotate_cli::cache::encode(&Cached::Normalized(seq.clone())).unwrap();
        let mut bad = bytes.clone();
        let i = pos % bad.len();
        bad[i] ^= 1 << bit;
        // a flip either is rejected or (in the limit field) changes the
        // decoded object; it never silently yields the original
        if let Ok(d) = satotate_cli::cache::decode(&bad) { prop_assert_ne!(d, Cached::Normalized(seq)); }
    }
}
