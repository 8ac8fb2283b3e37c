//! JSON and CSV renderings of verification reports.

use std::path::{Path, PathBuf};

use anyhow::Result;
use satotate_core::{ReportTable, VerificationReport};

pub fn report_json(report: &VerificationReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

/// Shortest round-tripping form, with an exponent outside `[1e-5, 1e16)`.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Missing cells become empty fields; parsing a cell recovers the JSON value.
pub fn table_csv(table: &ReportTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.map(fmt_num).unwrap_or_default()))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn checks_csv(report: &VerificationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "observed", "bound", "passed"])?;
    for c in &report.checks {
        w.write_record([
            c.name.clone(),
            c.observed.map(fmt_num).unwrap_or_default(),
            c.bound.to_string(),
            c.passed.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Writes `<stem>.json`, one `<stem>.<table>.csv` per table and
/// `<stem>.checks.csv`; returns the written paths.
pub fn write_report(dir: &Path, stem: &str, report: &VerificationReport) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let json = dir.join(format!("{stem}.json"));
    std::fs::write(&json, report_json(report)?)?;
    written.push(json);
    for t in &report.tables {
        let path = dir.join(format!("{stem}.{}.csv", t.name));
        std::fs::write(&path, table_csv(t)?)?;
        written.push(path);
    }
    let path = dir.join(format!("{stem}.checks.csv"));
    std::fs::write(&path, checks_csv(report)?)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use satotate_core::Bound;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("demo");
        r.param("x", 10);
        let mut t = ReportTable::new("rows", &["x", "v"]);
        t.push(&[1.0, 0.1 + 0.2]);
        t.push(&[2.0, f64::NAN]);
        t.push(&[3.0, -1e-300]);
        r.tables.push(t);
        r.check("c", 0.5, Bound::at_most(1.0));
        r
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back: VerificationReport = serde_json::from_str(&report_json(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_matches_rows() {
        let r = sample();
        let text = table_csv(&r.tables[0]).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rd.headers().unwrap(), vec!["x", "v"]);
        let rows: Vec<Vec<Option<f64>>> = rd
            .records()
            .map(|rec| {
                rec.unwrap()
                    .iter()
                    .map(|c| {
                        if c.is_empty() {
                            None
                        } else {
                            Some(c.parse().unwrap())
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(rows, r.tables[0].rows);
        assert!(text.contains("-1e-300"));
    }

    #[test]
    fn numbers_round_trip() {
        for v in [
            0.0,
            -0.0,
            1.0,
            0.1 + 0.2,
            1e-5,
            9.99e-6,
            1e16,
            123456.789,
            f64::MAX,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
    }
}
