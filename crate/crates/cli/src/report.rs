// SPDX-License-Identifier: Apache-2.0

//! JSON and CSV renderings of a scan, plus the plain-text summaries.

use std::fmt::Write as _;

use hopfdisc::analysis::{FiberRecord, ScanReport};
use serde::Serialize;

use crate::config::RunConfig;

pub const REPORT_VERSION: u32 = 1;

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 22] = [
    "family",
    "ell",
    "p",
    "point",
    "skipped_reason",
    "error",
    "dim",
    "radical_dim",
    "sd",
    "gram_rank",
    "level",
    "irr_dims",
    "irr_count",
    "num_characters",
    "seed_dim",
    "stabilizer_order",
    "all_max_stable",
    "in_lowest_stratum",
    "in_winding_orbit_of_identity",
    "basic_equivalences_consistent",
    "matches_expected",
    "failed_checks",
];

#[derive(Serialize)]
struct JsonReport<'a> {
    report_version: u32,
    config: &'a RunConfig,
    #[serde(flatten)]
    report: &'a ScanReport,
}

pub fn to_json(cfg: &RunConfig, report: &ScanReport) -> String {
    let doc = JsonReport {
        report_version: REPORT_VERSION,
        config: cfg,
        report,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn csv_row(cfg: &RunConfig, r: &FiberRecord) -> Vec<String> {
    vec![
        cfg.family.name().to_string(),
        cfg.ell.to_string(),
        cfg.prime.to_string(),
        r.point.to_string(),
        opt(&r.skipped_reason),
        opt(&r.error),
        opt(&r.dim),
        opt(&r.radical_dim),
        opt(&r.sd),
        opt(&r.gram_rank),
        opt(&r.level),
        r.irr_dims
            .as_ref()
            .map(|d| {
                d.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .unwrap_or_default(),
        opt(&r.irr_count),
        opt(&r.num_characters),
        opt(&r.seed_dim),
        opt(&r.stabilizer_order),
        opt(&r.all_max_stable),
        opt(&r.in_lowest_stratum),
        opt(&r.in_winding_orbit_of_identity),
        opt(&r.basic_equivalences_consistent),
        opt(&r.matches_expected),
        r.failed_checks().join(" "),
    ]
}

pub fn to_csv(cfg: &RunConfig, report: &ScanReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in &report.records {
        w.write_record(csv_row(cfg, r)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn fiber_summary(r: &FiberRecord) -> String {
    if let Some(reason) = &r.skipped_reason {
        return format!("{}: skipped ({reason})", r.point);
    }
    if let Some(err) = &r.error {
        return format!("{}: error ({err})", r.point);
    }
    let mut line = format!(
        "{}: sd {} level {} irreducible dims {:?} characters {} max-stable {} expected {}",
        r.point,
        opt(&r.sd),
        opt(&r.level),
        r.irr_dims.clone().unwrap_or_default(),
        opt(&r.num_characters),
        opt(&r.all_max_stable),
        if r.matches_expected == Some(true) {
            "yes"
        } else {
            "NO"
        },
    );
    let failed = r.failed_checks();
    if !failed.is_empty() {
        let _ = write!(line, " failed: {}", failed.join(", "));
    }
    line
}

pub fn strata_summary(report: &ScanReport) -> String {
    let mut out = String::new();
    let analyzed = report.records.iter().filter(|r| r.is_analyzed()).count();
    let skipped = report
        .records
        .iter()
        .filter(|r| r.skipped_reason.is_some())
        .count();
    let _ = writeln!(
        out,
        "{} l={} p={}: {analyzed} fibers analyzed, {skipped} skipped, |G0| = {}",
        report.summary.family, report.summary.ell, report.field_context.p, report.summary.g0_order
    );
    for s in &report.strata {
        let mut pts: Vec<String> = s.points.iter().take(6).map(ToString::to_string).collect();
        if s.points.len() > 6 {
            pts.push(format!("+{} more", s.points.len() - 6));
        }
        let _ = writeln!(
            out,
            "  level {:>4}: {} points [{}]",
            s.level,
            s.points.len(),
            pts.join("; ")
        );
    }
    let _ = writeln!(
        out,
        "  strata match closed form: {}",
        if report.strata_match_expected {
            "yes"
        } else {
            "NO"
        }
    );
    out
}

pub fn suite_table(report: &ScanReport) -> String {
    let mut out = String::new();
    let width = report
        .suite_matrix
        .keys()
        .map(|k| k.len())
        .max()
        .unwrap_or(5);
    let _ = writeln!(
        out,
        "{:<width$}  {:>5}  {:>5}  result",
        "check", "pass", "fail"
    );
    for (label, t) in &report.suite_matrix {
        let verdict = if t.fail == 0 { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{label:<width$}  {:>5}  {:>5}  {verdict}",
            t.pass, t.fail
        );
    }
    out
}
