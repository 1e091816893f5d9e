//! Metric CSV files and aligned text tables.

use std::fmt::Write as _;
use std::path::Path;

use claimrank_core::eval::{Metric, MetricReport, MetricRow};
use claimrank_core::SourceId;

use crate::error::{Error, Result};
use crate::experiment::{AblationMatrix, FeatureAblationRow};

pub const METRICS_HEADER: [&str; 5] = ["source", "metric", "value", "variant", "seed_set"];

fn seed_set(seeds: &[u64]) -> String {
    seeds.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("+")
}

fn parse_seed_set(s: &str) -> Option<Vec<u64>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split('+').map(|x| x.parse().ok()).collect()
}

fn value_field(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:?}"))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv output is utf-8")
}

/// Long-format CSV, one line per (report, source, metric). Undefined values
/// are written as `NA`.
pub fn metrics_csv(reports: &[MetricReport]) -> String {
    let mut w = csv_writer();
    w.write_record(METRICS_HEADER).expect("in-memory csv");
    for rep in reports {
        let seeds = seed_set(&rep.seeds);
        for (src, row) in &rep.rows {
            for (m, v) in Metric::REPORTED.iter().zip(row.0) {
                w.write_record([src.code(), &m.to_string(), &value_field(v), &rep.variant, &seeds])
                    .expect("in-memory csv");
            }
        }
    }
    finish(w)
}

/// Inverse of [`metrics_csv`]; reports and rows keep their file order.
pub fn parse_metrics_csv(text: &str, path: &Path) -> Result<Vec<MetricReport>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let bad = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let header = reader.headers().map_err(|e| bad(1, e.to_string()))?;
    if header.iter().ne(METRICS_HEADER) {
        return Err(bad(1, format!("expected header {}", METRICS_HEADER.join(","))));
    }
    let mut reports: Vec<MetricReport> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| bad(line, e.to_string()))?;
        let [src, metric, value, variant, seeds] = [0, 1, 2, 3, 4].map(|k| rec.get(k).unwrap_or(""));
        let src = SourceId::from_code(src).filter(|s| s.is_real()).ok_or_else(|| bad(line, format!("unknown source {src:?}")))?;
        let metric = Metric::parse(metric)
            .and_then(|m| Metric::REPORTED.iter().position(|r| *r == m))
            .ok_or_else(|| bad(line, format!("unknown metric {metric:?}")))?;
        let value = match value {
            "NA" => None,
            v => Some(v.parse::<f64>().map_err(|_| bad(line, format!("bad value {v:?}")))?),
        };
        let seeds = parse_seed_set(seeds).ok_or_else(|| bad(line, format!("bad seed set {seeds:?}")))?;
        let rep = match reports.iter().position(|r| r.variant == variant && r.seeds == seeds) {
            Some(k) => &mut reports[k],
            None => {
                reports.push(MetricReport { variant: variant.to_string(), seeds, rows: Vec::new() });
                reports.last_mut().expect("just pushed")
            }
        };
        let row = match rep.rows.iter().position(|(s, _)| *s == src) {
            Some(k) => &mut rep.rows[k].1,
            None => {
                rep.rows.push((src, MetricRow::default()));
                &mut rep.rows.last_mut().expect("just pushed").1
            }
        };
        row.0[metric] = value;
    }
    Ok(reports)
}

pub fn load_metrics_csv(path: &Path) -> Result<Vec<MetricReport>> {
    parse_metrics_csv(&crate::io::read_text(path)?, path)
}

/// Three decimals without the leading zero, as in published tables.
pub fn fmt_value(v: Option<f64>) -> String {
    match v {
        None => "-".into(),
        Some(x) => {
            let s = format!("{x:.3}");
            s.strip_prefix("0.").map_or_else(|| s.replacen("-0.", "-.", 1), |rest| format!(".{rest}"))
        }
    }
}

fn table_section(out: &mut String, title: &str, rows: &[(&str, MetricRow)]) {
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max(7);
    writeln!(out, "{title}").unwrap();
    write!(out, "  {:<width$}", "variant").unwrap();
    for m in Metric::REPORTED {
        write!(out, " {:>7}", m.to_string()).unwrap();
    }
    out.push('\n');
    let baseline = rows.first().map(|(_, r)| *r);
    for (k, (name, row)) in rows.iter().enumerate() {
        write!(out, "  {name:<width$}").unwrap();
        for (i, v) in row.0.iter().enumerate() {
            let better = k > 0 && matches!((v, baseline.and_then(|b| b.0[i])), (Some(a), Some(b)) if *a > b);
            let cell = format!("{}{}", fmt_value(*v), if better { "*" } else { " " });
            write!(out, " {cell:>7}").unwrap();
        }
        out.push('\n');
    }
    out.push('\n');
}

/// Side-by-side comparison, one section per source and one for the average
/// over sources. `*` marks a value above the first report's.
pub fn render_table(reports: &[MetricReport]) -> Result<String> {
    if reports.iter().all(|r| r.rows.is_empty()) {
        return Err(Error::Config("no metrics to report".into()));
    }
    let mut out = String::new();
    for src in SourceId::REAL {
        let rows: Vec<(&str, MetricRow)> =
            reports.iter().filter_map(|r| r.row(src).map(|row| (r.variant.as_str(), *row))).collect();
        if !rows.is_empty() {
            table_section(&mut out, &format!("Source {src}"), &rows);
        }
    }
    let avg: Vec<(&str, MetricRow)> = reports.iter().map(|r| (r.variant.as_str(), r.average())).collect();
    table_section(&mut out, "Average over sources", &avg);
    if reports.len() > 1 {
        writeln!(out, "* better than {}", reports[0].variant).unwrap();
    }
    Ok(out)
}

/// Writes `metrics.csv` and `table.txt` into `dir`.
pub fn render_report(reports: &[MetricReport], dir: &Path) -> Result<()> {
    let table = render_table(reports)?;
    write(&dir.join("metrics.csv"), metrics_csv(reports))?;
    write(&dir.join("table.txt"), table)
}

pub fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::write(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::write(path, e))
}

pub fn feature_ablation_csv(rows: &[FeatureAblationRow]) -> String {
    let mut w = csv_writer();
    w.write_record(["removed_group", "metric", "value", "variant", "seed_set"]).expect("in-memory csv");
    for row in rows {
        let avg = row.report.average();
        let seeds = seed_set(&row.report.seeds);
        for (m, v) in Metric::REPORTED.iter().zip(avg.0) {
            w.write_record([row.removed.name(), &m.to_string(), &value_field(v), &row.report.variant, &seeds])
                .expect("in-memory csv");
        }
    }
    finish(w)
}

/// One line per removed group, averaged over sources, in the given order.
pub fn render_feature_ablation(rows: &[FeatureAblationRow]) -> String {
    let mut out = String::new();
    write!(out, "{:<16}", "removed group").unwrap();
    for m in Metric::REPORTED {
        write!(out, " {:>6}", m.to_string()).unwrap();
    }
    out.push('\n');
    for row in rows {
        write!(out, "{:<16}", row.removed.name()).unwrap();
        for v in row.report.average().0 {
            write!(out, " {:>6}", fmt_value(v)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn ablation_matrix_csv(m: &AblationMatrix) -> String {
    let mut w = csv_writer();
    let mut header = vec!["removed"];
    header.extend(SourceId::REAL.iter().map(|s| s.code()));
    w.write_record(&header).expect("in-memory csv");
    for (i, src) in SourceId::REAL.iter().enumerate() {
        let mut rec = vec![src.code().to_string()];
        rec.extend(m.cells[i].iter().map(|c| c.map_or_else(String::new, |x| format!("{x:?}"))));
        w.write_record(&rec).expect("in-memory csv");
    }
    finish(w)
}

fn shade(delta: f64) -> &'static str {
    let a = delta.abs();
    match (delta < 0.0, a) {
        (_, a) if a < 0.005 => "  ",
        (true, a) if a < 0.02 => " -",
        (true, _) => "--",
        (false, a) if a < 0.02 => " +",
        (false, _) => "++",
    }
}

/// Rows: removed source; columns: evaluated source; cells: MAP difference
/// against the full multi model with a shade marker.
pub fn render_ablation_heat(m: &AblationMatrix) -> String {
    let mut out = String::from("removed ");
    for s in SourceId::REAL {
        write!(out, " {:>8}", s.code()).unwrap();
    }
    out.push_str("      mean\n");
    for (i, src) in SourceId::REAL.iter().enumerate() {
        write!(out, "{:<8}", src.code()).unwrap();
        for c in m.cells[i] {
            let cell = c.map_or_else(|| "·".to_string(), |x| format!("{}{}", fmt_value(Some(x)), shade(x)));
            write!(out, " {cell:>8}").unwrap();
        }
        writeln!(out, " {:>9}", fmt_value(m.row_mean(*src))).unwrap();
    }
    out.push_str("\n- / --: MAP drops by under / at least .02; + / ++: rises\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn report(variant: &str, base: f64) -> MetricReport {
        MetricReport {
            variant: variant.into(),
            seeds: vec![42, 43, 44],
            rows: vec![
                (SourceId::Ct, MetricRow([Some(base), Some(0.2), Some(0.4), Some(0.3), Some(1.0 / 3.0), Some(0.1)])),
                (SourceId::Nyt, MetricRow([None, None, Some(0.0), Some(0.0), Some(0.05), Some(0.02)])),
            ],
        }
    }

    #[test]
    fn csv_round_trip() {
        let reps = vec![report("singleton", 0.127), report("multi", 0.136)];
        let text = metrics_csv(&reps);
        assert!(text.starts_with("source,metric,value,variant,seed_set\nCT,MAP,0.127,singleton,42+43+44\n"));
        assert_eq!(parse_metrics_csv(&text, Path::new("m.csv")).unwrap(), reps);
    }

    #[test]
    fn comparison_marks_improvements() {
        let t = render_table(&[report("singleton", 0.127), report("multi", 0.136)]).unwrap();
        assert!(t.contains("Source CT") && t.contains("Source NYT") && t.contains("Average over sources"));
        let multi_ct = t.lines().find(|l| l.trim_start().starts_with("multi")).unwrap();
        assert!(multi_ct.contains(".136*"), "{t}");
        assert!(!t.lines().find(|l| l.trim_start().starts_with("singleton")).unwrap().contains('*'));
    }

    #[test]
    fn empty_metric_set_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(render_report(&[], dir.path()).is_err());
        let empty = MetricReport { variant: "multi".into(), seeds: vec![1], rows: vec![] };
        assert!(render_report(&[empty], dir.path()).is_err());
        assert!(!dir.path().join("metrics.csv").exists());
    }

    #[test]
    fn values_print_like_tables() {
        assert_eq!(fmt_value(Some(0.1364)), ".136");
        assert_eq!(fmt_value(Some(1.0)), "1.000");
        assert_eq!(fmt_value(Some(-0.0123)), "-.012");
        assert_eq!(fmt_value(None), "-");
    }

    #[test]
    fn bad_csv_lines() {
        let p = Path::new("m.csv");
        assert!(parse_metrics_csv("a,b\n", p).is_err());
        let text = "source,metric,value,variant,seed_set\nXX,MAP,0.1,multi,1\n";
        assert!(matches!(parse_metrics_csv(text, p), Err(Error::Parse { line: 2, .. })));
    }

    proptest! {
        #[test]
        fn any_report_round_trips(values in prop::collection::vec(prop::option::of(0.0f64..=1.0), 54), seeds in prop::collection::vec(any::<u64>(), 1..4)) {
            let rows = SourceId::REAL.iter().zip(values.chunks(6)).map(|(s, c)| {
                let mut r = [None; 6];
                r.copy_from_slice(c);
                (*s, MetricRow(r))
            }).collect();
            let rep = MetricReport { variant: "multi+any".into(), seeds, rows };
            let back = parse_metrics_csv(&metrics_csv(std::slice::from_ref(&rep)), Path::new("m")).unwrap();
            prop_assert_eq!(back, vec![rep]);
        }
    }
}
