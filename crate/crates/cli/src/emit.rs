//! Deterministic CSV and JSON emission.
//!
//! Reals are rendered with 17 significant digits so rows round-trip exactly;
//! CSV fields follow RFC 4180 quoting; JSON objects keep a fixed key order.
//! Output bytes depend only on the data, never on worker scheduling.

use entshare::explore::{BoundaryPoint, OptimumReport, ScanRow, ScanSpec};
use entshare::reproduce::GoldenEntry;
use entshare::verify::FamilyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("invalid format '{s}' (csv | json)")),
        }
    }
}

/// 17 significant digits, locale-independent.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn fmt_opt_bool(v: Option<bool>) -> String {
    v.map(|b| b.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => fmt_f64(v),
        None => "null".to_string(),
    }
}

fn json_opt_bool(v: Option<bool>) -> String {
    match v {
        Some(b) => b.to_string(),
        None => "null".to_string(),
    }
}

const SCAN_VALUE_COLUMNS: [&str; 15] = [
    "I1",
    "I2",
    "S1",
    "S2",
    "C1",
    "C2",
    "minI",
    "minS",
    "minC",
    "dvI",
    "dvS",
    "dvC",
    "ppt_min_eig",
    "purity",
    "status",
];

pub fn scan_csv(spec: &ScanSpec, rows: &[ScanRow]) -> String {
    let mut out = String::new();
    let mut header: Vec<String> = spec.axes.iter().map(|a| a.param.to_string()).collect();
    header.extend(SCAN_VALUE_COLUMNS.iter().map(|s| s.to_string()));
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let mut fields: Vec<String> = row.axis_values.iter().map(|v| fmt_f64(*v)).collect();
        fields.extend([
            fmt_opt(row.i1),
            fmt_opt(row.i2),
            fmt_opt(row.s1),
            fmt_opt(row.s2),
            fmt_opt(row.c1),
            fmt_opt(row.c2),
            fmt_opt(row.min_i),
            fmt_opt(row.min_s),
            fmt_opt(row.min_c),
            fmt_opt_bool(row.dv_i),
            fmt_opt_bool(row.dv_s),
            fmt_opt_bool(row.dv_c),
            fmt_opt(row.ppt_min_eig),
            fmt_opt(row.purity),
            csv_field(&row.status),
        ]);
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn scan_json(spec: &ScanSpec, rows: &[ScanRow]) -> String {
    let mut out = String::from("[\n");
    for (i, row) in rows.iter().enumerate() {
        let mut pairs: Vec<String> = spec
            .axes
            .iter()
            .zip(&row.axis_values)
            .map(|(a, v)| format!("{}: {}", json_string(&a.param.to_string()), fmt_f64(*v)))
            .collect();
        for (name, value) in [
            ("I1", json_opt(row.i1)),
            ("I2", json_opt(row.i2)),
            ("S1", json_opt(row.s1)),
            ("S2", json_opt(row.s2)),
            ("C1", json_opt(row.c1)),
            ("C2", json_opt(row.c2)),
            ("minI", json_opt(row.min_i)),
            ("minS", json_opt(row.min_s)),
            ("minC", json_opt(row.min_c)),
            ("dvI", json_opt_bool(row.dv_i)),
            ("dvS", json_opt_bool(row.dv_s)),
            ("dvC", json_opt_bool(row.dv_c)),
            ("ppt_min_eig", json_opt(row.ppt_min_eig)),
            ("purity", json_opt(row.purity)),
            ("status", json_string(&row.status)),
        ] {
            pairs.push(format!("{}: {}", json_string(name), value));
        }
        out.push_str("  {");
        out.push_str(&pairs.join(", "));
        out.push('}');
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

pub fn optimum_csv(report: &OptimumReport) -> String {
    let mut out = String::from("name,value\n");
    out.push_str(&format!("value,{}\n", fmt_f64(report.value)));
    for (p, v) in &report.argmax {
        out.push_str(&format!("{p},{}\n", fmt_f64(*v)));
    }
    out.push_str(&format!("evaluations,{}\n", report.evaluations));
    out.push_str(&format!("converged,{}\n", report.converged));
    out
}

pub fn optimum_json(report: &OptimumReport) -> String {
    let argmax: Vec<String> = report
        .argmax
        .iter()
        .map(|(p, v)| format!("{}: {}", json_string(&p.to_string()), fmt_f64(*v)))
        .collect();
    format!(
        "{{\"value\": {}, \"argmax\": {{{}}}, \"evaluations\": {}, \"converged\": {}}}\n",
        fmt_f64(report.value),
        argmax.join(", "),
        report.evaluations,
        report.converged
    )
}

pub fn boundary_csv(sweep_name: &str, solve_name: &str, points: &[BoundaryPoint]) -> String {
    let mut out = format!("{sweep_name},{solve_name}\n");
    for p in points {
        out.push_str(&format!("{},{}\n", fmt_f64(p.sweep), fmt_opt(p.root)));
    }
    out
}

pub fn boundary_json(sweep_name: &str, solve_name: &str, points: &[BoundaryPoint]) -> String {
    let mut out = String::from("[\n");
    for (i, p) in points.iter().enumerate() {
        out.push_str(&format!(
            "  {{{}: {}, {}: {}}}",
            json_string(sweep_name),
            fmt_f64(p.sweep),
            json_string(solve_name),
            json_opt(p.root)
        ));
        if i + 1 < points.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

pub fn verify_table(reports: &[FamilyReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<36} {:>8} {:>14} {:>10}  {}\n",
        "family", "samples", "max_deviation", "tolerance", "status"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<36} {:>8} {:>14.3e} {:>10.1e}  {}\n",
            r.name, r.samples, r.max_deviation, r.tolerance, r.status
        ));
    }
    out
}

pub fn golden_csv(entries: &[GoldenEntry]) -> String {
    let mut out = String::from("name,computed,expected,tolerance,deviation,status\n");
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            csv_field(e.name),
            fmt_f64(e.computed),
            fmt_f64(e.expected),
            fmt_f64(e.tolerance),
            fmt_f64(e.deviation()),
            if e.passed() { "PASS" } else { "FAIL" }
        ));
    }
    out
}

pub fn golden_json(entries: &[GoldenEntry]) -> String {
    let mut out = String::from("[\n");
    for (i, e) in entries.iter().enumerate() {
        out.push_str(&format!(
            "  {{\"name\": {}, \"computed\": {}, \"expected\": {}, \"tolerance\": {}, \"deviation\": {}, \"status\": {}}}",
            json_string(e.name),
            fmt_f64(e.computed),
            fmt_f64(e.expected),
            fmt_f64(e.tolerance),
            fmt_f64(e.deviation()),
            json_string(if e.passed() { "PASS" } else { "FAIL" })
        ));
        if i + 1 < entries.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]\n");
    out
}

pub fn golden_text(entries: &[GoldenEntry]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<36} {:>22} {:>16} {:>9} {:>12}  {}\n",
        "name", "computed", "expected", "tol", "deviation", "status"
    ));
    for e in entries {
        out.push_str(&format!(
            "{:<36} {:>22.15} {:>16.9} {:>9.1e} {:>12.3e}  {}\n",
            e.name,
            e.computed,
            e.expected,
            e.tolerance,
            e.deviation(),
            if e.passed() { "PASS" } else { "FAIL" }
        ));
    }
    out
}
