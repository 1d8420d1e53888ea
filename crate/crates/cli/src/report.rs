//! Report serialization: JSON, CSV and an aligned text table.

use std::io::Write;

use gevrey_core::identities::ReportRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn render(records: &[ReportRecord], format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(records).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(ReportRecord::COLUMNS).map_err(|e| e.to_string())?;
            for r in records {
                let params = r.params_string();
                let status = r.status.to_string();
                w.write_record([
                    r.id.as_str(),
                    params.as_str(),
                    &r.lhs_mid,
                    &r.lhs_rad,
                    &r.rhs_mid,
                    &r.rhs_rad,
                    &r.gap,
                    &status,
                    &r.bits,
                    &r.seconds,
                ])
                .map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
        Format::Text => Ok(text_table(records)),
    }
}

fn shorten(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        let mut t: String = s.chars().take(n - 1).collect();
        t.push('~');
        t
    }
}

fn text_table(records: &[ReportRecord]) -> String {
    let header = ["id", "params", "status", "value", "gap", "radius", "bits", "seconds"];
    let rows: Vec<[String; 8]> = records
        .iter()
        .map(|r| {
            let radius = if r.lhs_rad.is_empty() { String::new() } else { format!("{} / {}", r.lhs_rad, r.rhs_rad) };
            [
                r.id.clone(),
                r.params_string(),
                r.status.to_string(),
                shorten(&r.lhs_mid, 24),
                r.gap.clone(),
                radius,
                r.bits.clone(),
                r.seconds.clone(),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String]| {
        cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string() + "\n"
    };
    out += &line(&header.map(String::from));
    for (row, r) in rows.iter().zip(records) {
        out += &line(row);
        if let Some(c) = &r.cause {
            out += &format!("    {c}\n");
        }
    }
    out
}

/// Write to `path`, or stdout when absent.
pub fn emit(text: &str, path: Option<&std::path::Path>) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| e.to_string())
        }
    }
}
