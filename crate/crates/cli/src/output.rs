use std::fs;
use std::path::Path;

use qgraph::report::fmt12;

use crate::{Failure, Format, RunConfig};

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            if i + 1 < cells.len() {
                s.extend(std::iter::repeat(' ').take(width[i] - c.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// `label  value` lines.
pub fn key_values(rows: &[(&str, String)]) -> String {
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_else(|| "-".into())
}

pub fn csv_row(cells: &[String]) -> String {
    let mut s = cells.iter().map(|c| qgraph::report::csv_field(c)).collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

/// The three renderings of a report.
pub struct Rendered {
    pub json: String,
    pub csv: String,
    pub table: String,
}

/// Prints the report in the configured format and writes `files` under `--out`.
pub fn emit(cfg: &RunConfig, report: Rendered, files: Vec<(String, String)>) -> Result<(), Failure> {
    if let Some(dir) = &cfg.out {
        write_files(dir, &files)?;
    }
    let text = match cfg.format {
        Format::Json => report.json,
        Format::Csv => report.csv,
        Format::Table => report.table,
    };
    print!("{text}");
    Ok(())
}

fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::input(format!("cannot create {}: {e}", dir.display())))?;
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
