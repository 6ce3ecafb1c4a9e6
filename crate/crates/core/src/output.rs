//! CSV and JSON writers with a fixed float format (17 significant digits).

use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// Formats a float with 17 significant digits in scientific notation; the
/// text parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a header row and data rows as comma-separated values.
pub fn write_csv<W: Write>(mut w: W, header: &[String], rows: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| crate::error::HyperError::Parse(e.to_string()))?;
    writeln!(w, "{text}")?;
    Ok(())
}
