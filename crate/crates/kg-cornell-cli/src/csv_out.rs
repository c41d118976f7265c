//! Deterministic CSV emission: UTF-8, LF endings, one header row, numeric
//! fields at ten significant digits. Identical inputs produce byte-identical
//! files.

use std::io::Write;

/// Scientific-notation float with ten significant digits; `nan` for
/// unavailable cells.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.9e}")
    }
}

pub fn render(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len(), "row width must match schema");
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Write to `path`, or stdout when the path is `-`.
pub fn write_csv(path: &str, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let text = render(header, rows);
    if path == "-" {
        std::io::stdout().write_all(text.as_bytes())
    } else {
        std::fs::write(path, text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_for_empty_rows() {
        assert_eq!(render(&["a", "b"], &[]), "a,b\n");
    }

    #[test]
    fn ten_significant_digits() {
        assert_eq!(fmt_f64(5.67026266953498), "5.670262670e0");
        assert_eq!(fmt_f64(-0.002), "-2.000000000e-3");
        assert_eq!(fmt_f64(f64::NAN), "nan");
    }
}
