//! Number formatting and file emission shared by the library and the CLI.

use std::fmt::Write as _;

/// Formats with 12 significant digits, `%g` style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Renders a CSV table with a header row; numeric cells use [`fmt_num`].
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(|c| c.render()).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Num(x) => fmt_num(x),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s
                }
            }
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
