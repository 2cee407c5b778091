//! Comma-separated output: header row, 17 significant digits, LF endings.

use std::fmt::Write;

/// Formats a float with 17 significant digits; `-0` prints as `0`.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

#[derive(Default)]
pub struct Table {
    buf: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Self::default();
        t.buf.push_str(&header.join(","));
        t.buf.push('\n');
        t
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&x| num(x)).collect();
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    /// Row with a leading text label.
    pub fn labeled_row(&mut self, label: &str, values: &[f64]) {
        self.buf.push_str(label);
        for &x in values {
            let _ = write!(self.buf, ",{}", num(x));
        }
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-11, 1e300, std::f64::consts::PI] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(num(-0.0), num(0.0));
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.row(&[1.0, 2.0]);
        t.labeled_row("x", &[3.0]);
        let s = String::from_utf8(t.into_bytes()).unwrap();
        assert_eq!(s, "a,b\n1.0000000000000000e0,2.0000000000000000e0\nx,3.0000000000000000e0\n");
    }
}
