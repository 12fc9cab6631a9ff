//! Byte-stable artifact emission.

use serde_json::Value;

/// 12 significant digits in scientific form.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn text(name: &str, text: String) -> Self {
        Artifact { name: name.to_string(), bytes: text.into_bytes() }
    }

    pub fn json(name: &str, v: &Value) -> Self {
        let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
        s.push('\n');
        Self::text(name, s)
    }
}

/// A CSV table with a fixed header.
pub struct Table {
    w: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(header).expect("in-memory write");
        Table { w }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.w.write_record(fields).expect("in-memory write");
    }

    pub fn finish(self, name: &str) -> Artifact {
        Artifact { name: name.to_string(), bytes: self.w.into_inner().expect("in-memory flush") }
    }
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_twelve_significant_digits() {
        assert_eq!(fmt_f64(1e-3), "1.00000000000e-3");
        assert_eq!(fmt_f64(0.618033988749895), "6.18033988750e-1");
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        let mut t = Table::new(&["a", "b"]);
        t.row(["1", "x,y"]);
        assert_eq!(String::from_utf8(t.finish("t.csv").bytes).unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
