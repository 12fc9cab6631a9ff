//! Named high-precision constants and the `name=decimal` file format.

use std::collections::BTreeMap;

use crate::fixed::Turn;
use crate::Error;

/// Fractional parts, 50 digits.
pub const BUILTIN: &[(&str, &str)] = &[
    ("golden", "0.61803398874989484820458683436563811772030917980576"),
    ("sqrt2m1", "0.41421356237309504880168872420969807856967187537695"),
    ("inv_pi", "0.31830988618379067153776752674502872406891929148091"),
    ("inv_e", "0.36787944117144232159552377016146086744581113103177"),
    ("sqrt3m1", "0.73205080756887729352744634150587236694280525381038"),
];

#[derive(Clone, Debug)]
pub struct ConstantTable {
    entries: BTreeMap<String, String>,
}

impl Default for ConstantTable {
    fn default() -> Self {
        let entries = BUILTIN
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        ConstantTable { entries }
    }
}

impl ConstantTable {
    /// Built-ins overridden or extended by `text`. Blank lines and `#` comments are skipped.
    pub fn with_file(text: &str) -> Result<Self, Error> {
        let mut t = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("constants line {}: missing '='", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            Turn::from_decimal(v)
                .map_err(|e| Error::Parse(format!("constants line {}: {e}", i + 1)))?;
            t.entries.insert(k.to_string(), v.to_string());
        }
        Ok(t)
    }

    pub fn decimal(&self, name: &str) -> Option<&str> {
        self.entries.get(name).map(String::as_str)
    }

    pub fn turn(&self, name: &str) -> Option<Turn> {
        self.decimal(name).and_then(|d| Turn::from_decimal(d).ok())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

pub fn golden() -> Turn {
    ConstantTable::default().turn("golden").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_agree_with_f64() {
        let t = ConstantTable::default();
        let want = [
            ("golden", (5f64.sqrt() - 1.0) / 2.0),
            ("sqrt2m1", 2f64.sqrt() - 1.0),
            ("inv_pi", 1.0 / std::f64::consts::PI),
            ("inv_e", (-1f64).exp()),
            ("sqrt3m1", 3f64.sqrt() - 1.0),
        ];
        for (k, v) in want {
            assert!((t.turn(k).unwrap().to_f64() - v).abs() < 1e-15, "{k}");
        }
    }

    #[test]
    fn file_overrides_and_rejects_garbage() {
        let t = ConstantTable::with_file("# c\nhalf = 0.5\ngolden=0.25\n").unwrap();
        assert_eq!(t.turn("half").unwrap().to_f64(), 0.5);
        assert_eq!(t.turn("golden").unwrap().to_f64(), 0.25);
        assert!(ConstantTable::with_file("x 0.5").is_err());
        assert!(ConstantTable::with_file("x=2.5").is_err());
    }
}
