//! Experiment configuration: `key=value` files, `--key value` flags and typed
//! schema validation.

use std::collections::BTreeMap;
use std::path::PathBuf;

use nildyn_core::constants::ConstantTable;
use nildyn_core::exact::{self, Rat};
use nildyn_core::{TorusPoint, Turn};

use crate::CliError;

/// Keys handled by the runner rather than by an experiment.
pub const RESERVED: &[&str] = &["experiment", "out", "workers", "timing", "constants"];

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    Int { min: i64, max: i64 },
    IntList { min: i64, max: i64, max_len: usize },
    /// Positive decimal.
    Positive,
    /// A point of R/Z: `p/q` or an integer is exact, a decimal or a constant name is fixed point.
    Angle,
    /// `lo,hi` with 0 <= lo < hi <= 1, both exact.
    Interval,
    /// Three comma-separated angles.
    Triple,
}

impl Kind {
    pub fn describe(&self) -> String {
        match self {
            Kind::Int { min, max } => format!("integer in [{min}, {max}]"),
            Kind::IntList { min, max, max_len } => {
                format!("comma list of up to {max_len} integers in [{min}, {max}]")
            }
            Kind::Positive => "positive decimal".into(),
            Kind::Angle => "angle: p/q, decimal or constant name".into(),
            Kind::Interval => "lo,hi with 0 <= lo < hi <= 1".into(),
            Kind::Triple => "three comma-separated angles".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Field {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

#[derive(Clone, Debug)]
pub struct Angle {
    pub point: TorusPoint,
    pub text: String,
}

#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    IntList(Vec<i64>),
    Float(f64),
    Angle(Angle),
    Interval(Rat, Rat),
    Triple([Angle; 3]),
}

/// Validated parameters of one experiment.
#[derive(Clone, Debug, Default)]
pub struct Params {
    values: BTreeMap<&'static str, Value>,
}

impl Params {
    fn get(&self, name: &str) -> &Value {
        self.values.get(name).unwrap_or_else(|| panic!("parameter {name} not in schema"))
    }

    pub fn int(&self, name: &str) -> i64 {
        match self.get(name) {
            Value::Int(v) => *v,
            v => panic!("{name} is {v:?}"),
        }
    }

    pub fn uint(&self, name: &str) -> u64 {
        self.int(name) as u64
    }

    pub fn ints(&self, name: &str) -> &[i64] {
        match self.get(name) {
            Value::IntList(v) => v,
            v => panic!("{name} is {v:?}"),
        }
    }

    pub fn float(&self, name: &str) -> f64 {
        match self.get(name) {
            Value::Float(v) => *v,
            v => panic!("{name} is {v:?}"),
        }
    }

    pub fn angle(&self, name: &str) -> &Angle {
        match self.get(name) {
            Value::Angle(v) => v,
            v => panic!("{name} is {v:?}"),
        }
    }

    pub fn interval(&self, name: &str) -> (&Rat, &Rat) {
        match self.get(name) {
            Value::Interval(lo, hi) => (lo, hi),
            v => panic!("{name} is {v:?}"),
        }
    }

    pub fn triple(&self, name: &str) -> &[Angle; 3] {
        match self.get(name) {
            Value::Triple(v) => v,
            v => panic!("{name} is {v:?}"),
        }
    }
}

/// Raw configuration before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub params: BTreeMap<String, String>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub timing: bool,
    pub constants: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        ExperimentConfig { experiment: experiment.to_string(), ..Default::default() }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |m: String| CliError::Config(format!("{key}: {m}"));
        match key {
            "experiment" => {
                if !self.experiment.is_empty() && self.experiment != value {
                    return Err(bad(format!(
                        "config names '{value}' but '{}' was requested",
                        self.experiment
                    )));
                }
                self.experiment = value.to_string();
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "constants" => self.constants = Some(PathBuf::from(value)),
            "workers" => {
                let w: usize = value.parse().map_err(|_| bad(format!("expected a count, got '{value}'")))?;
                if w == 0 {
                    return Err(bad("must be at least 1".into()));
                }
                self.workers = Some(w);
            }
            "timing" => {
                self.timing = match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => return Err(bad(format!("expected true or false, got '{value}'"))),
                }
            }
            _ => {
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    /// Merges a `key=value` file; blank lines and `#` comments are skipped.
    pub fn merge_file(&mut self, text: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", i + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// `--key value`, `--key=value` and the bare `--timing` flag.
    pub fn merge_flags(&mut self, args: &[String]) -> Result<(), CliError> {
        let mut i = 0;
        let mut flags = Vec::new();
        while i < args.len() {
            let arg = &args[i];
            let key = arg
                .strip_prefix("--")
                .filter(|k| !k.is_empty())
                .ok_or_else(|| CliError::Usage(format!("unexpected argument '{arg}'")))?;
            if let Some((k, v)) = key.split_once('=') {
                flags.push((k.to_string(), v.to_string()));
                i += 1;
            } else if key == "timing" {
                flags.push((key.to_string(), "true".to_string()));
                i += 1;
            } else {
                let v = args
                    .get(i + 1)
                    .ok_or_else(|| CliError::Usage(format!("--{key} needs a value")))?;
                flags.push((key.to_string(), v.clone()));
                i += 2;
            }
        }
        // A config file named on the command line is applied first so flags override it.
        if let Some((_, path)) = flags.iter().find(|(k, _)| k == "config") {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("config: cannot read {path}: {e}")))?;
            self.merge_file(&text)?;
        }
        for (k, v) in flags.iter().filter(|(k, _)| k != "config") {
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Key=value text that reproduces this configuration (runner keys excluded).
    pub fn to_text(&self) -> String {
        let mut s = format!("experiment={}\n", self.experiment);
        for (k, v) in &self.params {
            s.push_str(&format!("{k}={v}\n"));
        }
        s
    }

    pub fn constant_table(&self) -> Result<ConstantTable, CliError> {
        match &self.constants {
            None => Ok(ConstantTable::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("constants: cannot read {}: {e}", p.display())))?;
                ConstantTable::with_file(&text).map_err(|e| CliError::Config(format!("constants: {e}")))
            }
        }
    }
}

fn parse_angle(s: &str, consts: &ConstantTable) -> Result<Angle, String> {
    let s = s.trim();
    let point = if s.contains('/') || s.parse::<i64>().is_ok() {
        TorusPoint::exact(exact::parse_rat(s).map_err(|e| e.to_string())?)
    } else if s.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-') {
        let r = exact::parse_rat(s).map_err(|e| e.to_string())?;
        TorusPoint::Approx(Turn::from_rat(&exact::frac(&r)))
    } else {
        TorusPoint::Approx(consts.turn(s).ok_or_else(|| format!("unknown constant '{s}'"))?)
    };
    Ok(Angle { point, text: s.to_string() })
}

fn parse_value(kind: Kind, s: &str, consts: &ConstantTable) -> Result<Value, String> {
    let int = |t: &str, min: i64, max: i64| -> Result<i64, String> {
        let v: i64 = t.trim().parse().map_err(|_| format!("expected an integer, got '{}'", t.trim()))?;
        if v < min || v > max {
            return Err(format!("{v} is outside [{min}, {max}]"));
        }
        Ok(v)
    };
    Ok(match kind {
        Kind::Int { min, max } => Value::Int(int(s, min, max)?),
        Kind::IntList { min, max, max_len } => {
            let v = s.split(',').map(|t| int(t, min, max)).collect::<Result<Vec<_>, _>>()?;
            if v.len() > max_len {
                return Err(format!("at most {max_len} entries, got {}", v.len()));
            }
            let mut sorted = v.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != v.len() {
                return Err("entries must be distinct".into());
            }
            Value::IntList(v)
        }
        Kind::Positive => {
            let v: f64 = s.trim().parse().map_err(|_| format!("expected a decimal, got '{s}'"))?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("must be positive, got {s}"));
            }
            Value::Float(v)
        }
        Kind::Angle => Value::Angle(parse_angle(s, consts)?),
        Kind::Interval => {
            let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got '{s}'"))?;
            let p = |t: &str| exact::parse_rat(t.trim()).map_err(|e| e.to_string());
            let (lo, hi) = (p(lo)?, p(hi)?);
            let zero = Rat::from_integer(0.into());
            let one = Rat::from_integer(1.into());
            if lo < zero || hi > one || lo >= hi {
                return Err(format!("need 0 <= lo < hi <= 1, got '{s}'"));
            }
            Value::Interval(lo, hi)
        }
        Kind::Triple => {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("expected three comma-separated angles, got '{s}'"));
            }
            let a = parts.iter().map(|t| parse_angle(t, consts)).collect::<Result<Vec<_>, _>>()?;
            Value::Triple(a.try_into().expect("three entries"))
        }
    })
}

/// Checks `cfg` against `schema`; errors name the offending field path.
pub fn validate(cfg: &ExperimentConfig, schema: &[Field], consts: &ConstantTable) -> Result<Params, CliError> {
    if let Some(k) = cfg.params.keys().find(|k| !schema.iter().any(|f| f.name == k.as_str())) {
        let known: Vec<&str> = schema.iter().map(|f| f.name).collect();
        return Err(CliError::Config(format!(
            "params.{k}: unknown field for {} (expected one of: {})",
            cfg.experiment,
            known.join(", ")
        )));
    }
    let mut values = BTreeMap::new();
    for f in schema {
        let raw = match (cfg.params.get(f.name), f.default) {
            (Some(v), _) => v.as_str(),
            (None, Some(d)) => d,
            (None, None) => return Err(CliError::Config(format!("params.{}: required ({})", f.name, f.kind.describe()))),
        };
        let v = parse_value(f.kind, raw, consts).map_err(|m| CliError::Config(format!("params.{}: {m}", f.name)))?;
        values.insert(f.name, v);
    }
    Ok(Params { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: &[Field] = &[
        Field { name: "n", kind: Kind::Int { min: 1, max: 9 }, default: Some("3"), help: "" },
        Field { name: "set", kind: Kind::IntList { min: -5, max: 5, max_len: 3 }, default: None, help: "" },
        Field { name: "alpha", kind: Kind::Angle, default: Some("golden"), help: "" },
    ];

    fn cfg(flags: &[&str]) -> Result<ExperimentConfig, CliError> {
        let mut c = ExperimentConfig::new("demo");
        c.merge_flags(&flags.iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
        Ok(c)
    }

    #[test]
    fn flags_parse_and_validate() {
        let c = cfg(&["--set", "1,-2", "--n=4", "--timing", "--workers", "3"]).unwrap();
        assert!(c.timing);
        assert_eq!(c.workers, Some(3));
        let p = validate(&c, SCHEMA, &ConstantTable::default()).unwrap();
        assert_eq!(p.int("n"), 4);
        assert_eq!(p.ints("set"), &[1, -2]);
        assert_eq!(p.angle("alpha").text, "golden");
        assert!(!p.angle("alpha").point.is_exact());
    }

    #[test]
    fn errors_name_the_field() {
        let consts = ConstantTable::default();
        let msg = |c: ExperimentConfig| validate(&c, SCHEMA, &consts).unwrap_err().to_string();
        assert!(msg(cfg(&[]).unwrap()).contains("params.set: required"));
        assert!(msg(cfg(&["--set", "1", "--n", "12"]).unwrap()).contains("params.n: 12 is outside"));
        assert!(msg(cfg(&["--set", "1,1"]).unwrap()).contains("params.set: entries must be distinct"));
        assert!(msg(cfg(&["--set", "1", "--bogus", "2"]).unwrap()).contains("params.bogus: unknown field"));
        assert!(msg(cfg(&["--set", "1", "--alpha", "nope"]).unwrap()).contains("params.alpha: unknown constant"));
        assert!(matches!(cfg(&["--workers", "0"]), Err(CliError::Config(_))));
        assert!(matches!(cfg(&["stray"]), Err(CliError::Usage(_))));
    }

    #[test]
    fn angles_keep_exactness() {
        let consts = ConstantTable::default();
        assert_eq!(parse_angle("5/4", &consts).unwrap().point, TorusPoint::exact(exact::rat(1, 4)));
        assert!(!parse_angle("0.25", &consts).unwrap().point.is_exact());
        assert_eq!(parse_angle("0.25", &consts).unwrap().point.to_f64(), 0.25);
    }

    #[test]
    fn file_then_flags() {
        let mut c = ExperimentConfig::new("demo");
        c.merge_file("# comment\nexperiment=demo\nn=2\nset=1,2\n").unwrap();
        c.merge_flags(&["--n".to_string(), "5".to_string()]).unwrap();
        assert_eq!(c.params["n"], "5");
        assert_eq!(c.to_text(), "experiment=demo\nn=5\nset=1,2\n");
        assert!(ExperimentConfig::new("other").merge_file("experiment=demo\n").is_err());
    }
}
