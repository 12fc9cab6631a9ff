//! Golden-output directories: one subdirectory per case holding `config.txt`
//! and the expected artifacts, compared byte for byte.

use std::fs;
use std::io::Write;
use std::path::Path;

use similar::TextDiff;

use crate::config::ExperimentConfig;
use crate::{execute, CliError};

pub const CONFIG_FILE: &str = "config.txt";

/// Unified diff of expected against actual, labelled with `name`.
pub fn unified_diff(name: &str, expected: &[u8], actual: &[u8]) -> String {
    let (e, a) = (String::from_utf8_lossy(expected), String::from_utf8_lossy(actual));
    TextDiff::from_lines(e.as_ref(), a.as_ref())
        .unified_diff()
        .context_radius(2)
        .header(&format!("golden/{name}"), &format!("actual/{name}"))
        .to_string()
}

/// Checks (or with `bless`, rewrites) every case under `dir`. Returns whether all matched.
pub fn check_goldens(dir: &Path, bless: bool, log: &mut dyn Write) -> Result<bool, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Config(format!("goldens directory {} does not exist", dir.display())));
    }
    let mut cases: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    cases.sort();
    if cases.is_empty() {
        writeln!(log, "FAIL {}: no golden cases", dir.display())?;
        return Ok(false);
    }
    let mut all_ok = true;
    for case in cases {
        let label = case.file_name().unwrap_or_default().to_string_lossy().to_string();
        let cfg_path = case.join(CONFIG_FILE);
        let Ok(text) = fs::read_to_string(&cfg_path) else {
            writeln!(log, "FAIL {label}: missing artifact {CONFIG_FILE}")?;
            all_ok = false;
            continue;
        };
        let mut cfg = ExperimentConfig::default();
        cfg.merge_file(&text)?;
        let outcome = execute(&cfg)?;
        let mut failures = Vec::new();
        for art in &outcome.artifacts {
            let path = case.join(&art.name);
            if bless {
                fs::write(&path, &art.bytes)?;
                continue;
            }
            match fs::read(&path) {
                Err(_) => failures.push(format!("missing artifact {}", art.name)),
                Ok(expected) if expected != art.bytes => {
                    failures.push(format!("{} differs\n{}", art.name, unified_diff(&art.name, &expected, &art.bytes)))
                }
                Ok(_) => {}
            }
        }
        let mut stale: Vec<String> = fs::read_dir(&case)?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().to_string())
            .filter(|n| n != CONFIG_FILE && !outcome.artifacts.iter().any(|a| &a.name == n))
            .collect();
        stale.sort();
        for n in stale {
            failures.push(format!("golden {n} is not produced by the experiment"));
        }
        if failures.is_empty() {
            writeln!(log, "{} {label}", if bless { "BLESSED" } else { "PASS" })?;
        } else {
            all_ok = false;
            writeln!(log, "FAIL {label}")?;
            for f in failures {
                writeln!(log, "  {f}")?;
            }
        }
    }
    Ok(all_ok)
}
