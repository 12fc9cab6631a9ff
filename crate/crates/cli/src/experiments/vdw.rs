use std::collections::BTreeMap;

use nildyn_core::exact::fmt_rat;
use nildyn_core::setalgebra::{longest_run, starters};
use nildyn_core::torus::interval_visits;
use nildyn_core::Error;
use serde_json::json;

use super::{Ctx, Experiment, Outcome};
use crate::config::{Field, Kind, Params};
use crate::output::{fmt_f64, Artifact, Table};

pub const EXPERIMENT: Experiment = Experiment {
    name: "vdw-starters",
    about: "N_{N,1}-starters of the Bohr set {n : {n alpha} in (lo, hi)}: b with b + (jN+1)m in A for j = 0..k and a common m <= mmax",
    fields: &[
        Field { name: "alpha", kind: Kind::Angle, default: Some("sqrt2m1"), help: "rotation angle" },
        Field { name: "window", kind: Kind::Interval, default: Some("0,0.1"), help: "open arc (lo, hi)" },
        Field { name: "horizon", kind: Kind::Int { min: 1, max: 100_000_000 }, default: Some("1000000"), help: "A on [1, horizon]" },
        Field { name: "N", kind: Kind::Int { min: 1, max: 1000 }, default: Some("5"), help: "congruence modulus" },
        Field { name: "k", kind: Kind::Int { min: 0, max: 64 }, default: Some("3"), help: "progression length minus one" },
        Field { name: "mmax", kind: Kind::Int { min: 1, max: 1_000_000 }, default: Some("1000"), help: "largest dilate" },
        Field { name: "run", kind: Kind::Int { min: 1, max: 1_000_000 }, default: Some("20"), help: "interval length for the thickness flag" },
    ],
    outputs: &[
        ("starters.rle", "window line 'lo hi' then one 'a..b' line per run of starters"),
        ("run-lengths.csv", "length,count; histogram of maximal starter runs"),
        ("vdw-starters.json", "counts, density, longest run, thickness flag"),
    ],
    run,
};

fn run(p: &Params, _ctx: &Ctx) -> Result<Outcome, Error> {
    let alpha = p.angle("alpha");
    let (lo, hi) = p.interval("window");
    let (horizon, n, k, m_max, want) = (p.uint("horizon"), p.uint("N"), p.uint("k"), p.uint("mmax"), p.uint("run"));
    let a = interval_visits(&alpha.point, lo, hi, horizon)?;
    let s = starters(&a, n, k, m_max)?;
    let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
    for (x, y) in s.runs() {
        *hist.entry(y - x + 1).or_default() += 1;
    }
    let mut table = Table::new(&["length", "count"]);
    for (len, c) in &hist {
        table.row([len.to_string(), c.to_string()]);
    }
    let longest = longest_run(&s);
    let thick = longest >= want;
    let report = json!({
        "experiment": "vdw-starters",
        "params": {
            "alpha": alpha.text, "window": [fmt_rat(lo), fmt_rat(hi)], "horizon": horizon,
            "N": n, "k": k, "m_max": m_max, "run": want,
        },
        "set_count": a.count(),
        "starter_window": [s.lo(), s.hi()],
        "starter_count": s.count(),
        "starter_density": fmt_f64(s.count() as f64 / s.window_len() as f64),
        "longest_run": longest,
        "thick_to_run": thick,
        "pass": true,
    });
    Ok(Outcome {
        passed: true,
        summary: format!("{} starters, longest run {longest}, thick to length {want}: {thick}", s.count()),
        artifacts: vec![
            Artifact::text("starters.rle", s.to_rle()),
            table.finish("run-lengths.csv"),
            Artifact::json("vdw-starters.json", &report),
        ],
    })
}
