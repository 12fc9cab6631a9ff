use nildyn_core::counterexample::{carveout_count, thickness_refutation_in, verify_cover, window};
use nildyn_core::Error;
use rayon::prelude::*;
use serde_json::json;

use super::{join, Ctx, Experiment, Outcome};
use crate::config::{Field, Kind, Params};
use crate::output::{opt, Artifact, Table};

pub const EXPERIMENT: Experiment = Experiment {
    name: "counterexample-verify",
    about: "The dyadic-parity set A: checks A ∪ (A-1) covers [1, horizon] and, for every coset I·N_{N,1} with I, N <= grid, refutes thickness of F = {1, N+1, ...} and builds a B'-syndeticity certificate",
    fields: &[
        Field { name: "horizon", kind: Kind::Int { min: 16, max: 1 << 30 }, default: Some("16777216"), help: "window [1, horizon]" },
        Field { name: "grid", kind: Kind::Int { min: 1, max: 32 }, default: Some("8"), help: "largest I and N" },
        Field { name: "flen", kind: Kind::Int { min: 1, max: 16 }, default: Some("4"), help: "size of F" },
    ],
    outputs: &[
        (
            "refutations.csv",
            "I,N,F,m_max,witness_m,refuted,certificate,universe_max_m,universe_size,uncovered,complete,duality_consistent,carveouts",
        ),
        ("counterexample-verify.json", "cover report, failing cosets, pass flag"),
    ],
    run,
};

fn run(p: &Params, _ctx: &Ctx) -> Result<Outcome, Error> {
    let (horizon, grid, flen) = (p.uint("horizon"), p.uint("grid"), p.uint("flen"));
    let cover = verify_cover(horizon);
    let a = window(horizon)?;
    let pairs: Vec<(u64, u64)> = (1..=grid).flat_map(|i| (1..=grid).map(move |n| (i, n))).collect();
    let refs = pairs
        .par_iter()
        .map(|&(i, n)| thickness_refutation_in(&a, i, n, flen))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(&[
        "I",
        "N",
        "F",
        "m_max",
        "witness_m",
        "refuted",
        "certificate",
        "universe_max_m",
        "universe_size",
        "uncovered",
        "complete",
        "duality_consistent",
        "carveouts",
    ]);
    let mut thick = Vec::new();
    let mut incomplete = Vec::new();
    let mut inconsistent = Vec::new();
    for r in &refs {
        let c = &r.certificate;
        if !r.refuted {
            thick.push(json!({ "I": r.i, "N": r.n, "witness_m": r.witness }));
        }
        if !c.complete {
            incomplete.push(json!([r.i, r.n]));
        }
        if !r.duality_consistent {
            inconsistent.push(json!([r.i, r.n]));
        }
        table.row([
            r.i.to_string(),
            r.n.to_string(),
            join(&r.f, " "),
            r.m_max.to_string(),
            opt(r.witness),
            r.refuted.to_string(),
            join(&c.dilates, " "),
            c.universe_max_m.to_string(),
            c.universe_size.to_string(),
            c.uncovered.to_string(),
            c.complete.to_string(),
            r.duality_consistent.to_string(),
            carveout_count(r.i, r.n, horizon).to_string(),
        ]);
    }
    let passed = cover.holds && thick.is_empty() && incomplete.is_empty() && inconsistent.is_empty();
    let summary = format!(
        "cover {}; {} of {} cosets refuted; {} certificates complete",
        if cover.holds { "holds" } else { "FAILS" },
        refs.iter().filter(|r| r.refuted).count(),
        refs.len(),
        refs.iter().filter(|r| r.certificate.complete).count(),
    );
    let report = json!({
        "experiment": "counterexample-verify",
        "params": { "horizon": horizon, "grid": grid, "flen": flen },
        "cover": { "holds": cover.holds, "first_failure": cover.first_failure },
        "cosets": refs.len(),
        "thick_dilates_found": thick,
        "incomplete_certificates": incomplete,
        "duality_inconsistent": inconsistent,
        "pass": passed,
    });
    Ok(Outcome {
        passed,
        summary,
        artifacts: vec![table.finish("refutations.csv"), Artifact::json("counterexample-verify.json", &report)],
    })
}
