use nildyn_core::torus::sa_rotation_grid;
use nildyn_core::{Error, RotationSystem, SaSet};
use serde_json::json;

use super::{elapsed, join, Ctx, Experiment, Outcome, SA_COLUMNS};
use crate::config::{Field, Kind, Params};
use crate::output::{fmt_f64, opt, Artifact, Table};

pub const EXPERIMENT: Experiment = Experiment {
    name: "sa-rotation",
    about: "Simultaneous approximation along A for a circle rotation: witness search on the grid x + j/(2N) against the closed form x + (1/N)Z",
    fields: &[
        Field { name: "alpha", kind: Kind::Angle, default: Some("golden"), help: "rotation angle" },
        Field { name: "x", kind: Kind::Angle, default: Some("0"), help: "base point" },
        Field {
            name: "set",
            kind: Kind::IntList { min: -1_000_000, max: 1_000_000, max_len: 16 },
            default: None,
            help: "finite set A",
        },
        Field { name: "eps", kind: Kind::Positive, default: Some("1e-3"), help: "approximation radius" },
        Field { name: "mmax", kind: Kind::Int { min: 1, max: 1_000_000_000 }, default: Some("1000000"), help: "largest dilate searched" },
    ],
    outputs: &[
        ("sa-rotation.csv", "system,x,y,F,eps,m_max,witness_m,elapsed_ns; one row per grid point"),
        ("sa-rotation.json", "closed-form set, per-point verdicts, pass flags"),
    ],
    run,
};

fn run(p: &Params, ctx: &Ctx) -> Result<Outcome, Error> {
    let alpha = p.angle("alpha");
    let x = p.angle("x");
    let set = p.ints("set");
    let (eps, m_max) = (p.float("eps"), p.uint("mmax"));
    let rot = RotationSystem { alpha: alpha.point.clone() };
    let (formula, rows) = sa_rotation_grid(&rot, &x.point, set, eps, m_max)?;

    let system = format!("rotation({})", alpha.text);
    let f_text = join(set, " ");
    let mut table = Table::new(SA_COLUMNS);
    for r in &rows {
        table.row([
            system.clone(),
            x.point.to_string(),
            r.y.to_string(),
            f_text.clone(),
            fmt_f64(eps),
            m_max.to_string(),
            opt(r.witness),
            elapsed(ctx, r.elapsed_ns),
        ]);
    }
    let formula_witnessed = rows.iter().filter(|r| r.on_formula).all(|r| r.witness.is_some());
    let off_formula_clean = rows.iter().filter(|r| !r.on_formula).all(|r| r.witness.is_none());
    let passed = formula_witnessed && off_formula_clean;
    let formula_json = match &formula {
        SaSet::FullTorus => json!({ "kind": "full_torus" }),
        SaSet::Finite(pts) => json!({
            "kind": "finite",
            "modulus": pts.len(),
            "points": pts.iter().map(|y| y.to_string()).collect::<Vec<_>>(),
        }),
    };
    let grid: Vec<_> = rows
        .iter()
        .map(|r| json!({ "y": r.y.to_string(), "on_formula": r.on_formula, "witness_m": r.witness }))
        .collect();
    let report = json!({
        "experiment": "sa-rotation",
        "params": { "alpha": alpha.text, "x": x.point.to_string(), "set": set, "eps": fmt_f64(eps), "m_max": m_max },
        "formula": formula_json,
        "grid": grid,
        "formula_witnessed": formula_witnessed,
        "off_formula_clean": off_formula_clean,
        "pass": passed,
    });
    let witnessed: Vec<String> = rows.iter().filter(|r| r.witness.is_some()).map(|r| r.y.to_string()).collect();
    Ok(Outcome {
        passed,
        summary: format!("witnessed {{{}}}", witnessed.join(", ")),
        artifacts: vec![table.finish("sa-rotation.csv"), Artifact::json("sa-rotation.json", &report)],
    })
}
