use nildyn_core::heismanifold::{sa_quadratic_experiment, Witness};
use nildyn_core::Error;
use serde_json::json;

use super::{elapsed, join, Ctx, Experiment, Outcome, SA_COLUMNS};
use crate::config::{Field, Kind, Params};
use crate::output::{fmt_f64, opt, Artifact, Table};

pub const EXPERIMENT: Experiment = Experiment {
    name: "sa-quadratic",
    about: "Simultaneous approximation for the skew (x, y) -> (x + alpha, y + 2x + alpha) from the origin along F = {1, N+1, 2N+1}: lattice points versus off-lattice controls",
    fields: &[
        Field { name: "alpha", kind: Kind::Angle, default: Some("golden"), help: "rotation angle" },
        Field { name: "N", kind: Kind::IntList { min: 2, max: 64, max_len: 8 }, default: Some("2"), help: "moduli N" },
        Field { name: "eps", kind: Kind::Positive, default: Some("1e-3"), help: "approximation radius" },
        Field { name: "mmax", kind: Kind::Int { min: 1, max: 1_000_000_000 }, default: Some("1000000"), help: "largest dilate searched" },
        Field { name: "controls", kind: Kind::Int { min: 1, max: 64 }, default: Some("8"), help: "control grid resolution R" },
    ],
    outputs: &[
        ("sa-quadratic.csv", "system,x,y,F,eps,m_max,witness_m,elapsed_ns; lattice rows then control rows, per N"),
        ("sa-quadratic.json", "per-N lattice hits, witnessed controls, containment flags"),
    ],
    run,
};

fn run(p: &Params, ctx: &Ctx) -> Result<Outcome, Error> {
    let alpha = p.angle("alpha");
    let (eps, m_max, res) = (p.float("eps"), p.uint("mmax"), p.uint("controls"));
    let system = format!("quadratic-skew({})", alpha.text);
    let mut table = Table::new(SA_COLUMNS);
    let mut per_n = Vec::new();
    let mut passed = true;
    let mut summary = Vec::new();
    for &n in p.ints("N") {
        let rep = sa_quadratic_experiment(&alpha.point, n as u64, res, eps, m_max)?;
        let f_text = join(&rep.params.f, " ");
        let mut emit = |ws: &[Witness]| {
            for w in ws {
                table.row([
                    system.clone(),
                    "0/1 0/1".to_string(),
                    format!("{} {}", w.y[0], w.y[1]),
                    f_text.clone(),
                    fmt_f64(eps),
                    m_max.to_string(),
                    opt(w.m),
                    elapsed(ctx, w.elapsed_ns),
                ]);
            }
        };
        emit(&rep.witnessed);
        emit(&rep.controls);
        let hit = |ws: &[Witness]| -> Vec<serde_json::Value> {
            ws.iter().filter(|w| w.m.is_some()).map(|w| json!({ "y": w.y, "witness_m": w.m })).collect()
        };
        passed &= rep.controls_clean;
        summary.push(format!(
            "N={n}: {} lattice hits, controls {}",
            rep.lattice_witnessed,
            if rep.controls_clean { "clean" } else { "HIT" }
        ));
        per_n.push(json!({
            "N": n,
            "F": rep.params.f,
            "lattice_points": rep.grid.len(),
            "lattice_witnessed": rep.lattice_witnessed,
            "lattice_hits": hit(&rep.witnessed),
            "control_points": rep.controls.len(),
            "control_hits": hit(&rep.controls),
            "controls_clean": rep.controls_clean,
            "delta_dense_sampled": rep.delta_dense_sampled,
        }));
    }
    let report = json!({
        "experiment": "sa-quadratic",
        "params": { "alpha": alpha.text, "eps": fmt_f64(eps), "m_max": m_max, "control_resolution": res },
        "runs": per_n,
        "pass": passed,
    });
    Ok(Outcome {
        passed,
        summary: summary.join("; "),
        artifacts: vec![table.finish("sa-quadratic.csv"), Artifact::json("sa-quadratic.json", &report)],
    })
}
