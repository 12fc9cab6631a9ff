use nildyn_core::heismanifold::{orbit_period, reduce};
use nildyn_core::setalgebra::{longest_run, syndeticity_gap};
use nildyn_core::{return_times, Error, GroupElement, HeisPoint, Nilrotation, Syndeticity, TorusPoint};
use serde_json::json;

use super::{Ctx, Experiment, Outcome};
use crate::config::{Angle, Field, Kind, Params};
use crate::output::{fmt_f64, opt, Artifact, Table};

pub const EXPERIMENT: Experiment = Experiment {
    name: "heis-return-times",
    about: "Return times of a Heisenberg nilrotation x -> g x to the max-metric ball of given radius around x",
    fields: &[
        Field { name: "g", kind: Kind::Triple, default: Some("golden,sqrt2m1,inv_pi"), help: "rotation element (a,b,c)" },
        Field { name: "x", kind: Kind::Triple, default: Some("0,0,0"), help: "base point and ball center" },
        Field { name: "radius", kind: Kind::Positive, default: Some("0.05"), help: "ball radius" },
        Field { name: "horizon", kind: Kind::Int { min: 1, max: 100_000_000 }, default: Some("100000"), help: "times 1..=horizon" },
    ],
    outputs: &[
        ("return-times.rle", "window line 'lo hi' then one 'a..b' line per run of members"),
        ("runs.csv", "start,end,length"),
        ("heis-return-times.json", "count, density, syndeticity gap, exact period when rational"),
    ],
    run,
};

fn exact_coords(t: &[Angle; 3]) -> Option<[nildyn_core::Rat; 3]> {
    let r = |a: &Angle| match &a.point {
        TorusPoint::Exact(r) => Some(r.clone()),
        TorusPoint::Approx(_) => None,
    };
    Some([r(&t[0])?, r(&t[1])?, r(&t[2])?])
}

fn run(p: &Params, _ctx: &Ctx) -> Result<Outcome, Error> {
    let (g, x) = (p.triple("g"), p.triple("x"));
    let (radius, horizon) = (p.float("radius"), p.uint("horizon"));
    let rot = match exact_coords(g) {
        Some([a, b, c]) => Nilrotation::exact(GroupElement::new(a, b, c)),
        None => Nilrotation::from_turns(g[0].point.to_turn(), g[1].point.to_turn(), g[2].point.to_turn()),
    };
    let point = match exact_coords(x) {
        Some([a, b, c]) => HeisPoint::from_rats(a, b, c),
        None => {
            let r = |a: &Angle| a.point.to_turn().to_rat();
            reduce(&GroupElement::new(r(&x[0]), r(&x[1]), r(&x[2])), false)
        }
    };
    let set = return_times(&rot, &point, &point, radius, horizon)?;
    let period = if rot.exact && point.exact { orbit_period(&rot, &point, horizon) } else { None };

    let mut runs = Table::new(&["start", "end", "length"]);
    for (a, b) in set.runs() {
        runs.row([a.to_string(), b.to_string(), (b - a + 1).to_string()]);
    }
    let gap = match syndeticity_gap(&set) {
        Syndeticity::Gap(g) => json!({ "kind": "gap", "gap": g }),
        Syndeticity::EdgeInconclusive => json!({ "kind": "edge_inconclusive" }),
        Syndeticity::Empty => json!({ "kind": "empty" }),
    };
    let count = set.count();
    let passed = count > 0;
    let text = |t: &[Angle; 3]| t.iter().map(|a| a.text.clone()).collect::<Vec<_>>();
    let report = json!({
        "experiment": "heis-return-times",
        "params": { "g": text(g), "x": point.to_string(), "radius": fmt_f64(radius), "horizon": horizon },
        "count": count,
        "density": fmt_f64(count as f64 / horizon as f64),
        "first": set.members().next(),
        "longest_run": longest_run(&set),
        "syndeticity": gap,
        "period": period,
        "pass": passed,
    });
    Ok(Outcome {
        passed,
        summary: format!("{count} return times in [1, {horizon}], period {}", opt(period)),
        artifacts: vec![
            Artifact::text("return-times.rle", set.to_rle()),
            runs.finish("runs.csv"),
            Artifact::json("heis-return-times.json", &report),
        ],
    })
}
