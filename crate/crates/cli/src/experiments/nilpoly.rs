use nildyn_core::nilpoly::{orbit_periodic_direct, verify_rational_orbit_periodic, LatticeGroup};
use nildyn_core::{Error, PolySeq};
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{join, Ctx, Experiment, Outcome};
use crate::config::{Field, Kind, Params};
use crate::output::{Artifact, Table};
use crate::sample;

pub const EXPERIMENT: Experiment = Experiment {
    name: "nilpoly-periodicity",
    about: "Heisenberg polynomial sequences: the reverse-difference periodicity criterion against direct orbit comparison, and least periods of rationally valued sequences against the constructive modulus",
    fields: &[
        Field { name: "seed", kind: Kind::Int { min: 0, max: i64::MAX }, default: Some("1"), help: "RNG seed" },
        Field { name: "count", kind: Kind::Int { min: 0, max: 1_000_000 }, default: Some("1000"), help: "random sequences for the criterion check" },
        Field { name: "den", kind: Kind::Int { min: 1, max: 1000 }, default: Some("12"), help: "largest coefficient denominator" },
        Field { name: "nmax", kind: Kind::Int { min: 1, max: 10_000 }, default: Some("24"), help: "largest step N tested" },
        Field { name: "span", kind: Kind::Int { min: 3, max: 1000 }, default: Some("8"), help: "direct comparison on n in [-span, span]" },
        Field { name: "rational", kind: Kind::Int { min: 0, max: 100_000 }, default: Some("200"), help: "rationally valued sequences" },
        Field { name: "qmax", kind: Kind::Int { min: 1, max: 8 }, default: Some("6"), help: "largest rationality order Q" },
    ],
    outputs: &[
        ("criterion.csv", "index,poly,N,criterion,direct,agree"),
        ("rational.csv", "index,poly,Q,rationality,least_period,bound,within_bound,divides_bound"),
        ("nilpoly-periodicity.json", "disagreement and violation counts, pass flag"),
    ],
    run,
};

fn poly_text(p: &PolySeq) -> String {
    serde_json::to_string(&p.to_json()).expect("json")
}

fn run(p: &Params, _ctx: &Ctx) -> Result<Outcome, Error> {
    let seed = p.uint("seed");
    let (count, den, nmax, span) = (p.uint("count"), p.uint("den"), p.uint("nmax"), p.uint("span"));
    let (rational, qmax) = (p.uint("rational"), p.uint("qmax"));

    let mut rng = sample::rng(seed);
    let cases: Vec<(PolySeq, u64)> =
        (0..count).map(|_| (sample::poly(&mut rng, den), rng.gen_range(1..=nmax))).collect();
    let rational_cases: Vec<(PolySeq, u64)> =
        (0..rational).map(|_| sample::rational_valued_poly(&mut rng, qmax)).collect();

    let verdicts = cases
        .par_iter()
        .map(|(q, n)| -> Result<(bool, bool), Error> {
            let dp = q.diff_prime(*n)?;
            let crit = (0..=q.degree() as i64).all(|k| dp.eval(k).in_lattice());
            Ok((crit, orbit_periodic_direct(q, *n, span)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["index", "poly", "N", "criterion", "direct", "agree"]);
    let mut disagreements = 0;
    let mut periodic = 0;
    for (i, ((q, n), (crit, direct))) in cases.iter().zip(&verdicts).enumerate() {
        disagreements += (crit != direct) as u64;
        periodic += *crit as u64;
        table.row([
            i.to_string(),
            poly_text(q),
            n.to_string(),
            crit.to_string(),
            direct.to_string(),
            (crit == direct).to_string(),
        ]);
    }

    let reports = rational_cases
        .par_iter()
        .map(|(q, qq)| verify_rational_orbit_periodic(q, *qq))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rtable = Table::new(&[
        "index",
        "poly",
        "Q",
        "rationality",
        "least_period",
        "bound",
        "within_bound",
        "divides_bound",
    ]);
    let mut violations = 0;
    let mut largest = 0u64;
    for (i, ((q, qq), r)) in rational_cases.iter().zip(&reports).enumerate() {
        violations += !(r.within_bound && r.divides_bound) as u64;
        largest = largest.max(r.least_period.to_u64().unwrap_or(u64::MAX));
        rtable.row([
            i.to_string(),
            poly_text(q),
            qq.to_string(),
            join(&r.rationality, " "),
            r.least_period.to_string(),
            r.bound.to_string(),
            r.within_bound.to_string(),
            r.divides_bound.to_string(),
        ]);
    }
    let passed = disagreements == 0 && violations == 0;
    let report = json!({
        "experiment": "nilpoly-periodicity",
        "params": { "seed": seed, "count": count, "den": den, "nmax": nmax, "span": span, "rational": rational, "qmax": qmax },
        "criterion": { "cases": count, "periodic": periodic, "disagreements": disagreements },
        "rational": { "cases": rational, "violations": violations, "largest_least_period": largest },
        "pass": passed,
    });
    Ok(Outcome {
        passed,
        summary: format!(
            "{disagreements} criterion disagreements in {count}; {violations} bound violations in {rational}"
        ),
        artifacts: vec![
            table.finish("criterion.csv"),
            rtable.finish("rational.csv"),
            Artifact::json("nilpoly-periodicity.json", &report),
        ],
    })
}
