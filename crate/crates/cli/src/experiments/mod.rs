//! The experiment catalog.

use nildyn_core::constants::ConstantTable;
use nildyn_core::Error;

use crate::config::{Field, Params};
use crate::output::Artifact;

mod counterexample;
mod heis_return;
mod nilpoly;
mod sa_quadratic;
mod sa_rotation;
mod vdw;

pub struct Ctx {
    pub timing: bool,
    pub constants: ConstantTable,
}

pub struct Outcome {
    pub passed: bool,
    pub summary: String,
    pub artifacts: Vec<Artifact>,
}

pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub fields: &'static [Field],
    /// Emitted files and CSV columns.
    pub outputs: &'static [(&'static str, &'static str)],
    pub run: fn(&Params, &Ctx) -> Result<Outcome, Error>,
}

pub static CATALOG: &[Experiment] = &[
    sa_rotation::EXPERIMENT,
    sa_quadratic::EXPERIMENT,
    nilpoly::EXPERIMENT,
    heis_return::EXPERIMENT,
    counterexample::EXPERIMENT,
    vdw::EXPERIMENT,
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    CATALOG.iter().find(|e| e.name == name)
}

/// The CSV schema shared by witness-search experiments.
pub const SA_COLUMNS: &[&str] = &["system", "x", "y", "F", "eps", "m_max", "witness_m", "elapsed_ns"];

pub fn elapsed(ctx: &Ctx, ns: u64) -> String {
    if ctx.timing {
        ns.to_string()
    } else {
        String::new()
    }
}

pub fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}
