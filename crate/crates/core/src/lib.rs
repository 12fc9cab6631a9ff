//! Exact and numeric kernels for recurrence experiments on tori and the
//! Heisenberg nilmanifold: windowed integer sets, torus rotations and skew
//! products, polynomial sequences in the Heisenberg group, and an explicit
//! syndetic set that is multiplicatively thick in no congruence coset.

pub mod constants;
pub mod counterexample;
pub mod dynamics;
pub mod exact;
pub mod fixed;
pub mod heismanifold;
pub mod nilpoly;
pub mod setalgebra;
pub mod torus;

pub use dynamics::{return_times, sa_numeric_witness, OrbitSystem};
pub use exact::Rat;
pub use fixed::Turn;
pub use heismanifold::{HeisPoint, Nilrotation};
pub use nilpoly::{GroupElement, HeisFiltration, PolySeq};
pub use setalgebra::{CongruenceCoset, Flavor, IntWindowSet, Syndeticity};
pub use torus::{QuadraticSkew, RotationSystem, SaSet, SkewGeneric, TorusPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degenerate window [{lo}, {hi}]")]
    DegenerateWindow { lo: i64, hi: i64 },
    #[error("{n} is outside window [{lo}, {hi}]")]
    OutOfWindow { n: i64, lo: i64, hi: i64 },
    #[error("divisor must be positive")]
    InvalidDivisor,
    #[error("empty input set")]
    EmptyInput,
    #[error("window too small: search needs up to {need}, window ends at {have}")]
    InsufficientWindow { need: i128, have: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
