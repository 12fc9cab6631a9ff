//! System-agnostic orbit scans: numeric simultaneous approximation and return times.

use rayon::prelude::*;

use crate::setalgebra::IntWindowSet;
use crate::Error;

/// A precompiled "is T^n x within eps of y" test.
pub trait Probe: Sync {
    fn near(&self, n: i64) -> bool;
}

pub trait OrbitSystem: Sync {
    type Point: Clone;
    type Probe: Probe;

    /// Orbit point T^n x, computed in closed form.
    fn orbit(&self, x: &Self::Point, n: i64) -> Self::Point;

    fn probe(&self, x: &Self::Point, y: &Self::Point, eps: f64) -> Self::Probe;
}

/// Least m in [1, m_max] with d(T^{fm} x, y) < eps for every f in F.
pub fn sa_numeric_witness<S: OrbitSystem>(
    sys: &S,
    x: &S::Point,
    y: &S::Point,
    f: &[i64],
    eps: f64,
    m_max: u64,
) -> Option<u64> {
    if f.is_empty() || eps.is_nan() || eps <= 0.0 {
        return None;
    }
    let p = sys.probe(x, y, eps);
    (1..=m_max)
        .into_par_iter()
        .find_first(|&m| f.iter().all(|&fi| p.near(fi * m as i64)))
}

/// { m in [1, horizon] : d(T^m x, center) < radius }.
pub fn return_times<S: OrbitSystem>(
    sys: &S,
    x: &S::Point,
    center: &S::Point,
    radius: f64,
    horizon: u64,
) -> Result<IntWindowSet, Error> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::Precondition("radius must be positive".into()));
    }
    if horizon == 0 {
        return Err(Error::DegenerateWindow { lo: 1, hi: 0 });
    }
    let p = sys.probe(x, center, radius);
    let hits: Vec<bool> = (1..=horizon as i64).into_par_iter().map(|m| p.near(m)).collect();
    IntWindowSet::from_fn(1, horizon as i64, |m| hits[(m - 1) as usize])
}
