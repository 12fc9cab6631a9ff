//! Rotations, the quadratic skew product and trigonometric skew products on
//! T^1 / T^2, plus the exact simultaneous-approximation set of a rotation.

use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{OrbitSystem, Probe};
use crate::exact::{self, Rat};
use crate::fixed::{eps_threshold, Turn};
use crate::setalgebra::{gcd_diff, gcd_set, IntWindowSet};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TorusPoint {
    Exact(Rat),
    Approx(Turn),
}

impl TorusPoint {
    pub fn exact(r: Rat) -> Self {
        TorusPoint::Exact(exact::frac(&r))
    }

    pub fn zero() -> Self {
        TorusPoint::Exact(Rat::zero())
    }

    pub fn from_f64(x: f64) -> Self {
        TorusPoint::Approx(Turn::from_f64(x))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TorusPoint::Exact(_))
    }

    pub fn to_turn(&self) -> Turn {
        match self {
            TorusPoint::Exact(r) => Turn::from_rat(r),
            TorusPoint::Approx(t) => *t,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            TorusPoint::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            TorusPoint::Approx(t) => t.to_f64(),
        }
    }

    pub fn add(&self, o: &TorusPoint) -> TorusPoint {
        match (self, o) {
            (TorusPoint::Exact(a), TorusPoint::Exact(b)) => TorusPoint::exact(a + b),
            _ => TorusPoint::Approx(self.to_turn().add(o.to_turn())),
        }
    }

    pub fn mul_int(&self, n: i128) -> TorusPoint {
        match self {
            TorusPoint::Exact(a) => TorusPoint::exact(a * Rat::from_integer(BigInt::from(n))),
            TorusPoint::Approx(t) => TorusPoint::Approx(t.mul_i128(n)),
        }
    }

    pub fn dist(&self, o: &TorusPoint) -> f64 {
        match (self, o) {
            (TorusPoint::Exact(a), TorusPoint::Exact(b)) => {
                exact::torus_dist(a, b).to_f64().unwrap_or(f64::NAN)
            }
            _ => self.to_turn().dist(o.to_turn()),
        }
    }
}

/// Exact points print as `p/q`; approximate ones with 12 significant digits.
impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusPoint::Exact(r) => f.write_str(&exact::fmt_rat(r)),
            TorusPoint::Approx(t) => write!(f, "{:.11e}", t.to_f64()),
        }
    }
}

/// Z/D with D < 2^63 when every input is rational with small common
/// denominator, otherwise the 2^-128 dyadic circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Circle {
    modulus: u128,
}

const MAX_EXACT_DEN: u64 = 1 << 62;

impl Circle {
    pub(crate) const DYADIC: Circle = Circle { modulus: 0 };

    pub(crate) fn for_points(ps: &[&TorusPoint]) -> Circle {
        let mut l = BigInt::from(1);
        for p in ps {
            match p {
                TorusPoint::Exact(r) => l = l.lcm(r.denom()),
                TorusPoint::Approx(_) => return Circle::DYADIC,
            }
        }
        match l.to_u64() {
            Some(d) if d <= MAX_EXACT_DEN => Circle { modulus: d as u128 },
            _ => Circle::DYADIC,
        }
    }

    pub(crate) fn phase(self, p: &TorusPoint) -> u128 {
        match (self.modulus, p) {
            (0, p) => p.to_turn().0,
            (m, TorusPoint::Exact(r)) => {
                let scaled = r.numer() * (BigInt::from(m) / r.denom());
                scaled.mod_floor(&BigInt::from(m)).to_u128().expect("reduced")
            }
            (_, TorusPoint::Approx(_)) => unreachable!("exact circle built from exact points"),
        }
    }

    #[inline]
    pub(crate) fn add(self, a: u128, b: u128) -> u128 {
        match self.modulus {
            0 => a.wrapping_add(b),
            m => (a + b) % m,
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u128, n: i128) -> u128 {
        match self.modulus {
            0 => a.wrapping_mul(n as u128),
            m => a * (n.rem_euclid(m as i128) as u128) % m,
        }
    }

    #[inline]
    pub(crate) fn dist(self, a: u128, b: u128) -> u128 {
        match self.modulus {
            0 => {
                let d = a.wrapping_sub(b);
                d.min(d.wrapping_neg())
            }
            m => {
                let d = (a + m - b) % m;
                d.min(m - d)
            }
        }
    }

    /// t with `dist < t` iff the true distance is `< eps`.
    pub(crate) fn threshold(self, eps: f64) -> u128 {
        match self.modulus {
            0 => eps_threshold(eps),
            m => {
                let Some(e) = Rat::from_float(eps) else { return 0 };
                if e > Rat::new(1.into(), 2.into()) {
                    return u128::MAX;
                }
                let s = e * Rat::from_integer(BigInt::from(m));
                (-(-s.numer()).div_floor(s.denom())).to_u128().unwrap_or(0)
            }
        }
    }
}

/// x -> x + alpha on T^1.
#[derive(Clone, Debug)]
pub struct RotationSystem {
    pub alpha: TorusPoint,
}

pub struct RotationProbe {
    c: Circle,
    x: u128,
    a: u128,
    y: u128,
    thr: u128,
}

impl Probe for RotationProbe {
    #[inline]
    fn near(&self, n: i64) -> bool {
        let p = self.c.add(self.x, self.c.mul(self.a, n as i128));
        self.c.dist(p, self.y) < self.thr
    }
}

impl OrbitSystem for RotationSystem {
    type Point = TorusPoint;
    type Probe = RotationProbe;

    fn orbit(&self, x: &TorusPoint, n: i64) -> TorusPoint {
        x.add(&self.alpha.mul_int(n as i128))
    }

    fn probe(&self, x: &TorusPoint, y: &TorusPoint, eps: f64) -> RotationProbe {
        let c = Circle::for_points(&[&self.alpha, x, y]);
        RotationProbe { c, x: c.phase(x), a: c.phase(&self.alpha), y: c.phase(y), thr: c.threshold(eps) }
    }
}

pub type T2 = (TorusPoint, TorusPoint);

/// (x, y) -> (x + alpha, y + 2x + alpha), so T^m(0,0) = (m alpha, m^2 alpha).
#[derive(Clone, Debug)]
pub struct QuadraticSkew {
    pub alpha: TorusPoint,
}

pub struct QuadraticProbe {
    c: Circle,
    x: (u128, u128),
    a: u128,
    y: (u128, u128),
    thr: u128,
}

impl Probe for QuadraticProbe {
    #[inline]
    fn near(&self, n: i64) -> bool {
        let c = self.c;
        let n = n as i128;
        let p0 = c.add(self.x.0, c.mul(self.a, n));
        if c.dist(p0, self.y.0) >= self.thr {
            return false;
        }
        let p1 = c.add(c.add(self.x.1, c.mul(self.x.0, 2 * n)), c.mul(self.a, n * n));
        c.dist(p1, self.y.1) < self.thr
    }
}

impl OrbitSystem for QuadraticSkew {
    type Point = T2;
    type Probe = QuadraticProbe;

    fn orbit(&self, p: &T2, n: i64) -> T2 {
        let n = n as i128;
        (
            p.0.add(&self.alpha.mul_int(n)),
            p.1.add(&p.0.mul_int(2 * n)).add(&self.alpha.mul_int(n * n)),
        )
    }

    fn probe(&self, x: &T2, y: &T2, eps: f64) -> QuadraticProbe {
        let c = Circle::for_points(&[&self.alpha, &x.0, &x.1, &y.0, &y.1]);
        QuadraticProbe {
            c,
            x: (c.phase(&x.0), c.phase(&x.1)),
            a: c.phase(&self.alpha),
            y: (c.phase(&y.0), c.phase(&y.1)),
            thr: c.threshold(eps),
        }
    }
}

/// Constant plus (frequency, cos coefficient, sin coefficient) terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    pub constant: f64,
    pub terms: Vec<(i64, f64, f64)>,
}

impl TrigPoly {
    pub fn eval(&self, t: Turn) -> f64 {
        self.terms.iter().fold(self.constant, |acc, &(k, a, b)| {
            let th = t.mul_i128(k as i128).to_f64() * TAU;
            acc + a * th.cos() + b * th.sin()
        })
    }
}

/// (x, y) -> (x + alpha, y + h(x) mod 1) for a trigonometric polynomial h.
#[derive(Clone, Debug)]
pub struct SkewGeneric {
    pub alpha: TorusPoint,
    pub h: TrigPoly,
}

/// h_n(x): sum of h(x + i alpha) over 0 <= i < n, 0 at n = 0, and minus the
/// sum over n <= i < 0 for negative n.
pub fn cocycle_sum(skew: &SkewGeneric, x: &TorusPoint, n: i64) -> f64 {
    let a = skew.alpha.to_turn();
    let x = x.to_turn();
    let term = |i: i64| skew.h.eval(x.add(a.mul_i128(i as i128)));
    if n >= 0 {
        (0..n).map(term).sum()
    } else {
        -(n..0).map(term).sum::<f64>()
    }
}

/// Closed-form h_n(x) via geometric sums; O(#terms) instead of O(n).
pub fn cocycle_sum_fast(skew: &SkewGeneric, x: &TorusPoint, n: i64) -> f64 {
    let a = skew.alpha.to_turn();
    let x = x.to_turn();
    let mut acc = skew.h.constant * n as f64;
    for &(k, ca, sb) in &skew.h.terms {
        let kx = x.mul_i128(k as i128).to_f64() * TAU;
        let ka = a.mul_i128(k as i128).to_f64() * TAU;
        let kna = a.mul_i128(k as i128 * n as i128).to_f64() * TAU;
        // S = (1 - z^n) / (1 - z), z = e^{i k alpha}
        let (dr, di) = (1.0 - ka.cos(), -ka.sin());
        let den = dr * dr + di * di;
        let (sr, si) = if den < 1e-24 {
            (n as f64, 0.0)
        } else {
            let (nr, ni) = (1.0 - kna.cos(), -kna.sin());
            ((nr * dr + ni * di) / den, (ni * dr - nr * di) / den)
        };
        // Re[(a - i b) e^{i kx} S]
        let (er, ei) = (kx.cos(), kx.sin());
        let (pr, pi) = (er * sr - ei * si, er * si + ei * sr);
        acc += ca * pr + sb * pi;
    }
    acc
}

pub struct SkewProbe {
    skew: SkewGeneric,
    x: (Turn, Turn),
    y: (Turn, Turn),
    thr: u128,
}

impl Probe for SkewProbe {
    fn near(&self, n: i64) -> bool {
        let a = self.skew.alpha.to_turn();
        let p0 = self.x.0.add(a.mul_i128(n as i128));
        if p0.dist_raw(self.y.0) >= self.thr {
            return false;
        }
        let h = cocycle_sum_fast(&self.skew, &TorusPoint::Approx(self.x.0), n);
        self.x.1.add(Turn::from_f64(h)).dist_raw(self.y.1) < self.thr
    }
}

impl OrbitSystem for SkewGeneric {
    type Point = T2;
    type Probe = SkewProbe;

    fn orbit(&self, p: &T2, n: i64) -> T2 {
        let h = cocycle_sum_fast(self, &p.0, n);
        (
            TorusPoint::Approx(p.0.to_turn().add(self.alpha.to_turn().mul_i128(n as i128))),
            TorusPoint::Approx(p.1.to_turn().add(Turn::from_f64(h))),
        )
    }

    fn probe(&self, x: &T2, y: &T2, eps: f64) -> SkewProbe {
        SkewProbe {
            skew: self.clone(),
            x: (x.0.to_turn(), x.1.to_turn()),
            y: (y.0.to_turn(), y.1.to_turn()),
            thr: eps_threshold(eps),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaSet {
    Finite(Vec<TorusPoint>),
    FullTorus,
}

/// Denominator N of the finite SA set, or None for the full torus.
pub fn sa_modulus(a: &[i64]) -> Result<Option<u64>, Error> {
    let g = gcd_set(a)?;
    let d = gcd_diff(a)?;
    Ok(match (g, d) {
        (0, _) => Some(1),
        (_, 0) => None,
        (g, d) => Some(d / g),
    })
}

/// SA(x, A) for an irrational rotation: {x} if A = {0}, the whole torus for
/// a singleton {a != 0}, else x + (1/N)Z with N = gcd(A - A) / gcd(A).
pub fn sa_exact_rotation(x: &TorusPoint, a: &[i64]) -> Result<SaSet, Error> {
    Ok(match sa_modulus(a)? {
        None => SaSet::FullTorus,
        Some(n) => SaSet::Finite(
            (0..n)
                .map(|j| x.add(&TorusPoint::exact(Rat::new(BigInt::from(j), BigInt::from(n)))))
                .collect(),
        ),
    })
}

#[derive(Clone, Debug)]
pub struct SaGridRow {
    pub y: TorusPoint,
    pub on_formula: bool,
    pub witness: Option<u64>,
    pub elapsed_ns: u64,
}

/// Numeric witnesses on the grid x + j/(2N) (x + j/8 for the full torus);
/// even j are the formula points.
pub fn sa_rotation_grid(
    rot: &RotationSystem,
    x: &TorusPoint,
    a: &[i64],
    eps: f64,
    m_max: u64,
) -> Result<(SaSet, Vec<SaGridRow>), Error> {
    let formula = sa_exact_rotation(x, a)?;
    let (size, stride) = match sa_modulus(a)? {
        Some(n) => (2 * n, 2),
        None => (8, 1),
    };
    let rows = (0..size)
        .map(|j| {
            let y = x.add(&TorusPoint::exact(Rat::new(BigInt::from(j), BigInt::from(size))));
            let t = std::time::Instant::now();
            let witness = crate::dynamics::sa_numeric_witness(rot, x, &y, a, eps, m_max);
            let elapsed_ns = t.elapsed().as_nanos() as u64;
            SaGridRow { y, on_formula: j % stride == 0, witness, elapsed_ns }
        })
        .collect();
    Ok((formula, rows))
}

/// { n in [1, horizon] : {n alpha} in the open arc (lo, hi) }, 0 <= lo < hi <= 1.
pub fn interval_visits(alpha: &TorusPoint, lo: &Rat, hi: &Rat, horizon: u64) -> Result<IntWindowSet, Error> {
    if !(lo.is_zero() || lo.is_positive()) || hi > &Rat::one() || lo >= hi {
        return Err(Error::Precondition(format!("need 0 <= lo < hi <= 1, got ({lo}, {hi})")));
    }
    if horizon == 0 {
        return Err(Error::DegenerateWindow { lo: 1, hi: 0 });
    }
    let hits: Vec<bool> = match alpha {
        TorusPoint::Exact(a) => {
            let (p, q) = (a.numer().clone(), a.denom().clone());
            (1..=horizon)
                .into_par_iter()
                .map(|n| {
                    let r = Rat::new((&p * BigInt::from(n)).mod_floor(&q), q.clone());
                    &r > lo && &r < hi
                })
                .collect()
        }
        TorusPoint::Approx(t) => {
            let scale = |r: &Rat| r * Rat::from_integer(BigInt::one() << 128u32);
            // raw > lo 2^128 iff raw > floor; raw < hi 2^128 iff raw < ceil.
            let lo_raw = scale(lo).floor().to_integer().to_u128().expect("lo < 1");
            let hi_raw = scale(hi).ceil().to_integer().to_u128();
            (1..=horizon)
                .into_par_iter()
                .map(|n| {
                    let raw = t.mul_i128(n as i128).0;
                    raw > lo_raw && hi_raw.is_none_or(|h| raw < h)
                })
                .collect()
        }
    };
    IntWindowSet::from_fn(1, horizon as i64, |n| hits[(n - 1) as usize])
}
