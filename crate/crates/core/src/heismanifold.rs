//! The Heisenberg nilmanifold G/Gamma in canonical coordinates [0,1)^3,
//! nilrotations, their return times, rational points, and the quadratic-skew
//! simultaneous-approximation experiment.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::ConstantTable;
use crate::dynamics::{sa_numeric_witness, OrbitSystem, Probe};
use crate::exact::{self, Rat};
use crate::fixed::Turn;
use crate::nilpoly::{q_prime_bound, rationality_order, Group, GroupElement, LatticeGroup};
use crate::torus::{QuadraticSkew, TorusPoint, T2};
use crate::Error;

/// Canonical representative of g Gamma. Approximate points carry 2^-128
/// dyadic coordinates and `exact = false`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisPoint {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub exact: bool,
}

impl HeisPoint {
    pub fn identity() -> Self {
        reduce(&GroupElement::identity(), true)
    }

    pub fn from_rats(a: Rat, b: Rat, c: Rat) -> Self {
        reduce(&GroupElement::new(a, b, c), true)
    }

    pub fn from_f64s(a: f64, b: f64, c: f64) -> Self {
        let r = |x: f64| Turn::from_f64(x).to_rat();
        reduce(&GroupElement::new(r(a), r(b), r(c)), false)
    }

    pub fn lift(&self) -> GroupElement {
        GroupElement::new(self.a.clone(), self.b.clone(), self.c.clone())
    }

    /// Max of coordinate torus distances.
    pub fn dist(&self, o: &HeisPoint) -> Rat {
        [
            exact::torus_dist(&self.a, &o.a),
            exact::torus_dist(&self.b, &o.b),
            exact::torus_dist(&self.c, &o.c),
        ]
        .into_iter()
        .max()
        .expect("three coordinates")
    }

    pub fn coords_text(&self) -> [String; 3] {
        let f = |r: &Rat| {
            if self.exact {
                exact::fmt_rat(r)
            } else {
                format!("{:.11e}", r.to_f64().unwrap_or(f64::NAN))
            }
        };
        [f(&self.a), f(&self.b), f(&self.c)]
    }
}

impl fmt::Display for HeisPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.coords_text();
        write!(f, "({a}, {b}, {c})")
    }
}

pub fn reduce(g: &GroupElement, exact: bool) -> HeisPoint {
    let r = g.coset_rep();
    HeisPoint { a: r.a, b: r.b, c: r.c, exact }
}

/// x -> g x on G/Gamma.
#[derive(Clone, Debug)]
pub struct Nilrotation {
    pub g: GroupElement,
    pub exact: bool,
}

impl Nilrotation {
    pub fn exact(g: GroupElement) -> Self {
        Nilrotation { g, exact: true }
    }

    /// (alpha, beta, gamma) from reals, snapped to the 2^-128 grid.
    pub fn approx(a: f64, b: f64, c: f64) -> Self {
        let r = |x: f64| Turn::from_f64(x).to_rat();
        Nilrotation { g: GroupElement::new(r(a), r(b), r(c)), exact: false }
    }

    pub fn from_turns(a: Turn, b: Turn, c: Turn) -> Self {
        Nilrotation { g: GroupElement::new(a.to_rat(), b.to_rat(), c.to_rat()), exact: false }
    }
}

/// reduce(g^n lift(x)) with one closed-form power and one reduction.
pub fn apply(rot: &Nilrotation, x: &HeisPoint, n: i64) -> HeisPoint {
    reduce(&rot.g.power_i64(n).mul(&x.lift()), rot.exact && x.exact)
}

pub struct NilProbe {
    g: GroupElement,
    x: GroupElement,
    y: HeisPoint,
    eps: Rat,
}

impl Probe for NilProbe {
    fn near(&self, n: i64) -> bool {
        let p = reduce(&self.g.power_i64(n).mul(&self.x), true);
        p.dist(&self.y) < self.eps
    }
}

impl OrbitSystem for Nilrotation {
    type Point = HeisPoint;
    type Probe = NilProbe;

    fn orbit(&self, x: &HeisPoint, n: i64) -> HeisPoint {
        apply(self, x, n)
    }

    fn probe(&self, x: &HeisPoint, y: &HeisPoint, eps: f64) -> NilProbe {
        NilProbe {
            g: self.g.clone(),
            x: x.lift(),
            y: y.clone(),
            eps: Rat::from_float(eps).unwrap_or_else(Rat::zero),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    /// Least Q with the canonical lift Q-rational.
    pub q: u64,
    /// Every lift of the point is rational of this order.
    pub lift_bound: BigUint,
}

pub fn is_rational_point(x: &HeisPoint, q_max: u64) -> Result<Option<RationalPoint>, Error> {
    if !x.exact {
        return Err(Error::Precondition("rationality needs exact coordinates".into()));
    }
    Ok(rationality_order(&x.lift(), q_max).map(|q| RationalPoint { q, lift_bound: q_prime_bound(q, 2) }))
}

/// Least n >= 1 with T^n x = x, scanning up to `limit`.
pub fn orbit_period(rot: &Nilrotation, x: &HeisPoint, limit: u64) -> Option<u64> {
    (1..=limit as i64).into_par_iter().find_first(|&n| apply(rot, x, n) == *x).map(|n| n as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub y: [String; 2],
    pub m: Option<u64>,
    #[serde(skip)]
    pub elapsed_ns: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaQuadraticParams {
    pub alpha: String,
    pub n: u64,
    pub f: Vec<i64>,
    pub eps: f64,
    pub m_max: u64,
    pub control_resolution: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaQuadraticReport {
    pub grid: Vec<[String; 2]>,
    pub witnessed: Vec<Witness>,
    pub controls: Vec<Witness>,
    pub controls_clean: bool,
    pub lattice_witnessed: usize,
    pub delta_dense_sampled: bool,
    pub params: SaQuadraticParams,
}

fn lattice_dist(y: &T2, n: u64) -> f64 {
    let d = |v: f64, k: u64| {
        let s = v * k as f64;
        (s - s.round()).abs() / k as f64
    };
    d(y.0.to_f64(), n).max(d(y.1.to_f64(), 4 * n))
}

/// Witness search for F = {1, N+1, 2N+1} from (0,0) on the lattice
/// N^-1 Z x (4N)^-1 Z and on an off-lattice control grid
/// ((i + 1/pi)/R, (j + 1/e)/R), keeping controls more than 2 eps from the lattice.
pub fn sa_quadratic_experiment(
    alpha: &TorusPoint,
    n: u64,
    control_resolution: u64,
    eps: f64,
    m_max: u64,
) -> Result<SaQuadraticReport, Error> {
    if n < 2 {
        return Err(Error::Precondition("N must be at least 2".into()));
    }
    let sys = QuadraticSkew { alpha: alpha.clone() };
    let origin: T2 = (TorusPoint::zero(), TorusPoint::zero());
    let f: Vec<i64> = vec![1, n as i64 + 1, 2 * n as i64 + 1];
    let lattice: Vec<T2> = (0..n)
        .flat_map(|j| (0..4 * n).map(move |k| (j, k)))
        .map(|(j, k)| {
            (
                TorusPoint::exact(Rat::new(j.into(), n.into())),
                TorusPoint::exact(Rat::new(k.into(), (4 * n).into())),
            )
        })
        .collect();
    let consts = ConstantTable::default();
    let (pi, e) = (consts.turn("inv_pi").unwrap(), consts.turn("inv_e").unwrap());
    let r = control_resolution.max(1);
    let controls: Vec<T2> = (0..r)
        .flat_map(|i| (0..r).map(move |j| (i, j)))
        .map(|(i, j)| {
            let step = |k: u64, off: Turn| {
                TorusPoint::Approx(Turn::from_f64((k as f64 + off.to_f64()) / r as f64))
            };
            (step(i, pi), step(j, e))
        })
        .filter(|y| lattice_dist(y, n) > 2.0 * eps)
        .collect();
    let search = |ys: &[T2]| -> Vec<Witness> {
        ys.iter()
            .map(|y| {
                let t = std::time::Instant::now();
                let m = sa_numeric_witness(&sys, &origin, y, &f, eps, m_max);
                Witness { y: [y.0.to_string(), y.1.to_string()], m, elapsed_ns: t.elapsed().as_nanos() as u64 }
            })
            .collect()
    };
    let lattice_w = search(&lattice);
    let control_w = search(&controls);
    let hits: Vec<(f64, f64)> = lattice
        .iter()
        .zip(&lattice_w)
        .filter(|(_, w)| w.m.is_some())
        .map(|(y, _)| (y.0.to_f64(), y.1.to_f64()))
        .collect();
    let delta = 1.0 / n as f64 + eps;
    let samples = 16 * n;
    let delta_dense_sampled = !hits.is_empty()
        && (0..samples).all(|i| {
            (0..samples).all(|j| {
                let (u, v) = (i as f64 / samples as f64, j as f64 / samples as f64);
                let td = |x: f64, y: f64| {
                    let d = (x - y).rem_euclid(1.0);
                    d.min(1.0 - d)
                };
                hits.iter().any(|&(a, b)| td(u, a).max(td(v, b)) < delta)
            })
        });
    Ok(SaQuadraticReport {
        grid: lattice.iter().map(|y| [y.0.to_string(), y.1.to_string()]).collect(),
        lattice_witnessed: hits.len(),
        witnessed: lattice_w.into_iter().filter(|w| w.m.is_some()).collect(),
        controls_clean: control_w.iter().all(|w| w.m.is_none()),
        controls: control_w,
        delta_dense_sampled,
        params: SaQuadraticParams {
            alpha: alpha.to_string(),
            n,
            f,
            eps,
            m_max,
            control_resolution: r,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::golden;
    use crate::dynamics::return_times;
    use crate::exact::{int, rat};
    use crate::setalgebra::{syndeticity_gap, Syndeticity};

    fn pt(a: Rat, b: Rat, c: Rat) -> HeisPoint {
        HeisPoint::from_rats(a, b, c)
    }

    #[test]
    fn reduce_lift_roundtrip_and_coset_invariance() {
        let x = pt(rat(1, 3), rat(5, 7), rat(2, 9));
        assert_eq!(reduce(&x.lift(), true), x);
        let g = GroupElement::new(rat(-7, 3), rat(11, 5), rat(13, 4));
        for gamma in [
            GroupElement::new(int(1), int(0), int(0)),
            GroupElement::new(int(0), int(-3), int(0)),
            GroupElement::new(int(4), int(7), int(-2)),
        ] {
            assert_eq!(reduce(&g.mul(&gamma), true), reduce(&g, true));
        }
    }

    #[test]
    fn apply_examples() {
        let x = pt(rat(1, 5), rat(2, 5), rat(3, 5));
        let id = Nilrotation::exact(GroupElement::identity());
        assert_eq!(apply(&id, &x, 9), x);
        let r = Nilrotation::exact(GroupElement::new(rat(1, 4), int(0), int(0)));
        assert_eq!(apply(&r, &HeisPoint::identity(), 4), HeisPoint::identity());
        let s = Nilrotation::exact(GroupElement::new(rat(2, 7), rat(1, 3), rat(1, 11)));
        for (n, m) in [(3, 4), (-5, 2), (7, -9)] {
            assert_eq!(apply(&s, &x, n + m), apply(&s, &apply(&s, &x, m), n));
        }
    }

    #[test]
    fn stepping_matches_closed_form() {
        let s = Nilrotation::exact(GroupElement::new(rat(3, 8), rat(2, 5), rat(1, 6)));
        let x = pt(rat(1, 2), rat(1, 3), rat(1, 4));
        let mut p = x.clone();
        for n in 1..60 {
            p = apply(&s, &p, 1);
            assert_eq!(p, apply(&s, &x, n));
        }
        let f = Nilrotation::approx(0.618_033_988_749_894_9, 0.414_213_562_373_095, 0.1);
        let y = HeisPoint::from_f64s(0.2, 0.3, 0.4);
        let mut p = y.clone();
        for n in 1..2000 {
            p = apply(&f, &p, 1);
            if n % 500 == 0 {
                assert!(p.dist(&apply(&f, &y, n)) < rat(1, 1_000_000_000));
            }
        }
    }

    #[test]
    fn rational_point_examples() {
        let q = |x: HeisPoint| is_rational_point(&x, 100).unwrap().map(|r| r.q);
        assert_eq!(q(HeisPoint::identity()), Some(1));
        assert_eq!(q(pt(rat(1, 2), rat(1, 2), int(0))), Some(8));
        assert_eq!(q(pt(rat(1, 3), int(0), int(0))), Some(3));
        let r = is_rational_point(&pt(rat(1, 2), rat(1, 2), int(0)), 100).unwrap().unwrap();
        assert_eq!(r.lift_bound, q_prime_bound(8, 2));
        assert!(is_rational_point(&HeisPoint::from_f64s(0.5, 0.0, 0.0), 10).is_err());
    }

    #[test]
    fn rational_orbits_are_periodic() {
        let s = Nilrotation::exact(GroupElement::new(rat(1, 2), rat(1, 2), int(0)));
        assert_eq!(orbit_period(&s, &HeisPoint::identity(), 100), Some(8));
        let t = Nilrotation::exact(GroupElement::new(rat(1, 3), rat(1, 4), rat(1, 5)));
        let x = pt(rat(1, 6), int(0), rat(1, 2));
        let p = orbit_period(&t, &x, 10_000).unwrap();
        assert_eq!(apply(&t, &x, p as i64), x);
        let rt = return_times(&t, &x, &x, 1e-6, 3 * p).unwrap();
        assert_eq!(rt.members().collect::<Vec<_>>(), vec![p as i64, 2 * p as i64, 3 * p as i64]);
    }

    #[test]
    fn return_times_full_ball_and_syndetic_golden() {
        let t = Nilrotation::exact(GroupElement::new(rat(1, 3), rat(1, 4), rat(1, 5)));
        assert_eq!(return_times(&t, &HeisPoint::identity(), &HeisPoint::identity(), 0.6, 50).unwrap().count(), 50);
        let g = Nilrotation::from_turns(golden(), Turn::ZERO, Turn::ZERO);
        let e = HeisPoint::identity();
        let r = return_times(&g, &e, &e, 0.05, 20_000).unwrap();
        assert!(!r.is_empty());
        assert!(matches!(syndeticity_gap(&r), Syndeticity::Gap(_)));
    }

    #[test]
    fn quadratic_small_eps_controls_clean() {
        let rep = sa_quadratic_experiment(&TorusPoint::Approx(golden()), 2, 4, 1e-2, 1_000_000).unwrap();
        assert!(rep.controls_clean);
        assert_eq!(rep.grid.len(), 16);
        let origin = rep.witnessed.iter().find(|w| w.y == ["0/1".to_string(), "0/1".to_string()]);
        assert!(origin.is_some());
        let lat = |v: &str| crate::exact::parse_rat(v).unwrap();
        for w in &rep.witnessed {
            assert!((lat(&w.y[0]) * int(2)).is_integer() && (lat(&w.y[1]) * int(8)).is_integer());
        }
    }
}
