//! Seeded random inputs. All draws happen sequentially before any parallel
//! work so outputs do not depend on the worker count.

use nildyn_core::exact::{binom, is_integral, Rat};
use nildyn_core::nilpoly::Group;
use nildyn_core::{GroupElement, HeisFiltration, PolySeq};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// p/q with 1 <= q <= den_max and |p| <= 3q.
pub fn rational(rng: &mut SeededRng, den_max: u64) -> Rat {
    let q = rng.gen_range(1..=den_max as i64);
    let p = rng.gen_range(-3 * q..=3 * q);
    Rat::new(p.into(), q.into())
}

pub fn element(rng: &mut SeededRng, den_max: u64) -> GroupElement {
    GroupElement::new(rational(rng, den_max), rational(rng, den_max), rational(rng, den_max))
}

/// An element with g^n in Gamma for some drawn n <= q, shifted by a random
/// lattice element.
pub fn q_rational(rng: &mut SeededRng, q: u64) -> GroupElement {
    let n = rng.gen_range(1..=q as i64);
    let a = Rat::new(rng.gen_range(-2 * n..=2 * n).into(), n.into());
    let b = Rat::new(rng.gen_range(-2 * n..=2 * n).into(), n.into());
    with_central_solution(rng, a, b, n).expect("a, b in (1/n)Z")
}

/// (a, b, c) with n c + C(n,2) a b in Z, i.e. g^n in Gamma; None unless n a, n b are integers.
fn with_central_solution(rng: &mut SeededRng, a: Rat, b: Rat, n: i64) -> Option<GroupElement> {
    let nb = Rat::from_integer(n.into());
    if !is_integral(&(&a * &nb)) || !is_integral(&(&b * &nb)) {
        return None;
    }
    let k = Rat::from_integer(rng.gen_range(-2 * n..=2 * n).into());
    let c = (k - Rat::from_integer(binom(&BigInt::from(n), 2)) * &a * &b) / nb;
    Some(GroupElement::new(a, b, c))
}

/// Random coefficients of denominator <= den_max over one of the degree <= 2
/// filtrations (lower central series, the split-0 variant, or lower degree).
pub fn poly(rng: &mut SeededRng, den_max: u64) -> PolySeq {
    let filt = match rng.gen_range(0..6) {
        0 => HeisFiltration::for_degree(0),
        1 => HeisFiltration::for_degree(1),
        2 => HeisFiltration::new(0, 2).expect("split 0 is valid"),
        _ => HeisFiltration::lower_central(),
    };
    let d = filt.degree as usize;
    let coeffs = (0..=d)
        .map(|i| {
            let g = element(rng, den_max);
            let central = i > filt.split as usize;
            if central {
                GroupElement::central(g.c)
            } else {
                g
            }
        })
        .collect();
    PolySeq::new(filt, coeffs).expect("coefficients drawn inside their levels")
}

/// A lower-central-series sequence whose values at 0, 1, 2 are all q-rational,
/// for a drawn q <= q_max.
pub fn rational_valued_poly(rng: &mut SeededRng, q_max: u64) -> (PolySeq, u64) {
    loop {
        let q = rng.gen_range(1..=q_max);
        let v0 = q_rational(rng, q);
        let v1 = q_rational(rng, q);
        // a_2 is central, so the abelian part of P(2) is forced.
        let [a0, b0, _] = v0.coords();
        let [a1, b1, _] = v1.coords();
        let two = Rat::from_integer(2.into());
        let (a2, b2) = (&two * a1 - a0, &two * b1 - b0);
        let n = rng.gen_range(1..=q as i64);
        let Some(v2) = with_central_solution(rng, a2, b2, n) else { continue };
        let c0 = v0.clone();
        let c1 = v0.inv().mul(&v1);
        let c2 = c0.mul(&c1.pow(&BigInt::from(2))).inv().mul(&v2);
        let p = PolySeq::new(HeisFiltration::lower_central(), vec![c0, c1, c2]).expect("a_2 central");
        return (p, q);
    }
}
