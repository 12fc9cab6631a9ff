use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Filtration, Group, LatticeGroup};
use crate::exact::{self, Rat};

/// (a, b, c) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl GroupElement {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        GroupElement { a, b, c }
    }

    pub fn central(c: Rat) -> Self {
        GroupElement { a: Rat::zero(), b: Rat::zero(), c }
    }

    pub fn is_central(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Closed form (na, nb, nc + C(n,2) ab).
    pub fn power(&self, n: &BigInt) -> Self {
        let nr = Rat::from_integer(n.clone());
        let c2 = Rat::from_integer(exact::binom(n, 2));
        GroupElement {
            a: &self.a * &nr,
            b: &self.b * &nr,
            c: &self.c * &nr + c2 * &self.a * &self.b,
        }
    }

    pub fn power_i64(&self, n: i64) -> Self {
        self.power(&BigInt::from(n))
    }

    fn lattice_at(&self, n: &BigInt) -> bool {
        self.power(n).in_lattice()
    }

    pub fn coords(&self) -> [&Rat; 3] {
        [&self.a, &self.b, &self.c]
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            exact::fmt_rat(&self.a),
            exact::fmt_rat(&self.b),
            exact::fmt_rat(&self.c)
        )
    }
}

impl Group for GroupElement {
    fn identity() -> Self {
        GroupElement::central(Rat::zero())
    }

    fn mul(&self, o: &Self) -> Self {
        GroupElement {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            c: &self.c + &o.c + &self.a * &o.b,
        }
    }

    fn inv(&self) -> Self {
        GroupElement {
            a: -&self.a,
            b: -&self.b,
            c: &self.a * &self.b - &self.c,
        }
    }

    fn pow(&self, n: &BigInt) -> Self {
        self.power(n)
    }
}

fn small_factors(mut n: u64, out: &mut Vec<u64>) {
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
}

impl LatticeGroup for GroupElement {
    fn in_lattice(&self) -> bool {
        self.coords().iter().all(|r| exact::is_integral(r))
    }

    /// Right-multiply by (-floor a, -floor b, 0), then by a central integer.
    fn coset_rep(&self) -> Self {
        let fb = Rat::from_integer(exact::floor(&self.b));
        GroupElement {
            a: exact::frac(&self.a),
            b: exact::frac(&self.b),
            c: exact::frac(&(&self.c - &self.a * fb)),
        }
    }

    /// n0 = 2 den(a) den(b) den(c) lcm(den a, den b) has g^n0 in Gamma, and the
    /// admissible exponents form a subgroup, so stripping primes from n0 while
    /// g^n stays in Gamma lands on the order.
    fn lattice_order(&self) -> Option<BigUint> {
        let dens: Vec<u64> = self
            .coords()
            .iter()
            .map(|r| r.denom().to_u64())
            .collect::<Option<_>>()?;
        let mut primes = vec![2];
        for d in &dens {
            small_factors(*d, &mut primes);
            small_factors(*d, &mut primes);
        }
        let mut n: BigInt = primes.iter().fold(BigInt::one(), |acc, &p| acc * p);
        debug_assert!(self.lattice_at(&n));
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            let p = BigInt::from(p);
            while (&n % &p).is_zero() && self.lattice_at(&(&n / &p)) {
                n /= &p;
            }
        }
        n.abs().to_biguint()
    }
}

/// G^(i) = G for i <= split, the center for split < i <= degree, {e} beyond.
///
/// split = 1, degree = 2 is the lower central series; split = 0 separates
/// G^(0) from G^(1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeisFiltration {
    pub split: u32,
    pub degree: u32,
}

impl HeisFiltration {
    pub fn new(split: u32, degree: u32) -> Option<Self> {
        let ok = split == 0 || 2 * split <= degree;
        ok.then_some(HeisFiltration { split, degree })
    }

    pub fn lower_central() -> Self {
        HeisFiltration { split: 1, degree: 2 }
    }

    /// The default filtration for a given degree: constants, split at 0, or
    /// the lower central series.
    pub fn for_degree(degree: u32) -> Self {
        match degree {
            0 | 1 => HeisFiltration { split: 0, degree },
            d => HeisFiltration { split: 1, degree: d },
        }
    }
}

impl Filtration<GroupElement> for HeisFiltration {
    fn degree(&self) -> u32 {
        self.degree
    }

    fn contains(&self, level: u32, g: &GroupElement) -> bool {
        if level <= self.split {
            true
        } else if level <= self.degree {
            g.is_central()
        } else {
            g == &GroupElement::identity()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::nilpoly::{q_prime_bound, rationality_order};

    fn g(a: Rat, b: Rat, c: Rat) -> GroupElement {
        GroupElement::new(a, b, c)
    }

    fn naive_pow(x: &GroupElement, n: i64) -> GroupElement {
        let step = if n < 0 { x.inv() } else { x.clone() };
        (0..n.abs()).fold(GroupElement::identity(), |acc, _| acc.mul(&step))
    }

    #[test]
    fn power_examples() {
        let e = GroupElement::identity();
        assert_eq!(e.power_i64(17), e);
        let h = g(rat(1, 2), rat(1, 2), int(0));
        assert_eq!(h.power_i64(8), g(int(4), int(4), int(7)));
        assert_eq!(naive_pow(&h, 8), g(int(4), int(4), int(7)));
        assert_eq!(g(int(1), int(0), int(0)).power_i64(-1), g(int(-1), int(0), int(0)));
    }

    #[test]
    fn closed_form_matches_repeated_product() {
        let x = g(rat(2, 3), rat(-5, 7), rat(1, 11));
        for n in -12..=12 {
            assert_eq!(x.power_i64(n), naive_pow(&x, n), "n={n}");
            assert_eq!(Group::pow(&x, &BigInt::from(n)), naive_pow(&x, n));
        }
    }

    #[test]
    fn default_square_and_multiply_agrees() {
        #[derive(Clone, PartialEq, Debug)]
        struct Wrap(GroupElement);
        impl Group for Wrap {
            fn identity() -> Self {
                Wrap(GroupElement::identity())
            }
            fn mul(&self, o: &Self) -> Self {
                Wrap(self.0.mul(&o.0))
            }
            fn inv(&self) -> Self {
                Wrap(self.0.inv())
            }
        }
        let x = g(rat(3, 4), rat(1, 6), rat(-2, 5));
        for n in [-9i64, -1, 0, 1, 2, 13, 64] {
            assert_eq!(Wrap(x.clone()).pow(&BigInt::from(n)).0, x.power_i64(n));
        }
    }

    #[test]
    fn commutators_are_central() {
        let x = g(rat(1, 3), rat(2, 5), rat(7, 2));
        let y = g(rat(-4, 9), rat(1, 2), rat(0, 1));
        let k = x.commutator(&y);
        assert!(k.is_central());
        assert_eq!(k.c, &x.a * &y.b - &x.b * &y.a);
    }

    #[test]
    fn rationality_examples() {
        assert_eq!(rationality_order(&g(int(0), int(0), rat(1, 3)), 10), Some(3));
        assert_eq!(rationality_order(&g(rat(1, 2), rat(1, 2), int(0)), 10), Some(8));
        assert_eq!(rationality_order(&g(rat(1, 2), rat(1, 2), int(0)), 7), None);
        assert_eq!(rationality_order(&GroupElement::identity(), 1), Some(1));
    }

    #[test]
    fn lattice_order_matches_scan() {
        for (a, b, c) in [(1, 2, 3), (2, 3, 5), (4, 6, 1), (5, 10, 12), (7, 7, 7), (1, 1, 4)] {
            let x = g(rat(1, a), rat(1, b), rat(1, c));
            let fast = x.lattice_order().unwrap().to_u64().unwrap();
            let scan = (1..).find(|&n| naive_pow(&x, n).in_lattice()).unwrap() as u64;
            assert_eq!(fast, scan, "{x}");
        }
    }

    #[test]
    fn q_prime_bound_small_case() {
        // (1/2,0,0) and (0,1/2,0) are 2-rational; their product (1/2,1/2,1/4)
        // needs n(n+1)/8 integral, first at n = 8 = q_prime(2, 2).
        let x = g(rat(1, 2), int(0), int(0));
        let y = g(int(0), rat(1, 2), int(0));
        let q = x.mul(&y).lattice_order().unwrap();
        assert_eq!(q, BigUint::from(8u8));
        assert!((q_prime_bound(2, 2) % q).is_zero());
    }

    #[test]
    fn coset_rep_examples() {
        let x = g(rat(7, 2), rat(-3, 2), rat(5, 4));
        let r = x.coset_rep();
        assert_eq!(r, g(rat(1, 2), rat(1, 2), rat(1, 4)));
        let gamma = g(int(2), int(-5), int(3));
        assert_eq!(x.mul(&gamma).coset_rep(), r);
        assert_eq!(r.coset_rep(), r);
    }

    #[test]
    fn filtration_levels() {
        let f = HeisFiltration::lower_central();
        let x = g(rat(1, 2), int(0), int(0));
        let z = GroupElement::central(rat(1, 3));
        assert!(f.contains(0, &x) && f.contains(1, &x) && !f.contains(2, &x));
        assert!(f.contains(2, &z) && !f.contains(3, &z));
        let s = HeisFiltration::new(0, 3).unwrap();
        assert!(s.contains(0, &x) && !s.contains(1, &x) && s.contains(3, &z));
        assert!(HeisFiltration::new(2, 3).is_none());
        assert!(HeisFiltration::new(2, 4).is_some());
    }

    #[test]
    fn filtration_commutator_property() {
        let els = [
            g(rat(1, 2), rat(2, 3), rat(1, 5)),
            g(rat(-3, 4), rat(1, 7), int(2)),
            GroupElement::central(rat(5, 6)),
            GroupElement::identity(),
        ];
        for f in [HeisFiltration::lower_central(), HeisFiltration::new(0, 2).unwrap(), HeisFiltration::new(2, 5).unwrap()] {
            for i in 0..=f.degree + 1 {
                for j in 0..=f.degree + 1 {
                    for x in els.iter().filter(|x| f.contains(i, x)) {
                        for y in els.iter().filter(|y| f.contains(j, y)) {
                            assert!(f.contains(i + j, &x.commutator(y)), "{f:?} {i} {j}");
                        }
                    }
                }
            }
        }
    }
}
