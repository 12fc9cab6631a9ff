//! Polynomial sequences in nilpotent groups with a lattice, instantiated on
//! the rational Heisenberg group with its integer points.
//!
//! Algorithms are written against [`Group`], [`LatticeGroup`] and
//! [`Filtration`]; only the Heisenberg model ships.

mod bound;
mod heisenberg;
mod poly;

pub use bound::{abelian_modulus, orbit_modulus, periodic_modulus, q_prime_expr, NatExpr};
pub use heisenberg::{GroupElement, HeisFiltration};
pub use poly::{
    is_orbit_periodic, orbit_periodic_direct, telescoped_diff, verify_rational_orbit_periodic,
    OrbitPeriodReport, PolySeq,
};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};

pub trait Group: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn identity() -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Self;

    fn pow(&self, n: &BigInt) -> Self {
        let mut base = if n.is_negative() { self.inv() } else { self.clone() };
        let mut e = n.abs();
        let mut acc = Self::identity();
        while e.is_positive() {
            if e.bit(0) {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1u32;
        }
        acc
    }

    /// [g, h] = g^-1 h^-1 g h.
    fn commutator(&self, h: &Self) -> Self {
        self.inv().mul(&h.inv()).mul(self).mul(h)
    }
}

pub trait LatticeGroup: Group {
    fn in_lattice(&self) -> bool;

    /// Canonical representative of the coset g * Gamma.
    fn coset_rep(&self) -> Self;

    /// Least n >= 1 with g^n in Gamma when cheaply known.
    fn lattice_order(&self) -> Option<BigUint> {
        None
    }
}

/// Nested subgroups G^(0) >= G^(1) >= ... >= G^(d+1) = {e}.
pub trait Filtration<G>: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn degree(&self) -> u32;
    fn contains(&self, level: u32, g: &G) -> bool;
}

/// Least n <= q_max with g^n in Gamma.
pub fn rationality_order<G: LatticeGroup>(g: &G, q_max: u64) -> Option<u64> {
    if let Some(n) = g.lattice_order() {
        return n.to_u64().filter(|&n| n <= q_max);
    }
    let mut acc = g.clone();
    for n in 1..=q_max {
        if acc.in_lattice() {
            return Some(n);
        }
        acc = acc.mul(g);
    }
    None
}

/// (Q!)^{d(d+1)/2}: every product of Q-rational elements in a d-step group is
/// rational of this order.
pub fn q_prime_bound(q: u64, d: u64) -> BigUint {
    let fact = (1..=q).fold(BigUint::one(), |acc, i| acc * i);
    num_traits::pow(fact, (d * (d + 1) / 2) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_prime_examples() {
        assert_eq!(q_prime_bound(1, 2), BigUint::from(1u8));
        assert_eq!(q_prime_bound(2, 2), BigUint::from(8u8));
        assert_eq!(q_prime_bound(3, 1), BigUint::from(6u8));
        assert_eq!(q_prime_bound(6, 2), BigUint::from(720u64.pow(3)));
    }
}
