//! A set A with A ∪ (A - 1) = N that is multiplicatively thick in no coset
//! I * N_{N,1}. Everything is decided from the binary expansion of n.
//!
//! R0 = union of [4^k, 2*4^k), R1 = union of [2*4^k, 4^(k+1)),
//! B = (R0 ∩ evens) ∪ (R1 ∩ odds), B' = B minus {4^k - 1 : k >= 1}, A = N \ B'.

use bitvec::prelude::*;
use rayon::prelude::*;
use serde::Serialize;

use crate::setalgebra::{find_thick_dilate, CongruenceCoset, IntWindowSet};
use crate::Error;

fn check(n: u64) -> Result<u64, Error> {
    if n == 0 {
        return Err(Error::Domain("membership is defined for n >= 1".into()));
    }
    Ok(n)
}

#[inline]
fn r0(n: u64) -> bool {
    (63 - n.leading_zeros()) % 2 == 0
}

#[inline]
fn four_pow_minus_one(n: u64) -> bool {
    let m = n.wrapping_add(1);
    n >= 3 && m.is_power_of_two() && m.trailing_zeros() % 2 == 0
}

#[inline]
fn b(n: u64) -> bool {
    r0(n) == (n % 2 == 0)
}

#[inline]
pub fn member_a(n: u64) -> bool {
    !b(n) || four_pow_minus_one(n)
}

pub fn in_r0(n: u64) -> Result<bool, Error> {
    check(n).map(r0)
}

pub fn in_r1(n: u64) -> Result<bool, Error> {
    check(n).map(|n| !r0(n))
}

pub fn in_b(n: u64) -> Result<bool, Error> {
    check(n).map(b)
}

pub fn in_bprime(n: u64) -> Result<bool, Error> {
    check(n).map(|n| !member_a(n))
}

pub fn in_a(n: u64) -> Result<bool, Error> {
    check(n).map(member_a)
}

/// A on [1, horizon].
pub fn window(horizon: u64) -> Result<IntWindowSet, Error> {
    IntWindowSet::from_fn(1, horizon as i64, |n| member_a(n as u64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub horizon: u64,
    pub holds: bool,
    pub first_failure: Option<u64>,
}

/// Whether every n in [1, horizon] lies in A or A - 1, for any oracle.
pub fn verify_cover_with(horizon: u64, a: impl Fn(u64) -> bool + Sync) -> CoverReport {
    let first_failure = (1..=horizon).into_par_iter().find_first(|&n| !a(n) && !a(n + 1));
    CoverReport { horizon, holds: first_failure.is_none(), first_failure }
}

pub fn verify_cover(horizon: u64) -> CoverReport {
    verify_cover_with(horizon, member_a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Dilates n_i in N_{N,1}; every m of the universe has I*m*n_i in B' for some i.
    pub dilates: Vec<u64>,
    pub universe_max_m: u64,
    pub universe_size: usize,
    pub uncovered: usize,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refutation {
    pub i: u64,
    pub n: u64,
    pub f: Vec<u64>,
    pub horizon: u64,
    pub m_max: u64,
    /// Least m in N_{N,1} with I*m*F inside A, if any.
    pub witness: Option<i64>,
    pub refuted: bool,
    pub certificate: Certificate,
    /// The certificate's dilate set has no thick dilate on its universe.
    pub duality_consistent: bool,
}

pub const CANDIDATE_SPAN: u64 = 64;

/// Greedy cover of U = {m in N_{N,1} : I*m*C <= horizon}, C = 64N + 1, by
/// sets {m : I*m*c in B'} for candidates c in N_{N,1} ∩ [1, C].
fn greedy_certificate(a: &IntWindowSet, coset: &CongruenceCoset, horizon: u64) -> Certificate {
    let (i, n) = (coset.i, coset.n);
    let c_max = CANDIDATE_SPAN * n + 1;
    let m_top = horizon / (i * c_max);
    let universe: Vec<u64> = (1..=m_top).step_by(n as usize).collect();
    let candidates: Vec<u64> = (1..=c_max).step_by(n as usize).collect();
    let covers: Vec<BitVec<u64, Lsb0>> = candidates
        .par_iter()
        .map(|&c| universe.iter().map(|&m| !a.get((i * m * c) as i64)).collect())
        .collect();
    let mut uncovered: BitVec<u64, Lsb0> = BitVec::repeat(true, universe.len());
    let mut dilates = Vec::new();
    while uncovered.any() {
        let (best, gain) = covers
            .iter()
            .enumerate()
            .map(|(k, cov)| {
                let gain = cov
                    .as_raw_slice()
                    .iter()
                    .zip(uncovered.as_raw_slice())
                    .map(|(x, y)| (x & y).count_ones() as usize)
                    .sum::<usize>();
                (k, gain)
            })
            .max_by_key(|&(k, g)| (g, std::cmp::Reverse(k)))
            .expect("nonempty pool");
        if gain == 0 {
            break;
        }
        dilates.push(candidates[best]);
        let raw = covers[best].as_raw_slice();
        for (u, c) in uncovered.as_raw_mut_slice().iter_mut().zip(raw) {
            *u &= !c;
        }
    }
    let left = uncovered.count_ones();
    dilates.sort_unstable();
    Certificate {
        dilates,
        universe_max_m: universe.last().copied().unwrap_or(0),
        universe_size: universe.len(),
        uncovered: left,
        complete: left == 0 && !universe.is_empty(),
    }
}

/// Searches for a dilate of F = {1, N+1, ..., (F_len-1)N+1} inside A along
/// I * N_{N,1}, and builds the dual B'-syndeticity certificate.
pub fn thickness_refutation_in(
    a: &IntWindowSet,
    i: u64,
    n: u64,
    f_len: u64,
) -> Result<Refutation, Error> {
    let coset = CongruenceCoset::naturals(i, n)?;
    if f_len == 0 {
        return Err(Error::EmptyInput);
    }
    let horizon = a.hi() as u64;
    let f: Vec<u64> = (0..f_len).map(|j| j * n + 1).collect();
    let fmax = *f.last().unwrap();
    let m_max = horizon / (i * fmax);
    if m_max == 0 {
        return Err(Error::InsufficientWindow { need: (i * fmax) as i128, have: a.hi() });
    }
    let witness = find_thick_dilate(a, &coset, &f, m_max)?;
    let certificate = greedy_certificate(a, &coset, horizon);
    let duality_consistent = if certificate.complete {
        find_thick_dilate(a, &coset, &certificate.dilates, certificate.universe_max_m)?.is_none()
    } else {
        true
    };
    Ok(Refutation {
        i,
        n,
        f,
        horizon,
        m_max,
        refuted: witness.is_none(),
        witness,
        certificate,
        duality_consistent,
    })
}

pub fn thickness_refutation(i: u64, n: u64, f_len: u64, horizon: u64) -> Result<Refutation, Error> {
    thickness_refutation_in(&window(horizon)?, i, n, f_len)
}

/// |{4^k - 1} ∩ I N_{N,1} ∩ [1, h]|.
pub fn carveout_count(i: u64, n: u64, h: u64) -> u64 {
    let coset = CongruenceCoset { i, n, flavor: crate::setalgebra::Flavor::Naturals };
    (1..32)
        .map(|k| (1u64 << (2 * k)) - 1)
        .take_while(|&v| v <= h)
        .filter(|&v| coset.contains(v as i64))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert_eq!(in_a(3), Ok(true));
        assert_eq!((in_r1(3), in_b(3), in_bprime(3)), (Ok(true), Ok(true), Ok(false)));
        assert_eq!(in_a(4), Ok(false));
        assert_eq!((in_r0(4), in_b(4)), (Ok(true), Ok(true)));
        assert_eq!(in_a(5), Ok(true));
        assert_eq!(in_b(5), Ok(false));
        assert_eq!(in_a(1), Ok(true));
        assert!(in_a(0).is_err());
    }

    #[test]
    fn matches_interval_definition() {
        // R0 as a literal union of dyadic intervals
        let lit_r0 = |n: u64| (0..32).any(|k| (1u64 << (2 * k)) <= n && n < (1u64 << (2 * k + 1)));
        let carve = |n: u64| (1..32).any(|k| (1u64 << (2 * k)) - 1 == n);
        for n in 1..5000u64 {
            let in_b_lit = (lit_r0(n) && n % 2 == 0) || (!lit_r0(n) && n % 2 == 1);
            assert_eq!(in_r0(n).unwrap(), lit_r0(n));
            assert_eq!(in_a(n).unwrap(), !(in_b_lit && !carve(n)), "n={n}");
        }
    }

    #[test]
    fn cover_holds_and_mutant_fails() {
        assert!(verify_cover(1 << 20).holds);
        assert!(verify_cover(1).holds);
        let mutant = |n: u64| !b(n);
        let r = verify_cover_with(1 << 10, mutant);
        assert_eq!(r.first_failure, Some(3));
        assert!(!mutant(15) && !mutant(16));
    }

    #[test]
    fn thick_dilate_in_counterexample_window() {
        let a = window(1 << 20).unwrap();
        let c = CongruenceCoset::naturals(1, 1).unwrap();
        let scan = (1..=1000i64).find(|&m| member_a(m as u64) && member_a(2 * m as u64));
        assert_eq!(find_thick_dilate(&a, &c, &[1, 2], 1000).unwrap(), scan);
    }

    #[test]
    fn refutation_small_case() {
        let r = thickness_refutation(1, 1, 4, 1 << 16).unwrap();
        assert!(r.refuted);
        assert!(r.certificate.complete && r.duality_consistent);
        assert!(r.certificate.dilates.iter().all(|&d| d >= 1));
    }

    #[test]
    fn full_set_positive_control() {
        let full = IntWindowSet::full(1, 1 << 12).unwrap();
        let r = thickness_refutation_in(&full, 1, 2, 3).unwrap();
        assert_eq!(r.witness, Some(1));
        assert!(!r.certificate.complete);
    }

    #[test]
    fn carveout_counts_are_logarithmic() {
        for i in 1..=8 {
            for n in 1..=8 {
                let h = 1u64 << 24;
                assert!(carveout_count(i, n, h) <= 13);
            }
        }
        assert_eq!(carveout_count(1, 1, 100), 3);
        assert_eq!(carveout_count(3, 1, 100), 3);
        assert_eq!(carveout_count(1, 2, 100), 3);
    }
}
