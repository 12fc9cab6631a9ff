//! Symbolic naturals for the constructive periodicity moduli, which are
//! iterated factorials far too large to expand.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatExpr {
    Lit(BigUint),
    Factorial(Box<NatExpr>),
    Pow(Box<NatExpr>, u32),
    Product(Vec<NatExpr>),
}

/// min(value, cap), tagged by whether the cap was hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Capped {
    Exact(BigUint),
    AtLeast(BigUint),
}

const FOLD_FACTORIAL: u64 = 30;
const FOLD_BITS: u64 = 4096;

impl NatExpr {
    pub fn lit(n: u64) -> Self {
        NatExpr::Lit(BigUint::from(n))
    }

    fn as_lit(&self) -> Option<&BigUint> {
        match self {
            NatExpr::Lit(n) => Some(n),
            _ => None,
        }
    }

    pub fn factorial(e: NatExpr) -> Self {
        match e.as_lit().and_then(|n| n.to_u64()) {
            Some(n) if n <= FOLD_FACTORIAL => NatExpr::Lit((1..=n).fold(BigUint::one(), |a, i| a * i)),
            _ => NatExpr::Factorial(Box::new(e)),
        }
    }

    pub fn pow(e: NatExpr, k: u32) -> Self {
        match e.as_lit() {
            Some(n) if n.bits() * k as u64 <= FOLD_BITS => NatExpr::Lit(num_traits::pow(n.clone(), k as usize)),
            _ if k == 1 => e,
            _ => NatExpr::Pow(Box::new(e), k),
        }
    }

    pub fn product(parts: Vec<NatExpr>) -> Self {
        let mut lit = BigUint::one();
        let mut rest = Vec::new();
        for p in parts {
            match p {
                NatExpr::Lit(n) => lit *= n,
                NatExpr::Product(inner) => rest.extend(inner),
                other => rest.push(other),
            }
        }
        if rest.is_empty() {
            return NatExpr::Lit(lit);
        }
        if !lit.is_one() {
            rest.insert(0, NatExpr::Lit(lit));
        }
        if rest.len() == 1 {
            return rest.pop().unwrap();
        }
        NatExpr::Product(rest)
    }

    pub fn capped(&self, cap: &BigUint) -> Capped {
        let clamp = |v: BigUint| if &v >= cap { Capped::AtLeast(cap.clone()) } else { Capped::Exact(v) };
        match self {
            NatExpr::Lit(n) => clamp(n.clone()),
            NatExpr::Factorial(e) => match e.capped(cap) {
                Capped::AtLeast(_) => Capped::AtLeast(cap.clone()),
                Capped::Exact(x) => {
                    let mut acc = BigUint::one();
                    let mut i = BigUint::one();
                    while i <= x {
                        acc *= &i;
                        if &acc >= cap {
                            return Capped::AtLeast(cap.clone());
                        }
                        i += 1u8;
                    }
                    clamp(acc)
                }
            },
            NatExpr::Pow(e, k) => match (e.capped(cap), k) {
                (_, 0) => clamp(BigUint::one()),
                (Capped::AtLeast(_), _) => Capped::AtLeast(cap.clone()),
                (Capped::Exact(x), k) => {
                    let mut acc = BigUint::one();
                    for _ in 0..*k {
                        acc *= &x;
                        if &acc >= cap {
                            return Capped::AtLeast(cap.clone());
                        }
                    }
                    clamp(acc)
                }
            },
            NatExpr::Product(ps) => {
                let mut acc = BigUint::one();
                for p in ps {
                    match p.capped(cap) {
                        Capped::AtLeast(_) => return Capped::AtLeast(cap.clone()),
                        Capped::Exact(x) => acc *= x,
                    }
                    if &acc >= cap {
                        return Capped::AtLeast(cap.clone());
                    }
                }
                clamp(acc)
            }
        }
    }

    /// The value when it has at most `max_bits` bits.
    pub fn try_value(&self, max_bits: u64) -> Option<BigUint> {
        match self.capped(&(BigUint::one() << max_bits)) {
            Capped::Exact(v) => Some(v),
            Capped::AtLeast(_) => None,
        }
    }

    pub fn ge_value(&self, v: &BigUint) -> bool {
        v.is_zero() || matches!(self.capped(v), Capped::AtLeast(_))
    }

    /// min(v_p(value), cap) via Legendre's formula; x >= p*cap forces v_p(x!) >= cap.
    pub fn valuation(&self, p: u64, cap: u64) -> u64 {
        match self {
            NatExpr::Lit(n) => {
                let mut n = n.clone();
                let mut v = 0;
                while v < cap && !n.is_zero() && (&n % p).is_zero() {
                    n /= p;
                    v += 1;
                }
                v
            }
            NatExpr::Product(ps) => ps.iter().fold(0u64, |acc, e| (acc + e.valuation(p, cap)).min(cap)),
            NatExpr::Pow(e, k) => e.valuation(p, cap).saturating_mul(*k as u64).min(cap),
            NatExpr::Factorial(e) => {
                let limit = BigUint::from(p) * cap;
                match e.capped(&limit) {
                    Capped::AtLeast(_) => cap,
                    Capped::Exact(x) => {
                        let mut x = x.to_u128().expect("below p*cap");
                        let mut v = 0u128;
                        while x > 0 && v < cap as u128 {
                            x /= p as u128;
                            v += x;
                        }
                        (v as u64).min(cap)
                    }
                }
            }
        }
    }

    pub fn is_divisible_by(&self, l: u64) -> bool {
        if l == 0 {
            return false;
        }
        let mut l = l;
        let mut p = 2u64;
        while l > 1 {
            if p * p > l {
                return self.valuation(l, 1) >= 1;
            }
            let mut e = 0;
            while l % p == 0 {
                l /= p;
                e += 1;
            }
            if e > 0 && self.valuation(p, e) < e {
                return false;
            }
            p += 1;
        }
        true
    }
}

impl fmt::Display for NatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atom = |e: &NatExpr, f: &mut fmt::Formatter<'_>| match e {
            NatExpr::Lit(_) => write!(f, "{e}"),
            _ => write!(f, "({e})"),
        };
        match self {
            NatExpr::Lit(n) => write!(f, "{n}"),
            NatExpr::Factorial(e) => {
                atom(e, f)?;
                f.write_str("!")
            }
            NatExpr::Pow(e, k) => {
                atom(e, f)?;
                write!(f, "^{k}")
            }
            NatExpr::Product(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// (Q!)^{d(d+1)/2}.
pub fn q_prime_expr(q: &NatExpr, d: u64) -> NatExpr {
    NatExpr::pow(NatExpr::factorial(q.clone()), (d * (d + 1) / 2) as u32)
}

/// d! Q'! with Q' = q_prime(Q, d): the abelian (central) step.
pub fn abelian_modulus(q: &NatExpr, d: u64) -> NatExpr {
    if d == 0 {
        return NatExpr::lit(1);
    }
    let dfact: u64 = (1..=d).product();
    NatExpr::product(vec![NatExpr::lit(dfact), NatExpr::factorial(q_prime_expr(q, d))])
}

/// N_0 N_1 Q'! with N_0 from degree d-1, Q' = q_prime(Q, d), N_1 = abelian(Q', d).
pub fn periodic_modulus(q: &NatExpr, d: u64) -> NatExpr {
    if d == 0 {
        return NatExpr::lit(1);
    }
    let qp = q_prime_expr(q, d);
    NatExpr::product(vec![
        periodic_modulus(q, d - 1),
        abelian_modulus(&qp, d),
        NatExpr::factorial(qp),
    ])
}

/// Period for any orbit with d+1 consecutive Q-rational values: lifts are
/// Q'-rational, the polynomial is Q''-rational, then the periodic modulus.
pub fn orbit_modulus(q: u64, d: u64) -> NatExpr {
    let q2 = q_prime_expr(&q_prime_expr(&NatExpr::lit(q), d), d);
    periodic_modulus(&q2, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn folding_and_display() {
        assert_eq!(NatExpr::factorial(NatExpr::lit(5)), NatExpr::lit(120));
        let e = NatExpr::factorial(NatExpr::lit(40));
        assert_eq!(e.to_string(), "40!");
        let p = NatExpr::product(vec![NatExpr::lit(2), NatExpr::pow(e.clone(), 3), NatExpr::lit(3)]);
        assert_eq!(p.to_string(), "6 * (40!)^3");
    }

    #[test]
    fn capped_evaluation() {
        let e = NatExpr::factorial(NatExpr::lit(40));
        let want: BigUint = (1..=40u64).fold(BigUint::one(), |a, i| a * i);
        assert_eq!(e.try_value(200), Some(want.clone()));
        assert_eq!(e.try_value(100), None);
        assert!(e.ge_value(&want));
        assert!(!e.ge_value(&(want + 1u8)));
    }

    #[test]
    fn valuations_match_expansion() {
        let e = NatExpr::product(vec![
            NatExpr::lit(12),
            NatExpr::pow(NatExpr::factorial(NatExpr::lit(35)), 2),
        ]);
        let v = e.try_value(1000).unwrap();
        for p in [2u64, 3, 5, 7, 11, 37] {
            let mut n = v.clone();
            let mut want = 0;
            while (&n % p).is_zero() {
                n /= p;
                want += 1;
            }
            assert_eq!(e.valuation(p, 1000), want, "p={p}");
        }
        assert!(e.is_divisible_by(36 * 49 * 31));
        assert!(!e.is_divisible_by(37));
    }

    #[test]
    fn huge_factorial_valuation_saturates() {
        let e = NatExpr::factorial(NatExpr::pow(NatExpr::factorial(NatExpr::lit(720)), 3));
        assert_eq!(e.valuation(2, 50), 50);
        assert!(e.is_divisible_by(1 << 40));
        assert!(e.is_divisible_by(999_983));
    }

    #[test]
    fn moduli_small_cases() {
        assert_eq!(orbit_modulus(1, 2), NatExpr::lit(2));
        assert_eq!(periodic_modulus(&NatExpr::lit(5), 0), NatExpr::lit(1));
        // d = 1: N_0 = 1, Q' = Q!, N_1 = 1! (Q'!)!, times Q'!
        assert_eq!(periodic_modulus(&NatExpr::lit(2), 1).try_value(64), Some(big(2 * 2)));
        // Q = 3: Q' = 6, N_1 = (6!)!, so N = 720 * 720!
        let p3 = periodic_modulus(&NatExpr::lit(3), 1);
        assert_eq!(p3.to_string(), "720 * 720!");
        assert_eq!(p3.valuation(719, 10), 1);
        assert!(orbit_modulus(2, 2).try_value(64).is_none());
        assert!(orbit_modulus(2, 2).is_divisible_by(8));
    }
}
