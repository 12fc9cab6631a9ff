//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Error;

pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q`, a bare integer, or a finite decimal such as `-0.125`.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = whole.starts_with('-');
        let w: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rat::new(w * &den + f, den);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// Always `p/q`, including integers (`3/1`), so column widths never depend on value class.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn floor(r: &Rat) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Fractional part in [0,1).
pub fn frac(r: &Rat) -> Rat {
    r - Rat::from_integer(floor(r))
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// C(n,k) = n(n-1)...(n-k+1)/k!, valid for every integer n.
pub fn binom(n: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Torus distance min(|x-y| mod 1, 1 - ...) for exact values.
pub fn torus_dist(x: &Rat, y: &Rat) -> Rat {
    let d = frac(&(x - y));
    let e = Rat::one() - &d;
    if d < e {
        d
    } else {
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("3/12").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert_eq!(parse_rat("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rat(".5").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("1.").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn format_keeps_denominator() {
        assert_eq!(fmt_rat(&int(3)), "3/1");
        assert_eq!(fmt_rat(&rat(-2, 4)), "-1/2");
    }

    #[test]
    fn floor_and_frac_negative() {
        assert_eq!(floor(&rat(-1, 3)), BigInt::from(-1));
        assert_eq!(frac(&rat(-1, 3)), rat(2, 3));
    }

    #[test]
    fn binomial_extends_to_negative() {
        // C(-1,k) = (-1)^k
        for k in 0..6 {
            let want = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(binom(&BigInt::from(-1), k), BigInt::from(want));
        }
        assert_eq!(binom(&BigInt::from(-3), 2), BigInt::from(6));
        assert_eq!(binom(&BigInt::from(5), 7), BigInt::zero());
    }

    #[test]
    fn torus_distance_wraps() {
        assert_eq!(torus_dist(&rat(1, 10), &rat(9, 10)), rat(1, 5));
        assert_eq!(torus_dist(&int(3), &rat(1, 2)), rat(1, 2));
    }
}
