//! 128-bit fixed-point angles: `Turn(raw)` is the point raw/2^128 of R/Z.
//!
//! Addition and integer scaling wrap, which is exactly reduction mod 1, so an
//! orbit point x + n*alpha carries only the truncation error of alpha itself
//! (at most |n| * 2^-128).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::exact::{self, Rat};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Turn(pub u128);

const TWO_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

#[allow(clippy::should_implement_trait)]
impl Turn {
    pub const ZERO: Turn = Turn(0);

    pub fn from_f64(x: f64) -> Turn {
        let f = x - x.floor();
        // f < 1 but f * 2^128 may round to 2^128; saturate then wrap.
        Turn((f * TWO_128) as u128)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TWO_128
    }

    /// floor(frac(r) * 2^128).
    pub fn from_rat(r: &Rat) -> Turn {
        let f = exact::frac(r);
        let scaled: BigInt = (f.numer() << 128u32).div_floor(f.denom());
        Turn(scaled.to_u128().unwrap_or(u128::MAX))
    }

    /// The dyadic rational raw/2^128 in [0,1).
    pub fn to_rat(self) -> Rat {
        Rat::new(BigInt::from(self.0), BigInt::from(1u8) << 128u32)
    }

    /// Parses a decimal literal in [0,1) without going through f64.
    pub fn from_decimal(s: &str) -> Result<Turn, Error> {
        let s = s.trim();
        let digits = s
            .strip_prefix("0.")
            .or_else(|| s.strip_prefix('.'))
            .ok_or_else(|| Error::Parse(format!("expected decimal in [0,1): {s:?}")))?;
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("expected decimal in [0,1): {s:?}")));
        }
        let num: BigUint = digits.parse().map_err(|_| Error::Parse(s.to_string()))?;
        let den = num_traits::pow(BigUint::from(10u8), digits.len());
        let raw = (num << 128u32) / den;
        Ok(Turn(raw.to_u128().unwrap_or(u128::MAX)))
    }

    #[inline]
    pub fn add(self, o: Turn) -> Turn {
        Turn(self.0.wrapping_add(o.0))
    }

    #[inline]
    pub fn sub(self, o: Turn) -> Turn {
        Turn(self.0.wrapping_sub(o.0))
    }

    #[inline]
    pub fn neg(self) -> Turn {
        Turn(self.0.wrapping_neg())
    }

    #[inline]
    pub fn mul_i128(self, n: i128) -> Turn {
        Turn(self.0.wrapping_mul(n as u128))
    }

    /// Raw torus distance in units of 2^-128.
    #[inline]
    pub fn dist_raw(self, o: Turn) -> u128 {
        let d = self.0.wrapping_sub(o.0);
        d.min(d.wrapping_neg())
    }

    pub fn dist(self, o: Turn) -> f64 {
        self.dist_raw(o) as f64 / TWO_128
    }
}

/// Integer threshold t with `dist_raw < t` iff `dist < eps`, computed exactly.
pub fn eps_threshold(eps: f64) -> u128 {
    if eps.is_nan() || eps <= 0.0 {
        return 0;
    }
    if eps > 0.5 {
        return u128::MAX;
    }
    let e = Rat::from_float(eps).expect("finite eps");
    let scaled = e * Rat::from_integer(BigInt::from(1u8) << 128u32);
    let c = -(-scaled.numer()).div_floor(scaled.denom());
    if c.is_zero() {
        return 0;
    }
    c.to_u128().unwrap_or(u128::MAX)
}
