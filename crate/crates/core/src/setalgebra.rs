//! Finite-window integer sets with translation and dilation, and the
//! additive and multiplicative largeness checks built on them.
//!
//! Every verdict is relative to the window: "holds up to the horizon".

use bitvec::prelude::*;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::Error;

type Bits = BitVec<u64, Lsb0>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntWindowSet {
    lo: i64,
    hi: i64,
    bits: Bits,
}

impl IntWindowSet {
    pub fn empty(lo: i64, hi: i64) -> Result<Self, Error> {
        if lo > hi {
            return Err(Error::DegenerateWindow { lo, hi });
        }
        let len = (hi - lo + 1) as usize;
        Ok(IntWindowSet { lo, hi, bits: bitvec![u64, Lsb0; 0; len] })
    }

    pub fn full(lo: i64, hi: i64) -> Result<Self, Error> {
        let mut s = Self::empty(lo, hi)?;
        s.bits.fill(true);
        Ok(s)
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> bool) -> Result<Self, Error> {
        let mut s = Self::empty(lo, hi)?;
        for (i, mut b) in s.bits.iter_mut().enumerate() {
            *b = f(lo + i as i64);
        }
        Ok(s)
    }

    pub fn from_members(lo: i64, hi: i64, members: impl IntoIterator<Item = i64>) -> Result<Self, Error> {
        let mut s = Self::empty(lo, hi)?;
        for n in members {
            s.insert(n)?;
        }
        Ok(s)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn window_len(&self) -> usize {
        self.bits.len()
    }

    pub fn in_window(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn contains(&self, n: i64) -> Result<bool, Error> {
        if !self.in_window(n) {
            return Err(Error::OutOfWindow { n, lo: self.lo, hi: self.hi });
        }
        Ok(self.bits[(n - self.lo) as usize])
    }

    /// Caller guarantees `n` is inside the window.
    #[inline]
    pub(crate) fn get(&self, n: i64) -> bool {
        self.bits[(n - self.lo) as usize]
    }

    pub fn insert(&mut self, n: i64) -> Result<(), Error> {
        if !self.in_window(n) {
            return Err(Error::OutOfWindow { n, lo: self.lo, hi: self.hi });
        }
        self.bits.set((n - self.lo) as usize, true);
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn members(&self) -> impl Iterator<Item = i64> + '_ {
        self.bits.iter_ones().map(move |i| self.lo + i as i64)
    }

    /// Maximal runs of members as inclusive pairs.
    pub fn runs(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::new();
        for n in self.members() {
            match out.last_mut() {
                Some(r) if r.1 + 1 == n => r.1 = n,
                _ => out.push((n, n)),
            }
        }
        out
    }

    /// Same window, restricted to `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self, Error> {
        let (nlo, nhi) = (lo.max(self.lo), hi.min(self.hi));
        let mut s = Self::empty(nlo, nhi)?;
        let a = (nlo - self.lo) as usize;
        let len = s.bits.len();
        s.bits.copy_from_bitslice(&self.bits[a..a + len]);
        Ok(s)
    }

    /// Loads 64 membership bits starting at `n`; positions past the window read as 0.
    fn word_at(&self, n: i64) -> u64 {
        let off = (n - self.lo) as usize;
        let end = (off + 64).min(self.bits.len());
        if off >= end {
            return 0;
        }
        self.bits[off..end].load_le::<u64>()
    }

    pub fn to_rle(&self) -> String {
        let mut s = format!("{} {}\n", self.lo, self.hi);
        for (a, b) in self.runs() {
            s.push_str(&format!("{a}..{b}\n"));
        }
        s
    }

    pub fn from_rle(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| Error::Parse("empty set text".into()))?;
        let mut it = head.split_whitespace().map(str::parse::<i64>);
        let (lo, hi) = match (it.next(), it.next(), it.next()) {
            (Some(Ok(lo)), Some(Ok(hi)), None) => (lo, hi),
            _ => return Err(Error::Parse(format!("bad header {head:?}"))),
        };
        let mut s = Self::empty(lo, hi)?;
        let mut prev = i64::MIN;
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (a, b) = line
                .trim()
                .split_once("..")
                .and_then(|(a, b)| Some((a.parse::<i64>().ok()?, b.parse::<i64>().ok()?)))
                .ok_or_else(|| Error::Parse(format!("bad run {line:?}")))?;
            if a > b || (prev != i64::MIN && a <= prev + 1) {
                return Err(Error::Parse(format!("runs not sorted and disjoint at {line:?}")));
            }
            for n in a..=b {
                s.insert(n)?;
            }
            prev = b;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(WindowJson {
            lo: self.lo,
            hi: self.hi,
            members: self.members().collect(),
        })
        .expect("plain struct")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, Error> {
        let w: WindowJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_members(w.lo, w.hi, w.members)
    }
}

#[derive(Serialize, Deserialize)]
struct WindowJson {
    lo: i64,
    hi: i64,
    members: Vec<i64>,
}

/// { m : m + n in A }, on A's window shifted by -n and clipped to A's window.
pub fn shift(a: &IntWindowSet, n: i64) -> Result<IntWindowSet, Error> {
    let lo = a.lo.max(a.lo - n);
    let hi = a.hi.min(a.hi - n);
    let mut s = IntWindowSet::empty(lo, hi)?;
    let src = (lo + n - a.lo) as usize;
    let len = s.bits.len();
    s.bits.copy_from_bitslice(&a.bits[src..src + len]);
    Ok(s)
}

/// { m : m n in A } on [ceil(lo/n), floor(hi/n)].
pub fn quotient(a: &IntWindowSet, n: i64) -> Result<IntWindowSet, Error> {
    if n < 1 {
        return Err(Error::InvalidDivisor);
    }
    let lo = Integer::div_ceil(&a.lo, &n);
    let hi = Integer::div_floor(&a.hi, &n);
    IntWindowSet::from_fn(lo, hi, |m| a.get(m * n))
}

/// gcd of |a|; 0 exactly when the set is {0}.
pub fn gcd_set(a: &[i64]) -> Result<u64, Error> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(a.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs())))
}

/// gcd of pairwise differences; 0 exactly when the set is a singleton.
pub fn gcd_diff(a: &[i64]) -> Result<u64, Error> {
    let first = *a.first().ok_or(Error::EmptyInput)?;
    Ok(a.iter().fold(0u64, |g, &x| g.gcd(&(x - first).unsigned_abs())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Naturals,
    Integers,
}

/// I * N_{N,1} (or I * Z_{N,1}): the multiples I(kN+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCoset {
    pub i: u64,
    pub n: u64,
    pub flavor: Flavor,
}

impl CongruenceCoset {
    pub fn new(i: u64, n: u64, flavor: Flavor) -> Result<Self, Error> {
        if i == 0 || n == 0 {
            return Err(Error::Precondition("coset needs I >= 1 and N >= 1".into()));
        }
        Ok(CongruenceCoset { i, n, flavor })
    }

    pub fn naturals(i: u64, n: u64) -> Result<Self, Error> {
        Self::new(i, n, Flavor::Naturals)
    }

    /// Whether `m` lies in the underlying semigroup N_{N,1} / Z_{N,1}.
    pub fn unit_contains(&self, m: i64) -> bool {
        (self.flavor == Flavor::Integers || m >= 1) && m.mod_floor(&(self.n as i64)) == 1 % self.n as i64
    }

    pub fn contains(&self, x: i64) -> bool {
        let i = self.i as i64;
        x % i == 0 && self.unit_contains(x / i)
    }

    /// Semigroup elements with |m| <= m_max, ordered by (|m|, positive first).
    pub fn units_upto(&self, m_max: u64) -> Vec<i64> {
        let m_max = m_max as i64;
        match self.flavor {
            Flavor::Naturals => (1..=m_max).step_by(self.n as usize).collect(),
            Flavor::Integers => {
                let mut v: Vec<i64> =
                    (-m_max..=m_max).filter(|&m| self.unit_contains(m)).collect();
                v.sort_by_key(|&m| (m.unsigned_abs(), m < 0));
                v
            }
        }
    }
}

/// Least m in the semigroup with |m| <= m_max and I*m*F inside A.
pub fn find_thick_dilate(
    a: &IntWindowSet,
    coset: &CongruenceCoset,
    f: &[u64],
    m_max: u64,
) -> Result<Option<i64>, Error> {
    if f.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(bad) = f.iter().find(|&&x| x == 0 || (x - 1) % coset.n != 0) {
        return Err(Error::Precondition(format!("{bad} is not 1 mod {}", coset.n)));
    }
    let fmax = *f.iter().max().unwrap() as i128;
    let fmin = *f.iter().min().unwrap() as i128;
    let reach = coset.i as i128 * m_max as i128 * fmax;
    if reach > a.hi as i128 {
        return Err(Error::InsufficientWindow { need: reach, have: a.hi });
    }
    let lowest = match coset.flavor {
        Flavor::Naturals => coset.i as i128 * fmin,
        Flavor::Integers => -reach,
    };
    if lowest < a.lo as i128 {
        return Err(Error::InsufficientWindow { need: lowest, have: a.lo });
    }
    let i = coset.i as i64;
    let fs: Vec<i64> = f.iter().map(|&x| x as i64).collect();
    let hit = |m: i64| fs.iter().all(|&x| a.get(i * m * x));
    let found = match coset.flavor {
        Flavor::Naturals => {
            let n = coset.n as i64;
            let kmax = (m_max as i64 - 1) / n;
            (0..=kmax).into_par_iter().map(|k| k * n + 1).find_first(|&m| hit(m))
        }
        Flavor::Integers => coset.units_upto(m_max).into_par_iter().find_first(|&m| hit(m)),
    };
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "gap", rename_all = "snake_case")]
pub enum Syndeticity {
    /// Every block of this length inside the window meets A.
    Gap(u64),
    /// A run of non-members touching an edge is at least as long as the interior bound.
    EdgeInconclusive,
    Empty,
}

/// Least g such that all interior blocks of length g meet A; edge runs only veto.
pub fn syndeticity_gap(a: &IntWindowSet) -> Syndeticity {
    let ones: Vec<usize> = a.bits.iter_ones().collect();
    let (Some(&first), Some(&last)) = (ones.first(), ones.last()) else {
        return Syndeticity::Empty;
    };
    let interior = ones.windows(2).map(|w| w[1] - w[0] - 1).max().unwrap_or(0);
    let g = interior + 1;
    let lead = first;
    let trail = a.bits.len() - 1 - last;
    if lead >= g || trail >= g {
        return Syndeticity::EdgeInconclusive;
    }
    Syndeticity::Gap(g as u64)
}

/// Starters b: some m in [1, m_max] has b + (jN+1)m in A for j = 0..=k.
///
/// The b-range is [A.lo, A.hi - (kN+1) m_max], so every probe stays inside the window.
pub fn starters(a: &IntWindowSet, n: u64, k: u64, m_max: u64) -> Result<IntWindowSet, Error> {
    if n == 0 || m_max == 0 {
        return Err(Error::Precondition("N and m_max must be positive".into()));
    }
    let reach = (k as i128 * n as i128 + 1) * m_max as i128;
    let b_hi = a.hi as i128 - reach;
    if b_hi < a.lo as i128 {
        return Err(Error::InsufficientWindow { need: a.lo as i128 + reach, have: a.hi });
    }
    let b_lo = a.lo;
    let b_hi = b_hi as i64;
    let len = (b_hi - b_lo + 1) as usize;
    let words = len.div_ceil(64);
    let steps: Vec<i64> = (0..=k).map(|j| (j * n + 1) as i64).collect();
    let chunk = 32u64;
    let acc = (0..m_max.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut out = vec![0u64; words];
            for m in (c * chunk + 1)..=((c + 1) * chunk).min(m_max) {
                for (w, slot) in out.iter_mut().enumerate() {
                    let base = b_lo + 64 * w as i64;
                    let mut word = !0u64;
                    for &s in &steps {
                        word &= a.word_at(base + s * m as i64);
                        if word == 0 {
                            break;
                        }
                    }
                    *slot |= word;
                }
            }
            out
        })
        .reduce(
            || vec![0u64; words],
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(p, q)| *p |= q);
                x
            },
        );
    let mut s = IntWindowSet::empty(b_lo, b_hi)?;
    for (i, mut bit) in s.bits.iter_mut().enumerate() {
        *bit = acc[i / 64] >> (i % 64) & 1 == 1;
    }
    Ok(s)
}

/// Longest run of consecutive members.
pub fn longest_run(a: &IntWindowSet) -> u64 {
    a.runs().iter().map(|(x, y)| (y - x + 1) as u64).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(lo: i64, hi: i64, m: &[i64]) -> IntWindowSet {
        IntWindowSet::from_members(lo, hi, m.iter().copied()).unwrap()
    }

    fn members(a: &IntWindowSet) -> Vec<i64> {
        a.members().collect()
    }

    #[test]
    fn out_of_window_is_an_error() {
        let a = set(1, 6, &[1]);
        assert!(a.contains(0).is_err());
        assert!(a.contains(7).is_err());
        assert!(IntWindowSet::empty(3, 2).is_err());
    }

    #[test]
    fn shift_examples() {
        let s = shift(&set(1, 6, &[1, 3, 5]), 2).unwrap();
        assert_eq!((s.lo(), s.hi(), members(&s)), (1, 4, vec![1, 3]));
        let s = shift(&set(1, 10, &[]), 5).unwrap();
        assert_eq!((s.lo(), s.hi(), s.count()), (1, 5, 0));
        let s = shift(&set(1, 8, &[4]), -1).unwrap();
        assert_eq!((s.lo(), s.hi(), members(&s)), (2, 8, vec![5]));
        assert!(shift(&set(1, 3, &[]), 3).is_err());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(&set(1, 6, &[2, 4, 6]), 2).unwrap();
        assert_eq!((q.lo(), q.hi(), members(&q)), (1, 3, vec![1, 2, 3]));
        let q = quotient(&set(1, 8, &[3, 5, 7]), 2).unwrap();
        assert_eq!((q.lo(), q.hi(), q.count()), (1, 4, 0));
        let q = quotient(&set(1, 12, &[6]), 3).unwrap();
        assert_eq!((q.lo(), q.hi(), members(&q)), (1, 4, vec![2]));
        assert_eq!(quotient(&set(1, 2, &[]), 0), Err(Error::InvalidDivisor));
    }

    #[test]
    fn quotient_rounds_negative_window_inward() {
        let q = quotient(&set(-7, 7, &[-6, 6]), 3).unwrap();
        assert_eq!((q.lo(), q.hi(), members(&q)), (-2, 2, vec![-2, 2]));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!((gcd_set(&[3, 7, 11]), gcd_diff(&[3, 7, 11])), (Ok(1), Ok(4)));
        assert_eq!((gcd_set(&[5]), gcd_diff(&[5])), (Ok(5), Ok(0)));
        assert_eq!((gcd_set(&[-4, 8]), gcd_diff(&[-4, 8])), (Ok(4), Ok(12)));
        assert_eq!(gcd_set(&[0]), Ok(0));
        assert_eq!(gcd_set(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn thick_dilate_examples() {
        let odd = IntWindowSet::from_fn(1, 100, |n| n % 2 == 1).unwrap();
        let c = CongruenceCoset::naturals(1, 2).unwrap();
        assert_eq!(find_thick_dilate(&odd, &c, &[1, 3, 5], 10), Ok(Some(1)));
        let even = IntWindowSet::from_fn(1, 100, |n| n % 2 == 0).unwrap();
        let c = CongruenceCoset::naturals(2, 2).unwrap();
        assert_eq!(find_thick_dilate(&even, &c, &[1, 3], 10), Ok(Some(1)));
    }

    #[test]
    fn thick_dilate_rejects_bad_inputs() {
        let a = IntWindowSet::full(1, 50).unwrap();
        let c = CongruenceCoset::naturals(1, 2).unwrap();
        assert!(matches!(find_thick_dilate(&a, &c, &[2], 5), Err(Error::Precondition(_))));
        assert!(matches!(
            find_thick_dilate(&a, &c, &[1, 3], 20),
            Err(Error::InsufficientWindow { .. })
        ));
    }

    #[test]
    fn thick_dilate_integer_flavor_prefers_small_magnitude() {
        // only negative dilates land in A = [-40,-1]
        let a = IntWindowSet::from_fn(-40, 40, |n| n < 0).unwrap();
        let c = CongruenceCoset::new(1, 3, Flavor::Integers).unwrap();
        assert_eq!(find_thick_dilate(&a, &c, &[1, 4], 10), Ok(Some(-2)));
    }

    #[test]
    fn units_ordering() {
        let c = CongruenceCoset::new(1, 3, Flavor::Integers).unwrap();
        assert_eq!(c.units_upto(5), vec![1, -2, 4, -5]);
        let c = CongruenceCoset::new(1, 1, Flavor::Integers).unwrap();
        assert_eq!(c.units_upto(2), vec![0, 1, -1, 2, -2]);
        assert!(c.contains(-3));
        let c = CongruenceCoset::naturals(3, 2).unwrap();
        assert!(c.contains(9) && !c.contains(6) && !c.contains(-3));
    }

    #[test]
    fn syndeticity_examples() {
        let a = IntWindowSet::from_fn(1, 30, |n| n % 3 == 0).unwrap();
        assert_eq!(syndeticity_gap(&a), Syndeticity::Gap(3));
        assert_eq!(syndeticity_gap(&IntWindowSet::full(1, 30).unwrap()), Syndeticity::Gap(1));
        assert_eq!(syndeticity_gap(&set(1, 30, &[])), Syndeticity::Empty);
        assert_eq!(syndeticity_gap(&set(1, 30, &[10, 12])), Syndeticity::EdgeInconclusive);
    }

    #[test]
    fn starters_on_full_set() {
        let a = IntWindowSet::full(1, 1000).unwrap();
        let s = starters(&a, 3, 2, 5).unwrap();
        assert_eq!((s.lo(), s.hi()), (1, 1000 - 7 * 5));
        assert_eq!(s.count(), s.window_len());
    }

    #[test]
    fn starters_match_scan_on_evens() {
        let a = IntWindowSet::from_fn(1, 1000, |n| n % 2 == 0).unwrap();
        let s = starters(&a, 2, 1, 10).unwrap();
        for b in s.lo()..=s.hi() {
            let scan = (1..=10).any(|m| a.get(b + m) && a.get(b + 3 * m));
            assert_eq!(s.get(b), scan, "b={b}");
            // b + m and b + 3m are both even whenever m has b's parity
            assert!(s.get(b));
        }
    }

    #[test]
    fn rle_and_json_roundtrip() {
        let a = set(-3, 9, &[-3, -2, 0, 4, 5, 6, 9]);
        let t = a.to_rle();
        assert_eq!(t, "-3 9\n-3..-2\n0..0\n4..6\n9..9\n");
        assert_eq!(IntWindowSet::from_rle(&t).unwrap(), a);
        let j = a.to_json();
        assert_eq!(j.to_string(), r#"{"lo":-3,"hi":9,"members":[-3,-2,0,4,5,6,9]}"#);
        assert_eq!(IntWindowSet::from_json(&j).unwrap(), a);
        assert!(IntWindowSet::from_rle("1 5\n3..4\n2..2\n").is_err());
    }

    #[test]
    fn longest_run_counts() {
        assert_eq!(longest_run(&set(1, 20, &[2, 3, 4, 10, 11])), 3);
        assert_eq!(longest_run(&set(1, 20, &[])), 0);
    }
}
