use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use super::bound::{orbit_modulus, NatExpr};
use super::heisenberg::{GroupElement, HeisFiltration};
use super::{rationality_order, Filtration, Group, LatticeGroup};
use crate::exact::{self, binom};
use crate::Error;

/// n -> a_0^C(n,0) a_1^C(n,1) ... a_d^C(n,d) with a_i in G^(i).
#[derive(Clone, Debug, PartialEq)]
pub struct PolySeq<G = GroupElement, F = HeisFiltration> {
    filt: F,
    coeffs: Vec<G>,
}

impl<G: Group, F: Filtration<G>> PolySeq<G, F> {
    pub fn new(filt: F, coeffs: Vec<G>) -> Result<Self, Error> {
        let d = filt.degree() as usize;
        if coeffs.len() != d + 1 {
            return Err(Error::Precondition(format!(
                "degree {d} needs {} coefficients, got {}",
                d + 1,
                coeffs.len()
            )));
        }
        if let Some(i) = (0..=d).find(|&i| !filt.contains(i as u32, &coeffs[i])) {
            return Err(Error::Precondition(format!("coefficient {i} is not in G^({i})")));
        }
        Ok(PolySeq { filt, coeffs })
    }

    pub fn constant(filt: F, g: G) -> Result<Self, Error> {
        let mut coeffs = vec![G::identity(); filt.degree() as usize + 1];
        coeffs[0] = g;
        Self::new(filt, coeffs)
    }

    pub fn degree(&self) -> u32 {
        self.filt.degree()
    }

    pub fn filtration(&self) -> &F {
        &self.filt
    }

    pub fn coeffs(&self) -> &[G] {
        &self.coeffs
    }

    pub fn eval_big(&self, n: &BigInt) -> G {
        self.coeffs
            .iter()
            .enumerate()
            .fold(G::identity(), |acc, (i, a)| acc.mul(&a.pow(&binom(n, i as u32))))
    }

    pub fn eval(&self, n: i64) -> G {
        self.eval_big(&BigInt::from(n))
    }

    /// Solves a_0 = v_0, a_k = (a_0^C(k,0) ... a_{k-1}^C(k,k-1))^-1 v_k from
    /// the values at 0..=d, then re-checks the result off the sample points.
    pub fn from_fn(filt: F, f: impl Fn(i64) -> G) -> Result<Self, Error> {
        let d = filt.degree() as i64;
        let mut coeffs: Vec<G> = Vec::with_capacity(d as usize + 1);
        for k in 0..=d {
            let kb = BigInt::from(k);
            let head = coeffs
                .iter()
                .enumerate()
                .fold(G::identity(), |acc, (i, a)| acc.mul(&a.pow(&binom(&kb, i as u32))));
            let ak = head.inv().mul(&f(k));
            if !filt.contains(k as u32, &ak) {
                return Err(Error::Internal(format!("recovered coefficient {k} left G^({k})")));
            }
            coeffs.push(ak);
        }
        let p = PolySeq { filt, coeffs };
        for n in [-1, d + 1, d + 2] {
            if p.eval(n) != f(n) {
                return Err(Error::Internal(format!("recovered sequence disagrees at n={n}")));
            }
        }
        Ok(p)
    }

    fn same_filtration(&self, o: &Self) -> Result<(), Error> {
        if self.filt != o.filt {
            return Err(Error::Precondition("filtrations differ".into()));
        }
        Ok(())
    }

    /// n -> P(n) Q(n).
    pub fn mul(&self, o: &Self) -> Result<Self, Error> {
        self.same_filtration(o)?;
        Self::from_fn(self.filt.clone(), |n| self.eval(n).mul(&o.eval(n)))
    }

    /// n -> P(n + k).
    pub fn translate(&self, k: i64) -> Result<Self, Error> {
        Self::from_fn(self.filt.clone(), |n| self.eval(n + k))
    }

    /// n -> P(n)^-1.
    pub fn invert(&self) -> Result<Self, Error> {
        Self::from_fn(self.filt.clone(), |n| self.eval(n).inv())
    }

    /// n -> P(n + N)^-1 P(n).
    pub fn diff_prime(&self, step: u64) -> Result<Self, Error> {
        let s = step as i64;
        Self::from_fn(self.filt.clone(), |n| self.eval(n + s).inv().mul(&self.eval(n)))
    }
}

/// d'_a P(a(b-1) + n) ... d'_a P(n), which telescopes to d'_{ab} P(n).
pub fn telescoped_diff<G: Group, F: Filtration<G>>(
    p: &PolySeq<G, F>,
    a: u64,
    b: u64,
    n: i64,
) -> Result<G, Error> {
    let da = p.diff_prime(a)?;
    Ok((0..b as i64)
        .rev()
        .fold(G::identity(), |acc, j| acc.mul(&da.eval(a as i64 * j + n))))
}

/// P(n) Gamma = P(n + N) Gamma on [-span, span], compared through canonical coset representatives.
pub fn orbit_periodic_direct<G: LatticeGroup, F: Filtration<G>>(
    p: &PolySeq<G, F>,
    step: u64,
    span: u64,
) -> bool {
    let s = span as i64;
    (-s..=s).all(|n| p.eval(n).coset_rep() == p.eval(n + step as i64).coset_rep())
}

/// Whether n -> P(n) Gamma is N-periodic, decided by Gamma-valuedness of
/// d'_N P at d+1 consecutive points and cross-checked by direct comparison.
pub fn is_orbit_periodic<G: LatticeGroup, F: Filtration<G>>(
    p: &PolySeq<G, F>,
    step: u64,
    check_span: u64,
) -> Result<bool, Error> {
    let d = p.degree() as u64;
    if check_span < d + 1 {
        return Err(Error::Precondition(format!("check_span must be at least {}", d + 1)));
    }
    if step == 0 {
        return Err(Error::InvalidDivisor);
    }
    let dp = p.diff_prime(step)?;
    let crit = (0..=d as i64).all(|n| dp.eval(n).in_lattice());
    let direct = orbit_periodic_direct(p, step, check_span);
    if crit != direct {
        return Err(Error::Internal(format!(
            "periodicity criterion says {crit}, direct comparison says {direct} at N={step}"
        )));
    }
    Ok(crit)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PolySeq<GroupElement, HeisFiltration> {
    /// Least N >= 1 with P(n+N) Gamma = P(n) Gamma for all n.
    ///
    /// With D = lcm of denominators of P(0..=2d) times (2d)!, the coordinate
    /// polynomials have monomial coefficients in (1/D)Z, and N = D^2 is a period;
    /// periods form a subgroup, so stripping primes from D^2 gives the least one.
    pub fn least_period(&self) -> Result<BigUint, Error> {
        let d = self.degree() as i64;
        let mut den = BigInt::one();
        for n in 0..=2 * d {
            for c in self.eval(n).coords() {
                den = den.lcm(c.denom());
            }
        }
        let fact: u64 = (1..=2 * d as u64).product();
        let den = den * fact;
        let primes = match den.to_u64() {
            Some(v) => prime_factors(v),
            None => return Err(Error::Precondition("denominators too large to factor".into())),
        };
        let span = d as u64 + 1;
        let periodic = |n: &BigInt| -> Result<bool, Error> {
            let n = n.to_u64().ok_or_else(|| Error::Precondition("period exceeds u64".into()))?;
            is_orbit_periodic(self, n, span)
        };
        let mut n = &den * &den;
        if !periodic(&n)? {
            return Err(Error::Internal("denominator-square period failed".into()));
        }
        for p in primes {
            let p = BigInt::from(p);
            while n.is_multiple_of(&p) && periodic(&(&n / &p))? {
                n /= &p;
            }
        }
        Ok(n.to_biguint().expect("positive"))
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|g| json!(g.coords().iter().map(|r| exact::fmt_rat(r)).collect::<Vec<_>>()))
            .collect();
        let mut v = json!({ "d": self.degree(), "coeffs": coeffs });
        if self.filt != HeisFiltration::for_degree(self.degree()) {
            v["split"] = json!(self.filt.split);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let bad = |m: &str| Error::Parse(format!("polyseq: {m}"));
        let d = v["d"].as_u64().ok_or_else(|| bad("missing integer d"))? as u32;
        let filt = match v.get("split") {
            None => HeisFiltration::for_degree(d),
            Some(s) => {
                let s = s.as_u64().ok_or_else(|| bad("split must be an integer"))? as u32;
                HeisFiltration::new(s, d).ok_or_else(|| bad("invalid split for degree"))?
            }
        };
        let arr = v["coeffs"].as_array().ok_or_else(|| bad("missing coeffs array"))?;
        let coeffs = arr
            .iter()
            .map(|c| {
                let t = c.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("coefficient must be [a,b,c]"))?;
                let r = |i: usize| -> Result<_, Error> {
                    exact::parse_rat(t[i].as_str().ok_or_else(|| bad("coordinates are strings"))?)
                };
                Ok(GroupElement::new(r(0)?, r(1)?, r(2)?))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        PolySeq::new(filt, coeffs)
    }
}

#[derive(Clone, Debug)]
pub struct OrbitPeriodReport {
    pub rationality: Vec<u64>,
    pub least_period: BigUint,
    pub bound: NatExpr,
    pub within_bound: bool,
    pub divides_bound: bool,
}

/// Least period of n -> P(n) Gamma against the constructive modulus for
/// (d+1) consecutive Q-rational values.
pub fn verify_rational_orbit_periodic(
    p: &PolySeq<GroupElement, HeisFiltration>,
    q: u64,
) -> Result<OrbitPeriodReport, Error> {
    let d = p.degree();
    let rationality = (0..=d as i64)
        .map(|n| {
            rationality_order(&p.eval(n), q)
                .ok_or_else(|| Error::Precondition(format!("P({n}) is not {q}-rational")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let least_period = p.least_period()?;
    let bound = orbit_modulus(q, d as u64);
    let within_bound = bound.ge_value(&least_period);
    let divides_bound = match least_period.to_u64() {
        Some(l) => bound.is_divisible_by(l),
        None => false,
    };
    Ok(OrbitPeriodReport { rationality, least_period, bound, within_bound, divides_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Rat};

    fn el(a: Rat, b: Rat, c: Rat) -> GroupElement {
        GroupElement::new(a, b, c)
    }

    fn lcs(c: Vec<GroupElement>) -> PolySeq {
        PolySeq::new(HeisFiltration::lower_central(), c).unwrap()
    }

    fn linear(g: GroupElement) -> PolySeq {
        lcs(vec![GroupElement::identity(), g, GroupElement::identity()])
    }

    fn sample() -> PolySeq {
        lcs(vec![
            el(rat(1, 3), rat(2, 5), rat(1, 7)),
            el(rat(-1, 2), rat(3, 4), rat(5, 6)),
            GroupElement::central(rat(1, 9)),
        ])
    }

    #[test]
    fn eval_at_zero_is_constant_term() {
        let x = el(rat(1, 3), int(2), rat(-1, 5));
        let g = el(rat(1, 2), rat(1, 4), int(0));
        let p = lcs(vec![x.clone(), g.clone(), GroupElement::identity()]);
        assert_eq!(p.eval(0), x);
        for n in -6..=6 {
            assert_eq!(p.eval(n), x.mul(&g.power_i64(n)));
        }
    }

    #[test]
    fn rejects_coefficients_outside_levels() {
        let bad = vec![GroupElement::identity(), GroupElement::identity(), el(rat(1, 2), int(0), int(0))];
        assert!(PolySeq::new(HeisFiltration::lower_central(), bad).is_err());
        assert!(PolySeq::new(HeisFiltration::lower_central(), vec![GroupElement::identity()]).is_err());
    }

    #[test]
    fn product_with_inverse_is_identity() {
        let p = sample();
        let e = p.mul(&p.invert().unwrap()).unwrap();
        assert!(e.coeffs().iter().all(|c| *c == GroupElement::identity()));
    }

    #[test]
    fn translate_matches_shifted_power() {
        let g = el(rat(2, 3), rat(-1, 5), rat(1, 2));
        let p = linear(g.clone());
        for k in [-3i64, 0, 4] {
            let t = p.translate(k).unwrap();
            for n in -10..=10 {
                assert_eq!(t.eval(n), g.power_i64(n + k));
            }
        }
    }

    #[test]
    fn recovery_reproduces_values() {
        let p = sample();
        let q = PolySeq::from_fn(*p.filtration(), |n| p.eval(n)).unwrap();
        assert_eq!(p, q);
        for n in -100..=100 {
            assert_eq!(p.eval(n), q.eval(n));
        }
    }

    #[test]
    fn diff_prime_examples() {
        let c = lcs(vec![el(rat(1, 2), rat(1, 3), int(0)), GroupElement::identity(), GroupElement::identity()]);
        assert!(c.diff_prime(5).unwrap().eval(7) == GroupElement::identity());
        let g = el(rat(1, 2), rat(2, 3), rat(1, 5));
        let d = linear(g.clone()).diff_prime(3).unwrap();
        for n in -5..=5 {
            assert_eq!(d.eval(n), g.power_i64(-3));
        }
    }

    #[test]
    fn telescoping_identity() {
        let p = sample();
        for (a, b) in [(1, 1), (2, 3), (5, 4), (3, 5)] {
            let direct = p.diff_prime(a * b).unwrap();
            for n in -10..=10 {
                assert_eq!(telescoped_diff(&p, a, b, n).unwrap(), direct.eval(n));
            }
        }
    }

    #[test]
    fn periodicity_examples() {
        let p = linear(GroupElement::central(rat(1, 3)));
        assert_eq!(is_orbit_periodic(&p, 3, 3), Ok(true));
        assert_eq!(is_orbit_periodic(&p, 2, 3), Ok(false));
        let c = lcs(vec![el(rat(1, 7), rat(2, 9), rat(1, 2)), GroupElement::identity(), GroupElement::identity()]);
        for n in 1..10 {
            assert_eq!(is_orbit_periodic(&c, n, 3), Ok(true));
        }
        assert!(is_orbit_periodic(&c, 1, 2).is_err());
    }

    #[test]
    fn periodicity_scan_quarter_center() {
        let p = lcs(vec![GroupElement::identity(), el(rat(1, 2), int(0), int(0)), GroupElement::central(rat(1, 4))]);
        let periods: Vec<u64> = (1..=64).filter(|&n| is_orbit_periodic(&p, n, 6).unwrap()).collect();
        assert_eq!(periods.first(), Some(&8));
        assert!(periods.iter().all(|n| n % 8 == 0));
        assert_eq!(p.least_period().unwrap(), BigUint::from(8u8));
    }

    #[test]
    fn least_period_examples() {
        assert_eq!(linear(GroupElement::central(rat(1, 2))).least_period().unwrap(), BigUint::from(2u8));
        assert_eq!(linear(el(rat(1, 2), rat(1, 2), int(0))).least_period().unwrap(), BigUint::from(8u8));
        let c = PolySeq::constant(HeisFiltration::lower_central(), el(rat(1, 3), int(0), int(0))).unwrap();
        assert_eq!(c.least_period().unwrap(), BigUint::one());
    }

    #[test]
    fn rational_orbit_reports() {
        let r = verify_rational_orbit_periodic(&linear(GroupElement::central(rat(1, 2))), 2).unwrap();
        assert_eq!(r.least_period, BigUint::from(2u8));
        assert!(r.within_bound && r.divides_bound);
        assert!(r.bound.is_divisible_by(2));
        let r = verify_rational_orbit_periodic(&linear(el(rat(1, 2), rat(1, 2), int(0))), 8).unwrap();
        assert_eq!(r.least_period, BigUint::from(8u8));
        assert!(r.divides_bound);
        assert!(matches!(
            verify_rational_orbit_periodic(&linear(el(rat(1, 2), rat(1, 2), int(0))), 7),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let p = sample();
        let v = p.to_json();
        assert_eq!(v.to_string(), r#"{"d":2,"coeffs":[["1/3","2/5","1/7"],["-1/2","3/4","5/6"],["0/1","0/1","1/9"]]}"#);
        assert_eq!(PolySeq::from_json(&v).unwrap(), p);
        let s = PolySeq::new(HeisFiltration::new(0, 2).unwrap(), vec![
            el(rat(1, 2), int(0), int(0)),
            GroupElement::central(rat(1, 3)),
            GroupElement::central(rat(1, 5)),
        ])
        .unwrap();
        let v = s.to_json();
        assert_eq!(v["split"], 0);
        assert_eq!(PolySeq::from_json(&v).unwrap(), s);
    }

    #[test]
    fn split_zero_filtration_supports_operations() {
        let f = HeisFiltration::new(0, 3).unwrap();
        let p = PolySeq::new(f, vec![
            el(rat(1, 2), rat(1, 3), int(0)),
            GroupElement::central(rat(1, 5)),
            GroupElement::central(rat(2, 7)),
            GroupElement::central(rat(1, 11)),
        ])
        .unwrap();
        let q = p.mul(&p.translate(2).unwrap()).unwrap();
        for n in -5..=5 {
            assert_eq!(q.eval(n), p.eval(n).mul(&p.eval(n + 2)));
        }
        let per = p.least_period().unwrap();
        assert!(is_orbit_periodic(&p, per.to_u64().unwrap(), 8).unwrap());
    }
}
