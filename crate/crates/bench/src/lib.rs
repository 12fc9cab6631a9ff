//! Fixtures shared by the kernel benchmarks.

use nildyn_core::constants::ConstantTable;
use nildyn_core::exact::rat;
use nildyn_core::torus::interval_visits;
use nildyn_core::{GroupElement, HeisFiltration, IntWindowSet, PolySeq, TorusPoint};

pub fn constant(name: &str) -> TorusPoint {
    TorusPoint::Approx(ConstantTable::default().turn(name).expect("builtin constant"))
}

/// {n in [1, horizon] : {n (sqrt2 - 1)} in (0, 1/10)}.
pub fn bohr_set(horizon: u64) -> IntWindowSet {
    interval_visits(&constant("sqrt2m1"), &rat(0, 1), &rat(1, 10), horizon).expect("valid arc")
}

/// A fixed lower-central-series sequence with denominators up to 12.
pub fn sample_poly() -> PolySeq {
    let coeffs = vec![
        GroupElement::new(rat(1, 3), rat(-5, 7), rat(2, 11)),
        GroupElement::new(rat(7, 12), rat(1, 5), rat(-3, 4)),
        GroupElement::central(rat(5, 9)),
    ];
    PolySeq::new(HeisFiltration::lower_central(), coeffs).expect("a_2 is central")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert!(bohr_set(1000).count() > 50);
        assert_eq!(sample_poly().degree(), 2);
    }
}
