use std::sync::Arc;

use algebroid_core::algebroid::{section_bracket, so3};
use algebroid_core::calculus::{d_tau, lie_derivative, schouten};
use algebroid_core::lifts::complete_lift;
use algebroid_core::random::Gen;
use algebroid_core::suites::rank2;
use algebroid_core::tensor::{contract, sym_product, wedge};
use algebroid_core::{Algebroid, Chart, GradedTensor, Kind};
use proptest::prelude::*;

fn fixture(i: usize) -> Arc<Algebroid> {
    match i {
        0 => so3(),
        1 => Algebroid::canonical(&Chart::new(["x", "y"]).unwrap()).unwrap(),
        _ => rank2(),
    }
}

fn sign(odd: bool) -> impl Fn(&GradedTensor) -> GradedTensor {
    move |t| t.signed(odd)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wedge_is_graded_commutative(f in 0usize..3, seed: u64, k in 0usize..3, l in 0usize..3) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (mu, nu) = (g.form(&a, k), g.form(&a, l));
        let swapped = sign(k * l % 2 == 1)(&wedge(&nu, &mu).unwrap());
        prop_assert_eq!(wedge(&mu, &nu).unwrap(), swapped);
    }

    #[test]
    fn wedge_is_associative(f in 0usize..3, seed: u64) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (x, y, z) = (g.form(&a, 1), g.form(&a, 1), g.form(&a, 1));
        let l = wedge(&wedge(&x, &y).unwrap(), &z).unwrap();
        prop_assert_eq!(l, wedge(&x, &wedge(&y, &z).unwrap()).unwrap());
    }

    #[test]
    fn sym_degrees_add(f in 0usize..3, seed: u64, k in 0usize..3, l in 0usize..3) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (s, t) = (g.sym(&a, k), g.sym(&a, l));
        let p = sym_product(&s, &t).unwrap();
        prop_assert!(p.is_zero() || p.degree() == k + l);
        prop_assert_eq!(p, sym_product(&t, &s).unwrap());
    }

    #[test]
    fn d_squares_to_zero(f in 0usize..3, seed: u64, k in 0usize..3) {
        let a = fixture(f);
        let mu = Gen::new(seed).form(&a, k);
        prop_assert!(d_tau(&d_tau(&mu).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn d_is_a_graded_derivation(f in 0usize..3, seed: u64, k in 0usize..3) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (mu, nu) = (g.form(&a, k), g.form(&a, 1));
        let lhs = d_tau(&wedge(&mu, &nu).unwrap()).unwrap();
        let mut rhs = wedge(&d_tau(&mu).unwrap(), &nu).unwrap();
        rhs.accumulate(&sign(k % 2 == 1)(&wedge(&mu, &d_tau(&nu).unwrap()).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn section_bracket_is_a_lie_bracket(f in 0usize..3, seed: u64) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (x, y, z) = (g.section(&a), g.section(&a), g.section(&a));
        let br = |u: &GradedTensor, v: &GradedTensor| section_bracket(u, v).unwrap();
        prop_assert_eq!(br(&x, &y), br(&y, &x).neg());
        let mut cyc = br(&x, &br(&y, &z));
        cyc.accumulate(&br(&y, &br(&z, &x)));
        cyc.accumulate(&br(&z, &br(&x, &y)));
        prop_assert!(cyc.is_zero());
    }

    #[test]
    fn schouten_is_graded_antisymmetric(f in 0usize..3, seed: u64, k in 1usize..4, l in 1usize..4) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (x, y) = (g.multivector(&a, k), g.multivector(&a, l));
        let swapped = sign((k - 1) * (l - 1) % 2 == 0)(&schouten(&y, &x).unwrap());
        prop_assert_eq!(schouten(&x, &y).unwrap(), swapped);
    }

    #[test]
    fn contraction_is_a_derivation(f in 0usize..3, seed: u64, k in 0usize..3) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (x, mu, nu) = (g.section(&a), g.form(&a, k), g.form(&a, 2));
        let lhs = contract(&x, &wedge(&mu, &nu).unwrap()).unwrap();
        let mut rhs = wedge(&contract(&x, &mu).unwrap(), &nu).unwrap();
        rhs.accumulate(&sign(k % 2 == 1)(&wedge(&mu, &contract(&x, &nu).unwrap()).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_derivative_of_functions_is_the_anchor(f in 0usize..3, seed: u64) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (x, h) = (g.section(&a), g.function(&a));
        let l = lie_derivative(&x, &a.function(Kind::Form, h.clone())).unwrap();
        let expected = a.act_section(&x.section_coeffs().unwrap(), &h);
        prop_assert_eq!(l.scalar_value().unwrap(), expected);
    }

    #[test]
    fn complete_lift_preserves_brackets(f in 0usize..3, seed: u64) {
        let a = fixture(f);
        let mut g = Gen::new(seed);
        let (x, y) = (g.section(&a), g.section(&a));
        let t = |s: &GradedTensor| complete_lift(s).unwrap().into_tensor();
        let lhs = t(&section_bracket(&x, &y).unwrap());
        prop_assert_eq!(lhs, section_bracket(&t(&x), &t(&y)).unwrap());
    }
}
