use std::sync::Arc;

use algebroid_core::algebroid::{levi_civita, section_bracket, so3, anchor_apply};
use algebroid_core::calculus::{d_tau, fn_bracket, schouten};
use algebroid_core::lifts::{
    complete_lift, cot_complete_vec, g_map, g_map_explicit, h_map, iota, j_map, jstar, vertical_lift,
    vertical_pi, vertical_tau,
};
use algebroid_core::poisson::{
    build_poisson, cotangent_algebroid, extended_bracket, lambda_p, linear_poisson, p_tilde, poisson_bracket,
    r_p, tangent_poisson, LambdaMode,
};
use algebroid_core::tensor::{contract, contract_mixed, sym_product, wedge};
use algebroid_core::{Algebroid, Chart, Error, GradedTensor, Kind, Poly};

fn canon(names: &[&str]) -> Arc<Algebroid> {
    Algebroid::canonical(&Chart::new(names.iter().copied()).unwrap()).unwrap()
}

fn mixed(a: &Arc<Algebroid>, key: &[usize]) -> GradedTensor {
    GradedTensor::basis(a, Kind::Mixed, key)
}

fn canonical_xp() -> algebroid_core::PoissonStructure {
    let c = Chart::new(["x", "p"]).unwrap();
    let a = Algebroid::canonical(&c).unwrap();
    build_poisson(&c, &wedge(&a.basis(1), &a.basis(0)).unwrap()).unwrap()
}

// Jacobi checked straight from the constants: Σ_cyc c_ij^l c_lk^r = 0.
#[test]
fn so3_constants_satisfy_jacobi_by_brute_force() {
    let lc = levi_civita();
    let c = |i: usize, j: usize, k: usize| -> i64 {
        let (s, a, b) = if i < j { (1, i, j) } else { (-1, j, i) };
        if i == j {
            return 0;
        }
        lc.get(&(a, b)).and_then(|row| row.get(&k)).map_or(0, |p| if p.is_one() { s } else if p.is_zero() { 0 } else { -s })
    };
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for r in 0..3 {
                    let s: i64 = (0..3)
                        .map(|l| c(i, j, l) * c(l, k, r) + c(j, k, l) * c(l, i, r) + c(k, i, l) * c(l, j, r))
                        .sum();
                    assert_eq!(s, 0, "triple ({i},{j},{k})");
                }
            }
        }
    }
    so3().validate().unwrap();
}

#[test]
fn algebroid_examples() {
    canon(&["x", "y"]).validate().unwrap();
    let g = so3();
    assert_eq!(section_bracket(&g.basis(0), &g.basis(1)).unwrap(), g.basis(2));
    // the base is a point: the anchor image has no components
    assert!(g.anchor_coeffs(&g.basis(0).section_coeffs().unwrap()).is_empty());
    assert!(matches!(anchor_apply(&g.basis(0)), Err(Error::EmptyChart)));
    let a = canon(&["x"]);
    let x = a.parse("x").unwrap();
    assert_eq!(section_bracket(&a.basis(0), &a.basis(0).mul_fn(&x)).unwrap(), a.basis(0));
}

#[test]
fn tangent_lift_examples() {
    let a = canon(&["x"]);
    let t = a.tangent_lift().unwrap();
    assert_eq!(t.chart().coords(), ["x", "x_dot"]);
    // fibers (ē, ė): α(ė) = ∂x, α(ē) = ∂x_dot
    assert!(t.anchor(1, 0).is_one() && t.anchor(1, 1).is_zero());
    assert!(t.anchor(0, 1).is_one() && t.anchor(0, 0).is_zero());
    assert!(t.structure_table().values().all(|row| row.values().all(Poly::is_zero)));

    let g = so3();
    let tg = g.tangent_lift().unwrap();
    assert_eq!(tg.rank(), 6);
    tg.validate().unwrap();
    // [ē_1, ė_2] = ē_3
    assert!(tg.structure(0, 4, 2).is_one());
}

#[test]
fn iterated_tangent_lift_gets_fresh_names() {
    let a = canon(&["x"]);
    let tt = a.tangent_lift().unwrap().tangent_lift().unwrap();
    assert_eq!(tt.chart().coords(), ["x", "x_dot", "x_dot_dot", "x_dot_dot_dot"]);
    tt.validate().unwrap();
}

#[test]
fn cotangent_lift_examples() {
    let a = canon(&["x"]);
    let c = a.cotangent_lift().unwrap();
    assert_eq!(c.chart().coords(), ["x", "p_x"]);
    assert_eq!(c.anchor(0, 1), &c.parse("-1").unwrap());
    assert!(c.anchor(1, 0).is_one());

    let g = so3();
    let cg = g.cotangent_lift().unwrap();
    assert!(cg.structure(0, 1, 2).is_one());
    let via = cotangent_algebroid(&*g.linear_poisson().unwrap()).unwrap();
    assert_eq!(cg.chart().coords(), via.chart().coords());
    assert_eq!(cg.structure_table(), via.structure_table());
    assert!((0..3).all(|i| cg.anchor_row(i) == via.anchor_row(i)));
}

#[test]
fn linear_poisson_examples() {
    let a = canon(&["x"]);
    let ps = linear_poisson(&a).unwrap();
    let o = ps.owner();
    assert_eq!(ps.bivector(), &wedge(&o.basis(1), &o.basis(0)).unwrap());

    let g = so3();
    let ps = linear_poisson(&g).unwrap();
    let c = ps.chart();
    assert_eq!(c.coords(), ["xi_1", "xi_2", "xi_3"]);
    let p = ps.bivector();
    assert_eq!(p.coeff(&[0, 1]), c.parse("xi_3").unwrap());
    assert_eq!(p.coeff(&[1, 2]), c.parse("xi_1").unwrap());
    assert_eq!(p.coeff(&[0, 2]), c.parse("-1*xi_2").unwrap());
    assert!(schouten(p, p).unwrap().is_zero());
    let (x1, x2) = (c.parse("xi_1").unwrap(), c.parse("xi_2").unwrap());
    assert_eq!(poisson_bracket(&ps, &x1, &x2).unwrap(), c.parse("xi_3").unwrap());
}

#[test]
fn algebra_examples() {
    let a = canon(&["x", "y"]);
    let (dx, dy) = (a.dual_basis(0), a.dual_basis(1));
    assert!(wedge(&dx, &dx).unwrap().is_zero());
    assert_eq!(wedge(&dx, &dy).unwrap(), wedge(&dy, &dx).unwrap().neg());
    let (f, g) = (a.parse("x + y^2").unwrap(), a.parse("3*x*y").unwrap());
    let lhs = wedge(&dx.mul_fn(&f), &dy.mul_fn(&g)).unwrap();
    assert_eq!(lhs, wedge(&dx, &dy).unwrap().mul_fn(&(&f * &g)));
    let (e1, e2) = (a.basis(0), a.basis(1));
    assert_eq!(sym_product(&e1, &e2).unwrap(), sym_product(&e2, &e1).unwrap());
    assert_eq!(sym_product(&e1.mul_fn(&f), &e1).unwrap(), sym_product(&e1, &e1).unwrap().mul_fn(&f));
    assert!(dx.sub(&dx).unwrap().is_zero());

    let b = canon(&["z"]);
    assert!(matches!(wedge(&dx, &b.dual_basis(0)), Err(Error::ChartMismatch(_))));
}

#[test]
fn contraction_examples() {
    let a = canon(&["x", "y"]);
    let (dx, dy) = (a.dual_basis(0), a.dual_basis(1));
    assert!(contract(&a.basis(0), &dx).unwrap().scalar_value().unwrap().is_one());
    assert!(contract(&wedge(&a.basis(0), &a.basis(1)).unwrap(), &dx).unwrap().is_zero());
    // value fixed by the calibrated insertion order
    let exy = wedge(&a.basis(0), &a.basis(1)).unwrap();
    let v = contract(&exy, &wedge(&dx, &dy).unwrap()).unwrap();
    assert!(v.scalar_value().unwrap().is_one());

    let k = mixed(&a, &[0, 0]);
    assert_eq!(contract_mixed(&k, &dx).unwrap(), dx);
    assert!(contract_mixed(&k, &dy).unwrap().is_zero());
    assert!(contract_mixed(&k, &mixed(&a, &[1, 1])).unwrap().is_zero());
}

#[test]
fn poisson_examples() {
    let c = Chart::new(["x", "p"]).unwrap();
    let a = Algebroid::canonical(&c).unwrap();
    assert!(build_poisson(&c, &wedge(&a.basis(1), &a.basis(0)).unwrap()).is_ok());

    let ps = canonical_xp();
    let o = ps.owner().clone();
    let (x, p) = (c.parse("x").unwrap(), c.parse("p").unwrap());
    assert!(poisson_bracket(&ps, &p, &x).unwrap().is_one());
    let f = c.parse("x^2*p - p").unwrap();
    assert!(poisson_bracket(&ps, &f, &f).unwrap().is_zero());

    let cot = cotangent_algebroid(&ps).unwrap();
    assert!(cot.structure_table().values().all(|row| row.values().all(Poly::is_zero)));
    assert!(cot.anchor(1, 0).is_one());

    let (dx, dp) = (o.dual_basis(0), o.dual_basis(1));
    let fx = o.function(Kind::Form, x.clone());
    assert_eq!(lambda_p(&ps, &fx, LambdaMode::Plain).unwrap().scalar_value().unwrap(), x);
    let lhs = lambda_p(&ps, &wedge(&dx, &dp).unwrap(), LambdaMode::Plain).unwrap();
    let rhs = wedge(&p_tilde(&ps, &dx).unwrap(), &p_tilde(&ps, &dp).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert!(r_p(&ps, &fx).unwrap().is_zero());
    assert_eq!(r_p(&ps, &dx).unwrap(), p_tilde(&ps, &dx).unwrap());

    let fp = o.function(Kind::Form, p.clone());
    assert!(extended_bracket(&ps, &dx, &fp).unwrap().is_zero());
    let xp = c.parse("x*p").unwrap();
    let fy = o.function(Kind::Form, xp.clone());
    let lhs = extended_bracket(&ps, &fx, &fy).unwrap().scalar_value().unwrap();
    assert_eq!(lhs, poisson_bracket(&ps, &x, &xp).unwrap());
}

#[test]
fn not_poisson_example() {
    let c = Chart::new(["x1", "x2", "x3"]).unwrap();
    let a = Algebroid::canonical(&c).unwrap();
    let p = wedge(&a.basis(0), &a.basis(1))
        .unwrap()
        .add(&wedge(&a.basis(0), &a.basis(2)).unwrap().mul_fn(&c.parse("x1").unwrap()))
        .unwrap();
    assert!(matches!(build_poisson(&c, &p), Err(Error::NotPoisson { .. })));
}

#[test]
fn tangent_poisson_examples() {
    let c = Chart::new(["x", "xi"]).unwrap();
    let a = Algebroid::canonical(&c).unwrap();
    let ps = build_poisson(&c, &wedge(&a.basis(1), &a.basis(0)).unwrap()).unwrap();
    let tp = tangent_poisson(&ps).unwrap();
    assert_eq!(tp.chart().coords(), ["x", "xi", "x_dot", "xi_dot"]);
    let o = tp.owner();
    let expected = wedge(&o.basis(3), &o.basis(0)).unwrap().add(&wedge(&o.basis(1), &o.basis(2)).unwrap()).unwrap();
    assert_eq!(tp.bivector(), &expected);
    let b = tp.bivector();
    assert!(schouten(b, b).unwrap().is_zero());

    let so = linear_poisson(&so3()).unwrap();
    let t = tangent_poisson(&so).unwrap();
    assert!(schouten(t.bivector(), t.bivector()).unwrap().is_zero());
}

#[test]
fn vertical_and_complete_lift_examples() {
    let a = canon(&["x", "y"]);
    let t = a.tangent_lift().unwrap();
    assert_eq!(vertical_lift(&a.basis(0)).unwrap().tensor(), &t.basis(0));
    let exy = wedge(&a.basis(0), &a.basis(1)).unwrap();
    assert_eq!(vertical_lift(&exy).unwrap().tensor(), &wedge(&t.basis(0), &t.basis(1)).unwrap());

    let f = a.function(Kind::MultiVector, a.parse("x^2*y").unwrap());
    let tf = complete_lift(&f).unwrap();
    assert_eq!(tf.tensor().scalar_value().unwrap(), t.parse("2*x*y*x_dot + x^2*y_dot").unwrap());
    let vf = vertical_lift(&f).unwrap();
    assert_eq!(vf.tensor().scalar_value().unwrap(), t.parse("x^2*y").unwrap());

    let b = canon(&["x"]);
    let tb = b.tangent_lift().unwrap();
    let ss = sym_product(&b.basis(0), &b.basis(0)).unwrap();
    let two = b.parse("2").unwrap().extend(2);
    let expected = sym_product(&tb.basis(0), &tb.basis(1)).unwrap().mul_fn(&two);
    assert_eq!(complete_lift(&ss).unwrap().tensor(), &expected);
}

#[test]
fn vertical_pi_and_tau_examples() {
    let a = canon(&["x"]);
    let d = a.dual_canonical();
    assert_eq!(vertical_pi(&a.dual_basis(0)).unwrap().tensor(), &d.basis(1));
    let f = a.parse("1 + x").unwrap();
    let lhs = vertical_pi(&a.dual_basis(0).mul_fn(&f)).unwrap();
    assert_eq!(lhs.tensor(), &d.basis(1).mul_fn(&f.extend(2)));

    let g = so3();
    let mu = wedge(&g.dual_basis(0), &g.dual_basis(1)).unwrap();
    let gd = g.dual_canonical();
    assert_eq!(vertical_pi(&mu).unwrap().tensor(), &wedge(&gd.basis(0), &gd.basis(1)).unwrap());

    let v = a.vertical_canonical();
    assert_eq!(v.chart().coords(), ["x", "y_x"]);
    assert_eq!(vertical_tau(&a.basis(0)).unwrap().tensor(), &v.basis(1));
    let xe = a.basis(0).mul_fn(&a.parse("x").unwrap());
    assert_eq!(vertical_tau(&xe).unwrap().tensor(), &v.basis(1).mul_fn(&v.parse("x").unwrap()));
    let e12 = sym_product(&g.basis(0), &g.basis(1)).unwrap();
    let gv = g.vertical_canonical();
    assert_eq!(vertical_tau(&e12).unwrap().tensor(), &sym_product(&gv.basis(0), &gv.basis(1)).unwrap());
}

#[test]
fn iota_examples() {
    let g = so3();
    let br = section_bracket(&g.basis(0), &g.basis(1)).unwrap();
    assert_eq!(iota(&br).unwrap(), g.dual_chart().parse("xi_3").unwrap());
}

#[test]
fn cotangent_complete_lift_examples() {
    let a = canon(&["x"]);
    let d = a.dual_canonical();
    assert_eq!(cot_complete_vec(&a.basis(0)).unwrap().tensor(), &d.basis(0));
    assert_eq!(g_map(&a.basis(0)).unwrap().tensor(), cot_complete_vec(&a.basis(0)).unwrap().tensor());

    let k = mixed(&a, &[0, 0]);
    let p = linear_poisson(&a).unwrap();
    let via_bracket = schouten(p.bivector(), j_map(&k).unwrap().tensor()).unwrap();
    assert_eq!(g_map(&k).unwrap().tensor(), &via_bracket);
    assert_eq!(via_bracket, wedge(&d.basis(0), &d.basis(1)).unwrap());

    let g = so3();
    let k = mixed(&g, &[0, 0]);
    assert_eq!(g_map(&k).unwrap().tensor(), &g_map_explicit(&k).unwrap());

    // J((f dx)⊗e_x) = J(dx⊗(f e_x))
    let f = a.parse("x^2 - 3").unwrap();
    let lhs = j_map(&k_with(&a, &f)).unwrap();
    assert_eq!(lhs.tensor(), j_map(&mixed(&a, &[0, 0]).mul_fn(&f)).unwrap().tensor());
    let x = a.basis(0).mul_fn(&f);
    let minus_iota = d.function(Kind::MultiVector, iota(&x).unwrap()).neg();
    assert_eq!(j_map(&x).unwrap().tensor(), &minus_iota);
}

fn k_with(a: &Arc<Algebroid>, f: &Poly) -> GradedTensor {
    GradedTensor::from_terms(a, Kind::Mixed, 1, [(vec![0, 0], f.clone())])
}

#[test]
fn jstar_and_h_examples() {
    let a = canon(&["x"]);
    let d = a.dual_canonical();
    let x = a.basis(0).mul_fn(&a.parse("x").unwrap());
    let j = jstar(&x).unwrap();
    assert_eq!(j.tensor().scalar_value().unwrap(), iota(&x).unwrap());

    let k = mixed(&a, &[0, 0]);
    let jk = jstar(&k).unwrap().into_tensor();
    let ps = linear_poisson(&a).unwrap();
    let jk = ps.adopt(&jk).unwrap();
    assert!(extended_bracket(&ps, &jk, &jk).unwrap().is_zero());
    assert!(fn_bracket(&k, &k).unwrap().is_zero());

    let h = h_map(&a.basis(0)).unwrap();
    assert_eq!(h.tensor().section_coeffs().unwrap(), d.basis(0).section_coeffs().unwrap());
    assert!(!h_map(&k).unwrap().tensor().is_zero());
    let _ = d_tau(&jk).unwrap();
}
