//! Cartan calculus, Schouten, Nijenhuis–Richardson and Frölicher–Nijenhuis brackets.

use super::helpers::{first, fn_explicit, form_with_section, is_zero, odd, same, same_poly, subsets, sum};
use super::{check, Check, Scope, Trial};
use crate::algebroid::section_bracket;
use crate::calculus::{d_tau, fn_bracket, lie_derivative, lie_derivative_with, nr_bracket, schouten, sym_schouten};
use crate::error::Result;
use crate::lifts::iota;
use crate::poisson::poisson_bracket;
use crate::tensor::{
    contract, contract_mixed, contract_with, sym_product, wedge, ContractionOrder, GradedTensor, Kind,
};

type Out = Result<Option<String>>;

pub(crate) fn theorem_1() -> Vec<Check> {
    vec![
        check("1-dd", Scope::Algebroids, |t| {
            let a = t.alg();
            let k = t.below(3);
            let mu = t.form("mu", &a, k);
            Ok(is_zero(&d_tau(&d_tau(&mu)?)?))
        }),
        check("2-d-leibniz", Scope::Algebroids, |t| {
            let a = t.alg();
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = d_tau(&wedge(&mu, &nu)?)?;
            let rhs = wedge(&d_tau(&mu)?, &nu)?.add(&wedge(&mu, &d_tau(&nu)?)?.signed(odd(k as i64)))?;
            same(&lhs, &rhs)
        }),
        check("3-i-leibniz", Scope::Algebroids, |t| {
            let a = t.alg();
            let (k, l) = (t.below(3), t.below(3));
            let x = t.section("X", &a);
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = contract(&x, &wedge(&mu, &nu)?)?;
            let rhs = wedge(&contract(&x, &mu)?, &nu)?.add(&wedge(&mu, &contract(&x, &nu)?)?.signed(odd(k as i64)))?;
            same(&lhs, &rhs)
        }),
        check("4-l-leibniz", Scope::Algebroids, |t| {
            let a = t.alg();
            let (k, l) = (t.below(3), t.below(3));
            let x = t.section("X", &a);
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = lie_derivative(&x, &wedge(&mu, &nu)?)?;
            let rhs = wedge(&lie_derivative(&x, &mu)?, &nu)?.add(&wedge(&mu, &lie_derivative(&x, &nu)?)?)?;
            same(&lhs, &rhs)
        }),
        check("5-l-commutator", Scope::Algebroids, |t| {
            let a = t.alg();
            let k = t.below(3);
            let x = t.section("X", &a);
            let y = t.section("Y", &a);
            let mu = t.form("mu", &a, k);
            let lhs = lie_derivative(&x, &lie_derivative(&y, &mu)?)?.sub(&lie_derivative(&y, &lie_derivative(&x, &mu)?)?)?;
            same(&lhs, &lie_derivative(&section_bracket(&x, &y)?, &mu)?)
        }),
        check("6-l-i-commutator", Scope::Algebroids, |t| {
            let a = t.alg();
            let k = t.below(3);
            let x = t.section("X", &a);
            let y = t.section("Y", &a);
            let mu = t.form("mu", &a, k);
            let lhs = lie_derivative(&x, &contract(&y, &mu)?)?.sub(&contract(&y, &lie_derivative(&x, &mu)?)?)?;
            same(&lhs, &contract(&section_bracket(&x, &y)?, &mu)?)
        }),
    ]
}

fn order_name(o: ContractionOrder) -> &'static str {
    match o {
        ContractionOrder::Default => "default: i_{X∧Y} = i_X i_Y",
        ContractionOrder::Reversed => "reversed: i_{X∧Y} = i_Y i_X",
    }
}

/// L_Y i_X μ − (−1)^{p(q−1)} i_X L_Y μ + i_{[X,Y]} μ for deg X = p, deg Y = q.
fn theorem_2_residual(
    order: ContractionOrder,
    x: &GradedTensor,
    y: &GradedTensor,
    mu: &GradedTensor,
) -> Result<GradedTensor> {
    let (p, q) = (x.degree(), y.degree());
    let lhs = lie_derivative_with(order, y, &contract_with(order, x, mu)?)?;
    let second = contract_with(order, x, &lie_derivative_with(order, y, mu)?)?;
    let third = contract_with(order, &schouten(x, y)?, mu)?;
    sum(&[lhs, second.signed(!odd((p * (q + 1)) as i64)), third])
}

fn calibration(t: &mut Trial, order: ContractionOrder) -> Out {
    let a = t.alg();
    let p = 1 + t.below(2);
    let q = 1 + t.below(2);
    let x = t.mv("X", &a, p);
    let y = t.mv("Y", &a, q);
    let f = t.func("f", &a);
    for k in 0..=a.rank().min(3) {
        for key in subsets(a.rank(), k) {
            let e = GradedTensor::basis(&a, Kind::Form, &key);
            for mu in [e.clone(), e.mul_fn(&f)] {
                let r = theorem_2_residual(order, &x, &y, &mu)?;
                if !r.is_zero() {
                    return Ok(Some(format!("on {}: {}", mu.pretty(), r.pretty())));
                }
            }
        }
    }
    Ok(None)
}

pub(crate) fn theorem_2() -> Vec<Check> {
    vec![
        check("calibration", Scope::Algebroids, |t| {
            let order = t.order;
            t.note(format!("contraction order {}", order_name(order)));
            calibration(t, order)
        }),
        check("calibration-other-order", Scope::Algebroids, |t| {
            let other = t.order.opposite();
            let r = calibration(t, other)?;
            if r.is_some() {
                t.note(format!("the identity fails under the {} order", order_name(other)));
            }
            Ok(None)
        }),
        check("antisymmetry", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(4), t.below(4));
            let x = t.mv("X", &a, p);
            let y = t.mv("Y", &a, q);
            let (k, l) = (p as i64 - 1, q as i64 - 1);
            same(&schouten(&x, &y)?, &schouten(&y, &x)?.signed(!odd(k * l)))
        }),
        check("jacobi", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(4), t.below(4), t.below(3));
            let x = t.mv("X", &a, p);
            let y = t.mv("Y", &a, q);
            let z = t.mv("Z", &a, r);
            let (k, l, m) = (p as i64 - 1, q as i64 - 1, r as i64 - 1);
            let s1 = schouten(&schouten(&x, &y)?, &z)?.signed(odd(k * m));
            let s2 = schouten(&schouten(&y, &z)?, &x)?.signed(odd(l * k));
            let s3 = schouten(&schouten(&z, &x)?, &y)?.signed(odd(m * l));
            Ok(is_zero(&sum(&[s1, s2, s3])?))
        }),
        check("leibniz", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(4), t.below(3), t.below(3));
            let x = t.mv("X", &a, p);
            let y = t.mv("Y", &a, q);
            let z = t.mv("Z", &a, r);
            let k = p as i64 - 1;
            let lhs = schouten(&x, &wedge(&y, &z)?)?;
            let rhs = wedge(&schouten(&x, &y)?, &z)?.add(&wedge(&y, &schouten(&x, &z)?)?.signed(odd(k * q as i64)))?;
            same(&lhs, &rhs)
        }),
        check("eq-1-5", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(4), t.below(4), t.below(3));
            let x = t.mv("X", &a, p);
            let y = t.mv("Y", &a, q);
            let z = t.mv("Z", &a, r);
            let (k, l) = (p as i64 - 1, q as i64 - 1);
            let lhs = schouten(&x, &schouten(&y, &z)?)?.sub(&schouten(&y, &schouten(&x, &z)?)?.signed(odd(k * l)))?;
            same(&lhs, &schouten(&schouten(&x, &y)?, &z)?)
        }),
        check("sym-symmetry", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(4), t.below(4));
            let x = t.sym("X", &a, p);
            let y = t.sym("Y", &a, q);
            same(&sym_schouten(&x, &y)?, &sym_schouten(&y, &x)?.neg())
        }),
        check("sym-jacobi", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(3), t.below(3), t.below(3));
            let x = t.sym("X", &a, p);
            let y = t.sym("Y", &a, q);
            let z = t.sym("Z", &a, r);
            let s1 = sym_schouten(&sym_schouten(&x, &y)?, &z)?;
            let s2 = sym_schouten(&sym_schouten(&y, &z)?, &x)?;
            let s3 = sym_schouten(&sym_schouten(&z, &x)?, &y)?;
            Ok(is_zero(&sum(&[s1, s2, s3])?))
        }),
        check("sym-leibniz", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(3), t.below(3), t.below(3));
            let x = t.sym("X", &a, p);
            let y = t.sym("Y", &a, q);
            let z = t.sym("Z", &a, r);
            let lhs = sym_schouten(&x, &sym_product(&y, &z)?)?;
            let rhs = sym_product(&sym_schouten(&x, &y)?, &z)?.add(&sym_product(&y, &sym_schouten(&x, &z)?)?)?;
            same(&lhs, &rhs)
        }),
        check("sym-agrees", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(2), t.below(2));
            let x = t.mv("X", &a, p);
            let y = t.mv("Y", &a, q);
            let s = sym_schouten(&x, &y)?;
            let target = s.as_kind(Kind::MultiVector)?;
            same(&target, &schouten(&x, &y)?)
        }),
        check("sym-iota", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(3), t.below(3));
            let x = t.sym("X", &a, p);
            let y = t.sym("Y", &a, q);
            let ps = a.linear_poisson()?;
            let lhs = iota(&sym_schouten(&x, &y)?)?;
            let rhs = poisson_bracket(&ps, &iota(&x)?, &iota(&y)?)?;
            Ok(same_poly(ps.chart(), &lhs, &rhs))
        }),
    ]
}

fn shifted(k: &GradedTensor) -> i64 {
    k.mixed_degree() as i64 - 1
}

pub(crate) fn theorem_3() -> Vec<Check> {
    vec![
        check("antisymmetry", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(3), t.below(3));
            let k = t.mixed("K", &a, p);
            let l = t.mixed("L", &a, q);
            same(&nr_bracket(&k, &l)?, &nr_bracket(&l, &k)?.signed(!odd(shifted(&k) * shifted(&l))))
        }),
        check("jacobi", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(3), t.below(3), t.below(3));
            let k = t.mixed("K", &a, p);
            let l = t.mixed("L", &a, q);
            let n = t.mixed("N", &a, r);
            let (kk, ll, nn) = (shifted(&k), shifted(&l), shifted(&n));
            let s1 = nr_bracket(&k, &nr_bracket(&l, &n)?)?.signed(odd(kk * nn));
            let s2 = nr_bracket(&l, &nr_bracket(&n, &k)?)?.signed(odd(ll * kk));
            let s3 = nr_bracket(&n, &nr_bracket(&k, &l)?)?.signed(odd(nn * ll));
            Ok(is_zero(&sum(&[s1, s2, s3])?))
        }),
        check("eq-1-11", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, p);
            let x = t.section("X", &a);
            let nu = t.form("nu", &a, q);
            let y = t.section("Y", &a);
            let k = form_with_section(&mu, &x)?;
            let l = form_with_section(&nu, &y)?;
            let mut rhs = form_with_section(&wedge(&mu, &contract(&x, &nu)?)?, &y)?;
            rhs.accumulate(&form_with_section(&wedge(&contract(&y, &mu)?, &nu)?, &x)?.signed(odd(p as i64)));
            same(&nr_bracket(&k, &l)?, &rhs)
        }),
    ]
}

pub(crate) fn eq_1_12() -> Vec<Check> {
    vec![check("operator", Scope::Algebroids, |t| {
        let a = t.alg();
        let (p, q, r) = (t.below(3), t.below(3), t.below(4));
        let k = t.mixed("K", &a, p);
        let l = t.mixed("L", &a, q);
        let w = t.form("omega", &a, r);
        let lhs = contract_mixed(&nr_bracket(&k, &l)?, &w)?;
        let kl = contract_mixed(&k, &contract_mixed(&l, &w)?)?;
        let lk = contract_mixed(&l, &contract_mixed(&k, &w)?)?;
        same(&lhs, &kl.sub(&lk.signed(odd(shifted(&k) * shifted(&l))))?)
    })]
}

pub(crate) fn theorem_4() -> Vec<Check> {
    vec![
        check("antisymmetry", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(3), t.below(3));
            let k = t.mixed("K", &a, p);
            let l = t.mixed("L", &a, q);
            same(&fn_bracket(&k, &l)?, &fn_bracket(&l, &k)?.signed(!odd((p * q) as i64)))
        }),
        check("jacobi", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(3), t.below(3), t.below(3));
            let k = t.mixed("K", &a, p);
            let l = t.mixed("L", &a, q);
            let n = t.mixed("N", &a, r);
            let (kk, ll, nn) = (p as i64, q as i64, r as i64);
            let s1 = fn_bracket(&k, &fn_bracket(&l, &n)?)?.signed(odd(kk * nn));
            let s2 = fn_bracket(&l, &fn_bracket(&n, &k)?)?.signed(odd(ll * kk));
            let s3 = fn_bracket(&n, &fn_bracket(&k, &l)?)?.signed(odd(nn * ll));
            Ok(is_zero(&sum(&[s1, s2, s3])?))
        }),
        check("eq-1-14", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q, r) = (t.below(3), t.below(3), t.below(3));
            let k = t.mixed("K", &a, p);
            let l = t.mixed("L", &a, q);
            let w = t.form("omega", &a, r);
            let lhs = lie_derivative(&fn_bracket(&k, &l)?, &w)?;
            let kl = lie_derivative(&k, &lie_derivative(&l, &w)?)?;
            let lk = lie_derivative(&l, &lie_derivative(&k, &w)?)?;
            same(&lhs, &kl.sub(&lk.signed(odd((p * q) as i64)))?)
        }),
        check("sections", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let y = t.section("Y", &a);
            same(&fn_bracket(&x, &y)?, &section_bracket(&x, &y)?)
        }),
        check("well-defined", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, p);
            let x = t.section("X", &a);
            let nu = t.form("nu", &a, q);
            let y = t.section("Y", &a);
            let f = t.func("f", &a);
            let fmu = mu.mul_fn(&f);
            let fx = x.mul_fn(&f);
            let expected = fn_bracket(&form_with_section(&fmu, &x)?, &form_with_section(&nu, &y)?)?;
            let other = fn_bracket(&form_with_section(&mu, &fx)?, &form_with_section(&nu, &y)?)?;
            Ok(first([
                ("explicit (fμ, X)", same(&fn_explicit(&fmu, &x, &nu, &y)?, &expected)?),
                ("explicit (μ, fX)", same(&fn_explicit(&mu, &fx, &nu, &y)?, &expected)?),
                ("bracket (μ, fX)", same(&other, &expected)?),
            ]))
        }),
    ]
}
