//! Poisson structures: pairing, Λ_P, Koszul–Schouten and the extended bracket.

use super::helpers::{dfun, extended_bracket_literal, f_p, first, is_zero, odd, same, same_poly, sum};
use super::{check, Check, Scope, Trial};
use crate::calculus::{d_tau, fn_bracket, schouten};
use crate::error::Result;
use crate::poisson::{
    cotangent_algebroid, extended_bracket, g_p, h_p, koszul_schouten, koszul_schouten_local, lambda_p,
    multivectors_to_cotangent_forms, p_tilde, pair, poisson_bracket, LambdaMode,
};
use crate::tensor::{contract, wedge, GradedTensor, Kind};

type Out = Result<Option<String>>;

pub(crate) fn theorem_5() -> Vec<Check> {
    vec![
        check("pairing", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let f = t.func("f", &a);
            let g = t.func("g", &a);
            let mu = t.form("mu", &a, 1);
            let nu = t.form("nu", &a, 1);
            let lhs = poisson_bracket(&ps, &f, &g)?;
            let rhs = pair(&ps, &wedge(&dfun(&a, &f)?, &dfun(&a, &g)?)?)?;
            let pm = contract(&p_tilde(&ps, &mu)?, &nu)?.scalar_value().expect("scalar");
            Ok(first([
                ("{f,g}", same_poly(a.chart(), &lhs, &rhs)),
                ("<P̃μ,ν>", same_poly(a.chart(), &pm, &pair(&ps, &wedge(&mu, &nu)?)?)),
            ]))
        }),
        check("a", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lam = |x: &GradedTensor| lambda_p(&ps, x, LambdaMode::Plain);
            let lhs = lam(&koszul_schouten(&ps, &mu, &nu)?)?;
            same(&lhs, &schouten(&lam(&mu)?, &lam(&nu)?)?)
        }),
        check("eq-2-2", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let k = t.below(3);
            let x = t.mv("X", &a, k);
            let dx = d_tau(&multivectors_to_cotangent_forms(&ps, &x)?)?;
            let back = dx.transport(ps.owner(), Kind::MultiVector, |i| i, Clone::clone);
            same(&back, &schouten(ps.bivector(), &x)?)
        }),
        check("b", Scope::Symplectic, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let cot = cotangent_algebroid(&ps)?;
            let (p, q) = (t.below(3), t.below(3));
            let k = t.mixed("K", &a, p);
            let l = t.mixed("L", &a, q);
            let lhs = f_p(&ps, &cot, &fn_bracket(&k, &l)?)?;
            same(&lhs, &fn_bracket(&f_p(&ps, &cot, &k)?, &f_p(&ps, &cot, &l)?)?)
        }),
    ]
}

pub(crate) fn eq_2_6() -> Vec<Check> {
    vec![check("local", Scope::Poisson, |t| {
        let (ps, a) = (t.ps(), t.alg());
        let (k, l) = (t.below(3), t.below(3));
        let mu = t.form("mu", &a, k);
        let nu = t.form("nu", &a, l);
        same(&koszul_schouten(&ps, &mu, &nu)?, &koszul_schouten_local(&ps, &mu, &nu)?)
    })]
}

fn literal_case(t: &mut Trial, k: usize, l: usize) -> Out {
    let (ps, a) = (t.ps(), t.alg());
    let g: Vec<_> = (0..=k).map(|i| t.func(&format!("g{i}"), &a)).collect();
    let f: Vec<_> = (0..=l).map(|j| t.func(&format!("f{j}"), &a)).collect();
    let build = |h: &[crate::ring::Poly]| -> Result<GradedTensor> {
        let mut acc = a.function(Kind::Form, h[0].clone());
        for p in &h[1..] {
            acc = wedge(&acc, &dfun(&a, p)?)?;
        }
        Ok(acc)
    };
    let lhs = extended_bracket(&ps, &build(&g)?, &build(&f)?)?;
    same(&lhs, &extended_bracket_literal(&ps, &g, &f)?)
}

pub(crate) fn theorem_6() -> Vec<Check> {
    vec![
        check("functions", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let f = t.func("f", &a);
            let g = t.func("g", &a);
            let fb = a.function(Kind::Form, f.clone());
            let gb = a.function(Kind::Form, g.clone());
            let lhs = extended_bracket(&ps, &fb, &gb)?.scalar_value().expect("function");
            Ok(same_poly(a.chart(), &lhs, &poisson_bracket(&ps, &f, &g)?))
        }),
        check("antisymmetry", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = extended_bracket(&ps, &mu, &nu)?;
            same(&lhs, &extended_bracket(&ps, &nu, &mu)?.signed(!odd((k * l) as i64)))
        }),
        check("jacobi", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l, m) = (t.below(3), t.below(3), t.below(2));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let om = t.form("omega", &a, m);
            let br = |x: &GradedTensor, y: &GradedTensor| extended_bracket(&ps, x, y);
            let s1 = br(&mu, &br(&nu, &om)?)?.signed(odd((k * m) as i64));
            let s2 = br(&nu, &br(&om, &mu)?)?.signed(odd((l * k) as i64));
            let s3 = br(&om, &br(&mu, &nu)?)?.signed(odd((m * l) as i64));
            Ok(is_zero(&sum(&[s1, s2, s3])?))
        }),
        check("d-compat", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = extended_bracket(&ps, &d_tau(&mu)?, &nu)?;
            same(&lhs, &d_tau(&extended_bracket(&ps, &mu, &nu)?)?)
        }),
        check("eq-2-8-0-1", Scope::Poisson, |t| literal_case(t, 0, 1)),
        check("eq-2-8-1-1", Scope::Poisson, |t| literal_case(t, 1, 1)),
    ]
}

pub(crate) fn theorem_7() -> Vec<Check> {
    vec![
        check("a", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = koszul_schouten(&ps, &d_tau(&mu)?, &d_tau(&nu)?)?;
            same(&lhs, &d_tau(&extended_bracket(&ps, &mu, &nu)?)?)
        }),
        check("b", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = h_p(&ps, &extended_bracket(&ps, &mu, &nu)?)?;
            same(&lhs, &fn_bracket(&h_p(&ps, &mu)?, &h_p(&ps, &nu)?)?)
        }),
        check("c", Scope::Poisson, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lhs = g_p(&ps, &extended_bracket(&ps, &mu, &nu)?)?;
            same(&lhs, &schouten(&g_p(&ps, &mu)?, &g_p(&ps, &nu)?)?)
        }),
        check("d-restricted", Scope::Symplectic, |t| {
            let (ps, a) = (t.ps(), t.alg());
            let (k, l) = (t.below(3), t.below(3));
            let mu = t.form("mu", &a, k);
            let nu = t.form("nu", &a, l);
            let lam = lambda_p(&ps, &mu, LambdaMode::Plain)?;
            let round = lambda_p(&ps, &lam, LambdaMode::Inverse)?;
            let br = schouten(&g_p(&ps, &mu)?, &g_p(&ps, &nu)?)?;
            let back = lambda_p(&ps, &br, LambdaMode::Inverse)?;
            Ok(first([
                ("Λ⁻¹Λμ", same(&round, &mu)?),
                ("Λ⁻¹[G μ, G ν]", same(&back, &d_tau(&extended_bracket(&ps, &mu, &nu)?)?)?),
            ]))
        }),
    ]
}
