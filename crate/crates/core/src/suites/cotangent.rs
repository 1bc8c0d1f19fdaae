//! Cotangent lifts: V_π, ι, the complete lift G and the maps J and G on mixed tensors.

use std::sync::Arc;

use super::helpers::{first, form_with_section, is_zero, monomials, rank, same, subsets};
use super::{check, once, Check, Scope, Trial, Trials};
use crate::algebroid::{section_bracket, Algebroid};
use crate::calculus::{d_tau, fn_bracket, lie_derivative, nr_bracket, schouten};
use crate::error::Result;
use crate::lifts::{cot_complete_vec, cot_complete_vec_hamiltonian, g_map_explicit, iota, j_map, vertical_pi};
use crate::poisson::{p_tilde, PoissonStructure};
use crate::ring::Chart;
use crate::tensor::{contract, wedge, GradedTensor, Kind};

fn vpi(mu: &GradedTensor) -> Result<GradedTensor> {
    Ok(vertical_pi(mu)?.into_tensor())
}

fn g(x: &GradedTensor) -> Result<GradedTensor> {
    Ok(cot_complete_vec(x)?.into_tensor())
}

fn j(k: &GradedTensor) -> Result<GradedTensor> {
    Ok(j_map(k)?.into_tensor())
}

/// ι(X) as a function on the dual chart.
fn iota_fn(x: &GradedTensor) -> Result<GradedTensor> {
    Ok(x.owner().dual_canonical().function(Kind::MultiVector, iota(x)?))
}

fn big_p(a: &Arc<Algebroid>) -> Result<(Arc<PoissonStructure>, GradedTensor)> {
    let ps = a.linear_poisson()?;
    let d = a.dual_canonical();
    let p = ps.bivector().transport(&d, Kind::MultiVector, |i| i, Clone::clone);
    Ok((ps, p))
}

/// G via the bracket definition [P, J(K)].
fn g_bracket(k: &GradedTensor) -> Result<GradedTensor> {
    let (_, p) = big_p(k.owner())?;
    schouten(&p, &j(k)?)
}

fn two_forms(t: &mut Trial) -> (Arc<Algebroid>, GradedTensor, GradedTensor) {
    let a = t.alg();
    let (k, l) = (t.below(3), t.below(3));
    let mu = t.form("mu", &a, k);
    let nu = t.form("nu", &a, l);
    (a, mu, nu)
}

pub(crate) fn theorem_15() -> Vec<Check> {
    vec![
        check("a", Scope::Algebroids, |t| {
            let (_, mu, nu) = two_forms(t);
            same(&vpi(&wedge(&mu, &nu)?)?, &wedge(&vpi(&mu)?, &vpi(&nu)?)?)
        }),
        check("b", Scope::Algebroids, |t| {
            let (_, mu, nu) = two_forms(t);
            Ok(is_zero(&schouten(&vpi(&mu)?, &vpi(&nu)?)?))
        }),
        check("c", Scope::Algebroids, |t| {
            let (a, mu, _) = two_forms(t);
            let x = t.section("X", &a);
            same(&schouten(&iota_fn(&x)?, &vpi(&mu)?)?, &vpi(&contract(&x, &mu)?)?.neg())
        }),
        check("d", Scope::Algebroids, |t| {
            let (a, mu, _) = two_forms(t);
            let (_, p) = big_p(&a)?;
            same(&schouten(&p, &vpi(&mu)?)?, &vpi(&d_tau(&mu)?)?)
        }),
        check("e", Scope::Algebroids, |t| {
            let (a, mu, _) = two_forms(t);
            let x = t.section("X", &a);
            same(&schouten(&g(&x)?, &vpi(&mu)?)?, &vpi(&lie_derivative(&x, &mu)?)?)
        }),
        check("f", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let y = t.section("Y", &a);
            same(&schouten(&g(&x)?, &g(&y)?)?, &g(&section_bracket(&x, &y)?)?)
        }),
        check("g", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let y = t.section("Y", &a);
            same(&schouten(&g(&x)?, &iota_fn(&y)?)?, &iota_fn(&section_bracket(&x, &y)?)?)
        }),
    ]
}

pub(crate) fn theorem_16() -> Vec<Check> {
    vec![
        check("J-sections", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            same(&j(&x)?, &iota_fn(&x)?.neg())
        }),
        check("G-sections", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            Ok(first([
                ("[P, J(X)]", same(&g_bracket(&x)?, &g(&x)?)?),
                ("explicit", same(&g_map_explicit(&x)?, &g(&x)?)?),
            ]))
        }),
        check("eq-6-1", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let (ps, _) = big_p(&a)?;
            let dix = d_tau(&ps.owner().function(Kind::Form, iota(&x)?))?;
            let pt = p_tilde(&ps, &dix)?;
            let gx = g(&x)?;
            let pt = pt.transport(gx.owner(), Kind::MultiVector, |i| i, Clone::clone);
            Ok(first([
                ("−[P, ιX]", same(&cot_complete_vec_hamiltonian(&x)?, &gx)?),
                ("P̃(dιX)", same(&pt, &gx)?),
            ]))
        }),
        check("J-linear", Scope::Algebroids, |t| {
            let a = t.alg();
            let k = t.below(3);
            let mu = t.form("mu", &a, k);
            let x = t.section("X", &a);
            let lhs = j(&form_with_section(&mu, &x)?)?;
            same(&lhs, &wedge(&iota_fn(&x)?, &vpi(&mu)?)?.neg())
        }),
        Check {
            id: "G-dual-path",
            scope: Scope::Algebroids,
            trials: Trials::AtLeast(100),
            body: |t| {
                let a = t.alg();
                let k = t.below(3);
                let m = t.mixed("K", &a, k);
                same(&g_bracket(&m)?, &g_map_explicit(&m)?)
            },
        },
    ]
}

/// Monomial basis x^α e^{*I} ⊗ e_j of mixed tensors over (x, y), |α| ≤ 2, |I| ≤ 2.
fn spanning_set() -> Result<Vec<GradedTensor>> {
    let a = Algebroid::canonical(&Chart::new(["x", "y"])?)?;
    let mut out = Vec::new();
    for k in 0..=2 {
        for form in subsets(2, k) {
            for jdx in 0..2 {
                for mono in monomials(2, 2) {
                    let mut key = form.clone();
                    key.push(jdx);
                    out.push(GradedTensor::from_terms(&a, Kind::Mixed, k, [(key, mono)]));
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn theorem_17() -> Vec<Check> {
    vec![
        check("homomorphism", Scope::Algebroids, |t| {
            let a = t.alg();
            let (p, q) = (t.below(3), t.below(3));
            let k = t.mixed("K", &a, p);
            let l = t.mixed("L", &a, q);
            same(&j(&nr_bracket(&k, &l)?)?, &schouten(&j(&k)?, &j(&l)?)?)
        }),
        once("injective", Scope::Once, |t| {
            let basis = spanning_set()?;
            let images: Vec<GradedTensor> = basis.iter().map(j).collect::<Result<_>>()?;
            let r = rank(&images);
            t.note(format!("J images of {} basis tensors over (x, y) have rank {r}", basis.len()));
            Ok((r != basis.len()).then(|| format!("rank {r} < {}", basis.len())))
        }),
    ]
}

pub(crate) fn theorem_18() -> Vec<Check> {
    vec![check("homomorphism", Scope::Algebroids, |t| {
        let a = t.alg();
        let (p, q) = (t.below(3), t.below(3));
        let k = t.mixed("K", &a, p);
        let l = t.mixed("L", &a, q);
        same(&g_bracket(&fn_bracket(&k, &l)?)?, &schouten(&g_bracket(&k)?, &g_bracket(&l)?)?)
    })]
}
