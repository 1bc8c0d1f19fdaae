//! The canonical algebroid: κ, α, classical lifts and the maps J*, H, G.

use std::sync::Arc;

use super::helpers::{
    classical_lift, dfun, first, form_with_section, g_local, h_local, monomials, pullback, rank, same, subsets,
    tangent_linear_poisson, wedge_all,
};
use super::{check, once, Check, Scope, Trial};
use crate::algebroid::{anchor_apply, complete_lift_fn, Algebroid};
use crate::calculus::{d_tau, fn_bracket, nr_bracket, schouten};
use crate::error::Result;
use crate::lifts::{complete_lift, d_t, flip, h_map, j_map, jstar, v_t, vertical_lift, vertical_pi};
use crate::poisson::{extended_bracket, lambda_p, linear_poisson, tangent_poisson, LambdaMode, PoissonStructure};
use crate::ring::{Chart, Poly};
use crate::tensor::{wedge, GradedTensor, Kind};

type Out = Result<Option<String>>;

fn vt(x: &GradedTensor) -> Result<GradedTensor> {
    Ok(v_t(x)?.into_tensor())
}

fn dt(x: &GradedTensor) -> Result<GradedTensor> {
    Ok(d_t(x)?.into_tensor())
}

/// A random multivector, symmetric tensor, form or mixed tensor.
fn any_tensor(t: &mut Trial, a: &Arc<Algebroid>) -> GradedTensor {
    let k = t.below(3);
    match t.below(4) {
        0 => t.mv("X", a, k),
        1 => t.sym("X", a, k),
        2 => t.form("mu", a, k),
        _ => t.mixed("K", a, 1),
    }
}

pub(crate) fn theorem_19() -> Vec<Check> {
    vec![
        check("classical", Scope::Canonical, |t| {
            let a = t.alg();
            let x = any_tensor(t, &a);
            Ok(first([
                ("v_T", same(&vt(&x)?, &classical_lift(&x, false)?)?),
                ("d_T", same(&dt(&x)?, &classical_lift(&x, true)?)?),
            ]))
        }),
        check("kappa-alpha", Scope::Canonical, |t| {
            let a = t.alg();
            let x = any_tensor(t, &a);
            Ok(first([
                ("V", same(&flip(&vt(&x)?)?, vertical_lift(&x)?.tensor())?),
                ("T", same(&flip(&dt(&x)?)?, complete_lift(&x)?.tensor())?),
            ]))
        }),
        check("involution", Scope::Canonical, |t| {
            let a = t.alg();
            let tl = a.tangent_lift()?;
            let k = t.below(3);
            let x = if t.gen.coin() { t.mv("X", &tl, k) } else { t.form("mu", &tl, k) };
            same(&flip(&flip(&x)?)?, &x)
        }),
    ]
}

fn tangent_alpha(t: &mut Trial) -> Out {
    let a = t.alg();
    let n = a.nvars();
    let ps = linear_poisson(&a)?;
    let lifted = tangent_poisson(&ps)?;
    let target = linear_poisson(&Algebroid::canonical(&a.chart().dotted()?)?)?;
    // (x, p, ẋ, ṗ) → (x, ẋ, p_x = ṗ, p_ẋ = p)
    let map: Vec<usize> = (0..n).chain((0..n).map(|i| 3 * n + i)).chain((0..n).map(|i| n + i)).chain((0..n).map(|i| 2 * n + i)).collect();
    let moved = lifted
        .bivector()
        .transport(target.owner(), Kind::MultiVector, |i| map[i], |p| p.remap(&map, 4 * n));
    same(&moved, target.bivector())
}

pub(crate) fn theorem_20() -> Vec<Check> {
    vec![
        check("bracket", Scope::Canonical, |t| {
            let a = t.alg();
            let tl = a.tangent_lift()?;
            let (p, q) = (t.below(3), t.below(3));
            let x = t.mv("X", &tl, p);
            let y = t.mv("Y", &tl, q);
            same(&flip(&schouten(&x, &y)?)?, &schouten(&flip(&x)?, &flip(&y)?)?)
        }),
        check("anchor", Scope::Canonical, |t| {
            let a = t.alg();
            let tl = a.tangent_lift()?;
            let s = t.section("s", &tl);
            same(&anchor_apply(&s)?, &flip(&s)?)
        }),
        check("tangent-poisson-closed", Scope::Poisson, |t| {
            let ps = t.ps();
            tangent_poisson(&ps)?;
            Ok(None)
        }),
        check("tangent-poisson-formula", Scope::Algebroids, |t| {
            let a = t.alg();
            let lifted = tangent_poisson(&*a.linear_poisson()?)?;
            let expected = tangent_linear_poisson(&a)?;
            let moved = lifted.bivector().transport(expected.owner(), Kind::MultiVector, |i| i, Clone::clone);
            t.note(
                "anchor terms: ρ ∂ξ∧∂ẋ and ρ ∂ξ̇∧∂x appear once each; a repeated ρ ∂ξ∧∂x term in the hand-written local form is not produced by the complete lift",
            );
            same(&moved, &expected)
        }),
        check("tangent-poisson-alpha", Scope::Canonical, tangent_alpha),
    ]
}

type Bracket = fn(&GradedTensor, &GradedTensor) -> Result<GradedTensor>;

fn classical_brackets(t: &mut Trial, br: Bracket, mixed: bool) -> Out {
    let a = t.alg();
    let (p, q) = (t.below(3), t.below(3));
    let (x, y) = if mixed { (t.mixed("K", &a, p), t.mixed("L", &a, q)) } else { (t.mv("X", &a, p), t.mv("Y", &a, q)) };
    let xy = br(&x, &y)?;
    let vv = br(&vt(&x)?, &vt(&y)?)?;
    Ok(first([
        ("[v,v]", (!vv.is_zero()).then(|| vv.pretty())),
        ("[v,d]", same(&br(&vt(&x)?, &dt(&y)?)?, &vt(&xy)?)?),
        ("[d,v]", same(&br(&dt(&x)?, &vt(&y)?)?, &vt(&xy)?)?),
        ("[d,d]", same(&br(&dt(&x)?, &dt(&y)?)?, &dt(&xy)?)?),
    ]))
}

pub(crate) fn theorem_21() -> Vec<Check> {
    vec![
        check("schouten", Scope::Canonical, |t| classical_brackets(t, schouten, false)),
        check("nr", Scope::Canonical, |t| classical_brackets(t, nr_bracket, true)),
        check("fn", Scope::Canonical, |t| classical_brackets(t, fn_bracket, true)),
    ]
}

fn canonical_poisson(a: &Arc<Algebroid>) -> Result<Arc<PoissonStructure>> {
    a.linear_poisson()
}

fn lam_star(ps: &PoissonStructure, mu: &GradedTensor) -> Result<GradedTensor> {
    lambda_p(ps, mu, LambdaMode::Starred)
}

/// ι(X)·π*μ on (x, p).
fn iota_pullback(mu: &GradedTensor, x: &GradedTensor) -> Result<GradedTensor> {
    Ok(jstar(&form_with_section(mu, x)?)?.into_tensor())
}

pub(crate) fn theorem_22() -> Vec<Check> {
    vec![
        check("1", Scope::Canonical, |t| {
            let a = t.alg();
            let k = t.below(3);
            let mu = t.form("mu", &a, k);
            let ps = canonical_poisson(&a)?;
            same(&lam_star(&ps, &pullback(&mu))?, &ps.adopt(vertical_pi(&mu)?.tensor())?)
        }),
        check("2", Scope::Canonical, |t| {
            let a = t.alg();
            let k = t.below(3);
            let mu = t.form("mu", &a, k);
            let x = t.section("X", &a);
            let ps = canonical_poisson(&a)?;
            let j = j_map(&form_with_section(&mu, &x)?)?.into_tensor();
            same(&lam_star(&ps, &iota_pullback(&mu, &x)?)?, &ps.adopt(&j)?.neg())
        }),
        check("3", Scope::Canonical, |t| {
            let a = t.alg();
            let k = t.below(3);
            let mu = t.form("mu", &a, k);
            let x = t.section("X", &a);
            let ps = canonical_poisson(&a)?;
            let kk = form_with_section(&mu, &x)?;
            let j = ps.adopt(j_map(&kk)?.tensor())?;
            let g = schouten(ps.bivector(), &j)?;
            same(&lam_star(&ps, &d_tau(&iota_pullback(&mu, &x)?)?)?, &g.neg())
        }),
    ]
}

/// 1, dφ or dφ∧dψ for random φ, ψ.
fn closed_form(t: &mut Trial, a: &Arc<Algebroid>, name: &str) -> Result<GradedTensor> {
    let k = t.below(3).min(a.rank());
    let fs: Vec<GradedTensor> = (0..k).map(|i| t.func(&format!("{name}{i}"), a)).map(|f| dfun(a, &f)).collect::<Result<_>>()?;
    wedge_all(a, &fs)
}

pub(crate) fn theorem_23() -> Vec<Check> {
    vec![
        check("definition", Scope::Canonical, |t| {
            let a = t.alg();
            let k = t.below(3);
            let mu = t.form("mu", &a, k);
            let x = t.section("X", &a);
            let ix = a.dual_canonical().function(Kind::Form, crate::lifts::iota(&x)?);
            same(&iota_pullback(&mu, &x)?, &wedge(&ix, &pullback(&mu))?)
        }),
        check("homomorphism", Scope::Canonical, |t| {
            let a = t.alg();
            let mu = closed_form(t, &a, "phi")?;
            let nu = closed_form(t, &a, "psi")?;
            let x = t.section("X", &a);
            let y = t.section("Y", &a);
            let k = form_with_section(&mu, &x)?;
            let l = form_with_section(&nu, &y)?;
            let ps = canonical_poisson(&a)?;
            let js = |m: &GradedTensor| -> Result<GradedTensor> { ps.adopt(jstar(m)?.tensor()) };
            same(&extended_bracket(&ps, &js(&k)?, &js(&l)?)?, &js(&fn_bracket(&k, &l)?)?)
        }),
    ]
}

fn xy() -> Result<Arc<Algebroid>> {
    Algebroid::canonical(&Chart::new(["x", "y"])?)
}

pub(crate) fn theorem_24() -> Vec<Check> {
    vec![
        check("h-local", Scope::Canonical, |t| {
            let a = t.alg();
            let k = t.below(3);
            let m = t.mixed("K", &a, k);
            let h = h_map(&m)?.into_tensor();
            let expected = h_local(&m)?;
            same(&h.transport(expected.owner(), h.kind(), |i| i, Clone::clone), &expected)
        }),
        check("g-local", Scope::Canonical, |t| {
            let a = t.alg();
            let k = t.below(3);
            let m = t.mixed("K", &a, k);
            let ps = canonical_poisson(&a)?;
            let g = schouten(ps.bivector(), &ps.adopt(j_map(&m)?.tensor())?)?;
            let expected = g_local(&m)?;
            same(&g.transport(expected.owner(), g.kind(), |i| i, Clone::clone), &expected)
        }),
        once("h-injective", Scope::Once, |t| {
            let a = xy()?;
            let mut basis = Vec::new();
            for i in 0..2 {
                for j in 0..2 {
                    for mono in monomials(2, 2) {
                        basis.push(GradedTensor::from_terms(&a, Kind::Mixed, 1, [(vec![i, j], mono)]));
                    }
                }
            }
            let images: Vec<GradedTensor> = basis.iter().map(|k| Ok(h_map(k)?.into_tensor())).collect::<Result<_>>()?;
            let r = rank(&images);
            t.note(format!("H images of {} basis tensors over (x, y) have rank {r}", basis.len()));
            Ok((r != basis.len()).then(|| format!("rank {r} < {}", basis.len())))
        }),
        once("g-injective", Scope::Once, |t| {
            let a = xy()?;
            let mut basis = Vec::new();
            for k in 0..=2 {
                for form in subsets(2, k) {
                    for j in 0..2 {
                        for mono in monomials(2, 2) {
                            let mut key = form.clone();
                            key.push(j);
                            basis.push(GradedTensor::from_terms(&a, Kind::Mixed, k, [(key, mono)]));
                        }
                    }
                }
            }
            let images: Vec<GradedTensor> = basis.iter().map(g_local).collect::<Result<_>>()?;
            let r = rank(&images);
            t.note(format!("G images of {} basis tensors over (x, y) have rank {r}", basis.len()));
            Ok((r != basis.len()).then(|| format!("rank {r} < {}", basis.len())))
        }),
        once("nijenhuis", Scope::Once, |_| {
            let a = Algebroid::canonical(&Chart::new(["x"])?)?;
            let n = GradedTensor::basis(&a, Kind::Mixed, &[0, 0]);
            let ps = canonical_poisson(&a)?;
            let g = schouten(ps.bivector(), &ps.adopt(j_map(&n)?.tensor())?)?;
            let nn = fn_bracket(&n, &n)?;
            let gg = schouten(&g, &g)?;
            Ok(first([
                ("[N,N]", (!nn.is_zero()).then(|| nn.pretty())),
                ("[GN,GN]", (!gg.is_zero()).then(|| gg.pretty())),
            ]))
        }),
        check("nijenhuis-criterion", Scope::Canonical, |t| {
            let a = t.alg();
            let n = if t.gen.coin() {
                t.mixed("N", &a, 1)
            } else {
                // f dx^a ⊗ ∂_a, which is Nijenhuis when f depends on x^a only
                let i = t.below(a.nvars());
                let f = Poly::var(i, a.nvars()).pow(1 + t.below(2) as u32);
                let n = GradedTensor::from_terms(&a, Kind::Mixed, 1, [(vec![i, i], f)]);
                t.record("N", &n);
                n
            };
            let ps = canonical_poisson(&a)?;
            let g = schouten(ps.bivector(), &ps.adopt(j_map(&n)?.tensor())?)?;
            let nn = fn_bracket(&n, &n)?.is_zero();
            let gg = schouten(&g, &g)?.is_zero();
            if nn {
                t.note("sampled Nijenhuis tensors");
            }
            Ok((nn != gg).then(|| format!("[N,N] = 0 is {nn} but [GN,GN] = 0 is {gg}")))
        }),
    ]
}

pub(crate) fn eq_7_12() -> Vec<Check> {
    vec![check("alpha-d", Scope::Canonical, |t| {
        let a = t.alg();
        let tl = a.tangent_lift()?;
        let k = t.below(3);
        let mu = t.form("mu", &tl, k);
        same(&flip(&d_tau(&mu)?)?, &d_tau(&flip(&mu)?)?)
    })]
}

pub(crate) fn eq_7_13() -> Vec<Check> {
    vec![check("anchor", Scope::Charted, |t| {
        let a = t.alg();
        let (n, m) = (a.nvars(), a.rank());
        let tl = a.tangent_lift()?;
        let s = t.section("s", &tl);
        let c = s.section_coeffs()?;
        let base = tl.base_canonical().expect("charted");
        let mut coeffs = vec![Poly::zero(2 * n); 2 * n];
        for i in 0..m {
            let (bar, dot) = (&c[i], &c[m + i]);
            for b in 0..n {
                let delta = a.anchor(i, b);
                coeffs[b].add_product(dot, &delta.extend(2 * n));
                coeffs[n + b].add_product(bar, &delta.extend(2 * n));
                coeffs[n + b].add_product(dot, &complete_lift_fn(delta, n));
            }
        }
        same(&anchor_apply(&s)?, &base.section(&coeffs))
    })]
}
