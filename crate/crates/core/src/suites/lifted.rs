//! Tangent lifts: ι, vertical and complete lifts, and their brackets.

use std::sync::Arc;

use super::helpers::{dotted_dual_to_lift_dual, first, is_zero, same, same_poly};
use super::{check, Check, Scope, Trial, Trials};
use crate::algebroid::{anchor_apply, complete_lift_fn, section_bracket, Algebroid};
use crate::calculus::{d_tau, fn_bracket, lie_derivative, nr_bracket, schouten};
use crate::error::Result;
use crate::lifts::{complete_lift, d_t, iota, v_t, vertical_lift};
use crate::poisson::{cotangent_algebroid, poisson_bracket};
use crate::tensor::{contract, wedge, GradedTensor, Kind};

type Out = Result<Option<String>>;

fn vl(t: &GradedTensor) -> Result<GradedTensor> {
    Ok(vertical_lift(t)?.into_tensor())
}

fn cl(t: &GradedTensor) -> Result<GradedTensor> {
    Ok(complete_lift(t)?.into_tensor())
}

/// A random section, or a symmetric multivector of degree ≤ 2.
fn liftable(t: &mut Trial, name: &str, a: &Arc<Algebroid>) -> GradedTensor {
    if t.gen.coin() {
        t.section(name, a)
    } else {
        let k = t.below(3);
        t.sym(name, a, k)
    }
}

fn iota_lift(t: &mut Trial, complete: bool) -> Out {
    let a = t.alg();
    let (n, m) = (a.nvars(), a.rank());
    let x = liftable(t, "X", &a);
    let lifted = if complete { cl(&x)? } else { vl(&x)? };
    let lhs = iota(&lifted)?;
    let ix = iota(&x)?;
    let base = if complete { complete_lift_fn(&ix, n + m) } else { ix.extend(2 * (n + m)) };
    let rhs = base.remap(&dotted_dual_to_lift_dual(n, m), 2 * (n + m));
    let tl = a.tangent_lift()?;
    Ok(same_poly(&tl.dual_chart(), &lhs, &rhs))
}

fn same_algebroid(x: &Algebroid, y: &Algebroid) -> Option<String> {
    if x.chart() != y.chart() {
        return Some(format!("charts {:?} vs {:?}", x.chart().coords(), y.chart().coords()));
    }
    if x.fibers() != y.fibers() {
        return Some(format!("fibers {:?} vs {:?}", x.fibers(), y.fibers()));
    }
    for i in 0..x.rank() {
        if x.anchor_row(i) != y.anchor_row(i) {
            return Some(format!("anchor row {}", i + 1));
        }
    }
    (x.structure_table() != y.structure_table()).then(|| "structure functions differ".to_string())
}

pub(crate) fn theorem_8() -> Vec<Check> {
    vec![
        check("iota-T", Scope::Algebroids, |t| iota_lift(t, true)),
        check("iota-V", Scope::Algebroids, |t| iota_lift(t, false)),
        check("functions", Scope::Algebroids, |t| {
            let a = t.alg();
            let n = a.nvars();
            let f = t.func("f", &a);
            let tl = a.tangent_lift()?;
            let s = a.function(Kind::MultiVector, f.clone());
            Ok(first([
                ("V(f)", same(&vl(&s)?, &tl.function(Kind::MultiVector, f.extend(2 * n)))?),
                ("T(f)", same(&cl(&s)?, &tl.function(Kind::MultiVector, complete_lift_fn(&f, n)))?),
            ]))
        }),
        check("eq-3-1", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let y = t.section("Y", &a);
            let ps = a.linear_poisson()?;
            let lhs = iota(&section_bracket(&x, &y)?)?;
            Ok(same_poly(ps.chart(), &lhs, &poisson_bracket(&ps, &iota(&x)?, &iota(&y)?)?))
        }),
        check("eq-3-2", Scope::Algebroids, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let f = t.func("f", &a);
            let ps = a.linear_poisson()?;
            let nn = ps.owner().nvars();
            let lhs = a.act_section(&x.section_coeffs()?, &f).extend(nn);
            Ok(same_poly(ps.chart(), &lhs, &poisson_bracket(&ps, &iota(&x)?, &f.extend(nn))?))
        }),
        Check {
            id: "lift-constructors",
            scope: Scope::Algebroids,
            trials: Trials::Fixed(1),
            body: |t| {
                let a = t.alg();
                let cot = a.cotangent_lift()?;
                let via = cotangent_algebroid(&*a.linear_poisson()?)?;
                let tl = a.tangent_lift()?;
                tl.validate()?;
                cot.validate()?;
                let ranks = (tl.rank() == 2 * a.rank() && tl.nvars() == 2 * a.nvars())
                    .then_some(())
                    .map_or(Some(format!("tangent lift has rank {}", tl.rank())), |_| None);
                Ok(first([("cotangent", same_algebroid(&cot, &via)), ("tangent", ranks)]))
            },
        },
        Check {
            id: "iterated",
            scope: Scope::Algebroids,
            trials: Trials::Fixed(1),
            body: |t| {
                let a = t.alg();
                let size = a.nvars() + a.rank();
                if size > 4 {
                    t.note(format!("iterated lifts skipped for base size {size}"));
                    return Ok(None);
                }
                let tl = a.tangent_lift()?;
                let cot = a.cotangent_lift()?;
                let lifts = [
                    ("TT", tl.tangent_lift()?),
                    ("T*T", tl.cotangent_lift()?),
                    ("TT*", cot.tangent_lift()?),
                    ("T*T*", cot.cotangent_lift()?),
                ];
                for (name, l) in &lifts {
                    if let Err(e) = l.validate() {
                        return Ok(Some(format!("{name}: {e}")));
                    }
                }
                let (ct, tc) = (&lifts[1].1, &lifts[2].1);
                if ct.rank() != tc.rank() || ct.nvars() != tc.nvars() || ct.rank() != 2 * size {
                    return Ok(Some(format!(
                        "T*T has rank {} over {} coordinates, TT* has rank {} over {}",
                        ct.rank(),
                        ct.nvars(),
                        tc.rank(),
                        tc.nvars()
                    )));
                }
                Ok(None)
            },
        },
    ]
}

/// A random multivector, form or mixed tensor together with a matching second factor.
fn factor_pair(t: &mut Trial, a: &Arc<Algebroid>) -> (GradedTensor, GradedTensor) {
    let (k, l) = (t.below(3), t.below(3));
    match t.below(3) {
        0 => (t.mv("X", a, k), t.mv("Y", a, l)),
        1 => (t.form("mu", a, k), t.form("nu", a, l)),
        _ => (t.form("mu", a, k), t.mixed("K", a, l)),
    }
}

pub(crate) fn theorem_9() -> Vec<Check> {
    vec![
        check("vertical", Scope::Algebroids, |t| {
            let a = t.alg();
            let (x, y) = factor_pair(t, &a);
            same(&vl(&wedge(&x, &y)?)?, &wedge(&vl(&x)?, &vl(&y)?)?)
        }),
        check("complete", Scope::Algebroids, |t| {
            let a = t.alg();
            let (x, y) = factor_pair(t, &a);
            let rhs = wedge(&cl(&x)?, &vl(&y)?)?.add(&wedge(&vl(&x)?, &cl(&y)?)?)?;
            same(&cl(&wedge(&x, &y)?)?, &rhs)
        }),
        check("functions", Scope::Algebroids, |t| {
            let a = t.alg();
            let f = t.func("f", &a);
            let x = t.section("X", &a);
            let n = a.nvars();
            let tf = complete_lift_fn(&f, n);
            let vf = f.extend(2 * n);
            let fx = x.mul_fn(&f);
            let rhs = vl(&x)?.mul_fn(&tf).add(&cl(&x)?.mul_fn(&vf))?;
            Ok(first([("V(fX)", same(&vl(&fx)?, &vl(&x)?.mul_fn(&vf))?), ("T(fX)", same(&cl(&fx)?, &rhs)?)]))
        }),
    ]
}

pub(crate) fn theorem_10() -> Vec<Check> {
    vec![
        check("anchor-V", Scope::Charted, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let lhs = anchor_apply(&vl(&x)?)?;
            same(&lhs, v_t(&anchor_apply(&x)?)?.tensor())
        }),
        check("anchor-T", Scope::Charted, |t| {
            let a = t.alg();
            let x = t.section("X", &a);
            let lhs = anchor_apply(&cl(&x)?)?;
            same(&lhs, d_t(&anchor_apply(&x)?)?.tensor())
        }),
    ]
}

type Bracket = fn(&GradedTensor, &GradedTensor) -> Result<GradedTensor>;

/// [V,V] = 0, [V,T] = [T,V] = V[,], [T,T] = T[,].
fn lift_table(t: &mut Trial, part: char, br: Bracket, mixed: bool) -> Out {
    let a = t.alg();
    let (p, q) = (t.below(3), t.below(3));
    let (x, y) = if mixed { (t.mixed("K", &a, p), t.mixed("L", &a, q)) } else { (t.mv("X", &a, p), t.mv("Y", &a, q)) };
    match part {
        'a' => Ok(is_zero(&br(&vl(&x)?, &vl(&y)?)?)),
        'b' => {
            let v = vl(&br(&x, &y)?)?;
            Ok(first([
                ("[V,T]", same(&br(&vl(&x)?, &cl(&y)?)?, &v)?),
                ("[T,V]", same(&br(&cl(&x)?, &vl(&y)?)?, &v)?),
            ]))
        }
        _ => same(&br(&cl(&x)?, &cl(&y)?)?, &cl(&br(&x, &y)?)?),
    }
}

pub(crate) fn theorem_11() -> Vec<Check> {
    vec![
        check("a", Scope::Algebroids, |t| lift_table(t, 'a', schouten, false)),
        check("b", Scope::Algebroids, |t| lift_table(t, 'b', schouten, false)),
        check("c", Scope::Algebroids, |t| lift_table(t, 'c', schouten, false)),
    ]
}

pub(crate) fn theorem_13() -> Vec<Check> {
    vec![
        check("a", Scope::Algebroids, |t| lift_table(t, 'a', nr_bracket, true)),
        check("b", Scope::Algebroids, |t| lift_table(t, 'b', nr_bracket, true)),
        check("c", Scope::Algebroids, |t| lift_table(t, 'c', nr_bracket, true)),
    ]
}

pub(crate) fn theorem_14() -> Vec<Check> {
    vec![
        check("a", Scope::Algebroids, |t| lift_table(t, 'a', fn_bracket, true)),
        check("b", Scope::Algebroids, |t| lift_table(t, 'b', fn_bracket, true)),
        check("c", Scope::Algebroids, |t| lift_table(t, 'c', fn_bracket, true)),
    ]
}

/// Lifts used by one instance of the calculus table.
struct Lifts {
    v: fn(&GradedTensor) -> Result<GradedTensor>,
    t: fn(&GradedTensor) -> Result<GradedTensor>,
}

const ALGEBROID_LIFTS: Lifts = Lifts { v: vl, t: cl };

fn classical_v(x: &GradedTensor) -> Result<GradedTensor> {
    Ok(v_t(x)?.into_tensor())
}

fn classical_d(x: &GradedTensor) -> Result<GradedTensor> {
    Ok(d_t(x)?.into_tensor())
}

const CLASSICAL_LIFTS: Lifts = Lifts { v: classical_v, t: classical_d };

fn inputs(t: &mut Trial) -> (GradedTensor, GradedTensor) {
    let a = t.alg();
    let k = t.below(3);
    (t.section("X", &a), t.form("mu", &a, k))
}

fn table_12(t: &mut Trial, item: &str, l: &Lifts) -> Out {
    let (x, mu) = inputs(t);
    let (v, c) = (l.v, l.t);
    match item {
        "1a" => Ok(is_zero(&contract(&v(&x)?, &v(&mu)?)?)),
        "1b" => {
            let rhs = v(&contract(&x, &mu)?)?;
            Ok(first([
                ("i_V T", same(&contract(&v(&x)?, &c(&mu)?)?, &rhs)?),
                ("i_T V", same(&contract(&c(&x)?, &v(&mu)?)?, &rhs)?),
            ]))
        }
        "1c" => same(&contract(&c(&x)?, &c(&mu)?)?, &c(&contract(&x, &mu)?)?),
        "2a" => same(&d_tau(&v(&mu)?)?, &v(&d_tau(&mu)?)?),
        "2b" => same(&d_tau(&c(&mu)?)?, &c(&d_tau(&mu)?)?),
        "3a" => Ok(is_zero(&lie_derivative(&v(&x)?, &v(&mu)?)?)),
        "3b" => {
            let rhs = v(&lie_derivative(&x, &mu)?)?;
            Ok(first([
                ("L_V T", same(&lie_derivative(&v(&x)?, &c(&mu)?)?, &rhs)?),
                ("L_T V", same(&lie_derivative(&c(&x)?, &v(&mu)?)?, &rhs)?),
            ]))
        }
        _ => same(&lie_derivative(&c(&x)?, &c(&mu)?)?, &c(&lie_derivative(&x, &mu)?)?),
    }
}

fn classical_table(t: &mut Trial) -> Out {
    for item in ["1a", "1b", "1c", "2a", "2b", "3a", "3b", "3c"] {
        if let Some(r) = table_12(t, item, &CLASSICAL_LIFTS)? {
            return Ok(Some(format!("{item}: {r}")));
        }
    }
    Ok(None)
}

pub(crate) fn theorem_12() -> Vec<Check> {
    vec![
        check("1a", Scope::Algebroids, |t| table_12(t, "1a", &ALGEBROID_LIFTS)),
        check("1b", Scope::Algebroids, |t| table_12(t, "1b", &ALGEBROID_LIFTS)),
        check("1c", Scope::Algebroids, |t| table_12(t, "1c", &ALGEBROID_LIFTS)),
        check("2a", Scope::Algebroids, |t| table_12(t, "2a", &ALGEBROID_LIFTS)),
        check("2b", Scope::Algebroids, |t| table_12(t, "2b", &ALGEBROID_LIFTS)),
        check("3a", Scope::Algebroids, |t| table_12(t, "3a", &ALGEBROID_LIFTS)),
        check("3b", Scope::Algebroids, |t| table_12(t, "3b", &ALGEBROID_LIFTS)),
        check("3c", Scope::Algebroids, |t| table_12(t, "3c", &ALGEBROID_LIFTS)),
        check("classical", Scope::Canonical, classical_table),
    ]
}
