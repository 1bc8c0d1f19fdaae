//! Shared oracles and small builders for the identity suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebroid::{complete_lift_fn, Algebroid};
use crate::calculus::{d_tau, form_tensor_section, lie_derivative};
use crate::error::Result;
use crate::poisson::{lambda_p, poisson_bracket, LambdaMode, PoissonStructure};
use crate::ring::{Chart, Poly, Rational};
use crate::tensor::{contract, wedge, GradedTensor, Kind};

pub fn is_symplectic(ps: &PoissonStructure) -> bool {
    ps.is_constant()
        && ps.owner().nvars() > 0
        && lambda_p(ps, &ps.owner().basis(0), LambdaMode::Inverse).is_ok()
}

/// `None` when equal, otherwise the printed difference.
pub fn same(lhs: &GradedTensor, rhs: &GradedTensor) -> Result<Option<String>> {
    lhs.same_owner(rhs)?;
    if lhs == rhs {
        return Ok(None);
    }
    Ok(Some(match lhs.sub(rhs) {
        Ok(d) => format!("lhs − rhs = {}", d.pretty()),
        Err(_) => format!("lhs = {}, rhs = {}", lhs.pretty(), rhs.pretty()),
    }))
}

pub fn same_poly(chart: &Chart, lhs: &Poly, rhs: &Poly) -> Option<String> {
    let d = lhs - rhs;
    (!d.is_zero()).then(|| format!("lhs − rhs = {}", chart.print(&d)))
}

pub fn is_zero(t: &GradedTensor) -> Option<String> {
    (!t.is_zero()).then(|| format!("nonzero: {}", t.pretty()))
}

/// First failure among several parts, labelled.
pub fn first(parts: impl IntoIterator<Item = (&'static str, Option<String>)>) -> Option<String> {
    parts.into_iter().find_map(|(label, r)| r.map(|r| format!("{label}: {r}")))
}

pub fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

pub fn sum(terms: &[GradedTensor]) -> Result<GradedTensor> {
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        out = out.add(t)?;
    }
    Ok(out)
}

/// μ ⊗ X = Σ_j X^j μ ⊗ e_j.
pub fn form_with_section(mu: &GradedTensor, x: &GradedTensor) -> Result<GradedTensor> {
    let xs = x.section_coeffs()?;
    let mut out = GradedTensor::zero(mu.owner(), Kind::Mixed, mu.degree());
    for (j, c) in xs.iter().enumerate() {
        if !c.is_zero() {
            out.accumulate(&form_tensor_section(&mu.mul_fn(c), j));
        }
    }
    Ok(out)
}

/// A function as a degree-0 form.
pub fn fun(a: &Arc<Algebroid>, f: &Poly) -> GradedTensor {
    a.function(Kind::Form, f.clone())
}

/// df for a function f.
pub fn dfun(a: &Arc<Algebroid>, f: &Poly) -> Result<GradedTensor> {
    d_tau(&fun(a, f))
}

pub fn wedge_all(a: &Arc<Algebroid>, factors: &[GradedTensor]) -> Result<GradedTensor> {
    let mut acc = a.function(Kind::Form, Poly::one(a.nvars()));
    for f in factors {
        acc = wedge(&acc, f)?;
    }
    Ok(acc)
}

/// π*μ: a form on the base pulled back to the dual chart (x, ξ).
pub fn pullback(mu: &GradedTensor) -> GradedTensor {
    let d = mu.owner().dual_canonical();
    let nn = d.nvars();
    mu.transport(&d, Kind::Form, |i| i, |p| p.extend(nn))
}

/// Variable map from the dotted dual chart (x, ξ, ẋ, ξ̇) to the dual chart of
/// the tangent lift (x, ẋ, ξ̄, ξ̇).
pub fn dotted_dual_to_lift_dual(n: usize, m: usize) -> Vec<usize> {
    let mut map = Vec::with_capacity(2 * (n + m));
    map.extend(0..n);
    map.extend((0..m).map(|i| 2 * n + i));
    map.extend((0..n).map(|a| n + a));
    map.extend((0..m).map(|i| 2 * n + m + i));
    map
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Vector,
    Covector,
}

fn slots(t: &GradedTensor) -> Vec<Slot> {
    match t.kind() {
        Kind::MultiVector | Kind::Sym => vec![Slot::Vector; t.degree()],
        Kind::Form => vec![Slot::Covector; t.degree()],
        Kind::Mixed => {
            let mut s = vec![Slot::Covector; t.degree()];
            s.push(Slot::Vector);
            s
        }
    }
}

/// Classical lifts on the dotted chart computed factor by factor:
/// v(∂_a) = ∂ẋ^a, v(dx^a) = dx^a, d(∂_a) = ∂_a, d(dx^a) = dẋ^a, and d_T is a
/// v_T-derivation.
pub fn classical_lift(t: &GradedTensor, complete: bool) -> Result<GradedTensor> {
    let a = t.owner();
    let n = a.nvars();
    let target = Algebroid::canonical(&a.chart().dotted()?)?;
    let sl = slots(t);
    let v = |s: Slot, i: usize| if s == Slot::Vector { n + i } else { i };
    let d = |s: Slot, i: usize| if s == Slot::Vector { i } else { n + i };
    let mut out = GradedTensor::zero(&target, t.kind(), t.degree());
    for (key, f) in t.terms() {
        let vk: Vec<usize> = key.iter().zip(&sl).map(|(&i, &s)| v(s, i as usize)).collect();
        if !complete {
            out.add_raw_term(&vk, &f.extend(2 * n));
            continue;
        }
        out.add_raw_term(&vk, &complete_lift_fn(f, n));
        for p in 0..key.len() {
            let mut k = vk.clone();
            k[p] = d(sl[p], key[p] as usize);
            out.add_raw_term(&k, &f.extend(2 * n));
        }
    }
    Ok(out)
}

/// Rank over Q of a family of tensors, by Gaussian elimination on their
/// (key, monomial) coordinates.
pub fn rank(family: &[GradedTensor]) -> usize {
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut sparse: Vec<Vec<(usize, Rational)>> = Vec::new();
    for t in family {
        let mut row = Vec::new();
        for (k, p) in t.terms() {
            for (e, c) in p.terms() {
                let label = format!("{}:{}:{:?}|{:?}", t.kind().name(), t.degree(), k.as_slice(), e.as_slice());
                let next = index.len();
                let col = *index.entry(label).or_insert(next);
                row.push((col, c.clone()));
            }
        }
        sparse.push(row);
    }
    let width = index.len();
    for s in sparse {
        let mut row = vec![Rational::from_int(0); width];
        for (c, v) in s {
            row[c] = v;
        }
        rows.push(row);
    }
    let mut r = 0;
    for col in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, piv);
        let inv = rows[r][col].recip().expect("nonzero pivot");
        let pivot: Vec<Rational> = rows[r].iter().map(|x| x * &inv).collect();
        for i in r + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for (x, p) in rows[i].iter_mut().zip(&pivot) {
                *x -= &(&f * p);
            }
        }
        rows[r] = pivot;
        r += 1;
    }
    r
}

/// Monomials x^α with |α| ≤ `deg` in `n` variables.
pub fn monomials(n: usize, deg: u32) -> Vec<Poly> {
    let mut out = vec![Poly::one(n)];
    let mut layer = vec![Poly::one(n)];
    for _ in 0..deg {
        let mut next: Vec<Poly> = Vec::new();
        for p in &layer {
            for v in 0..n {
                let q = p * &Poly::var(v, n);
                if !next.contains(&q) {
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Increasing index tuples of length `k` from `0..m`.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for s in subsets(m, k - 1) {
        let start = s.last().map_or(0, |&l| l + 1);
        for i in start..m {
            let mut t = s.clone();
            t.push(i);
            out.push(t);
        }
    }
    out
}

/// Literal expansion of {g_0 dg_1∧…∧dg_k, f_0 df_1∧…∧df_l} in terms of
/// Poisson brackets of the functions.
pub fn extended_bracket_literal(ps: &PoissonStructure, g: &[Poly], f: &[Poly]) -> Result<GradedTensor> {
    let a = ps.owner();
    let k = g.len() - 1;
    let l = f.len() - 1;
    let dg: Vec<GradedTensor> = g.iter().map(|p| dfun(a, p)).collect::<Result<_>>()?;
    let df: Vec<GradedTensor> = f.iter().map(|p| dfun(a, p)).collect::<Result<_>>()?;
    let br = |i: usize, j: usize| poisson_bracket(ps, &g[i], &f[j]);
    let without = |v: &[GradedTensor], from: usize, skip: usize| -> Vec<GradedTensor> {
        (from..v.len()).filter(|&i| i != skip).map(|i| v[i].clone()).collect()
    };
    let sgn = |e: usize| e % 2 == 1;
    let mut out = GradedTensor::zero(a, Kind::Form, k + l);
    let mut head = without(&dg, 1, usize::MAX);
    head.extend(without(&df, 1, usize::MAX));
    out.accumulate(&wedge_all(a, &head)?.mul_fn(&br(0, 0)?));
    for i in 1..=k {
        for j in 0..=l {
            let mut fs = vec![dfun(a, &br(i, j)?)?];
            fs.extend(without(&dg, 1, i));
            fs.extend(without(&df, 0, j));
            let t = wedge_all(a, &fs)?.mul_fn(&g[0]);
            out.accumulate(&t.signed(!sgn(i + j)));
        }
    }
    for j in 1..=l {
        for i in 0..=k {
            let mut fs = vec![dfun(a, &br(i, j)?)?];
            fs.extend(without(&dg, 0, i));
            fs.extend(without(&df, 1, j));
            let t = wedge_all(a, &fs)?.mul_fn(&f[0]);
            out.accumulate(&t.signed(!sgn(i + j + k)));
        }
    }
    for i in 1..=k {
        for j in 1..=l {
            let mut fs = without(&dg, 0, i);
            fs.extend(without(&df, 0, j));
            let t = wedge_all(a, &fs)?.mul_fn(&br(i, j)?);
            out.accumulate(&t.signed(!sgn(i + j)));
        }
    }
    Ok(out)
}

/// The explicit F-N bracket of μ⊗X and ν⊗Y:
/// μ∧ν⊗[X,Y] + μ∧L_Xν⊗Y − L_Yμ∧ν⊗X + (−1)^k (dμ∧i_Xν⊗Y + i_Yμ∧dν⊗X).
pub fn fn_explicit(mu: &GradedTensor, x: &GradedTensor, nu: &GradedTensor, y: &GradedTensor) -> Result<GradedTensor> {
    let k = mu.degree();
    let xy = crate::algebroid::section_bracket(x, y)?;
    let mut out = form_with_section(&wedge(mu, nu)?, &xy)?;
    out.accumulate(&form_with_section(&wedge(mu, &lie_derivative(x, nu)?)?, y)?);
    out.subtract(&form_with_section(&wedge(&lie_derivative(y, mu)?, nu)?, x)?);
    let mut tail = form_with_section(&wedge(&d_tau(mu)?, &contract(x, nu)?)?, y)?;
    tail.accumulate(&form_with_section(&wedge(&contract(y, mu)?, &d_tau(nu)?)?, x)?);
    out.accumulate(&tail.signed(k % 2 == 1));
    Ok(out)
}

/// Λ_P(μ) ⊗ Λ_P^{-1}(X) as a mixed tensor of the cotangent algebroid.
pub fn f_p(ps: &PoissonStructure, cot: &Arc<Algebroid>, k: &GradedTensor) -> Result<GradedTensor> {
    let a = ps.owner();
    let kd = k.mixed_degree();
    let mut out = GradedTensor::zero(cot, Kind::Mixed, kd);
    for (key, f) in k.terms() {
        let form: Vec<usize> = key[..kd].iter().map(|&i| i as usize).collect();
        let j = key[kd] as usize;
        let mu = GradedTensor::from_terms(a, Kind::Form, kd, [(form, f.clone())]);
        let lam = lambda_p(ps, &mu, LambdaMode::Plain)?;
        let fib = lambda_p(ps, &a.basis(j), LambdaMode::Inverse)?;
        for (lk, lc) in lam.terms() {
            for (fk, fc) in fib.terms() {
                let mut raw: Vec<usize> = lk.iter().map(|&i| i as usize).collect();
                raw.push(fk[0] as usize);
                out.add_raw_term(&raw, &(lc * fc));
            }
        }
    }
    Ok(out)
}

/// Reconciled complete lift of the linear Poisson tensor of `a`, on the
/// dotted dual chart (x, ξ, ẋ, ξ̇).
pub fn tangent_linear_poisson(a: &Arc<Algebroid>) -> Result<GradedTensor> {
    let (n, m) = (a.nvars(), a.rank());
    let nn = n + m;
    let chart = a.dual_chart().dotted()?;
    let target = Algebroid::canonical(&chart)?;
    let big = 2 * nn;
    let xi = |k: usize| Poly::var(n + k, big);
    let xid = |k: usize| Poly::var(nn + n + k, big);
    let (u, ud) = (|i: usize| n + i, |i: usize| nn + n + i);
    let (x, xd) = (|b: usize| b, |b: usize| nn + b);
    let mut out = GradedTensor::zero(&target, Kind::MultiVector, 2);
    for i in 0..m {
        for j in i + 1..m {
            for k in 0..m {
                let c = a.structure(i, j, k);
                if c.is_zero() {
                    continue;
                }
                let cx = c.extend(nn).extend(big);
                let dc = complete_lift_fn(&c.extend(nn), nn);
                let lin = &cx * &xi(k);
                out.add_raw_term(&[u(i), ud(j)], &lin);
                out.add_raw_term(&[ud(i), u(j)], &lin);
                let mut top = &cx * &xid(k);
                top.add_product(&dc, &xi(k));
                out.add_raw_term(&[ud(i), ud(j)], &top);
            }
        }
        for b in 0..n {
            let d = a.anchor(i, b);
            if d.is_zero() {
                continue;
            }
            let dx = d.extend(nn).extend(big);
            out.add_raw_term(&[u(i), xd(b)], &dx);
            out.add_raw_term(&[ud(i), x(b)], &dx);
            out.add_raw_term(&[ud(i), xd(b)], &complete_lift_fn(&d.extend(nn), nn));
        }
    }
    Ok(out)
}

/// Literal local form of H(f dx^I ⊗ ∂_a) on (x, p).
pub fn h_local(k: &GradedTensor) -> Result<GradedTensor> {
    let a = k.owner();
    let n = a.nvars();
    let d = a.dual_canonical();
    let nn = 2 * n;
    let kd = k.mixed_degree();
    let mut out = GradedTensor::zero(&d, Kind::Mixed, kd);
    let p = |b: usize| n + b;
    for (key, f) in k.terms() {
        let idx: Vec<usize> = key[..kd].iter().map(|&i| i as usize).collect();
        let tgt = key[kd] as usize;
        let fx = f.extend(nn);
        let mut raw = idx.clone();
        raw.push(tgt);
        out.add_raw_term(&raw, &fx.clone());
        for (s, &ai) in idx.iter().enumerate() {
            let neg = (s + 1) % 2 == 1;
            let mut raw = vec![p(tgt)];
            raw.extend(idx.iter().enumerate().filter(|&(t, _)| t != s).map(|(_, &v)| v));
            raw.push(p(ai));
            // − (−1)^i dp_a ∧ … ⊗ ∂p_{a_i}
            out.add_raw_term(&raw, &(if neg { fx.clone() } else { -&fx }));
        }
        for b in 0..n {
            let df = f.partial(b).extend(nn);
            if df.is_zero() {
                continue;
            }
            let c = &df * &Poly::var(p(tgt), nn);
            let mut raw = idx.clone();
            raw.push(p(b));
            out.add_raw_term(&raw, &-&c);
            for (s, &ai) in idx.iter().enumerate() {
                let neg = (s + 1) % 2 == 1;
                let mut raw = vec![b];
                raw.extend(idx.iter().enumerate().filter(|&(t, _)| t != s).map(|(_, &v)| v));
                raw.push(p(ai));
                out.add_raw_term(&raw, &(if neg { c.clone() } else { -&c }));
            }
        }
    }
    Ok(out)
}

/// Local form of G(f dx^I ⊗ ∂_a) on (x, p), with the overall sign that makes
/// G(dx⊗∂_x) = ∂_x∧∂_p.
pub fn g_local(k: &GradedTensor) -> Result<GradedTensor> {
    let a = k.owner();
    let n = a.nvars();
    let d = a.dual_canonical();
    let nn = 2 * n;
    let kd = k.mixed_degree();
    let mut out = GradedTensor::zero(&d, Kind::MultiVector, kd + 1);
    for (key, f) in k.terms() {
        let ps: Vec<usize> = key[..kd].iter().map(|&i| n + i as usize).collect();
        let tgt = key[kd] as usize;
        let mut raw = vec![tgt];
        raw.extend(&ps);
        out.add_raw_term(&raw, &f.extend(nn));
        for b in 0..n {
            let df = f.partial(b).extend(nn);
            if df.is_zero() {
                continue;
            }
            let mut raw = vec![n + b];
            raw.extend(&ps);
            out.add_raw_term(&raw, &-(&df * &Poly::var(n + tgt, nn)));
        }
    }
    Ok(out)
}
