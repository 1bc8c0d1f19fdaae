//! Differential d_τ, Lie derivatives and the graded brackets of an algebroid.

use std::sync::Arc;

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::ring::Poly;
use crate::tensor::{
    contract_mixed, contract_with, merge_antisym, mixed_terms, remove_index, ContractionOrder, GradedTensor,
    Key, Kind, ACTIVE_ORDER,
};

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn require_form(mu: &GradedTensor) -> Result<()> {
    if mu.kind() == Kind::Form || (mu.degree() == 0 && mu.kind() != Kind::Mixed) {
        Ok(())
    } else {
        Err(Error::KindMismatch(format!("expected a form, got {}", mu.kind().name())))
    }
}

fn require_multivector(x: &GradedTensor) -> Result<GradedTensor> {
    match x.kind() {
        Kind::MultiVector => Ok(x.clone()),
        _ if x.degree() == 0 => x.as_kind(Kind::MultiVector),
        Kind::Sym if x.degree() == 1 => x.as_kind(Kind::MultiVector),
        k => Err(Error::KindMismatch(format!("expected a multivector, got {}", k.name()))),
    }
}

/// d_τ e^{*k} = −Σ_{i<j} c_ij^k e^{*i}∧e^{*j}.
fn d_dual_basis(a: &Algebroid, k: usize) -> Vec<(Key, Poly)> {
    let m = a.rank();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let c = a.structure(i, j, k);
            if !c.is_zero() {
                out.push((Key::from_slice(&[i as u8, j as u8]), -c));
            }
        }
    }
    out
}

/// Exterior differential of the algebroid.
pub fn d_tau(mu: &GradedTensor) -> Result<GradedTensor> {
    require_form(mu)?;
    let a = mu.owner();
    let m = a.rank();
    let deg = mu.degree();
    let mut out = GradedTensor::zero(a, Kind::Form, deg + 1);
    let de: Vec<Vec<(Key, Poly)>> = (0..m).map(|k| d_dual_basis(a, k)).collect();
    for (key, f) in mu.terms() {
        for i in 0..m {
            let g = a.act(i, f);
            if g.is_zero() {
                continue;
            }
            if let Some((neg, k)) = merge_antisym(&[i as u8], key) {
                out.add_term(k, &if neg { -g } else { g });
            }
        }
        for (s, &ks) in key.iter().enumerate() {
            let (neg0, rest) = remove_index(key, ks).expect("index present");
            debug_assert_eq!(neg0, s % 2 == 1);
            for (wk, wc) in &de[ks as usize] {
                if let Some((neg, k)) = merge_antisym(wk, &rest) {
                    let c = wc * f;
                    out.add_term(k, &if neg ^ neg0 { -c } else { c });
                }
            }
        }
    }
    Ok(out)
}

/// L_W μ: i_X d − (−1)^k d i_X for multivectors, i_K d + (−1)^k d i_K for mixed tensors.
pub fn lie_derivative(w: &GradedTensor, mu: &GradedTensor) -> Result<GradedTensor> {
    lie_derivative_with(ACTIVE_ORDER, w, mu)
}

/// Lie derivative with an explicit contraction order for multivectors.
pub fn lie_derivative_with(order: ContractionOrder, w: &GradedTensor, mu: &GradedTensor) -> Result<GradedTensor> {
    require_form(mu)?;
    w.same_owner(mu)?;
    let dmu = d_tau(mu)?;
    if w.kind() == Kind::Mixed {
        let k = w.degree();
        let first = contract_mixed(w, &dmu)?;
        let second = d_tau(&contract_mixed(w, mu)?)?;
        return first.add(&second.signed(k % 2 == 1));
    }
    let x = require_multivector(w)?;
    let k = x.degree();
    let first = contract_with(order, &x, &dmu)?;
    let second = d_tau(&contract_with(order, &x, mu)?)?;
    first.add(&second.signed(k % 2 == 0))
}

/// Bracket of the single-term sections a·e_i and b·e_j, as coefficients.
fn simple_bracket(alg: &Algebroid, a: &Poly, i: usize, b: &Poly, j: usize) -> Vec<Poly> {
    let m = alg.rank();
    let n = alg.nvars();
    let mut out = vec![Poly::zero(n); m];
    if i != j {
        let ab = a * b;
        for (k, c) in alg.structure_row(i, j).iter().enumerate() {
            if !c.is_zero() {
                out[k].add_product(&ab, c);
            }
        }
    }
    out[j].add_product(a, &alg.act(i, b));
    let t = b * &alg.act(j, a);
    out[i].sub_assign_ref(&t);
    out
}

fn remove_at(key: &[u8], s: usize) -> Key {
    let mut k = Key::from_slice(key);
    k.remove(s);
    k
}

/// Generalized Schouten bracket of multivectors.
pub fn schouten(x: &GradedTensor, y: &GradedTensor) -> Result<GradedTensor> {
    x.same_owner(y)?;
    let x = require_multivector(x)?;
    let y = require_multivector(y)?;
    bracket_impl(&x, &y, false)
}

/// Symmetric Schouten bracket.
pub fn sym_schouten(x: &GradedTensor, y: &GradedTensor) -> Result<GradedTensor> {
    x.same_owner(y)?;
    let x = x.as_kind(Kind::Sym)?;
    let y = y.as_kind(Kind::Sym)?;
    bracket_impl(&x, &y, true)
}

fn bracket_impl(x: &GradedTensor, y: &GradedTensor, sym: bool) -> Result<GradedTensor> {
    let alg = x.owner().clone();
    let kind = if sym { Kind::Sym } else { Kind::MultiVector };
    let (k, l) = (x.degree(), y.degree());
    let deg = (k + l).saturating_sub(1);
    let mut out = GradedTensor::zero(&alg, kind, deg);
    if k == 0 && l == 0 {
        return Ok(out);
    }
    let push = |out: &mut GradedTensor, raw: Vec<usize>, c: &Poly, neg: bool| {
        if !c.is_zero() {
            out.add_raw_term(&raw, &if neg { -c } else { c.clone() });
        }
    };
    for (xk, f) in x.terms() {
        for (yk, g) in y.terms() {
            if l == 0 {
                // [X, g] = Σ_s (−1)^{k+s} α(X_s)(g) X_ŝ
                for s in 0..k {
                    let c = f * &alg.act(xk[s] as usize, g);
                    let neg = !sym && (k + s + 1) % 2 == 1;
                    push(&mut out, to_raw(&remove_at(xk, s)), &c, neg);
                }
            } else if k == 0 {
                // [f, Y] = −Σ_t (−1)^{t−1} α(Y_t)(f) Y_t̂
                for t in 0..l {
                    let c = g * &alg.act(yk[t] as usize, f);
                    let neg = sym || t % 2 == 0;
                    push(&mut out, to_raw(&remove_at(yk, t)), &c, neg);
                }
            } else {
                let one = Poly::one(alg.nvars());
                for s in 0..k {
                    let (cx, rx) = if s == 0 { (f, &one) } else { (&one, f) };
                    let xr = remove_at(xk, s);
                    for t in 0..l {
                        let (cy, ry) = if t == 0 { (g, &one) } else { (&one, g) };
                        let yr = remove_at(yk, t);
                        let br = simple_bracket(&alg, cx, xk[s] as usize, cy, yk[t] as usize);
                        let rest = rx * ry;
                        let neg = !sym && (s + t) % 2 == 1;
                        for (r, c) in br.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut raw = vec![r];
                            raw.extend(xr.iter().map(|&i| i as usize));
                            raw.extend(yr.iter().map(|&i| i as usize));
                            push(&mut out, raw, &(c * &rest), neg);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn to_raw(k: &[u8]) -> Vec<usize> {
    k.iter().map(|&i| i as usize).collect()
}

fn shifted(t: &GradedTensor) -> i64 {
    t.mixed_degree() as i64 - 1
}

/// Nijenhuis–Richardson bracket i_K L − (−1)^{kl} i_L K (shifted degrees).
pub fn nr_bracket(k: &GradedTensor, l: &GradedTensor) -> Result<GradedTensor> {
    k.same_owner(l)?;
    for t in [k, l] {
        if !t.is_mixed_like() {
            return Err(Error::KindMismatch(format!("expected a mixed tensor, got {}", t.kind().name())));
        }
    }
    let a = contract_mixed(k, l)?;
    let b = contract_mixed(l, k)?;
    a.add(&b.signed(!odd(shifted(k) * shifted(l))))
}

/// ω ⊗ e_j for a form ω.
pub fn form_tensor_section(omega: &GradedTensor, j: usize) -> GradedTensor {
    let owner = omega.owner();
    let d = omega.degree();
    GradedTensor::from_terms(
        owner,
        Kind::Mixed,
        d,
        omega.terms().iter().map(|(key, p)| {
            let mut raw = to_raw(key);
            raw.push(j);
            (raw, p.clone())
        }),
    )
}

/// Frölicher–Nijenhuis bracket.
pub fn fn_bracket(k: &GradedTensor, l: &GradedTensor) -> Result<GradedTensor> {
    k.same_owner(l)?;
    for t in [k, l] {
        if !t.is_mixed_like() {
            return Err(Error::KindMismatch(format!("expected a mixed tensor, got {}", t.kind().name())));
        }
    }
    let alg: Arc<Algebroid> = k.owner().clone();
    let (kd, ld) = (k.mixed_degree(), l.mixed_degree());
    let mut out = GradedTensor::zero(&alg, Kind::Mixed, kd + ld);
    let sign2 = (kd * ld) % 2 == 0;
    for (mk, x, f) in mixed_terms(k) {
        let mu = GradedTensor::from_terms(&alg, Kind::Form, kd, [(to_raw(&mk), f.clone())]);
        let kt = form_tensor_section(&mu, x);
        for (nk, y, g) in mixed_terms(l) {
            let nu = GradedTensor::from_terms(&alg, Kind::Form, ld, [(to_raw(&nk), g.clone())]);
            let lt = form_tensor_section(&nu, y);
            let t1 = form_tensor_section(&lie_derivative(&kt, &nu)?, y);
            let t2 = form_tensor_section(&lie_derivative(&lt, &mu)?, x);
            out.accumulate(&t1);
            if sign2 {
                out.subtract(&t2);
            } else {
                out.accumulate(&t2);
            }
            let mn = crate::tensor::wedge(&mu, &nu)?;
            for (r, c) in alg.structure_row(x, y).iter().enumerate() {
                if !c.is_zero() {
                    out.accumulate(&form_tensor_section(&mn.mul_fn(c), r));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::so3;
    use crate::ring::Chart;

    fn canon(names: &[&str]) -> Arc<Algebroid> {
        Algebroid::canonical(&Chart::new(names.iter().copied()).unwrap()).unwrap()
    }

    fn func(a: &Arc<Algebroid>, s: &str) -> GradedTensor {
        a.function(Kind::Form, a.parse(s).unwrap())
    }

    #[test]
    fn d_examples() {
        let a = canon(&["x", "y"]);
        let d = d_tau(&func(&a, "x^2")).unwrap();
        assert_eq!(d, a.dual_basis(0).mul_fn(&a.parse("2*x").unwrap()));
        assert!(d_tau(&d_tau(&func(&a, "x^2*y")).unwrap()).unwrap().is_zero());
        let g = so3();
        assert_eq!(d_tau(&g.dual_basis(2)).unwrap().pretty(), "−e*1∧e*2");
    }

    #[test]
    fn lie_examples() {
        let a = canon(&["x"]);
        let x = a.parse("x").unwrap();
        let l = lie_derivative(&a.basis(0), &a.dual_basis(0).mul_fn(&x)).unwrap();
        assert_eq!(l, a.dual_basis(0));
        let k = GradedTensor::basis(&a, Kind::Mixed, &[0, 0]);
        assert_eq!(lie_derivative(&k, &func(&a, "x")).unwrap(), a.dual_basis(0));
    }

    #[test]
    fn schouten_examples() {
        let a = canon(&["x"]);
        let x = a.parse("x").unwrap();
        let xe = a.basis(0).mul_fn(&x);
        let r = schouten(&xe, &func(&a, "x")).unwrap();
        assert_eq!(r.scalar_value().unwrap(), x);
        let b = canon(&["x", "xi"]);
        let p = crate::tensor::wedge(&b.basis(1), &b.basis(0)).unwrap();
        assert!(schouten(&p, &p).unwrap().is_zero());
    }

    #[test]
    fn sym_schouten_example() {
        let a = canon(&["x", "y"]);
        let x = a.parse("x").unwrap();
        let ey = a.basis(1);
        let rhs = crate::tensor::sym_product(&ey, &ey).unwrap();
        let arg = crate::tensor::sym_product(&ey.mul_fn(&x), &ey).unwrap();
        assert_eq!(sym_schouten(&a.basis(0), &arg).unwrap(), rhs);
    }

    #[test]
    fn nr_examples() {
        let a = canon(&["x", "y"]);
        let k = GradedTensor::basis(&a, Kind::Mixed, &[0, 0]);
        let l = GradedTensor::basis(&a, Kind::Mixed, &[0, 1]);
        assert_eq!(nr_bracket(&k, &l).unwrap(), l);
        assert_eq!(nr_bracket(&a.basis(0), &l).unwrap(), a.basis(1));
        let m = GradedTensor::basis(&a, Kind::Mixed, &[0, 1, 0]);
        assert!(nr_bracket(&m, &m).unwrap().is_zero());
    }

    #[test]
    fn fn_examples() {
        let a = canon(&["x"]);
        let k = GradedTensor::basis(&a, Kind::Mixed, &[0, 0]);
        assert!(fn_bracket(&k, &k).unwrap().is_zero());
        let b = canon(&["x", "y"]);
        let k = GradedTensor::basis(&b, Kind::Mixed, &[0, 1]);
        let l = GradedTensor::basis(&b, Kind::Mixed, &[1, 0]);
        assert!(fn_bracket(&k, &l).unwrap().is_zero());
    }
}
