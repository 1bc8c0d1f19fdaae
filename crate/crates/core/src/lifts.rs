//! Lifts of sections, forms and mixed tensors to tangent and cotangent
//! algebroids, and the canonical transports between them.

use std::sync::Arc;

use crate::algebroid::{complete_lift_fn, Algebroid, Origin};
use crate::calculus::{d_tau, schouten};
use crate::error::{Error, Result};
use crate::poisson::{h_p, PoissonStructure};
use crate::ring::Poly;
use crate::tensor::{mixed_terms, wedge, GradedTensor, Kind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Vertical,
    Complete,
    VerticalPi,
    VerticalTau,
    CotComplete,
    J,
    Kappa,
    Alpha,
    Jstar,
    H,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Vertical => "V",
            Provenance::Complete => "T",
            Provenance::VerticalPi => "Vpi",
            Provenance::VerticalTau => "Vtau",
            Provenance::CotComplete => "G",
            Provenance::J => "J",
            Provenance::Kappa => "kappa",
            Provenance::Alpha => "alpha",
            Provenance::Jstar => "Jstar",
            Provenance::H => "H",
        }
    }
}

/// A lifted tensor together with the lift that produced it and its source algebroid.
#[derive(Clone, Debug)]
pub struct LiftedSection {
    tensor: GradedTensor,
    provenance: Provenance,
    source: Arc<Algebroid>,
}

impl LiftedSection {
    pub fn tensor(&self) -> &GradedTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> GradedTensor {
        self.tensor
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn source(&self) -> &Arc<Algebroid> {
        &self.source
    }
}

fn lifted(tensor: GradedTensor, provenance: Provenance, source: &Arc<Algebroid>) -> LiftedSection {
    LiftedSection { tensor, provenance, source: source.clone() }
}

/// ι(X) = f^i ξ_i, multiplicative on symmetric products.
pub fn iota(x: &GradedTensor) -> Result<Poly> {
    let a = x.owner();
    let ok = x.degree() == 0
        || x.kind() == Kind::Sym
        || (x.kind() == Kind::MultiVector && x.degree() == 1);
    if !ok {
        return Err(Error::KindMismatch(format!(
            "ι needs a section or symmetric multivector, got {} of degree {}",
            x.kind().name(),
            x.degree()
        )));
    }
    let n = a.nvars();
    let nn = n + a.rank();
    let mut out = Poly::zero(nn);
    for (key, f) in x.terms() {
        let mut t = f.extend(nn);
        for &i in key.iter() {
            t = &t * &Poly::var(n + i as usize, nn);
        }
        out.add_assign_ref(&t);
    }
    Ok(out)
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

fn bar(slot: Slot, i: usize, m: usize) -> usize {
    match slot {
        Slot::Vector => i,
        Slot::Covector => m + i,
    }
}

fn dot(slot: Slot, i: usize, m: usize) -> usize {
    match slot {
        Slot::Vector => m + i,
        Slot::Covector => i,
    }
}

/// Vertical lift V: every factor replaced by its barred counterpart.
pub fn vertical_lift(s: &GradedTensor) -> Result<LiftedSection> {
    let a = s.owner();
    let t = a.tangent_lift()?;
    let m = a.rank();
    let nn = 2 * a.nvars();
    let sl = slots(s);
    let mut out = GradedTensor::zero(&t, s.kind(), s.degree());
    for (key, f) in s.terms() {
        let raw: Vec<usize> = key.iter().zip(&sl).map(|(&i, &sl)| bar(sl, i as usize, m)).collect();
        out.add_raw_term(&raw, &f.extend(nn));
    }
    Ok(lifted(out, Provenance::Vertical, a))
}

/// Complete lift T.
pub fn complete_lift(s: &GradedTensor) -> Result<LiftedSection> {
    let a = s.owner();
    let t = a.tangent_lift()?;
    let m = a.rank();
    let n = a.nvars();
    let sl = slots(s);
    let mut out = GradedTensor::zero(&t, s.kind(), s.degree());
    for (key, f) in s.terms() {
        let barred: Vec<usize> = key.iter().zip(&sl).map(|(&i, &sl)| bar(sl, i as usize, m)).collect();
        out.add_raw_term(&barred, &complete_lift_fn(f, n));
        let fv = f.extend(2 * n);
        for p in 0..key.len() {
            let mut raw = barred.clone();
            raw[p] = dot(sl[p], key[p] as usize, m);
            out.add_raw_term(&raw, &fv);
        }
    }
    Ok(lifted(out, Provenance::Complete, a))
}

/// V_π: e^{*i} ↦ ∂_{ξ_i}, a multivector on the dual chart.
pub fn vertical_pi(mu: &GradedTensor) -> Result<LiftedSection> {
    if mu.kind() != Kind::Form && mu.degree() != 0 {
        return Err(Error::KindMismatch(format!("V_π acts on forms, got {}", mu.kind().name())));
    }
    let a = mu.owner();
    let d = a.dual_canonical();
    let n = a.nvars();
    let nn = d.nvars();
    let out = mu.transport(&d, Kind::MultiVector, |i| n + i, |p| p.extend(nn));
    Ok(lifted(out, Provenance::VerticalPi, a))
}

/// V_τ: e_j ↦ ∂_{y^j} on the chart (x, y).
pub fn vertical_tau(s: &GradedTensor) -> Result<LiftedSection> {
    if !matches!(s.kind(), Kind::MultiVector | Kind::Sym) {
        return Err(Error::KindMismatch(format!("V_τ acts on multivectors, got {}", s.kind().name())));
    }
    let a = s.owner();
    let v = a.vertical_canonical();
    let n = a.nvars();
    let nn = v.nvars();
    let out = s.transport(&v, s.kind(), |i| n + i, |p| p.extend(nn));
    Ok(lifted(out, Provenance::VerticalTau, a))
}

/// Complete cotangent lift of a section, coordinate formula.
pub fn cot_complete_vec(x: &GradedTensor) -> Result<LiftedSection> {
    let a = x.owner();
    let f = x.section_coeffs()?;
    let (n, m) = (a.nvars(), a.rank());
    let d = a.dual_canonical();
    let nn = n + m;
    let xi = |k: usize| Poly::var(n + k, nn);
    let mut coeffs = vec![Poly::zero(nn); nn];
    for i in 0..m {
        if f[i].is_zero() {
            continue;
        }
        let fi = f[i].extend(nn);
        for j in 0..m {
            for k in 0..m {
                let c = a.structure(i, j, k);
                if !c.is_zero() {
                    coeffs[n + j].add_product(&(&fi * &c.extend(nn)), &xi(k));
                }
            }
        }
        for b in 0..n {
            let dfi = f[i].partial(b).extend(nn);
            if dfi.is_zero() {
                continue;
            }
            for j in 0..m {
                let delta = a.anchor(j, b);
                if !delta.is_zero() {
                    let t = &(&dfi * &delta.extend(nn)) * &xi(i);
                    coeffs[n + j].sub_assign_ref(&t);
                }
            }
        }
        for b in 0..n {
            coeffs[b].add_product(&fi, &a.anchor(i, b).extend(nn));
        }
    }
    Ok(lifted(d.section(&coeffs), Provenance::CotComplete, a))
}

/// −[P, ι(X)] for the linear Poisson structure of the algebroid.
pub fn cot_complete_vec_hamiltonian(x: &GradedTensor) -> Result<GradedTensor> {
    let a = x.owner();
    let ps = a.linear_poisson()?;
    let g = ps.owner().function(Kind::MultiVector, iota(x)?);
    Ok(schouten(ps.bivector(), &g)?.neg())
}

/// J(μ⊗X) = −ι(X)·V_π(μ).
pub fn j_map(k: &GradedTensor) -> Result<LiftedSection> {
    if !k.is_mixed_like() {
        return Err(Error::KindMismatch(format!("J acts on mixed tensors, got {}", k.kind().name())));
    }
    let a = k.owner();
    let d = a.dual_canonical();
    let n = a.nvars();
    let nn = d.nvars();
    let deg = k.mixed_degree();
    let mut out = GradedTensor::zero(&d, Kind::MultiVector, deg);
    for (form, j, f) in mixed_terms(k) {
        let raw: Vec<usize> = form.iter().map(|&i| n + i as usize).collect();
        let c = &f.extend(nn) * &Poly::var(n + j, nn);
        out.add_raw_term(&raw, &-c);
    }
    Ok(lifted(out, Provenance::J, a))
}

/// Dual complete lift G(K) = [P, J(K)], cross-checked against the simple-tensor formula.
pub fn g_map(k: &GradedTensor) -> Result<LiftedSection> {
    let a = k.owner();
    let ps = a.linear_poisson()?;
    let via_bracket = schouten(ps.bivector(), j_map(k)?.tensor())?;
    let explicit = g_map_explicit(k)?;
    assert_eq!(via_bracket, explicit, "the two evaluations of the dual complete lift disagree");
    Ok(lifted(via_bracket, Provenance::CotComplete, a))
}

/// G(X)∧V_π(μ) − ι(X)V_π(dμ) summed over simple terms.
pub fn g_map_explicit(k: &GradedTensor) -> Result<GradedTensor> {
    if !k.is_mixed_like() {
        return Err(Error::KindMismatch(format!("G acts on mixed tensors, got {}", k.kind().name())));
    }
    let a = k.owner();
    let d = a.dual_canonical();
    let deg = k.mixed_degree();
    let mut out = GradedTensor::zero(&d, Kind::MultiVector, deg + 1);
    for (form, j, f) in mixed_terms(k) {
        let raw: Vec<usize> = form.iter().map(|&i| i as usize).collect();
        let mu = GradedTensor::from_terms(a, Kind::Form, deg, [(raw, f)]);
        let ej = a.basis(j);
        let g = cot_complete_vec(&ej)?;
        out.accumulate(&wedge(g.tensor(), vertical_pi(&mu)?.tensor())?);
        let xi = d.function(Kind::MultiVector, iota(&ej)?);
        out.subtract(&wedge(&xi, vertical_pi(&d_tau(&mu)?)?.tensor())?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transport {
    /// Multivector side: ē_a ↔ ∂_{ẋ^a}, ė_a ↔ ∂_{x^a}.
    Kappa,
    /// Form side, the dual relabelling.
    Alpha,
}

fn wrong(msg: impl Into<String>) -> Error {
    Error::WrongProvenance(msg.into())
}

/// κ or α between the tangent lift of a canonical algebroid and the canonical algebroid of the dotted chart.
pub fn canonical_transport(direction: Transport, t: &LiftedSection) -> Result<LiftedSection> {
    let source = &t.source;
    if !source.is_canonical() {
        return Err(wrong("canonical transports need a lift of a canonical algebroid"));
    }
    match t.provenance {
        Provenance::Vertical | Provenance::Complete | Provenance::Kappa | Provenance::Alpha => {}
        p => return Err(wrong(format!("cannot transport a {} lift", p.name()))),
    }
    let tensor = &t.tensor;
    let allowed = tensor.degree() == 0
        || match direction {
            Transport::Kappa => tensor.kind() != Kind::Form,
            Transport::Alpha => matches!(tensor.kind(), Kind::Form | Kind::Mixed),
        };
    if !allowed {
        return Err(wrong(format!(
            "{} does not act on a {}",
            if direction == Transport::Kappa { "κ" } else { "α" },
            tensor.kind().name()
        )));
    }
    let tl = source.tangent_lift()?;
    let target = match tensor.owner().origin() {
        Origin::TangentLift(_) if **tensor.owner() == *tl => Algebroid::canonical(tl.chart())?,
        Origin::Canonical if tensor.owner().chart() == tl.chart() => tl,
        _ => return Err(wrong("tensor does not live over the expected lifted algebroid")),
    };
    let n = source.rank();
    let swap = |i: usize| if i < n { i + n } else { i - n };
    let out = tensor.transport(&target, tensor.kind(), swap, Poly::clone);
    let prov = match direction {
        Transport::Kappa => Provenance::Kappa,
        Transport::Alpha => Provenance::Alpha,
    };
    Ok(lifted(out, prov, source))
}

/// The κ/α relabelling on an arbitrary tensor over the tangent lift of a
/// canonical algebroid, or back from the canonical algebroid of the dotted chart.
pub fn flip(t: &GradedTensor) -> Result<GradedTensor> {
    let owner = t.owner();
    let (target, n) = match owner.origin() {
        Origin::TangentLift(src) if src.is_canonical() => (Algebroid::canonical(owner.chart())?, src.rank()),
        _ if owner.is_canonical() && owner.nvars() % 2 == 0 => {
            let n = owner.nvars() / 2;
            let base = Algebroid::canonical(&crate::ring::Chart::new(owner.chart().coords()[..n].to_vec())?)?;
            let tl = base.tangent_lift()?;
            if tl.chart() != owner.chart() {
                return Err(wrong("chart is not a dotted chart"));
            }
            (tl, n)
        }
        _ => return Err(wrong("κ/α need the tangent lift of a canonical algebroid")),
    };
    let swap = |i: usize| if i < n { i + n } else { i - n };
    Ok(t.transport(&target, t.kind(), swap, Poly::clone))
}

fn classical(s: &GradedTensor, complete: bool) -> Result<LiftedSection> {
    if !s.owner().is_canonical() {
        return Err(wrong("classical lifts need a tensor over a canonical algebroid"));
    }
    let l = if complete { complete_lift(s)? } else { vertical_lift(s)? };
    let dir = if s.kind() == Kind::Form { Transport::Alpha } else { Transport::Kappa };
    canonical_transport(dir, &l)
}

/// Classical vertical lift v_T on the dotted chart.
pub fn v_t(s: &GradedTensor) -> Result<LiftedSection> {
    classical(s, false)
}

/// Classical complete lift d_T on the dotted chart.
pub fn d_t(s: &GradedTensor) -> Result<LiftedSection> {
    classical(s, true)
}

/// J*(μ⊗X) = ι(X)·μ pulled back to the chart (x, p).
pub fn jstar(k: &GradedTensor) -> Result<LiftedSection> {
    let a = k.owner();
    if !a.is_canonical() {
        return Err(Error::ChartMismatch("J* needs a mixed tensor over a canonical algebroid".into()));
    }
    if !k.is_mixed_like() {
        return Err(Error::KindMismatch(format!("J* acts on mixed tensors, got {}", k.kind().name())));
    }
    let d = a.dual_canonical();
    let n = a.nvars();
    let nn = d.nvars();
    let deg = k.mixed_degree();
    let mut out = GradedTensor::zero(&d, Kind::Form, deg);
    for (form, j, f) in mixed_terms(k) {
        let raw: Vec<usize> = form.iter().map(|&i| i as usize).collect();
        out.add_raw_term(&raw, &(&f.extend(nn) * &Poly::var(n + j, nn)));
    }
    Ok(lifted(out, Provenance::Jstar, a))
}

/// H(K) = H_P(J*(K)) for the canonical Poisson structure on (x, p).
pub fn h_map(k: &GradedTensor) -> Result<LiftedSection> {
    let a = k.owner();
    let j = jstar(k)?;
    let ps: Arc<PoissonStructure> = a.linear_poisson()?;
    Ok(lifted(h_p(&ps, j.tensor())?, Provenance::H, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::so3;
    use crate::ring::Chart;

    fn canon(names: &[&str]) -> Arc<Algebroid> {
        Algebroid::canonical(&Chart::new(names.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn iota_examples() {
        let a = canon(&["x"]);
        let x = a.parse("x").unwrap();
        let d = a.dual_chart();
        assert_eq!(d.print(&iota(&a.basis(0).mul_fn(&x)).unwrap()), "x*p_x");
        let g = so3();
        let s = crate::tensor::sym_product(&g.basis(0), &g.basis(0)).unwrap();
        assert_eq!(g.dual_chart().print(&iota(&s).unwrap()), "xi_1^2");
    }

    #[test]
    fn tangent_lift_examples() {
        let a = canon(&["x"]);
        let x = a.parse("x").unwrap();
        let t = complete_lift(&a.basis(0).mul_fn(&x)).unwrap();
        assert_eq!(t.tensor().pretty(), "x_dot*ebar_x + x*edot_x");
        let k = canonical_transport(Transport::Kappa, &t).unwrap();
        assert_eq!(k.tensor().pretty(), "x*∂x + x_dot*∂x_dot");
        let back = canonical_transport(Transport::Kappa, &k).unwrap();
        assert_eq!(back.tensor(), t.tensor());
        let dx = a.dual_basis(0);
        assert_eq!(v_t(&dx).unwrap().tensor().pretty(), "dx");
        assert_eq!(d_t(&dx.mul_fn(&x)).unwrap().tensor().pretty(), "x_dot*dx + x*dx_dot");
        assert!(matches!(
            canonical_transport(Transport::Alpha, &t),
            Err(Error::WrongProvenance(_))
        ));
        let vp = vertical_pi(&dx).unwrap();
        assert!(matches!(canonical_transport(Transport::Kappa, &vp), Err(Error::WrongProvenance(_))));
    }

    #[test]
    fn cotangent_examples() {
        let a = canon(&["x"]);
        let x = a.parse("x").unwrap();
        let g = cot_complete_vec(&a.basis(0).mul_fn(&x)).unwrap();
        assert_eq!(g.tensor().pretty(), "x*∂x − p_x*∂p_x");
        assert_eq!(g.tensor(), &cot_complete_vec_hamiltonian(&a.basis(0).mul_fn(&x)).unwrap());
        let k = GradedTensor::basis(&a, Kind::Mixed, &[0, 0]);
        assert_eq!(j_map(&k).unwrap().tensor().pretty(), "−p_x*∂p_x");
        assert_eq!(g_map(&k).unwrap().tensor().pretty(), "∂x∧∂p_x");
        assert_eq!(jstar(&k).unwrap().tensor().pretty(), "p_x*dx");
        let s = so3();
        assert_eq!(cot_complete_vec(&s.basis(0)).unwrap().tensor().pretty(), "xi_3*∂xi_2 − xi_2*∂xi_3");
    }
}
