//! Poisson structures on a chart: bracket, cotangent algebroid,
//! Koszul–Schouten bracket and the maps Λ_P, R_P, H_P, G_P.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebroid::{Algebroid, Origin, StructureTable};
use crate::calculus::{d_tau, lie_derivative, schouten};
use crate::error::{Error, Result};
use crate::ring::{Chart, Poly, Rational};
use crate::tensor::{contract_mixed, contract_with, wedge, ContractionOrder, GradedTensor, Kind};

pub struct PoissonStructure {
    owner: Arc<Algebroid>,
    p: GradedTensor,
    /// `matrix[u][v]` = P^{uv}.
    matrix: Vec<Vec<Poly>>,
    cotangent: OnceLock<Arc<Algebroid>>,
}

impl fmt::Debug for PoissonStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poisson({})", self.p.pretty())
    }
}

impl PartialEq for PoissonStructure {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl PoissonStructure {
    /// Validates `[P, P] = 0` for a bivector over a canonical algebroid.
    pub fn new(p: &GradedTensor) -> Result<PoissonStructure> {
        let owner = p.owner().recognise_canonical();
        if !owner.is_canonical() {
            return Err(Error::ChartMismatch("a Poisson tensor must live over a canonical algebroid".into()));
        }
        if !(p.kind() == Kind::MultiVector && p.degree() == 2 || p.is_zero()) {
            return Err(Error::KindMismatch(format!(
                "a Poisson tensor is a bivector, got {} of degree {}",
                p.kind().name(),
                p.degree()
            )));
        }
        let p = p.transport(&owner, Kind::MultiVector, |i| i, Poly::clone);
        let p = if p.is_zero() { GradedTensor::zero(&owner, Kind::MultiVector, 2) } else { p };
        let pp = schouten(&p, &p)?;
        if !pp.is_zero() {
            return Err(Error::NotPoisson { residual: pp.pretty() });
        }
        let n = owner.nvars();
        let mut matrix = vec![vec![Poly::zero(n); n]; n];
        for (k, c) in p.terms() {
            let (u, v) = (k[0] as usize, k[1] as usize);
            matrix[u][v] = c.clone();
            matrix[v][u] = -c;
        }
        Ok(PoissonStructure { owner, p, matrix, cotangent: OnceLock::new() })
    }

    pub fn chart(&self) -> &Chart {
        self.owner.chart()
    }

    /// Canonical algebroid of the chart; forms and multivectors live here.
    pub fn owner(&self) -> &Arc<Algebroid> {
        &self.owner
    }

    pub fn bivector(&self) -> &GradedTensor {
        &self.p
    }

    pub fn entry(&self, u: usize, v: usize) -> &Poly {
        &self.matrix[u][v]
    }

    pub fn is_constant(&self) -> bool {
        self.matrix.iter().flatten().all(|p| p.as_constant().is_some())
    }

    fn check(&self, t: &GradedTensor) -> Result<()> {
        if Arc::ptr_eq(t.owner(), &self.owner) || **t.owner() == *self.owner {
            Ok(())
        } else {
            Err(Error::ChartMismatch("tensor does not live on the Poisson chart".into()))
        }
    }

    /// Views a tensor over the Poisson chart's canonical algebroid.
    pub fn adopt(&self, t: &GradedTensor) -> Result<GradedTensor> {
        self.check(t)?;
        Ok(t.transport(&self.owner, t.kind(), |i| i, Poly::clone))
    }
}

/// Builds a Poisson structure from a bivector over `canonical(chart)`.
pub fn build_poisson(chart: &Chart, p: &GradedTensor) -> Result<PoissonStructure> {
    if p.owner().chart() != chart {
        return Err(Error::ChartMismatch("bivector is not over the given chart".into()));
    }
    PoissonStructure::new(p)
}

/// ⟨P, ω⟩ for a 2-form, with ⟨∂_u∧∂_v, dα∧dβ⟩ = ∂_uα ∂_vβ − ∂_vα ∂_uβ.
pub fn pair(ps: &PoissonStructure, omega: &GradedTensor) -> Result<Poly> {
    let omega = ps.adopt(omega)?;
    let r = contract_with(ContractionOrder::Reversed, &ps.p, &omega)?;
    Ok(r.scalar_value().unwrap_or_else(|| Poly::zero(ps.owner.nvars())))
}

/// {f, g} = Σ P^{uv} ∂_u f ∂_v g.
pub fn poisson_bracket(ps: &PoissonStructure, f: &Poly, g: &Poly) -> Result<Poly> {
    let n = ps.owner.nvars();
    if f.nvars() != n || g.nvars() != n {
        return Err(Error::ChartMismatch("function is not over the Poisson chart".into()));
    }
    let mut out = Poly::zero(n);
    for u in 0..n {
        let fu = f.partial(u);
        if fu.is_zero() {
            continue;
        }
        for v in 0..n {
            if !ps.matrix[u][v].is_zero() {
                out.add_product(&(&fu * &ps.matrix[u][v]), &g.partial(v));
            }
        }
    }
    Ok(out)
}

fn p_tilde_coeffs(ps: &PoissonStructure, mu: &[Poly]) -> Vec<Poly> {
    let n = ps.owner.nvars();
    let mut out = vec![Poly::zero(n); n];
    for (u, mu_u) in mu.iter().enumerate() {
        if mu_u.is_zero() {
            continue;
        }
        for v in 0..n {
            if !ps.matrix[u][v].is_zero() {
                out[v].add_product(&ps.matrix[u][v], mu_u);
            }
        }
    }
    out
}

/// P̃μ for a 1-form: (P̃μ)^v = Σ_u P^{uv} μ_u.
pub fn p_tilde(ps: &PoissonStructure, mu: &GradedTensor) -> Result<GradedTensor> {
    let mu = ps.adopt(mu)?;
    if mu.degree() != 1 || mu.kind() != Kind::Form {
        return Err(Error::KindMismatch("P̃ acts on 1-forms".into()));
    }
    let n = ps.owner.nvars();
    let mut coeffs = vec![Poly::zero(n); n];
    for (k, c) in mu.terms() {
        coeffs[k[0] as usize] = c.clone();
    }
    Ok(ps.owner.section(&p_tilde_coeffs(ps, &coeffs)))
}

fn p_tilde_basis(ps: &PoissonStructure, u: usize) -> GradedTensor {
    ps.owner.section(&ps.matrix[u])
}

/// Cotangent algebroid with fibers dx^1…dx^n, bracket from the Koszul formula.
pub fn cotangent_algebroid(ps: &PoissonStructure) -> Result<Arc<Algebroid>> {
    if let Some(a) = ps.cotangent.get() {
        return Ok(a.clone());
    }
    let a = build_cotangent(ps)?;
    Ok(ps.cotangent.get_or_init(|| a).clone())
}

fn build_cotangent(ps: &PoissonStructure) -> Result<Arc<Algebroid>> {
    let n = ps.owner.nvars();
    let anchor: Vec<Vec<Poly>> = ps.matrix.clone();
    let mut table = StructureTable::new();
    for a in 0..n {
        for b in a + 1..n {
            let (dxa, dxb) = (ps.owner.dual_basis(a), ps.owner.dual_basis(b));
            let mut br = lie_derivative(&p_tilde_basis(ps, a), &dxb)?;
            br.subtract(&lie_derivative(&p_tilde_basis(ps, b), &dxa)?);
            let f = pair(ps, &wedge(&dxa, &dxb)?)?;
            br.subtract(&d_tau(&ps.owner.function(Kind::Form, f))?);
            let row: std::collections::BTreeMap<usize, Poly> =
                br.terms().iter().map(|(k, p)| (k[0] as usize, p.clone())).collect();
            if !row.is_empty() {
                table.insert((a, b), row);
            }
        }
    }
    let fibers = ps.chart().coords().iter().map(|c| format!("d{c}")).collect();
    Algebroid::build_with_origin(ps.chart().clone(), fibers, anchor, &table, Origin::Cotangent)
}

/// Forms on the chart as multivectors of the cotangent algebroid.
pub fn forms_to_cotangent(ps: &PoissonStructure, mu: &GradedTensor) -> Result<GradedTensor> {
    let mu = ps.adopt(mu)?;
    if mu.kind() != Kind::Form && mu.degree() != 0 {
        return Err(Error::KindMismatch(format!("expected a form, got {}", mu.kind().name())));
    }
    let cot = cotangent_algebroid(ps)?;
    Ok(mu.transport(&cot, Kind::MultiVector, |i| i, Poly::clone))
}

/// Multivectors of the cotangent algebroid back as forms on the chart.
pub fn forms_from_cotangent(ps: &PoissonStructure, x: &GradedTensor) -> GradedTensor {
    x.transport(&ps.owner, Kind::Form, |i| i, Poly::clone)
}

/// Multivectors on the chart as forms of the cotangent algebroid.
pub fn multivectors_to_cotangent_forms(ps: &PoissonStructure, x: &GradedTensor) -> Result<GradedTensor> {
    let x = ps.adopt(x)?;
    let cot = cotangent_algebroid(ps)?;
    Ok(x.transport(&cot, Kind::Form, |i| i, Poly::clone))
}

/// Koszul–Schouten bracket: the Schouten bracket of the cotangent algebroid.
pub fn koszul_schouten(ps: &PoissonStructure, mu: &GradedTensor, nu: &GradedTensor) -> Result<GradedTensor> {
    let a = forms_to_cotangent(ps, mu)?;
    let b = forms_to_cotangent(ps, nu)?;
    Ok(forms_from_cotangent(ps, &schouten(&a, &b)?))
}

/// The same bracket as i_{H_μ}ν − (−1)^k L_{R_μ}ν.
pub fn koszul_schouten_local(ps: &PoissonStructure, mu: &GradedTensor, nu: &GradedTensor) -> Result<GradedTensor> {
    let mu = ps.adopt(mu)?;
    let nu = ps.adopt(nu)?;
    let k = mu.degree();
    let first = contract_mixed(&h_p(ps, &mu)?, &nu)?;
    let second = lie_derivative(&r_p(ps, &mu)?, &nu)?;
    first.add(&second.signed(k % 2 == 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaMode {
    Plain,
    /// Multiplied by (−1)^k.
    Starred,
    /// Inverse map from multivectors to forms; needs constant invertible P̃.
    Inverse,
}

/// Λ_P applied factor-wise.
pub fn lambda_p(ps: &PoissonStructure, t: &GradedTensor, mode: LambdaMode) -> Result<GradedTensor> {
    let t = ps.adopt(t)?;
    if mode == LambdaMode::Inverse {
        return lambda_inverse(ps, &t);
    }
    if t.kind() != Kind::Form && t.degree() != 0 {
        return Err(Error::KindMismatch(format!("Λ_P acts on forms, got {}", t.kind().name())));
    }
    let k = t.degree();
    let mut out = GradedTensor::zero(&ps.owner, Kind::MultiVector, k);
    for (key, f) in t.terms() {
        let mut acc = ps.owner.function(Kind::MultiVector, f.clone());
        for &u in key.iter() {
            acc = wedge(&acc, &p_tilde_basis(ps, u as usize))?;
        }
        out.accumulate(&acc);
    }
    let out = if out.is_zero() { GradedTensor::zero(&ps.owner, Kind::MultiVector, k) } else { out };
    Ok(out.signed(mode == LambdaMode::Starred && k % 2 == 1))
}

fn invert(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from_int((i == j) as i64)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip()?;
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &(&factor * p);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn lambda_inverse(ps: &PoissonStructure, x: &GradedTensor) -> Result<GradedTensor> {
    if x.kind() != Kind::MultiVector && x.degree() != 0 {
        return Err(Error::KindMismatch("inverse Λ_P acts on multivectors".into()));
    }
    let consts: Option<Vec<Vec<Rational>>> = ps
        .matrix
        .iter()
        .map(|row| row.iter().map(Poly::as_constant).collect())
        .collect();
    let consts = consts.ok_or_else(|| Error::NotInvertible("P̃ is not constant".into()))?;
    let inv = invert(&consts).ok_or_else(|| Error::NotInvertible("P̃ is singular".into()))?;
    let n = ps.owner.nvars();
    // P̃^{-1}(∂_v) = Σ_u inv[v][u] dx^u
    let images: Vec<GradedTensor> = (0..n)
        .map(|v| {
            GradedTensor::from_terms(
                &ps.owner,
                Kind::Form,
                1,
                (0..n).map(|u| (vec![u], Poly::constant(inv[v][u].clone(), n))),
            )
        })
        .collect();
    let k = x.degree();
    let mut out = GradedTensor::zero(&ps.owner, Kind::Form, k);
    for (key, f) in x.terms() {
        let mut acc = ps.owner.function(Kind::Form, f.clone());
        for &v in key.iter() {
            acc = wedge(&acc, &images[v as usize])?;
        }
        out.accumulate(&acc);
    }
    Ok(if out.is_zero() { GradedTensor::zero(&ps.owner, Kind::Form, k) } else { out })
}

/// R_P(f dx^{a_1}∧…∧dx^{a_k}) = f Σ_i (−1)^{i+1} dx^{â_i} ⊗ P̃(dx^{a_i}).
pub fn r_p(ps: &PoissonStructure, mu: &GradedTensor) -> Result<GradedTensor> {
    let mu = ps.adopt(mu)?;
    if mu.kind() != Kind::Form && mu.degree() != 0 {
        return Err(Error::KindMismatch(format!("R_P acts on forms, got {}", mu.kind().name())));
    }
    let k = mu.degree();
    let n = ps.owner.nvars();
    let mut out = GradedTensor::zero(&ps.owner, Kind::Mixed, k.saturating_sub(1));
    for (key, f) in mu.terms() {
        for s in 0..k {
            let a = key[s] as usize;
            let mut rest: Vec<usize> = key.iter().map(|&i| i as usize).collect();
            rest.remove(s);
            for v in 0..n {
                let pv = &ps.matrix[a][v];
                if pv.is_zero() {
                    continue;
                }
                let mut raw = rest.clone();
                raw.push(v);
                let c = pv * f;
                out.add_raw_term(&raw, &if s % 2 == 1 { -c } else { c });
            }
        }
    }
    Ok(out)
}

/// H_P = R_P ∘ d.
pub fn h_p(ps: &PoissonStructure, mu: &GradedTensor) -> Result<GradedTensor> {
    r_p(ps, &d_tau(&ps.adopt(mu)?)?)
}

/// G_P = Λ_P ∘ d.
pub fn g_p(ps: &PoissonStructure, mu: &GradedTensor) -> Result<GradedTensor> {
    lambda_p(ps, &d_tau(&ps.adopt(mu)?)?, LambdaMode::Plain)
}

/// {μ, ν}_P = L_{H_μ}ν + d L_{R_μ}ν.
pub fn extended_bracket(ps: &PoissonStructure, mu: &GradedTensor, nu: &GradedTensor) -> Result<GradedTensor> {
    let mu = ps.adopt(mu)?;
    let nu = ps.adopt(nu)?;
    let first = lie_derivative(&h_p(ps, &mu)?, &nu)?;
    let second = d_tau(&lie_derivative(&r_p(ps, &mu)?, &nu)?)?;
    first.add(&second)
}

/// Linear Poisson structure on the dual chart of an algebroid.
pub fn linear_poisson(a: &Arc<Algebroid>) -> Result<PoissonStructure> {
    let n = a.nvars();
    let m = a.rank();
    let owner = a.dual_canonical();
    let nn = n + m;
    let mut terms = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut s = Poly::zero(nn);
            for k in 0..m {
                s.add_product(&a.structure(i, j, k).extend(nn), &Poly::var(n + k, nn));
            }
            terms.push((vec![n + i, n + j], s));
        }
        for b in 0..n {
            terms.push((vec![n + i, b], a.anchor(i, b).extend(nn)));
        }
    }
    PoissonStructure::new(&GradedTensor::from_terms(&owner, Kind::MultiVector, 2, terms))
}

/// Complete lift d_T P on the dotted chart.
pub fn tangent_poisson(ps: &PoissonStructure) -> Result<PoissonStructure> {
    let lifted = crate::lifts::complete_lift(&ps.p)?;
    let moved = crate::lifts::canonical_transport(crate::lifts::Transport::Kappa, &lifted)?;
    PoissonStructure::new(moved.tensor())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical_xp() -> PoissonStructure {
        let c = Chart::new(["x", "p"]).unwrap();
        let a = Algebroid::canonical(&c).unwrap();
        let p = wedge(&a.basis(1), &a.basis(0)).unwrap();
        build_poisson(&c, &p).unwrap()
    }

    #[test]
    fn bracket_and_p_tilde() {
        let ps = canonical_xp();
        let c = ps.chart().clone();
        let (x, p) = (c.parse("x").unwrap(), c.parse("p").unwrap());
        assert!(poisson_bracket(&ps, &p, &x).unwrap().is_one());
        let dx = ps.owner().dual_basis(0);
        assert_eq!(p_tilde(&ps, &dx).unwrap().pretty(), "−∂p");
        assert_eq!(lambda_p(&ps, &dx, LambdaMode::Plain).unwrap().pretty(), "−∂p");
    }

    #[test]
    fn not_poisson() {
        let c = Chart::new(["x1", "x2", "x3"]).unwrap();
        let a = Algebroid::canonical(&c).unwrap();
        let p = GradedTensor::from_terms(
            &a,
            Kind::MultiVector,
            2,
            [(vec![0, 1], Poly::one(3)), (vec![0, 2], c.parse("x1").unwrap())],
        );
        assert!(matches!(build_poisson(&c, &p), Err(Error::NotPoisson { .. })));
    }

    #[test]
    fn r_p_example() {
        let ps = canonical_xp();
        let o = ps.owner();
        let dxdp = wedge(&o.dual_basis(0), &o.dual_basis(1)).unwrap();
        let r = r_p(&ps, &dxdp).unwrap();
        let px = p_tilde(&ps, &o.dual_basis(0)).unwrap();
        let pp = p_tilde(&ps, &o.dual_basis(1)).unwrap();
        let mut expected = wedge(&o.dual_basis(1), &px).unwrap();
        expected.subtract(&wedge(&o.dual_basis(0), &pp).unwrap());
        assert_eq!(r, expected);
    }

    #[test]
    fn inverse_round_trip() {
        let ps = canonical_xp();
        let o = ps.owner();
        let dxdp = wedge(&o.dual_basis(0), &o.dual_basis(1)).unwrap();
        let l = lambda_p(&ps, &dxdp, LambdaMode::Plain).unwrap();
        assert_eq!(lambda_p(&ps, &l, LambdaMode::Inverse).unwrap(), dxdp);
    }
}
