//! Lie algebroid data over a chart and the standard constructors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poisson::PoissonStructure;
use crate::ring::{Chart, Poly};
use crate::tensor::{GradedTensor, Kind};

/// How an algebroid was obtained; drives naming and lift bookkeeping.
#[derive(Clone, Debug)]
pub enum Origin {
    Plain,
    Canonical,
    TangentLift(Arc<Algebroid>),
    CotangentLift(Arc<Algebroid>),
    /// Cotangent algebroid of a Poisson structure.
    Cotangent,
}

/// A Lie algebroid over a polynomial chart.
///
/// `anchor[i][a]` is δ_i^a and `c[i][j][k]` is c_ij^k (stored for all i, j).
pub struct Algebroid {
    chart: Chart,
    fibers: Vec<String>,
    anchor: Vec<Vec<Poly>>,
    c: Vec<Vec<Vec<Poly>>>,
    origin: Origin,
    tangent: OnceLock<Arc<Algebroid>>,
    cotangent: OnceLock<Arc<Algebroid>>,
    dual_canonical: OnceLock<Arc<Algebroid>>,
    vertical_canonical: OnceLock<Arc<Algebroid>>,
    base_canonical: OnceLock<Option<Arc<Algebroid>>>,
    linear_poisson: OnceLock<Arc<PoissonStructure>>,
}

/// Structure functions for i < j (0-based): `(i, j) -> {k -> c_ij^k}`.
pub type StructureTable = BTreeMap<(usize, usize), BTreeMap<usize, Poly>>;

fn valid_fiber_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl PartialEq for Algebroid {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.chart == other.chart
                && self.fibers == other.fibers
                && self.anchor == other.anchor
                && self.c == other.c)
    }
}

impl Eq for Algebroid {}

impl fmt::Debug for Algebroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebroid")
            .field("chart", &self.chart.coords())
            .field("fibers", &self.fibers)
            .finish_non_exhaustive()
    }
}

impl Algebroid {
    fn raw(
        chart: Chart,
        fibers: Vec<String>,
        anchor: Vec<Vec<Poly>>,
        c: Vec<Vec<Vec<Poly>>>,
        origin: Origin,
    ) -> Algebroid {
        Algebroid {
            chart,
            fibers,
            anchor,
            c,
            origin,
            tangent: OnceLock::new(),
            cotangent: OnceLock::new(),
            dual_canonical: OnceLock::new(),
            vertical_canonical: OnceLock::new(),
            base_canonical: OnceLock::new(),
            linear_poisson: OnceLock::new(),
        }
    }

    /// Builds and validates an algebroid. `structure` holds c_ij^k for i < j only.
    pub fn build(
        chart: Chart,
        fibers: Vec<String>,
        anchor: Vec<Vec<Poly>>,
        structure: &StructureTable,
    ) -> Result<Arc<Algebroid>> {
        Self::build_with_origin(chart, fibers, anchor, structure, Origin::Plain)
    }

    pub(crate) fn build_with_origin(
        chart: Chart,
        fibers: Vec<String>,
        anchor: Vec<Vec<Poly>>,
        structure: &StructureTable,
        origin: Origin,
    ) -> Result<Arc<Algebroid>> {
        let m = fibers.len();
        let n = chart.len();
        if m == 0 {
            return Err(Error::DimensionMismatch("rank must be at least 1".into()));
        }
        for (i, f) in fibers.iter().enumerate() {
            if !valid_fiber_name(f) {
                return Err(Error::DimensionMismatch(format!("invalid fiber name `{f}`")));
            }
            if fibers[..i].contains(f) {
                return Err(Error::DimensionMismatch(format!("duplicate fiber name `{f}`")));
            }
        }
        if anchor.len() != m || anchor.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("anchor must be a {m}x{n} matrix")));
        }
        if anchor.iter().flatten().any(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch("anchor entry over the wrong chart".into()));
        }
        let mut c = vec![vec![vec![Poly::zero(n); m]; m]; m];
        for (&(i, j), row) in structure {
            if i >= j || j >= m {
                return Err(Error::DimensionMismatch(format!(
                    "structure functions must be given for 1 <= i < j <= {m}, got ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            for (&k, p) in row {
                if k >= m || p.nvars() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "bad structure function entry ({}, {}, {})",
                        i + 1,
                        j + 1,
                        k + 1
                    )));
                }
                c[i][j][k] = p.clone();
                c[j][i][k] = -p;
            }
        }
        let a = Algebroid::raw(chart, fibers, anchor, c, origin);
        a.validate()?;
        Ok(Arc::new(a))
    }

    /// The canonical algebroid of a chart: identity anchor, zero bracket.
    pub fn canonical(chart: &Chart) -> Result<Arc<Algebroid>> {
        let n = chart.len();
        if n == 0 {
            return Err(Error::EmptyChart);
        }
        let anchor = (0..n)
            .map(|i| (0..n).map(|a| Poly::from_int((i == a) as i64, n)).collect())
            .collect();
        let c = vec![vec![vec![Poly::zero(n); n]; n]; n];
        Ok(Arc::new(Algebroid::raw(
            chart.clone(),
            chart.coords().to_vec(),
            anchor,
            c,
            Origin::Canonical,
        )))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn nvars(&self) -> usize {
        self.chart.len()
    }

    pub fn rank(&self) -> usize {
        self.fibers.len()
    }

    pub fn fibers(&self) -> &[String] {
        &self.fibers
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.origin, Origin::Canonical)
    }

    /// Marks an algebroid equal to the canonical one of its chart as canonical.
    pub fn recognise_canonical(self: &Arc<Self>) -> Arc<Algebroid> {
        match Algebroid::canonical(&self.chart) {
            Ok(can) if *can == **self => can,
            _ => self.clone(),
        }
    }

    pub fn anchor(&self, i: usize, a: usize) -> &Poly {
        &self.anchor[i][a]
    }

    pub fn anchor_row(&self, i: usize) -> &[Poly] {
        &self.anchor[i]
    }

    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Poly {
        &self.c[i][j][k]
    }

    pub fn structure_row(&self, i: usize, j: usize) -> &[Poly] {
        &self.c[i][j]
    }

    /// Structure functions for i < j with nonzero entries.
    pub fn structure_table(&self) -> StructureTable {
        let m = self.rank();
        let mut out = StructureTable::new();
        for i in 0..m {
            for j in i + 1..m {
                let row: BTreeMap<usize, Poly> = (0..m)
                    .filter(|&k| !self.c[i][j][k].is_zero())
                    .map(|k| (k, self.c[i][j][k].clone()))
                    .collect();
                if !row.is_empty() {
                    out.insert((i, j), row);
                }
            }
        }
        out
    }

    /// α(e_i)(f).
    pub fn act(&self, i: usize, f: &Poly) -> Poly {
        f.derive_along(&self.anchor[i])
    }

    /// α(X)(f) for a section given by its coefficients.
    pub fn act_section(&self, x: &[Poly], f: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars());
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out.add_product(xi, &self.act(i, f));
            }
        }
        out
    }

    /// Bracket of sections given by coefficient vectors.
    pub fn bracket_coeffs(&self, x: &[Poly], y: &[Poly]) -> Vec<Poly> {
        let m = self.rank();
        let n = self.nvars();
        let mut out = vec![Poly::zero(n); m];
        for i in 0..m {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let fg = &x[i] * &y[j];
                for k in 0..m {
                    if !self.c[i][j][k].is_zero() {
                        out[k].add_product(&fg, &self.c[i][j][k]);
                    }
                }
            }
        }
        for k in 0..m {
            out[k].add_assign_ref(&self.act_section(x, &y[k]));
            out[k].sub_assign_ref(&self.act_section(y, &x[k]));
        }
        out
    }

    /// Anchor image of a section as base vector-field coefficients.
    pub fn anchor_coeffs(&self, x: &[Poly]) -> Vec<Poly> {
        let n = self.nvars();
        let mut out = vec![Poly::zero(n); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for a in 0..n {
                if !self.anchor[i][a].is_zero() {
                    out[a].add_product(xi, &self.anchor[i][a]);
                }
            }
        }
        out
    }

    fn basis_coeffs(&self, i: usize) -> Vec<Poly> {
        let n = self.nvars();
        (0..self.rank())
            .map(|k| Poly::from_int((k == i) as i64, n))
            .collect()
    }

    fn section_string(&self, coeffs: &[Poly]) -> String {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| (smallvec::smallvec![k as u8], p.clone()));
        crate::tensor::pretty_terms(self, Kind::MultiVector, terms)
    }

    fn vector_field_string(&self, coeffs: &[Poly]) -> String {
        match Algebroid::canonical(&self.chart) {
            Ok(base) => {
                let terms = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(a, p)| (smallvec::smallvec![a as u8], p.clone()));
                crate::tensor::pretty_terms(&base, Kind::MultiVector, terms)
            }
            Err(_) => "0".into(),
        }
    }

    /// Brute-force Jacobi and anchor-morphism checks over all basis triples and pairs.
    pub fn validate(&self) -> Result<()> {
        let m = self.rank();
        let basis: Vec<Vec<Poly>> = (0..m).map(|i| self.basis_coeffs(i)).collect();
        let mut brackets = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                brackets[i][j] = self.c[i][j].clone();
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    let mut res = self.bracket_coeffs(&brackets[i][j], &basis[k]);
                    let t2 = self.bracket_coeffs(&brackets[j][k], &basis[i]);
                    let t3 = self.bracket_coeffs(&brackets[k][i], &basis[j]);
                    for l in 0..m {
                        res[l].add_assign_ref(&t2[l]);
                        res[l].add_assign_ref(&t3[l]);
                    }
                    if res.iter().any(|p| !p.is_zero()) {
                        return Err(Error::JacobiViolation {
                            triple: [i + 1, j + 1, k + 1],
                            residual: self.section_string(&res),
                        });
                    }
                }
            }
        }
        let fields: Vec<Vec<Poly>> = (0..m).map(|i| self.anchor[i].clone()).collect();
        for i in 0..m {
            for j in i + 1..m {
                let lhs = vector_field_bracket(&fields[i], &fields[j]);
                let rhs = self.anchor_coeffs(&self.c[i][j]);
                let res: Vec<Poly> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
                if res.iter().any(|p| !p.is_zero()) {
                    return Err(Error::AnchorNotMorphism {
                        pair: [i + 1, j + 1],
                        residual: self.vector_field_string(&res),
                    });
                }
            }
        }
        Ok(())
    }

    /// Chart (x^a, ξ_i) of the dual bundle.
    pub fn dual_chart(&self) -> Chart {
        let prefix = if self.is_canonical() { "p_" } else { "xi_" };
        self.chart
            .extended(self.fibers.iter().map(|f| format!("{prefix}{f}")))
            .expect("dual coordinate names clash with the base chart")
    }

    /// Chart (x^a, y^i) of the bundle itself.
    pub fn vertical_chart(&self) -> Chart {
        self.chart
            .extended(self.fibers.iter().map(|f| format!("y_{f}")))
            .expect("fiber coordinate names clash with the base chart")
    }

    /// Canonical algebroid of the base chart, if the chart is nonempty.
    pub fn base_canonical(&self) -> Option<Arc<Algebroid>> {
        self.base_canonical
            .get_or_init(|| Algebroid::canonical(&self.chart).ok())
            .clone()
    }

    /// Canonical algebroid of the dual chart (x, ξ).
    pub fn dual_canonical(&self) -> Arc<Algebroid> {
        self.dual_canonical
            .get_or_init(|| Algebroid::canonical(&self.dual_chart()).expect("rank is positive"))
            .clone()
    }

    /// Canonical algebroid of the chart (x, y).
    pub fn vertical_canonical(&self) -> Arc<Algebroid> {
        self.vertical_canonical
            .get_or_init(|| Algebroid::canonical(&self.vertical_chart()).expect("rank is positive"))
            .clone()
    }

    /// Tangent lift on the dotted chart with fibers (ē_1…ē_m, ė_1…ė_m).
    pub fn tangent_lift(self: &Arc<Self>) -> Result<Arc<Algebroid>> {
        if let Some(t) = self.tangent.get() {
            return Ok(t.clone());
        }
        let t = self.build_tangent_lift()?;
        Ok(self.tangent.get_or_init(|| t).clone())
    }

    fn build_tangent_lift(self: &Arc<Self>) -> Result<Arc<Algebroid>> {
        let n = self.nvars();
        let m = self.rank();
        let chart = self.chart.dotted()?;
        let fibers: Vec<String> = self
            .fibers
            .iter()
            .map(|f| format!("bar_{f}"))
            .chain(self.fibers.iter().map(|f| format!("dot_{f}")))
            .collect();
        let mut anchor = vec![vec![Poly::zero(2 * n); 2 * n]; 2 * m];
        for i in 0..m {
            for a in 0..n {
                let d = &self.anchor[i][a];
                anchor[i][n + a] = d.extend(2 * n);
                anchor[m + i][a] = d.extend(2 * n);
                anchor[m + i][n + a] = complete_lift_fn(d, n);
            }
        }
        let mut table = StructureTable::new();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let c = &self.c[i][j][k];
                    if c.is_zero() {
                        continue;
                    }
                    // [ē_i, ė_j] = c_ij^k ē_k
                    insert_structure(&mut table, i, m + j, k, c.extend(2 * n));
                    if i < j {
                        insert_structure(&mut table, m + i, m + j, m + k, c.extend(2 * n));
                        insert_structure(&mut table, m + i, m + j, k, complete_lift_fn(c, n));
                    }
                }
            }
        }
        Algebroid::build_with_origin(chart, fibers, anchor, &table, Origin::TangentLift(self.clone()))
    }

    /// Cotangent lift on the chart (x, ξ) with fibers (dx^1…dx^n, dξ_1…dξ_m).
    pub fn cotangent_lift(self: &Arc<Self>) -> Result<Arc<Algebroid>> {
        if let Some(t) = self.cotangent.get() {
            return Ok(t.clone());
        }
        let t = self.build_cotangent_lift()?;
        Ok(self.cotangent.get_or_init(|| t).clone())
    }

    fn build_cotangent_lift(self: &Arc<Self>) -> Result<Arc<Algebroid>> {
        let n = self.nvars();
        let m = self.rank();
        let chart = self.dual_chart();
        let nn = n + m;
        let fibers: Vec<String> = chart.coords().iter().map(|c| format!("d{c}")).collect();
        let xi = |k: usize| Poly::var(n + k, nn);
        let mut anchor = vec![vec![Poly::zero(nn); nn]; nn];
        for i in 0..m {
            for a in 0..n {
                let d = self.anchor[i][a].extend(nn);
                anchor[a][n + i] = -&d;
                anchor[n + i][a] = d;
            }
            for j in 0..m {
                let mut s = Poly::zero(nn);
                for k in 0..m {
                    s.add_product(&self.c[i][j][k].extend(nn), &xi(k));
                }
                anchor[n + i][n + j] = s;
            }
        }
        let mut table = StructureTable::new();
        for i in 0..m {
            // [dξ_i, dx^a] = ∂_b δ_i^a dx^b
            for a in 0..n {
                for b in 0..n {
                    let d = self.anchor[i][a].partial(b).extend(nn);
                    insert_structure(&mut table, n + i, a, b, d);
                }
            }
            for j in i + 1..m {
                for k in 0..m {
                    let c = &self.c[i][j][k];
                    insert_structure(&mut table, n + i, n + j, n + k, c.extend(nn));
                    for b in 0..n {
                        let t = &c.partial(b).extend(nn) * &xi(k);
                        insert_structure(&mut table, n + i, n + j, b, t);
                    }
                }
            }
        }
        Algebroid::build_with_origin(chart, fibers, anchor, &table, Origin::CotangentLift(self.clone()))
    }

    /// The linear Poisson structure on the dual chart.
    pub fn linear_poisson(self: &Arc<Self>) -> Result<Arc<PoissonStructure>> {
        if let Some(p) = self.linear_poisson.get() {
            return Ok(p.clone());
        }
        let p = Arc::new(crate::poisson::linear_poisson(self)?);
        Ok(self.linear_poisson.get_or_init(|| p).clone())
    }

    /// Label of the basis section `i` in displays.
    pub fn vector_label(&self, i: usize) -> String {
        match self.origin {
            Origin::Canonical => format!("∂{}", self.fibers[i]),
            Origin::CotangentLift(_) | Origin::Cotangent => self.fibers[i].clone(),
            _ => format!("e{}", self.fibers[i]),
        }
    }

    /// Label of the dual basis element `i` in displays.
    pub fn covector_label(&self, i: usize) -> String {
        match self.origin {
            Origin::Canonical => format!("d{}", self.fibers[i]),
            Origin::CotangentLift(_) | Origin::Cotangent => format!("∂{}", &self.fibers[i][1..]),
            _ => format!("e*{}", self.fibers[i]),
        }
    }

    /// Section with the given coefficients.
    pub fn section(self: &Arc<Self>, coeffs: &[Poly]) -> GradedTensor {
        GradedTensor::from_terms(
            self,
            Kind::MultiVector,
            1,
            coeffs.iter().enumerate().map(|(i, p)| (vec![i], p.clone())),
        )
    }

    /// Basis section e_i.
    pub fn basis(self: &Arc<Self>, i: usize) -> GradedTensor {
        GradedTensor::basis(self, Kind::MultiVector, &[i])
    }

    /// Dual basis form e^{*i}.
    pub fn dual_basis(self: &Arc<Self>, i: usize) -> GradedTensor {
        GradedTensor::basis(self, Kind::Form, &[i])
    }

    /// A polynomial as a degree-0 tensor of the given kind.
    pub fn function(self: &Arc<Self>, kind: Kind, f: Poly) -> GradedTensor {
        GradedTensor::scalar(self, kind, f)
    }

    /// Parses a polynomial over the base chart.
    pub fn parse(&self, src: &str) -> Result<Poly> {
        self.chart.parse(src)
    }
}

fn insert_structure(table: &mut StructureTable, i: usize, j: usize, k: usize, p: Poly) {
    if p.is_zero() {
        return;
    }
    let (i, j, p) = if i < j { (i, j, p) } else { (j, i, -p) };
    let e = table.entry((i, j)).or_default().entry(k).or_insert_with(|| Poly::zero(p.nvars()));
    e.add_assign_ref(&p);
}

/// Complete lift of a function to the dotted chart: Σ_a ∂_a f ẋ^a.
pub fn complete_lift_fn(f: &Poly, n: usize) -> Poly {
    let mut out = Poly::zero(2 * n);
    for a in 0..n {
        let d = f.partial(a);
        if !d.is_zero() {
            out.add_product(&d.extend(2 * n), &Poly::var(n + a, 2 * n));
        }
    }
    out
}

/// Bracket of vector fields given by coefficients.
pub fn vector_field_bracket(u: &[Poly], v: &[Poly]) -> Vec<Poly> {
    (0..u.len())
        .map(|a| &v[a].derive_along(u) - &u[a].derive_along(v))
        .collect()
}

/// Section bracket of two degree-1 multivectors.
pub fn section_bracket(x: &GradedTensor, y: &GradedTensor) -> Result<GradedTensor> {
    x.same_owner(y)?;
    let a = x.owner();
    let xs = x.section_coeffs()?;
    let ys = y.section_coeffs()?;
    Ok(a.section(&a.bracket_coeffs(&xs, &ys)))
}

/// Anchor image of a section as a vector field on the base chart.
pub fn anchor_apply(x: &GradedTensor) -> Result<GradedTensor> {
    let a = x.owner();
    let base = a.base_canonical().ok_or(Error::EmptyChart)?;
    let xs = x.section_coeffs()?;
    Ok(base.section(&a.anchor_coeffs(&xs)))
}

/// Levi-Civita structure functions of so(3) (0-based).
pub fn levi_civita() -> StructureTable {
    let mut t = StructureTable::new();
    let one = |n| Poly::from_int(1, n);
    t.insert((0, 1), BTreeMap::from([(2, one(0))]));
    t.insert((1, 2), BTreeMap::from([(0, one(0))]));
    t.insert((0, 2), BTreeMap::from([(1, -one(0))]));
    t
}

/// so(3) as an algebroid over a point with fibers `1, 2, 3`.
pub fn so3() -> Arc<Algebroid> {
    Algebroid::build(
        Chart::empty(),
        vec!["1".into(), "2".into(), "3".into()],
        vec![vec![]; 3],
        &levi_civita(),
    )
    .expect("so(3) is a Lie algebra")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(names: &[&str]) -> Chart {
        Chart::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn canonical_needs_coordinates() {
        assert_eq!(Algebroid::canonical(&Chart::empty()).unwrap_err(), Error::EmptyChart);
        let a = Algebroid::canonical(&chart(&["x"])).unwrap();
        assert_eq!(a.rank(), 1);
        assert!(a.anchor(0, 0).is_one());
    }

    #[test]
    fn broken_anchor_is_rejected() {
        let c = chart(&["x"]);
        let anchor = vec![vec![c.parse("1").unwrap()], vec![c.parse("x").unwrap()]];
        let err = Algebroid::build(c, vec!["1".into(), "2".into()], anchor, &StructureTable::new())
            .unwrap_err();
        assert!(matches!(err, Error::AnchorNotMorphism { pair: [1, 2], .. }), "{err}");
    }

    #[test]
    fn structure_needs_ordered_pairs() {
        let mut t = StructureTable::new();
        t.insert((1, 0), BTreeMap::from([(0, Poly::one(0))]));
        let err = Algebroid::build(Chart::empty(), vec!["a".into(), "b".into()], vec![vec![]; 2], &t);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn lifts_of_so3_validate() {
        let g = so3();
        let t = g.tangent_lift().unwrap();
        assert_eq!(t.rank(), 6);
        let c = g.cotangent_lift().unwrap();
        assert_eq!(c.chart().coords(), ["xi_1", "xi_2", "xi_3"]);
        // [dξ_1, dξ_2] = dξ_3
        assert!(c.structure(0, 1, 2).is_one());
    }
}
