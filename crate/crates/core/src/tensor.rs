//! Graded tensors over an algebroid: multivectors, forms, mixed tensors
//! (form ⊗ section) and symmetric multivectors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::algebroid::Algebroid;
use crate::error::{Error, Result};
use crate::ring::{Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    MultiVector,
    Form,
    /// Form part first, fiber index last.
    Mixed,
    Sym,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::MultiVector => "multivector",
            Kind::Form => "form",
            Kind::Mixed => "mixed",
            Kind::Sym => "sym",
        }
    }
}

/// Normalized basis key, 0-based fiber indices.
pub type Key = SmallVec<[u8; 8]>;

/// Composition order of single insertions for decomposable multivectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionOrder {
    /// i_{X1∧…∧Xk} = i_{X1}∘…∘i_{Xk}: the last factor is inserted first.
    Default,
    /// i_{X1∧…∧Xk} = i_{Xk}∘…∘i_{X1}: the first factor is inserted first.
    Reversed,
}

impl ContractionOrder {
    pub fn name(self) -> &'static str {
        match self {
            ContractionOrder::Default => "default",
            ContractionOrder::Reversed => "reversed",
        }
    }

    pub fn opposite(self) -> ContractionOrder {
        match self {
            ContractionOrder::Default => ContractionOrder::Reversed,
            ContractionOrder::Reversed => ContractionOrder::Default,
        }
    }

    pub fn from_name(s: &str) -> Option<ContractionOrder> {
        match s {
            "default" => Some(ContractionOrder::Default),
            "reversed" => Some(ContractionOrder::Reversed),
            _ => None,
        }
    }
}

/// Order used by [`contract`] and everything built on it.
pub const ACTIVE_ORDER: ContractionOrder = ContractionOrder::Reversed;

#[derive(Clone)]
pub struct GradedTensor {
    owner: Arc<Algebroid>,
    kind: Kind,
    degree: usize,
    terms: BTreeMap<Key, Poly>,
}

/// Sorts `key` in place, returning the permutation sign, or `None` if an
/// index repeats.
pub(crate) fn sort_antisym(key: &mut [u8]) -> Option<bool> {
    let mut neg = false;
    for i in 1..key.len() {
        let mut j = i;
        while j > 0 && key[j - 1] > key[j] {
            key.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
        if j > 0 && key[j - 1] == key[j] {
            return None;
        }
    }
    Some(neg)
}

/// Concatenation of two sorted antisymmetric keys with its sign.
pub(crate) fn merge_antisym(a: &[u8], b: &[u8]) -> Option<(bool, Key)> {
    let mut out = Key::with_capacity(a.len() + b.len());
    let mut neg = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            // b[j] jumps over the remaining a.len() - i entries of a
            if (a.len() - i) % 2 == 1 {
                neg = !neg;
            }
            out.push(b[j]);
            j += 1;
        } else {
            return None;
        }
    }
    Some((neg, out))
}

fn merge_sym(a: &[u8], b: &[u8]) -> Key {
    let mut out: Key = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out
}

/// Removes index `j` from a sorted key: `(sign, rest)` with sign (−1)^position.
pub(crate) fn remove_index(key: &[u8], j: u8) -> Option<(bool, Key)> {
    let p = key.iter().position(|&k| k == j)?;
    let mut rest = Key::from_slice(key);
    rest.remove(p);
    Some((p % 2 == 1, rest))
}

fn signed(p: &Poly, neg: bool) -> Poly {
    if neg {
        -p
    } else {
        p.clone()
    }
}

impl GradedTensor {
    pub fn zero(owner: &Arc<Algebroid>, kind: Kind, degree: usize) -> Self {
        let (kind, degree) = match (kind, degree) {
            (Kind::Mixed, 0) => (Kind::MultiVector, 1),
            other => other,
        };
        GradedTensor { owner: owner.clone(), kind, degree, terms: BTreeMap::new() }
    }

    /// A function viewed as a degree-0 tensor.
    pub fn scalar(owner: &Arc<Algebroid>, kind: Kind, f: Poly) -> Self {
        assert!(kind != Kind::Mixed, "mixed tensors have no degree-0 scalars");
        let mut t = GradedTensor::zero(owner, kind, 0);
        t.add_term(Key::new(), &f);
        t
    }

    /// Basis element with coefficient 1. Mixed keys end with the fiber index.
    pub fn basis(owner: &Arc<Algebroid>, kind: Kind, key: &[usize]) -> Self {
        let degree = if kind == Kind::Mixed { key.len() - 1 } else { key.len() };
        GradedTensor::from_terms(owner, kind, degree, [(key.to_vec(), Poly::one(owner.nvars()))])
    }

    /// Builds a tensor from unnormalized keys.
    pub fn from_terms(
        owner: &Arc<Algebroid>,
        kind: Kind,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Self {
        let mut t = GradedTensor { owner: owner.clone(), kind, degree, terms: BTreeMap::new() };
        for (key, p) in terms {
            t.add_raw_term(&key, &p);
        }
        if kind == Kind::Mixed && degree == 0 {
            t.kind = Kind::MultiVector;
            t.degree = 1;
        }
        t
    }

    pub fn owner(&self) -> &Arc<Algebroid> {
        &self.owner
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Key, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn key_len(&self) -> usize {
        if self.kind == Kind::Mixed {
            self.degree + 1
        } else {
            self.degree
        }
    }

    /// Kind as seen by mixed-tensor operations: degree-1 multivectors are mixed of degree 0.
    pub fn is_mixed_like(&self) -> bool {
        self.kind == Kind::Mixed || (self.kind == Kind::MultiVector && self.degree == 1)
    }

    /// Form degree of a mixed-like tensor.
    pub fn mixed_degree(&self) -> usize {
        if self.kind == Kind::Mixed {
            self.degree
        } else {
            0
        }
    }

    pub fn is_function(&self) -> bool {
        self.degree == 0
    }

    /// Value of a degree-0 tensor.
    pub fn scalar_value(&self) -> Option<Poly> {
        (self.degree == 0).then(|| {
            self.terms.get(&Key::new()).cloned().unwrap_or_else(|| Poly::zero(self.owner.nvars()))
        })
    }

    /// Adds `p` at a normalized key.
    pub fn add_term(&mut self, key: Key, p: &Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(p);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `p` at an arbitrary key, normalizing it first.
    pub fn add_raw_term(&mut self, key: &[usize], p: &Poly) {
        assert_eq!(key.len(), self.key_len(), "key length does not match the degree");
        let m = self.owner.rank();
        assert!(key.iter().all(|&k| k < m), "fiber index out of range");
        let mut k: Key = key.iter().map(|&i| i as u8).collect();
        let neg = match self.kind {
            Kind::MultiVector | Kind::Form => match sort_antisym(&mut k) {
                Some(neg) => neg,
                None => return,
            },
            Kind::Mixed => {
                let d = self.degree;
                match sort_antisym(&mut k[..d]) {
                    Some(neg) => neg,
                    None => return,
                }
            }
            Kind::Sym => {
                k.sort_unstable();
                false
            }
        };
        self.add_term(k, &signed(p, neg));
    }

    /// Coefficient at an arbitrary key, taking (anti)symmetry into account.
    pub fn coeff(&self, key: &[usize]) -> Poly {
        let mut probe = GradedTensor::zero(&self.owner, self.kind, self.degree);
        probe.kind = self.kind;
        probe.degree = self.degree;
        probe.add_raw_term(key, &Poly::one(self.owner.nvars()));
        match probe.terms.into_iter().next() {
            Some((k, sign)) => match self.terms.get(&k) {
                Some(c) => c * &sign,
                None => Poly::zero(self.owner.nvars()),
            },
            None => Poly::zero(self.owner.nvars()),
        }
    }

    pub fn same_owner(&self, other: &GradedTensor) -> Result<()> {
        if Arc::ptr_eq(&self.owner, &other.owner) || *self.owner == *other.owner {
            Ok(())
        } else {
            Err(Error::ChartMismatch(format!(
                "tensors live over different algebroids ({:?} vs {:?})",
                self.owner.chart().coords(),
                other.owner.chart().coords()
            )))
        }
    }

    fn compatible(&self, other: &GradedTensor) -> bool {
        if self.degree == 0 && other.degree == 0 {
            return true;
        }
        if self.degree != other.degree {
            return false;
        }
        self.kind == other.kind
            || (self.degree == 1
                && matches!(self.kind, Kind::MultiVector | Kind::Sym)
                && matches!(other.kind, Kind::MultiVector | Kind::Sym))
    }

    /// Sum; zero tensors of any shape are neutral.
    pub fn add(&self, other: &GradedTensor) -> Result<GradedTensor> {
        self.same_owner(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if !self.compatible(other) {
            return Err(Error::KindMismatch(format!(
                "cannot add {} of degree {} and {} of degree {}",
                self.kind.name(),
                self.degree,
                other.kind.name(),
                other.degree
            )));
        }
        let mut out = self.clone();
        out.accumulate(other);
        Ok(out)
    }

    pub fn sub(&self, other: &GradedTensor) -> Result<GradedTensor> {
        self.add(&other.neg())
    }

    /// In-place sum without shape checks. Adopts `other`'s shape when `self` is zero.
    pub fn accumulate(&mut self, other: &GradedTensor) {
        if self.is_zero() {
            self.kind = other.kind;
            self.degree = other.degree;
        }
        for (k, p) in &other.terms {
            self.add_term(k.clone(), p);
        }
    }

    /// In-place difference without shape checks.
    pub fn subtract(&mut self, other: &GradedTensor) {
        self.accumulate(&other.neg());
    }

    pub fn neg(&self) -> GradedTensor {
        self.map_coeffs(|p| -p)
    }

    pub fn scale(&self, c: &Rational) -> GradedTensor {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn signed(&self, negative: bool) -> GradedTensor {
        if negative {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Multiplies every coefficient by a function.
    pub fn mul_fn(&self, f: &Poly) -> GradedTensor {
        self.map_coeffs(|p| p * f)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Poly) -> Poly) -> GradedTensor {
        let mut out = GradedTensor { terms: BTreeMap::new(), ..self.clone_shape() };
        for (k, p) in &self.terms {
            out.add_term(k.clone(), &f(p));
        }
        out
    }

    fn clone_shape(&self) -> GradedTensor {
        GradedTensor {
            owner: self.owner.clone(),
            kind: self.kind,
            degree: self.degree,
            terms: BTreeMap::new(),
        }
    }

    /// Same tensor viewed with another kind of the same shape (functions, degree-1 sections).
    pub fn as_kind(&self, kind: Kind) -> Result<GradedTensor> {
        if self.kind == kind {
            return Ok(self.clone());
        }
        let ok = self.degree == 0 && kind != Kind::Mixed
            || (self.degree == 1
                && matches!(self.kind, Kind::MultiVector | Kind::Sym)
                && matches!(kind, Kind::MultiVector | Kind::Sym));
        if !ok {
            return Err(Error::KindMismatch(format!(
                "cannot view {} of degree {} as {}",
                self.kind.name(),
                self.degree,
                kind.name()
            )));
        }
        Ok(GradedTensor { kind, ..self.clone() })
    }

    /// Coefficients of a degree-1 multivector (or symmetric) section.
    pub fn section_coeffs(&self) -> Result<Vec<Poly>> {
        if self.degree != 1 || !matches!(self.kind, Kind::MultiVector | Kind::Sym) {
            return Err(Error::KindMismatch(format!(
                "expected a section, got {} of degree {}",
                self.kind.name(),
                self.degree
            )));
        }
        let n = self.owner.nvars();
        let mut out = vec![Poly::zero(n); self.owner.rank()];
        for (k, p) in &self.terms {
            out[k[0] as usize] = p.clone();
        }
        Ok(out)
    }

    /// Same coefficients over another algebroid, with keys re-indexed.
    pub(crate) fn transport(
        &self,
        owner: &Arc<Algebroid>,
        kind: Kind,
        index: impl Fn(usize) -> usize,
        coeff: impl Fn(&Poly) -> Poly,
    ) -> GradedTensor {
        let mut out = GradedTensor::zero(owner, kind, self.degree);
        out.kind = kind;
        out.degree = self.degree;
        for (k, p) in &self.terms {
            let key: Vec<usize> = k.iter().map(|&i| index(i as usize)).collect();
            out.add_raw_term(&key, &coeff(p));
        }
        if out.kind == Kind::Mixed && out.degree == 0 {
            out.kind = Kind::MultiVector;
            out.degree = 1;
        }
        out
    }

    /// Shape-preserving clone with no terms.
    pub fn zero_like(&self) -> GradedTensor {
        self.clone_shape()
    }

    /// Graded-commutativity degree: form degree for forms, degree otherwise.
    fn mixed_parts(&self) -> (usize, Kind) {
        if self.kind == Kind::MultiVector && self.degree == 1 {
            (0, Kind::Mixed)
        } else {
            (self.degree, self.kind)
        }
    }

    /// Key string with 1-based indices: `1,2` or `1,2|3` for mixed tensors.
    pub fn key_string(&self, key: &Key) -> String {
        let join = |ks: &[u8]| ks.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(",");
        if self.kind == Kind::Mixed {
            format!("{}|{}", join(&key[..self.degree]), key[self.degree] + 1)
        } else {
            join(key)
        }
    }

    /// Structured form: key string to printed coefficient.
    pub fn to_key_map(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(k, p)| (self.key_string(k), self.owner.chart().print(p)))
            .collect()
    }

    pub fn pretty(&self) -> String {
        pretty_terms(&self.owner, self.kind_for_display(), self.terms.iter().map(|(k, p)| (k.clone(), p.clone())))
    }

    fn kind_for_display(&self) -> DisplayShape {
        DisplayShape { kind: self.kind, degree: self.degree }
    }
}

#[derive(Clone, Copy)]
pub(crate) struct DisplayShape {
    kind: Kind,
    degree: usize,
}

impl From<Kind> for DisplayShape {
    fn from(kind: Kind) -> Self {
        DisplayShape { kind, degree: 1 }
    }
}

fn basis_label(owner: &Algebroid, shape: DisplayShape, key: &[u8]) -> String {
    let vec = |k: &u8| owner.vector_label(*k as usize);
    let cov = |k: &u8| owner.covector_label(*k as usize);
    match shape.kind {
        Kind::MultiVector => key.iter().map(vec).collect::<Vec<_>>().join("∧"),
        Kind::Sym => key.iter().map(vec).collect::<Vec<_>>().join("∨"),
        Kind::Form => key.iter().map(cov).collect::<Vec<_>>().join("∧"),
        Kind::Mixed => {
            let d = shape.degree;
            let form = key[..d].iter().map(cov).collect::<Vec<_>>().join("∧");
            format!("{form}⊗{}", vec(&key[d]))
        }
    }
}

/// Human-readable rendering, e.g. `x*∂x − p_x*∂p_x` or `−e*1∧e*2`.
pub(crate) fn pretty_terms(
    owner: &Algebroid,
    shape: impl Into<DisplayShape>,
    terms: impl IntoIterator<Item = (Key, Poly)>,
) -> String {
    let shape = shape.into();
    let chart = owner.chart();
    let mut out = String::new();
    for (n, (key, p)) in terms.into_iter().enumerate() {
        let label = basis_label(owner, shape, &key);
        let single = p.len() == 1;
        let negative = single && p.leading_coefficient().is_some_and(Rational::is_negative);
        let shown = if negative { -&p } else { p.clone() };
        let sep = match (n, negative) {
            (0, false) => "",
            (0, true) => "−",
            (_, false) => " + ",
            (_, true) => " − ",
        };
        out.push_str(sep);
        let coeff = chart.print(&shown);
        if label.is_empty() {
            out.push_str(&coeff);
        } else if shown.is_one() {
            out.push_str(&label);
        } else if single {
            out.push_str(&format!("{coeff}*{label}"));
        } else {
            out.push_str(&format!("({coeff})*{label}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl PartialEq for GradedTensor {
    fn eq(&self, other: &Self) -> bool {
        if self.same_owner(other).is_err() {
            return false;
        }
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.compatible(other) && self.terms == other.terms
    }
}

impl fmt::Display for GradedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Debug for GradedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]({})", self.kind.name(), self.degree, self.pretty())
    }
}

/// Normal-form equality; errors on tensors over different algebroids.
pub fn equals(s: &GradedTensor, t: &GradedTensor) -> Result<bool> {
    s.same_owner(t)?;
    Ok(s == t)
}

/// Exterior product. Functions multiply anything; a form times a mixed
/// tensor (in either order) is mixed.
pub fn wedge(s: &GradedTensor, t: &GradedTensor) -> Result<GradedTensor> {
    s.same_owner(t)?;
    if s.degree == 0 && s.kind != Kind::Mixed {
        let f = s.scalar_value().unwrap();
        return Ok(t.mul_fn(&f));
    }
    if t.degree == 0 && t.kind != Kind::Mixed {
        let f = t.scalar_value().unwrap();
        return Ok(s.mul_fn(&f));
    }
    let (sd, sk) = s.mixed_parts();
    let (td, tk) = t.mixed_parts();
    let owner = &s.owner;
    match (s.kind, t.kind) {
        (Kind::MultiVector, Kind::MultiVector) | (Kind::Form, Kind::Form) => {
            let mut out = GradedTensor::zero(owner, s.kind, s.degree + t.degree);
            for (a, p) in &s.terms {
                for (b, q) in &t.terms {
                    if let Some((neg, key)) = merge_antisym(a, b) {
                        out.add_term(key, &signed(&(p * q), neg));
                    }
                }
            }
            Ok(out)
        }
        (Kind::Form, _) if tk == Kind::Mixed => {
            let mut out = GradedTensor::zero(owner, Kind::Mixed, sd + td);
            for (a, p) in &s.terms {
                for (b, q) in &t.terms {
                    if let Some((neg, mut key)) = merge_antisym(a, &b[..td]) {
                        key.push(b[td]);
                        out.add_term(key, &signed(&(p * q), neg));
                    }
                }
            }
            Ok(out)
        }
        (_, Kind::Form) if sk == Kind::Mixed => {
            let mut out = GradedTensor::zero(owner, Kind::Mixed, sd + td);
            for (a, p) in &s.terms {
                for (b, q) in &t.terms {
                    if let Some((neg, mut key)) = merge_antisym(&a[..sd], b) {
                        key.push(a[sd]);
                        out.add_term(key, &signed(&(p * q), neg));
                    }
                }
            }
            Ok(out)
        }
        _ => Err(Error::KindMismatch(format!(
            "cannot wedge {} and {}",
            s.kind.name(),
            t.kind.name()
        ))),
    }
}

/// Symmetric product; degree-1 multivectors and functions coerce.
pub fn sym_product(s: &GradedTensor, t: &GradedTensor) -> Result<GradedTensor> {
    s.same_owner(t)?;
    let s = s.as_kind(Kind::Sym)?;
    let t = t.as_kind(Kind::Sym)?;
    let mut out = GradedTensor::zero(&s.owner, Kind::Sym, s.degree + t.degree);
    for (a, p) in &s.terms {
        for (b, q) in &t.terms {
            out.add_term(merge_sym(a, b), &(p * q));
        }
    }
    Ok(out)
}

/// i_{e_j} on a single form term.
fn insert_basis(j: u8, key: &[u8]) -> Option<(bool, Key)> {
    remove_index(key, j)
}

/// i_X μ under the active order.
pub fn contract(x: &GradedTensor, mu: &GradedTensor) -> Result<GradedTensor> {
    contract_with(ACTIVE_ORDER, x, mu)
}

/// i_X μ for a multivector X and a form or mixed tensor μ.
pub fn contract_with(order: ContractionOrder, x: &GradedTensor, mu: &GradedTensor) -> Result<GradedTensor> {
    x.same_owner(mu)?;
    let x = if x.degree == 0 { x.as_kind(Kind::MultiVector)? } else { x.clone() };
    if x.kind != Kind::MultiVector {
        return Err(Error::KindMismatch(format!("contraction needs a multivector, got {}", x.kind.name())));
    }
    let (mdeg, mkind) = if mu.kind == Kind::Form || (mu.degree == 0 && mu.kind != Kind::Mixed) {
        (mu.degree, Kind::Form)
    } else if mu.is_mixed_like() {
        (mu.mixed_degree(), Kind::Mixed)
    } else {
        return Err(Error::KindMismatch(format!("cannot contract into a {}", mu.kind.name())));
    };
    let k = x.degree;
    if k > mdeg {
        return Ok(GradedTensor::zero(&mu.owner, mkind, 0));
    }
    let mut out = GradedTensor::zero(&mu.owner, mkind, mdeg - k);
    out.kind = mkind;
    out.degree = mdeg - k;
    for (xk, xp) in &x.terms {
        for (mk, mp) in &mu.terms {
            let (form, tail) = mk.split_at(mdeg);
            let mut key = Key::from_slice(form);
            let mut neg = false;
            let mut ok = true;
            let seq: Vec<u8> = match order {
                ContractionOrder::Default => xk.iter().rev().copied().collect(),
                ContractionOrder::Reversed => xk.to_vec(),
            };
            for j in seq {
                match insert_basis(j, &key) {
                    Some((s, rest)) => {
                        neg ^= s;
                        key = rest;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                key.extend_from_slice(tail);
                out.add_term(key, &signed(&(xp * mp), neg));
            }
        }
    }
    if out.kind == Kind::Mixed && out.degree == 0 {
        out.kind = Kind::MultiVector;
        out.degree = 1;
    }
    Ok(out)
}

/// i_K t for a mixed K = μ⊗X: i_K ν = μ∧i_X ν, and i_K(ν⊗Y) = (i_K ν)⊗Y.
pub fn contract_mixed(k: &GradedTensor, t: &GradedTensor) -> Result<GradedTensor> {
    k.same_owner(t)?;
    if !k.is_mixed_like() {
        return Err(Error::KindMismatch(format!("expected a mixed tensor, got {}", k.kind.name())));
    }
    let kd = k.mixed_degree();
    let (td, tkind) = if t.kind == Kind::Form || (t.degree == 0 && t.kind != Kind::Mixed) {
        (t.degree, Kind::Form)
    } else if t.is_mixed_like() {
        (t.mixed_degree(), Kind::Mixed)
    } else {
        return Err(Error::KindMismatch(format!("cannot contract into a {}", t.kind.name())));
    };
    if td == 0 {
        return Ok(GradedTensor::zero(&t.owner, tkind, kd.saturating_sub(1)));
    }
    let mut out = GradedTensor::zero(&t.owner, tkind, td + kd - 1);
    out.kind = tkind;
    out.degree = td + kd - 1;
    for (kk, kp) in &k.terms {
        let (mu, x) = (&kk[..kd], kk[kd]);
        for (tk, tp) in &t.terms {
            let (nu, tail) = tk.split_at(td);
            let Some((s1, rest)) = insert_basis(x, nu) else { continue };
            let Some((s2, mut key)) = merge_antisym(mu, &rest) else { continue };
            key.extend_from_slice(tail);
            out.add_term(key, &signed(&(kp * tp), s1 ^ s2));
        }
    }
    if out.kind == Kind::Mixed && out.degree == 0 {
        out.kind = Kind::MultiVector;
        out.degree = 1;
    }
    Ok(out)
}

/// Splits a mixed-like tensor into (form part key, fiber index, coefficient).
pub(crate) fn mixed_terms(k: &GradedTensor) -> Vec<(Key, usize, Poly)> {
    let d = k.mixed_degree();
    k.terms.iter().map(|(key, p)| (Key::from_slice(&key[..d]), key[d] as usize, p.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Chart;

    fn canon(names: &[&str]) -> Arc<Algebroid> {
        Algebroid::canonical(&Chart::new(names.iter().copied()).unwrap()).unwrap()
    }

    #[test]
    fn key_normalization() {
        let mut k = [2u8, 0, 1];
        assert_eq!(sort_antisym(&mut k), Some(false));
        assert_eq!(k, [0, 1, 2]);
        let mut k = [1u8, 0];
        assert_eq!(sort_antisym(&mut k), Some(true));
        assert_eq!(sort_antisym(&mut [1u8, 2, 1]), None);
        assert_eq!(merge_antisym(&[1], &[0]), Some((true, Key::from_slice(&[0, 1]))));
        assert_eq!(merge_antisym(&[0, 2], &[1, 3]), Some((true, Key::from_slice(&[0, 1, 2, 3]))));
        assert_eq!(merge_antisym(&[0, 2], &[2]), None);
    }

    #[test]
    fn wedge_examples() {
        let a = canon(&["x", "y"]);
        let dx = a.dual_basis(0);
        let dy = a.dual_basis(1);
        assert!(wedge(&dx, &dx).unwrap().is_zero());
        assert_eq!(wedge(&dx, &dy).unwrap(), wedge(&dy, &dx).unwrap().neg());
        let f = a.parse("x + y").unwrap();
        let g = a.parse("x*y").unwrap();
        let lhs = wedge(&dx.mul_fn(&f), &dy.mul_fn(&g)).unwrap();
        assert_eq!(lhs, wedge(&dx, &dy).unwrap().mul_fn(&(&f * &g)));
        assert_eq!(wedge(&dx, &dy).unwrap().pretty(), "dx∧dy");
        assert_eq!(wedge(&dy, &dx).unwrap().pretty(), "−dx∧dy");
    }

    #[test]
    fn sym_examples() {
        let a = canon(&["x", "y"]);
        let e1 = a.basis(0);
        let e2 = a.basis(1);
        assert_eq!(sym_product(&e1, &e2).unwrap(), sym_product(&e2, &e1).unwrap());
        let x = a.parse("x").unwrap();
        let lhs = sym_product(&e1.mul_fn(&x), &e1).unwrap();
        assert_eq!(lhs, sym_product(&e1, &e1).unwrap().mul_fn(&x));
        assert_eq!(lhs.degree(), 2);
        assert_eq!(lhs.pretty(), "x*∂x∨∂x");
    }

    #[test]
    fn contraction_examples() {
        let a = canon(&["x", "y"]);
        let dx = a.dual_basis(0);
        let dy = a.dual_basis(1);
        let ex = a.basis(0);
        let one = a.function(Kind::Form, Poly::one(2));
        assert_eq!(contract(&ex, &dx).unwrap(), one);
        assert!(contract(&wedge(&ex, &a.basis(1)).unwrap(), &dx).unwrap().is_zero());
        let exy = wedge(&ex, &a.basis(1)).unwrap();
        let dxy = wedge(&dx, &dy).unwrap();
        let d = contract_with(ContractionOrder::Default, &exy, &dxy).unwrap();
        let r = contract_with(ContractionOrder::Reversed, &exy, &dxy).unwrap();
        assert_eq!(d.scalar_value().unwrap(), Poly::from_int(-1, 2));
        assert_eq!(r.scalar_value().unwrap(), Poly::from_int(1, 2));
    }

    #[test]
    fn mixed_contraction_examples() {
        let a = canon(&["x", "y"]);
        let dx = a.dual_basis(0);
        let dy = a.dual_basis(1);
        let k = GradedTensor::basis(&a, Kind::Mixed, &[0, 0]);
        assert_eq!(contract_mixed(&k, &dx).unwrap(), dx);
        assert!(contract_mixed(&k, &dy).unwrap().is_zero());
        let l = GradedTensor::basis(&a, Kind::Mixed, &[1, 1]);
        assert!(contract_mixed(&k, &l).unwrap().is_zero());
        assert_eq!(k.pretty(), "dx⊗∂x");
        assert_eq!(k.key_string(k.terms().keys().next().unwrap()), "1|1");
        // degree-0 mixed tensors are sections
        let s = GradedTensor::from_terms(&a, Kind::Mixed, 0, [(vec![1], Poly::one(2))]);
        assert_eq!(s, a.basis(1));
    }

    #[test]
    fn owner_mismatch() {
        let a = canon(&["x"]);
        let b = canon(&["y"]);
        let err = equals(&a.basis(0), &b.basis(0)).unwrap_err();
        assert!(matches!(err, Error::ChartMismatch(_)));
        let s = a.basis(0);
        assert!(equals(&s.sub(&s).unwrap(), &GradedTensor::zero(&a, Kind::Form, 3)).unwrap());
    }
}
