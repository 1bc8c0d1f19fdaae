//! Exact coefficient ring: sparse multivariate polynomials over the rationals.

mod parse;
mod rational;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use parse::parse_poly;
pub use rational::{ParseRationalError, Rational};

/// Ordered list of coordinate names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Chart {
    coords: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut bytes = s.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl Chart {
    pub fn new<S: Into<String>>(coords: impl IntoIterator<Item = S>) -> Result<Self> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        for (i, c) in coords.iter().enumerate() {
            if !is_identifier(c) {
                return Err(Error::InvalidChart(format!("`{c}` is not an identifier")));
            }
            if coords[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{c}`")));
            }
        }
        Ok(Chart { coords })
    }

    pub fn empty() -> Self {
        Chart::default()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn name(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Appends further coordinates, keeping the existing ones as a prefix.
    pub fn extended<S: Into<String>>(&self, more: impl IntoIterator<Item = S>) -> Result<Chart> {
        Chart::new(
            self.coords
                .iter()
                .cloned()
                .chain(more.into_iter().map(Into::into)),
        )
    }

    /// The chart with every coordinate `c` followed by its velocity `c_dot`.
    /// A name already in use gets further `_dot` suffixes, so iterated lifts stay valid.
    pub fn dotted(&self) -> Result<Chart> {
        let mut taken: std::collections::BTreeSet<String> = self.coords.iter().cloned().collect();
        let mut more = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let mut name = format!("{c}_dot");
            while taken.contains(&name) {
                name.push_str("_dot");
            }
            taken.insert(name.clone());
            more.push(name);
        }
        self.extended(more)
    }

    pub fn parse(&self, src: &str) -> Result<Poly> {
        parse_poly(src, self)
    }

    pub fn partial(&self, p: &Poly, var: &str) -> Result<Poly> {
        Ok(p.partial(self.require(var)?))
    }

    /// Exact value of `p` at a point given as `(coordinate, value)` pairs.
    pub fn eval_at(&self, p: &Poly, point: &[(&str, Rational)]) -> Result<Rational> {
        let mut values = Vec::with_capacity(self.len());
        for c in &self.coords {
            let v = point
                .iter()
                .find(|(name, _)| name == c)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::MissingCoordinate(c.clone()))?;
            values.push(v);
        }
        Ok(p.eval(&values))
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { chart: self, poly: p }
    }

    pub fn print(&self, p: &Poly) -> String {
        self.display(p).to_string()
    }
}

pub type Exponents = SmallVec<[u8; 16]>;

/// Sparse polynomial; exponent vectors are indexed by chart position and
/// ordered lexicographically. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational, nvars: usize) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(smallvec::smallvec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(Rational::ONE, nvars)
    }

    pub fn from_int(n: i64, nvars: usize) -> Self {
        Poly::constant(Rational::from_int(n), nvars)
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e: Exponents = smallvec::smallvec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Rational::ONE)
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    /// The constant value when `self` has no variable terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::ZERO),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the lexicographically largest monomial.
    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Poly) {
        debug_assert_eq!(self.nvars, other.nvars, "polynomials over different charts");
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Poly) {
        debug_assert_eq!(self.nvars, other.nvars, "polynomials over different charts");
        for (e, c) in &other.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Poly, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * factor);
        }
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &Poly, b: &Poly) {
        debug_assert_eq!(a.nvars, b.nvars, "polynomials over different charts");
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponents = ea
                    .iter()
                    .zip(eb.iter())
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect();
                self.add_term(e, ca * cb);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to the variable at index `i`.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] = k - 1;
            out.terms.insert(f, c * &Rational::from_int(k as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point has wrong dimension");
        let mut acc = Rational::ZERO;
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, v) in e.iter().zip(point) {
                if *k > 0 {
                    t = &t * &v.pow(*k as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes the given values, leaving variables mapped to `None` free.
    pub fn substitute(&self, values: &[Option<Rational>]) -> Poly {
        assert_eq!(values.len(), self.nvars, "point has wrong dimension");
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let mut t = c.clone();
            for (k, v) in f.iter_mut().zip(values) {
                if let (Some(v), true) = (v, *k > 0) {
                    t = &t * &v.pow(*k as u32);
                    *k = 0;
                }
            }
            out.add_term(f, t);
        }
        out
    }

    /// Re-expresses `self` on a larger chart that has the current chart as prefix.
    pub fn extend(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        if nvars == self.nvars {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = e.clone();
                f.resize(nvars, 0);
                (f, c.clone())
            })
            .collect();
        Poly { nvars, terms }
    }

    /// Renames variables: variable `i` becomes variable `map[i]` of a chart
    /// with `nvars` coordinates.
    pub fn remap(&self, map: &[usize], nvars: usize) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut f: Exponents = smallvec::smallvec![0; nvars];
            for (i, k) in e.iter().enumerate() {
                f[map[i]] += *k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Drops trailing variables that do not occur; `None` if any does.
    pub fn restrict(&self, nvars: usize) -> Option<Poly> {
        assert!(nvars <= self.nvars);
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            if e[nvars..].iter().any(|&k| k != 0) {
                return None;
            }
            out.terms.insert(e[..nvars].into(), c.clone());
        }
        Some(out)
    }

    /// Sum of `(coefficient_i) * (derivative along variable i)`: the action of
    /// the vector field `Σ field[i] ∂_i` on `self`.
    pub fn derive_along(&self, field: &[Poly]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (i, fi) in field.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let d = self.partial(i);
            if !d.is_zero() {
                out.add_product(fi, &d);
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        let chart = Chart { coords: names };
        write!(f, "{}", chart.display(self))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        out.add_product(self, rhs);
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_poly_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_poly_owned!(Add, add);
forward_poly_owned!(Sub, sub);
forward_poly_owned!(Mul, mul);

/// Canonical textual form: terms in descending monomial order, parseable by
/// [`parse_poly`].
pub struct PolyDisplay<'a> {
    chart: &'a Chart,
    poly: &'a Poly,
}

fn write_monomial(f: &mut fmt::Formatter<'_>, chart: &Chart, e: &Exponents) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", chart.coords[i])?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let is_const = e.iter().all(|&k| k == 0);
            let shown = if n == 0 {
                c.clone()
            } else if c.is_negative() {
                write!(f, " - ")?;
                -c.clone()
            } else {
                write!(f, " + ")?;
                c.clone()
            };
            if is_const {
                write!(f, "{shown}")?;
            } else {
                if !shown.is_one() {
                    write!(f, "{shown}*")?;
                }
                write_monomial(f, self.chart, e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Chart {
        Chart::new(["x", "y"]).unwrap()
    }

    #[test]
    fn chart_validation() {
        assert!(Chart::new(["x", "x"]).is_err());
        assert!(Chart::new(["1x"]).is_err());
        assert!(Chart::new(Vec::<String>::new()).unwrap().is_empty());
        assert_eq!(xy().dotted().unwrap().coords(), ["x", "y", "x_dot", "y_dot"]);
    }

    #[test]
    fn partial_power_rule() {
        let c = xy();
        let p = c.parse("x^2*y").unwrap();
        assert_eq!(c.partial(&p, "x").unwrap(), c.parse("2*x*y").unwrap());
        let x = c.parse("x").unwrap();
        assert!(c.partial(&x, "y").unwrap().is_zero());
        assert_eq!(
            c.partial(&x, "z").unwrap_err(),
            Error::UnknownVariable("z".into())
        );
    }

    #[test]
    fn eval_substitution() {
        let c = Chart::new(["x"]).unwrap();
        let p = c.parse("x^2+1").unwrap();
        assert_eq!(c.eval_at(&p, &[("x", 2.into())]).unwrap(), Rational::from_int(5));
        assert_eq!(
            c.eval_at(&Poly::zero(1), &[("x", Rational::new(7, 3))]).unwrap(),
            Rational::ZERO
        );
        assert_eq!(c.eval_at(&p, &[]).unwrap_err(), Error::MissingCoordinate("x".into()));
    }

    #[test]
    fn printing_is_canonical() {
        let c = xy();
        let p = c.parse("(x+1)^2").unwrap();
        assert_eq!(c.print(&p), "x^2 + 2*x + 1");
        let q = c.parse("1 - x*y - 1/2*y^3").unwrap();
        assert_eq!(c.print(&q), "-1*x*y - 1/2*y^3 + 1");
        assert_eq!(c.parse(&c.print(&q)).unwrap(), q);
    }

    #[test]
    fn remap_and_restrict() {
        let c = xy();
        let p = c.parse("x^2*y + 3").unwrap();
        let q = p.remap(&[1, 0], 2);
        assert_eq!(q, c.parse("y^2*x + 3").unwrap());
        let e = p.extend(4);
        assert_eq!(e.restrict(2).unwrap(), p);
        assert!(Poly::var(3, 4).restrict(2).is_none());
    }
}
