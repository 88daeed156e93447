//! Exact multivariate polynomial arithmetic over the rationals, monomial
//! orders (global and local), free-module elements and the expression parser.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_traits::{One, Signed, Zero};

use crate::AlgError;

/// Arbitrary-precision rational number, always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Exponent vector of fixed length (one entry per ring variable).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = exp;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .zip(&self.0)
                .map(|(b, a)| b - a)
                .collect(),
        )
    }
}

/// Sparse polynomial with exact rational coefficients. No zero coefficients
/// are stored; the term map is sorted, so equality and hashing are canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn int(nvars: usize, n: i64) -> Self {
        Poly::constant(nvars, rat_int(n))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Poly::term(nvars, Monomial::var(nvars, i, 1), Rational::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(&m, &c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn has_zero_constant_term(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn add_term(&mut self, m: &Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        match self.terms.get_mut(m) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m, c);
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(mm, k)| (mm.mul(m), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &other.terms {
            for (mm, k) in &self.terms {
                r.add_term(&mm.mul(m), &(k * c));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.nvars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut mm = m.clone();
                mm.0[i] = e - 1;
                r.add_term(&mm, &(c * rat_int(e as i64)));
            }
        }
        r
    }

    /// Maximal total degree of a term, or None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Minimal total degree of a term (the order of vanishing at the origin).
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }
}

/// The exact product with pre-checked variable counts.
pub fn poly_mul(p: &Poly, q: &Poly) -> Result<Poly, AlgError> {
    if p.nvars() != q.nvars() {
        return Err(AlgError::VariableCountMismatch(p.nvars(), q.nvars()));
    }
    Ok(p.mul(q))
}

/// Element of a free module R^rank; component polynomials are indexed 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyVec {
    nvars: usize,
    comps: Vec<Poly>,
}

impl PolyVec {
    pub fn zero(nvars: usize, rank: usize) -> Self {
        PolyVec {
            nvars,
            comps: vec![Poly::zero(nvars); rank],
        }
    }

    pub fn from_components(nvars: usize, comps: Vec<Poly>) -> Self {
        debug_assert!(comps.iter().all(|p| p.nvars() == nvars));
        PolyVec { nvars, comps }
    }

    pub fn from_poly(p: Poly) -> Self {
        let nvars = p.nvars();
        PolyVec {
            nvars,
            comps: vec![p],
        }
    }

    /// `p * e_i` in R^rank.
    pub fn unit(p: Poly, rank: usize, i: usize) -> Self {
        let nvars = p.nvars();
        let mut v = PolyVec::zero(nvars, rank);
        v.comps[i] = p;
        v
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn set_component(&mut self, i: usize, p: Poly) {
        self.comps[i] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, other: &PolyVec) -> PolyVec {
        assert_eq!(self.rank(), other.rank());
        PolyVec {
            nvars: self.nvars,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &PolyVec) -> PolyVec {
        assert_eq!(self.rank(), other.rank());
        PolyVec {
            nvars: self.nvars,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> PolyVec {
        PolyVec {
            nvars: self.nvars,
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> PolyVec {
        PolyVec {
            nvars: self.nvars,
            comps: self.comps.iter().map(|q| q.mul(p)).collect(),
        }
    }

    /// Multiply all components by the term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> PolyVec {
        PolyVec {
            nvars: self.nvars,
            comps: self.comps.iter().map(|p| p.mul_term(m, c)).collect(),
        }
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (usize, &Monomial, &Rational)> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.terms().map(move |(m, c)| (i, m, c)))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.comps.iter().filter_map(|p| p.total_degree()).max()
    }

    /// Concatenate two vectors into one of larger rank.
    pub fn concat(&self, other: &PolyVec) -> PolyVec {
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        PolyVec {
            nvars: self.nvars,
            comps,
        }
    }

    /// The sub-vector of components `range`.
    pub fn slice(&self, start: usize, len: usize) -> PolyVec {
        PolyVec {
            nvars: self.nvars,
            comps: self.comps[start..start + len].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Higher total degree is larger; standard degrevlex tie-break.
    GlobalDegRevLex,
    /// Lower total degree is larger (1 is the largest monomial); the local
    /// order used for tangent-cone computations.
    LocalAntiDegRevLex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleExt {
    TermOverPosition,
    PositionOverTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub module_ext: ModuleExt,
}

impl MonomialOrder {
    pub fn local() -> Self {
        MonomialOrder {
            kind: OrderKind::LocalAntiDegRevLex,
            module_ext: ModuleExt::TermOverPosition,
        }
    }

    /// Local order eliminating higher components first: any term in a lower
    /// component beats any term in a higher one. Used for syzygy computations.
    pub fn local_elimination() -> Self {
        MonomialOrder {
            kind: OrderKind::LocalAntiDegRevLex,
            module_ext: ModuleExt::PositionOverTerm,
        }
    }

    pub fn global() -> Self {
        MonomialOrder {
            kind: OrderKind::GlobalDegRevLex,
            module_ext: ModuleExt::TermOverPosition,
        }
    }

    pub fn is_local(&self) -> bool {
        matches!(self.kind, OrderKind::LocalAntiDegRevLex)
    }

    /// Greater means larger in the order.
    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let da = a.degree();
        let db = b.degree();
        if da != db {
            return match self.kind {
                OrderKind::GlobalDegRevLex => da.cmp(&db),
                OrderKind::LocalAntiDegRevLex => db.cmp(&da),
            };
        }
        // revlex tie-break: last differing exponent, smaller exponent wins
        for i in (0..a.0.len()).rev() {
            if a.0[i] != b.0[i] {
                return b.0[i].cmp(&a.0[i]);
            }
        }
        Ordering::Equal
    }

    /// Compare module terms (monomial, component). Lower component index is
    /// preferred (larger) in both extensions.
    pub fn cmp_term(&self, a: (&Monomial, usize), b: (&Monomial, usize)) -> Ordering {
        match self.module_ext {
            ModuleExt::TermOverPosition => {
                self.cmp_mono(a.0, b.0).then_with(|| b.1.cmp(&a.1))
            }
            ModuleExt::PositionOverTerm => {
                b.1.cmp(&a.1).then_with(|| self.cmp_mono(a.0, b.0))
            }
        }
    }
}

impl MonomialOrder {
    /// Order-maximal term of a vector: (component, monomial, coefficient).
    pub fn leading_term<'a>(
        &self,
        v: &'a PolyVec,
    ) -> Option<(usize, &'a Monomial, &'a Rational)> {
        let mut best: Option<(usize, &Monomial, &Rational)> = None;
        for (i, m, c) in v.iter_terms() {
            match best {
                None => best = Some((i, m, c)),
                Some((bi, bm, _)) => {
                    if self.cmp_term((m, i), (bm, bi)) == Ordering::Greater {
                        best = Some((i, m, c));
                    }
                }
            }
        }
        best
    }

    pub fn leading_term_poly<'a>(&self, p: &'a Poly) -> Option<(&'a Monomial, &'a Rational)> {
        let mut best: Option<(&Monomial, &Rational)> = None;
        for (m, c) in p.terms() {
            match best {
                None => best = Some((m, c)),
                Some((bm, _)) => {
                    if self.cmp_mono(m, bm) == Ordering::Greater {
                        best = Some((m, c));
                    }
                }
            }
        }
        best
    }
}

/// The spec-level leading-term operation; errors on zero input.
pub fn leading_term(
    v: &PolyVec,
    order: &MonomialOrder,
) -> Result<(usize, Monomial, Rational), AlgError> {
    order
        .leading_term(v)
        .map(|(i, m, c)| (i, m.clone(), c.clone()))
        .ok_or(AlgError::ZeroInput)
}

// ---------------------------------------------------------------------------
// Parsing and printing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgError {
        AlgError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        self.skip_ws();
        let c = self.text.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse_uint(&mut self) -> Result<num_bigint::BigInt, AlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn parse_ident(&mut self) -> Result<String, AlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len()
            && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn parse_expr(&mut self) -> Result<Poly, AlgError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Poly, AlgError> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(b'*') {
            self.bump();
            acc = acc.mul(&self.parse_factor()?);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly, AlgError> {
        let nvars = self.vars.len();
        match self.peek() {
            Some(b'-') => {
                self.bump();
                Ok(self.parse_factor()?.neg())
            }
            Some(b'(') => {
                self.bump();
                let e = self.parse_expr()?;
                if self.bump() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.parse_uint()?;
                if self.peek() == Some(b'/') {
                    self.bump();
                    let den = self.parse_uint()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Poly::constant(nvars, Rational::new(num, den)))
                } else {
                    Ok(Poly::constant(nvars, Rational::from_integer(num)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.parse_ident()?;
                let idx = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| AlgError::UnknownVariable(name.clone()))?;
                let exp = if self.peek() == Some(b'^') {
                    self.bump();
                    let e = self.parse_uint()?;
                    use num_traits::ToPrimitive;
                    e.to_u32().ok_or_else(|| self.err("exponent too large"))?
                } else {
                    1
                };
                Ok(Poly::term(
                    nvars,
                    Monomial::var(nvars, idx, exp),
                    Rational::one(),
                ))
            }
            _ => Err(self.err("expected factor")),
        }
    }
}

/// Parse a polynomial expression over the named variables.
pub fn parse_poly(text: &str, vars: &[String]) -> Result<Poly, AlgError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        vars,
    };
    let poly = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

/// Render a polynomial so that `parse_poly(format_poly(p)) == p`.
pub fn format_poly(p: &Poly, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let order = MonomialOrder::global();
    let mut terms: Vec<(&Monomial, &Rational)> = p.terms().collect();
    terms.sort_by(|a, b| order.cmp_mono(b.0, a.0));
    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -(*c).clone() } else { (*c).clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut parts: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            if abs.denom().is_one() {
                parts.push(format!("{}", abs.numer()));
            } else {
                parts.push(format!("{}/{}", abs.numer(), abs.denom()));
            }
        }
        for (vi, &e) in m.0.iter().enumerate() {
            if e == 1 {
                parts.push(vars[vi].clone());
            } else if e > 1 {
                parts.push(format!("{}^{}", vars[vi], e));
            }
        }
        out.push_str(&parts.join("*"));
    }
    out
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, names: &[&str]) -> Poly {
        parse_poly(text, &vars(names)).unwrap()
    }

    #[test]
    fn parse_basic_terms() {
        let q = p("x^2 - y^3", &["x", "y"]);
        assert_eq!(q.coeff(&Monomial(vec![2, 0])), rat_int(1));
        assert_eq!(q.coeff(&Monomial(vec![0, 3])), rat_int(-1));
        assert_eq!(q.num_terms(), 2);
    }

    #[test]
    fn parse_zero() {
        assert!(p("0", &["x"]).is_zero());
    }

    #[test]
    fn parse_product() {
        let q = p("(x+y)*(x-y)", &["x", "y"]);
        assert_eq!(q, p("x^2 - y^2", &["x", "y"]));
    }

    #[test]
    fn parse_rational_coeff() {
        let q = p("3/2*y", &["x", "y"]);
        assert_eq!(q.coeff(&Monomial(vec![0, 1])), Rational::new(3.into(), 2.into()));
    }

    #[test]
    fn parse_rejects_implicit_mul() {
        assert!(parse_poly("2x", &vars(&["x"])).is_err());
        assert!(parse_poly("x y", &vars(&["x", "y"])).is_err());
    }

    #[test]
    fn parse_unknown_var() {
        assert!(matches!(
            parse_poly("z", &vars(&["x"])),
            Err(AlgError::UnknownVariable(_))
        ));
    }

    #[test]
    fn mul_examples() {
        let v = ["x", "y"];
        assert_eq!(p("x+1", &v).mul(&p("x-1", &v)), p("x^2-1", &v));
        assert!(p("x+1", &v).mul(&p("0", &v)).is_zero());
        assert_eq!(p("2*x", &v).mul(&p("3/2*y", &v)), p("3*x*y", &v));
    }

    #[test]
    fn mul_nvars_mismatch() {
        let a = p("x", &["x"]);
        let b = p("x", &["x", "y"]);
        assert!(matches!(
            poly_mul(&a, &b),
            Err(AlgError::VariableCountMismatch(1, 2))
        ));
    }

    #[test]
    fn leading_terms_by_order() {
        let v = ["x", "y"];
        let q = p("x^2 + x^3", &v);
        let local = MonomialOrder::local();
        let global = MonomialOrder::global();
        let (lm, _) = local.leading_term_poly(&q).unwrap();
        assert_eq!(*lm, Monomial(vec![2, 0]));
        let (gm, _) = global.leading_term_poly(&q).unwrap();
        assert_eq!(*gm, Monomial(vec![3, 0]));
    }

    #[test]
    fn leading_term_module() {
        let v = vars(&["x", "y"]);
        let e1 = PolyVec::unit(parse_poly("x", &v).unwrap(), 2, 0);
        let e2 = PolyVec::unit(parse_poly("y^2", &v).unwrap(), 2, 1);
        let w = e1.add(&e2);
        let (comp, m, c) = leading_term(&w, &MonomialOrder::local()).unwrap();
        assert_eq!(comp, 0);
        assert_eq!(m, Monomial(vec![1, 0]));
        assert_eq!(c, rat_int(1));
    }

    #[test]
    fn leading_term_zero_errors() {
        let z = PolyVec::zero(2, 1);
        assert!(matches!(
            leading_term(&z, &MonomialOrder::local()),
            Err(AlgError::ZeroInput)
        ));
    }

    #[test]
    fn derivative_works() {
        let v = ["x", "y"];
        assert_eq!(p("x^2-y^3", &v).derivative(0), p("2*x", &v));
        assert_eq!(p("x^2-y^3", &v).derivative(1), p("-3*y^2", &v));
    }

    #[test]
    fn format_round_trip_samples() {
        let v = vars(&["x", "y"]);
        for s in ["x^2 - y^3", "0", "1/2*x*y - 3", "-x", "x^2*y^3 + 7/5"] {
            let q = parse_poly(s, &v).unwrap();
            let r = parse_poly(&format_poly(&q, &v), &v).unwrap();
            assert_eq!(q, r, "round trip failed for {s}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = Poly> {
            proptest::collection::vec(
                ((0u32..4, 0u32..4), -5i64..6),
                0..6,
            )
            .prop_map(|ts| {
                let mut p = Poly::zero(2);
                for ((a, b), c) in ts {
                    p.add_term(&Monomial(vec![a, b]), &rat_int(c));
                }
                p
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert_eq!(a.add(&b), b.add(&a));
            }

            #[test]
            fn print_parse_round_trip(a in arb_poly()) {
                let v = vec!["x".to_string(), "y".to_string()];
                let s = format_poly(&a, &v);
                prop_assert_eq!(parse_poly(&s, &v).unwrap(), a);
            }

            #[test]
            fn leading_term_multiplicative(a in arb_poly(), b in arb_poly()) {
                for order in [MonomialOrder::local(), MonomialOrder::global()] {
                    if a.is_zero() || b.is_zero() { continue; }
                    let (ma, ca) = {
                        let (m, c) = order.leading_term_poly(&a).unwrap();
                        (m.clone(), c.clone())
                    };
                    let (mb, cb) = {
                        let (m, c) = order.leading_term_poly(&b).unwrap();
                        (m.clone(), c.clone())
                    };
                    let prod = a.mul(&b);
                    let (mp, cp) = order.leading_term_poly(&prod).unwrap();
                    prop_assert_eq!(mp.clone(), ma.mul(&mb));
                    prop_assert_eq!(cp.clone(), ca * cb);
                }
            }
        }
    }
}
