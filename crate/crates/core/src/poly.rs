//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are [`Symbol`]s: plain names such as `a4` or `b13`, or the
//! directional derivative of another symbol along a frame vector, written
//! `T(a4)`. Derivative symbols are opaque to the algebra; only
//! [`Polynomial::frame_derivative`] creates them.

use crate::error::{Error, Result};
use crate::tensor::FrameIndex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Named(String),
    Deriv(FrameIndex, Box<Symbol>),
}

impl Symbol {
    pub fn named(s: &str) -> Symbol {
        Symbol::Named(s.to_string())
    }

    pub fn deriv(dir: FrameIndex, of: Symbol) -> Symbol {
        Symbol::Deriv(dir, Box::new(of))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Named(s) => f.write_str(s),
            Symbol::Deriv(d, s) => write!(f, "{}({})", d.name(), s),
        }
    }
}

/// Product of symbol powers, kept sorted by symbol with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut out: BTreeMap<Symbol, u32> = BTreeMap::new();
        for (s, e) in self.0.iter().chain(o.0.iter()) {
            *out.entry(s.clone()).or_insert(0) += e;
        }
        Monomial(out.into_iter().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(s: Symbol) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(s), rat(1));
        p
    }

    pub fn named(name: &str) -> Self {
        Self::var(Symbol::named(name))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::int(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// All symbols occurring in the polynomial.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(s, _)| s.clone())).collect()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(x, _)| x == s))
    }

    /// Formal partial derivative with respect to one symbol.
    pub fn partial(&self, s: &Symbol) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some(pos) = m.0.iter().position(|(x, _)| x == s) {
                let e = m.0[pos].1;
                let mut f = m.0.clone();
                if e == 1 {
                    f.remove(pos);
                } else {
                    f[pos].1 = e - 1;
                }
                out.add_term(Monomial(f), c * rat(e as i64));
            }
        }
        out
    }

    /// Directional derivative along a frame vector by the Leibniz rule.
    /// Symbols for which `is_constant` holds differentiate to zero; every
    /// other symbol `s` differentiates to the opaque symbol `dir(s)`.
    pub fn frame_derivative(&self, dir: FrameIndex, is_constant: &dyn Fn(&Symbol) -> bool) -> Polynomial {
        let mut out = Polynomial::zero();
        for s in self.symbols() {
            if is_constant(&s) {
                continue;
            }
            let d = Polynomial::var(Symbol::deriv(dir, s.clone()));
            out = out + &self.partial(&s) * &d;
        }
        out
    }

    /// Simultaneous substitution of symbols by polynomials.
    pub fn substitute(&self, map: &BTreeMap<Symbol, Polynomial>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            let mut rest = Vec::new();
            for (s, e) in &m.0 {
                match map.get(s) {
                    Some(p) => term = &term * &p.pow(*e),
                    None => rest.push((s.clone(), *e)),
                }
            }
            let mut tail = Polynomial::zero();
            tail.add_term(Monomial(rest), rat(1));
            out = out + &term * &tail;
        }
        out
    }

    /// Evaluation at exact rational values; unassigned symbols are an error.
    pub fn eval_rational(&self, values: &BTreeMap<Symbol, BigRational>) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in &m.0 {
                let v = values.get(s).ok_or_else(|| Error::Parse(format!("no value for symbol `{s}`")))?;
                for _ in 0..*e {
                    t *= v;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Content-free representative with a positive leading coefficient, so
    /// that two residuals agreeing up to a nonzero rational factor share the
    /// same normal form.
    pub fn normal_form(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let lead = self.terms.iter().next_back().unwrap().1;
        let mut factor = BigRational::new(den_lcm, num_gcd);
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// If `self = q * other` for a rational `q`, returns `q`.
    pub fn ratio_to(&self, other: &Polynomial) -> Option<BigRational> {
        if other.is_zero() {
            return None;
        }
        let (m, c) = other.terms.iter().next()?;
        let q = self.terms.get(m)? / c;
        if &other.scale(&q) == self {
            Some(q)
        } else {
            None
        }
    }

    pub fn parse(src: &str) -> Result<Polynomial> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }

    /// Parses `lhs = rhs` into the residual `lhs - rhs`.
    pub fn parse_equation(src: &str) -> Result<Polynomial> {
        let mut parts = src.split('=');
        let (Some(l), Some(r), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("expected exactly one `=` in `{src}`")));
        };
        Ok(Polynomial::parse(l)? - Polynomial::parse(r)?)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Highest degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(a.0.cmp(b.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let unit = a.is_one();
            if m.0.is_empty() {
                write!(f, "{a}")?;
            } else if unit {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, o: Polynomial) -> Polynomial {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, o: Polynomial) -> Polynomial {
        for (m, c) in o.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, o: Polynomial) -> Polynomial {
        &self * &o
    }
}

impl crate::scalar::Scalar for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::int(1)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Polynomial::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of `{}`", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let d = self.integer()?;
                if d.is_zero() {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale(&BigRational::new(BigInt::one(), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            if self.pos == start && self.src[self.pos].is_ascii_digit() {
                return None;
            }
            self.pos += 1;
        }
        (start != self.pos).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn symbol(&mut self) -> Result<Symbol> {
        let name = self.ident().ok_or_else(|| self.err("expected symbol"))?;
        let dir = match name.as_str() {
            "T" => Some(FrameIndex::T),
            "V" => Some(FrameIndex::V),
            "W" => Some(FrameIndex::W),
            _ => None,
        };
        if let Some(dir) = dir {
            if self.eat(b'(') {
                let inner = self.symbol()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                return Ok(Symbol::deriv(dir, inner));
            }
        }
        Ok(Symbol::Named(name))
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Polynomial::constant(BigRational::from_integer(self.integer()?))),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => Ok(Polynomial::var(self.symbol()?)),
            _ => Err(self.err("unexpected token")),
        }
    }
}

/// A set of symbol bindings applied simultaneously and iterated to a fixed
/// point. Cyclic binding sets are rejected on construction.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    map: BTreeMap<Symbol, Polynomial>,
}

impl Bindings {
    pub fn new(map: BTreeMap<Symbol, Polynomial>) -> Result<Bindings> {
        let b = Bindings { map };
        b.check_acyclic()?;
        Ok(b)
    }

    /// Parses `symbol -> expression` pairs.
    pub fn parse(pairs: &[(&str, &str)]) -> Result<Bindings> {
        let mut map = BTreeMap::new();
        for (lhs, rhs) in pairs {
            let mut p = Parser { src: lhs.as_bytes(), pos: 0 };
            let s = p.symbol()?;
            p.skip_ws();
            if p.pos != p.src.len() {
                return Err(p.err("binding target must be a single symbol"));
            }
            map.insert(s, Polynomial::parse(rhs)?);
        }
        Bindings::new(map)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, s: &Symbol) -> Option<&Polynomial> {
        self.map.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Polynomial)> {
        self.map.iter()
    }

    fn check_acyclic(&self) -> Result<()> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Fresh,
            Active,
            Done,
        }
        let keys: Vec<&Symbol> = self.map.keys().collect();
        let mut marks: BTreeMap<&Symbol, Mark> = keys.iter().map(|k| (*k, Mark::Fresh)).collect();
        fn visit<'a>(
            s: &'a Symbol,
            map: &'a BTreeMap<Symbol, Polynomial>,
            marks: &mut BTreeMap<&'a Symbol, Mark>,
        ) -> Result<()> {
            match marks[s] {
                Mark::Done => return Ok(()),
                Mark::Active => return Err(Error::CyclicBindings(s.to_string())),
                Mark::Fresh => {}
            }
            marks.insert(s, Mark::Active);
            for (m, _) in map[s].terms() {
                for (dep, _) in m.factors() {
                    if let Some((k, _)) = map.get_key_value(dep) {
                        visit(k, map, marks)?;
                    }
                }
            }
            marks.insert(s, Mark::Done);
            Ok(())
        }
        for k in keys {
            visit(k, &self.map, &mut marks)?;
        }
        Ok(())
    }

    /// Adds `X(c) -> X(p)` for every binding `c -> p` and frame direction
    /// `X`, unless `X(c)` is already bound explicitly.
    pub fn with_derivative_closure(&self, is_constant: &dyn Fn(&Symbol) -> bool) -> Result<Bindings> {
        let mut map = self.map.clone();
        for (s, p) in &self.map {
            for dir in FrameIndex::ALL {
                let ds = Symbol::deriv(dir, s.clone());
                map.entry(ds).or_insert_with(|| p.frame_derivative(dir, is_constant));
            }
        }
        Bindings::new(map)
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let mut cur = p.clone();
        // Acyclic, so the chain length is bounded by the number of bindings.
        for _ in 0..=self.map.len() {
            if !cur.symbols().iter().any(|s| self.map.contains_key(s)) {
                break;
            }
            cur = cur.substitute(&self.map);
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let q = p("3*a4^2 - 2*T(a4)*a12 + 1/2");
        assert_eq!(q.num_terms(), 3);
        assert_eq!(q, p("1/2 + 3*a4*a4 - a12*T(a4)*2"));
        assert_eq!(p(&q.to_string()), q);
    }

    #[test]
    fn arithmetic_identities() {
        assert_eq!(p("(x+y)^2"), p("x^2 + 2*x*y + y^2"));
        assert!((p("x*y - y*x")).is_zero());
        assert_eq!(p("-(a - b)"), p("b - a"));
    }

    #[test]
    fn normal_form_ignores_scale() {
        assert_eq!(p("6*x - 4*y").normal_form(), p("-3/7*x + 2/7*y").normal_form());
        assert_eq!(p("6*x - 4*y").ratio_to(&p("3*x - 2*y")), Some(rat(2)));
        assert_eq!(p("x + y").ratio_to(&p("x - y")), None);
    }

    #[test]
    fn leibniz_derivative() {
        let is_const = |s: &Symbol| s == &Symbol::named("H");
        let d = p("H*a4^2*a6").frame_derivative(FrameIndex::V, &is_const);
        assert_eq!(d, p("2*H*a4*a6*V(a4) + H*a4^2*V(a6)"));
    }

    #[test]
    fn bindings_reach_fixed_point() {
        let b = Bindings::parse(&[("a", "b + 1"), ("b", "c^2")]).unwrap();
        assert_eq!(b.apply(&p("a*b")), p("c^4 + c^2"));
    }

    #[test]
    fn cyclic_bindings_rejected() {
        assert!(matches!(Bindings::parse(&[("a", "b"), ("b", "a + 1")]), Err(Error::CyclicBindings(_))));
        assert!(Bindings::parse(&[("a", "2*a")]).is_err());
    }

    #[test]
    fn derivative_closure() {
        let is_const = |_: &Symbol| false;
        let b = Bindings::parse(&[("a6", "2*a4"), ("T(a4)", "0")]).unwrap().with_derivative_closure(&is_const).unwrap();
        assert!(b.apply(&p("T(a6)")).is_zero());
        assert_eq!(b.apply(&p("V(a6)")), p("2*V(a4)"));
    }

    #[test]
    fn parse_errors() {
        assert!(Polynomial::parse("3 +").is_err());
        assert!(Polynomial::parse("x / 0").is_err());
        assert!(Polynomial::parse_equation("x = y = z").is_err());
    }
}
