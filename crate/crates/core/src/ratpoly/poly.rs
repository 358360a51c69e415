use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};

use super::action::PermutationGroup;
use super::rational::{format_rational, Rational};
use super::ring::{Monomial, RingSpec};

/// Element of a truncated polynomial ring.
///
/// Canonical: no zero coefficients and no monomial outside the truncation, so two equal
/// polynomials have identical term maps. The binary operators panic on a ring mismatch;
/// the `try_*` methods report it instead.
#[derive(Debug, Clone)]
pub struct TruncatedPolynomial {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for TruncatedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for TruncatedPolynomial {}

fn same_ring(a: &Arc<RingSpec>, b: &Arc<RingSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetrizeMode {
    /// Sum of the distinct images of each monomial.
    OrbitSum,
    /// Reynolds operator `1/|G| sum_g g.p`.
    Average,
}

impl TruncatedPolynomial {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        TruncatedPolynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<RingSpec>, c: Rational) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Monomial::one(ring.variable_count()), c);
        p
    }

    /// The generator `u_{i+1}` (0-based index).
    pub fn variable(ring: &Arc<RingSpec>, i: usize) -> Result<Self> {
        let k = ring.variable_count();
        if i >= k {
            return Err(Error::OutOfRange {
                what: "variable index",
                value: i as i64,
                max: k as i64 - 1,
            });
        }
        let mut p = Self::zero(ring);
        p.add_term(Monomial::variable(k, i), Rational::one());
        Ok(p)
    }

    /// `sum_i w_i u_i`.
    pub fn linear(ring: &Arc<RingSpec>, w: &[i64]) -> Result<Self> {
        let k = ring.variable_count();
        if w.len() != k {
            return Err(Error::Arity {
                what: "linear form",
                expected: k,
                got: w.len(),
            });
        }
        let mut p = Self::zero(ring);
        for (i, &c) in w.iter().enumerate() {
            p.add_term(Monomial::variable(k, i), Rational::from_integer(c.into()));
        }
        Ok(p)
    }

    /// Builds a polynomial from terms; repeated monomials are summed and truncated ones dropped.
    pub fn from_terms<I>(ring: &Arc<RingSpec>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let k = ring.variable_count();
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            if m.0.len() != k {
                return Err(Error::Arity {
                    what: "monomial exponents",
                    expected: k,
                    got: m.0.len(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.ring.variable_count()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Some(d)` if every term has degree `d`; the zero polynomial is homogeneous of any degree.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => Some(None),
            Some(d) => degrees.all(|e| e == d).then_some(Some(d)),
        }
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    /// The part of degree exactly `d`.
    pub fn graded_part(&self, d: u32) -> Self {
        TruncatedPolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Result<Rational> {
        let k = self.ring.variable_count();
        if m.0.len() != k {
            return Err(Error::Arity {
                what: "monomial exponents",
                expected: k,
                got: m.0.len(),
            });
        }
        Ok(self.terms.get(m).cloned().unwrap_or_else(Rational::zero))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || !self.ring.contains(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let truncations = self.ring.truncations();
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        let mut exps = vec![0u32; truncations.len()];
        for (ma, ca) in &self.terms {
            'inner: for (mb, cb) in &other.terms {
                for (i, n) in truncations.iter().enumerate() {
                    let e = ma.0[i] + mb.0[i];
                    if e >= *n {
                        continue 'inner;
                    }
                    exps[i] = e;
                }
                let c = ca * cb;
                match acc.entry(Monomial(exps.clone())) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => *o.get_mut() += c,
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(TruncatedPolynomial {
            ring: self.ring.clone(),
            terms: acc,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        TruncatedPolynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
                if base.is_zero() {
                    return Self::zero(&self.ring);
                }
            }
        }
        result
    }

    /// Product of a sequence of polynomials in `ring`; the empty product is 1.
    pub fn product<'a, I>(ring: &Arc<RingSpec>, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a TruncatedPolynomial>,
    {
        let mut acc = Self::one(ring);
        for f in factors {
            acc = acc.try_mul(f)?;
        }
        Ok(acc)
    }

    /// Applies each group element's substitution and sums.
    pub fn symmetrize(&self, group: &PermutationGroup, mode: SymmetrizeMode) -> Result<Self> {
        let k = self.ring.variable_count();
        if group.arity() != k {
            return Err(Error::Arity {
                what: "permutation arity",
                expected: k,
                got: group.arity(),
            });
        }
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let orbit = group.orbit(m);
            let weight = match mode {
                SymmetrizeMode::OrbitSum => c.clone(),
                // each orbit point is hit |G|/|orbit| times by the Reynolds sum
                SymmetrizeMode::Average => c / Rational::from_integer(BigInt::from(orbit.len())),
            };
            for (negative, image) in orbit {
                let w = if negative { -weight.clone() } else { weight.clone() };
                out.add_term(image, w);
            }
        }
        Ok(out)
    }

    /// Clears denominators and divides by the content, making the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| num::integer::lcm(acc, c.denom().clone()));
        let gcd = self.terms.values().fold(BigInt::zero(), |acc, c| {
            num::integer::gcd(acc, c.numer() * (&lcm / c.denom()))
        });
        let mut factor = Rational::new(lcm, gcd);
        let (_, lead) = self.terms.iter().next_back().expect("nonzero");
        if lead.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Parses the canonical text form, e.g. `-1/2*u1^2*u2 + 3*u3`.
    pub fn parse(ring: &Arc<RingSpec>, s: &str) -> Result<Self> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
            ring,
        }
        .polynomial()
    }
}

impl fmt::Display for TruncatedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl Add for &TruncatedPolynomial {
    type Output = TruncatedPolynomial;
    fn add(self, rhs: Self) -> TruncatedPolynomial {
        self.try_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &TruncatedPolynomial {
    type Output = TruncatedPolynomial;
    fn sub(self, rhs: Self) -> TruncatedPolynomial {
        self.try_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &TruncatedPolynomial {
    type Output = TruncatedPolynomial;
    fn mul(self, rhs: Self) -> TruncatedPolynomial {
        self.try_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &TruncatedPolynomial {
    type Output = TruncatedPolynomial;
    fn neg(self) -> TruncatedPolynomial {
        self.scale(&-Rational::one())
    }
}

/// The `i`-th elementary symmetric polynomial in all ring variables; `sigma_0 = 1`.
pub fn elementary_symmetric(ring: &Arc<RingSpec>, i: usize) -> Result<TruncatedPolynomial> {
    let k = ring.variable_count();
    if i > k {
        return Err(Error::OutOfRange {
            what: "elementary symmetric index",
            value: i as i64,
            max: k as i64,
        });
    }
    let mut terms = Vec::new();
    let mut chosen = Vec::with_capacity(i);
    subsets(k, i, 0, &mut chosen, &mut |set| {
        let mut e = vec![0; k];
        for &j in set {
            e[j] = 1;
        }
        terms.push((Monomial(e), Rational::one()));
    });
    TruncatedPolynomial::from_terms(ring, terms)
}

/// `sum_j u_j^i`.
pub fn power_sum(ring: &Arc<RingSpec>, i: u32) -> TruncatedPolynomial {
    let k = ring.variable_count();
    let terms = (0..k).map(|j| {
        let mut e = vec![0; k];
        e[j] = i;
        (Monomial(e), Rational::one())
    });
    TruncatedPolynomial::from_terms(ring, terms).expect("arity matches")
}

fn subsets(k: usize, size: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == size {
        f(chosen);
        return;
    }
    for j in start..k {
        chosen.push(j);
        subsets(k, size, j + 1, chosen, f);
        chosen.pop();
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<RingSpec>,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            message: message.into(),
        })
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

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected digits");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("validated digits"))
    }

    fn polynomial(&mut self) -> Result<TruncatedPolynomial> {
        let mut out = TruncatedPolynomial::zero(self.ring);
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return self.error("empty polynomial"),
            _ => false,
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if negative { -c } else { c });
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(other) => return self.error(format!("unexpected {:?}", other as char)),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let k = self.ring.variable_count();
        let mut exps = vec![0u32; k];
        let mut coeff = Rational::one();
        loop {
            match self.peek() {
                Some(b'u') => {
                    self.pos += 1;
                    let at = self.pos;
                    let index = self.integer()?;
                    let i: usize = (&index).try_into().unwrap_or(0);
                    if i == 0 || i > k {
                        self.pos = at;
                        return self.error(format!("variable u{index} not in ring with {k} variables"));
                    }
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        e = self
                            .integer()?
                            .try_into()
                            .or_else(|_| self.error("exponent too large"))?;
                    }
                    exps[i - 1] += e;
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.integer()?;
                    let mut value = Rational::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den = self.integer()?;
                        if den.is_zero() {
                            return self.error("zero denominator");
                        }
                        value /= Rational::from_integer(den);
                    }
                    coeff *= value;
                }
                _ => return self.error("expected a coefficient or a variable"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((Monomial(exps), coeff));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(k: usize, n: u32) -> Arc<RingSpec> {
        RingSpec::new(k, vec![n; k]).unwrap()
    }

    fn p(r: &Arc<RingSpec>, s: &str) -> TruncatedPolynomial {
        TruncatedPolynomial::parse(r, s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn truncation_kills_high_powers() {
        let r = ring(1, 4);
        assert!((&p(&r, "u1^3") * &p(&r, "u1")).is_zero());
        assert!(p(&r, "u1^4").is_zero());
    }

    #[test]
    fn square_and_cross_products() {
        let r = ring(2, 4);
        let s = p(&r, "u1 + u2");
        assert_eq!(s.pow(2), p(&r, "u1^2 + 2*u1*u2 + u2^2"));
        let a = &p(&r, "u2 - u1") * &p(&r, "u1 - u2");
        assert_eq!(a, p(&r, "-u1^2 + 2*u1*u2 - u2^2"));
        assert_eq!(a.coefficient_of(&Monomial(vec![2, 0])).unwrap(), q(-1, 1));
        assert_eq!(s.pow(2).coefficient_of(&Monomial(vec![1, 1])).unwrap(), q(2, 1));
        let zero = TruncatedPolynomial::zero(&r);
        assert!(zero.coefficient_of(&Monomial(vec![1, 1])).unwrap().is_zero());
        assert!(zero.coefficient_of(&Monomial(vec![1])).is_err());
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = TruncatedPolynomial::one(&ring(2, 4));
        let b = TruncatedPolynomial::one(&ring(2, 5));
        assert_eq!(a.try_mul(&b), Err(Error::RingMismatch));
        // structurally equal rings from different constructors are the same ring
        let c = TruncatedPolynomial::one(&ring(2, 4));
        assert!(a.try_mul(&c).is_ok());
    }

    #[test]
    fn elementary_symmetric_polynomials() {
        let r2 = ring(2, 4);
        assert_eq!(elementary_symmetric(&r2, 0).unwrap(), TruncatedPolynomial::one(&r2));
        assert_eq!(elementary_symmetric(&r2, 1).unwrap(), p(&r2, "u1 + u2"));
        assert_eq!(elementary_symmetric(&r2, 2).unwrap(), p(&r2, "u1*u2"));
        let r3 = ring(3, 4);
        assert_eq!(elementary_symmetric(&r3, 2).unwrap(), p(&r3, "u1*u2 + u1*u3 + u2*u3"));
        assert!(elementary_symmetric(&r3, 4).is_err());
    }

    #[test]
    fn newton_identity_degree_two() {
        let r = ring(4, 5);
        let s1 = elementary_symmetric(&r, 1).unwrap();
        let s2 = elementary_symmetric(&r, 2).unwrap();
        let lhs = power_sum(&r, 2);
        let rhs = &s1.pow(2) - &s2.scale(&q(2, 1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetrize_modes() {
        let r = ring(2, 4);
        let s2 = PermutationGroup::symmetric(2);
        let orbit = |s: &str| p(&r, s).symmetrize(&s2, SymmetrizeMode::OrbitSum).unwrap();
        assert_eq!(orbit("u1^2"), p(&r, "u1^2 + u2^2"));
        assert_eq!(orbit("u1*u2"), p(&r, "u1*u2"));
        let inv = p(&r, "u1^2 + 3*u1*u2 + u2^2");
        assert_eq!(inv.symmetrize(&s2, SymmetrizeMode::Average).unwrap(), inv);
        assert_eq!(
            p(&r, "u1").symmetrize(&s2, SymmetrizeMode::Average).unwrap(),
            p(&r, "1/2*u1 + 1/2*u2")
        );
        let wrong = PermutationGroup::symmetric(3);
        assert!(inv.symmetrize(&wrong, SymmetrizeMode::OrbitSum).is_err());
    }

    #[test]
    fn render_canonical_text() {
        let r = ring(3, 4);
        let poly = TruncatedPolynomial::from_terms(
            &r,
            [(Monomial(vec![0, 0, 1]), q(3, 1)), (Monomial(vec![2, 1, 0]), q(-1, 2))],
        )
        .unwrap();
        assert_eq!(poly.to_string(), "-1/2*u1^2*u2 + 3*u3");
        assert_eq!(p(&r, &poly.to_string()), poly);
        assert_eq!(p(&r, "-u1 + 2 - 2").to_string(), "-u1");
        assert_eq!(p(&r, "0").to_string(), "0");
        assert_eq!(p(&r, "2*u1*3*u1").to_string(), "6*u1^2");
    }

    #[test]
    fn parse_errors_are_located() {
        let r = ring(2, 4);
        match TruncatedPolynomial::parse(&r, "u1 + u3") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(TruncatedPolynomial::parse(&r, "").is_err());
        assert!(TruncatedPolynomial::parse(&r, "u1 +").is_err());
        assert!(TruncatedPolynomial::parse(&r, "1/0").is_err());
        assert!(TruncatedPolynomial::parse(&r, "u1 u2").is_err());
    }

    #[test]
    fn primitive_form() {
        let r = ring(2, 4);
        assert_eq!(p(&r, "-1/2*u1 + 3/4*u2").primitive(), p(&r, "2*u1 - 3*u2"));
    }
}
