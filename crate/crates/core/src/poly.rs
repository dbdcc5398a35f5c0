//! Exact-rational polynomials in commuting formal symbols.
//!
//! A monomial is a sorted multiset of symbols; the empty monomial is the
//! constant 1. The same container holds ψ-polynomials, sums of formal
//! constants `L_b(1)` and formal products of multiple zeta values.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::Estimate;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A commuting formal symbol carrying a grade.
pub trait Symbol: Clone + Ord + fmt::Display {
    fn grade(&self) -> usize;
}

/// The symbol ψ_n for even `n ≥ 2`. ψ₀ is never stored; it is the constant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Psi(pub usize);

impl Symbol for Psi {
    fn grade(&self) -> usize {
        self.0
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

impl FromStr for Psi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n: usize = s
            .strip_prefix('p')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad psi symbol {s:?}")))?;
        if n == 0 || n % 2 == 1 {
            return Err(Error::Parse(format!("psi grade {n} must be even and positive")));
        }
        Ok(Psi(n))
    }
}

pub type Monomial<S> = Vec<S>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<S: Symbol> {
    terms: BTreeMap<Monomial<S>, BigRational>,
}

pub type PsiPoly = Poly<Psi>;

impl<S: Symbol> Default for Poly<S> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<S: Symbol> Poly<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn symbol(s: S) -> Self {
        Self::monomial(vec![s], BigRational::one())
    }

    pub fn monomial(mut mono: Monomial<S>, c: BigRational) -> Self {
        mono.sort();
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<S>, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[S]) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, mut mono: Monomial<S>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        mono.sort();
        match self.terms.entry(mono) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend(mb.iter().cloned());
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul_ref(self))
    }

    /// Grades of all monomials, sorted and deduplicated.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|m| m.iter().map(Symbol::grade).sum()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn is_homogeneous_of(&self, grade: usize) -> bool {
        self.grades().iter().all(|&g| g == grade)
    }

    /// Replace every symbol by a polynomial in another alphabet.
    pub fn substitute<T: Symbol>(&self, f: impl Fn(&S) -> Poly<T>) -> Poly<T> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for s in m {
                term = term.mul_ref(&f(s));
            }
            out.add_assign_ref(&term);
        }
        out
    }

    /// Numeric evaluation with first-order error propagation.
    pub fn evaluate(&self, f: impl Fn(&S) -> Result<Estimate>) -> Result<Estimate> {
        let mut total = Estimate::exact(0.0);
        for (m, c) in &self.terms {
            let mut term = Estimate::exact(c.to_f64().unwrap_or(f64::NAN));
            for s in m {
                term = term * f(s)?;
            }
            total = total + term;
        }
        Ok(total)
    }

    /// Term list for JSON reports.
    pub fn term_list(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(m, c)| PolyTerm {
                coefficient: c.to_string(),
                monomial: m.iter().map(|s| s.to_string()).collect(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyTerm {
    pub coefficient: String,
    pub monomial: Vec<String>,
}

impl PsiPoly {
    /// ψ_n as a polynomial; ψ₀ is the constant 1.
    pub fn psi(n: usize) -> Result<Self> {
        match n {
            0 => Ok(Self::one()),
            n if n % 2 == 1 => Err(Error::Parity(format!("psi_{n} has odd grade"))),
            n => Ok(Self::symbol(Psi(n))),
        }
    }
}

impl<S: Symbol> Add for Poly<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_assign_ref(&rhs);
        self
    }
}

impl<S: Symbol> Sub for Poly<S> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_assign_ref(&-rhs);
        self
    }
}

impl<S: Symbol> Neg for Poly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<S: Symbol> Mul for Poly<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

fn format_monomial<S: Symbol>(m: &[S]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let mut j = i;
        while j < m.len() && m[j] == m[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(m[i].to_string());
        } else {
            parts.push(format!("{}^{}", m[i], j - i));
        }
        i = j;
    }
    parts.join("*")
}

impl<S: Symbol> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let abs = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", format_monomial(m))?;
            } else {
                write!(f, "{abs}*{}", format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl<S: Symbol> Serialize for Poly<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_term<S: Symbol + FromStr<Err = Error>>(t: &str) -> Result<(Monomial<S>, BigRational)> {
    let mut coeff = BigRational::one();
    let mut mono = Vec::new();
    for factor in t.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in {t:?}")));
        }
        if factor.starts_with(|c: char| c.is_ascii_digit()) {
            coeff *= parse_rational(factor)?;
            continue;
        }
        let (base, exp) = match factor.rsplit_once('^') {
            Some((b, e)) => {
                let e: usize = e.parse().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                (b, e)
            }
            None => (factor, 1),
        };
        let sym: S = base.parse()?;
        mono.extend(std::iter::repeat(sym).take(exp));
    }
    Ok((mono, coeff))
}

/// Parses the format produced by `Display`, e.g. `3*p2^2 + p4 - 1/2*p6`.
impl<S: Symbol + FromStr<Err = Error>> FromStr for Poly<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        let mut rest = s;
        let mut sign = BigRational::one();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
        }
        loop {
            let next = [" + ", " - "]
                .iter()
                .filter_map(|sep| rest.find(sep).map(|p| (p, *sep)))
                .min_by_key(|(p, _)| *p);
            let (chunk, tail) = match next {
                Some((p, sep)) => (&rest[..p], Some((&rest[p + 3..], sep))),
                None => (rest, None),
            };
            let (mono, c) = parse_term::<S>(chunk)?;
            out.add_term(mono, c * &sign);
            match tail {
                Some((t, sep)) => {
                    sign = if sep == " - " { -BigRational::one() } else { BigRational::one() };
                    rest = t;
                }
                None => break,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize) -> PsiPoly {
        PsiPoly::psi(n).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn display_omits_unit_coefficients() {
        let x = p(2).pow(2).scale(&q(3, 1)) + p(4);
        assert_eq!(x.to_string(), "3*p2^2 + p4");
        assert_eq!((p(2) + p(2)).to_string(), "2*p2");
        assert_eq!(PsiPoly::one().to_string(), "1");
        assert_eq!(PsiPoly::zero().to_string(), "0");
        assert_eq!((PsiPoly::zero() - p(2) * p(4)).to_string(), "-p2*p4");
        assert_eq!(p(6).scale(&q(-1, 2)).to_string(), "-1/2*p6");
    }

    #[test]
    fn psi_zero_is_one() {
        assert_eq!(p(0), PsiPoly::one());
        assert!(PsiPoly::psi(3).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = p(2) - p(2);
        assert!(x.is_zero());
        assert_eq!(x.len(), 0);
    }

    #[test]
    fn grades_and_homogeneity() {
        let x = p(4) + p(2) * p(2);
        assert_eq!(x.grades(), vec![4]);
        assert!(x.is_homogeneous_of(4));
        let y = x + p(2);
        assert_eq!(y.grades(), vec![2, 4]);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3*p2^2 + p4", "0", "1", "-p2*p4 + 1/2*p6", "5*p2^3 + 6*p2*p4 + p6"] {
            let x: PsiPoly = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert!("3*q2".parse::<PsiPoly>().is_err());
        assert!("p3".parse::<PsiPoly>().is_err());
    }

    #[test]
    fn evaluation() {
        let x = p(2).pow(2).scale(&q(3, 1)) + p(4) + PsiPoly::one();
        let v = x.evaluate(|s| Ok(Estimate::exact(s.0 as f64))).unwrap();
        assert_eq!(v.value, 3.0 * 4.0 + 4.0 + 1.0);
    }

    fn arb_poly() -> impl proptest::strategy::Strategy<Value = PsiPoly> {
        use proptest::prelude::*;
        proptest::collection::vec((proptest::collection::vec(1usize..4, 0..3), -5i64..6), 0..5).prop_map(
            |ts| {
                let mut out = PsiPoly::zero();
                for (m, c) in ts {
                    out.add_term(m.into_iter().map(|g| Psi(2 * g)).collect(), q(c, 1));
                }
                out
            },
        )
    }

    proptest::proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            proptest::prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
            proptest::prop_assert_eq!(a.mul_ref(&(b.clone() + c.clone())), a.mul_ref(&b) + a.mul_ref(&c));
            proptest::prop_assert_eq!((a.clone() + b.clone()) - b.clone(), a.clone());
            let back: PsiPoly = a.to_string().parse().unwrap();
            proptest::prop_assert_eq!(back, a);
        }
    }
}
