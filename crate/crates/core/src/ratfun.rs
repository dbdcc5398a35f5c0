//! Exact rational functions in `x₁,…,x_l`, differential forms with rational
//! coefficients, and the boundary-divisor orders of `ω_l`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Sparse polynomial keyed by exponent vectors of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The variable `x_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, &[(i, 1)], BigRational::one())
    }

    pub fn monomial(nvars: usize, powers: &[(usize, u32)], c: BigRational) -> Self {
        let mut e = vec![0; nvars];
        for &(i, k) in powers {
            e[i] += k;
        }
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
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

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// `num / den`, kept unreduced; equality by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFun {
    pub num: Polynomial,
    pub den: Polynomial,
}

impl RatFun {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::OutOfRange("zero denominator".into()));
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let n = p.nvars();
        RatFun { num: p, den: Polynomial::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(Polynomial::zero(nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn derivative(&self, i: usize) -> Self {
        let num = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        RatFun { num, den: &self.den * &self.den }
    }

    pub fn equals(&self, o: &RatFun) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun { num: &self.num + &o.num, den: self.den.clone() };
        }
        RatFun { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        RatFun { num: &self.num * &o.num, den: &self.den * &o.den }
    }
}

/// A `p`-form: coefficients on increasing index sets `dx_{i₁} ∧ … ∧ dx_{i_p}` (0-based).
#[derive(Clone, Debug)]
pub struct DiffForm {
    pub nvars: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<Vec<usize>, RatFun>,
}

impl DiffForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        DiffForm { nvars, degree, coeffs: BTreeMap::new() }
    }

    pub fn add_component(&mut self, mut idx: Vec<usize>, c: RatFun) -> Result<()> {
        if idx.len() != self.degree || idx.iter().any(|&i| i >= self.nvars) {
            return Err(Error::OutOfRange(format!("bad basis index {idx:?}")));
        }
        // sort with sign tracking
        let mut sign = 1;
        for a in 0..idx.len() {
            for b in 0..idx.len() - 1 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let c = if sign < 0 { -&c } else { c };
        let entry = match self.coeffs.remove(&idx) {
            Some(prev) => &prev + &c,
            None => c,
        };
        self.coeffs.insert(idx, entry);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(RatFun::is_zero)
    }

    pub fn equals(&self, o: &DiffForm) -> bool {
        if self.degree != o.degree || self.nvars != o.nvars {
            return false;
        }
        let keys: BTreeSet<&Vec<usize>> = self.coeffs.keys().chain(o.coeffs.keys()).collect();
        keys.into_iter().all(|k| match (self.coeffs.get(k), o.coeffs.get(k)) {
            (Some(a), Some(b)) => a.equals(b),
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }
}

/// `d(c dx_I) = Σ_{j ∉ I} ∂_j c dx_j ∧ dx_I`.
pub fn exterior_derivative(phi: &DiffForm) -> Result<DiffForm> {
    if phi.degree >= phi.nvars {
        return Err(Error::OutOfRange(format!("degree {} form on {} variables", phi.degree, phi.nvars)));
    }
    let mut out = DiffForm::zero(phi.nvars, phi.degree + 1);
    for (idx, c) in &phi.coeffs {
        if c.is_zero() {
            continue;
        }
        for j in (0..phi.nvars).filter(|j| !idx.contains(j)) {
            let dc = c.derivative(j);
            if dc.is_zero() {
                continue;
            }
            let mut full = vec![j];
            full.extend_from_slice(idx);
            out.add_component(full, dc)?;
        }
    }
    Ok(out)
}

/// `f_l = (1 - x₁x₂)(1 - x₂x₃)⋯(1 - x_{l-1}x_l)`.
pub fn f_poly(l: usize) -> Polynomial {
    let mut f = Polynomial::one(l);
    for i in 0..l.saturating_sub(1) {
        let factor =
            &Polynomial::one(l) - &Polynomial::monomial(l, &[(i, 1), (i + 1, 1)], BigRational::one());
        f = &f * &factor;
    }
    f
}

fn check_l(l: usize) -> Result<()> {
    if l < 2 {
        return Err(Error::OutOfRange(format!("l = {l} must be at least 2")));
    }
    Ok(())
}

/// `ω_l = dx₁⋯dx_l / f_l`.
pub fn build_omega(l: usize) -> Result<DiffForm> {
    check_l(l)?;
    let mut w = DiffForm::zero(l, l);
    w.add_component((0..l).collect(), RatFun::new(Polynomial::one(l), f_poly(l))?)?;
    Ok(w)
}

/// `α_l = Σᵢ (xᵢ / f) dx₁⋯\hat{dxᵢ}⋯dx_l`.
pub fn build_alpha(l: usize) -> Result<DiffForm> {
    check_l(l)?;
    let f = f_poly(l);
    let mut a = DiffForm::zero(l, l - 1);
    for i in 0..l {
        let idx: Vec<usize> = (0..l).filter(|&j| j != i).collect();
        a.add_component(idx, RatFun::new(Polynomial::var(l, i), f.clone())?)?;
    }
    Ok(a)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub l: usize,
    pub expected: String,
    pub pass: bool,
}

/// `dα_l = ω_l` for odd `l` and `0` for even `l`.
pub fn verify_exactness(l: usize) -> Result<ExactnessReport> {
    let d = exterior_derivative(&build_alpha(l)?)?;
    let (expected, pass) = if l % 2 == 1 {
        ("omega".to_string(), d.equals(&build_omega(l)?))
    } else {
        ("0".to_string(), d.is_zero())
    };
    Ok(ExactnessReport { l, expected, pass })
}

/// `Σᵢ (-1)^i xᵢ ∂f/∂xᵢ = 0`.
pub fn telescoping_check(l: usize) -> Result<bool> {
    check_l(l)?;
    let f = f_poly(l);
    let mut acc = Polynomial::zero(l);
    for i in 0..l {
        let term = &Polynomial::var(l, i) * &f.derivative(i);
        // 1-based exponent i + 1
        acc = if (i + 1) % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc.is_zero())
}

/// A two-part partition `S₁ ⊔ S₂` of the points `z₁,…,z_n`, both parts of size ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorPartition {
    pub n: usize,
    /// 1-based points of the part containing `z₁`.
    pub s1: Vec<usize>,
}

impl DivisorPartition {
    pub fn new(n: usize, part: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = part.iter().copied().collect();
        if set.len() != part.len() || set.iter().any(|&p| p == 0 || p > n) {
            return Err(Error::OutOfRange(format!("{part:?} is not a subset of 1..={n}")));
        }
        if set.len() < 2 || n - set.len() < 2 {
            return Err(Error::OutOfRange("both parts need at least two points".into()));
        }
        let s1: Vec<usize> = if set.contains(&1) {
            set.into_iter().collect()
        } else {
            (1..=n).filter(|p| !set.contains(p)).collect()
        };
        Ok(DivisorPartition { n, s1 })
    }

    fn same_part(&self, i: usize, j: usize) -> bool {
        self.s1.contains(&i) == self.s1.contains(&j)
    }

    /// `#{i : zᵢ and z_{i+2 mod n} lie in the same part}`.
    pub fn colocated_pairs(&self) -> usize {
        (1..=self.n).filter(|&i| self.same_part(i, (i + 1) % self.n + 1)).count()
    }
}

/// `ord_D ω_l = (l - 1)/2 - ½ Σᵢ 𝕀_D(i, i+2)` with `n = l + 3`.
pub fn divisor_order(p: &DivisorPartition, l: usize) -> Result<i64> {
    if p.n != l + 3 {
        return Err(Error::SizeMismatch { expected: l + 3, got: p.n });
    }
    let twice = l as i64 - 1 - p.colocated_pairs() as i64;
    if twice % 2 != 0 {
        return Err(Error::Inconsistent(format!("odd numerator {twice}")));
    }
    Ok(twice / 2)
}

/// All partitions of `n` points, each listed once.
pub fn all_partitions(n: usize) -> Vec<DivisorPartition> {
    let mut out = Vec::new();
    for mask in 0u32..1 << (n - 1) {
        let part: Vec<usize> =
            std::iter::once(1).chain((2..=n).filter(|p| mask >> (p - 2) & 1 == 1)).collect();
        if let Ok(d) = DivisorPartition::new(n, &part) {
            out.push(d);
        }
    }
    out
}

/// Odd points against even points.
pub fn alternating_partition(n: usize) -> Result<DivisorPartition> {
    let odds: Vec<usize> = (1..=n).step_by(2).collect();
    DivisorPartition::new(n, &odds)
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorSweep {
    pub n: usize,
    pub l: usize,
    pub partitions: usize,
    pub min_order: i64,
    pub minimizers: Vec<DivisorPartition>,
}

pub fn divisor_sweep(n: usize) -> Result<DivisorSweep> {
    if n < 5 {
        return Err(Error::OutOfRange(format!("n = {n} must be at least 5")));
    }
    let l = n - 3;
    let parts = all_partitions(n);
    let orders: Vec<i64> = parts.iter().map(|p| divisor_order(p, l)).collect::<Result<_>>()?;
    let min_order = *orders.iter().min().expect("nonempty");
    let minimizers =
        parts.iter().zip(&orders).filter(|(_, &o)| o == min_order).map(|(p, _)| p.clone()).collect();
    Ok(DivisorSweep { n, l, partitions: parts.len(), min_order, minimizers })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn derivative_of_x1_dx2() {
        let mut phi = DiffForm::zero(2, 1);
        phi.add_component(vec![1], RatFun::from_poly(Polynomial::var(2, 0))).unwrap();
        let d = exterior_derivative(&phi).unwrap();
        let mut want = DiffForm::zero(2, 2);
        want.add_component(vec![0, 1], RatFun::from_poly(Polynomial::one(2))).unwrap();
        assert!(d.equals(&want));
    }

    #[test]
    fn wedge_sign_bookkeeping() {
        let mut phi = DiffForm::zero(3, 2);
        phi.add_component(vec![2, 0], RatFun::from_poly(Polynomial::one(3))).unwrap();
        assert!(phi.coeffs[&vec![0, 2]].equals(&RatFun::from_poly(Polynomial::constant(3, q(-1)))));
    }

    #[test]
    fn small_forms() {
        let a2 = build_alpha(2).unwrap();
        assert_eq!(a2.coeffs.len(), 2);
        let w2 = build_omega(2).unwrap();
        let want = RatFun::new(
            Polynomial::one(2),
            &Polynomial::one(2) - &Polynomial::monomial(2, &[(0, 1), (1, 1)], q(1)),
        )
        .unwrap();
        assert!(w2.coeffs[&vec![0, 1]].equals(&want));
        assert_eq!(f_poly(5).len(), 16);
    }

    #[test]
    fn exactness() {
        for l in 2..=5 {
            assert!(verify_exactness(l).unwrap().pass, "l = {l}");
        }
    }

    #[test]
    fn telescoping() {
        for l in 2..=7 {
            assert!(telescoping_check(l).unwrap(), "l = {l}");
        }
    }

    #[test]
    fn divisor_examples() {
        let alt = alternating_partition(6).unwrap();
        assert_eq!(divisor_order(&alt, 3).unwrap(), -2);
        let block = DivisorPartition::new(6, &[1, 2, 3]).unwrap();
        assert_eq!(divisor_order(&block, 3).unwrap(), 0);
        assert!(DivisorPartition::new(6, &[1]).is_err());
        assert!(divisor_order(&block, 4).is_err());
    }

    #[test]
    fn divisor_sweeps() {
        for n in 5..=8 {
            let s = divisor_sweep(n).unwrap();
            assert_eq!(s.partitions, (1 << (n - 1)) - 1 - n);
            if n % 2 == 1 {
                assert_eq!(s.min_order, -1);
            } else {
                assert_eq!(s.min_order, -2);
                assert_eq!(s.minimizers, vec![alternating_partition(n).unwrap()]);
            }
        }
    }

    fn monomial_form(l: usize, seeds: &[(usize, usize, u32, i64)]) -> DiffForm {
        let mut phi = DiffForm::zero(l, l - 2);
        for &(skip_a, var, pow, c) in seeds {
            let skip_b = (skip_a + 1) % l;
            let idx: Vec<usize> = (0..l).filter(|&j| j != skip_a && j != skip_b).collect();
            let coeff = Polynomial::monomial(l, &[(var % l, pow), ((var + 1) % l, 1)], q(c));
            phi.add_component(idx, RatFun::from_poly(coeff)).unwrap();
        }
        phi
    }

    proptest::proptest! {
        #[test]
        fn d_squared_vanishes(
            l in 3usize..=5,
            seeds in proptest::collection::vec((0usize..5, 0usize..5, 0u32..4, -3i64..4), 1..5),
        ) {
            let seeds: Vec<_> = seeds.into_iter().map(|(a, v, p, c)| (a % l, v, p, c)).collect();
            let phi = monomial_form(l, &seeds);
            let dd = exterior_derivative(&exterior_derivative(&phi).unwrap()).unwrap();
            proptest::prop_assert!(dd.is_zero());
        }
    }
}
