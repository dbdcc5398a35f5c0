//! The recurrence `β^{(l+1)}_m = Σ_{n even, 0 ≤ n ≤ l-m} ψ_n β^{(l)}_{m-1+n}` over
//! formal ψ symbols, its closed forms, and the lattice counts `N(a₁,…,aₛ)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_integer::binomial;

use crate::error::{Error, Result};
use crate::poly::{rat, Psi, PsiPoly};

/// `β^{(upper)}_m`, built bottom-up and cached. Upper index is `l + 1`.
#[derive(Clone, Debug, Default)]
pub struct BetaTable {
    entries: HashMap<(usize, usize), PsiPoly>,
    max_upper: usize,
}

impl BetaTable {
    pub fn build(max_upper: usize) -> Self {
        let mut t = BetaTable::default();
        t.extend_to(max_upper);
        t
    }

    pub fn max_upper(&self) -> usize {
        self.max_upper
    }

    fn extend_to(&mut self, max_upper: usize) {
        for upper in (self.max_upper + 1).max(2)..=max_upper {
            let l = upper - 1;
            for m in (1..=l).filter(|m| m % 2 == l % 2) {
                let value = if upper == 2 {
                    PsiPoly::one()
                } else {
                    let mut acc = PsiPoly::zero();
                    for n in (0..=l - m).step_by(2) {
                        let prev = self.get(upper - 1, m - 1 + n);
                        if !prev.is_zero() {
                            acc.add_assign_ref(&PsiPoly::psi(n).expect("even").mul_ref(&prev));
                        }
                    }
                    acc
                };
                self.entries.insert((upper, m), value);
            }
        }
        self.max_upper = self.max_upper.max(max_upper);
    }

    /// Zero outside the domain `1 ≤ m ≤ upper - 1`, `m ≡ upper - 1 (mod 2)`.
    pub fn get(&self, upper: usize, m: usize) -> PsiPoly {
        self.entries.get(&(upper, m)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &PsiPoly)> {
        self.entries.iter()
    }
}

fn shared_table(max_upper: usize) -> BetaTable {
    static TABLE: OnceLock<Mutex<BetaTable>> = OnceLock::new();
    let mut t = TABLE.get_or_init(|| Mutex::new(BetaTable::default())).lock().expect("beta table");
    if t.max_upper < max_upper {
        t.extend_to(max_upper);
    }
    t.clone()
}

/// `β` with zero outside its domain.
pub fn beta(upper: usize, m: usize) -> PsiPoly {
    if upper < 2 {
        return PsiPoly::zero();
    }
    shared_table(upper).get(upper, m)
}

fn check_domain(upper: usize, m: usize) -> Result<()> {
    if upper < 2 {
        return Err(Error::OutOfRange(format!("upper index {upper} must be at least 2")));
    }
    let l = upper - 1;
    if m == 0 || m > l {
        return Err(Error::OutOfRange(format!("m = {m} outside 1..={l}")));
    }
    if m % 2 != l % 2 {
        return Err(Error::Parity(format!("m = {m} and l = {l} differ in parity")));
    }
    Ok(())
}

/// `β^{(upper)}_m` from the defining recurrence.
pub fn beta_recurrence(upper: usize, m: usize) -> Result<PsiPoly> {
    check_domain(upper, m)?;
    Ok(beta(upper, m))
}

/// `K_{l+1,m}`: tuples `(k₁,…,kₛ)` with `2Σk = l - m`, `kₛ ≠ 0` and
/// `m + Σ_{i≤r}(2kᵢ - 1) ≥ 1` for every prefix. `m = l` yields the empty tuple.
pub fn k_tuples(upper: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    check_domain(upper, m)?;
    let l = upper - 1;
    let total = (l - m) / 2;
    let mut out = Vec::new();
    if total == 0 {
        out.push(Vec::new());
        return Ok(out);
    }
    fn rec(rest: usize, level: i64, tuple: &mut Vec<usize>, max_len: usize, out: &mut Vec<Vec<usize>>) {
        if tuple.len() == max_len {
            return;
        }
        for k in 0..=rest {
            let next = level + 2 * k as i64 - 1;
            if next < 1 {
                continue;
            }
            tuple.push(k);
            if k == rest && k > 0 {
                out.push(tuple.clone());
            } else if k < rest {
                rec(rest - k, next, tuple, max_len, out);
            }
            tuple.pop();
        }
    }
    rec(total, m as i64, &mut Vec::new(), l.saturating_sub(1).max(1), &mut out);
    Ok(out)
}

fn psi_product(ks: &[usize]) -> PsiPoly {
    let mono: Vec<Psi> = ks.iter().filter(|&&k| k > 0).map(|&k| Psi(2 * k)).collect();
    PsiPoly::monomial(mono, rat(1))
}

/// `β` as `Σ_{K_{l+1,m}} ψ_{2k₁}⋯ψ_{2kₛ}` with `ψ₀ = 1`.
pub fn beta_via_k(upper: usize, m: usize) -> Result<PsiPoly> {
    let mut acc = PsiPoly::zero();
    for t in k_tuples(upper, m)? {
        acc.add_assign_ref(&psi_product(&t));
    }
    Ok(acc)
}

/// Compositions of `n` into positive parts; `n = 0` gives the empty composition.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn check_nondecreasing(a: &[usize]) -> Result<()> {
    if a.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::OutOfRange(format!("{a:?} is not nondecreasing")));
    }
    Ok(())
}

/// `#{0 ≤ y₁ ≤ … ≤ yₛ : yᵢ ≤ aᵢ}` by exhaustive enumeration.
pub fn count_n_bruteforce(a: &[usize]) -> Result<u64> {
    check_nondecreasing(a)?;
    fn rec(a: &[usize], lower: usize) -> u64 {
        match a.split_first() {
            None => 1,
            Some((&bound, rest)) => (lower..=bound).map(|y| rec(rest, y)).sum(),
        }
    }
    Ok(rec(a, 0))
}

/// `N_q(a) = binom(a + q, q)`, with `N_0 = 1` and `N_q(a) = 0` for `a < 0 < q`.
fn n_q(q: usize, a: i64) -> u64 {
    if q == 0 {
        1
    } else if a < 0 {
        0
    } else {
        binomial(a as u64 + q as u64, q as u64)
    }
}

/// Tuples `(q₁,…,q_len)` of nonnegative integers whose suffix sums obey
/// `q_len + … + q_{len-j+1} ≤ j` for `j = 1..=len`.
fn suffix_bounded(len: usize) -> Vec<Vec<usize>> {
    fn rec(pos: usize, used: usize, q: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == 0 {
            let mut v = q.clone();
            v.reverse();
            out.push(v);
            return;
        }
        let j = q.len() + 1;
        for v in 0..=(j - used) {
            q.push(v);
            rec(pos - 1, used + v, q, out);
            q.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, 0, &mut Vec::new(), &mut out);
    out
}

/// The binomial-sum formula: `Σ N_{q₀}(a₁) Π_j N_{q_j}(a_{j+1} - a_j - 1)` over
/// `q₀ ≥ 1`, `Σq = s` and suffix sums `q_{s-1} + … + q_{s-j} ≤ j`.
pub fn count_n_formula(a: &[usize]) -> Result<u64> {
    check_nondecreasing(a)?;
    let s = a.len();
    if s == 0 {
        return Ok(1);
    }
    let gaps: Vec<i64> = a.windows(2).map(|w| w[1] as i64 - w[0] as i64 - 1).collect();
    let mut total = 0;
    for q in suffix_bounded(s - 1) {
        let used: usize = q.iter().sum();
        let q0 = s - used;
        let mut term = n_q(q0, a[0] as i64);
        for (qj, gap) in q.iter().zip(&gaps) {
            term *= n_q(*qj, *gap);
        }
        total += term;
    }
    Ok(total)
}

/// The symmetric variant with `a₀ = 0`: `Σ Π_{j=1}^{s} N_{q_j}(a_j - a_{j-1} - 1)`
/// over suffix sums `q_s + … + q_{s-j} ≤ j + 1`, without a sum constraint.
pub fn count_n_symmetric(a: &[usize]) -> Result<u64> {
    check_nondecreasing(a)?;
    let s = a.len();
    let mut prev = 0i64;
    let gaps: Vec<i64> = a
        .iter()
        .map(|&x| {
            let g = x as i64 - prev - 1;
            prev = x as i64;
            g
        })
        .collect();
    let mut total = 0;
    for q in suffix_bounded(s) {
        total += q.iter().zip(&gaps).map(|(qj, g)| n_q(*qj, *g)).product::<u64>();
    }
    Ok(total)
}

/// The sequence `(m-1, m-2+2k₁, …, m-s+2(k₁+…+k_{s-1}))`.
pub fn gamma_arguments(m: usize, parts: &[usize]) -> Result<Vec<usize>> {
    if m == 0 || parts.contains(&0) {
        return Err(Error::OutOfRange("gamma needs m ≥ 1 and positive parts".into()));
    }
    let mut out = Vec::with_capacity(parts.len());
    let mut partial = 0;
    for j in 0..parts.len() {
        out.push(m + 2 * partial - 1 - j);
        partial += parts[j];
    }
    Ok(out)
}

/// `Σ_{q₀=1}^{s} Σ binom(m-1+q₀, q₀) Π binom(2k_j-2+q_j, q_j)`.
pub fn gamma_binomial(m: usize, parts: &[usize]) -> Result<u64> {
    if m == 0 || parts.contains(&0) {
        return Err(Error::OutOfRange("gamma needs m ≥ 1 and positive parts".into()));
    }
    let s = parts.len();
    if s == 0 {
        return Ok(1);
    }
    let mut total = 0;
    for q in suffix_bounded(s - 1) {
        let q0 = s - q.iter().sum::<usize>();
        let mut term = binomial((m - 1 + q0) as u64, q0 as u64);
        for (j, qj) in q.iter().enumerate() {
            term *= binomial((2 * parts[j] - 2 + qj) as u64, *qj as u64);
        }
        total += term;
    }
    Ok(total)
}

/// γ coefficient of `ψ_{2k₁}⋯ψ_{2kₛ}` in `β^{(l+1)}_m`, by the binomial sum
/// and by brute-force counting; disagreement is an error.
pub fn gamma_coeff(m: usize, parts: &[usize]) -> Result<u64> {
    let by_sum = gamma_binomial(m, parts)?;
    let by_count = count_n_bruteforce(&gamma_arguments(m, parts)?)?;
    if by_sum != by_count {
        return Err(Error::Inconsistent(format!(
            "gamma({m}; {parts:?}): binomial sum {by_sum} but count {by_count}"
        )));
    }
    Ok(by_sum)
}

/// `β` as `Σ_{P_{l+1,m}} γ ψ_{2k₁}⋯ψ_{2kₛ}` over compositions of `(l-m)/2`.
pub fn beta_via_partitions(upper: usize, m: usize) -> Result<PsiPoly> {
    check_domain(upper, m)?;
    let l = upper - 1;
    let mut acc = PsiPoly::zero();
    for parts in compositions((l - m) / 2) {
        let g = gamma_coeff(m, &parts)?;
        acc.add_assign_ref(&psi_product(&parts).scale(&rat(g as i64)));
    }
    Ok(acc)
}

/// `β^{(l+2)}_m = Σ_{k ≡ q+1, 0 ≤ k ≤ l-m+q} β^{(k+2)}_q β^{(l+1-k)}_{m-q}`.
pub fn verify_product_identity(l: usize, m: usize, q: usize) -> Result<bool> {
    if m < 2 || m > l {
        return Err(Error::OutOfRange(format!("m = {m} outside 2..={l}")));
    }
    if m % 2 != (l + 1) % 2 {
        return Err(Error::Parity(format!("m = {m} must have the parity of l + 1 = {}", l + 1)));
    }
    if q == 0 || q >= m {
        return Err(Error::OutOfRange(format!("q = {q} outside 1..{m}")));
    }
    let table = shared_table(l + 2);
    let lhs = table.get(l + 2, m);
    let mut rhs = PsiPoly::zero();
    for k in (0..=l - m + q).filter(|k| k % 2 == (q + 1) % 2) {
        rhs.add_assign_ref(&table.get(k + 2, q).mul_ref(&table.get(l + 1 - k, m - q)));
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> PsiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(beta_recurrence(5, 2).unwrap(), poly("2*p2"));
        assert_eq!(beta_recurrence(6, 3).unwrap(), poly("3*p2"));
        assert_eq!(beta_recurrence(8, 3).unwrap(), poly("9*p2^2 + 3*p4"));
        assert_eq!(beta_recurrence(6, 1).unwrap(), poly("2*p2^2 + p4"));
        assert_eq!(beta_recurrence(4, 3).unwrap(), PsiPoly::one());
        assert_eq!(beta(4, 2), PsiPoly::zero());
        assert_eq!(beta(4, 0), PsiPoly::zero());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(beta_recurrence(5, 1), Err(Error::Parity(_))));
        assert!(matches!(beta_recurrence(5, 6), Err(Error::OutOfRange(_))));
        assert!(matches!(beta_recurrence(5, 0), Err(Error::OutOfRange(_))));
        assert!(beta_recurrence(1, 1).is_err());
    }

    #[test]
    fn k_tuple_sets() {
        assert_eq!(k_tuples(5, 2).unwrap(), vec![vec![0, 1], vec![1]]);
        assert_eq!(k_tuples(7, 6).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(beta_via_k(7, 6).unwrap(), PsiPoly::one());
        assert_eq!(beta_via_k(5, 2).unwrap(), poly("2*p2"));
        assert_eq!(beta_via_k(8, 1).unwrap(), beta(8, 1));
    }

    #[test]
    fn n_count_examples() {
        assert_eq!(count_n_bruteforce(&[3]).unwrap(), 4);
        assert_eq!(count_n_bruteforce(&[1, 2]).unwrap(), 5);
        assert_eq!(count_n_bruteforce(&[0, 1, 2]).unwrap(), 5);
        assert_eq!(count_n_formula(&[3]).unwrap(), 4);
        assert_eq!(count_n_formula(&[1, 2]).unwrap(), 5);
        assert_eq!(count_n_formula(&[2, 2, 2]).unwrap(), 10);
        assert_eq!(count_n_symmetric(&[2, 2, 2]).unwrap(), 10);
        assert!(count_n_bruteforce(&[2, 1]).is_err());
        assert!(count_n_formula(&[2, 1]).is_err());
    }

    #[test]
    fn two_term_closed_form() {
        for a1 in 0..6usize {
            for a2 in a1..8usize {
                let want = (2 * a2 + 2 - a1) * (a1 + 1) / 2;
                assert_eq!(count_n_bruteforce(&[a1, a2]).unwrap() as usize, want);
            }
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_coeff(3, &[1, 2]).unwrap(), 9);
        assert_eq!(gamma_coeff(3, &[2, 1]).unwrap(), 15);
        assert_eq!(gamma_coeff(1, &[4]).unwrap(), 1);
        assert_eq!(gamma_coeff(1, &[1, 1]).unwrap(), 2);
        assert_eq!(gamma_arguments(3, &[1, 2]).unwrap(), vec![2, 3]);
    }

    #[test]
    fn top_column_closed_forms() {
        for l in 3..=12usize {
            let li = l as i64;
            assert_eq!(beta(l + 1, l - 2), poly("p2").scale(&rat(li - 2)));
            if l >= 5 {
                let want = poly("p4").scale(&rat(li - 4))
                    + poly("p2^2")
                        .scale(&num_rational::BigRational::new(((li - 1) * (li - 4)).into(), 2.into()));
                assert_eq!(beta(l + 1, l - 4), want, "l = {l}");
            }
            if l >= 7 {
                let want = poly("p6").scale(&rat(li - 6))
                    + poly("p2*p4").scale(&rat((li - 6) * (li - 1)))
                    + poly("p2^3").scale(&num_rational::BigRational::new(
                        ((li - 6) * (li - 2) * (li - 1)).into(),
                        6.into(),
                    ));
                assert_eq!(beta(l + 1, l - 6), want, "l = {l}");
            }
        }
    }

    #[test]
    fn routes_agree_exactly() {
        for upper in 2..=13 {
            let l = upper - 1;
            for m in (1..=l).filter(|m| m % 2 == l % 2) {
                let r = beta_recurrence(upper, m).unwrap();
                assert_eq!(beta_via_k(upper, m).unwrap(), r, "K route ({upper},{m})");
                assert_eq!(beta_via_partitions(upper, m).unwrap(), r, "partition route ({upper},{m})");
                assert!(r.is_homogeneous_of(l - m), "grade ({upper},{m})");
            }
        }
    }

    #[test]
    fn product_identity_examples() {
        assert!(verify_product_identity(4, 3, 1).unwrap());
        assert!(verify_product_identity(5, 2, 1).unwrap());
        assert!(verify_product_identity(4, 2, 1).is_err());
    }

    fn nondecreasing(
        max_len: usize,
        max_val: usize,
    ) -> impl proptest::strategy::Strategy<Value = Vec<usize>> {
        use proptest::prelude::*;
        proptest::collection::vec(0..=max_val, 1..=max_len).prop_map(|mut v| {
            v.sort_unstable();
            v
        })
    }

    proptest::proptest! {
        #[test]
        fn formula_matches_bruteforce(a in nondecreasing(5, 6)) {
            let b = count_n_bruteforce(&a).unwrap();
            proptest::prop_assert_eq!(count_n_formula(&a).unwrap(), b);
            proptest::prop_assert_eq!(count_n_symmetric(&a).unwrap(), b);
        }

        #[test]
        fn equal_bounds_are_binomial(s in 1usize..6, a in 0usize..7) {
            let v = vec![a; s];
            proptest::prop_assert_eq!(count_n_formula(&v).unwrap(), binomial((a + s) as u64, s as u64));
        }
    }
}
