//! The integrals `ξ_l` as ψ-polynomials, formal MZV combinations and numbers.

use num_integer::binomial;
use serde::Serialize;

use crate::beta::{beta, compositions};
use crate::error::{Error, Result};
use crate::mzv::{psi_word_index_set, psi_word_numeric, MzvIndex};
use crate::numeric::Estimate;
use crate::poly::{rat, Poly, Psi, PsiPoly};

pub type MzvPoly = Poly<MzvIndex>;

/// `ξ_l = β^{(l+2)}_1` for even `l` and `β^{(l+2)}_2` for odd `l`; `ξ₀ = ξ₁ = 1`.
pub fn xi_symbolic(l: usize) -> PsiPoly {
    match l {
        0 | 1 => PsiPoly::one(),
        l if l % 2 == 0 => beta(l + 2, 1),
        l => beta(l + 2, 2),
    }
}

/// All tuples `(q₁,…,q_{s-1})` in `[0, s-1]` with `q_{s-1} + … + q_{s-j} ≤ j`.
fn suffix_tuples(len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for tail in &out {
            let used: usize = tail.iter().sum();
            for v in 0..=(tail.len() + 1 - used) {
                let mut t = vec![v];
                t.extend_from_slice(tail);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Closed-form γ: `Σ_q Π_{j<s} binom(2k_j - 2 + q_j, q_j)`.
pub fn gamma_theorem(parts: &[usize]) -> u64 {
    let s = parts.len();
    if s == 0 {
        return 1;
    }
    suffix_tuples(s - 1)
        .iter()
        .map(|q| {
            q.iter()
                .enumerate()
                .map(|(j, &qj)| binomial((2 * parts[j] - 2 + qj) as u64, qj as u64))
                .product::<u64>()
        })
        .sum()
}

/// The odd-l variant displayed with a bare factor `q₀` instead of `binom(1 + q₀, q₀)`.
/// Kept only to document that it disagrees with the recurrence.
pub fn gamma_odd_bare_q0(parts: &[usize]) -> u64 {
    let s = parts.len();
    if s == 0 {
        return 1;
    }
    suffix_tuples(s - 1)
        .iter()
        .map(|q| {
            let q0 = s - q.iter().sum::<usize>();
            q0 as u64
                * q.iter()
                    .enumerate()
                    .map(|(j, &qj)| binomial((2 * parts[j] - 2 + qj) as u64, qj as u64))
                    .product::<u64>()
        })
        .sum()
}

fn psi_monomial(parts: &[usize], c: u64) -> PsiPoly {
    PsiPoly::monomial(parts.iter().map(|&k| Psi(2 * k)).collect(), rat(c as i64))
}

/// Even `l`: `Σ_{k₁+…+kₛ = l/2} γ ψ_{2k₁}⋯ψ_{2kₛ}`. Odd `l = 2m+1`: `Σ_h ξ_{2h} ξ_{2m-2h}`.
pub fn xi_theorem(l: usize) -> PsiPoly {
    if l < 2 {
        return PsiPoly::one();
    }
    if l % 2 == 0 {
        let mut acc = PsiPoly::zero();
        for parts in compositions(l / 2) {
            acc.add_assign_ref(&psi_monomial(&parts, gamma_theorem(&parts)));
        }
        acc
    } else {
        let m = (l - 1) / 2;
        let mut acc = PsiPoly::zero();
        for h in 0..=m {
            acc.add_assign_ref(&xi_theorem(2 * h).mul_ref(&xi_theorem(2 * m - 2 * h)));
        }
        acc
    }
}

/// The bare-`q₀` odd formula, summed over compositions of `(l-1)/2`.
pub fn xi_odd_bare_q0(l: usize) -> Result<PsiPoly> {
    if l < 3 || l % 2 == 0 {
        return Err(Error::Parity(format!("l = {l} must be odd and at least 3")));
    }
    let mut acc = PsiPoly::zero();
    for parts in compositions((l - 1) / 2) {
        acc.add_assign_ref(&psi_monomial(&parts, gamma_odd_bare_q0(&parts)));
    }
    Ok(acc)
}

/// `ψ_{2k} ↦ Σ ζ(idx)` over `psi_word_index_set`; products stay formal.
pub fn psi_to_mzv(p: &PsiPoly) -> MzvPoly {
    p.substitute(|s: &Psi| {
        let mut acc = MzvPoly::zero();
        for idx in psi_word_index_set(s.0).expect("even grade") {
            acc.add_assign_ref(&MzvPoly::symbol(idx));
        }
        acc
    })
}

pub fn xi_expand_mzv(l: usize) -> MzvPoly {
    psi_to_mzv(&xi_symbolic(l))
}

/// Evaluates a ψ-polynomial with `psi_word_numeric`.
pub fn psi_poly_numeric(p: &PsiPoly, tol: f64) -> Result<Estimate> {
    let terms = p.len().max(1) as f64;
    let grades = p.grades();
    let top = grades.last().copied().unwrap_or(0).max(2) as f64;
    // each symbol gets a share of the budget; coefficients stay small
    let per = tol / (terms * top * 50.0);
    let total = p.evaluate(|s| psi_word_numeric(s.0, per).or_else(|_| psi_word_numeric(s.0, tol)))?;
    if total.bound > tol {
        return Err(Error::Evaluation(format!("reached bound {:.3e}, requested {tol:.3e}", total.bound)));
    }
    Ok(total)
}

pub fn xi_numeric(l: usize, tol: f64) -> Result<Estimate> {
    psi_poly_numeric(&xi_symbolic(l), tol)
}

/// `ξ_{2m+1} = Σ_{h=0}^{m} ξ_{2h} ξ_{2m-2h}` as an exact identity.
pub fn verify_odd_relation(m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let mut rhs = PsiPoly::zero();
    for h in 0..=m {
        rhs.add_assign_ref(&xi_symbolic(2 * h).mul_ref(&xi_symbolic(2 * m - 2 * h)));
    }
    Ok(xi_symbolic(2 * m + 1) == rhs)
}

#[derive(Clone, Debug, Serialize)]
pub struct XiValue {
    pub l: usize,
    pub psi_form: PsiPoly,
    pub mzv_form: MzvPoly,
    pub numeric: Option<Estimate>,
}

pub fn xi_value(l: usize, numeric_tol: Option<f64>) -> Result<XiValue> {
    let numeric = numeric_tol.map(|tol| xi_numeric(l, tol)).transpose()?;
    Ok(XiValue { l, psi_form: xi_symbolic(l), mzv_form: xi_expand_mzv(l), numeric })
}
