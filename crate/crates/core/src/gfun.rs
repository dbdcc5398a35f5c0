//! The towers `G_l(1, x)` and `F_l(1, x)`, the coefficients `a_{l,k}`, and the
//! word coefficients `α^{(l)}_{[i]}`.
//!
//! `F_1 = G_1 = 1`, `F_l(1, x) = ∫₀¹ F_{l-1}(1, t) dt / (1 - tx)` and
//! `G_l(1, x) = ∫₀¹ K_l(t, x) G_{l-1}(1, t) dt` with `K_l = 1/(1 - tx)` for even
//! `l` and `tx/(1 - tx)` for odd `l`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::beta::beta;
use crate::error::{Error, Result};
use crate::hyperlog::{eval_series, HyperWord};
use crate::numeric::{Estimate, PanelGrid};
use crate::poly::{rat, Poly, PsiPoly, Symbol};
use crate::words::{enumerate_admissible, words_ending_in_one, Word};
use crate::xi::{psi_poly_numeric, xi_symbolic};

const TOWER_DEPTH: usize = 9;
const GRID_LEVELS: usize = 48;
const ORDERS: [usize; 2] = [16, 24];
const PSI_TOL: f64 = 1e-8;

/// `G_k` and `F_k` tabulated on a graded grid of `[0, 1]`.
#[derive(Debug)]
struct Tower {
    grid: PanelGrid,
    g: Vec<Vec<f64>>,
    f: Vec<Vec<f64>>,
}

fn kernel_g(l: usize, t: f64, x: f64) -> f64 {
    if l % 2 == 0 {
        1.0 / (1.0 - t * x)
    } else {
        t * x / (1.0 - t * x)
    }
}

fn kernel_f(t: f64, x: f64) -> f64 {
    1.0 / (1.0 - t * x)
}

impl Tower {
    fn build(order: usize) -> Self {
        let grid = PanelGrid::graded(0.0, 1.0, GRID_LEVELS, order);
        let ones = vec![1.0; grid.len()];
        let mut g = vec![Vec::new(), ones.clone()];
        let mut f = vec![Vec::new(), ones];
        for l in 2..=TOWER_DEPTH {
            let gl: Vec<f64> =
                grid.nodes.iter().map(|&x| Self::apply(&grid, &g[l - 1], |t| kernel_g(l, t, x))).collect();
            let fl: Vec<f64> =
                grid.nodes.iter().map(|&x| Self::apply(&grid, &f[l - 1], |t| kernel_f(t, x))).collect();
            g.push(gl);
            f.push(fl);
        }
        Tower { grid, g, f }
    }

    fn apply(grid: &PanelGrid, prev: &[f64], kernel: impl Fn(f64) -> f64) -> f64 {
        let vals: Vec<f64> = grid.nodes.iter().zip(prev).map(|(&t, p)| kernel(t) * p).collect();
        grid.integrate(&vals)
    }

    fn g_at(&self, l: usize, x: f64) -> f64 {
        if l == 1 {
            return 1.0;
        }
        Self::apply(&self.grid, &self.g[l - 1], |t| kernel_g(l, t, x))
    }

    fn f_at(&self, l: usize, x: f64) -> f64 {
        if l == 1 {
            return 1.0;
        }
        Self::apply(&self.grid, &self.f[l - 1], |t| kernel_f(t, x))
    }
}

fn towers() -> [Arc<Tower>; 2] {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Tower>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    ORDERS.map(|order| {
        let mut c = cache.lock().expect("tower cache");
        c.entry(order).or_insert_with(|| Arc::new(Tower::build(order))).clone()
    })
}

fn check_level(l: usize) -> Result<()> {
    if !(2..=TOWER_DEPTH).contains(&l) {
        return Err(Error::OutOfRange(format!("l = {l} outside 2..={TOWER_DEPTH}")));
    }
    Ok(())
}

fn check_point(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfRange(format!("x = {x} outside (0, 1)")));
    }
    Ok(())
}

fn paired(f: impl Fn(&Tower) -> f64) -> Estimate {
    let [coarse, fine] = towers();
    let (a, b) = (f(&coarse), f(&fine));
    Estimate::new(b, (b - a).abs() + 1e-13 * b.abs().max(1.0))
}

/// `G_l(1, x)` by nested quadrature.
pub fn g_numeric(l: usize, x: f64) -> Result<Estimate> {
    check_level(l)?;
    check_point(x)?;
    Ok(paired(|t| t.g_at(l, x)))
}

/// `F_l(1, x)` by nested quadrature of the defining integral.
pub fn f_direct(l: usize, x: f64) -> Result<Estimate> {
    check_level(l)?;
    check_point(x)?;
    Ok(paired(|t| t.f_at(l, x)))
}

/// `∫₀¹ G_l(1, x) dx` by quadrature.
pub fn g_integral_quadrature(l: usize) -> Result<Estimate> {
    check_level(l)?;
    Ok(paired(|t| t.grid.integrate(&t.g[l])))
}

/// `∫₀¹ F_l(1, x) dx` by quadrature.
pub fn f_integral_quadrature(l: usize) -> Result<Estimate> {
    check_level(l)?;
    Ok(paired(|t| t.grid.integrate(&t.f[l])))
}

/// `H_m(x) = Σ_{i ∈ 𝒜_m} L_i(x)`.
pub fn h_function(m: usize, x: f64) -> Result<Estimate> {
    let mut acc = Estimate::exact(0.0);
    for i in enumerate_admissible(m)? {
        acc = acc + eval_series(&HyperWord::from(&i), x)?;
    }
    Ok(acc)
}

/// `G_{l+1}(1, x) = x^{-[l odd]} Σ_m β^{(l+1)}_m H_m(x)`.
pub fn g_formula(upper: usize, x: f64) -> Result<Estimate> {
    check_level(upper)?;
    check_point(x)?;
    let l = upper - 1;
    let mut acc = Estimate::exact(0.0);
    for m in (1..=l).filter(|m| m % 2 == l % 2) {
        let coeff = psi_poly_numeric(&beta(upper, m), PSI_TOL)?;
        acc = acc + coeff * h_function(m, x)?;
    }
    Ok(if l % 2 == 1 { acc.scale(1.0 / x) } else { acc })
}

/// `∫₀¹ G_{l+1}`: `Σ_{m odd} β^{(l+1)}_m ψ_{m+1}` for odd `l`, `β^{(l+2)}_1` for even `l`.
pub fn integral_g_symbolic(upper: usize) -> Result<PsiPoly> {
    if upper < 2 {
        return Err(Error::OutOfRange(format!("upper index {upper} must be at least 2")));
    }
    let l = upper - 1;
    if l % 2 == 0 {
        return Ok(beta(l + 2, 1));
    }
    let mut acc = PsiPoly::zero();
    for m in (1..=l).step_by(2) {
        acc.add_assign_ref(&beta(upper, m).mul_ref(&PsiPoly::psi(m + 1)?));
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralG {
    pub upper: usize,
    pub symbolic: PsiPoly,
    pub formula: Estimate,
    pub quadrature: Estimate,
}

pub fn integral_g(upper: usize) -> Result<IntegralG> {
    let symbolic = integral_g_symbolic(upper)?;
    let formula = psi_poly_numeric(&symbolic, PSI_TOL)?;
    let quadrature = g_integral_quadrature(upper)?;
    Ok(IntegralG { upper, symbolic, formula, quadrature })
}

/// `a_{l,k}`; zero for `k` outside `1..=l-2`, an error for `k ≢ l (mod 2)`.
pub fn a_coeff(l: usize, k: usize) -> Result<PsiPoly> {
    if k % 2 != l % 2 {
        return Err(Error::Parity(format!("a_({l},{k}) needs k ≡ l (mod 2)")));
    }
    if l < 3 || k == 0 || k > l - 2 {
        return Ok(PsiPoly::zero());
    }
    if k >= 2 {
        return a_coeff(l - 1, k - 1);
    }
    let mut acc = xi_symbolic(l - 1);
    for j in (2..=l.saturating_sub(3)).step_by(2) {
        acc = acc - a_coeff(l - 1, j)?.mul_ref(&xi_symbolic(j));
    }
    Ok(acc)
}

/// `ξ_{l+1} = Σ_k a_{l+1,k} ξ_k + ∫₀¹ G_{l+1}` as an exact identity.
pub fn verify_xi_closure(l: usize) -> Result<bool> {
    let upper = l + 1;
    let mut rhs = integral_g_symbolic(upper)?;
    for k in (1..upper).filter(|k| k % 2 == upper % 2) {
        rhs.add_assign_ref(&a_coeff(upper, k)?.mul_ref(&xi_symbolic(k)));
    }
    Ok(rhs == xi_symbolic(upper))
}

/// `F_l(1, x) = Σ_k a_{l,k} F_k(1, x) + G_l(1, x)`, with `F₁ = 1` and `F₂ = G₂`.
pub fn f_numeric(l: usize, x: f64) -> Result<Estimate> {
    check_point(x)?;
    if l == 1 {
        return Ok(Estimate::exact(1.0));
    }
    check_level(l)?;
    let mut acc = g_numeric(l, x)?;
    for k in (1..l).filter(|k| k % 2 == l % 2) {
        let a = a_coeff(l, k)?;
        if !a.is_zero() {
            acc = acc + psi_poly_numeric(&a, PSI_TOL)? * f_numeric(k, x)?;
        }
    }
    Ok(acc)
}

/// The formal constant `L_b(1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LConst(pub Word);

impl Symbol for LConst {
    fn grade(&self) -> usize {
        self.0.weight()
    }
}

impl fmt::Display for LConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({})", self.0)
    }
}

pub type LPoly = Poly<LConst>;

/// `α^{(l)}_{[i]}` for `2 ≤ l ≤ l_max` and `i ∈ I_m`, `m < l`.
#[derive(Clone, Debug)]
pub struct AlphaTable {
    pub l_max: usize,
    entries: HashMap<(usize, Word), LPoly>,
}

fn swap_sign(a: &Word) -> i64 {
    if (a.weight() - a.length()) % 2 == 0 {
        1
    } else {
        -1
    }
}

impl AlphaTable {
    pub fn get(&self, l: usize, i: &Word) -> LPoly {
        self.entries.get(&(l, i.clone())).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, Word), &LPoly)> {
        self.entries.iter()
    }
}

/// The recursion for `α^{(l+1)}_{[i]}` from `α^{(2)}_{[1]} = 1`.
pub fn alpha_recursion(l_max: usize) -> Result<AlphaTable> {
    if l_max < 2 {
        return Err(Error::OutOfRange("l_max must be at least 2".into()));
    }
    let mut entries = HashMap::new();
    entries.insert((2, Word::ones(1)), LPoly::one());
    let mut table = AlphaTable { l_max, entries };
    for l in 2..l_max {
        let mut level = HashMap::new();
        for m in 1..=l {
            for i in words_ending_in_one(m) {
                let xs = i.x_set()?;
                let mut acc = LPoly::zero();
                for n in 2..=l.saturating_sub(m) {
                    for b in words_ending_in_one(n).into_iter().filter(|b| b.first() == Some(0)) {
                        let mut inner = LPoly::zero();
                        for a in &xs {
                            let v = table.get(l, &a.concat(&b));
                            if !v.is_zero() {
                                inner.add_assign_ref(&v.scale(&rat(swap_sign(a))));
                            }
                        }
                        if !inner.is_zero() {
                            acc.add_assign_ref(&inner.mul_ref(&LPoly::symbol(LConst(b.clone()))));
                        }
                    }
                }
                for a in xs.iter().filter(|a| a.ends_in_one()) {
                    let v = table.get(l, a);
                    if !v.is_zero() {
                        acc.add_assign_ref(&v.scale(&rat(swap_sign(a))));
                    }
                }
                if !acc.is_zero() {
                    level.insert((l + 1, i), acc);
                }
            }
        }
        table.entries.extend(level);
    }
    Ok(table)
}

/// `ψ_n ↦ Σ_{b ∈ 𝒜_n, b₁ = 0} L(b)`.
pub fn psi_to_lconst(p: &PsiPoly) -> LPoly {
    p.substitute(|s| {
        let mut acc = LPoly::zero();
        for b in enumerate_admissible(s.0).expect("positive grade") {
            if b.first() == Some(0) {
                acc.add_assign_ref(&LPoly::symbol(LConst(b)));
            }
        }
        acc
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaCollapseReport {
    pub l_max: usize,
    pub entries_checked: usize,
    pub mismatches: Vec<String>,
    pub pass: bool,
}

/// `α^{(l+1)}_{[i]} = β^{(l+1)}_{w(i)}` for admissible `i`, zero otherwise.
pub fn verify_alpha_collapse(l_max: usize) -> Result<AlphaCollapseReport> {
    let table = alpha_recursion(l_max + 1)?;
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for upper in 2..=l_max + 1 {
        for m in 1..upper {
            let expected_admissible = psi_to_lconst(&beta(upper, m));
            for i in words_ending_in_one(m) {
                checked += 1;
                let got = table.get(upper, &i);
                let want = if i.is_admissible() { expected_admissible.clone() } else { LPoly::zero() };
                if got != want {
                    mismatches.push(format!("alpha^({upper})[{i}] = {got}, expected {want}"));
                }
            }
        }
    }
    Ok(AlphaCollapseReport { l_max, entries_checked: checked, pass: mismatches.is_empty(), mismatches })
}
