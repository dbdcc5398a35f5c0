//! One-variable hyperlogarithms `L_w(z)` over the letters
//! `0 ↦ dt/t`, `1 ↦ dt/(1-t)` and `σ ↦ dt/(σ-t)`.
//!
//! The leftmost letter is the outermost integration, so
//! `d/dz L_{[a|w]}(z) = form_a(z) · L_w(z)`, and every word is regularized to
//! vanish at 0.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{CompensatedSum, Estimate, PanelGrid};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HyperLetter {
    Zero,
    One,
    /// `dt/(σ - t)`; the bar letter `x^{-1}` is `Sigma(1/x)`.
    Sigma(f64),
}

impl HyperLetter {
    pub fn inverse_of(x: f64) -> Self {
        HyperLetter::Sigma(1.0 / x)
    }

    fn form(&self, t: f64) -> f64 {
        match *self {
            HyperLetter::Zero => 1.0 / t,
            HyperLetter::One => 1.0 / (1.0 - t),
            HyperLetter::Sigma(s) => 1.0 / (s - t),
        }
    }
}

impl fmt::Display for HyperLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperLetter::Zero => write!(f, "0"),
            HyperLetter::One => write!(f, "1"),
            HyperLetter::Sigma(s) => write!(f, "s({})", 1.0 / s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct HyperWord(pub Vec<HyperLetter>);

impl HyperWord {
    pub fn letters(&self) -> &[HyperLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prepend(&self, letter: HyperLetter) -> Self {
        let mut v = vec![letter];
        v.extend_from_slice(&self.0);
        HyperWord(v)
    }

    pub fn push(&self, letter: HyperLetter) -> Self {
        let mut v = self.0.clone();
        v.push(letter);
        HyperWord(v)
    }

    fn bits(&self) -> Option<Vec<u8>> {
        self.0
            .iter()
            .map(|l| match l {
                HyperLetter::Zero => Some(0),
                HyperLetter::One => Some(1),
                HyperLetter::Sigma(_) => None,
            })
            .collect()
    }

    fn check(&self) -> Result<()> {
        if self.0.last() == Some(&HyperLetter::Zero) {
            return Err(Error::InvalidWord(format!("{self} ends in 0")));
        }
        for l in &self.0 {
            if let HyperLetter::Sigma(s) = l {
                if !(*s > 1.0) || !s.is_finite() {
                    return Err(Error::OutOfRange(format!("parameter {s} must exceed 1")));
                }
            }
        }
        Ok(())
    }
}

impl From<&Word> for HyperWord {
    fn from(w: &Word) -> Self {
        HyperWord(
            w.letters().iter().map(|&b| if b == 0 { HyperLetter::Zero } else { HyperLetter::One }).collect(),
        )
    }
}

impl fmt::Display for HyperWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", parts.join("|"))
    }
}

impl FromStr for HyperWord {
    type Err = Error;

    /// Parses `[s(0.3)|0|1]`; `s(x)` is the letter `x^{-1}`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("bad hyperword {s:?}")))?;
        if inner.is_empty() {
            return Ok(HyperWord::default());
        }
        inner
            .split('|')
            .map(|tok| match tok.trim() {
                "0" => Ok(HyperLetter::Zero),
                "1" => Ok(HyperLetter::One),
                t => t
                    .strip_prefix("s(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|x| x.parse::<f64>().ok())
                    .filter(|x| *x > 0.0)
                    .map(HyperLetter::inverse_of)
                    .ok_or_else(|| Error::Parse(format!("bad letter {t:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(HyperWord)
    }
}

impl Serialize for HyperWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

const MAX_TERMS: usize = 2_000_000;

/// Taylor coefficients at 0 of `L_w`, indices `0..=k`.
fn series_coefficients(w: &HyperWord, k: usize) -> Vec<f64> {
    let mut c = vec![0.0; k + 1];
    c[0] = 1.0;
    for letter in w.0.iter().rev() {
        let mut next = vec![0.0; k + 1];
        match *letter {
            HyperLetter::Zero => {
                for n in 1..=k {
                    next[n] = c[n] / n as f64;
                }
            }
            HyperLetter::One => {
                let mut partial = 0.0;
                for n in 0..k {
                    partial += c[n];
                    next[n + 1] = partial / (n + 1) as f64;
                }
            }
            HyperLetter::Sigma(s) => {
                let mut d = 0.0;
                for n in 0..k {
                    d = (d + c[n]) / s;
                    next[n + 1] = d / (n + 1) as f64;
                }
            }
        }
        c = next;
    }
    c
}

fn sum_series(w: &HyperWord, z: f64) -> Result<Estimate> {
    if z == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let k = ((45.0 / -z.ln()).ceil() as usize + 32).min(MAX_TERMS);
    let c = series_coefficients(w, k);
    let mut acc = CompensatedSum::default();
    let mut abs = 0.0;
    let mut zk = 1.0;
    let mut last = 0.0;
    for (n, cn) in c.iter().enumerate() {
        if n > 0 {
            zk *= z;
        }
        let term = cn * zk;
        acc.add(term);
        abs += term.abs();
        last = term.abs();
    }
    let tail = 10.0 * last / (1.0 - z);
    Ok(Estimate::new(acc.value(), tail + 8.0 * f64::EPSILON * abs))
}

/// Reversal with 0 ↔ 1, the image of a word under `t ↦ 1 - t`.
fn dual(bits: &[u8]) -> HyperWord {
    HyperWord(bits.iter().rev().map(|&b| if b == 0 { HyperLetter::One } else { HyperLetter::Zero }).collect())
}

fn bits_word(bits: &[u8]) -> HyperWord {
    HyperWord::from(&Word::new(bits.to_vec()).expect("bits"))
}

/// Power-series evaluation.
///
/// For `z ∈ [0, 1)` the Taylor series at 0 is summed directly. At `z = 1`,
/// words over {0, 1} starting with 0 are evaluated by splitting the path at 1/2.
pub fn eval_series(w: &HyperWord, z: f64) -> Result<Estimate> {
    w.check()?;
    if w.is_empty() {
        return Ok(Estimate::exact(1.0));
    }
    if (0.0..1.0).contains(&z) {
        return sum_series(w, z);
    }
    if z != 1.0 {
        return Err(Error::OutOfRange(format!("z = {z} outside [0, 1]")));
    }
    let bits = w.bits().ok_or_else(|| {
        Error::Evaluation(format!("{w}: series evaluation at 1 needs a word over {{0, 1}}"))
    })?;
    if bits[0] == 1 {
        return Err(Error::Divergent(format!("{w} starts with 1")));
    }
    let mut total = Estimate::exact(0.0);
    for k in 0..=bits.len() {
        let outer = if k == 0 { Estimate::exact(1.0) } else { sum_series(&dual(&bits[..k]), 0.5)? };
        let inner =
            if k == bits.len() { Estimate::exact(1.0) } else { sum_series(&bits_word(&bits[k..]), 0.5)? };
        total = total + outer * inner;
    }
    Ok(total)
}

fn quadrature_once(w: &HyperWord, z: f64, order: usize) -> f64 {
    let grid = PanelGrid::graded(0.0, z, 56, order);
    let mut f = vec![1.0; grid.len()];
    let n = w.len();
    for (pos, letter) in w.0.iter().enumerate().rev() {
        let g: Vec<f64> = grid.nodes.iter().zip(&f).map(|(&t, v)| letter.form(t) * v).collect();
        if pos == 0 {
            return grid.integrate(&g);
        }
        f = grid.cumulative(&g);
        debug_assert!(pos < n);
    }
    unreachable!("nonempty word")
}

/// Nested Gauss–Legendre quadrature on panels graded toward `z`.
pub fn eval_quadrature(w: &HyperWord, z: f64) -> Result<Estimate> {
    w.check()?;
    if w.is_empty() {
        return Ok(Estimate::exact(1.0));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::OutOfRange(format!("z = {z} outside [0, 1]")));
    }
    if z == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    if z == 1.0 && w.0[0] == HyperLetter::One {
        return Err(Error::Divergent(format!("{w} is not integrable at 1")));
    }
    let coarse = quadrature_once(w, z, 16);
    let fine = quadrature_once(w, z, 24);
    Ok(Estimate::new(fine, (fine - coarse).abs() + 1e-14 * fine.abs().max(1.0)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwapTerm {
    pub sign: i8,
    /// Word in the variable x; may carry the letter `y^{-1}` as `Sigma(1/y)`.
    pub x_word: SwapXWord,
    pub y_word: Word,
}

/// The x-side word `[a(ε) | last]` with `last` either `y^{-1}` or 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwapXWord {
    pub prefix: Word,
    pub ends_in_inverse: bool,
}

impl SwapXWord {
    pub fn instantiate(&self, y: f64) -> HyperWord {
        let last = if self.ends_in_inverse { HyperLetter::inverse_of(y) } else { HyperLetter::One };
        HyperWord::from(&self.prefix).push(last)
    }
}

impl fmt::Display for SwapXWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.prefix.letters().iter().map(|b| b.to_string()).collect();
        parts.push(if self.ends_in_inverse { "s(y)".into() } else { "1".into() });
        write!(f, "[{}]", parts.join("|"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwapExpansion {
    pub word: Word,
    pub restricted: bool,
    pub terms: Vec<SwapTerm>,
}

fn swap_sign(a: &Word) -> i8 {
    if (a.weight() - a.length()) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_standard(i: &Word) -> Result<()> {
    if !i.ends_in_one() {
        return Err(Error::InvalidWord(format!("{i:?} is not a nonempty word ending in 1")));
    }
    Ok(())
}

/// `L_{[x^{-1}|i]}(y)` as a sum of products of hyperlogarithms in x and in y.
pub fn swap_expand(i: &Word) -> Result<SwapExpansion> {
    check_standard(i)?;
    let mut terms = Vec::new();
    for (a, b) in i.deconcatenations() {
        let s = swap_sign(&a);
        for ae in a.all_substitutions() {
            terms.push(SwapTerm {
                sign: s,
                x_word: SwapXWord { prefix: ae.clone(), ends_in_inverse: true },
                y_word: b.clone(),
            });
            if b.first() == Some(1) {
                terms.push(SwapTerm {
                    sign: -s,
                    x_word: SwapXWord { prefix: ae, ends_in_inverse: false },
                    y_word: b.clone(),
                });
            }
        }
    }
    Ok(SwapExpansion { word: i.clone(), restricted: false, terms })
}

/// The specialization `y = 1`: splits with `b` empty or `b₁ = 0`, x-words
/// `[a(ε)|1]` and constants `L_b(1)`.
pub fn swap_expand_restricted(i: &Word) -> Result<SwapExpansion> {
    check_standard(i)?;
    let mut terms = Vec::new();
    for (a, b) in i.deconcatenations() {
        if b.first() == Some(1) {
            continue;
        }
        let s = swap_sign(&a);
        for ae in a.all_substitutions() {
            terms.push(SwapTerm {
                sign: s,
                x_word: SwapXWord { prefix: ae, ends_in_inverse: false },
                y_word: b.clone(),
            });
        }
    }
    Ok(SwapExpansion { word: i.clone(), restricted: true, terms })
}

impl SwapExpansion {
    /// Value of the right-hand side at `(x, y)`; `y` is ignored when restricted.
    pub fn evaluate(&self, x: f64, y: f64) -> Result<Estimate> {
        self.evaluate_with_signs(x, y, |_| 1)
    }

    fn evaluate_with_signs(&self, x: f64, y: f64, flip: impl Fn(&SwapTerm) -> i8) -> Result<Estimate> {
        let ypt = if self.restricted { 1.0 } else { y };
        let mut total = Estimate::exact(0.0);
        for t in &self.terms {
            let xv = eval_series(&t.x_word.instantiate(y), x)?;
            let yv = eval_series(&HyperWord::from(&t.y_word), ypt)?;
            total = total + (xv * yv).scale(f64::from(t.sign * flip(t)));
        }
        Ok(total)
    }
}

/// `L_{[x^{-1}|i]}(y)` by quadrature in y.
pub fn swap_lhs(i: &Word, x: f64, y: f64) -> Result<Estimate> {
    eval_quadrature(&HyperWord::from(i).prepend(HyperLetter::inverse_of(x)), y)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwapReport {
    pub word: Word,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_residual: f64,
    /// Same check with the sign of every term with nonempty y-word reversed.
    pub alternate_max_residual: f64,
    pub pass: bool,
}

pub const SWAP_DEFAULT_MAX_WEIGHT: usize = 4;

/// Compare both sides of the swap expansion at seeded points of `(0.05, 0.95)²`.
pub fn verify_swap(i: &Word, samples: usize, tol: f64, seed: u64) -> Result<SwapReport> {
    if i.weight() > SWAP_DEFAULT_MAX_WEIGHT {
        return Err(Error::OutOfRange(format!("weight {} exceeds {SWAP_DEFAULT_MAX_WEIGHT}", i.weight())));
    }
    let expansion = swap_expand(i)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    let mut alternate: f64 = 0.0;
    for _ in 0..samples {
        let x = rng.gen_range(0.05..0.95);
        let y = rng.gen_range(0.05..0.95);
        let lhs = swap_lhs(i, x, y)?;
        let rhs = expansion.evaluate(x, y)?;
        let alt = expansion.evaluate_with_signs(x, y, |t| if t.y_word.is_empty() { 1 } else { -1 })?;
        max_residual = max_residual.max((lhs.value - rhs.value).abs());
        alternate = alternate.max((lhs.value - alt.value).abs());
    }
    Ok(SwapReport {
        word: i.clone(),
        samples,
        seed,
        tol,
        max_residual,
        alternate_max_residual: alternate,
        pass: max_residual < tol,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictedSwapReport {
    pub word: Word,
    pub points: Vec<f64>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Restricted expansion against quadrature of `L_{[x^{-1}|i]}(1)`.
pub fn verify_swap_restricted(i: &Word, points: &[f64], tol: f64) -> Result<RestrictedSwapReport> {
    let expansion = swap_expand_restricted(i)?;
    let mut max_residual: f64 = 0.0;
    for &x in points {
        let lhs = swap_lhs(i, x, 1.0)?;
        let rhs = expansion.evaluate(x, 1.0)?;
        max_residual = max_residual.max((lhs.value - rhs.value).abs());
    }
    Ok(RestrictedSwapReport {
        word: i.clone(),
        points: points.to_vec(),
        max_residual,
        tol,
        pass: max_residual < tol,
    })
}
