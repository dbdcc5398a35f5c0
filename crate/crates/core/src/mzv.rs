//! Multiple zeta values ζ(m₁,…,m_r) = Σ_{0<k₁<…<k_r} k₁^{-m₁}⋯k_r^{-m_r}
//! and the sequence ψ_{2n}.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hyperlog::{eval_series, HyperWord};
use crate::numeric::{fit_constant, CompensatedSum, Estimate};
use crate::poly::Symbol;
use crate::words::{enumerate_admissible, Word};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MzvIndex(Vec<usize>);

impl MzvIndex {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidWord(format!("{parts:?} is not a composition")));
        }
        Ok(MzvIndex(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_convergent(&self) -> bool {
        self.0.last().is_some_and(|&m| m >= 2)
    }
}

impl Symbol for MzvIndex {
    fn grade(&self) -> usize {
        self.weight()
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "z({})", parts.join(","))
    }
}

impl FromStr for MzvIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .strip_prefix("z(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad zeta index {s:?}")))?;
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad part in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        MzvIndex::new(parts)
    }
}

impl Serialize for MzvIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MzvIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `[0^{n_r-1} 1 … 0^{n_1-1} 1] ↦ (n_1, …, n_r)`.
pub fn word_to_zeta(w: &Word) -> Result<MzvIndex> {
    if !w.ends_in_one() {
        return Err(Error::InvalidWord(format!("{w} does not end in 1")));
    }
    let mut parts = Vec::new();
    let mut run = 0;
    for &b in w.letters() {
        run += 1;
        if b == 1 {
            parts.push(run);
            run = 0;
        }
    }
    parts.reverse();
    MzvIndex::new(parts)
}

pub fn zeta_to_word(idx: &MzvIndex) -> Word {
    let mut letters = Vec::with_capacity(idx.weight());
    for &n in idx.parts().iter().rev() {
        letters.extend(std::iter::repeat(0).take(n - 1));
        letters.push(1);
    }
    Word::new(letters).expect("bits")
}

/// Compositions of `grade` with last part 2 and all parts in {1, 2}.
pub fn psi_index_set(grade: usize) -> Result<Vec<MzvIndex>> {
    if grade == 0 || grade % 2 == 1 {
        return Err(Error::Parity(format!("psi grade {grade} must be even and positive")));
    }
    fn rec(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<MzvIndex>) {
        if rest == 0 {
            let mut p = prefix.clone();
            p.push(2);
            out.push(MzvIndex(p));
            return;
        }
        for part in [1, 2] {
            if part <= rest {
                prefix.push(part);
                rec(rest - part, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(grade - 2, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// Indices of `L_b(1)` over admissible words `b` of weight `grade` with `b₁ = 0`:
/// blocks `2` and `1,1` ending in `2`. Agrees with `psi_index_set` up to grade 4 only.
pub fn psi_word_index_set(grade: usize) -> Result<Vec<MzvIndex>> {
    if grade == 0 || grade % 2 == 1 {
        return Err(Error::Parity(format!("psi grade {grade} must be even and positive")));
    }
    let mut out: Vec<MzvIndex> = enumerate_admissible(grade)?
        .iter()
        .filter(|b| b.first() == Some(0))
        .map(word_to_zeta)
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

fn memo() -> &'static Mutex<HashMap<MzvIndex, Estimate>> {
    static MEMO: OnceLock<Mutex<HashMap<MzvIndex, Estimate>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Truncated nested sums `Z(N)` at every `N` in `cutoffs` (ascending).
pub fn partial_sums(idx: &MzvIndex, cutoffs: &[usize]) -> Vec<f64> {
    let nmax = *cutoffs.last().unwrap_or(&0);
    // depth 0 is the constant 1
    let mut prev = vec![1.0; nmax + 1];
    for &m in idx.parts() {
        let mut cur = vec![0.0; nmax + 1];
        let mut acc = CompensatedSum::default();
        for k in 1..=nmax {
            acc.add(prev[k - 1] * (k as f64).powi(-(m as i32)));
            cur[k] = acc.value();
        }
        prev = cur;
    }
    cutoffs.iter().map(|&n| prev[n]).collect()
}

fn extrapolate(idx: &MzvIndex, nmax: usize) -> Estimate {
    let cutoffs: Vec<usize> =
        (0..=32).rev().map(|k| (nmax as f64 * 2f64.powf(-(k as f64) / 4.0)).round() as usize).collect();
    let sums = partial_sums(idx, &cutoffs);
    let xs: Vec<f64> = cutoffs.iter().map(|&n| n as f64).collect();
    let logs = idx.parts()[..idx.depth() - 1].iter().filter(|&&m| m == 1).count();

    let fit = |xs: &[f64], ys: &[f64], powers: usize| -> f64 {
        let mut fns: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
        for i in 1..=powers {
            for j in 0..=logs {
                fns.push(Box::new(move |n: f64| n.ln().powi(j as i32) / n.powi(i as i32)));
            }
        }
        let refs: Vec<&dyn Fn(f64) -> f64> = fns.iter().map(|f| f.as_ref()).collect();
        fit_constant(xs, ys, &refs).0
    };
    let half = xs.len() / 2;
    let main = fit(&xs, &sums, 2);
    let richer = fit(&xs, &sums, 3);
    let upper = fit(&xs[half..], &sums[half..], 2);
    let spread = (main - richer).abs().max((main - upper).abs());
    Estimate::new(main, 4.0 * spread + 4.0 * f64::EPSILON * main.abs())
}

/// Nested-sum evaluation with least-squares extrapolation in the cutoff.
pub fn zeta_numeric(idx: &MzvIndex, tol: f64) -> Result<Estimate> {
    if !idx.is_convergent() {
        return Err(Error::Divergent(format!("{idx} has last part 1")));
    }
    if let Some(e) = memo().lock().expect("memo").get(idx) {
        if e.bound <= tol {
            return Ok(*e);
        }
    }
    let mut best: Option<Estimate> = None;
    for nmax in [1usize << 18, 1 << 20, 1 << 22] {
        let e = extrapolate(idx, nmax);
        if best.is_none_or(|b| e.bound < b.bound) {
            best = Some(e);
        }
        if e.bound <= tol {
            break;
        }
    }
    let best = best.expect("at least one cutoff");
    memo().lock().expect("memo").insert(idx.clone(), best);
    if best.bound > tol {
        return Err(Error::Evaluation(format!(
            "{idx}: reached bound {:.3e}, requested {tol:.3e}",
            best.bound
        )));
    }
    Ok(best)
}

/// ψ_grade as the sum of `zeta_numeric` over `psi_index_set`; ψ₀ = 1.
pub fn psi_numeric(grade: usize, tol: f64) -> Result<Estimate> {
    if grade == 0 {
        return Ok(Estimate::exact(1.0));
    }
    let set = psi_index_set(grade)?;
    let per = tol / set.len() as f64;
    set.iter().try_fold(Estimate::exact(0.0), |acc, idx| Ok(acc + zeta_numeric(idx, per)?))
}

/// Sum of `zeta_numeric` over `psi_word_index_set`; this is the ψ that enters `ξ_l`.
pub fn psi_word_numeric(grade: usize, tol: f64) -> Result<Estimate> {
    if grade == 0 {
        return Ok(Estimate::exact(1.0));
    }
    let set = psi_word_index_set(grade)?;
    let per = tol / set.len() as f64;
    set.iter().try_fold(Estimate::exact(0.0), |acc, idx| Ok(acc + zeta_numeric(idx, per)?))
}

/// ψ_grade as `Σ L_b(1)` over admissible `b` of that weight with `b₁ = 0`.
pub fn psi_via_words(grade: usize, tol: f64) -> Result<Estimate> {
    if grade == 0 || grade % 2 == 1 {
        return Err(Error::Parity(format!("psi grade {grade} must be even and positive")));
    }
    let mut total = Estimate::exact(0.0);
    for b in enumerate_admissible(grade)? {
        if b.first() == Some(0) {
            total = total + eval_series(&HyperWord::from(&b), 1.0)?;
        }
    }
    if total.bound > tol {
        return Err(Error::Evaluation(format!("psi_{grade} via words: bound {:.3e}", total.bound)));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn z(parts: &[usize]) -> MzvIndex {
        MzvIndex::new(parts.to_vec()).unwrap()
    }

    const ZETA3: f64 = 1.202_056_903_159_594_2;
    const ZETA5: f64 = 1.036_927_755_143_369_9;

    #[test]
    fn psi_index_sets() {
        assert_eq!(psi_index_set(2).unwrap(), vec![z(&[2])]);
        let mut four = vec![z(&[2, 2]), z(&[1, 1, 2])];
        four.sort();
        assert_eq!(psi_index_set(4).unwrap(), four);
        let mut six =
            vec![z(&[2, 2, 2]), z(&[1, 1, 2, 2]), z(&[1, 2, 1, 2]), z(&[2, 1, 1, 2]), z(&[1, 1, 1, 1, 2])];
        six.sort();
        assert_eq!(psi_index_set(6).unwrap(), six);
        assert!(psi_index_set(3).is_err());
        assert!(psi_index_set(0).is_err());
    }

    #[test]
    fn psi_set_sizes_are_fibonacci() {
        let mut fib = vec![1usize, 1];
        while fib.len() < 20 {
            fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
        }
        for n in 1..=6 {
            // compositions of 2n-2 into parts {1,2}
            assert_eq!(psi_index_set(2 * n).unwrap().len(), fib[2 * n - 2]);
        }
    }

    #[test]
    fn word_index_round_trip() {
        let w: Word = "01".parse().unwrap();
        assert_eq!(word_to_zeta(&w).unwrap(), z(&[2]));
        let w: Word = "011".parse().unwrap();
        assert_eq!(word_to_zeta(&w).unwrap(), z(&[1, 2]));
        let w: Word = "1".parse().unwrap();
        assert_eq!(word_to_zeta(&w).unwrap(), z(&[1]));
        assert!(!z(&[1]).is_convergent());
        assert!(word_to_zeta(&"10".parse().unwrap()).is_err());
        for idx in [z(&[2]), z(&[1, 2]), z(&[2, 1, 2]), z(&[3, 1, 1, 4])] {
            assert_eq!(word_to_zeta(&zeta_to_word(&idx)).unwrap(), idx);
        }
    }

    #[test]
    fn index_serialization() {
        assert_eq!(z(&[2, 1, 2]).to_string(), "z(2,1,2)");
        assert_eq!("z(2,1,2)".parse::<MzvIndex>().unwrap(), z(&[2, 1, 2]));
        assert!("z()".parse::<MzvIndex>().is_err());
    }

    #[test]
    fn classical_values() {
        let z2 = zeta_numeric(&z(&[2]), 1e-10).unwrap();
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-11, "{z2:?}");
        let z3 = zeta_numeric(&z(&[3]), 1e-10).unwrap();
        assert!((z3.value - ZETA3).abs() < 1e-11);
        let z22 = zeta_numeric(&z(&[2, 2]), 1e-9).unwrap();
        assert!((z22.value - PI.powi(4) / 120.0).abs() < 1e-9, "{z22:?}");
    }

    #[test]
    fn duality_ones_then_two() {
        let single = [PI * PI / 6.0, ZETA3, PI.powi(4) / 90.0, ZETA5, PI.powi(6) / 945.0];
        for n in 0..=4 {
            let mut parts = vec![1; n];
            parts.push(2);
            let e = zeta_numeric(&z(&parts), 1e-6).unwrap();
            assert!((e.value - single[n]).abs() < 1e-6, "n={n}: {e:?} vs {}", single[n]);
            let d = zeta_numeric(&z(&[n + 2]), 1e-6).unwrap();
            assert!((e.value - d.value).abs() <= e.bound + d.bound + 1e-12, "n={n}");
        }
    }

    #[test]
    fn divergent_is_rejected() {
        assert!(matches!(zeta_numeric(&z(&[2, 1]), 1e-6), Err(Error::Divergent(_))));
    }

    #[test]
    fn psi_small_grades() {
        assert_eq!(psi_numeric(0, 1e-8).unwrap(), Estimate::exact(1.0));
        let p2 = psi_numeric(2, 1e-9).unwrap();
        assert!((p2.value - PI * PI / 6.0).abs() < 1e-9);
        assert!(psi_numeric(3, 1e-8).is_err());
    }

    #[test]
    fn psi_routes_agree() {
        for g in [2, 4, 6, 8] {
            let a = psi_word_numeric(g, 1e-6).unwrap();
            let b = psi_via_words(g, 1e-6).unwrap();
            assert!((a.value - b.value).abs() <= a.bound + b.bound + 1e-12, "grade {g}: {a:?} {b:?}");
        }
        for g in [2, 4] {
            assert_eq!(psi_index_set(g).unwrap(), psi_word_index_set(g).unwrap());
        }
    }

    #[test]
    fn psi_sets_split_at_grade_six() {
        let comp = psi_index_set(6).unwrap();
        let words = psi_word_index_set(6).unwrap();
        assert_eq!(words.len(), 4);
        let extra: Vec<_> = comp.iter().filter(|i| !words.contains(i)).collect();
        assert_eq!(extra, vec![&z(&[1, 2, 1, 2])]);
        let gap = psi_numeric(6, 1e-8).unwrap() - psi_word_numeric(6, 1e-8).unwrap();
        let z1212 = zeta_numeric(&z(&[1, 2, 1, 2]), 1e-8).unwrap();
        assert!((gap.value - z1212.value).abs() < 1e-7);
    }
}
