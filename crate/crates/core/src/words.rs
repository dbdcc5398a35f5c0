//! Words over the alphabet {0, 1} in bar notation.
//!
//! Letter `0` stands for `dz/z` and letter `1` for `dz/(1-z)`. Component 1 is
//! the leftmost slot of `[i_1 | … | i_m]`, which is also the outermost
//! integration when the word is read as a hyperlogarithm.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An immutable word over {0, 1}. Ordering is lexicographic on the letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(bad) = letters.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidWord(format!("letter {bad} is not a bit")));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `1^n`, the word made of `n` ones.
    pub fn ones(n: usize) -> Self {
        Word(vec![1; n])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of components.
    pub fn weight(&self) -> usize {
        self.0.len()
    }

    /// Number of components equal to 1.
    pub fn length(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Component `k`, 1-based as in `i = (i_1, …, i_m)`.
    pub fn component(&self, k: usize) -> u8 {
        self.0[k - 1]
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, letter: u8) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn prepend(&self, letter: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// Membership in `I_m`: nonempty and ending in 1.
    pub fn ends_in_one(&self) -> bool {
        self.last() == Some(1)
    }

    /// `i_k = 1` for every `k ≡ w(i) (mod 2)`. The empty word is not admissible.
    pub fn is_admissible(&self) -> bool {
        let m = self.weight();
        if m == 0 {
            return false;
        }
        (1..=m).filter(|k| k % 2 == m % 2).all(|k| self.component(k) == 1)
    }

    /// All `w + 1` splits `self = a · b`, ordered by the weight of `a`.
    pub fn deconcatenations(&self) -> Vec<(Word, Word)> {
        (0..=self.0.len()).map(|k| (Word(self.0[..k].to_vec()), Word(self.0[k..].to_vec()))).collect()
    }

    /// Replace the ones of `self` by the bits of `eps`, weight preserved.
    ///
    /// `eps[0]` goes to the rightmost one, `eps[1]` to the next one to its
    /// left, and so on.
    pub fn substitute_ones(&self, eps: &[u8]) -> Result<Word> {
        let ones = self.length();
        if eps.len() != ones {
            return Err(Error::SizeMismatch { expected: ones, got: eps.len() });
        }
        if eps.iter().any(|&b| b > 1) {
            return Err(Error::InvalidWord("substitution bits must be 0 or 1".into()));
        }
        let mut out = self.0.clone();
        let mut next = 0;
        for letter in out.iter_mut().rev() {
            if *letter == 1 {
                *letter = eps[next];
                next += 1;
            }
        }
        Ok(Word(out))
    }

    /// Every `a(ε)` for `ε ∈ {0,1}^{l(a)}`, in the order of `ε` read as a binary counter.
    pub fn all_substitutions(&self) -> Vec<Word> {
        let ones = self.length();
        (0..1usize << ones)
            .map(|mask| {
                let eps: Vec<u8> = (0..ones).map(|k| ((mask >> k) & 1) as u8).collect();
                self.substitute_ones(&eps).expect("mask has the right size")
            })
            .collect()
    }

    /// `X(i)`: all `a ∈ {0,1}^{m-1}` with `a_k = 1` wherever `i_k = 1`, `k ≤ m - 1`.
    pub fn x_set(&self) -> Result<Vec<Word>> {
        if !self.ends_in_one() {
            return Err(Error::InvalidWord(format!("{self} does not end in 1")));
        }
        let prefix = &self.0[..self.0.len() - 1];
        let free: Vec<usize> = (0..prefix.len()).filter(|&k| prefix[k] == 0).collect();
        let mut out = Vec::with_capacity(1 << free.len());
        for mask in 0..1usize << free.len() {
            let mut a = prefix.to_vec();
            for (bit, &pos) in free.iter().enumerate() {
                a[pos] = ((mask >> bit) & 1) as u8;
            }
            out.push(Word(a));
        }
        out.sort();
        Ok(out)
    }
}

/// `I_m`: words of weight `m` ending in 1. `I_0` is empty.
pub fn words_ending_in_one(m: usize) -> Vec<Word> {
    if m == 0 {
        return Vec::new();
    }
    (0..1usize << (m - 1))
        .map(|mask| {
            let mut v: Vec<u8> = (0..m - 1).map(|k| ((mask >> (m - 2 - k)) & 1) as u8).collect();
            v.push(1);
            Word(v)
        })
        .collect()
}

/// The admissible words of weight `m`, sorted.
pub fn enumerate_admissible(m: usize) -> Result<Vec<Word>> {
    if m == 0 {
        return Err(Error::OutOfRange("admissible words need weight m >= 1".into()));
    }
    // positions k ≢ m (mod 2) are free, the others are forced to 1
    let free: Vec<usize> = (1..=m).filter(|k| k % 2 != m % 2).collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0..1usize << free.len() {
        let mut v = vec![1u8; m];
        for (bit, &k) in free.iter().enumerate() {
            v[k - 1] = ((mask >> bit) & 1) as u8;
        }
        out.push(Word(v));
    }
    out.sort();
    Ok(out)
}

/// Shuffle product of two words as a multiset of interleavings.
pub fn shuffle(u: &Word, v: &Word) -> BTreeMap<Word, u64> {
    let mut memo = BTreeMap::new();
    shuffle_rec(&u.0, &v.0, &mut memo).clone()
}

type ShuffleMemo = BTreeMap<(Vec<u8>, Vec<u8>), BTreeMap<Word, u64>>;

fn shuffle_rec<'a>(u: &[u8], v: &[u8], memo: &'a mut ShuffleMemo) -> &'a BTreeMap<Word, u64> {
    let key = (u.to_vec(), v.to_vec());
    if !memo.contains_key(&key) {
        let mut out = BTreeMap::new();
        if u.is_empty() || v.is_empty() {
            let w = if u.is_empty() { v } else { u };
            out.insert(Word(w.to_vec()), 1);
        } else {
            for (head, rest_u, rest_v) in [(u[0], &u[1..], v), (v[0], u, &v[1..])] {
                let tails = shuffle_rec(rest_u, rest_v, memo).clone();
                for (w, c) in tails {
                    *out.entry(w.prepend(head)).or_insert(0) += c;
                }
            }
        }
        memo.insert(key.clone(), out);
    }
    &memo[&key]
}

/// `u ⧢ u ⧢ … ⧢ u` with `n` factors; `n = 0` gives the empty word.
pub fn shuffle_power(u: &Word, n: usize) -> BTreeMap<Word, u64> {
    let mut acc = BTreeMap::from([(Word::empty(), 1u64)]);
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for (w, c) in &acc {
            for (s, d) in shuffle(w, u) {
                *next.entry(s).or_insert(0) += c * d;
            }
        }
        acc = next;
    }
    acc
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("unexpected character {other:?} in word"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn weight_and_length() {
        assert_eq!(w("").weight(), 0);
        assert_eq!(w("01").weight(), 2);
        assert_eq!(w("011").weight(), 3);
        assert_eq!(w("").length(), 0);
        assert_eq!(w("01").length(), 1);
        assert_eq!(w("101").length(), 2);
    }

    #[test]
    fn admissibility_small_weights() {
        assert!(w("1").is_admissible());
        assert!(w("01").is_admissible());
        assert!(w("11").is_admissible());
        assert!(!w("00").is_admissible());
        assert!(!w("10").is_admissible());
        assert!(w("101").is_admissible());
        assert!(!w("001").is_admissible());
        assert!(!w("").is_admissible());
    }

    #[test]
    fn admissible_enumeration() {
        assert_eq!(enumerate_admissible(1).unwrap(), vec![w("1")]);
        assert_eq!(enumerate_admissible(2).unwrap(), vec![w("01"), w("11")]);
        let four = enumerate_admissible(4).unwrap();
        assert_eq!(four.len(), 4);
        assert!(four.iter().all(|x| x.component(2) == 1 && x.component(4) == 1));
        assert!(enumerate_admissible(0).is_err());
    }

    #[test]
    fn admissible_matches_exhaustive_filter() {
        for m in 1..=12 {
            let filtered: Vec<Word> =
                words_ending_in_one(m).into_iter().filter(Word::is_admissible).collect();
            let mut filtered = filtered;
            filtered.sort();
            let listed = enumerate_admissible(m).unwrap();
            assert_eq!(filtered, listed, "m = {m}");
            let expected = if m % 2 == 0 { 1 << (m / 2) } else { 1 << ((m - 1) / 2) };
            assert_eq!(listed.len(), expected, "m = {m}");
        }
    }

    #[test]
    fn i_m_has_the_right_size() {
        assert!(words_ending_in_one(0).is_empty());
        for m in 1..=10 {
            let all = words_ending_in_one(m);
            assert_eq!(all.len(), 1 << (m - 1));
            assert!(all.iter().all(Word::ends_in_one));
        }
    }

    #[test]
    fn deconcatenation_lists() {
        assert_eq!(w("1").deconcatenations(), vec![(w(""), w("1")), (w("1"), w(""))]);
        assert_eq!(w("01").deconcatenations(), vec![(w(""), w("01")), (w("0"), w("1")), (w("01"), w(""))]);
        assert_eq!(w("011").deconcatenations().len(), 4);
    }

    #[test]
    fn substitution_counts_from_the_right() {
        assert_eq!(w("1").substitute_ones(&[0]).unwrap(), w("0"));
        assert_eq!(w("1").substitute_ones(&[1]).unwrap(), w("1"));
        assert_eq!(w("0").substitute_ones(&[]).unwrap(), w("0"));
        assert_eq!(w("101").substitute_ones(&[0, 1]).unwrap(), w("100"));
        assert_eq!(w("101").substitute_ones(&[1, 0]).unwrap(), w("001"));
        assert!(matches!(w("101").substitute_ones(&[1]), Err(Error::SizeMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn x_set_examples() {
        assert_eq!(w("1").x_set().unwrap(), vec![w("")]);
        assert_eq!(w("01").x_set().unwrap(), vec![w("0"), w("1")]);
        assert_eq!(w("11").x_set().unwrap(), vec![w("1")]);
        assert!(w("10").x_set().is_err());
    }

    #[test]
    fn x_set_cardinality() {
        for m in 1..=8 {
            for i in words_ending_in_one(m) {
                let expected = 1usize << ((m - 1) - (i.length() - 1));
                assert_eq!(i.x_set().unwrap().len(), expected, "{i}");
            }
        }
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&w("1"), &w("1")), BTreeMap::from([(w("11"), 2)]));
        assert_eq!(shuffle(&w(""), &w("011")), BTreeMap::from([(w("011"), 1)]));
        assert_eq!(shuffle(&w("0"), &w("1")), BTreeMap::from([(w("01"), 1), (w("10"), 1)]));
    }

    #[test]
    fn iterated_shuffle_of_one() {
        let mut fact = 1u64;
        for n in 0..=8u64 {
            if n > 0 {
                fact *= n;
            }
            let p = shuffle_power(&w("1"), n as usize);
            assert_eq!(p, BTreeMap::from([(Word::ones(n as usize), fact)]));
        }
    }

    #[test]
    fn serialization_is_a_bit_string() {
        let x = w("011");
        assert_eq!(x.to_string(), "011");
        assert!("012".parse::<Word>().is_err());
        assert!(Word::new(vec![0, 2]).is_err());
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
    }

    proptest::proptest! {
        #[test]
        fn shuffle_multiplicity_is_binomial(
            u in proptest::collection::vec(0u8..2, 0..=6),
            v in proptest::collection::vec(0u8..2, 0..=6),
        ) {
            let (u, v) = (Word::new(u).unwrap(), Word::new(v).unwrap());
            let total: u64 = shuffle(&u, &v).values().sum();
            proptest::prop_assert_eq!(total, binom((u.weight() + v.weight()) as u64, u.weight() as u64));
            for s in shuffle(&u, &v).keys() {
                proptest::prop_assert_eq!(s.weight(), u.weight() + v.weight());
                proptest::prop_assert_eq!(s.length(), u.length() + v.length());
            }
        }

        #[test]
        fn substitution_preserves_weight(bits in proptest::collection::vec(0u8..2, 0..=10), seed in 0u64..1024) {
            let a = Word::new(bits).unwrap();
            let eps: Vec<u8> = (0..a.length()).map(|k| ((seed >> (k % 10)) & 1) as u8).collect();
            let s = a.substitute_ones(&eps).unwrap();
            proptest::prop_assert_eq!(s.weight(), a.weight());
            for k in 1..=a.weight() {
                if a.component(k) == 0 {
                    proptest::prop_assert_eq!(s.component(k), 0);
                }
            }
        }
    }
}
