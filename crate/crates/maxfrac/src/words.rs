//! Finite words over the map alphabet `{1, ..., m}`.
//!
//! Words index compositions of the system's maps: the word `w = w1 w2 ... wn`
//! selects `f_w = f_{w1} o f_{w2} o ... o f_{wn}`, so the *last* letter acts
//! first on a point. The empty word (written `λ`) selects the identity.
//! Letters are stored 0-based internally; `Display` prints them 1-based to
//! match the usual indexing of the maps.
//!
//! Enumeration is eager up to a hard cap of `m^n <= 2^24` words; operations
//! needing deeper levels stream words through [`for_each_word`] (same cap,
//! but no materialized vector) or expand level by level.

use crate::error::{Error, Result};
use serde::{Serialize, Serializer};
use std::fmt;

/// Hard cap on the number of words a single enumeration may touch.
pub const WORD_ENUM_CAP: usize = 1 << 24;

/// A finite word over `{1, ..., m}`; the alphabet size is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    /// The empty word `λ`.
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Builds a word from 0-based letters, validating against alphabet size `m`.
    pub fn from_letters(letters: &[usize], m: usize) -> Result<Self> {
        if m == 0 || m > 255 {
            return Err(Error::invalid("alphabet size must be in 1..=255"));
        }
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l >= m {
                return Err(Error::invalid(format!(
                    "letter {} out of range for alphabet of size {m}",
                    l + 1
                )));
            }
            out.push(l as u8);
        }
        Ok(Word { letters: out })
    }

    /// Parses a string of 1-based digit letters, e.g. `"12"`; `""` is `λ`.
    /// Only alphabets up to size 9 can be written this way.
    pub fn parse_digits(s: &str, m: usize) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::invalid(format!("bad word letter {ch:?}")))?;
            if d == 0 {
                return Err(Error::invalid("word letters are 1-based"));
            }
            letters.push((d - 1) as usize);
        }
        Word::from_letters(&letters, m)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// 0-based letters.
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "λ");
        }
        if self.letters.iter().all(|&l| l < 9) {
            for &l in &self.letters {
                write!(f, "{}", l + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.letters.iter().map(|&l| (l as usize + 1).to_string()).collect();
            write!(f, "{}", parts.join("-"))
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Number of words of length `n` over `m` letters, capped.
pub(crate) fn level_count(m: usize, n: usize) -> Result<usize> {
    let mut count: u128 = 1;
    for _ in 0..n {
        count = count.saturating_mul(m as u128);
        if count > WORD_ENUM_CAP as u128 {
            return Err(Error::CapExceeded {
                what: "word enumeration",
                limit: WORD_ENUM_CAP,
                requested: count.min(usize::MAX as u128) as usize,
            });
        }
    }
    Ok(count as usize)
}

/// All words of length `n` over `{1, ..., m}`, in lexicographic order.
/// `n = 0` yields exactly the empty word. Errors when `m^n` exceeds the cap.
pub fn enumerate_words(m: usize, n: usize) -> Result<Vec<Word>> {
    if m == 0 || m > 255 {
        return Err(Error::invalid("alphabet size must be in 1..=255"));
    }
    let count = level_count(m, n)?;
    let mut out = Vec::with_capacity(count);
    for_each_word(m, n, |letters| {
        out.push(Word { letters: letters.to_vec() });
    })?;
    Ok(out)
}

/// All words of length `< p` (the proper prefix levels, empty word included),
/// ordered by length and lexicographically within each length. `p >= 1`.
pub fn enumerate_prefix_words(m: usize, p: usize) -> Result<Vec<Word>> {
    if p == 0 {
        return Err(Error::invalid("prefix enumeration needs p >= 1"));
    }
    let mut out = Vec::new();
    for k in 0..p {
        out.extend(enumerate_words(m, k)?);
    }
    Ok(out)
}

/// Streams the words of length `n` over `{1, ..., m}` in lexicographic
/// order, invoking `visit` with the 0-based letter slice of each. Subject to
/// the same cap as [`enumerate_words`], but allocates only one buffer.
pub fn for_each_word<F: FnMut(&[u8])>(m: usize, n: usize, mut visit: F) -> Result<()> {
    if m == 0 || m > 255 {
        return Err(Error::invalid("alphabet size must be in 1..=255"));
    }
    level_count(m, n)?;
    let mut letters = vec![0u8; n];
    loop {
        visit(&letters);
        // advance the least significant (last) position: lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            letters[i] += 1;
            if (letters[i] as usize) < m {
                break;
            }
            letters[i] = 0;
        }
    }
}

/// Concatenation `ab` (so `compose(ab) = compose(a) o compose(b)`).
pub fn concat(a: &Word, b: &Word) -> Word {
    let mut letters = Vec::with_capacity(a.len() + b.len());
    letters.extend_from_slice(a.letters());
    letters.extend_from_slice(b.letters());
    Word { letters }
}

/// Probability of a word: the product of the letter probabilities taken
/// left to right. The empty word has probability 1 (empty product).
pub fn word_probability(probs: &[f64], w: &Word) -> Result<f64> {
    let mut p = 1.0;
    for &l in w.letters() {
        let pl = *probs.get(l as usize).ok_or_else(|| {
            Error::invalid(format!(
                "word letter {} exceeds the {} available probabilities",
                l as usize + 1,
                probs.len()
            ))
        })?;
        p *= pl;
    }
    Ok(p)
}

/// The word of rank `rank` (0-based) in the lexicographic order of level `n`
/// over `m` letters: the base-`m` digits of the rank, most significant first.
pub(crate) fn word_from_rank(m: usize, n: usize, rank: usize) -> Word {
    let mut letters = vec![0u8; n];
    let mut r = rank;
    for i in (0..n).rev() {
        letters[i] = (r % m) as u8;
        r /= m;
    }
    debug_assert_eq!(r, 0, "rank out of range");
    Word { letters }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric;

    #[test]
    fn enumerate_level_zero_is_the_empty_word() {
        let words = enumerate_words(3, 0).unwrap();
        assert_eq!(words, vec![Word::empty()]);
        assert_eq!(words[0].to_string(), "λ");
    }

    #[test]
    fn enumerate_levels_in_lexicographic_order() {
        let l1 = enumerate_words(2, 1).unwrap();
        assert_eq!(l1.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["1", "2"]);
        let l2 = enumerate_words(2, 2).unwrap();
        assert_eq!(
            l2.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            ["11", "12", "21", "22"]
        );
        assert_eq!(enumerate_words(3, 3).unwrap().len(), 27);
    }

    #[test]
    fn prefix_levels_include_the_empty_word() {
        let v3 = enumerate_prefix_words(2, 3).unwrap();
        assert_eq!(
            v3.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            ["λ", "1", "2", "11", "12", "21", "22"]
        );
        let v1 = enumerate_prefix_words(2, 1).unwrap();
        assert_eq!(v1, vec![Word::empty()]);
        assert!(enumerate_prefix_words(2, 0).is_err());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        // 2^25 exceeds the cap
        assert!(enumerate_words(2, 25).is_err());
        assert!(for_each_word(2, 25, |_| {}).is_err());
        // boundary: 2^24 is allowed
        let mut n = 0usize;
        for_each_word(2, 24, |_| n += 1).unwrap();
        assert_eq!(n, 1 << 24);
    }

    #[test]
    fn concat_examples() {
        let a = Word::parse_digits("12", 2).unwrap();
        let b = Word::parse_digits("21", 2).unwrap();
        assert_eq!(concat(&a, &b).to_string(), "1221");
        assert_eq!(concat(&Word::empty(), &a), a);
        assert_eq!(concat(&a, &Word::empty()), a);
    }

    #[test]
    fn word_probability_examples() {
        let probs = [0.3, 0.7];
        assert_eq!(word_probability(&probs, &Word::empty()).unwrap(), 1.0);
        let w21 = Word::parse_digits("21", 2).unwrap();
        // p2 * p1 = 0.7 * 0.3
        assert!((word_probability(&probs, &w21).unwrap() - 0.21).abs() < 1e-16);
        let w = Word::from_letters(&[1], 2).unwrap();
        let err = word_probability(&[0.25], &w).unwrap_err();
        assert!(err.to_string().contains("letter"));
    }

    #[test]
    fn level_probabilities_sum_to_one() {
        let probs = [0.3, 0.2, 0.5];
        let total = numeric::sum(
            enumerate_words(3, 3)
                .unwrap()
                .iter()
                .map(|w| word_probability(&probs, w).unwrap()),
        );
        assert!((total - 1.0).abs() < 1e-12, "total = {total}");
    }

    #[test]
    fn rank_mapping_matches_enumeration() {
        let words = enumerate_words(3, 4).unwrap();
        for (r, w) in words.iter().enumerate() {
            assert_eq!(&word_from_rank(3, 4, r), w);
        }
    }

    #[test]
    fn letters_are_validated() {
        assert!(Word::from_letters(&[0, 2], 2).is_err());
        assert!(Word::parse_digits("103", 3).is_err());
        assert!(Word::parse_digits("x", 3).is_err());
        assert!(enumerate_words(0, 1).is_err());
    }
}
