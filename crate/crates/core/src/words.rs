//! Ordered alphabets, words and scattered-subword counting.
//!
//! A [`Word`] stores letter indices into an [`OrderedAlphabet`], so comparing
//! two words with `Ord` is the lexicographic order induced by the alphabet.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the length of words produced by exhaustive enumeration.
pub const DEFAULT_ENUM_BOUND: usize = 14;

/// Rendering of the empty word.
pub const EMPTY_WORD: &str = "λ";

/// A finite alphabet `a_1 < a_2 < ... < a_s` of single-character letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<char>", into = "Vec<char>")]
pub struct OrderedAlphabet {
    letters: Vec<char>,
}

impl OrderedAlphabet {
    pub fn new(letters: Vec<char>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        if letters.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet("too many letters".into()));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {c:?}")));
            }
            if c.is_whitespace() || matches!(c, ',' | ';' | '(' | ')' | '^') {
                return Err(Error::InvalidAlphabet(format!("reserved symbol {c:?}")));
            }
        }
        Ok(Self { letters })
    }

    /// Parses a comma-separated letter list such as `a,b,c`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split(',') {
            let token = token.trim();
            let mut chars = token.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => letters.push(c),
                _ => {
                    return Err(Error::InvalidAlphabet(format!(
                        "letter {token:?} is not a single symbol"
                    )))
                }
            }
        }
        Self::new(letters)
    }

    /// The alphabet `a < b < ...` with `size` letters.
    pub fn latin(size: usize) -> Result<Self> {
        if size == 0 || size > 26 {
            return Err(Error::InvalidAlphabet(format!("unsupported size {size}")));
        }
        Self::new((b'a'..b'a' + size as u8).map(char::from).collect())
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn letter(&self, index: u8) -> char {
        self.letters[index as usize]
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        self.letters.iter().position(|&l| l == c).map(|i| i as u8)
    }

    /// Parses letters written without separators. `""` and `λ` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == EMPTY_WORD && self.index_of('λ').is_none() {
            return Ok(Word::empty());
        }
        text.chars()
            .map(|c| self.index_of(c).ok_or(Error::UnknownLetter(c)))
            .collect::<Result<Vec<_>>>()
            .map(Word::from_indices)
    }

    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return EMPTY_WORD.to_string();
        }
        word.indices().iter().map(|&i| self.letter(i)).collect()
    }

    pub(crate) fn check_word(&self, word: &Word) -> Result<()> {
        match word.indices().iter().find(|&&i| i as usize >= self.size()) {
            Some(&i) => Err(Error::InvalidAlphabet(format!(
                "letter index {i} outside alphabet of size {}",
                self.size()
            ))),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<char>> for OrderedAlphabet {
    type Error = Error;

    fn try_from(letters: Vec<char>) -> Result<Self> {
        Self::new(letters)
    }
}

impl From<OrderedAlphabet> for Vec<char> {
    fn from(alphabet: OrderedAlphabet) -> Self {
        alphabet.letters
    }
}

impl fmt::Display for OrderedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(char::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A finite word, stored as letter indices (0 is the least letter).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_indices(indices: Vec<u8>) -> Self {
        Self(indices)
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The prefix of length `len`.
    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    /// The suffix of length `len`.
    pub fn suffix(&self, len: usize) -> Word {
        Word(self.0[self.0.len() - len..].to_vec())
    }

    pub fn power(&self, m: usize) -> Word {
        word_power(self, m)
    }
}

/// Letter counts `(|w|_{a_1}, ..., |w|_{a_s})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParikhVector(pub Vec<usize>);

impl ParikhVector {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

/// Number of occurrences of `v` as a scattered subword of `w`, `|w|_v`.
///
/// `counts[k]` holds the number of embeddings of the first `k` letters of `v`
/// into the part of `w` read so far.
pub fn count_subword(w: &Word, v: &Word) -> BigUint {
    let pattern = v.indices();
    let mut counts = vec![BigUint::zero(); pattern.len() + 1];
    counts[0] = BigUint::one();
    for &x in w.indices() {
        for k in (1..=pattern.len()).rev() {
            if pattern[k - 1] == x {
                let prev = counts[k - 1].clone();
                counts[k] += prev;
            }
        }
    }
    counts.pop().unwrap_or_else(BigUint::one)
}

pub fn parikh_vector(alphabet: &OrderedAlphabet, w: &Word) -> ParikhVector {
    let mut counts = vec![0usize; alphabet.size()];
    for &i in w.indices() {
        counts[i as usize] += 1;
    }
    ParikhVector(counts)
}

/// `w` concatenated `m` times; `m = 0` yields the empty word.
pub fn word_power(w: &Word, m: usize) -> Word {
    Word(w.0.repeat(m))
}

/// True iff no factor of `w` has the form `xx` with `x` nonempty.
pub fn is_square_free(w: &Word) -> bool {
    let s = w.indices();
    (0..s.len()).all(|start| {
        (1..=(s.len() - start) / 2)
            .all(|half| s[start..start + half] != s[start + half..start + 2 * half])
    })
}

/// The multinomial coefficient `(Σ p_i)! / Π p_i!`.
pub fn multinomial(p: &ParikhVector) -> BigUint {
    let mut result = BigUint::one();
    let mut placed = 0u64;
    for &c in p.counts() {
        for k in 1..=c as u64 {
            placed += 1;
            result = result * placed / k;
        }
    }
    result
}

/// All words with Parikh vector `p`, in lexicographic order.
pub fn enumerate_words(
    alphabet: &OrderedAlphabet,
    p: &ParikhVector,
    bound: usize,
) -> Result<Vec<Word>> {
    if p.counts().len() != alphabet.size() {
        return Err(Error::DimensionMismatch {
            expected: alphabet.size(),
            found: p.counts().len(),
        });
    }
    let total = p.total();
    if total > bound {
        return Err(Error::BoundExceeded {
            required: total,
            bound,
        });
    }
    let mut current: Vec<u8> = p
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i as u8, c))
        .collect();
    let mut out = vec![Word(current.clone())];
    while next_permutation(&mut current) {
        out.push(Word(current.clone()));
    }
    Ok(out)
}

/// Advances `s` to the next lexicographic arrangement; false once the last is reached.
fn next_permutation(s: &mut [u8]) -> bool {
    if s.len() < 2 {
        return false;
    }
    let mut i = s.len() - 1;
    while i > 0 && s[i - 1] >= s[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = s.len() - 1;
    while s[j] <= s[i - 1] {
        j -= 1;
    }
    s.swap(i - 1, j);
    s[i..].reverse();
    true
}

/// All `s^len` words of length `len`, in lexicographic order.
pub fn words_of_length(alphabet: &OrderedAlphabet, len: usize) -> Vec<Word> {
    let s = alphabet.size() as u8;
    let mut out = Vec::new();
    let mut current = vec![0u8; len];
    loop {
        out.push(Word(current.clone()));
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < s {
                break;
            }
            current[pos] = 0;
        }
    }
}

/// All words of length `0..=max_len`, shortest first, lexicographic within a length.
pub fn words_up_to(alphabet: &OrderedAlphabet, max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|len| words_of_length(alphabet, len))
        .collect()
}
