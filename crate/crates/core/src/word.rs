//! Words over a finite alphabet with an involution and an optional letter order.
//!
//! The default alphabet is the signed alphabet `{+, -}` used to code zigzags:
//! `+` is a forward arc, `-` a backward arc, and the involution swaps them.
//! Words are ordered by the Higman (subword) embedding.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

pub type Letter = u8;

pub const PLUS: Letter = 0;
pub const MINUS: Letter = 1;

/// A finite alphabet with a self-inverse letter map and a partial order on letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
    involution: Vec<Letter>,
    // row-major `leq[a * n + b]`, `None` for the discrete order
    order: Option<Vec<bool>>,
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet{:?}", self.names)
    }
}

impl Alphabet {
    /// The `{+, -}` alphabet, shared.
    pub fn signed() -> Arc<Alphabet> {
        static SIGNED: OnceLock<Arc<Alphabet>> = OnceLock::new();
        SIGNED
            .get_or_init(|| {
                Arc::new(Alphabet {
                    names: vec!["+".into(), "-".into()],
                    involution: vec![MINUS, PLUS],
                    order: None,
                })
            })
            .clone()
    }

    /// Discretely ordered alphabet with the identity involution.
    pub fn plain<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Alphabet>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let involution = (0..names.len()).map(|i| i as Letter).collect();
        Self::new(names, involution, None)
    }

    /// General constructor. `order` lists strict pairs `(a, b)` meaning `a < b`;
    /// its reflexive-transitive closure must be antisymmetric.
    pub fn new(
        names: Vec<String>,
        involution: Vec<Letter>,
        order: Option<Vec<(Letter, Letter)>>,
    ) -> Result<Arc<Alphabet>> {
        let n = names.len();
        if n == 0 || n > Letter::MAX as usize {
            return Err(Error::InvalidAlphabet(format!("{n} letters")));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {a}")));
            }
        }
        if involution.len() != n
            || involution
                .iter()
                .enumerate()
                .any(|(a, &b)| b as usize >= n || involution[b as usize] as usize != a)
        {
            return Err(Error::InvalidAlphabet(
                "involution is not self-inverse".into(),
            ));
        }
        let order = match order {
            None => None,
            Some(pairs) if pairs.is_empty() => None,
            Some(pairs) => {
                let mut leq = vec![false; n * n];
                for a in 0..n {
                    leq[a * n + a] = true;
                }
                for (a, b) in pairs {
                    if a as usize >= n || b as usize >= n {
                        return Err(Error::InvalidAlphabet("order pair out of range".into()));
                    }
                    leq[a as usize * n + b as usize] = true;
                }
                for k in 0..n {
                    for i in 0..n {
                        if leq[i * n + k] {
                            for j in 0..n {
                                if leq[k * n + j] {
                                    leq[i * n + j] = true;
                                }
                            }
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        if i != j && leq[i * n + j] && leq[j * n + i] {
                            return Err(Error::InvalidAlphabet("letter order has a cycle".into()));
                        }
                    }
                }
                Some(leq)
            }
        };
        Ok(Arc::new(Alphabet {
            names,
            involution,
            order,
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_signed(&self) -> bool {
        self.names.len() == 2
            && self.names[0] == "+"
            && self.names[1] == "-"
            && self.involution == [MINUS, PLUS]
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.names.len() as Letter
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        if self.is_signed() && name == "−" {
            return Ok(MINUS);
        }
        self.names
            .iter()
            .position(|s| s == name)
            .map(|i| i as Letter)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn invert(&self, a: Letter) -> Letter {
        self.involution[a as usize]
    }

    pub fn has_trivial_order(&self) -> bool {
        self.order.is_none()
    }

    pub fn letter_leq(&self, a: Letter, b: Letter) -> bool {
        match &self.order {
            None => a == b,
            Some(leq) => leq[a as usize * self.names.len() + b as usize],
        }
    }

    /// Letters strictly above `a`.
    pub fn letters_above(&self, a: Letter) -> impl Iterator<Item = Letter> + '_ {
        self.letters()
            .filter(move |&b| b != a && self.letter_leq(a, b))
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&a| a as usize >= self.names.len()) {
            Some(a) => Err(Error::UnknownLetter(a.to_string())),
            None => Ok(()),
        }
    }

    /// Higman embedding test. The left-greedy scan is exact for any letter
    /// relation: matching each letter of `u` at the earliest admissible position
    /// never rules out a later match.
    pub fn subword_leq(&self, u: &Word, v: &Word) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.embeds(u, v))
    }

    pub(crate) fn embeds(&self, u: &Word, v: &Word) -> bool {
        if u.len() > v.len() {
            return false;
        }
        let mut rest = v.0.iter();
        'outer: for &a in &u.0 {
            for &b in rest.by_ref() {
                if self.letter_leq(a, b) {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Reverse the word and invert every letter.
    pub fn involute(&self, u: &Word) -> Word {
        Word(u.0.iter().rev().map(|&a| self.invert(a)).collect())
    }

    /// Parse a word. Every letter name must be a single character, or the word
    /// must be given as whitespace separated names.
    pub fn parse(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "□" {
            return Ok(Word::empty());
        }
        if s.contains(char::is_whitespace) {
            return s
                .split_whitespace()
                .map(|t| self.letter(t))
                .collect::<Result<Vec<_>>>()
                .map(Word);
        }
        let mut buf = [0u8; 4];
        s.chars()
            .map(|c| self.letter(c.encode_utf8(&mut buf)))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn word_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Word> {
        names
            .iter()
            .map(|s| self.letter(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    fn single_char_names(&self) -> bool {
        self.names.iter().all(|s| s.chars().count() == 1)
    }

    pub fn format(&self, w: &Word) -> String {
        if self.single_char_names() {
            w.0.iter().map(|&a| self.name(a)).collect()
        } else {
            w.0.iter()
                .map(|&a| self.name(a))
                .collect::<Vec<_>>()
                .join(" ")
        }
    }

    /// JSON form of a word: a string for single-character alphabets, otherwise
    /// an array of letter names.
    pub fn word_to_json(&self, w: &Word) -> serde_json::Value {
        if self.single_char_names() {
            serde_json::Value::String(self.format(w))
        } else {
            serde_json::Value::Array(w.0.iter().map(|&a| self.name(a).into()).collect())
        }
    }

    pub fn word_from_json(&self, v: &serde_json::Value) -> Result<Word> {
        match v {
            serde_json::Value::String(s) => self.parse(s),
            serde_json::Value::Array(items) => items
                .iter()
                .map(|x| {
                    x.as_str()
                        .ok_or_else(|| Error::Malformed("letter names must be strings".into()))
                        .and_then(|s| self.letter(s))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word),
            _ => Err(Error::Malformed("word must be a string or an array".into())),
        }
    }
}

/// A finite word. Ordered length first, then lexicographically by letter index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub(crate) Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    /// Shorthand for signed words, panics on any character other than `+`, `-`, `−`.
    pub fn signed(s: &str) -> Word {
        Alphabet::signed().parse(s).expect("signed word")
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, a: Letter) {
        self.0.push(a);
    }

    /// All prefixes including the empty word and the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.len()).map(move |i| Word(self.0[..i].to_vec()))
    }

    pub fn split_at(&self, i: usize) -> (Word, Word) {
        (Word(self.0[..i].to_vec()), Word(self.0[i..].to_vec()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "□");
        }
        if self.0.iter().all(|&a| a <= MINUS) {
            for &a in &self.0 {
                f.write_str(if a == PLUS { "+" } else { "-" })?;
            }
            Ok(())
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

/// Subword embedding under the discrete letter order.
pub fn subword_leq(u: &Word, v: &Word) -> bool {
    if u.len() > v.len() {
        return false;
    }
    let mut rest = v.0.iter();
    u.0.iter().all(|a| rest.any(|b| a == b))
}

/// All words of length exactly `len` over `k` letters, in lexicographic order.
pub fn words_of_length(k: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = k.checked_pow(len as u32).unwrap_or(0);
    (0..total).map(move |mut idx| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = (idx % k) as Letter;
            idx /= k;
        }
        Word(v)
    })
}

/// All words of length at most `max_len` over `k` letters, shortlex order.
pub fn words_up_to(k: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| words_of_length(k, len))
}
