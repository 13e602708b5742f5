//! Words in finitely generated groups.
//!
//! Words are kept freely reduced. Generators are numbered from zero and
//! written `a`..`z`; an uppercase letter is the inverse of the matching
//! lowercase generator, so `abAB` is the commutator of `a` and `b`. The empty
//! word prints as `1`.
//!
//! Conjugacy classes of a free group are the cyclic-rotation classes of
//! cyclically reduced words, which is what [`canonical_cyclic`] and
//! [`enumerate_classes`] compute.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest rank expressible in the one-letter-per-generator text syntax.
pub const MAX_TEXT_RANK: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("invalid letter {0:?} in word")]
    InvalidLetter(char),
    #[error("relation {0} is empty after reduction")]
    EmptyRelation(usize),
    #[error("class list is empty: length bound must be at least 1")]
    EmptyClassList,
    #[error("rank must be at least 1")]
    ZeroRank,
}

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub const fn gen(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub const fn inv(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    pub const fn inverted(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }

    /// Position in the fixed order a < A < b < B < ...
    pub const fn key(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub fn from_key(key: usize) -> Self {
        Letter::new(key / 2, key % 2 == 1)
    }

    pub fn to_char(self) -> char {
        assert!(self.generator < MAX_TEXT_RANK, "generator {} has no letter", self.generator);
        let c = (b'a' + self.generator as u8) as char;
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn from_char(c: char) -> Result<Self, GroupError> {
        match c {
            'a'..='z' => Ok(Letter::gen(c as usize - 'a' as usize)),
            'A'..='Z' => Ok(Letter::inv(c as usize - 'A' as usize)),
            _ => Err(GroupError::InvalidLetter(c)),
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A freely reduced word.
///
/// Ordering is shortlex: shorter words first, then lexicographic in the
/// letter order a < A < b < B < ...
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn generator(index: usize) -> Self {
        Word { letters: vec![Letter::gen(index)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Smallest rank whose alphabet contains every letter of the word.
    pub fn min_rank(&self) -> usize {
        self.letters.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), GroupError> {
        match self.letters.iter().find(|l| l.generator >= rank) {
            Some(l) => Err(GroupError::GeneratorOutOfRange { index: l.generator, rank }),
            None => Ok(()),
        }
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            if letters.last() == Some(&l.inverted()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { letters }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Word::identity(), |acc, _| acc.concat(self))
    }

    pub fn conjugate_by(&self, u: &Word) -> Self {
        u.concat(self).concat(&u.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.letters.len() == 1 || f != l.inverted(),
            _ => true,
        }
    }

    /// Strips matching first/last letter pairs.
    pub fn cyclic_reduce(&self) -> Self {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo] == self.letters[hi - 1].inverted() {
            lo += 1;
            hi -= 1;
        }
        Word { letters: self.letters[lo..hi].to_vec() }
    }

    /// The rotation starting at `start`.
    pub fn rotate(&self, start: usize) -> Self {
        let n = self.letters.len();
        if n == 0 {
            return self.clone();
        }
        let start = start % n;
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(&self.letters[start..]);
        letters.extend_from_slice(&self.letters[..start]);
        Word { letters }
    }
}

/// Freely reduces `letters`, rejecting generators outside `rank`.
pub fn reduce(letters: &[Letter], rank: usize) -> Result<Word, GroupError> {
    if let Some(l) = letters.iter().find(|l| l.generator >= rank) {
        return Err(GroupError::GeneratorOutOfRange { index: l.generator, rank });
    }
    Ok(Word::from_letters(letters.iter().copied()))
}

/// Canonical representative of the conjugacy class of `w` in the free group:
/// the least rotation of its cyclic reduction.
pub fn canonical_cyclic(w: &Word) -> Word {
    let core = w.cyclic_reduce();
    let n = core.len();
    if n <= 1 {
        return core;
    }
    let at = |start: usize, i: usize| core.letters[(start + i) % n];
    let mut best = 0;
    for start in 1..n {
        for i in 0..n {
            match at(start, i).cmp(&at(best, i)) {
                Ordering::Less => {
                    best = start;
                    break;
                }
                Ordering::Greater => break,
                Ordering::Equal => {}
            }
        }
    }
    core.rotate(best)
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::identity());
        }
        let letters = s.chars().map(Letter::from_char).collect::<Result<Vec<_>, _>>()?;
        Ok(Word::from_letters(letters))
    }
}

/// Parses a comma-separated word list such as `a,ab,abAB`.
pub fn parse_word_list(s: &str) -> Result<Vec<Word>, GroupError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Generators plus relations. Relations are stored, never used to solve the
/// word problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    n_generators: usize,
    relations: Vec<Word>,
}

impl Presentation {
    pub fn new(n_generators: usize, relations: Vec<Word>) -> Result<Self, GroupError> {
        for (i, r) in relations.iter().enumerate() {
            r.check_rank(n_generators)?;
            if r.is_empty() {
                return Err(GroupError::EmptyRelation(i));
            }
        }
        Ok(Presentation { n_generators, relations })
    }

    pub fn free(n_generators: usize) -> Self {
        Presentation { n_generators, relations: Vec::new() }
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &[Word] {
        &self.relations
    }
}

/// Truncation of the set of nontrivial conjugacy classes to words of length
/// at most `max_length`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyClassList {
    representatives: Vec<Word>,
    max_length: usize,
}

impl ConjugacyClassList {
    /// Wraps an explicit list; each word is canonicalized and duplicates
    /// (up to rotation) are dropped, keeping first occurrence order.
    pub fn from_words(words: &[Word]) -> Result<Self, GroupError> {
        let mut reps: Vec<Word> = Vec::new();
        for w in words {
            let c = canonical_cyclic(w);
            if !c.is_empty() && !reps.contains(&c) {
                reps.push(c);
            }
        }
        if reps.is_empty() {
            return Err(GroupError::EmptyClassList);
        }
        let max_length = reps.iter().map(Word::len).max().unwrap_or(0);
        Ok(ConjugacyClassList { representatives: reps, max_length })
    }

    pub fn representatives(&self) -> &[Word] {
        &self.representatives
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.representatives.iter()
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        let c = canonical_cyclic(w);
        self.representatives.iter().position(|r| *r == c)
    }
}

/// All nontrivial classes of the free group of `rank` with cyclic length at
/// most `max_length`, in shortlex order.
pub fn enumerate_classes(rank: usize, max_length: usize) -> Result<ConjugacyClassList, GroupError> {
    enumerate_classes_with(rank, max_length, false)
}

/// As [`enumerate_classes`]; with `fold_inverses` a class and its inverse
/// class are represented once, by the smaller canonical word.
pub fn enumerate_classes_with(
    rank: usize,
    max_length: usize,
    fold_inverses: bool,
) -> Result<ConjugacyClassList, GroupError> {
    if rank == 0 {
        return Err(GroupError::ZeroRank);
    }
    if max_length == 0 {
        return Err(GroupError::EmptyClassList);
    }
    let mut reps = Vec::new();
    let mut stack: Vec<Letter> = Vec::with_capacity(max_length);
    collect_canonical(rank, max_length, &mut stack, &mut reps);
    if fold_inverses {
        reps.retain(|w| *w <= canonical_cyclic(&w.inverse()));
    }
    reps.sort();
    Ok(ConjugacyClassList { representatives: reps, max_length })
}

fn collect_canonical(rank: usize, max_length: usize, stack: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if !stack.is_empty() {
        let w = Word { letters: stack.clone() };
        if w.is_cyclically_reduced() && canonical_cyclic(&w) == w {
            out.push(w);
        }
    }
    if stack.len() == max_length {
        return;
    }
    for key in 0..2 * rank {
        let l = Letter::from_key(key);
        if stack.last() == Some(&l.inverted()) {
            continue;
        }
        stack.push(l);
        collect_canonical(rank, max_length, stack, out);
        stack.pop();
    }
}
