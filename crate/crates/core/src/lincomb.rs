//! Finite formal linear combinations with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::trees::{RootedTree, TreeError, TreeParser};
use crate::words::{Word, WordError, WordParser};

pub type Coefficient = BigRational;

pub fn coeff(n: i64) -> Coefficient {
    BigRational::from_integer(BigInt::from(n))
}

/// A sum `Σ c_k · e_k` over basis elements `e_k`. Zero coefficients are never
/// stored and iteration follows the basis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Coefficient>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, Coefficient::one())
    }

    pub fn term(key: K, c: Coefficient) -> Self {
        let mut out = Self::zero();
        out.add_term(key, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of basis elements with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: K, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<K>, c: &Coefficient) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn get(&self, key: &K) -> Coefficient {
        self.terms.get(key).cloned().unwrap_or_else(Coefficient::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Coefficient)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn scalar_mul(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LinComb { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn coeff_sum(&self) -> Coefficient {
        self.terms.values().fold(Coefficient::zero(), |acc, v| acc + v)
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<L: Ord + Clone, F: FnMut(&K) -> LinComb<L>>(&self, mut f: F) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }

    /// Applies a bijection on basis elements.
    pub fn map_basis<L: Ord + Clone, F: FnMut(&K) -> L>(&self, mut f: F) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Coefficient)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Coefficient)>>(iter: I) -> Self {
        let mut out = LinComb::zero();
        for (k, c) in iter {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + Clone> IntoIterator for LinComb<K> {
    type Item = (K, Coefficient);
    type IntoIter = std::collections::btree_map::IntoIter<K, Coefficient>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<K: Ord + Clone> AddAssign<&LinComb<K>> for LinComb<K> {
    fn add_assign(&mut self, rhs: &LinComb<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), v.clone());
        }
    }
}

impl<K: Ord + Clone> SubAssign<&LinComb<K>> for LinComb<K> {
    fn sub_assign(&mut self, rhs: &LinComb<K>) {
        for (k, v) in &rhs.terms {
            self.add_term(k.clone(), -v);
        }
    }
}

impl<K: Ord + Clone> Add for &LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Add for LinComb<K> {
    type Output = LinComb<K>;
    fn add(mut self, rhs: LinComb<K>) -> LinComb<K> {
        self += &rhs;
        self
    }
}

impl<K: Ord + Clone> Sub for &LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for LinComb<K> {
    type Output = LinComb<K>;
    fn sub(mut self, rhs: LinComb<K>) -> LinComb<K> {
        self -= &rhs;
        self
    }
}

impl<K: Ord + Clone> Neg for &LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        LinComb { terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect() }
    }
}

impl<K: Ord + Clone> Neg for LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        -&self
    }
}

/// `3*(1 (2)) - (2 (1))`; non-integer coefficients print as `p/q*`.
impl<K: Ord + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

/// Serialised as a list of `{"coeff": "p/q", "basis": "..."}` in basis order.
impl<K: Ord + fmt::Display> Serialize for LinComb<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            coeff: String,
            basis: String,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&Term { coeff: c.to_string(), basis: k.to_string() })?;
        }
        seq.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinCombError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("combination mixes trees and words (byte {offset})")]
    MixedBasis { offset: usize },
}

/// A parsed combination over either basis kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyComb {
    Trees(LinComb<RootedTree>),
    Words(LinComb<Word>),
}

/// Parses `term (('+'|'-') term)*` with `term := [integer '*'] tree-or-word`.
/// Spaces around the signs are optional. Coefficients may also be written
/// `p/q`.
pub fn parse_lincomb(text: &str) -> Result<AnyComb, LinCombError> {
    let src = text.as_bytes();
    let mut pos = 0usize;
    let mut trees = LinComb::<RootedTree>::zero();
    let mut words = LinComb::<Word>::zero();
    let mut kind: Option<bool> = None; // Some(true) = trees
    let skip_spaces = |pos: &mut usize| {
        while src.get(*pos) == Some(&b' ') {
            *pos += 1;
        }
    };
    let syntax = |offset: usize, message: &str| LinCombError::Syntax {
        offset,
        message: message.to_string(),
    };

    skip_spaces(&mut pos);
    if src[pos..] == *b"0" {
        return Ok(AnyComb::Trees(trees));
    }
    let mut first = true;
    loop {
        skip_spaces(&mut pos);
        let mut sign = 1i64;
        match src.get(pos) {
            Some(b'+') if !first => pos += 1,
            Some(b'-') => {
                sign = -1;
                pos += 1;
            }
            None if !first => break,
            _ if first => {}
            _ => return Err(syntax(pos, "expected `+` or `-`")),
        }
        first = false;
        skip_spaces(&mut pos);
        let mut c = coeff(sign);
        if matches!(src.get(pos), Some(b'0'..=b'9')) {
            let start = pos;
            while matches!(src.get(pos), Some(b'0'..=b'9' | b'/')) {
                pos += 1;
            }
            let lit = std::str::from_utf8(&src[start..pos]).expect("ascii");
            let value: BigRational = lit.parse().map_err(|_| syntax(start, "bad coefficient"))?;
            c *= value;
            if src.get(pos) != Some(&b'*') {
                return Err(syntax(pos, "expected `*` after coefficient"));
            }
            pos += 1;
        }
        let start = pos;
        let mut wp = WordParser::new(src, pos);
        let (is_tree, parsed_word) = match wp.word() {
            Ok(w) => (false, Some((w, wp.pos))),
            Err(word_err) => {
                if src.get(pos) != Some(&b'(') {
                    return Err(word_err.into());
                }
                (true, None)
            }
        };
        if kind.is_some_and(|k| k != is_tree) {
            return Err(LinCombError::MixedBasis { offset: start });
        }
        kind = Some(is_tree);
        match parsed_word {
            Some((w, end)) => {
                pos = end;
                words.add_term(w, c);
            }
            None => {
                let mut p = TreeParser::new(src, pos);
                let raw = p.tree()?;
                pos = p.pos;
                trees.add_term(crate::trees::canonicalize(raw), c);
            }
        }
    }
    Ok(match kind {
        Some(false) => AnyComb::Words(words),
        _ => AnyComb::Trees(trees),
    })
}
