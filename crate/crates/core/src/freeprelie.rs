//! The free pre-Lie algebra on a set of generators.
//!
//! Its basis is the set of rooted trees labelled by generators, up to
//! label-preserving isomorphism. The product `a ⋆ b` grafts the root of `b`
//! onto every vertex of `a`; isomorphic outcomes add up.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lincomb::{Coefficient, LinComb};
use crate::trees::{gen_trees_by_weight, graft_product, Label, RootedTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeError {
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("label {0} is not a generator")]
    NotAGenerator(Label),
    #[error("weight {0} exceeds the enumeration limit of 8")]
    WeightTooLarge(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A sorted, duplicate-free list of generator symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet(Vec<Label>);

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, FreeError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut labels = symbols
            .into_iter()
            .map(|s| Label::symbol(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        labels.sort();
        labels.dedup();
        if labels.is_empty() {
            return Err(FreeError::EmptyAlphabet);
        }
        Ok(Alphabet(labels))
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.0.binary_search(l).is_ok()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&names.join(","))
    }
}

/// Number of vertices.
pub type Weight = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeElement {
    alphabet: Alphabet,
    value: LinComb<RootedTree>,
}

impl FreeElement {
    pub fn new(alphabet: &Alphabet, value: LinComb<RootedTree>) -> Result<Self, FreeError> {
        for t in value.keys() {
            if let Some(bad) = t.labels().into_iter().find(|l| !alphabet.contains(l)) {
                return Err(FreeError::NotAGenerator(bad));
            }
        }
        Ok(FreeElement { alphabet: alphabet.clone(), value })
    }

    pub fn from_tree(alphabet: &Alphabet, t: RootedTree) -> Result<Self, FreeError> {
        Self::new(alphabet, LinComb::basis(t))
    }

    /// The single-vertex tree on a generator.
    pub fn generator(alphabet: &Alphabet, g: &Label) -> Result<Self, FreeError> {
        Self::from_tree(alphabet, RootedTree::leaf(g.clone()))
    }

    pub fn zero(alphabet: &Alphabet) -> Self {
        FreeElement { alphabet: alphabet.clone(), value: LinComb::zero() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn value(&self) -> &LinComb<RootedTree> {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Weights of the basis trees in the support, ascending, deduplicated.
    pub fn weights(&self) -> Vec<Weight> {
        let mut w: Vec<Weight> = self.value.keys().map(RootedTree::size).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    fn same_alphabet(&self, other: &FreeElement) -> Result<(), FreeError> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(FreeError::AlphabetMismatch)
        }
    }

    pub fn add(&self, other: &FreeElement) -> Result<FreeElement, FreeError> {
        self.same_alphabet(other)?;
        Ok(FreeElement { alphabet: self.alphabet.clone(), value: &self.value + &other.value })
    }

    pub fn sub(&self, other: &FreeElement) -> Result<FreeElement, FreeError> {
        self.same_alphabet(other)?;
        Ok(FreeElement { alphabet: self.alphabet.clone(), value: &self.value - &other.value })
    }

    pub fn scalar_mul(&self, c: &Coefficient) -> FreeElement {
        FreeElement { alphabet: self.alphabet.clone(), value: self.value.scalar_mul(c) }
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

pub fn star_free(a: &FreeElement, b: &FreeElement) -> Result<FreeElement, FreeError> {
    a.same_alphabet(b)?;
    Ok(FreeElement { alphabet: a.alphabet.clone(), value: graft_product(&a.value, &b.value) })
}

/// `[a, b] = a ⋆ b - b ⋆ a`.
pub fn bracket(a: &FreeElement, b: &FreeElement) -> Result<FreeElement, FreeError> {
    star_free(a, b)?.sub(&star_free(b, a)?)
}

/// Tree-level bracket, used by the homology and enveloping modules.
pub fn bracket_trees(a: &RootedTree, b: &RootedTree) -> LinComb<RootedTree> {
    let mut out = crate::trees::graft_sum(a, b);
    out -= &crate::trees::graft_sum(b, a);
    out
}

/// The basis trees of weights `1..=max_weight`, grouped by weight.
pub fn basis_up_to_weight(alphabet: &Alphabet, max_weight: usize) -> Result<Vec<(Weight, Vec<RootedTree>)>, FreeError> {
    if max_weight > 8 {
        return Err(FreeError::WeightTooLarge(max_weight));
    }
    let by_weight = gen_trees_by_weight(alphabet.labels(), max_weight);
    Ok(by_weight.into_iter().enumerate().skip(1).collect())
}
