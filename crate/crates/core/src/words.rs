//! Parenthesised words in distinct variables, the pre-Lie relator, and the
//! maps between words and rooted trees.
//!
//! `phi` sends a word to the sum of trees obtained by reading every product
//! `(ρ ρ')` as the grafting product `phi(ρ) ⋆ phi(ρ')`. `psi` goes the other
//! way by repeatedly ungrafting one root subtree. The relator lies in the
//! kernel of `phi`, and `phi ∘ psi` is the identity on trees; equality of
//! words modulo the relator ideal is decided by comparing `phi` images.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lincomb::{coeff, LinComb};
use crate::trees::{enumerate_trees, graft_product, graft_sum, Label, RootedTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable x{var} occurs twice (byte {offset})")]
    DuplicateVariable { var: u32, offset: usize },
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("variable x{0} is outside the permutation's domain")]
    VariableOutOfRange(u32),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A parenthesised product of distinct variables `x1, x2, ...`.
///
/// Products sort before variables, so `((x1 x2) x3)` precedes `(x1 (x2 x3))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Word {
    Pair(Box<Word>, Box<Word>),
    Var(u32),
}

pub type WordComb = LinComb<Word>;

impl Word {
    pub fn var(k: u32) -> Word {
        Word::Var(k)
    }

    pub fn pair(left: Word, right: Word) -> Word {
        Word::Pair(Box::new(left), Box::new(right))
    }

    /// Variables in left-to-right order.
    pub fn variables(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<u32>) {
        match self {
            Word::Var(k) => out.push(*k),
            Word::Pair(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Renames `x_k` to `x_{σ(k)}`, with `perm[k-1] = σ(k)`.
    pub fn act(&self, perm: &[u32]) -> Result<Word, WordError> {
        match self {
            Word::Var(k) => perm
                .get((*k as usize).wrapping_sub(1))
                .map(|&img| Word::Var(img))
                .ok_or(WordError::VariableOutOfRange(*k)),
            Word::Pair(a, b) => Ok(Word::pair(a.act(perm)?, b.act(perm)?)),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Var(k) => write!(f, "x{k}"),
            Word::Pair(a, b) => write!(f, "({a} {b})"),
        }
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `word := 'x' integer | '(' word ' ' word ')'`.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let mut p = WordParser::new(text.as_bytes(), 0);
    let w = p.word()?;
    if p.pos != text.len() {
        return Err(WordError::Syntax { offset: p.pos, message: "trailing input after word".into() });
    }
    Ok(w)
}

pub(crate) struct WordParser<'a> {
    src: &'a [u8],
    pub(crate) pos: usize,
    seen: BTreeSet<u32>,
}

impl<'a> WordParser<'a> {
    pub(crate) fn new(src: &'a [u8], pos: usize) -> Self {
        WordParser { src, pos, seen: BTreeSet::new() }
    }

    fn error(&self, message: &str) -> WordError {
        WordError::Syntax { offset: self.pos, message: message.to_string() }
    }

    pub(crate) fn word(&mut self) -> Result<Word, WordError> {
        match self.src.get(self.pos) {
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                if !matches!(self.src.get(self.pos), Some(b'1'..=b'9')) {
                    return Err(self.error("expected a variable index"));
                }
                while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let var: u32 = digits.parse().map_err(|_| WordError::Syntax {
                    offset: start,
                    message: "variable index too large".into(),
                })?;
                if !self.seen.insert(var) {
                    return Err(WordError::DuplicateVariable { var, offset: start - 1 });
                }
                Ok(Word::Var(var))
            }
            Some(b'(') => {
                self.pos += 1;
                let left = self.word()?;
                if self.src.get(self.pos) != Some(&b' ') {
                    return Err(self.error("expected ` `"));
                }
                self.pos += 1;
                let right = self.word()?;
                if self.src.get(self.pos) != Some(&b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(Word::pair(left, right))
            }
            _ => Err(self.error("expected `x` or `(`")),
        }
    }
}

/// `((x1 x2) x3) - (x1 (x2 x3)) - ((x1 x3) x2) + (x1 (x3 x2))`.
pub fn relator() -> WordComb {
    let v = Word::var;
    let p = Word::pair;
    [
        (p(p(v(1), v(2)), v(3)), 1),
        (p(v(1), p(v(2), v(3))), -1),
        (p(p(v(1), v(3)), v(2)), -1),
        (p(v(1), p(v(3), v(2))), 1),
    ]
    .into_iter()
    .map(|(w, c)| (w, coeff(c)))
    .collect()
}

/// The six permutations of `{1, 2, 3}` in lexicographic order.
pub fn s3() -> [[u32; 3]; 6] {
    [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]]
}

/// `σ · w` for a combination of words; `perm[k-1] = σ(k)`.
pub fn act_comb(perm: &[u32], w: &WordComb) -> Result<WordComb, WordError> {
    check_permutation(perm)?;
    let mut out = WordComb::zero();
    for (word, c) in w.iter() {
        out.add_term(word.act(perm)?, c.clone());
    }
    Ok(out)
}

pub(crate) fn check_permutation(perm: &[u32]) -> Result<(), WordError> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted.iter().enumerate().all(|(k, &v)| v as usize == k + 1) {
        Ok(())
    } else {
        Err(WordError::NotAPermutation(perm.len()))
    }
}

/// The relator under every element of S3, in the order of [`s3`].
pub fn relator_orbit() -> Vec<WordComb> {
    let r = relator();
    s3().iter().map(|p| act_comb(p, &r).expect("valid permutation")).collect()
}

/// The tree image of a single word, labels kept as the variable indices.
pub fn phi_word(w: &Word) -> LinComb<RootedTree> {
    match w {
        Word::Var(k) => LinComb::basis(RootedTree::leaf(Label::Index(*k))),
        Word::Pair(a, b) => graft_product(&phi_word(a), &phi_word(b)),
    }
}

pub fn phi(w: &WordComb) -> LinComb<RootedTree> {
    w.map_linear(phi_word)
}

/// Which root subtree `psi` ungrafts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UngraftChoice {
    Smallest,
    Largest,
}

/// A word combination whose `phi` image is `t`, ungrafting the smallest root
/// subtree first.
pub fn psi(t: &RootedTree) -> WordComb {
    psi_with(t, UngraftChoice::Smallest)
}

pub fn psi_with(t: &RootedTree, choice: UngraftChoice) -> WordComb {
    Psi { choice, memo: HashMap::new() }.tree(t)
}

pub fn psi_comb(t: &LinComb<RootedTree>, choice: UngraftChoice) -> WordComb {
    let mut engine = Psi { choice, memo: HashMap::new() };
    t.map_linear(|tree| engine.tree(tree))
}

struct Psi {
    choice: UngraftChoice,
    memo: HashMap<RootedTree, WordComb>,
}

impl Psi {
    fn tree(&mut self, t: &RootedTree) -> WordComb {
        if let Some(hit) = self.memo.get(t) {
            return hit.clone();
        }
        let out = self.compute(t);
        self.memo.insert(t.clone(), out.clone());
        out
    }

    fn compute(&mut self, t: &RootedTree) -> WordComb {
        let root = t.label().as_index().expect("psi needs integer labels");
        let children = t.children();
        match children.len() {
            0 => LinComb::basis(Word::Var(root)),
            1 => {
                let inner = self.tree(&children[0]);
                inner.map_basis(|w| Word::pair(Word::Var(root), w.clone()))
            }
            p => {
                let pick = match self.choice {
                    UngraftChoice::Smallest => 0,
                    UngraftChoice::Largest => p - 1,
                };
                let ungrafted = &children[pick];
                let rest: Vec<RootedTree> = children
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != pick)
                    .map(|(_, c)| c.clone())
                    .collect();

                // B(i, rest) ⋆ T1 contributes the concatenation term.
                let base = RootedTree::new(t.label().clone(), rest.clone());
                let left = self.tree(&base);
                let right = self.tree(ungrafted);
                let mut out = WordComb::zero();
                for (wl, cl) in left.iter() {
                    for (wr, cr) in right.iter() {
                        out.add_term(Word::pair(wl.clone(), wr.clone()), cl * cr);
                    }
                }

                // Minus every tree where T1 hangs below some other root subtree.
                for j in 0..rest.len() {
                    for (grafted, c) in graft_sum(&rest[j], ungrafted) {
                        let mut siblings = rest.clone();
                        siblings[j] = grafted;
                        let tree = RootedTree::new(t.label().clone(), siblings);
                        let sub = self.tree(&tree);
                        out.add_scaled(&sub, &-c);
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundtripReport {
    pub n: usize,
    pub trees_checked: usize,
    /// Trees `t` with `phi(psi(t)) != t`.
    pub phi_psi_failures: Vec<RootedTree>,
    /// Trees whose two ungraft choices have different `phi` images.
    pub choice_mismatches: Vec<RootedTree>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.phi_psi_failures.is_empty() && self.choice_mismatches.is_empty()
    }
}

/// Checks `phi ∘ psi = id` on every tree of size `n` and compares the
/// `phi` images of both ungraft choices.
pub fn roundtrip_check(n: usize) -> Result<RoundtripReport, WordError> {
    if !(1..=5).contains(&n) {
        return Err(TreeError::SizeOutOfRange(n).into());
    }
    let trees = enumerate_trees(n)?;
    let mut smallest = Psi { choice: UngraftChoice::Smallest, memo: HashMap::new() };
    let mut largest = Psi { choice: UngraftChoice::Largest, memo: HashMap::new() };
    let mut report = RoundtripReport {
        n,
        trees_checked: trees.len(),
        phi_psi_failures: Vec::new(),
        choice_mismatches: Vec::new(),
    };
    for t in &trees {
        let image = phi(&smallest.tree(t));
        if image != LinComb::basis(t.clone()) {
            report.phi_psi_failures.push(t.clone());
        }
        if phi(&largest.tree(t)) != image {
            report.choice_mismatches.push(t.clone());
        }
    }
    Ok(report)
}
