//! The operad of rooted trees.
//!
//! `RT(n)` is spanned by rooted trees on the labels `1..=n`. Partial
//! composition `T ∘_i S` substitutes `S` for vertex `i` of `T`: the outgoing
//! edge of `i` becomes the outgoing edge of the root of `S`, and the incoming
//! edges of `i` are regrafted onto the vertices of `S` in every possible way.
//!
//! Relabelling convention for `T ∘_i S` with `S` of arity `m`: labels `j < i`
//! of `T` are kept, labels `j > i` become `j + m - 1`, and label `k` of `S`
//! becomes `k + i - 1`.

mod series;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::lincomb::{parse_lincomb, AnyComb, LinComb, LinCombError};
use crate::trees::{canonicalize, enumerate_trees, Label, RawTree, RootedTree, TreeError};

pub use series::{
    inverse_residuals, neg_x_exp_neg_x, rooted_tree_series, series_inverse_check, Series,
    SeriesCheckReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperadError {
    #[error("composition slot {slot} is outside 1..={arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("tree {tree} is not labelled by 1..={arity}")]
    BadLabels { tree: String, arity: usize },
    #[error("series order {0} is outside 1..=30")]
    OrderOutOfRange(usize),
    #[error("enumeration cross-check is limited to n <= 7, got {0}")]
    CrossCheckTooLarge(usize),
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("expected a combination of trees")]
    ExpectedTrees,
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Parse(#[from] LinCombError),
}

/// An element of `RT(arity)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OperadElement {
    arity: usize,
    value: LinComb<RootedTree>,
}

impl OperadElement {
    pub fn new(arity: usize, value: LinComb<RootedTree>) -> Result<Self, OperadError> {
        if arity == 0 {
            return Err(OperadError::ZeroArity);
        }
        for t in value.keys() {
            if t.size() != arity || !t.is_standard_labelled() {
                return Err(OperadError::BadLabels { tree: t.to_string(), arity });
            }
        }
        Ok(OperadElement { arity, value })
    }

    pub fn from_tree(t: RootedTree) -> Result<Self, OperadError> {
        let arity = t.size();
        Self::new(arity, LinComb::basis(t))
    }

    /// The single-vertex tree `(1)`.
    pub fn unit() -> Self {
        OperadElement { arity: 1, value: LinComb::basis(RootedTree::leaf(Label::Index(1))) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn value(&self) -> &LinComb<RootedTree> {
        &self.value
    }

    pub fn into_value(self) -> LinComb<RootedTree> {
        self.value
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        OperadElement { arity: self.arity, value: self.value.scalar_mul(c) }
    }

    /// Sum of two elements of the same arity.
    pub fn add(&self, other: &OperadElement) -> Result<Self, OperadError> {
        if self.arity != other.arity {
            return Err(OperadError::ArityMismatch { expected: self.arity, got: other.arity });
        }
        Ok(OperadElement { arity: self.arity, value: &self.value + &other.value })
    }
}

fn index(l: &Label) -> u32 {
    l.as_index().expect("operad trees carry integer labels")
}

/// `T ∘_i S`, extended bilinearly.
pub fn compose_at(t: &OperadElement, slot: usize, s: &OperadElement) -> Result<OperadElement, OperadError> {
    if !(1..=t.arity).contains(&slot) {
        return Err(OperadError::SlotOutOfRange { slot, arity: t.arity });
    }
    let mut value = LinComb::zero();
    for (tt, ct) in t.value.iter() {
        for (ss, cs) in s.value.iter() {
            let c = ct * cs;
            for tree in compose_basis(tt, slot as u32, ss, s.arity as u32) {
                value.add_term(tree, c.clone());
            }
        }
    }
    Ok(OperadElement { arity: t.arity + s.arity - 1, value })
}

/// All `m^{|In(T,i)|}` trees `T ∘_i^f S`, one per map `f`.
pub fn compose_basis(t: &RootedTree, slot: u32, s: &RootedTree, m: u32) -> Vec<RootedTree> {
    let shift_t = move |l: &Label| {
        let j = index(l);
        Label::Index(if j < slot { j } else { j + m - 1 })
    };
    let s_shifted = s.map_labels(move |l| Label::Index(index(l) + slot - 1));
    let targets = s_shifted.vertex_paths();
    substitute(t, slot, &s_shifted, &targets, &shift_t)
}

fn substitute(
    node: &RootedTree,
    slot: u32,
    s: &RootedTree,
    targets: &[Vec<usize>],
    shift_t: &(impl Fn(&Label) -> Label + Copy),
) -> Vec<RootedTree> {
    if index(node.label()) == slot {
        let incoming: Vec<RawTree> =
            node.children().iter().map(|c| RawTree::from(&c.map_labels(*shift_t))).collect();
        let q = incoming.len();
        let total = targets.len().pow(q as u32);
        let mut out = Vec::with_capacity(total);
        for code in 0..total {
            let mut raw = RawTree::from(s);
            let mut c = code;
            for edge in &incoming {
                let target = &targets[c % targets.len()];
                c /= targets.len();
                // Appending keeps the child indices that later paths rely on.
                raw.child_at_mut(target)
                    .expect("paths come from the scion itself")
                    .children
                    .push(edge.clone());
            }
            out.push(canonicalize(raw));
        }
        return out;
    }
    let label = shift_t(node.label());
    let slot_label = Label::Index(slot);
    let shifted: Vec<RootedTree> = node.children().iter().map(|c| c.map_labels(*shift_t)).collect();
    match node.children().iter().position(|c| c.contains_label(&slot_label)) {
        None => vec![RootedTree::new(label, shifted)],
        Some(k) => substitute(&node.children()[k], slot, s, targets, shift_t)
            .into_iter()
            .map(|sub| {
                let mut children = shifted.clone();
                children[k] = sub;
                RootedTree::new(label.clone(), children)
            })
            .collect(),
    }
}

/// `γ(μ; ν_1, …, ν_n) = (⋯((μ ∘_n ν_n) ∘_{n-1} ν_{n-1}) ⋯) ∘_1 ν_1`.
pub fn gamma(mu: &OperadElement, args: &[OperadElement]) -> Result<OperadElement, OperadError> {
    if args.len() != mu.arity {
        return Err(OperadError::ArityMismatch { expected: mu.arity, got: args.len() });
    }
    let mut acc = mu.clone();
    for (k, nu) in args.iter().enumerate().rev() {
        acc = compose_at(&acc, k + 1, nu)?;
    }
    Ok(acc)
}

/// `T1 ⋆ T2`: the root of `T2`, relabelled by `+ arity(T1)`, grafted on every
/// vertex of `T1`.
pub fn star(t1: &OperadElement, t2: &OperadElement) -> OperadElement {
    let n = t1.arity as u32;
    let mut value = LinComb::zero();
    for (a, ca) in t1.value.iter() {
        for (b, cb) in t2.value.iter() {
            let shifted = b.map_labels(move |l| Label::Index(index(l) + n));
            let c = ca * cb;
            for tree in a.graft_everywhere(&shifted) {
                value.add_term(tree, c.clone());
            }
        }
    }
    OperadElement { arity: t1.arity + t2.arity, value }
}

/// `(T₁⋆T₂)⋆T₃ - T₁⋆(T₂⋆T₃) - (T₁⋆T₃)⋆T₂ + T₁⋆(T₃⋆T₂)`, with the last two
/// terms relabelled so that each argument keeps its own block of indices.
pub fn pre_lie_defect(t1: &OperadElement, t2: &OperadElement, t3: &OperadElement) -> OperadElement {
    let (a, b, c) = (t1.arity as u32, t2.arity as u32, t3.arity as u32);
    let lhs = star(&star(t1, t2), t3).value - star(t1, &star(t2, t3)).value;
    let swapped = star(&star(t1, t3), t2).value - star(t1, &star(t3, t2)).value;
    let perm: Vec<u32> = (1..=a)
        .chain((1..=c).map(|k| a + b + k))
        .chain((1..=b).map(|k| a + k))
        .collect();
    let arity = t1.arity + t2.arity + t3.arity;
    let rhs = sym_action(&perm, &OperadElement { arity, value: swapped }).expect("block permutation");
    OperadElement { arity, value: lhs - rhs.value }
}

/// Relabels every tree by `σ`, given as `perm[k-1] = σ(k)`.
pub fn sym_action(perm: &[u32], t: &OperadElement) -> Result<OperadElement, OperadError> {
    if perm.len() != t.arity {
        return Err(OperadError::NotAPermutation(t.arity));
    }
    crate::words::check_permutation(perm).map_err(|_| OperadError::NotAPermutation(t.arity))?;
    let map: HashMap<Label, Label> = perm
        .iter()
        .enumerate()
        .map(|(k, &img)| (Label::Index(k as u32 + 1), Label::Index(img)))
        .collect();
    let mut value = LinComb::zero();
    for (tree, c) in t.value.iter() {
        value.add_term(tree.relabel(&map)?, c.clone());
    }
    Ok(OperadElement { arity: t.arity, value })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub n: usize,
    #[serde(serialize_with = "serialize_display")]
    pub formula: BigUint,
    pub enumerated: Option<usize>,
}

impl DimReport {
    pub fn matches(&self) -> bool {
        self.enumerated.is_none_or(|e| BigUint::from(e) == self.formula)
    }
}

fn serialize_display<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// `dim RT(n) = n^{n-1}`, optionally checked against exhaustive enumeration.
pub fn dim_rt(n: usize, cross_check: bool) -> Result<DimReport, OperadError> {
    if n == 0 {
        return Err(OperadError::ZeroArity);
    }
    if cross_check && n > 7 {
        return Err(OperadError::CrossCheckTooLarge(n));
    }
    let formula = BigUint::from(n).pow(n as u32 - 1);
    let enumerated = if cross_check { Some(enumerate_trees(n)?.len()) } else { None };
    Ok(DimReport { n, formula, enumerated })
}

/// Number of maps `f` in `T ∘_i S` for basis trees: `m^{|In(T,i)|}`.
pub fn composition_term_count(t: &RootedTree, slot: u32, m: usize) -> usize {
    let path = t.path_of_label(&Label::Index(slot)).expect("slot is a vertex");
    let mut node = t;
    for &step in &path {
        node = &node.children()[step];
    }
    m.pow(node.children().len() as u32)
}

/// Shorthand used throughout the tests: a single tree with coefficient one.
pub fn element(text: &str) -> Result<OperadElement, OperadError> {
    OperadElement::from_tree(crate::trees::parse_tree(text)?)
}

impl OperadElement {
    /// Parses a `LinComb` of trees of a common arity.
    pub fn parse(text: &str) -> Result<Self, OperadError> {
        match parse_lincomb(text)? {
            AnyComb::Trees(value) => {
                let arity = value.keys().next().map_or(1, RootedTree::size);
                OperadElement::new(arity, value)
            }
            AnyComb::Words(_) => Err(OperadError::ExpectedTrees),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn coeff_of(&self, t: &RootedTree) -> BigRational {
        self.value.get(t)
    }
}

impl std::fmt::Display for OperadElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.value.fmt(f)
    }
}
