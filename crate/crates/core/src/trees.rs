//! Rooted trees with labelled vertices.
//!
//! A [`RootedTree`] is always stored in canonical form: the children of every
//! vertex are sorted ascending by their recursive encoding `(label, children)`.
//! Two trees that are equal up to reordering of siblings therefore have the
//! same representation, and derived `Eq`/`Ord`/`Hash` are structural.
//!
//! Two labelling regimes coexist:
//! * operad trees carry distinct integer labels `1..=n`;
//! * free pre-Lie trees carry generator symbols that may repeat.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lincomb::LinComb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("duplicate integer label {label} at byte {offset}")]
    DuplicateLabel { label: u32, offset: usize },
    #[error("vertex path {0:?} does not exist")]
    InvalidVertex(Vec<usize>),
    #[error("label {0} is not a vertex of the tree")]
    UnknownLabel(Label),
    #[error("label {0} occurs in both trees")]
    LabelCollision(Label),
    #[error("relabelling is not defined on label {0}")]
    RelabelNotTotal(Label),
    #[error("relabelling sends two labels to {0}")]
    RelabelNotInjective(Label),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("tree size {0} is outside the supported range 1..=8")]
    SizeOutOfRange(usize),
    #[error("generator list is empty")]
    EmptyGenerators,
}

/// A vertex label: an operad index (`>= 1`) or a generator symbol.
///
/// Indices sort before symbols; indices compare numerically and symbols by
/// string order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Index(u32),
    Symbol(String),
}

impl Label {
    pub fn index(value: u32) -> Result<Self, TreeError> {
        if value == 0 {
            return Err(TreeError::InvalidLabel("integer labels start at 1".into()));
        }
        Ok(Label::Index(value))
    }

    pub fn symbol(name: &str) -> Result<Self, TreeError> {
        let mut chars = name.chars();
        let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(TreeError::InvalidLabel(format!("`{name}` is not an identifier")));
        }
        Ok(Label::Symbol(name.to_string()))
    }

    pub fn as_index(&self) -> Option<u32> {
        match self {
            Label::Index(i) => Some(*i),
            Label::Symbol(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Symbol(s) => f.write_str(s),
        }
    }
}

/// A rooted tree whose sibling order is not yet normalised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTree {
    pub label: Label,
    pub children: Vec<RawTree>,
}

impl RawTree {
    pub fn new(label: Label, children: Vec<RawTree>) -> Self {
        RawTree { label, children }
    }

    pub fn leaf(label: Label) -> Self {
        RawTree { label, children: Vec::new() }
    }

    /// The vertex reached by following child indices from the root.
    pub fn child_at_mut(&mut self, path: &[usize]) -> Option<&mut RawTree> {
        let mut node = self;
        for &step in path {
            node = node.children.get_mut(step)?;
        }
        Some(node)
    }
}

impl From<&RootedTree> for RawTree {
    fn from(t: &RootedTree) -> Self {
        RawTree {
            label: t.label.clone(),
            children: t.children.iter().map(RawTree::from).collect(),
        }
    }
}

/// Puts a raw tree into canonical form. Idempotent on canonical input.
pub fn canonicalize(raw: RawTree) -> RootedTree {
    let children = raw.children.into_iter().map(canonicalize).collect();
    RootedTree::new(raw.label, children)
}

/// Canonical rooted tree. Field order matters: the derived `Ord` compares the
/// label first and then the child lists lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedTree {
    label: Label,
    children: Vec<RootedTree>,
}

/// A tree together with the number of times it was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeMultiplicity {
    pub tree: RootedTree,
    pub count: usize,
}

impl RootedTree {
    /// Builds a tree from canonical children, re-sorting them.
    pub fn new(label: Label, mut children: Vec<RootedTree>) -> Self {
        children.sort();
        RootedTree { label, children }
    }

    pub fn leaf(label: Label) -> Self {
        RootedTree { label, children: Vec::new() }
    }

    pub fn label(&self) -> &Label {
        &self.label
    }

    pub fn children(&self) -> &[RootedTree] {
        &self.children
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(RootedTree::size).sum::<usize>()
    }

    /// Labels in preorder.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::with_capacity(self.size());
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<Label>) {
        out.push(self.label.clone());
        for c in &self.children {
            c.collect_labels(out);
        }
    }

    pub fn contains_label(&self, label: &Label) -> bool {
        &self.label == label || self.children.iter().any(|c| c.contains_label(label))
    }

    /// Child-index paths to every vertex, in preorder. The root is `[]`.
    pub fn vertex_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.size());
        let mut prefix = Vec::new();
        self.collect_paths(&mut prefix, &mut out);
        out
    }

    fn collect_paths(&self, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(prefix.clone());
        for (i, c) in self.children.iter().enumerate() {
            prefix.push(i);
            c.collect_paths(prefix, out);
            prefix.pop();
        }
    }

    pub fn path_of_label(&self, label: &Label) -> Option<Vec<usize>> {
        if &self.label == label {
            return Some(Vec::new());
        }
        self.children.iter().enumerate().find_map(|(i, c)| {
            c.path_of_label(label).map(|mut p| {
                p.insert(0, i);
                p
            })
        })
    }

    /// Attaches the root of `scion` as a new child of the vertex at `at`.
    pub fn graft(&self, at: &[usize], scion: &RootedTree) -> Result<RootedTree, TreeError> {
        match at.split_first() {
            None => {
                let mut children = self.children.clone();
                children.push(scion.clone());
                Ok(RootedTree::new(self.label.clone(), children))
            }
            Some((&step, rest)) => {
                let child = self
                    .children
                    .get(step)
                    .ok_or_else(|| TreeError::InvalidVertex(at.to_vec()))?;
                let grafted = child
                    .graft(rest, scion)
                    .map_err(|_| TreeError::InvalidVertex(at.to_vec()))?;
                let mut children = self.children.clone();
                children[step] = grafted;
                Ok(RootedTree::new(self.label.clone(), children))
            }
        }
    }

    /// Distinct-label grafting: the vertex is named by its label and the two
    /// label sets must be disjoint.
    pub fn graft_at_label(&self, at: &Label, scion: &RootedTree) -> Result<RootedTree, TreeError> {
        let host: BTreeSet<Label> = self.labels().into_iter().collect();
        if let Some(clash) = scion.labels().into_iter().find(|l| host.contains(l)) {
            return Err(TreeError::LabelCollision(clash));
        }
        let path = self
            .path_of_label(at)
            .ok_or_else(|| TreeError::UnknownLabel(at.clone()))?;
        self.graft(&path, scion)
    }

    /// One graft of `scion` onto each vertex, in preorder. Isomorphic
    /// outcomes are not merged.
    pub fn graft_everywhere(&self, scion: &RootedTree) -> Vec<RootedTree> {
        let mut out = Vec::with_capacity(self.size());
        self.graft_everywhere_into(scion, &mut out);
        out
    }

    fn graft_everywhere_into(&self, scion: &RootedTree, out: &mut Vec<RootedTree>) {
        let mut children = self.children.clone();
        children.push(scion.clone());
        out.push(RootedTree::new(self.label.clone(), children));
        for (i, child) in self.children.iter().enumerate() {
            let mut below = Vec::new();
            child.graft_everywhere_into(scion, &mut below);
            for g in below {
                let mut children = self.children.clone();
                children[i] = g;
                out.push(RootedTree::new(self.label.clone(), children));
            }
        }
    }

    /// Grafts onto every vertex and merges isomorphic results.
    pub fn graft_everywhere_counted(&self, scion: &RootedTree) -> Vec<TreeMultiplicity> {
        let mut counts: BTreeMap<RootedTree, usize> = BTreeMap::new();
        for t in self.graft_everywhere(scion) {
            *counts.entry(t).or_insert(0) += 1;
        }
        counts
            .into_iter()
            .map(|(tree, count)| TreeMultiplicity { tree, count })
            .collect()
    }

    /// Applies `f` to every label and re-canonicalises. No checks.
    pub fn map_labels<F: Fn(&Label) -> Label + Copy>(&self, f: F) -> RootedTree {
        RootedTree::new(
            f(&self.label),
            self.children.iter().map(|c| c.map_labels(f)).collect(),
        )
    }

    /// Relabels vertices by `map`, which must be total and injective on the
    /// labels of this tree.
    pub fn relabel(&self, map: &HashMap<Label, Label>) -> Result<RootedTree, TreeError> {
        let mut seen = BTreeSet::new();
        for l in self.labels() {
            let image = map.get(&l).ok_or_else(|| TreeError::RelabelNotTotal(l.clone()))?;
            if !seen.insert(image.clone()) {
                return Err(TreeError::RelabelNotInjective(image.clone()));
            }
        }
        Ok(self.map_labels(|l| map[l].clone()))
    }

    /// True when the labels are exactly the integers `1..=size`.
    pub fn is_standard_labelled(&self) -> bool {
        let mut idx: Vec<u32> = match self.labels().iter().map(Label::as_index).collect() {
            Some(v) => v,
            None => return false,
        };
        idx.sort_unstable();
        idx.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.label)?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for RootedTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn format_tree(t: &RootedTree) -> String {
    t.to_string()
}

/// Parses `tree := '(' label (' ' tree)* ')'`. Integer labels must be
/// distinct; symbol labels may repeat.
pub fn parse_tree(text: &str) -> Result<RootedTree, TreeError> {
    let mut p = TreeParser { src: text.as_bytes(), pos: 0, seen: BTreeSet::new() };
    let raw = p.tree()?;
    if p.pos != p.src.len() {
        return Err(p.error("trailing input after tree"));
    }
    Ok(canonicalize(raw))
}

pub(crate) struct TreeParser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
    seen: BTreeSet<u32>,
}

impl<'a> TreeParser<'a> {
    pub(crate) fn new(src: &'a [u8], pos: usize) -> Self {
        TreeParser { src, pos, seen: BTreeSet::new() }
    }

    fn error(&self, message: &str) -> TreeError {
        TreeError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), TreeError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", byte as char)))
        }
    }

    pub(crate) fn tree(&mut self) -> Result<RawTree, TreeError> {
        self.expect(b'(')?;
        let label = self.label()?;
        let mut children = Vec::new();
        loop {
            match self.peek() {
                Some(b')') => {
                    self.pos += 1;
                    return Ok(RawTree::new(label, children));
                }
                Some(b' ') => {
                    self.pos += 1;
                    children.push(self.tree()?);
                }
                _ => return Err(self.error("expected ` ` or `)`")),
            }
        }
    }

    fn label(&mut self) -> Result<Label, TreeError> {
        let start = self.pos;
        match self.peek() {
            Some(b'1'..=b'9') => {
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let value: u32 = digits.parse().map_err(|_| TreeError::Syntax {
                    offset: start,
                    message: "integer label too large".into(),
                })?;
                if !self.seen.insert(value) {
                    return Err(TreeError::DuplicateLabel { label: value, offset: start });
                }
                Ok(Label::Index(value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                Ok(Label::Symbol(name.to_string()))
            }
            _ => Err(self.error("expected a label")),
        }
    }
}

/// All rooted trees on the labels `1..=n`.
///
/// Every root choice and every parent function on the remaining vertices is
/// tried; functions with a cycle are rejected.
pub fn enumerate_trees(n: usize) -> Result<Vec<RootedTree>, TreeError> {
    if !(1..=8).contains(&n) {
        return Err(TreeError::SizeOutOfRange(n));
    }
    let mut out = BTreeSet::new();
    // parent[v] for v in 0..n; the root's entry is ignored.
    let mut parent = vec![0usize; n];
    for root in 0..n {
        let others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
        let total = n.pow(others.len() as u32);
        for code in 0..total {
            let mut c = code;
            for &v in &others {
                parent[v] = c % n;
                c /= n;
            }
            if reaches_root(&parent, root) {
                out.insert(build_from_parents(&parent, root));
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn reaches_root(parent: &[usize], root: usize) -> bool {
    let n = parent.len();
    (0..n).all(|start| {
        let mut v = start;
        for _ in 0..n {
            if v == root {
                return true;
            }
            v = parent[v];
        }
        v == root
    })
}

fn build_from_parents(parent: &[usize], root: usize) -> RootedTree {
    fn build(v: usize, parent: &[usize], root: usize) -> RootedTree {
        let children = (0..parent.len())
            .filter(|&c| c != root && c != v && parent[c] == v)
            .map(|c| build(c, parent, root))
            .collect();
        RootedTree::new(Label::Index(v as u32 + 1), children)
    }
    build(root, parent, root)
}

/// All trees with `weight` vertices labelled by `generators`, up to
/// label-preserving isomorphism, in canonical order.
pub fn enumerate_gen_trees(generators: &[Label], weight: usize) -> Result<Vec<RootedTree>, TreeError> {
    if generators.is_empty() {
        return Err(TreeError::EmptyGenerators);
    }
    if !(1..=8).contains(&weight) {
        return Err(TreeError::SizeOutOfRange(weight));
    }
    let by_weight = gen_trees_by_weight(generators, weight);
    Ok(by_weight[weight].clone())
}

/// `result[w]` holds the trees of weight `w` for `w <= max_weight`
/// (`result[0]` is empty).
pub(crate) fn gen_trees_by_weight(generators: &[Label], max_weight: usize) -> Vec<Vec<RootedTree>> {
    let gens: BTreeSet<Label> = generators.iter().cloned().collect();
    let mut by_weight: Vec<Vec<RootedTree>> = vec![Vec::new(); max_weight + 1];
    for w in 1..=max_weight {
        // Pool of candidate subtrees, with their weights, in a fixed order.
        let pool: Vec<(usize, &RootedTree)> = (1..w)
            .flat_map(|k| by_weight[k].iter().map(move |t| (k, t)))
            .collect();
        let mut forests = Vec::new();
        multisets(&pool, 0, w - 1, &mut Vec::new(), &mut forests);
        let mut trees: Vec<RootedTree> = gens
            .iter()
            .flat_map(|g| {
                forests
                    .iter()
                    .map(move |f: &Vec<RootedTree>| RootedTree::new(g.clone(), f.clone()))
            })
            .collect();
        trees.sort();
        trees.dedup();
        by_weight[w] = trees;
    }
    by_weight
}

/// Non-decreasing selections from `pool[start..]` with total weight `remaining`.
fn multisets(
    pool: &[(usize, &RootedTree)],
    start: usize,
    remaining: usize,
    current: &mut Vec<RootedTree>,
    out: &mut Vec<Vec<RootedTree>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for idx in start..pool.len() {
        let (w, t) = pool[idx];
        if w <= remaining {
            current.push(t.clone());
            multisets(pool, idx, remaining - w, current, out);
            current.pop();
        }
    }
}

/// Label-preserving ⋆ of two trees: the root of `right` grafted on each
/// vertex of `left`, isomorphic results merged.
pub fn graft_sum(left: &RootedTree, right: &RootedTree) -> LinComb<RootedTree> {
    let mut out = LinComb::zero();
    for t in left.graft_everywhere(right) {
        out.add_term(t, BigRational::one());
    }
    out
}

/// Bilinear extension of [`graft_sum`].
pub fn graft_product(a: &LinComb<RootedTree>, b: &LinComb<RootedTree>) -> LinComb<RootedTree> {
    let mut out = LinComb::zero();
    for (ta, ca) in a.iter() {
        for (tb, cb) in b.iter() {
            let c = ca * cb;
            for t in ta.graft_everywhere(tb) {
                out.add_term(t, c.clone());
            }
        }
    }
    out
}
