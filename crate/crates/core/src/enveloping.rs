//! The enveloping algebra `U(L_Lie)` of a free pre-Lie algebra `L`, in PBW
//! normal form, and the right `U`-module structure of `L`.
//!
//! `L_Lie` is ordered by (weight, canonical tree). A PBW monomial is a
//! nondecreasing sequence of trees; words are straightened with
//! `ba = ab + [b, a]`. Everything lives below a fixed weight cutoff.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::freeprelie::{basis_up_to_weight, bracket_trees, star_free, Alphabet, FreeElement, FreeError};
use crate::linalg::ExactMatrix;
use crate::lincomb::{Coefficient, LinComb};
use crate::trees::{Label, RootedTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopingError {
    #[error("weight {weight} exceeds the cutoff {cutoff}")]
    WeightAboveCutoff { weight: usize, cutoff: usize },
    #[error("label {0} is not a generator")]
    NotAGenerator(Label),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("freeness check limited to weight {limit} for {generators} generator(s), got {weight}")]
    TooLarge { generators: usize, weight: usize, limit: usize },
    #[error(transparent)]
    Free(#[from] FreeError),
}

/// A tree as an element of the ordered basis of `L_Lie`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedTree(pub RootedTree);

impl GradedTree {
    pub fn weight(&self) -> usize {
        self.0.size()
    }
}

impl Ord for GradedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for GradedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Nondecreasing product of basis trees; empty is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PBWMonomial(Vec<GradedTree>);

impl PBWMonomial {
    pub fn unit() -> Self {
        PBWMonomial(Vec::new())
    }

    /// The basis monomial with these factors, sorted.
    pub fn sorted(mut factors: Vec<RootedTree>) -> Self {
        let mut v: Vec<GradedTree> = factors.drain(..).map(GradedTree).collect();
        v.sort();
        PBWMonomial(v)
    }

    pub fn factors(&self) -> impl Iterator<Item = &RootedTree> {
        self.0.iter().map(|g| &g.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(GradedTree::weight).sum()
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            write!(f, "{}", g.0)?;
        }
        Ok(())
    }
}

impl Serialize for PBWMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub type UElement = LinComb<PBWMonomial>;

/// Which out-of-order adjacent pair is rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

fn check_cutoff(weight: usize, cutoff: usize) -> Result<(), EnvelopingError> {
    if weight > cutoff {
        Err(EnvelopingError::WeightAboveCutoff { weight, cutoff })
    } else {
        Ok(())
    }
}

fn inversion(word: &[GradedTree], order: RewriteOrder) -> Option<usize> {
    let mut it = (0..word.len().saturating_sub(1)).filter(|&i| word[i] > word[i + 1]);
    match order {
        RewriteOrder::Leftmost => it.next(),
        RewriteOrder::Rightmost => it.last(),
    }
}

fn straighten(start: LinComb<Vec<GradedTree>>, order: RewriteOrder) -> UElement {
    let mut pending: BTreeMap<Vec<GradedTree>, Coefficient> = start.into_iter().collect();
    let mut done = UElement::zero();
    while let Some((word, c)) = pending.pop_first() {
        if c.is_zero() {
            continue;
        }
        let Some(i) = inversion(&word, order) else {
            done.add_term(PBWMonomial(word), c);
            continue;
        };
        let mut swapped = word.clone();
        swapped.swap(i, i + 1);
        *pending.entry(swapped).or_insert_with(Coefficient::zero) += &c;
        for (t, b) in bracket_trees(&word[i].0, &word[i + 1].0) {
            let mut shorter = Vec::with_capacity(word.len() - 1);
            shorter.extend_from_slice(&word[..i]);
            shorter.push(GradedTree(t));
            shorter.extend_from_slice(&word[i + 2..]);
            *pending.entry(shorter).or_insert_with(Coefficient::zero) += &c * &b;
        }
    }
    done
}

/// PBW normal form of the product `word[0] word[1] ⋯` in `U(L_Lie)`.
pub fn pbw_normalize(word: &[RootedTree], cutoff: usize, order: RewriteOrder) -> Result<UElement, EnvelopingError> {
    check_cutoff(word.iter().map(RootedTree::size).sum(), cutoff)?;
    let w: Vec<GradedTree> = word.iter().cloned().map(GradedTree).collect();
    Ok(straighten(LinComb::basis(w), order))
}

fn max_weight(u: &UElement) -> usize {
    u.keys().map(PBWMonomial::weight).max().unwrap_or(0)
}

/// Re-straightens a combination of monomials (the identity on normal forms).
pub fn normalize_element(u: &UElement, cutoff: usize, order: RewriteOrder) -> Result<UElement, EnvelopingError> {
    check_cutoff(max_weight(u), cutoff)?;
    Ok(straighten(u.map_basis(|m| m.0.clone()), order))
}

/// `u · u'`: concatenation, then straightening.
pub fn u_mul(a: &UElement, b: &UElement, cutoff: usize) -> Result<UElement, EnvelopingError> {
    let mut words = LinComb::zero();
    for (x, c) in a.iter() {
        for (y, d) in b.iter() {
            check_cutoff(x.weight() + y.weight(), cutoff)?;
            let mut w = x.0.clone();
            w.extend(y.0.iter().cloned());
            words.add_term(w, c * d);
        }
    }
    Ok(straighten(words, RewriteOrder::Leftmost))
}

/// `l · (a₁ ⋯ aₙ) = (⋯((l ⋆ a₁) ⋆ a₂) ⋯) ⋆ aₙ`, extended linearly.
pub fn right_action(l: &FreeElement, u: &UElement, cutoff: usize) -> Result<FreeElement, EnvelopingError> {
    let top = l.weights().last().copied().unwrap_or(0);
    check_cutoff(top + max_weight(u), cutoff)?;
    let alphabet = l.alphabet();
    let mut out = FreeElement::zero(alphabet);
    for (m, c) in u.iter() {
        let mut acc = l.clone();
        for a in m.factors() {
            acc = star_free(&acc, &FreeElement::from_tree(alphabet, a.clone())?)?;
        }
        out = out.add(&acc.scalar_mul(c))?;
    }
    Ok(out)
}

/// A basis element `v ⊗ u` of `V ⊗ U(L_Lie)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleBasis {
    pub generator: Label,
    pub monomial: PBWMonomial,
}

impl fmt::Display for ModuleBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.generator, self.monomial)
    }
}

impl Serialize for ModuleBasis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An element of `V ⊗ U(L_Lie)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleElement {
    alphabet: Alphabet,
    value: LinComb<ModuleBasis>,
}

impl ModuleElement {
    /// `v ⊗ u`.
    pub fn new(alphabet: &Alphabet, generator: &Label, u: &UElement) -> Result<Self, EnvelopingError> {
        if !alphabet.contains(generator) {
            return Err(EnvelopingError::NotAGenerator(generator.clone()));
        }
        let value = u.map_basis(|m| ModuleBasis { generator: generator.clone(), monomial: m.clone() });
        Ok(ModuleElement { alphabet: alphabet.clone(), value })
    }

    pub fn zero(alphabet: &Alphabet) -> Self {
        ModuleElement { alphabet: alphabet.clone(), value: LinComb::zero() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn value(&self) -> &LinComb<ModuleBasis> {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn same_alphabet(&self, other: &ModuleElement) -> Result<(), EnvelopingError> {
        if self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(EnvelopingError::AlphabetMismatch)
        }
    }

    pub fn add(&self, other: &ModuleElement) -> Result<Self, EnvelopingError> {
        self.same_alphabet(other)?;
        Ok(ModuleElement { alphabet: self.alphabet.clone(), value: &self.value + &other.value })
    }

    pub fn sub(&self, other: &ModuleElement) -> Result<Self, EnvelopingError> {
        self.same_alphabet(other)?;
        Ok(ModuleElement { alphabet: self.alphabet.clone(), value: &self.value - &other.value })
    }

    pub fn scalar_mul(&self, c: &Coefficient) -> Self {
        ModuleElement { alphabet: self.alphabet.clone(), value: self.value.scalar_mul(c) }
    }

    fn max_weight(&self) -> usize {
        self.value.keys().map(|b| 1 + b.monomial.weight()).max().unwrap_or(0)
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// `(v ⊗ u) · a = v ⊗ (u a)` for a tree `a`.
pub fn module_act(m: &ModuleElement, a: &RootedTree, cutoff: usize) -> Result<ModuleElement, EnvelopingError> {
    check_cutoff(m.max_weight() + a.size(), cutoff)?;
    let mut value = LinComb::zero();
    for (b, c) in m.value.iter() {
        let mut w = b.monomial.0.clone();
        w.push(GradedTree(a.clone()));
        for (mono, d) in straighten(LinComb::basis(w), RewriteOrder::Leftmost) {
            value.add_term(ModuleBasis { generator: b.generator.clone(), monomial: mono }, c * &d);
        }
    }
    Ok(ModuleElement { alphabet: m.alphabet.clone(), value })
}

/// `ψ(v ⊗ u) = v · u`, the single-vertex tree `v` acted on by `u`.
pub fn psi_map(m: &ModuleElement, cutoff: usize) -> Result<FreeElement, EnvelopingError> {
    check_cutoff(m.max_weight(), cutoff)?;
    let mut out = FreeElement::zero(&m.alphabet);
    for (b, c) in m.value.iter() {
        let leaf = FreeElement::generator(&m.alphabet, &b.generator)?;
        let image = right_action(&leaf, &LinComb::basis(b.monomial.clone()), cutoff)?;
        out = out.add(&image.scalar_mul(c))?;
    }
    Ok(out)
}

/// `(v, u) ∗ (v', u') = (v, u · ψ(v' ⊗ u'))`, with `ψ(v' ⊗ u')` expanded in
/// the tree basis and each product straightened.
pub fn module_product(a: &ModuleElement, b: &ModuleElement, cutoff: usize) -> Result<ModuleElement, EnvelopingError> {
    a.same_alphabet(b)?;
    check_cutoff(a.max_weight() + b.max_weight(), cutoff)?;
    let image = psi_map(b, cutoff)?;
    let mut out = ModuleElement::zero(&a.alphabet);
    for (t, c) in image.value().iter() {
        out = out.add(&module_act(a, t, cutoff)?.scalar_mul(c))?;
    }
    Ok(out)
}

/// All PBW monomials of exactly `weight`, from the given `L_Lie` basis
/// (which must be sorted and contain every tree of weight ≤ `weight`).
pub fn pbw_monomials(basis: &[GradedTree], weight: usize) -> Vec<PBWMonomial> {
    fn go(basis: &[GradedTree], start: usize, budget: usize, cur: &mut Vec<GradedTree>, out: &mut Vec<PBWMonomial>) {
        if budget == 0 {
            out.push(PBWMonomial(cur.clone()));
            return;
        }
        for (k, g) in basis.iter().enumerate().skip(start) {
            if g.weight() > budget {
                break;
            }
            cur.push(g.clone());
            go(basis, k, budget - g.weight(), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(basis, 0, weight, &mut Vec::new(), &mut out);
    out
}

/// Number of multisets of total weight `n` drawn from `counts[k]` kinds of
/// weight `k` (Euler transform), for `n = 0..counts.len()`.
pub fn forest_counts(counts: &[usize]) -> Vec<BigUint> {
    let len = counts.len();
    let c: Vec<BigUint> = (0..len)
        .map(|k| {
            (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| BigUint::from(d) * BigUint::from(counts[d]))
                .sum()
        })
        .collect();
    let mut f = vec![BigUint::zero(); len];
    if len > 0 {
        f[0] = BigUint::one();
    }
    for n in 1..len {
        let s: BigUint = (1..=n).map(|k| &c[k] * &f[n - k]).sum();
        f[n] = s / BigUint::from(n);
    }
    f
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessBlock {
    pub weight: usize,
    /// Trees of this weight (rows).
    pub trees: usize,
    /// Generator × PBW monomials of weight `weight - 1` (columns).
    pub module_dim: usize,
    /// `#generators ×` the forest count of weight `weight - 1`.
    pub forest_oracle: usize,
    pub rank: usize,
}

impl FreenessBlock {
    pub fn invertible(&self) -> bool {
        self.trees == self.module_dim && self.rank == self.trees && self.forest_oracle == self.module_dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub generators: usize,
    pub max_weight: usize,
    pub blocks: Vec<FreenessBlock>,
}

impl FreenessReport {
    pub fn passed(&self) -> bool {
        self.blocks.iter().all(FreenessBlock::invertible)
    }
}

impl fmt::Display for FreenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "weight\ttrees\tV⊗U\tforests\trank\tinvertible")?;
        for b in &self.blocks {
            writeln!(
                f,
                "{}\t{}\t{}\t{}\t{}\t{}",
                b.weight,
                b.trees,
                b.module_dim,
                b.forest_oracle,
                b.rank,
                if b.invertible() { "yes" } else { "no" }
            )?;
        }
        write!(f, "free: {}", if self.passed() { "yes" } else { "no" })
    }
}

fn freeness_limit(generators: usize) -> usize {
    match generators {
        1 => 7,
        2 => 5,
        _ => 4,
    }
}

/// The matrix of `ψ : (V ⊗ U)_{weight - 1} → L_weight`.
pub fn psi_matrix(alphabet: &Alphabet, weight: usize) -> Result<ExactMatrix, EnvelopingError> {
    let graded = basis_up_to_weight(alphabet, weight)?;
    Ok(psi_block(alphabet, &graded, weight)?.0)
}

fn psi_block(
    alphabet: &Alphabet,
    graded: &[(usize, Vec<RootedTree>)],
    weight: usize,
) -> Result<(ExactMatrix, usize), EnvelopingError> {
    let lie_basis: Vec<GradedTree> =
        graded.iter().flat_map(|(_, ts)| ts.iter().cloned().map(GradedTree)).collect();
    let rows: &[RootedTree] = graded.iter().find(|(w, _)| *w == weight).map_or(&[], |(_, ts)| ts);
    let row_index: BTreeMap<&RootedTree, usize> = rows.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let monomials = pbw_monomials(&lie_basis, weight - 1);
    let mut cols = Vec::new();
    for g in alphabet.labels() {
        for m in &monomials {
            let elem = ModuleElement::new(alphabet, g, &LinComb::basis(m.clone()))?;
            let image = psi_map(&elem, weight)?;
            cols.push(image);
        }
    }
    let mut mat = ExactMatrix::zeros(rows.len(), cols.len());
    for (c, image) in cols.iter().enumerate() {
        for (t, v) in image.value().iter() {
            mat.set(row_index[t], c, v.clone());
        }
    }
    Ok((mat, monomials.len()))
}

/// Checks that `ψ : V ⊗ U(L_Lie) → L` is bijective in each weight up to `max_weight`.
pub fn check_freeness(alphabet: &Alphabet, max_weight: usize) -> Result<FreenessReport, EnvelopingError> {
    let generators = alphabet.len();
    let limit = freeness_limit(generators);
    if max_weight > limit {
        return Err(EnvelopingError::TooLarge { generators, weight: max_weight, limit });
    }
    let graded = basis_up_to_weight(alphabet, max_weight)?;
    let mut counts = vec![0usize; max_weight + 1];
    for (w, ts) in &graded {
        counts[*w] = ts.len();
    }
    let forests = forest_counts(&counts);
    let blocks = (1..=max_weight)
        .into_par_iter()
        .map(|w| {
            let (mat, monomials) = psi_block(alphabet, &graded, w)?;
            let forest = usize::try_from(&forests[w - 1]).expect("forest count fits in usize");
            Ok(FreenessBlock {
                weight: w,
                trees: mat.rows(),
                module_dim: generators * monomials,
                forest_oracle: generators * forest,
                rank: mat.rank(),
            })
        })
        .collect::<Result<Vec<_>, EnvelopingError>>()?;
    Ok(FreenessReport { generators, max_weight, blocks })
}
