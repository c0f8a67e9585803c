//! The pre-Lie chain complex `CPL_n(L) = L ⊗ Λ^{n-1}(L)` and its homology.
//!
//! Chains are graded by total weight and the differential preserves weight,
//! so everything is computed one weight block at a time, exactly.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::freeprelie::{basis_up_to_weight, Alphabet, FreeError};
use crate::linalg::ExactMatrix;
use crate::trees::{graft_sum, RootedTree};

/// Largest chain block (rows or columns) the rank computation accepts.
pub const MAX_BLOCK_DIM: usize = 20000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("structure constants must form a {0}×{0}×{0} array")]
    TableShape(usize),
    #[error("the table is empty")]
    EmptyTable,
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("e{i}·e{j} has a component on e{k}, whose weight is not w(e{i}) + w(e{j})")]
    NotGraded { i: usize, j: usize, k: usize },
    #[error("the pre-Lie identity fails on (e{0}, e{1}, e{2})")]
    NotPreLie(usize, usize, usize),
    #[error("change of basis must be an invertible {0}×{0} matrix")]
    BadChangeOfBasis(usize),
    #[error("change of basis mixes basis vectors of different weights")]
    MixedWeights,
    #[error("weight {weight} exceeds the cutoff {cutoff}")]
    WeightAboveCutoff { weight: usize, cutoff: usize },
    #[error("degree {got} is below the minimum {min}")]
    DegreeTooSmall { got: usize, min: usize },
    #[error("chain block of degree {degree} and weight {weight} has dimension {dim}, above {MAX_BLOCK_DIM}")]
    BlockTooLarge { degree: usize, weight: usize, dim: usize },
    #[error(transparent)]
    Free(#[from] FreeError),
}

/// A sparse vector: `(basis index, coefficient)` pairs, indices ascending.
pub type SparseVec = Vec<(usize, BigRational)>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn sparse_from(acc: BTreeMap<usize, BigRational>) -> SparseVec {
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A finite-dimensional graded algebra given by structure constants:
/// `e_i · e_j = Σ_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTable {
    weights: Vec<usize>,
    constants: Vec<Vec<Vec<BigRational>>>,
    products: Vec<Vec<SparseVec>>,
}

impl FiniteTable {
    /// All basis vectors get weight 0.
    pub fn new(constants: Vec<Vec<Vec<BigRational>>>) -> Result<Self, HomologyError> {
        let dim = constants.len();
        Self::with_weights(vec![0; dim], constants)
    }

    pub fn with_weights(weights: Vec<usize>, constants: Vec<Vec<Vec<BigRational>>>) -> Result<Self, HomologyError> {
        let dim = constants.len();
        if dim == 0 {
            return Err(HomologyError::EmptyTable);
        }
        if weights.len() != dim {
            return Err(HomologyError::WeightCount { expected: dim, got: weights.len() });
        }
        if constants.iter().any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim)) {
            return Err(HomologyError::TableShape(dim));
        }
        for (i, row) in constants.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if let Some(k) = (0..dim).find(|&k| !v[k].is_zero() && weights[k] != weights[i] + weights[j]) {
                    return Err(HomologyError::NotGraded { i, j, k });
                }
            }
        }
        let products = constants
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect())
                    .collect()
            })
            .collect();
        let table = FiniteTable { weights, constants, products };
        if let Some((a, b, c)) = table.pre_lie_failure() {
            return Err(HomologyError::NotPreLie(a, b, c));
        }
        Ok(table)
    }

    pub fn from_i64(constants: &[Vec<Vec<i64>>]) -> Result<Self, HomologyError> {
        Self::new(constants.iter().map(|r| r.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.constants[i][j][k]
    }

    fn mul_dense(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim();
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in &self.products[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// First basis triple violating `(x,y,z) = (x,z,y)` for the associator.
    fn pre_lie_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let unit = |i: usize| -> Vec<BigRational> {
            let mut v = vec![BigRational::zero(); n];
            v[i] = BigRational::one();
            v
        };
        let assoc = |a: usize, b: usize, c: usize| -> Vec<BigRational> {
            let (ea, eb, ec) = (unit(a), unit(b), unit(c));
            let left = self.mul_dense(&self.mul_dense(&ea, &eb), &ec);
            let right = self.mul_dense(&ea, &self.mul_dense(&eb, &ec));
            left.into_iter().zip(right).map(|(l, r)| l - r).collect()
        };
        for a in 0..n {
            for b in 0..n {
                for c in b + 1..n {
                    if assoc(a, b, c) != assoc(a, c, b) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The same algebra in the basis `f_i = Σ_k p[k][i] e_k`.
    pub fn transport(&self, p: &ExactMatrix) -> Result<FiniteTable, HomologyError> {
        let n = self.dim();
        if p.rows() != n || p.cols() != n {
            return Err(HomologyError::BadChangeOfBasis(n));
        }
        let inv = p.inverse().ok_or(HomologyError::BadChangeOfBasis(n))?;
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut ws = (0..n).filter(|&k| !p.get(k, i).is_zero()).map(|k| self.weights[k]);
            let w = ws.next().ok_or(HomologyError::BadChangeOfBasis(n))?;
            if ws.any(|x| x != w) {
                return Err(HomologyError::MixedWeights);
            }
            weights.push(w);
        }
        let mut constants = vec![vec![vec![BigRational::zero(); n]; n]; n];
        for (i, row) in constants.iter_mut().enumerate() {
            for (j, out) in row.iter_mut().enumerate() {
                let fi: Vec<BigRational> = (0..n).map(|k| p.get(k, i).clone()).collect();
                let fj: Vec<BigRational> = (0..n).map(|k| p.get(k, j).clone()).collect();
                let prod = self.mul_dense(&fi, &fj);
                for (d, slot) in out.iter_mut().enumerate() {
                    *slot = (0..n).map(|c| inv.get(d, c) * &prod[c]).sum();
                }
            }
        }
        FiniteTable::with_weights(weights, constants)
    }

    /// The zero product on `dim` basis vectors.
    pub fn abelian(dim: usize) -> Result<Self, HomologyError> {
        Self::new(vec![vec![vec![BigRational::zero(); dim]; dim]; dim])
    }

    /// `k^dim` with the componentwise product.
    pub fn diagonal(dim: usize) -> Result<Self, HomologyError> {
        let mut c = vec![vec![vec![BigRational::zero(); dim]; dim]; dim];
        for (i, row) in c.iter_mut().enumerate() {
            row[i][i] = BigRational::one();
        }
        Self::new(c)
    }

    /// Upper triangular 2×2 matrices in the basis `E11, E12, E22`.
    pub fn upper_triangular() -> Result<Self, HomologyError> {
        let mut c = vec![vec![vec![0i64; 3]; 3]; 3];
        c[0][0][0] = 1;
        c[0][1][1] = 1;
        c[1][2][1] = 1;
        c[2][2][2] = 1;
        Self::from_i64(&c)
    }

    /// `x · y = E(x) y` on `k[t]/t³` (basis `1, t, t²`), where
    /// `E = λ·id + D` and `D` is the derivation with `D(t) = a t + b t²`.
    pub fn derivation_family(lambda: &BigRational, a: &BigRational, b: &BigRational) -> Result<Self, HomologyError> {
        // E on the basis: E(1) = λ, E(t) = (λ + a) t + b t², E(t²) = (λ + 2a) t².
        let e = [
            vec![lambda.clone(), BigRational::zero(), BigRational::zero()],
            vec![BigRational::zero(), lambda + a, b.clone()],
            vec![BigRational::zero(), BigRational::zero(), lambda + a * q(2)],
        ];
        let mut c = vec![vec![vec![BigRational::zero(); 3]; 3]; 3];
        for (i, ei) in e.iter().enumerate() {
            for (j, row) in c[i].iter_mut().enumerate() {
                // t^m · t^j = t^{m+j}, zero once m + j ≥ 3.
                for (m, coef) in ei.iter().enumerate() {
                    if m + j < 3 {
                        row[m + j] += coef;
                    }
                }
            }
        }
        Self::new(c)
    }
}

/// The free pre-Lie algebra on an alphabet, truncated at a weight cutoff.
/// Basis: labelled rooted trees in (weight, canonical) order.
#[derive(Debug, Clone)]
pub struct FreeOnGenerators {
    alphabet: Alphabet,
    cutoff: usize,
    trees: Vec<RootedTree>,
    weights: Vec<usize>,
    products: HashMap<(usize, usize), SparseVec>,
}

impl FreeOnGenerators {
    pub fn new(alphabet: &Alphabet, cutoff: usize) -> Result<Self, HomologyError> {
        let graded = basis_up_to_weight(alphabet, cutoff)?;
        let mut trees = Vec::new();
        let mut weights = Vec::new();
        for (w, ts) in graded {
            weights.extend(std::iter::repeat(w).take(ts.len()));
            trees.extend(ts);
        }
        let index: HashMap<&RootedTree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut products = HashMap::new();
        for i in 0..trees.len() {
            for j in 0..trees.len() {
                if weights[i] + weights[j] > cutoff {
                    continue;
                }
                let mut v: SparseVec = graft_sum(&trees[i], &trees[j])
                    .into_iter()
                    .map(|(t, c)| (index[&t], c))
                    .collect();
                v.sort_by_key(|(k, _)| *k);
                products.insert((i, j), v);
            }
        }
        Ok(FreeOnGenerators { alphabet: alphabet.clone(), cutoff, trees, weights, products })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn trees(&self) -> &[RootedTree] {
        &self.trees
    }
}

#[derive(Debug, Clone)]
pub enum PreLieStructure {
    FiniteTable(FiniteTable),
    FreeOnGenerators(FreeOnGenerators),
}

impl PreLieStructure {
    pub fn free(alphabet: &Alphabet, cutoff: usize) -> Result<Self, HomologyError> {
        Ok(PreLieStructure::FreeOnGenerators(FreeOnGenerators::new(alphabet, cutoff)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            PreLieStructure::FiniteTable(t) => t.dim(),
            PreLieStructure::FreeOnGenerators(f) => f.trees.len(),
        }
    }

    pub fn weight(&self, i: usize) -> usize {
        match self {
            PreLieStructure::FiniteTable(t) => t.weights[i],
            PreLieStructure::FreeOnGenerators(f) => f.weights[i],
        }
    }

    /// `e_i · e_j`. For a free structure the weights must sum to at most the cutoff.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, BigRational)] {
        match self {
            PreLieStructure::FiniteTable(t) => &t.products[i][j],
            PreLieStructure::FreeOnGenerators(f) => f
                .products
                .get(&(i, j))
                .expect("product above the weight cutoff"),
        }
    }

    /// `[e_i, e_j] = e_i · e_j - e_j · e_i`.
    pub fn bracket(&self, i: usize, j: usize) -> SparseVec {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (k, c) in self.product(i, j) {
            *acc.entry(*k).or_insert_with(BigRational::zero) += c;
        }
        for (k, c) in self.product(j, i) {
            *acc.entry(*k).or_insert_with(BigRational::zero) -= c;
        }
        sparse_from(acc)
    }

    pub fn basis_name(&self, i: usize) -> String {
        match self {
            PreLieStructure::FiniteTable(_) => format!("e{i}"),
            PreLieStructure::FreeOnGenerators(f) => f.trees[i].to_string(),
        }
    }

    fn check_weight(&self, w: usize) -> Result<(), HomologyError> {
        match self {
            PreLieStructure::FreeOnGenerators(f) if w > f.cutoff => {
                Err(HomologyError::WeightAboveCutoff { weight: w, cutoff: f.cutoff })
            }
            _ => Ok(()),
        }
    }

    fn block_weights(&self, w_max: usize) -> Result<Vec<usize>, HomologyError> {
        self.check_weight(w_max)?;
        Ok(match self {
            PreLieStructure::FiniteTable(_) => (0..=w_max).collect(),
            PreLieStructure::FreeOnGenerators(_) => (1..=w_max).collect(),
        })
    }
}

/// `v₀ ⊗ v₁ ∧ … ∧ v_{n-1}` with the wedge strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChainBasisElement {
    pub head: usize,
    pub wedge: Vec<usize>,
}

impl ChainBasisElement {
    pub fn degree(&self) -> usize {
        1 + self.wedge.len()
    }

    pub fn display<'a>(&'a self, l: &'a PreLieStructure) -> impl fmt::Display + 'a {
        ChainDisplay { elem: self, l }
    }
}

struct ChainDisplay<'a> {
    elem: &'a ChainBasisElement,
    l: &'a PreLieStructure,
}

impl fmt::Display for ChainDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.l.basis_name(self.elem.head))?;
        for (k, v) in self.elem.wedge.iter().enumerate() {
            let sep = if k == 0 { " ⊗ " } else { " ∧ " };
            write!(f, "{sep}{}", self.l.basis_name(*v))?;
        }
        Ok(())
    }
}

/// Basis of `CPL_n(L)` in weight `w`, ordered by head then wedge.
pub fn chain_basis(l: &PreLieStructure, n: usize, w: usize) -> Result<Vec<ChainBasisElement>, HomologyError> {
    if n == 0 {
        return Err(HomologyError::DegreeTooSmall { got: n, min: 1 });
    }
    l.check_weight(w)?;
    let dim = l.dim();
    let min_weight = (0..dim).map(|i| l.weight(i)).min().unwrap_or(0);
    let mut out = Vec::new();
    let mut wedge = Vec::with_capacity(n - 1);
    for head in 0..dim {
        let hw = l.weight(head);
        if hw <= w {
            extend_wedges(l, head, 0, n - 1, w - hw, min_weight, &mut wedge, &mut out);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_wedges(
    l: &PreLieStructure,
    head: usize,
    start: usize,
    remaining: usize,
    budget: usize,
    min_weight: usize,
    wedge: &mut Vec<usize>,
    out: &mut Vec<ChainBasisElement>,
) {
    if remaining == 0 {
        if budget == 0 {
            out.push(ChainBasisElement { head, wedge: wedge.clone() });
        }
        return;
    }
    if remaining * min_weight > budget {
        return;
    }
    for v in start..l.dim() {
        let vw = l.weight(v);
        if vw > budget {
            continue;
        }
        wedge.push(v);
        extend_wedges(l, head, v + 1, remaining - 1, budget - vw, min_weight, wedge, out);
        wedge.pop();
    }
}

fn sign(k: usize) -> BigRational {
    if k % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// `d(v₀ ⊗ v₁∧…∧v_k)` as a sparse combination of chain basis elements.
pub fn differential_of(l: &PreLieStructure, x: &ChainBasisElement) -> BTreeMap<ChainBasisElement, BigRational> {
    let mut acc: BTreeMap<ChainBasisElement, BigRational> = BTreeMap::new();
    let mut push = |e: ChainBasisElement, c: BigRational| {
        let slot = acc.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
    };
    let v = &x.wedge;
    let k = v.len();
    for j in 1..=k {
        let rest: Vec<usize> = v.iter().enumerate().filter(|&(p, _)| p != j - 1).map(|(_, &u)| u).collect();
        let s = sign(j);
        for (h, c) in l.product(x.head, v[j - 1]) {
            push(ChainBasisElement { head: *h, wedge: rest.clone() }, &s * c);
        }
    }
    for i in 1..=k {
        for j in i + 1..=k {
            let rest: Vec<usize> =
                v.iter().enumerate().filter(|&(p, _)| p != i - 1 && p != j - 1).map(|(_, &u)| u).collect();
            let s = sign(i + j - 1);
            for (m, c) in l.bracket(v[i - 1], v[j - 1]) {
                // Moving the bracket from the front into sorted position.
                let pos = match rest.binary_search(&m) {
                    Ok(_) => continue,
                    Err(p) => p,
                };
                let mut wedge = rest.clone();
                wedge.insert(pos, m);
                push(ChainBasisElement { head: x.head, wedge }, &s * &sign(pos) * c);
            }
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// Sparse columns of `d_n`, indexed into the degree `n-1` basis.
fn sparse_differential(
    l: &PreLieStructure,
    source: &[ChainBasisElement],
    target: &[ChainBasisElement],
) -> Vec<SparseVec> {
    let index: HashMap<&ChainBasisElement, usize> = target.iter().enumerate().map(|(i, e)| (e, i)).collect();
    source
        .iter()
        .map(|x| {
            differential_of(l, x)
                .into_iter()
                .map(|(e, c)| (*index.get(&e).expect("differential left its weight block"), c))
                .collect()
        })
        .collect()
}

fn dense(rows: usize, cols: &[SparseVec]) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows, cols.len());
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col {
            m.set(*r, c, v.clone());
        }
    }
    m
}

/// Matrix of `d_n : CPL_n → CPL_{n-1}` in weight `w`; rows index degree `n-1`.
pub fn differential(l: &PreLieStructure, n: usize, w: usize) -> Result<ExactMatrix, HomologyError> {
    if n < 2 {
        return Err(HomologyError::DegreeTooSmall { got: n, min: 2 });
    }
    let source = chain_basis(l, n, w)?;
    let target = chain_basis(l, n - 1, w)?;
    Ok(dense(target.len(), &sparse_differential(l, &source, &target)))
}

/// `d_n ∘ d_{n+1} = 0`, checked column by column.
fn composite_vanishes(outer: &[SparseVec], inner: &[SparseVec]) -> bool {
    inner.iter().all(|col| {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (mid, a) in col {
            for (r, b) in &outer[*mid] {
                *acc.entry(*r).or_insert_with(BigRational::zero) += a * b;
            }
        }
        acc.values().all(Zero::is_zero)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightBlock {
    pub weight: usize,
    /// `dim CPL_n` for `n = 1..=n_max`.
    pub chain_dims: Vec<usize>,
    /// `rank d_n` for `n = 1..=n_max + 1` (`d_1 = 0`).
    pub ranks: Vec<usize>,
    /// `dim HPL_n` for `n = 1..=n_max`.
    pub homology: Vec<usize>,
    pub d_squared_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub n_max: usize,
    pub blocks: Vec<WeightBlock>,
}

impl HomologyTable {
    pub fn d_squared_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.d_squared_zero)
    }

    pub fn homology(&self, n: usize, w: usize) -> Option<usize> {
        let b = self.blocks.iter().find(|b| b.weight == w)?;
        b.homology.get(n.checked_sub(1)?).copied()
    }

    /// `HPL_1` has dimension `generators` in weight 1 and every other entry vanishes.
    pub fn concentrated_in_degree_one(&self, generators: usize) -> bool {
        self.blocks.iter().all(|b| {
            b.homology.iter().enumerate().all(|(k, &h)| {
                let expected = if k == 0 && b.weight == 1 { generators } else { 0 };
                h == expected
            })
        })
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weight")?;
        for n in 1..=self.n_max {
            write!(f, "\tHPL{n}")?;
        }
        writeln!(f)?;
        for b in &self.blocks {
            write!(f, "{}", b.weight)?;
            for h in &b.homology {
                write!(f, "\t{h}")?;
            }
            writeln!(f)?;
        }
        write!(f, "d^2 = 0: {}", if self.d_squared_zero() { "yes" } else { "no" })
    }
}

fn compute_block(l: &PreLieStructure, n_max: usize, w: usize) -> Result<WeightBlock, HomologyError> {
    let mut bases = Vec::with_capacity(n_max + 1);
    for n in 1..=n_max + 1 {
        let b = chain_basis(l, n, w)?;
        if b.len() > MAX_BLOCK_DIM {
            return Err(HomologyError::BlockTooLarge { degree: n, weight: w, dim: b.len() });
        }
        bases.push(b);
    }
    // diffs[k] is d_{k+2}.
    let diffs: Vec<Vec<SparseVec>> = (1..bases.len())
        .map(|k| sparse_differential(l, &bases[k], &bases[k - 1]))
        .collect();
    let d_squared_zero = diffs.windows(2).all(|p| composite_vanishes(&p[0], &p[1]));
    let mut ranks = vec![0];
    for (k, d) in diffs.iter().enumerate() {
        let rows = bases[k].len();
        ranks.push(if rows == 0 || d.is_empty() { 0 } else { dense(rows, d).rank() });
    }
    let chain_dims: Vec<usize> = bases[..n_max].iter().map(Vec::len).collect();
    let homology = (0..n_max).map(|k| chain_dims[k] - ranks[k] - ranks[k + 1]).collect();
    Ok(WeightBlock { weight: w, chain_dims, ranks, homology, d_squared_zero })
}

/// `dim HPL_n` for `1 ≤ n ≤ n_max` in every weight up to `w_max`
/// (weights from 1 for free structures, from 0 for tables).
pub fn homology_ranks(l: &PreLieStructure, n_max: usize, w_max: usize) -> Result<HomologyTable, HomologyError> {
    if n_max == 0 {
        return Err(HomologyError::DegreeTooSmall { got: 0, min: 1 });
    }
    let blocks = l
        .block_weights(w_max)?
        .into_par_iter()
        .map(|w| compute_block(l, n_max, w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(HomologyTable { n_max, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idempotent() -> PreLieStructure {
        PreLieStructure::FiniteTable(FiniteTable::from_i64(&[vec![vec![1]]]).unwrap())
    }

    fn line() -> PreLieStructure {
        PreLieStructure::FiniteTable(FiniteTable::abelian(1).unwrap())
    }

    fn free_x(cutoff: usize) -> PreLieStructure {
        PreLieStructure::free(&Alphabet::new(["x"]).unwrap(), cutoff).unwrap()
    }

    #[test]
    fn chain_bases_of_small_examples() {
        let l = line();
        assert_eq!(chain_basis(&l, 2, 0).unwrap(), vec![ChainBasisElement { head: 0, wedge: vec![0] }]);
        assert!(chain_basis(&l, 3, 0).unwrap().is_empty());

        let f = free_x(3);
        let shown: Vec<String> =
            chain_basis(&f, 2, 3).unwrap().iter().map(|e| e.display(&f).to_string()).collect();
        assert_eq!(shown, vec!["(x) ⊗ (x (x))", "(x (x)) ⊗ (x)"]);
        assert!(matches!(chain_basis(&f, 2, 4), Err(HomologyError::WeightAboveCutoff { .. })));
    }

    #[test]
    fn differential_examples() {
        assert_eq!(differential(&idempotent(), 2, 0).unwrap(), ExactMatrix::from_i64(&[&[-1]]));
        let ab = PreLieStructure::FiniteTable(FiniteTable::abelian(3).unwrap());
        for n in 2..=4 {
            assert!(differential(&ab, n, 0).unwrap().is_zero());
        }
    }

    #[test]
    fn degree_three_signs() {
        // Three basis vectors of a free algebra, all with distinct products.
        let f = free_x(4);
        let x = ChainBasisElement { head: 0, wedge: vec![0, 1] };
        let d = differential_of(&f, &x);
        let mut expected: BTreeMap<ChainBasisElement, BigRational> = BTreeMap::new();
        let mut add = |head: usize, wedge: Vec<usize>, c: &BigRational, s: i64| {
            *expected.entry(ChainBasisElement { head, wedge }).or_insert_with(BigRational::zero) += c * q(s);
        };
        for (h, c) in f.product(0, 0) {
            add(*h, vec![1], c, -1);
        }
        for (h, c) in f.product(0, 1) {
            add(*h, vec![0], c, 1);
        }
        for (m, c) in f.bracket(0, 1) {
            add(0, vec![m], &c, 1);
        }
        expected.retain(|_, c| !c.is_zero());
        assert_eq!(d, expected);
    }

    #[test]
    fn homology_of_small_tables() {
        let t = homology_ranks(&line(), 4, 0).unwrap();
        assert_eq!(t.blocks[0].homology, vec![1, 1, 0, 0]);
        let t = homology_ranks(&idempotent(), 3, 0).unwrap();
        assert_eq!(t.blocks[0].homology, vec![0, 0, 0]);
        assert!(t.d_squared_zero());
    }

    #[test]
    fn free_on_one_generator_is_concentrated() {
        let t = homology_ranks(&free_x(4), 4, 4).unwrap();
        assert!(t.d_squared_zero());
        assert!(t.concentrated_in_degree_one(1));
        assert_eq!(t.homology(1, 1), Some(1));
    }

    #[test]
    fn tables_are_validated() {
        // e·e = e on a weight-1 vector breaks the grading.
        let c = vec![vec![vec![q(1)]]];
        assert_eq!(FiniteTable::with_weights(vec![1], c), Err(HomologyError::NotGraded { i: 0, j: 0, k: 0 }));
        // e0·e0 = e1, e1·e0 = e0: (e0,e0,e1) = 0 but (e0,e1,e0) = -e1.
        let mut c = vec![vec![vec![0i64; 2]; 2]; 2];
        c[0][0][1] = 1;
        c[1][0][0] = 1;
        assert!(matches!(FiniteTable::from_i64(&c), Err(HomologyError::NotPreLie(..))));
        assert!(FiniteTable::upper_triangular().is_ok());
        assert!(FiniteTable::diagonal(3).is_ok());
        assert!(FiniteTable::derivation_family(&q(2), &q(-1), &q(3)).is_ok());
    }

    #[test]
    fn transport_preserves_the_identity() {
        let base = FiniteTable::derivation_family(&q(1), &q(1), &q(1)).unwrap();
        let p = ExactMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]);
        let t = base.transport(&p).unwrap();
        let back = t.transport(&p.inverse().unwrap()).unwrap();
        assert_eq!(back, base);
        let singular = ExactMatrix::from_i64(&[&[1, 1, 0], &[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(base.transport(&singular), Err(HomologyError::BadChangeOfBasis(3)));
    }
}
