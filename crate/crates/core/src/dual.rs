//! Arity-three quadratic duality for the pre-Lie relator.
//!
//! `F(3)` has the twelve basis words `((x_i x_j) x_k)` and `(x_i (x_j x_k))`.
//! It carries a diagonal pairing with `⟨i(jk), i(jk)⟩ = sgn(ijk)` and
//! `⟨(ij)k, (ij)k⟩ = -sgn(ijk)`. The relation module `R` of pre-Lie algebras
//! is generated by the relator; its annihilator is the relation module of
//! Perm algebras, generated by `s = (12)3 - 1(23)` and `t = (12)3 - (13)2`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lincomb::{coeff, LinComb};
use crate::linalg::{span_basis, ExactMatrix};
use crate::words::{relator, s3, Word, WordComb};

pub const F3_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualError {
    #[error("word {0} is not a basis word of F(3)")]
    NotInF3(String),
    #[error("Perm table dimension {0} is outside 1..=6")]
    TableTooLarge(usize),
    #[error("structure constants have the wrong shape for dimension {0}")]
    TableShape(usize),
}

/// The twelve basis words, ordered by permutation (lexicographic) and then
/// left comb before right comb.
pub fn f3_basis() -> Vec<Word> {
    s3().iter()
        .flat_map(|&[i, j, k]| {
            [
                Word::pair(Word::pair(Word::Var(i), Word::Var(j)), Word::Var(k)),
                Word::pair(Word::Var(i), Word::pair(Word::Var(j), Word::Var(k))),
            ]
        })
        .collect()
}

fn sign_of(p: &[u32; 3]) -> i64 {
    let inversions = (0..3)
        .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
        .filter(|&(a, b)| p[a] > p[b])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Diagonal of the pairing in the order of [`f3_basis`].
pub fn pairing_diagonal() -> Vec<BigRational> {
    s3().iter()
        .flat_map(|p| {
            let sgn = sign_of(p);
            [coeff(-sgn), coeff(sgn)]
        })
        .collect()
}

/// A vector of `F(3)` in the coordinates of [`f3_basis`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F3Vector(Vec<BigRational>);

impl F3Vector {
    pub fn zero() -> Self {
        F3Vector(vec![BigRational::zero(); F3_DIM])
    }

    pub fn from_coords(coords: Vec<BigRational>) -> Self {
        assert_eq!(coords.len(), F3_DIM);
        F3Vector(coords)
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn from_words(w: &WordComb) -> Result<Self, DualError> {
        let basis = f3_basis();
        let mut coords = vec![BigRational::zero(); F3_DIM];
        for (word, c) in w.iter() {
            let k = basis
                .iter()
                .position(|b| b == word)
                .ok_or_else(|| DualError::NotInF3(word.to_string()))?;
            coords[k] += c;
        }
        Ok(F3Vector(coords))
    }

    pub fn to_words(&self) -> WordComb {
        f3_basis().into_iter().zip(self.0.iter().cloned()).collect::<LinComb<Word>>()
    }

    /// `σ · v`, permuting variable indices; `perm[k-1] = σ(k)`.
    pub fn act(&self, perm: &[u32; 3]) -> Self {
        let moved = self.to_words().map_basis(|w| w.act(perm).expect("three variables"));
        F3Vector::from_words(&moved).expect("S3 preserves F(3)")
    }
}

impl fmt::Display for F3Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_words().fmt(f)
    }
}

impl Serialize for F3Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn scalar_product(u: &F3Vector, v: &F3Vector) -> BigRational {
    pairing_diagonal()
        .iter()
        .zip(u.0.iter().zip(v.0.iter()))
        .fold(BigRational::zero(), |acc, (g, (a, b))| acc + g * a * b)
}

fn to_rows(vs: &[F3Vector]) -> Vec<Vec<BigRational>> {
    vs.iter().map(|v| v.0.clone()).collect()
}

fn from_rows(rows: Vec<Vec<BigRational>>) -> Vec<F3Vector> {
    rows.into_iter().map(F3Vector).collect()
}

/// Reduced row echelon basis of a span.
pub fn echelon_basis(vs: &[F3Vector]) -> Vec<F3Vector> {
    from_rows(span_basis(F3_DIM, &to_rows(vs)))
}

/// Echelon basis of the S3-submodule generated by `gens`.
pub fn submodule_generated(gens: &[F3Vector]) -> Vec<F3Vector> {
    let orbit: Vec<F3Vector> = gens
        .iter()
        .flat_map(|g| s3().into_iter().map(move |p| g.act(&p)))
        .collect();
    echelon_basis(&orbit)
}

/// Echelon basis of `{v : ⟨u, v⟩ = 0 for all u in subspace}`.
pub fn annihilator(subspace: &[F3Vector]) -> Vec<F3Vector> {
    let diag = pairing_diagonal();
    let rows: Vec<Vec<BigRational>> = subspace
        .iter()
        .map(|u| u.0.iter().zip(&diag).map(|(a, g)| a * g).collect())
        .collect();
    if rows.is_empty() {
        let all: Vec<F3Vector> = (0..F3_DIM)
            .map(|k| {
                let mut v = F3Vector::zero();
                v.0[k] = BigRational::one();
                v
            })
            .collect();
        return echelon_basis(&all);
    }
    let kernel = ExactMatrix::from_rows(F3_DIM, &rows).kernel();
    echelon_basis(&from_rows(kernel))
}

/// `s = ((x1 x2) x3) - (x1 (x2 x3))`.
pub fn perm_relation_s() -> WordComb {
    let v = Word::var;
    let p = Word::pair;
    [(p(p(v(1), v(2)), v(3)), 1), (p(v(1), p(v(2), v(3))), -1)]
        .into_iter()
        .map(|(w, c)| (w, coeff(c)))
        .collect()
}

/// `t = ((x1 x2) x3) - ((x1 x3) x2)`.
pub fn perm_relation_t() -> WordComb {
    let v = Word::var;
    let p = Word::pair;
    [(p(p(v(1), v(2)), v(3)), 1), (p(p(v(1), v(3)), v(2)), -1)]
        .into_iter()
        .map(|(w, c)| (w, coeff(c)))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DualReport {
    pub dim_r: usize,
    pub dim_r_prime: usize,
    pub dim_annihilator: usize,
    /// `⟨R, R'⟩ = 0`.
    pub orthogonal: bool,
    pub dim_r_is_3: bool,
    pub dim_r_prime_is_9: bool,
    /// `span(R') = R^⊥`.
    pub annihilator_matches: bool,
    /// Basis pairs `(u, v)` of `R × R'` with nonzero pairing.
    pub nonorthogonal_pairs: Vec<(F3Vector, F3Vector)>,
}

impl DualReport {
    pub fn passed(&self) -> bool {
        self.orthogonal && self.dim_r_is_3 && self.dim_r_prime_is_9 && self.annihilator_matches
    }
}

pub fn verify_dual() -> DualReport {
    verify_dual_with(&relator())
}

/// Runs the four duality checks with an arbitrary relator in place of the
/// pre-Lie one.
pub fn verify_dual_with(rel: &WordComb) -> DualReport {
    let r = submodule_generated(&[F3Vector::from_words(rel).expect("relator lives in F(3)")]);
    let r_prime = submodule_generated(&[
        F3Vector::from_words(&perm_relation_s()).expect("in F(3)"),
        F3Vector::from_words(&perm_relation_t()).expect("in F(3)"),
    ]);
    let ann = annihilator(&r);
    let nonorthogonal_pairs: Vec<(F3Vector, F3Vector)> = r
        .iter()
        .flat_map(|u| r_prime.iter().map(move |v| (u.clone(), v.clone())))
        .filter(|(u, v)| !scalar_product(u, v).is_zero())
        .collect();
    DualReport {
        dim_r: r.len(),
        dim_r_prime: r_prime.len(),
        dim_annihilator: ann.len(),
        orthogonal: nonorthogonal_pairs.is_empty(),
        dim_r_is_3: r.len() == 3,
        dim_r_prime_is_9: r_prime.len() == 9,
        annihilator_matches: ann == r_prime,
        nonorthogonal_pairs,
    }
}

/// Structure constants of a finite-dimensional algebra: `e_i · e_j =
/// Σ_k constants[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermTable {
    dim: usize,
    constants: Vec<Vec<Vec<BigRational>>>,
}

impl PermTable {
    pub fn new(dim: usize, constants: Vec<Vec<Vec<BigRational>>>) -> Result<Self, DualError> {
        if !(1..=6).contains(&dim) {
            return Err(DualError::TableTooLarge(dim));
        }
        let shaped = constants.len() == dim
            && constants.iter().all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim));
        if !shaped {
            return Err(DualError::TableShape(dim));
        }
        Ok(PermTable { dim, constants })
    }

    pub fn from_i64(dim: usize, constants: &[Vec<Vec<i64>>]) -> Result<Self, DualError> {
        let c = constants
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|&x| coeff(x)).collect()).collect())
            .collect();
        Self::new(dim, c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim];
        for (i, ai) in a.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = ai * bj;
                for (slot, k) in out.iter_mut().zip(&self.constants[i][j]) {
                    *slot += &c * k;
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.dim];
        v[i] = BigRational::one();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PermIdentity {
    /// `(a·b)·c = a·(b·c)`
    Associativity,
    /// `(a·b)·c = (a·c)·b`
    RightCommutativity,
}

/// A failing basis triple, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermCounterexample {
    pub triple: (usize, usize, usize),
    pub identity: PermIdentity,
}

/// Checks both Perm identities on all basis triples. Returns the first
/// failing triple, or `None` when the table defines a Perm algebra.
pub fn check_perm_axioms(table: &PermTable) -> Option<PermCounterexample> {
    let d = table.dim;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let (ea, eb, ec) = (table.unit(a), table.unit(b), table.unit(c));
                let ab_c = table.mul(&table.mul(&ea, &eb), &ec);
                let a_bc = table.mul(&ea, &table.mul(&eb, &ec));
                let identity = if ab_c != a_bc {
                    Some(PermIdentity::Associativity)
                } else if ab_c != table.mul(&table.mul(&ea, &ec), &eb) {
                    Some(PermIdentity::RightCommutativity)
                } else {
                    None
                };
                if let Some(identity) = identity {
                    return Some(PermCounterexample { triple: (a + 1, b + 1, c + 1), identity });
                }
            }
        }
    }
    None
}
