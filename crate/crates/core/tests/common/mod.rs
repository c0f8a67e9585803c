#![allow(dead_code)]

use prelie_core::lincomb::coeff;
use prelie_core::trees::{canonicalize, RawTree};
use prelie_core::{Label, LinComb, RootedTree};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random recursive tree carrying `labels` in a shuffled order.
pub fn random_tree<R: Rng>(rng: &mut R, mut labels: Vec<Label>) -> RootedTree {
    labels.shuffle(rng);
    let n = labels.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 1..n {
        children[rng.gen_range(0..v)].push(v);
    }
    fn build(v: usize, labels: &[Label], children: &[Vec<usize>]) -> RawTree {
        RawTree::new(labels[v].clone(), children[v].iter().map(|&c| build(c, labels, children)).collect())
    }
    canonicalize(build(0, &labels, &children))
}

pub fn standard_labels(n: usize) -> Vec<Label> {
    (1..=n as u32).map(Label::Index).collect()
}

pub fn random_standard_tree<R: Rng>(rng: &mut R, n: usize) -> RootedTree {
    random_tree(rng, standard_labels(n))
}

/// Trees over `generators` with `n` vertices, labels drawn with repetition.
pub fn random_gen_tree<R: Rng>(rng: &mut R, generators: &[Label], n: usize) -> RootedTree {
    let labels = (0..n).map(|_| generators[rng.gen_range(0..generators.len())].clone()).collect();
    random_tree(rng, labels)
}

pub fn random_coeff<R: Rng>(rng: &mut R) -> prelie_core::Coefficient {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3..=3);
    }
    coeff(c)
}

/// Up to `terms` random trees from `make`, with small nonzero coefficients.
pub fn random_comb<R: Rng, F: FnMut(&mut R) -> RootedTree>(rng: &mut R, terms: usize, mut make: F) -> LinComb<RootedTree> {
    let mut out = LinComb::zero();
    for _ in 0..terms {
        let t = make(rng);
        let c = random_coeff(rng);
        out.add_term(t, c);
    }
    out
}
