mod common;

use prelie_core::lincomb::coeff;
use prelie_core::operad::{
    composition_term_count, compose_at, compose_basis, element, gamma, pre_lie_defect, star, sym_action,
};
use prelie_core::trees::enumerate_trees;
use prelie_core::words::s3;
use prelie_core::{Label, LinComb, OperadElement, RootedTree};
use rand::Rng;

fn basis(n: usize) -> Vec<OperadElement> {
    enumerate_trees(n).unwrap().into_iter().map(|t| OperadElement::from_tree(t).unwrap()).collect()
}

fn random_element<R: Rng>(rng: &mut R, arity: usize, terms: usize) -> OperadElement {
    let value = common::random_comb(rng, terms, |r| common::random_standard_tree(r, arity));
    OperadElement::new(arity, value).unwrap()
}

#[test]
fn unit_laws() {
    let unit = OperadElement::unit();
    for n in 1..=4 {
        for t in basis(n) {
            assert_eq!(compose_at(&unit, 1, &t).unwrap(), t);
            for i in 1..=n {
                assert_eq!(compose_at(&t, i, &unit).unwrap(), t);
            }
        }
    }
}

#[test]
fn sequential_associativity() {
    let mut rng = common::rng(2);
    for _ in 0..40 {
        let (n, m, k) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let t = random_element(&mut rng, n, 2);
        let u = random_element(&mut rng, m, 2);
        let v = random_element(&mut rng, k, 2);
        for i in 1..=n {
            for j in 1..=m {
                let left = compose_at(&compose_at(&t, i, &u).unwrap(), i + j - 1, &v).unwrap();
                let right = compose_at(&t, i, &compose_at(&u, j, &v).unwrap()).unwrap();
                assert_eq!(left, right, "T={t} U={u} V={v} i={i} j={j}");
            }
        }
    }
}

#[test]
fn parallel_compositions_commute() {
    let mut rng = common::rng(3);
    for _ in 0..40 {
        let (n, m, k) = (rng.gen_range(2..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
        let t = random_element(&mut rng, n, 2);
        let u = random_element(&mut rng, m, 2);
        let v = random_element(&mut rng, k, 2);
        for i in 1..=n {
            for j in i + 1..=n {
                let left = compose_at(&compose_at(&t, j, &v).unwrap(), i, &u).unwrap();
                let right = compose_at(&compose_at(&t, i, &u).unwrap(), j + m - 1, &v).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

/// The permutation of `[n + m - 1]` induced on `T ∘_i S` by `σ` acting on `T`.
fn induced(sigma: &[u32; 3], i: u32, m: u32) -> Vec<u32> {
    let si = sigma[i as usize - 1];
    let place = |j: u32| {
        let sj = sigma[j as usize - 1];
        if sj < si {
            sj
        } else {
            sj + m - 1
        }
    };
    (1..=3 + m - 1)
        .map(|l| {
            if l < i {
                place(l)
            } else if l < i + m {
                si + (l - i)
            } else {
                place(l - m + 1)
            }
        })
        .collect()
}

#[test]
fn equivariance_over_s3() {
    for t in basis(3) {
        for s in basis(2) {
            for sigma in s3() {
                for i in 1..=3u32 {
                    let left = compose_at(&sym_action(&sigma, &t).unwrap(), sigma[i as usize - 1] as usize, &s).unwrap();
                    let composed = compose_at(&t, i as usize, &s).unwrap();
                    let right = sym_action(&induced(&sigma, i, 2), &composed).unwrap();
                    assert_eq!(left, right, "σ={sigma:?} i={i} T={t} S={s}");
                }
            }
        }
    }
}

#[test]
fn gamma_on_the_edge_is_star() {
    let mut rng = common::rng(4);
    let edge = element("(1 (2))").unwrap();
    for _ in 0..30 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_element(&mut rng, n, 2);
        let b = random_element(&mut rng, m, 2);
        assert_eq!(gamma(&edge, &[a.clone(), b.clone()]).unwrap(), star(&a, &b));
    }
}

#[test]
fn gamma_does_not_depend_on_slot_order() {
    let mut rng = common::rng(5);
    for _ in 0..20 {
        let mu = random_element(&mut rng, 3, 2);
        let args: Vec<OperadElement> = (0..3)
            .map(|_| {
                let n = rng.gen_range(1..=2);
                random_element(&mut rng, n, 2)
            })
            .collect();
        // Lowest slot first, shifting later slots past the inserted blocks.
        let mut acc = mu.clone();
        let mut offset = 0;
        for (k, nu) in args.iter().enumerate() {
            acc = compose_at(&acc, k + 1 + offset, nu).unwrap();
            offset += nu.arity() - 1;
        }
        assert_eq!(gamma(&mu, &args).unwrap(), acc);
    }
}

#[test]
fn pre_lie_identity_on_all_small_triples() {
    let mut checked = 0;
    for a in 1..=4 {
        for b in 1..=(5 - a) {
            for c in 1..=(6 - a - b) {
                for t1 in basis(a) {
                    for t2 in basis(b) {
                        for t3 in basis(c) {
                            assert!(pre_lie_defect(&t1, &t2, &t3).is_zero(), "{t1}, {t2}, {t3}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    // Sizes 1, 2, 9, 64 over all (a, b, c) with a + b + c ≤ 6.
    assert_eq!(checked, 354);
}

#[test]
fn pre_lie_identity_on_random_combinations() {
    let mut rng = common::rng(6);
    for _ in 0..200 {
        let t: Vec<OperadElement> = (0..3)
            .map(|_| {
                let (n, terms) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                random_element(&mut rng, n, terms)
            })
            .collect();
        assert!(pre_lie_defect(&t[0], &t[1], &t[2]).is_zero());
    }
}

#[test]
fn star_is_not_associative() {
    let x = OperadElement::unit();
    let xx = star(&x, &x);
    assert!(!(star(&xx, &x).value() - star(&x, &xx).value()).is_zero());
}

#[test]
fn composition_term_counts() {
    let mut rng = common::rng(7);
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=3);
        let t = common::random_standard_tree(&mut rng, n);
        let s = common::random_standard_tree(&mut rng, m);
        let i = rng.gen_range(1..=n as u32);
        let expected = composition_term_count(&t, i, m);
        let incoming = incoming_edges(&t, i);
        assert_eq!(expected, m.pow(incoming));
        let trees = compose_basis(&t, i, &s, m as u32);
        assert_eq!(trees.len(), expected);
        let value: LinComb<RootedTree> = trees.into_iter().map(|t| (t, coeff(1))).collect();
        assert_eq!(value.len(), expected, "outcomes are pairwise distinct");
        assert_eq!(value.coeff_sum(), coeff(expected as i64));
    }
}

fn incoming_edges(t: &RootedTree, label: u32) -> u32 {
    if t.label() == &Label::Index(label) {
        return t.children().len() as u32;
    }
    t.children().iter().map(|c| incoming_edges(c, label)).sum()
}

#[test]
fn series_inverse_through_order_twenty() {
    use prelie_core::operad::{inverse_residuals, rooted_tree_series, series_inverse_check};
    for n in 1..=20 {
        assert!(series_inverse_check(n).unwrap().passed(), "order {n}");
    }
    // The coefficients n^{n-1}/n! are the labelled tree counts over n!.
    let g = rooted_tree_series(7);
    for n in 1..=7usize {
        let count = enumerate_trees(n).unwrap().len() as i64;
        let factorial: i64 = (1..=n as i64).product();
        let sign = if n % 2 == 1 { -1 } else { 1 };
        assert_eq!(g.coeff(n), &(coeff(sign * count) / coeff(factorial)));
    }
    let mut bumped = rooted_tree_series(10);
    bumped.set_coeff(5, bumped.coeff(5) + coeff(1));
    let r = inverse_residuals(&bumped);
    assert_eq!(r.residual_coefficients.iter().position(|c| *c != coeff(0)), Some(4));
}
