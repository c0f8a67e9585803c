use prelie_core::freeprelie::{basis_up_to_weight, bracket, star_free};
use prelie_core::lincomb::coeff;
use prelie_core::{Alphabet, FreeElement};

fn basis_elements(alphabet: &Alphabet, max_weight: usize) -> Vec<(usize, FreeElement)> {
    basis_up_to_weight(alphabet, max_weight)
        .unwrap()
        .into_iter()
        .flat_map(|(w, ts)| ts.into_iter().map(move |t| (w, t)))
        .map(|(w, t)| (w, FreeElement::from_tree(alphabet, t).unwrap()))
        .collect()
}

/// Calls `f` on every basis triple of total weight at most `max_weight`.
fn for_each_triple(alphabet: &Alphabet, max_weight: usize, mut f: impl FnMut(&FreeElement, &FreeElement, &FreeElement)) -> usize {
    let b = basis_elements(alphabet, max_weight - 2);
    let mut n = 0;
    for (wa, a) in &b {
        for (wb, bb) in &b {
            for (wc, c) in &b {
                if wa + wb + wc <= max_weight {
                    f(a, bb, c);
                    n += 1;
                }
            }
        }
    }
    n
}

fn associator(a: &FreeElement, b: &FreeElement, c: &FreeElement) -> FreeElement {
    star_free(&star_free(a, b).unwrap(), c)
        .unwrap()
        .sub(&star_free(a, &star_free(b, c).unwrap()).unwrap())
        .unwrap()
}

fn pre_lie(alphabet: &Alphabet, max_weight: usize) -> usize {
    for_each_triple(alphabet, max_weight, |a, b, c| {
        assert_eq!(associator(a, b, c), associator(a, c, b), "{a}, {b}, {c}");
    })
}

fn jacobi(alphabet: &Alphabet, max_weight: usize) -> usize {
    for_each_triple(alphabet, max_weight, |a, b, c| {
        let br = |x: &FreeElement, y: &FreeElement| bracket(x, y).unwrap();
        let sum = br(a, &br(b, c)).add(&br(b, &br(c, a))).unwrap().add(&br(c, &br(a, b))).unwrap();
        assert!(sum.is_zero(), "{a}, {b}, {c}");
        assert!(br(a, b).add(&br(b, a)).unwrap().is_zero());
    })
}

#[test]
fn pre_lie_identity_one_generator() {
    let x = Alphabet::new(["x"]).unwrap();
    // Tree counts 1, 1, 2, 4 over all compositions of weights up to 6.
    assert_eq!(pre_lie(&x, 6), 1 + 3 + 9 + 25);
}

#[test]
fn pre_lie_identity_two_generators() {
    let xy = Alphabet::new(["x", "y"]).unwrap();
    assert_eq!(pre_lie(&xy, 5), 8 + 48 + 264);
}

#[test]
fn jacobi_identity() {
    jacobi(&Alphabet::new(["x"]).unwrap(), 6);
    jacobi(&Alphabet::new(["x", "y"]).unwrap(), 5);
}

#[test]
fn grading_and_coefficient_sum() {
    let xy = Alphabet::new(["x", "y"]).unwrap();
    let b = basis_elements(&xy, 3);
    for (wa, a) in &b {
        for (wb, bb) in &b {
            let p = star_free(a, bb).unwrap();
            assert_eq!(p.weights(), vec![wa + wb]);
            assert_eq!(p.value().coeff_sum(), coeff(*wa as i64));
        }
    }
}
