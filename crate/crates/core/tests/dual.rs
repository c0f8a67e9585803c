use num_traits::{Signed, Zero};
use prelie_core::dual::{
    annihilator, check_perm_axioms, echelon_basis, pairing_diagonal, perm_relation_s, perm_relation_t,
    scalar_product, submodule_generated, verify_dual, F3Vector, PermIdentity, PermTable, F3_DIM,
};
use prelie_core::lincomb::coeff;
use prelie_core::words::{relator, s3};

fn unit(k: usize) -> F3Vector {
    let mut c = vec![coeff(0); F3_DIM];
    c[k] = coeff(1);
    F3Vector::from_coords(c)
}

fn r() -> Vec<F3Vector> {
    submodule_generated(&[F3Vector::from_words(&relator()).unwrap()])
}

fn r_prime() -> Vec<F3Vector> {
    submodule_generated(&[
        F3Vector::from_words(&perm_relation_s()).unwrap(),
        F3Vector::from_words(&perm_relation_t()).unwrap(),
    ])
}

#[test]
fn form_is_symmetric_and_nondegenerate() {
    assert!(pairing_diagonal().iter().all(|g| g.abs() == coeff(1)));
    for i in 0..F3_DIM {
        for j in 0..F3_DIM {
            let (u, v) = (unit(i), unit(j));
            assert_eq!(scalar_product(&u, &v), scalar_product(&v, &u));
            assert_eq!(scalar_product(&u, &v).is_zero(), i != j);
        }
    }
}

#[test]
fn dimensions_and_annihilator() {
    let report = verify_dual();
    assert!(report.passed(), "{report:?}");
    assert_eq!((report.dim_r, report.dim_r_prime, report.dim_annihilator), (3, 9, 9));
    assert_eq!(r().len() + annihilator(&r()).len(), F3_DIM);
    assert_eq!(annihilator(&r()), r_prime());
    assert_eq!(annihilator(&r_prime()), r());
}

#[test]
fn subspaces_are_s3_stable() {
    for space in [r(), r_prime()] {
        for v in &space {
            for sigma in s3() {
                let mut extended = space.clone();
                extended.push(v.act(&sigma));
                assert_eq!(echelon_basis(&extended), space);
            }
        }
    }
}

#[test]
fn words_round_trip_through_coordinates() {
    let v = F3Vector::from_words(&relator()).unwrap();
    assert_eq!(v.to_words(), relator());
    assert!(F3Vector::from_words(&prelie_core::WordComb::zero()).unwrap().is_zero());
}

#[test]
fn perm_axioms() {
    // e1·e1 = e1, e1·e2 = e1, e2·e1 = e2, e2·e2 = e2: x·y = x is Perm.
    let mut left = vec![vec![vec![0i64; 2]; 2]; 2];
    for (i, row) in left.iter_mut().enumerate() {
        for v in row.iter_mut() {
            v[i] = 1;
        }
    }
    assert_eq!(check_perm_axioms(&PermTable::from_i64(2, &left).unwrap()), None);

    // x·y = y is associative but not right commutative.
    let mut right = vec![vec![vec![0i64; 2]; 2]; 2];
    for row in right.iter_mut() {
        for (j, v) in row.iter_mut().enumerate() {
            v[j] = 1;
        }
    }
    let cx = check_perm_axioms(&PermTable::from_i64(2, &right).unwrap()).unwrap();
    assert_eq!(cx.identity, PermIdentity::RightCommutativity);
    assert_eq!(cx.triple, (1, 1, 2));
    assert!(PermTable::from_i64(7, &[]).is_err());
}
