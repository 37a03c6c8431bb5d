mod common;

use common::*;
use nalgebra::DMatrix;
use nilrym::actions::{act_glp, act_glq, act_lie, TangentElement};
use nilrym::catalogue::{basis_matrix, will};
use nilrym::moment::{
    inner, m1, m2, m_full, m_slq, mat_inner, CURVATURE_SQUARE_FACTOR,
};
use nilrym::StructureTuple;
use proptest::prelude::*;

#[test]
fn inner_product_examples() {
    let h = heisenberg();
    assert_eq!(inner(&h, &h).unwrap(), 2.0);
    let b1 = basis_matrix("B1").unwrap();
    let b2 = basis_matrix("B2").unwrap();
    let z = DMatrix::zeros(4, 4);
    let x = StructureTuple::new(4, vec![b1.clone(), z.clone()]).unwrap();
    let y = StructureTuple::new(4, vec![z, b2.clone()]).unwrap();
    assert_eq!(inner(&x, &y).unwrap(), 0.0);
    assert_eq!(mat_inner(&b1, &b2), 0.0);
    assert!(inner(&h, &x).is_err());
}

#[test]
fn m1_examples() {
    assert_eq!(m1(&heisenberg()), DMatrix::identity(2, 2) * 2.0);
    assert_eq!(m1(&StructureTuple::zeros(3, 2).unwrap()), DMatrix::zeros(3, 3));
    for a in [0.4, 1.0, 1.3] {
        let a2: f64 = a * a;
        let big = 2.0 * (a2 * a2 + 2.0 * a2);
        let small = 2.0 * (1.0 + a2);
        let want = diag(&[big, big, small, small, small, small]);
        assert!((m1(&will(a)) - want).amax() < 1e-12);
    }
}

#[test]
fn m2_examples() {
    assert_eq!(m2(&heisenberg()), DMatrix::from_element(1, 1, 2.0));
    let c = StructureTuple::new(
        4,
        vec![basis_matrix("B1").unwrap(), basis_matrix("B2").unwrap()],
    )
    .unwrap();
    assert_eq!(m2(&c), DMatrix::identity(2, 2) * 4.0);
    let mut r = rng(5);
    let t = random_tuple(&mut r, 4, 3);
    assert!((m2(&t.scaled(1.5)) - m2(&t) * 2.25).amax() < 1e-12);
}

#[test]
fn slq_part_examples() {
    assert!(m_slq(&heisenberg()).amax() < 1e-15);
    assert!((m_slq(&j_plus_zero()) - diag(&[1.0, 1.0, -1.0, -1.0])).amax() < 1e-15);
    let mv = m_full(&j_plus_zero());
    assert_eq!(mv.m1, diag(&[2.0, 2.0, 0.0, 0.0]));
    assert!(mv.m1_traceless.trace().abs() < 1e-15);
    assert_eq!(mv.curvature_square(), &mv.m1 * CURVATURE_SQUARE_FACTOR);
}

fn shape_seed() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=7, 1usize..=5, any::<u64>())
}

proptest! {
    #[test]
    fn m1_and_m2_match_entrywise_oracles((q, p, seed) in shape_seed()) {
        let c = random_tuple(&mut rng(seed), q, p);
        prop_assert!((m1(&c) - m1_oracle(&c)).amax() < 1e-12);
        prop_assert!((m2(&c) - m2_oracle(&c)).amax() < 1e-12);
    }

    #[test]
    fn moment_defining_identity((q, p, seed) in shape_seed()) {
        let mut r = rng(seed);
        let c = random_tuple(&mut r, q, p);
        let x = random_symmetric(&mut r, q);
        let y = random_symmetric(&mut r, p);
        let lhs = mat_inner(&m1(&c), &x);
        let rhs = inner(&act_lie(&TangentElement::glq(x, p), &c).unwrap(), &c).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs()));
        let lhs = mat_inner(&m2(&c), &y);
        let rhs = inner(&act_lie(&TangentElement::glp(q, y), &c).unwrap(), &c).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs()));
    }

    #[test]
    fn moment_maps_are_equivariant((q, p, seed) in shape_seed()) {
        let mut r = rng(seed);
        let c = random_tuple(&mut r, q, p);
        let k = random_orthogonal(&mut r, q);
        let u = random_orthogonal(&mut r, p);
        let a = m1(&act_glq(&k, &c).unwrap());
        prop_assert!((a - &k * m1(&c) * k.transpose()).amax() < 1e-11);
        let b = m2(&act_glp(&u, &c).unwrap());
        prop_assert!((b - u.transpose() * m2(&c) * &u).amax() < 1e-11);
    }

    #[test]
    fn moment_value_invariants((q, p, seed) in shape_seed()) {
        let c = random_tuple(&mut rng(seed), q, p);
        let mv = m_full(&c);
        prop_assert!((&mv.m1 - mv.m1.transpose()).amax() <= 1e-12);
        prop_assert!((&mv.m2 - mv.m2.transpose()).amax() <= 1e-12);
        let n1 = mv.m1.norm();
        prop_assert!(mv.m1_traceless.trace().abs() <= 1e-12 * n1.max(1.0));
        let ev1 = mv.m1.clone().symmetric_eigen().eigenvalues;
        prop_assert!(ev1.min() >= -1e-10 * n1);
        let ev2 = mv.m2.clone().symmetric_eigen().eigenvalues;
        prop_assert!(ev2.min() >= -1e-10 * mv.m2.norm());
        prop_assert!((m1(&c.scaled(-2.5)) - &mv.m1 * 6.25).amax() < 1e-11);
        // ‖m1‖ vanishes only at zero: tr m1 = 2‖C‖².
        prop_assert!((mv.m1.trace() - 2.0 * c.norm().powi(2)).abs() < 1e-11);
    }
}
