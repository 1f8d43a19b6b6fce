use proptest::prelude::*;
use so5_thirring::{
    check_so5_closure, gamma_rep, pair_index, signed_pair_index, so5_structure_constants,
    Complex64, Operator, SO5_PAIRS,
};

#[test]
fn gammas_are_hermitian_and_square_to_one() {
    let rep = gamma_rep::<f64>();
    let id = Operator::identity(4);
    for g in &rep.gammas {
        assert_eq!(g.hermiticity_deviation(), 0.0);
        assert_eq!(g.matmul(g).sub(&id).max_abs(), 0.0);
    }
}

#[test]
fn gammas_anticommute_pairwise() {
    let rep = gamma_rep::<f64>();
    for a in 0..5 {
        for b in 0..5 {
            let anti = rep.gammas[a].anticommutator(&rep.gammas[b]).unwrap();
            let expected = if a == b {
                Operator::identity(4).scale(Complex64::new(2.0, 0.0))
            } else {
                Operator::zeros(4, 4)
            };
            assert_eq!(anti.sub(&expected).max_abs(), 0.0, "pair ({a}, {b})");
        }
    }
}

#[test]
fn generators_are_hermitian_and_traceless() {
    let rep = gamma_rep::<f64>();
    for g in &rep.generators {
        assert_eq!(g.hermiticity_deviation(), 0.0);
        assert_eq!(g.trace().norm(), 0.0);
    }
}

#[test]
fn closure_set_satisfies_so5_bracket_exactly() {
    let rep = gamma_rep::<f64>();
    let report = check_so5_closure(&rep.closure_set()).unwrap();
    assert_eq!(report.max_violation, 0.0);
}

#[test]
fn closure_detects_a_scaled_generator() {
    let rep = gamma_rep::<f64>();
    let mut set = rep.closure_set();
    set[3] = set[3].scale(Complex64::new(2.0, 0.0));
    let report = check_so5_closure(&set).unwrap();
    assert!(report.max_violation > 0.4, "got {}", report.max_violation);
}

#[test]
fn closure_rejects_wrong_set_size() {
    let rep = gamma_rep::<f64>();
    let set = rep.closure_set()[..9].to_vec();
    assert!(check_so5_closure(&set).is_err());
}

#[test]
fn structure_constants_match_the_representation() {
    let rep = gamma_rep::<f64>();
    let set = rep.closure_set();
    let sc = so5_structure_constants();
    for l in 0..10 {
        for m in 0..10 {
            let lhs = set[l].commutator(&set[m]).unwrap();
            let mut rhs = Operator::zeros(4, 4);
            for (n, gen) in set.iter().enumerate() {
                let c = sc.complex::<f64>(l, m, n);
                if c.norm() != 0.0 {
                    rhs = rhs.add_scaled(gen, c);
                }
            }
            assert_eq!(lhs.sub(&rhs).max_abs(), 0.0, "bracket ({l}, {m})");
        }
    }
}

#[test]
fn structure_constants_are_antisymmetric_with_zero_jacobi() {
    let sc = so5_structure_constants();
    for l in 0..10 {
        for m in 0..10 {
            for n in 0..10 {
                assert_eq!(sc.coeff[l][m][n], -sc.coeff[m][l][n]);
                assert!(sc.coeff[l][m][n].abs() <= 1);
            }
        }
    }
    assert_eq!(sc.jacobi_residual(), 0);
}

#[test]
fn pair_index_enumerates_the_upper_triangle() {
    for (k, &(a, b)) in SO5_PAIRS.iter().enumerate() {
        assert!(a < b && (1..=5).contains(&a) && (1..=5).contains(&b));
        assert_eq!(pair_index(a, b), k);
    }
}

#[test]
fn signed_pair_index_handles_both_orders() {
    for &(a, b) in SO5_PAIRS.iter() {
        assert_eq!(signed_pair_index(a, b), Some((pair_index(a, b), 1.0)));
        assert_eq!(signed_pair_index(b, a), Some((pair_index(a, b), -1.0)));
        assert_eq!(signed_pair_index(a, a), None);
    }
    assert_eq!(signed_pair_index(0, 3), None);
    assert_eq!(signed_pair_index(2, 6), None);
}

#[test]
fn generator_method_is_antisymmetric() {
    let rep = gamma_rep::<f64>();
    for &(a, b) in SO5_PAIRS.iter() {
        let forward = rep.generator(a, b);
        let backward = rep.generator(b, a);
        assert_eq!(forward.add(&backward).max_abs(), 0.0);
    }
}

proptest! {
    #[test]
    fn bracket_antisymmetry_on_random_pairs(l in 0usize..10, m in 0usize..10) {
        let rep = gamma_rep::<f64>();
        let set = rep.closure_set();
        let forward = set[l].commutator(&set[m]).unwrap();
        let backward = set[m].commutator(&set[l]).unwrap();
        prop_assert_eq!(forward.add(&backward).max_abs(), 0.0);
    }
}
