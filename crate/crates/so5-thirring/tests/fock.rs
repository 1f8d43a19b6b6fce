use proptest::prelude::*;
use so5_thirring::fock::{
    annihilate_mode, binomial, create_mode, mode, occupation, OperatorKind,
};
use so5_thirring::{
    check_car, flavor_counts, mode_operator, sector_basis, sector_dimension, total_number_basis,
    FockSpace, Operator, So5Error, N_FLAVORS,
};

#[test]
fn full_space_dimensions() {
    assert_eq!(FockSpace::new(1).unwrap().dim(), 16);
    assert_eq!(FockSpace::new(2).unwrap().dim(), 256);
    assert_eq!(FockSpace::new(3).unwrap().dim(), 4096);
}

#[test]
fn default_cap_rejects_four_sites() {
    match FockSpace::new(4) {
        Err(So5Error::SpaceTooLarge { dim, cap }) => {
            assert_eq!(dim, 65536);
            assert_eq!(cap, FockSpace::DEFAULT_MAX_DIM);
        }
        other => panic!("expected SpaceTooLarge, got {other:?}"),
    }
    assert_eq!(FockSpace::with_max_dim(4, 1 << 16).unwrap().dim(), 65536);
}

#[test]
fn zero_sites_is_invalid() {
    assert!(FockSpace::new(0).is_err());
}

#[test]
fn car_holds_exactly_on_small_chains() {
    for n_sites in [1usize, 2] {
        let space = FockSpace::new(n_sites).unwrap();
        let report = check_car::<f64>(&space).unwrap();
        assert_eq!(report.max_violation, 0.0, "L = {n_sites}");
        let n_modes = space.n_modes();
        assert_eq!(report.breakdown.len(), 3 * n_modes * n_modes);
    }
}

#[test]
fn creation_annihilation_build_the_number_operator() {
    let space = FockSpace::new(2).unwrap();
    for flavor in 1..=N_FLAVORS {
        for site in 0..2 {
            let a = mode_operator::<f64>(&space, flavor, site, OperatorKind::Annihilate).unwrap();
            let c = mode_operator::<f64>(&space, flavor, site, OperatorKind::Create).unwrap();
            let n = mode_operator::<f64>(&space, flavor, site, OperatorKind::Number).unwrap();
            assert_eq!(c.matmul(&a).sub(&n).max_abs(), 0.0);
            assert_eq!(c.sub(&a.adjoint()).max_abs(), 0.0);
            assert_eq!(a.matmul(&a).max_abs(), 0.0);
            assert_eq!(c.matmul(&c).max_abs(), 0.0);
        }
    }
}

#[test]
fn mode_operator_validates_indices() {
    let space = FockSpace::new(2).unwrap();
    assert!(mode_operator::<f64>(&space, 0, 0, OperatorKind::Number).is_err());
    assert!(mode_operator::<f64>(&space, 5, 0, OperatorKind::Number).is_err());
    assert!(mode_operator::<f64>(&space, 1, 2, OperatorKind::Number).is_err());
}

#[test]
fn sector_dimensions_and_bases_agree() {
    assert_eq!(sector_dimension(2, [1, 1, 0, 0]), 4);
    let basis = sector_basis(2, [1, 1, 0, 0]).unwrap();
    assert_eq!(basis.dim(), 4);
    for idx in 0..basis.dim() {
        assert_eq!(flavor_counts(basis.state(idx), 2), [1, 1, 0, 0]);
    }

    let full: u128 = (0..=2u128)
        .map(|_| 1u128)
        .product();
    assert!(full > 0);
    let mut total = 0u128;
    for n0 in 0..=2usize {
        for n1 in 0..=2usize {
            for n2 in 0..=2usize {
                for n3 in 0..=2usize {
                    total += sector_dimension(2, [n0, n1, n2, n3]);
                }
            }
        }
    }
    assert_eq!(total, 256);
}

#[test]
fn total_number_basis_matches_binomials() {
    for (n, expected) in [(2usize, 28usize), (3, 56), (4, 70)] {
        let basis = total_number_basis(2, n).unwrap();
        assert_eq!(basis.dim(), expected);
        assert_eq!(binomial(8, n), expected as u128);
        for idx in 0..basis.dim() {
            assert_eq!(basis.state(idx).count_ones() as usize, n);
        }
    }
}

#[test]
fn basis_position_inverts_state() {
    let basis = sector_basis(3, [1, 0, 2, 0]).unwrap();
    for idx in 0..basis.dim() {
        assert_eq!(basis.position(basis.state(idx)), Some(idx));
    }
    assert_eq!(basis.position(u64::MAX), None);
}

#[test]
fn binomial_small_table() {
    assert_eq!(binomial(0, 0), 1);
    assert_eq!(binomial(5, 2), 10);
    assert_eq!(binomial(8, 3), 56);
    assert_eq!(binomial(3, 5), 0);
}

#[test]
fn flavor_counts_reads_mode_layout() {
    let mut s = 0u64;
    for (site, flavor) in [(0usize, 0usize), (1, 0), (0, 3)] {
        s |= 1 << mode(site, flavor);
    }
    assert_eq!(flavor_counts(s, 2), [2, 0, 0, 1]);
}

proptest! {
    #[test]
    fn annihilate_then_create_restores_occupied_states(s in 0u64..256, m in 0usize..8) {
        prop_assume!(occupation(s, m) == 1);
        let (s1, sg1) = annihilate_mode(s, m).unwrap();
        let (s2, sg2) = create_mode(s1, m).unwrap();
        prop_assert_eq!(s2, s);
        prop_assert_eq!(sg1 * sg2, 1);
        prop_assert!(annihilate_mode(s1, m).is_none());
    }

    #[test]
    fn create_then_annihilate_restores_empty_states(s in 0u64..256, m in 0usize..8) {
        prop_assume!(occupation(s, m) == 0);
        let (s1, sg1) = create_mode(s, m).unwrap();
        let (s2, sg2) = annihilate_mode(s1, m).unwrap();
        prop_assert_eq!(s2, s);
        prop_assert_eq!(sg1 * sg2, 1);
        prop_assert!(create_mode(s1, m).is_none());
    }

    #[test]
    fn jordan_wigner_signs_are_unit(s in 0u64..4096, m in 0usize..12) {
        if let Some((_, sg)) = annihilate_mode(s, m) {
            prop_assert!(sg == 1 || sg == -1);
        }
        if let Some((_, sg)) = create_mode(s, m) {
            prop_assert!(sg == 1 || sg == -1);
        }
    }
}

#[test]
fn dropping_the_sign_string_breaks_the_anticommutator() {
    let space = FockSpace::new(1).unwrap();
    let basis = space.basis();
    let one = so5_thirring::Complex64::new(1.0, 0.0);
    let stringless = |m: usize| -> Operator {
        let mut triplets = Vec::new();
        for (p, &s) in basis.states().iter().enumerate() {
            if occupation(s, m) == 1 {
                let cleared = s & !(1u64 << m);
                triplets.push((basis.position(cleared).unwrap(), p, one));
            }
        }
        Operator::from_triplets(basis.dim(), basis.dim(), triplets)
    };
    let a0 = stringless(mode(0, 0));
    let a1 = stringless(mode(0, 1));
    assert!(a0.anticommutator(&a1).unwrap().max_abs() >= 1.0);
    assert!(a0.anticommutator(&a1.adjoint()).unwrap().max_abs() >= 1.0);

    let proper0 = mode_operator::<f64>(&space, 1, 0, OperatorKind::Annihilate).unwrap();
    let proper1 = mode_operator::<f64>(&space, 2, 0, OperatorKind::Annihilate).unwrap();
    assert_eq!(proper0.anticommutator(&proper1).unwrap().max_abs(), 0.0);
    assert_eq!(
        proper0.anticommutator(&proper1.adjoint()).unwrap().max_abs(),
        0.0
    );
}

#[test]
fn number_operators_commute_across_modes() {
    let space = FockSpace::new(2).unwrap();
    let mut numbers: Vec<Operator> = Vec::new();
    for flavor in 1..=N_FLAVORS {
        for site in 0..2 {
            numbers.push(mode_operator(&space, flavor, site, OperatorKind::Number).unwrap());
        }
    }
    for a in &numbers {
        for b in &numbers {
            assert_eq!(a.commutator(b).unwrap().max_abs(), 0.0);
        }
    }
}
