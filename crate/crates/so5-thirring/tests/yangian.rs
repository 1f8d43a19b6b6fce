use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use so5_thirring::fock::StateBasis;
use so5_thirring::yangian::ADMISSIBLE_BAND;
use so5_thirring::{
    admissibility_check, build_currents, build_currents_on_basis, check_adjoint_relation,
    check_drinfeld_relations, check_serre_relation, check_so5_closure, gamma_rep,
    gauge_invariance_scan, local_current, pair_index, sample_admissible, symmetric_triple,
    total_number_basis, yangian_violations, Complex64, FockSpace, GammaRep64, Operator,
    ThetaMatrix, USign, YangianGenerators64, SO5_PAIRS,
};

fn diag(values: &[f64]) -> Operator {
    let entries: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Operator::from_diagonal(&entries)
}

#[test]
fn symmetric_triple_examples() {
    let id = Operator::identity(3);
    let six_id = id.scale(Complex64::new(6.0, 0.0));
    assert_eq!(
        symmetric_triple(&id, &id, &id).unwrap().sub(&six_id).max_abs(),
        0.0
    );

    let a = diag(&[1.0, -2.0, 0.5]);
    let zero = Operator::zeros(3, 3);
    assert_eq!(symmetric_triple(&a, &zero, &a).unwrap().max_abs(), 0.0);

    let x1 = diag(&[1.0, 2.0]);
    let x2 = diag(&[3.0, 4.0]);
    let x3 = diag(&[5.0, 6.0]);
    let expected = diag(&[6.0 * 15.0, 6.0 * 48.0]);
    assert_eq!(
        symmetric_triple(&x1, &x2, &x3)
            .unwrap()
            .sub(&expected)
            .max_abs(),
        0.0
    );

    assert!(symmetric_triple(&x1, &x2, &id).is_err());
}

fn bare_generators(n_sites: usize, h: f64, sign: USign) -> YangianGenerators64 {
    let space = FockSpace::new(n_sites).unwrap();
    let rep = gamma_rep::<f64>();
    build_currents(&space, None, &rep, h, sign).unwrap()
}

#[test]
fn bare_level_zero_closes_under_the_so5_bracket() {
    let gens = bare_generators(2, 1.0, USign::Plus);
    let report = check_so5_closure(&gens.level0).unwrap();
    assert!(report.max_violation < 1e-12, "got {}", report.max_violation);
    assert!(gens.level0_hermiticity() < 1e-15);
}

#[test]
fn dressed_level_zero_is_hermitian() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let space = FockSpace::new(2).unwrap();
    let rep = gamma_rep::<f64>();
    let theta = sample_admissible(&mut rng);
    let gens = build_currents(&space, Some(&theta), &rep, 1.0, USign::Plus).unwrap();
    assert!(gens.level0_hermiticity() < 1e-15);
}

#[test]
fn constant_shifts_drop_out_of_commutators() {
    let gens = bare_generators(2, 1.0, USign::Plus);
    let shift = Operator::identity(gens.level0[0].nrows()).scale(Complex64::new(0.7, 0.0));
    let shifted = gens.level0[pair_index(1, 5)].add(&shift);
    let reference = gens.level0[pair_index(1, 5)]
        .commutator(&gens.level0[pair_index(2, 3)])
        .unwrap();
    let with_shift = shifted.commutator(&gens.level0[pair_index(2, 3)]).unwrap();
    assert_eq!(with_shift.sub(&reference).max_abs(), 0.0);
}

#[test]
fn zero_angles_reproduce_the_bare_generators() {
    let space = FockSpace::new(2).unwrap();
    let rep = gamma_rep::<f64>();
    let bare = build_currents(&space, None, &rep, 1.0, USign::Plus).unwrap();
    let dressed = build_currents(&space, Some(&ThetaMatrix::zero()), &rep, 1.0, USign::Plus).unwrap();
    for (a, b) in bare.level0.iter().zip(&dressed.level0) {
        assert_eq!(a.sub(b).max_abs(), 0.0);
    }
    for (a, b) in bare.level1.iter().zip(&dressed.level1) {
        assert_eq!(a.sub(b).max_abs(), 0.0);
    }
}

fn direct_bilocal(basis: &StateBasis, rep: &GammaRep64, a: usize, b: usize) -> Operator {
    let n_sites = basis.n_sites();
    let dim = basis.dim();
    let mut total = Operator::zeros(dim, dim);
    for c in 1..=5usize {
        if c == a || c == b {
            continue;
        }
        for x in 0..n_sites {
            for y in 0..n_sites {
                if x == y {
                    continue;
                }
                let eps = if x > y { 1.0 } else { -1.0 };
                let left = local_current(basis, None, rep, a, c, x).unwrap();
                let right = local_current(basis, None, rep, c, b, y).unwrap();
                total = total.add_scaled(&left.matmul(&right), Complex64::new(eps, 0.0));
            }
        }
    }
    total
}

#[test]
fn bilocal_matches_the_direct_antisymmetrized_sum() {
    let space = FockSpace::new(2).unwrap();
    let rep = gamma_rep::<f64>();
    let gens = build_currents(&space, None, &rep, 1.0, USign::Plus).unwrap();
    let basis = space.basis();
    for &(a, b) in SO5_PAIRS.iter() {
        let direct = direct_bilocal(basis, &rep, a, b);
        let stored = &gens.bilocal[pair_index(a, b)];
        assert!(
            direct.sub(stored).max_abs() < 1e-12,
            "bilocal ({a}, {b}) disagrees"
        );
        let reversed = direct_bilocal(basis, &rep, b, a);
        assert!(
            direct.add(&reversed).max_abs() < 1e-12,
            "bilocal ({a}, {b}) is not antisymmetric"
        );
    }
}

#[test]
fn adjoint_relation_holds_for_the_bare_realization() {
    let gens = bare_generators(2, 1.0, USign::Plus);
    let plus = check_adjoint_relation(&gens).unwrap();
    assert!(plus.max_violation < 1e-11, "plus sign {}", plus.max_violation);
    let minus = check_adjoint_relation(&gens.resigned(USign::Minus)).unwrap();
    assert!(minus.max_violation < 1e-11, "minus sign {}", minus.max_violation);
}

#[test]
fn degenerate_level_one_reduces_to_closure() {
    let mut gens = bare_generators(2, 1.0, USign::Plus);
    gens.level1 = gens.level0.clone();
    let report = check_adjoint_relation(&gens).unwrap();
    assert!(report.max_violation < 1e-12, "got {}", report.max_violation);
}

#[test]
fn split_level_one_parts_remain_covariant() {
    let gens = bare_generators(2, 1.0, USign::Plus);
    let mut derivative_only = gens.clone();
    derivative_only.level1 = gens.derivative.clone();
    let t_part = check_adjoint_relation(&derivative_only).unwrap().max_violation;

    let mut bilocal_only = gens.clone();
    bilocal_only.level1 = gens
        .bilocal
        .iter()
        .map(|m| m.scale(gens.u))
        .collect();
    let j0_part = check_adjoint_relation(&bilocal_only).unwrap().max_violation;

    assert!(t_part < 1e-11, "derivative part {t_part}");
    assert!(j0_part < 1e-11, "bilocal part {j0_part}");
}

#[test]
fn serre_relation_is_empty_on_a_single_site() {
    let gens = bare_generators(1, 1.0, USign::Plus);
    let report = check_serre_relation(&gens).unwrap();
    assert_eq!(report.absolute, 0.0);
    assert_eq!(report.rhs_scale, 0.0);
    assert_eq!(report.relative, 0.0);
}

#[test]
fn serre_relation_closes_on_two_sites() {
    for sign in USign::BOTH {
        let gens = bare_generators(2, 1.0, sign);
        let report = check_serre_relation(&gens).unwrap();
        assert!(report.absolute < 1e-12, "{sign:?} absolute {}", report.absolute);
        assert!(
            (report.rhs_scale - 0.25).abs() < 1e-12,
            "{sign:?} scale {}",
            report.rhs_scale
        );
        assert!(report.relative < 1e-11, "{sign:?} relative {}", report.relative);
        assert!(report.h_zero_obstruction < 1e-12);
    }
}

#[test]
fn serre_relation_is_h_independent_on_two_sites() {
    for h in [0.5, 1.0, 2.0] {
        let gens = bare_generators(2, h, USign::Plus);
        let report = check_serre_relation(&gens).unwrap();
        assert!(report.relative < 1e-11, "h = {h}: {}", report.relative);
        assert!(
            (report.rhs_scale - 0.25 * h * h).abs() < 1e-12,
            "h = {h}: scale {}",
            report.rhs_scale
        );
    }
}

#[test]
fn doubled_level_zero_breaks_the_serre_balance() {
    let mut gens = bare_generators(2, 1.0, USign::Plus);
    gens.level0 = gens
        .level0
        .iter()
        .map(|m| m.scale(Complex64::new(2.0, 0.0)))
        .collect();
    let report = check_serre_relation(&gens).unwrap();
    assert!(report.relative >= 0.5, "got {}", report.relative);
}

#[test]
fn sector_restricted_serre_plateau() {
    let rep = gamma_rep::<f64>();
    for n_sites in [2usize, 3] {
        let basis = total_number_basis(n_sites, 1).unwrap();
        let gens = build_currents_on_basis(&basis, None, &rep, 1.0, USign::Plus).unwrap();
        let report = check_serre_relation(&gens).unwrap();
        assert_eq!(report.absolute, 0.0, "L = {n_sites}, one particle");
        assert_eq!(report.rhs_scale, 0.0, "L = {n_sites}, one particle");
    }

    let basis = total_number_basis(2, 2).unwrap();
    let gens = build_currents_on_basis(&basis, None, &rep, 1.0, USign::Plus).unwrap();
    let report = check_serre_relation(&gens).unwrap();
    assert!(report.relative < 1e-12, "L = 2 two-particle {}", report.relative);

    let basis = total_number_basis(3, 2).unwrap();
    let gens = build_currents_on_basis(&basis, None, &rep, 1.0, USign::Plus).unwrap();
    let report = check_serre_relation(&gens).unwrap();
    assert!((report.absolute - 0.25).abs() < 1e-9, "got {}", report.absolute);
    assert!((report.rhs_scale - 0.25).abs() < 1e-9, "got {}", report.rhs_scale);
    assert!((report.relative - 1.0).abs() < 1e-8, "got {}", report.relative);
}

#[test]
fn violations_vanish_at_zero_angles() {
    let space = FockSpace::new(2).unwrap();
    let rep = gamma_rep::<f64>();
    let violations = yangian_violations(&space, &ThetaMatrix::zero(), &rep, 1.0).unwrap();
    for value in violations.as_array() {
        assert!(value < 1e-12, "violations {violations:?}");
    }
}

#[test]
fn gauge_scan_separates_the_two_classes() {
    let mut rng = ChaCha12Rng::seed_from_u64(41);
    let space = FockSpace::new(2).unwrap();
    let rep = gamma_rep::<f64>();
    let mut samples = vec![ThetaMatrix::zero()];
    samples.extend((0..2).map(|_| sample_admissible(&mut rng)));
    samples.extend((0..2).map(|_| so5_thirring::sample_inadmissible(&mut rng, 0.1)));
    let table = gauge_invariance_scan(&space, &rep, 1.0, &samples).unwrap();
    assert_eq!(table.rows.len(), 5);
    assert!(table.rows[0].admissible);
    assert!(table.rows[0].distance_from_baseline < 1e-14);
    for row in &table.rows[1..3] {
        assert!(row.admissible, "deviation {}", row.admissibility_deviation);
        assert!(row.distance_from_baseline < 1e-10);
    }
    for row in &table.rows[3..] {
        assert!(!row.admissible);
        assert!(row.excess_over_baseline >= 1e-3);
    }
    assert!(table.admissible_max_distance() < 1e-10);
    assert!(table.inadmissible_min_excess() >= 1e-3);
}

#[test]
fn perturbed_admissible_angles_leave_the_baseline_smoothly() {
    let mut rng = ChaCha12Rng::seed_from_u64(43);
    let space = FockSpace::new(2).unwrap();
    let rep = gamma_rep::<f64>();
    let base = sample_admissible(&mut rng).upper();
    let mut excesses = Vec::new();
    for eps in [0.01f64, 0.1] {
        let mut upper = base;
        upper[0] += eps;
        let theta = ThetaMatrix::from_upper(upper);
        let deviation = admissibility_check(&theta).max_deviation;
        assert!((deviation - eps).abs() < 1e-12, "deviation {deviation}");
        assert!(deviation > ADMISSIBLE_BAND);
        let table = gauge_invariance_scan(&space, &rep, 1.0, &[theta]).unwrap();
        assert!(!table.rows[0].admissible);
        excesses.push(table.rows[0].excess_over_baseline);
    }
    assert!(excesses[0] >= 1e-3, "eps = 0.01 excess {}", excesses[0]);
    assert!(excesses[0] < 0.2, "eps = 0.01 excess {}", excesses[0]);
    assert!(
        excesses[0] < excesses[1],
        "excess should grow with the perturbation: {excesses:?}"
    );
}

#[test]
fn resigning_flips_the_deformation_coefficient() {
    let gens = bare_generators(2, 1.0, USign::Plus);
    let other = gens.resigned(USign::Minus);
    assert_eq!(other.u, -gens.u);
    let diff = gens.level1[0].sub(&other.level1[0]);
    let expected = gens.bilocal[0].scale(gens.u + gens.u);
    assert!(diff.sub(&expected).max_abs() < 1e-14);
}

#[test]
fn drinfeld_weight_tensor_and_structure_closure() {
    let rep = gamma_rep::<f64>();
    let report = check_drinfeld_relations(&rep, 1.0, &[]).unwrap();
    assert_eq!(report.structure_closure, 0.0);
    assert!((report.max_weight - 1.0 / 24.0).abs() < 1e-15);
    assert!(report.blocks.is_empty());
}

#[test]
fn drinfeld_relations_close_on_the_two_particle_block() {
    let rep = gamma_rep::<f64>();
    let report = check_drinfeld_relations(&rep, 1.0, &[2]).unwrap();
    let block = &report.blocks[0];
    assert_eq!(block.total_particles, 2);
    assert_eq!(block.dim, 28);
    assert!(block.first_relation < 1e-12, "first {}", block.first_relation);
    assert!(
        block.second_relation_mixed_triple < 1e-12,
        "mixed {}",
        block.second_relation_mixed_triple
    );
    assert!(
        block.second_relation_level0_triple > 0.3,
        "level0 triple {}",
        block.second_relation_level0_triple
    );
}

#[test]
fn drinfeld_relations_close_on_larger_blocks() {
    let rep = gamma_rep::<f64>();
    let report = check_drinfeld_relations(&rep, 1.0, &[3, 4]).unwrap();
    for (block, dim) in report.blocks.iter().zip([56usize, 70]) {
        assert_eq!(block.dim, dim);
        assert!(
            block.first_relation < 1e-12,
            "N = {}: first {}",
            block.total_particles,
            block.first_relation
        );
        assert!(
            block.second_relation_mixed_triple < 1e-12,
            "N = {}: mixed {}",
            block.total_particles,
            block.second_relation_mixed_triple
        );
        assert!(block.second_relation_level0_triple > 0.3);
    }
}
