use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use so5_thirring::bethe::integer_rank;
use so5_thirring::linalg::vec_dot;
use so5_thirring::{
    admissibility_check, admissibility_constraint_rank, admissibility_constraint_rows,
    bethe_amplitude, bethe_vector_on_basis, build_fock_state, enumerate_quantum_numbers,
    free_hamiltonian_on_basis, gauge_freedom_dimension, hermitian_eigenvalues, require_admissible,
    sample_admissible, sample_antisymmetric, sample_inadmissible, sector_basis, sector_dimension,
    solve_bethe, theta_from_couplings, Complex64, CouplingConfig, FockSpace, Operator, So5Error,
    StateConstruction, ThetaMatrix, N_FLAVORS,
};

const PI: f64 = std::f64::consts::PI;
const REFERENCE_UPPER: [f64; 6] = [0.9, -1.3, 0.4, 2.1, -0.6, 1.1];

fn reference_cfg() -> CouplingConfig {
    CouplingConfig::reference()
}

#[test]
fn exchange_angle_from_couplings_single_pair() {
    let mut c_pair = [[0.0; N_FLAVORS]; N_FLAVORS];
    c_pair[0][1] = 1.0;
    c_pair[1][0] = 1.0;
    let cfg = CouplingConfig::new(2.0, 1.0, [1.0, 2.0, 3.0, 4.0], c_pair).unwrap();
    let theta = theta_from_couplings(&cfg).unwrap();
    assert!((theta.angle(0, 1) + 1.0).abs() < 1e-15);
    assert!((theta.angle(1, 0) - 1.0).abs() < 1e-15);
    for &(i, j) in &[(0usize, 2usize), (0, 3), (1, 2), (1, 3), (2, 3)] {
        assert_eq!(theta.angle(i, j), 0.0);
    }
}

#[test]
fn exchange_angle_needs_distinct_hopping_weights() {
    let mut c_pair = [[0.0; N_FLAVORS]; N_FLAVORS];
    c_pair[0][1] = 1.0;
    c_pair[1][0] = 1.0;
    let cfg = CouplingConfig {
        v: 1.0,
        g: 1.0,
        c: [1.0, 1.0, 2.0, 3.0],
        c_pair,
    };
    assert!(theta_from_couplings(&cfg).is_err());
}

#[test]
fn potential_form_angles_pass_every_constraint() {
    let theta = ThetaMatrix::from_potential([0.4, -1.2, 2.0, 0.7]);
    let report = admissibility_check(&theta);
    assert!(report.max_deviation < 1e-12);
    assert!(report.is_admissible(1e-10));
    assert_eq!(report.breakdown.len(), 144);
    assert!(require_admissible(&theta, 1e-10).is_ok());
}

#[test]
fn generic_angles_fail_the_constraints() {
    let theta = ThetaMatrix::from_upper(REFERENCE_UPPER);
    let report = admissibility_check(&theta);
    assert!(report.max_deviation > 0.1);
    match require_admissible(&theta, 1e-10) {
        Err(So5Error::InadmissibleTheta { deviation, .. }) => {
            assert!((deviation - report.max_deviation).abs() < 1e-15);
        }
        other => panic!("expected InadmissibleTheta, got {other:?}"),
    }
}

#[test]
fn constraint_system_has_rank_three() {
    let rows = admissibility_constraint_rows();
    assert_eq!(rows.len(), 120);
    assert_eq!(admissibility_constraint_rank(), 3);
    assert_eq!(gauge_freedom_dimension(), 3);
}

#[test]
fn dropping_every_constraint_frees_all_six_angles() {
    assert_eq!(integer_rank(&[]), 0);
    assert_eq!(6 - integer_rank(&[]), 6);
    let single = [[1i64, -1, 0, 0, 1, -1]];
    assert_eq!(integer_rank(&single), 1);
}

#[test]
fn inadmissible_sampler_honors_the_floor() {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    for _ in 0..5 {
        let theta = sample_inadmissible(&mut rng, 0.1);
        assert!(admissibility_check(&theta).max_deviation >= 0.1);
    }
}

#[test]
fn single_particle_momentum_is_the_free_one() {
    let theta = ThetaMatrix::from_upper(REFERENCE_UPPER);
    let state = solve_bethe(8.0, [1, 0, 0, 0], &[1], &theta, &reference_cfg()).unwrap();
    assert_eq!(state.flavors, vec![0]);
    assert!((state.momenta[0] - PI / 4.0).abs() < 1e-15);
    let expected_lattice = -1.0 * (PI / 4.0).sin();
    assert!((state.lattice_energy - expected_lattice).abs() < 1e-15);
    let expected_continuum = -1.0 * (PI / 4.0);
    assert!((state.continuum_energy - expected_continuum).abs() < 1e-15);
}

#[test]
fn opposite_flavors_split_symmetrically() {
    let theta = ThetaMatrix::from_upper([PI / 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let state = solve_bethe(4.0, [1, 1, 0, 0], &[0, 0], &theta, &reference_cfg()).unwrap();
    assert_eq!(state.flavors, vec![0, 1]);
    assert!((state.momenta[0] + PI / 8.0).abs() < 1e-15);
    assert!((state.momenta[1] - PI / 8.0).abs() < 1e-15);
}

#[test]
fn momenta_satisfy_the_quantization_condition() {
    let mut rng = ChaCha12Rng::seed_from_u64(19);
    let length = 6usize;
    let occupations = [2usize, 1, 0, 1];
    for _ in 0..4 {
        let theta = sample_antisymmetric(&mut rng);
        let state = solve_bethe(
            length as f64,
            occupations,
            &[0, 2, 3, 1],
            &theta,
            &reference_cfg(),
        )
        .unwrap();
        for (j, &k) in state.momenta.iter().enumerate() {
            let p = state.flavors[j];
            let lhs = Complex64::from_polar(1.0, k * length as f64);
            let mut rhs = Complex64::new(1.0, 0.0);
            for q in 0..N_FLAVORS {
                let t = (theta.angle(p, q) * 0.5).tan();
                let factor = Complex64::new(1.0, -t) / Complex64::new(1.0, t);
                for _ in 0..occupations[q] {
                    rhs *= factor;
                }
            }
            assert!((lhs - rhs).norm() < 1e-13, "particle {j}");
        }
    }
}

#[test]
fn two_particle_amplitude_example() {
    let theta = ThetaMatrix::from_upper([PI / 2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let mut state = solve_bethe(4.0, [1, 1, 0, 0], &[0, 0], &theta, &reference_cfg()).unwrap();
    state.momenta = vec![0.0, 0.0];
    let amp = bethe_amplitude(&state, &[0.0, 1.0]).unwrap();
    assert!((amp - Complex64::new(1.0, 1.0)).norm() < 1e-14);

    match bethe_amplitude(&state, &[1.0, 1.0]) {
        Err(So5Error::AmbiguousSign { .. }) => {}
        other => panic!("expected AmbiguousSign, got {other:?}"),
    }
}

#[test]
fn same_flavor_coincidence_needs_no_exchange_factor() {
    let theta = ThetaMatrix::from_upper(REFERENCE_UPPER);
    let state = solve_bethe(4.0, [2, 0, 0, 0], &[0, 1], &theta, &reference_cfg()).unwrap();
    let amp = bethe_amplitude(&state, &[1.0, 1.0]).unwrap();
    assert!((amp.norm() - 1.0).abs() < 1e-14);
}

#[test]
fn quantum_number_count_must_match_the_sector() {
    let theta = ThetaMatrix::zero();
    assert!(solve_bethe(4.0, [1, 1, 0, 0], &[0], &theta, &reference_cfg()).is_err());
    assert!(solve_bethe(0.0, [1, 0, 0, 0], &[0], &theta, &reference_cfg()).is_err());
}

#[test]
fn enumeration_covers_each_sector_exactly() {
    for occ in [[1usize, 1, 1, 0], [2, 1, 0, 0], [3, 0, 0, 0], [0, 0, 0, 0]] {
        let assignments = enumerate_quantum_numbers(4, occ);
        assert_eq!(assignments.len() as u128, sector_dimension(4, occ));
        let total: usize = occ.iter().sum();
        for qn in &assignments {
            assert_eq!(qn.len(), total);
        }
    }
}

#[test]
fn bethe_vectors_are_hamiltonian_eigenstates() {
    let theta = ThetaMatrix::from_upper(REFERENCE_UPPER);
    let cfg = reference_cfg();
    let basis = sector_basis(4, [1, 1, 0, 0]).unwrap();
    let h = free_hamiltonian_on_basis::<f64>(&basis, &theta, &cfg);
    for qn in [[0i64, 1], [2, 3], [1, 2]] {
        let state = solve_bethe(4.0, [1, 1, 0, 0], &qn, &theta, &cfg).unwrap();
        let v = bethe_vector_on_basis(&basis, &state).unwrap();
        let hv = h.mul_vec(&v);
        let mut worst = 0.0f64;
        for (a, b) in hv.iter().zip(&v) {
            worst = worst.max((a - b.scale(state.lattice_energy)).norm());
        }
        assert!(worst < 1e-10, "residual {worst} for {qn:?}");
    }
}

#[test]
fn deformed_and_bare_constructions_agree() {
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    let space = FockSpace::new(3).unwrap();
    let cfg = reference_cfg();
    let theta = sample_admissible(&mut rng);
    let state = solve_bethe(3.0, [1, 1, 0, 0], &[1, 2], &theta, &cfg).unwrap();
    let deformed = build_fock_state(&space, &state, StateConstruction::Deformed).unwrap();
    let bare = build_fock_state(&space, &state, StateConstruction::Bare).unwrap();
    let overlap = vec_dot(&deformed, &bare).norm();
    assert!(overlap >= 1.0 - 1e-12, "overlap {overlap}");
}

#[test]
fn construction_rejects_mismatched_length() {
    let space = FockSpace::new(3).unwrap();
    let theta = ThetaMatrix::zero();
    let state = solve_bethe(4.0, [1, 0, 0, 0], &[0], &theta, &reference_cfg()).unwrap();
    assert!(build_fock_state(&space, &state, StateConstruction::Bare).is_err());
}

#[test]
fn six_site_two_particle_gram_matrix_has_full_rank() {
    let theta = ThetaMatrix::from_upper(REFERENCE_UPPER);
    let cfg = reference_cfg();
    let occ = [1usize, 1, 0, 0];
    let basis = sector_basis(6, occ).unwrap();
    let assignments = enumerate_quantum_numbers(6, occ);
    assert_eq!(assignments.len(), 36);
    assert_eq!(basis.dim(), 36);
    let vectors: Vec<Vec<Complex64>> = assignments
        .iter()
        .map(|qn| {
            let state = solve_bethe(6.0, occ, qn, &theta, &cfg).unwrap();
            bethe_vector_on_basis(&basis, &state).unwrap()
        })
        .collect();
    let n = vectors.len();
    let mut triplets = Vec::with_capacity(n * n);
    for (r, a) in vectors.iter().enumerate() {
        for (c, b) in vectors.iter().enumerate() {
            triplets.push((r, c, vec_dot(a, b)));
        }
    }
    let gram = Operator::from_triplets(n, n, triplets);
    let eigs = hermitian_eigenvalues(&gram, 1e-10).unwrap();
    let rank = eigs.iter().filter(|&&e| e > 1e-8).count();
    assert_eq!(rank, 36);
}

#[test]
fn vacuum_state_solves_trivially() {
    let theta = ThetaMatrix::from_upper(REFERENCE_UPPER);
    let state = solve_bethe(4.0, [0, 0, 0, 0], &[], &theta, &reference_cfg()).unwrap();
    assert!(state.momenta.is_empty());
    assert_eq!(state.lattice_energy, 0.0);
    assert_eq!(state.continuum_energy, 0.0);
}
