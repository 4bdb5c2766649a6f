use infolab::densemat::hermitian_eigenvalues;
use infolab::densemat::{
    gates, hermitian_eig, partial_trace, tensor, von_neumann_entropy, Complex64, ComplexMatrix,
};
use infolab::ensembles::StageLabel;
use infolab::ensembles::{ClassEnsemble, ClassState};
use infolab::hspkit::{
    enumerate_subgroups, group_fourier, lambda_spectrum, FiniteAbelianGroup, HiddenSubgroupInstance,
};
use infolab::infometrics::{analyze, discord_routes, fano_bounds};
use infolab::optimizer::{certify, minimize_discord, DiscordOptions, MeasurementBasis};
use infolab::random;
use infolab::simulator::optimal_output_rule;
use proptest::prelude::*;
use rand::Rng;

fn ensemble_from_seed(seed: u64, qubits: usize, classes: usize, uniform: bool) -> ClassEnsemble {
    let mut rng = random::rng(seed);
    let dim = 1 << qubits;
    let weights = if uniform {
        vec![1.0 / classes as f64; classes]
    } else {
        random::random_weights(classes, &mut rng)
    };
    let states = weights
        .into_iter()
        .enumerate()
        .map(|(label, weight)| {
            let rank = rng.random_range(1..=dim);
            ClassState {
                label,
                weight,
                state: random::random_density_matrix(dim, rank, &mut rng),
            }
        })
        .collect();
    let mut measured: Vec<usize> = (0..qubits).filter(|_| rng.random_bool(0.5)).collect();
    if measured.is_empty() {
        measured.push(qubits - 1);
    }
    ClassEnsemble::new(states, vec![2; qubits], measured).unwrap()
}

fn integer_matrix(rows: usize, cols: usize, values: &[i8]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |r, c| {
        Complex64::new(
            values[(r * cols + c) % values.len()] as f64,
            values[(r + c) % values.len()] as f64,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_is_associative(a in prop::collection::vec(-9i8..9, 4), b in prop::collection::vec(-9i8..9, 6), c in prop::collection::vec(-9i8..9, 2)) {
        let (a, b, c) = (integer_matrix(2, 2, &a), integer_matrix(3, 2, &b), integer_matrix(1, 2, &c));
        let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
        let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn partial_trace_undoes_tensor(seed in any::<u64>(), da in 1usize..5, db in 1usize..5) {
        let mut rng = random::rng(seed);
        let rho = random::random_density_matrix(da, da, &mut rng);
        let sigma = random::random_density_matrix(db, 1, &mut rng);
        let joint = tensor(&rho, &sigma).unwrap();
        let back = partial_trace(&joint, &[da, db], &[0]).unwrap();
        prop_assert!((&back - &rho).max_abs() <= 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), dim in 1usize..17) {
        let mut rng = random::rng(seed);
        let rank = rng.random_range(1..=dim);
        let rho = random::random_density_matrix(dim, rank, &mut rng);
        let u = random::haar_unitary(dim, &mut rng);
        let a = von_neumann_entropy(&rho).unwrap();
        let b = von_neumann_entropy(&rho.conjugate_by(&u).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 1usize..17) {
        let mut rng = random::rng(seed);
        let a = random::random_density_matrix(dim, dim, &mut rng).scale_real(rng.random_range(0.1..10.0));
        let eig = hermitian_eig(&a).unwrap();
        prop_assert!((&eig.reconstruct() - &a).max_abs() <= 1e-9 * a.max_abs());
    }

    #[test]
    fn mixing_commutes_with_reduction(seed in any::<u64>(), qubits in 1usize..5, classes in 1usize..5) {
        let e = ensemble_from_seed(seed, qubits, classes, false);
        let reduced_then_mixed = e.reduce_to_measured().unwrap().mix();
        let mixed_then_reduced = partial_trace(&e.mix(), e.subsystem_dims(), e.measured()).unwrap();
        prop_assert!((&reduced_then_mixed - &mixed_then_reduced).max_abs() <= 1e-12);
    }

    #[test]
    fn joint_pmf_marginals(seed in any::<u64>(), qubits in 1usize..5, classes in 1usize..5) {
        let e = ensemble_from_seed(seed, qubits, classes, false).reduce_to_measured().unwrap();
        let pmf = e.diagonal_distribution();
        for (p, w) in pmf.class_marginal().iter().zip(e.weights()) {
            prop_assert!((p - w).abs() <= 1e-12);
        }
        for (p, d) in pmf.outcome_marginal().iter().zip(e.mix().real_diagonal()) {
            prop_assert!((p - d).abs() <= 1e-12);
        }
    }

    #[test]
    fn information_sandwich(seed in any::<u64>(), qubits in 1usize..5, classes in 1usize..6) {
        let e = ensemble_from_seed(seed, qubits, classes, false);
        let m = analyze(&e).unwrap();
        let (a, b) = discord_routes(&e).unwrap();
        prop_assert!((a - b).abs() <= 1e-8);
        prop_assert!(m.lower_bound <= m.mutual_information + 1e-8);
        prop_assert!(m.mutual_information <= m.chi + 1e-8);
        prop_assert!(m.coherence >= 0.0 && m.discord >= 0.0);
        prop_assert!((m.irrealism - (m.chi - m.lower_bound)).abs() <= 1e-8);
    }

    #[test]
    fn success_probability_within_fano_bracket(seed in any::<u64>(), qubits in 1usize..5, classes in 2usize..6) {
        let e = ensemble_from_seed(seed, qubits, classes, true);
        let m = analyze(&e).unwrap();
        let p = optimal_output_rule(&e).unwrap().p_success;
        let (upper, lower) = fano_bounds(m.mutual_information, classes).unwrap();
        prop_assert!(lower - 1e-9 <= p && p <= upper + 1e-9);
    }

    #[test]
    fn holevo_is_invariant_under_unitaries(seed in any::<u64>(), qubits in 1usize..5, classes in 1usize..5) {
        let e = ensemble_from_seed(seed, qubits, classes, false);
        let full = ClassEnsemble::new(e.classes().to_vec(), vec![2; qubits], (0..qubits).collect()).unwrap();
        let u = random::haar_unitary(full.dim(), &mut random::rng(seed ^ 1));
        let before = analyze(&full).unwrap().chi;
        let after = analyze(&full.conjugate_by(&u).unwrap()).unwrap().chi;
        prop_assert!((before - after).abs() <= 1e-8);
    }

    #[test]
    fn orthogonal_support_implies_commuting(seed in any::<u64>(), qubits in 1usize..4, classes in 1usize..5) {
        let e = ensemble_from_seed(seed, qubits, classes, false);
        let c = certify(&e).unwrap();
        prop_assert!(!c.orthogonal_support || c.pairwise_commuting);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn optimized_discord_beats_standard_bases(seed in any::<u64>(), qubits in 1usize..3, classes in 2usize..4) {
        let e = ensemble_from_seed(seed, qubits, classes, false).reduce_to_measured().unwrap();
        let opts = DiscordOptions { restarts: 4, seed, ..DiscordOptions::default() };
        let best = minimize_discord(&e, &opts).unwrap().d_min;
        let computational = analyze(&e).unwrap().discord;
        let qft = MeasurementBasis::new(gates::fourier(e.dim())).unwrap();
        let fourier = analyze(&qft.rotate(&e).unwrap()).unwrap().discord;
        prop_assert!(best <= computational + 1e-9);
        prop_assert!(best <= fourier + 1e-9);
    }

    #[test]
    fn lambda_spectrum_matches_explicit_mixture(seed in any::<u64>(), group_index in 0usize..6) {
        let orders = [vec![4], vec![2, 2], vec![6], vec![2, 4], vec![3, 3], vec![2, 2, 2]][group_index].clone();
        let group = FiniteAbelianGroup::new(orders).unwrap();
        let all = enumerate_subgroups(&group).unwrap();
        let mut rng = random::rng(seed);
        let mut chosen: Vec<_> = all.into_iter().filter(|_| rng.random_bool(0.6)).collect();
        if chosen.is_empty() {
            chosen.push(infolab::hspkit::Subgroup::trivial());
        }
        let priors = random::random_weights(chosen.len(), &mut rng);
        let formula = lambda_spectrum(&group, &chosen, &priors).unwrap();
        let inst = HiddenSubgroupInstance::new(group, chosen, priors).unwrap();
        let mut explicit = hermitian_eigenvalues(&inst.ensemble(StageLabel::PostQuery).unwrap().mix()).unwrap();
        let mut formula = formula;
        formula.sort_by(f64::total_cmp);
        explicit.sort_by(f64::total_cmp);
        for (a, b) in formula.iter().zip(&explicit) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn group_fourier_is_unitary() {
    for orders in [
        vec![2],
        vec![5],
        vec![2, 3],
        vec![4, 4],
        vec![2, 2, 2, 2],
        vec![3, 9],
    ] {
        let f = group_fourier(&FiniteAbelianGroup::new(orders).unwrap()).unwrap();
        assert!(f.is_unitary(1e-10));
    }
}
