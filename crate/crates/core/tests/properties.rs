use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semifredkin::count::{count_phase1, Phase, Phase1Table};
use semifredkin::entanglement::{
    entropy_from_distribution, entropy_from_state, schmidt_distribution, supported_classes,
};
use semifredkin::hamiltonian::{build_hf, BoundaryVariant, PhaseParams};
use semifredkin::spectra::{build_excitation, build_path_state, random_excitation_segments};
use semifredkin::walk::{enumerate_walks, equivalence_closure, Floor, MoveSet, Path, Step, WalkClass};

fn steps(max_len: usize) -> impl Strategy<Value = Path> {
    prop::collection::vec(0u8..6, 0..=max_len)
        .prop_map(|codes| Path::new(codes.into_iter().map(|c| Step::from_code(c).unwrap()).collect()))
}

fn phase() -> impl Strategy<Value = Phase> {
    prop::sample::select(Phase::ALL.to_vec())
}

proptest! {
    #[test]
    fn encode_decode_round_trip(path in steps(9)) {
        prop_assert_eq!(Path::decode(path.len(), path.encode()), path);
    }

    #[test]
    fn marked_text_round_trip(path in steps(12)) {
        prop_assert_eq!(Path::parse(&path.to_marked_string()).unwrap(), path);
    }

    #[test]
    fn reversal_is_an_involution(path in steps(12)) {
        prop_assert_eq!(path.reversed().reversed(), path.clone());
        prop_assert_eq!(path.reversed().displacement(), -path.displacement());
        prop_assert_eq!(path.reversed().disconnections().len(), path.disconnections().len());
    }

    #[test]
    fn reversal_swaps_end_indices(n in 0usize..40, a in 1u8..=3, b in 1u8..=3) {
        prop_assert_eq!(count_phase1(n, 0, a, b), count_phase1(n, 0, b, a));
    }

    #[test]
    fn closure_is_the_same_from_any_member(pick in any::<prop::sample::Index>(), a in 1u8..=2, b in 1u8..=2) {
        let walks = enumerate_walks(6, WalkClass::zero(a, b), Floor::Restricted).unwrap();
        let seed = pick.get(&walks);
        let class = equivalence_closure(seed, MoveSet::FULL).unwrap();
        prop_assert!(class.contains(seed));
        let other = &class[pick.index(class.len())];
        prop_assert_eq!(equivalence_closure(other, MoveSet::FULL).unwrap(), class);
    }

    #[test]
    fn schmidt_weights_form_a_distribution(phase in phase(), half in 1usize..60, r in 0usize..4, pick in any::<prop::sample::Index>()) {
        prop_assume!(r < half);
        let class = *pick.get(supported_classes(phase));
        let d = schmidt_distribution(half, r, phase, class).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-12);
        prop_assert!(d.entries.iter().all(|e| e.probability > 0.0 && e.probability <= 1.0));
        let s = entropy_from_distribution(&d);
        prop_assert!(s.entropy >= 0.0);
        prop_assert!(s.entropy <= (s.schmidt_rank as f64).ln() + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_excitations_are_eigenstates(seed in any::<u64>(), k in 1usize..5) {
        let n = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let segs = random_excitation_segments(n, k, &mut rng).unwrap();
        let psi = build_excitation(&segs).unwrap();
        let h = build_hf(n, PhaseParams::for_phase(Phase::Mixing), BoundaryVariant::Standard).unwrap();
        let hv = h.apply_vec(psi.amplitudes());
        let residual: f64 = hv.iter().zip(psi.amplitudes()).map(|(x, y)| (x - k as f64 * y).powi(2)).sum::<f64>().sqrt();
        prop_assert!(residual < 1e-10);
    }

    #[test]
    fn mirrored_state_has_mirrored_entropy(pick in any::<prop::sample::Index>(), cut in 1usize..6) {
        // reversal permutes each site and reverses the site order
        let walks = enumerate_walks(6, WalkClass::zero(1, 2), Floor::Restricted).unwrap();
        let seed = pick.get(&walks);
        let class = equivalence_closure(seed, MoveSet::FULL).unwrap();
        let mirror: Vec<Path> = class.iter().map(Path::reversed).collect();
        let a = entropy_from_state(&build_path_state(&class).unwrap(), cut).unwrap();
        let b = entropy_from_state(&build_path_state(&mirror).unwrap(), 6 - cut).unwrap();
        prop_assert!((a.entropy - b.entropy).abs() < 1e-10);
    }
}

#[test]
fn recursion_table_is_monotone_in_capacity() {
    let small = Phase1Table::new(12, 4);
    let large = Phase1Table::new(20, 12);
    for n in 0..=12 {
        for h in 0..=4 {
            for a in 1..=3 {
                for b in 1..=3 {
                    assert_eq!(small.get(n, h, a, b), large.get(n, h, a, b));
                }
            }
        }
    }
}
