use proptest::prelude::*;
use qcat_core::channel::{ErrorPlacement, NoiseScenario, Pauli, ScenarioSpace};
use qcat_core::concat::ConcatCode;
use qcat_core::qlcc::{self, ErasureFlagSet};
use qcat_core::statevec::{QubitAddress, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn code() -> &'static ConcatCode {
    static CODE: OnceLock<ConcatCode> = OnceLock::new();
    CODE.get_or_init(|| ConcatCode::standard().unwrap())
}

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn noiseless_round_trip(seed in any::<u64>()) {
        let x = StateVector::random(1, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let (decoded, f) = code().run(&x, &NoiseScenario::default()).unwrap();
        prop_assert_eq!(decoded.syndrome.value(), 0);
        prop_assert!(f >= 1.0 - 1e-10);
    }

    #[test]
    fn two_erasures_in_distinct_blocks_recover(
        seed in any::<u64>(),
        blocks in prop_oneof![Just((0usize, 1usize)), Just((0, 2)), Just((1, 2))],
        p1 in 1usize..=5,
        p2 in 1usize..=5,
        x1 in pauli(),
        x2 in pauli(),
    ) {
        let data = StateVector::random(5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut noisy = qlcc::encode(&data).unwrap();
        let a = QubitAddress { block: blocks.0, position: p1 };
        let b = QubitAddress { block: blocks.1, position: p2 };
        noisy.apply_gate(&x1.gate(a.qubit())).unwrap();
        noisy.apply_gate(&x2.gate(b.qubit())).unwrap();
        let out = qlcc::decode_and_recover(&noisy, &ErasureFlagSet::new(vec![a, b]).unwrap()).unwrap();
        prop_assert!(out.state.fidelity(&data).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn scenario_replay_is_bit_exact(seed in any::<u64>(), state_seed in any::<u64>()) {
        let space = ScenarioSpace::new(2, 1, ErrorPlacement::Unconstrained, false).unwrap();
        let sc = space.random(seed);
        prop_assert_eq!(&sc, &space.random(seed));
        let s = StateVector::random(15, &mut ChaCha8Rng::seed_from_u64(state_seed)).unwrap();
        prop_assert_eq!(sc.apply(&s).unwrap(), sc.apply(&s).unwrap());
    }

    #[test]
    fn encoding_preserves_inner_products(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = StateVector::random(1, &mut ChaCha8Rng::seed_from_u64(s1)).unwrap();
        let b = StateVector::random(1, &mut ChaCha8Rng::seed_from_u64(s2)).unwrap();
        let before = a.inner(&b).unwrap();
        let after = code().encode(&a).unwrap().inner(&code().encode(&b).unwrap()).unwrap();
        prop_assert!((before - after).norm() < 1e-10);
    }
}
