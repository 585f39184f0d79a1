mod support;

use knotink::{apply_move, canonical_key, enumerate_moves, reduce, MoveKind, DEFAULT_DEPTH};
use proptest::prelude::*;
use support::{random_flat, random_free, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn keys_ignore_rotation_and_relabelling(seed in any::<u64>(), n in 0usize..9, r in 0usize..20) {
        let k = random_flat(&mut rng(seed), n);
        let moved = k.rotated(r).relabel(|l| 3 * l + 7);
        prop_assert_eq!(canonical_key(&moved, DEFAULT_DEPTH), canonical_key(&k, DEFAULT_DEPTH));
    }

    #[test]
    fn reduction_is_idempotent(seed in any::<u64>(), n in 0usize..9) {
        let mut r = rng(seed);
        let flat = reduce(&random_flat(&mut r, n), DEFAULT_DEPTH);
        prop_assert_eq!(reduce(&flat, DEFAULT_DEPTH), flat);
        let free = reduce(&random_free(&mut r, n), DEFAULT_DEPTH);
        prop_assert_eq!(reduce(&free, DEFAULT_DEPTH), free);
    }

    #[test]
    fn padding_is_stripped(seed in any::<u64>(), n in 0usize..7, pick in any::<usize>()) {
        let k = random_flat(&mut rng(seed), n);
        let inserts = enumerate_moves(&k, &[MoveKind::R1Insert, MoveKind::R2Insert]);
        let bigger = apply_move(&k, &inserts[pick % inserts.len()]).unwrap();
        prop_assert_eq!(canonical_key(&bigger, DEFAULT_DEPTH), canonical_key(&k, DEFAULT_DEPTH));
    }

    #[test]
    fn reduction_never_grows(seed in any::<u64>(), n in 0usize..10) {
        let k = random_free(&mut rng(seed), n);
        prop_assert!(canonical_key(&k, DEFAULT_DEPTH).reduced_size <= n);
    }
}
