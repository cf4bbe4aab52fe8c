//! Randomized invariants complementing the exhaustive sweeps.

use kltpairs::rootcore::{datum_from_str, WeylWord};
use kltpairs::{parse_rat, rat, rat_to_string};
use proptest::prelude::*;

proptest! {
    #[test]
    fn rational_strings_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rat(&rat_to_string(&r)).unwrap(), r);
    }

    #[test]
    fn weight_basis_round_trip(coords in proptest::collection::vec((-50i64..50, 1i64..12), 3)) {
        let datum = datum_from_str("B3").unwrap();
        let fund: Vec<_> = coords.iter().map(|&(p, q)| rat(p, q)).collect();
        let w = datum.weight_from_fundamental(&fund).unwrap();
        prop_assert_eq!(datum.to_fundamental(&w), fund);
    }

    #[test]
    fn inversion_set_bounds_word_length(letters in proptest::collection::vec(0usize..3, 0..12)) {
        let datum = datum_from_str("A3").unwrap();
        let word = WeylWord::new(letters);
        let inv = datum.inversion_set(&word);
        prop_assert!(inv.len() <= word.len());
        prop_assert_eq!(inv.len() == word.len(), datum.is_reduced(&word));
    }
}
