mod common;

use mbsd::automata::{build_dfa, minimize, STATE_CEILING};
use mbsd::ltlf::eval_word;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dfa_matches_semantics_and_minimization_is_sound(seed in any::<u64>(), n in 1usize..=3) {
        let props = common::props("p", n);
        let f = common::formula(&mut common::rng(seed), &props, 4, true);
        let dfa = build_dfa(&f, &props, 12).unwrap();
        prop_assert!(dfa.num_states() <= STATE_CEILING);
        let min = minimize(&dfa);
        prop_assert!(min.num_states() <= dfa.num_states());
        for w in common::all_words(&props, 4) {
            let idx: Vec<usize> = w.iter().map(|l| dfa.letter_index(l).unwrap()).collect();
            let want = eval_word(&f, &w).unwrap();
            prop_assert_eq!(dfa.accepts_indices(&idx), want, "{} on {:?}", f, w);
            prop_assert_eq!(min.accepts_indices(&idx), want);
        }
    }

    #[test]
    fn minimization_is_idempotent(seed in any::<u64>()) {
        let props = common::props("p", 2);
        let f = common::formula(&mut common::rng(seed), &props, 4, true);
        let min = minimize(&build_dfa(&f, &props, 12).unwrap());
        prop_assert_eq!(minimize(&min), min);
    }
}
