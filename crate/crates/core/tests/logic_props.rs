use proptest::prelude::*;
use teamsynth::automata::{check_lasso_membership, find_accepting_lasso};
use teamsynth::logic::{eval_ltl, translate, Formula, UltimatelyPeriodicWord};
use teamsynth::symbols::{Alphabet, SymSet};

fn alphabet() -> Alphabet {
    Alphabet::new(["p", "q", "r"]).unwrap()
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0..3usize).prop_map(|i| Formula::atom(["p", "q", "r"][i])),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::eventually),
            inner.clone().prop_map(Formula::always),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::until(a, b)),
        ]
    })
}

fn word() -> impl Strategy<Value = UltimatelyPeriodicWord> {
    let sym = (0u64..8).prop_map(SymSet);
    (prop::collection::vec(sym.clone(), 0..=5), prop::collection::vec(sym, 1..=5))
        .prop_map(|(prefix, period)| UltimatelyPeriodicWord::new(prefix, period))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn membership_matches_semantics(f in formula(), words in prop::collection::vec(word(), 8)) {
        let ba = translate(&f, &alphabet()).unwrap();
        for w in &words {
            prop_assert_eq!(check_lasso_membership(&ba, w).unwrap(), eval_ltl(&f, &alphabet(), w), "{} on {:?}", f, w);
        }
    }

    #[test]
    fn nnf_preserves_semantics(f in formula(), w in word()) {
        prop_assert_eq!(eval_ltl(&f.to_nnf(), &alphabet(), &w), eval_ltl(&f, &alphabet(), &w));
    }

    #[test]
    fn empty_language_rejects_all_samples(f in formula(), words in prop::collection::vec(word(), 10)) {
        let ba = translate(&f, &alphabet()).unwrap();
        if find_accepting_lasso(&ba).is_none() {
            for w in &words {
                prop_assert!(!eval_ltl(&f, &alphabet(), w));
            }
        }
    }
}
