mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn motion_reduction_is_sound_on_random_products() {
    let r = common::motion_suite(&mut ChaCha8Rng::seed_from_u64(11), 150);
    assert!(r.sound(), "{r:?}");
    assert!(r.nonempty > 20, "{r:?}");
}

#[test]
fn task_reduction_is_sound_on_random_products() {
    let r = common::task_suite(&mut ChaCha8Rng::seed_from_u64(12), 150);
    assert!(r.sound(), "{r:?}");
    assert!(r.nonempty > 20, "{r:?}");
    eprintln!("{r:?}");
}

#[test]
fn assisting_is_the_presence_xor() {
    use std::collections::HashSet;
    use teamsynth::logic::translate;
    use teamsynth::symbols::SymSet;
    use teamsynth::taskprod::{build_task_motion_product, compute_assisting, compute_dep};

    let rng = &mut ChaCha8Rng::seed_from_u64(13);
    let sv = common::alphabet();
    for _ in 0..100 {
        let motion = common::random_automaton(rng, 8, SymSet(1), 0);
        let f = common::random_formula(rng, 3);
        let ba = translate(&f, &sv).unwrap();
        let mut tm = build_task_motion_product(0, SymSet(1), &motion, &f, &ba, &sv);
        compute_dep(&mut tm, &[Some(0), Some(1), Some(2)]);
        let present: HashSet<_> =
            tm.automaton.transitions().iter().filter_map(|t| t.label.services().map(|s| (t.source, s, t.target))).collect();
        for (i, t) in tm.automaton.transitions().iter().enumerate() {
            let Some(sigma) = t.label.services() else { continue };
            for rho in 1..3 {
                let xor = present.contains(&(t.source, sigma.with(rho), t.target))
                    != present.contains(&(t.source, sigma.without(rho), t.target));
                let expected = xor && tm.foreign.contains(rho);
                assert_eq!(compute_assisting(&tm, i, rho, &sv).unwrap(), expected, "{f}");
                assert_eq!(tm.assisting[i].contains(rho), expected);
                assert_eq!(tm.dep[i].contains(rho), expected);
            }
            assert!(compute_assisting(&tm, i, 0, &sv).is_err());
        }
    }
}
