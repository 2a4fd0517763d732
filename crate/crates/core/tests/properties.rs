//! Algebraic and structural invariants on random inputs.

use proptest::prelude::*;

use autspine::folding::{fold, fold_shuffled, is_automorphism, wedge_of_words};
use autspine::freegroup::{compose_all, Endomorphism, Letter, Side, Transvection, Word};
use autspine::sampling::{random_vertex, rng_from_seed};
use autspine::spine::Mode;

const RANK: usize = 3;

fn raw_letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=RANK, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv)), 0..14)
}

fn word() -> impl Strategy<Value = Word> {
    raw_letters().prop_map(Word::reduce)
}

fn nonempty_word() -> impl Strategy<Value = Word> {
    word().prop_filter("nontrivial", |w| !w.is_empty())
}

fn transvection() -> impl Strategy<Value = Transvection> {
    (any::<bool>(), 1..=RANK, 1..RANK, any::<bool>()).prop_map(|(left, i, k, inv)| {
        let j = if k >= i { k + 1 } else { k };
        let side = if left { Side::Left } else { Side::Right };
        Transvection::new(side, i, j, if inv { -1 } else { 1 }).unwrap()
    })
}

fn automorphism() -> impl Strategy<Value = Endomorphism> {
    prop::collection::vec(transvection(), 0..6).prop_map(|ts| compose_all(&ts, RANK).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduce_is_idempotent(raw in raw_letters()) {
        let w = Word::reduce(raw);
        prop_assert_eq!(Word::reduce(w.letters().iter().copied()), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inverse()));
        prop_assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn multiplication_is_associative(u in word(), v in word(), w in word()) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
    }

    #[test]
    fn apply_is_a_homomorphism(f in automorphism(), u in word(), v in word()) {
        let lhs = f.apply(&u.mul(&v)).unwrap();
        let rhs = f.apply(&u).unwrap().mul(&f.apply(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.apply(&u.inverse()).unwrap(), f.apply(&u).unwrap().inverse());
    }

    #[test]
    fn compose_applies_right_factor_first(f in automorphism(), g in automorphism(), w in word()) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.apply(&w).unwrap(), f.apply(&g.apply(&w).unwrap()).unwrap());
    }

    #[test]
    fn compose_is_associative(f in automorphism(), g in automorphism(), h in automorphism()) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn transvection_products_are_automorphisms(ts in prop::collection::vec(transvection(), 0..6)) {
        let f = compose_all(&ts, RANK).unwrap();
        prop_assert!(is_automorphism(&f));
        let inverse: Vec<Transvection> = ts.iter().rev().map(|t| t.inverse()).collect();
        prop_assert!(f.compose(&compose_all(&inverse, RANK).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn folding_is_confluent_and_immersive(words in prop::collection::vec(nonempty_word(), 1..4), seed in any::<u64>()) {
        let wedge = wedge_of_words(&words).unwrap();
        let canonical = fold(&wedge.graph);
        let shuffled = fold_shuffled(&wedge.graph, &mut rng_from_seed(seed));
        prop_assert_eq!(&canonical.graph, &shuffled.graph);
        prop_assert!(canonical.graph.is_immersion());
        for (w, l) in words.iter().zip(&wedge.loops) {
            let image = canonical.map_path(l);
            prop_assert_eq!(canonical.graph.read_path(&image), w.letters().to_vec());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn collapses_and_blow_ups_keep_rank(seed in any::<u64>(), k_mode in any::<bool>()) {
        let mode = if k_mode { Mode::K } else { Mode::L };
        let v = random_vertex(&mut rng_from_seed(seed), RANK, mode).unwrap();
        prop_assert_eq!(v.graph().rank().unwrap(), RANK);
        for f in v.graph().enumerate_forests() {
            if let Ok(c) = v.collapse(&f) {
                prop_assert_eq!(c.graph().rank().unwrap(), RANK);
                prop_assert!(f.is_empty() || v.adjacent(&c));
            }
        }
        for b in v.marked().blow_ups(mode) {
            prop_assert_eq!(b.graph().rank().unwrap(), RANK);
        }
    }
}
