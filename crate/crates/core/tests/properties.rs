//! Property tests for the language catalog, transcripts, and verifiers,
//! checked against brute-force oracles that enumerate memberships directly.

use ogis_lab::lang::{pow32_value, Language};
use ogis_lab::transcript::{Transcript, TranscriptOrder};
use ogis_lab::verifiers::{bcheck, check, hcheck, mincheck, Strategy as CexStrategy};
use proptest::prelude::*;

/// Membership horizon for the exhaustive comparison.
const HORIZON: u64 = 10_000;

/// Tail classification a brute-force subset oracle needs beyond the
/// horizon: which form keeps producing members past any finite bound, and
/// of what shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    None,
    AllNaturals,
    Above(u64),
    Powers(u32),
}

fn tail_of(lang: &Language) -> Tail {
    match lang {
        Language::Universe => Tail::AllNaturals,
        Language::AllAbove(b) => Tail::Above(*b),
        Language::Pow2AtLeast(k) => Tail::Powers(*k),
        _ => Tail::None,
    }
}

/// Does every member of tail `a` beyond any bound belong to `b`?
fn tail_subset(a: Tail, b: Tail) -> bool {
    match (a, b) {
        (Tail::None, _) => true,
        (_, Tail::AllNaturals) => true,
        (Tail::AllNaturals, _) => false,
        (Tail::Above(x), Tail::Above(y)) => x >= y,
        (Tail::Above(_), _) => false,
        (Tail::Powers(i), Tail::Powers(j)) => i >= j,
        (Tail::Powers(k), Tail::Above(b)) => 1u64 << k > b,
        (Tail::Powers(_), Tail::None) => false,
    }
}

/// Brute-force subset oracle: exhaustive membership comparison on
/// `[0, HORIZON]` combined with the forms' tail semantics.
fn subset_oracle(a: &Language, b: &Language) -> bool {
    for x in 0..=HORIZON {
        if a.contains(x) && !b.contains(x) {
            return false;
        }
    }
    tail_subset(tail_of(a), tail_of(b))
}

fn arb_language() -> impl Strategy<Value = Language> {
    prop_oneof![
        Just(Language::Empty),
        Just(Language::Universe),
        (0u64..40).prop_map(Language::UpTo),
        (0u64..40).prop_map(Language::AllAbove),
        proptest::collection::btree_set(0u64..64, 1..6)
            .prop_map(|s| Language::finite(s.into_iter())),
        (0u32..8).prop_map(Language::Pow2AtLeast),
        proptest::collection::btree_set((0u8..2, 0u32..8), 1..6)
            .prop_map(|s| Language::pow32(s.into_iter())),
    ]
}

proptest! {
    #[test]
    fn subset_matches_brute_force(a in arb_language(), b in arb_language()) {
        prop_assert_eq!(a.subset_of(&b), subset_oracle(&a, &b));
    }

    #[test]
    fn difference_witnesses_are_sound_sorted_and_complete(
        a in arb_language(),
        b in arb_language(),
        limit in 1usize..6,
    ) {
        let ws = a.difference_witnesses(&b, limit);
        prop_assert!(ws.windows(2).all(|w| w[0] < w[1]), "ascending");
        for &w in &ws {
            prop_assert!(a.contains(w) && !b.contains(w));
        }
        prop_assert_eq!(ws.is_empty(), a.subset_of(&b));
        // the witnesses are the smallest ones: nothing below the first
        if let Some(&first) = ws.first() {
            for x in 0..first {
                prop_assert!(!(a.contains(x) && !b.contains(x)));
            }
        }
    }

    #[test]
    fn equality_is_an_equivalence(
        a in arb_language(),
        b in arb_language(),
        c in arb_language(),
    ) {
        prop_assert!(a.languages_equal(&a));
        prop_assert_eq!(a.languages_equal(&b), b.languages_equal(&a));
        if a.languages_equal(&b) && b.languages_equal(&c) {
            prop_assert!(a.languages_equal(&c));
        }
    }

    #[test]
    fn min_element_is_least(a in arb_language()) {
        match a.min_element() {
            None => prop_assert!(a.is_empty()),
            Some(m) => {
                prop_assert!(a.contains(m));
                for x in 0..m.min(1 << 12) {
                    prop_assert!(!a.contains(x));
                }
            }
        }
    }

    #[test]
    fn transcripts_never_repeat_and_exhaust_finite_sources(
        a in arb_language(),
        seed in 0u64..32,
    ) {
        let order = if seed % 2 == 0 {
            TranscriptOrder::Ascending
        } else {
            TranscriptOrder::SeededShuffle(seed)
        };
        let mut t = Transcript::new(a.clone(), order).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut bottomed = false;
        for _ in 0..80 {
            match t.next_example() {
                Some(x) => {
                    prop_assert!(!bottomed, "no positive after exhaustion");
                    prop_assert!(a.contains(x), "SAMPLE stays inside the source");
                    prop_assert!(seen.insert(x), "no repeats");
                }
                None => bottomed = true,
            }
        }
        if let Some(n) = a.cardinality() {
            if n <= 80 {
                prop_assert_eq!(seen.len() as u64, n, "finite sources exhaust exactly");
            }
        }
    }

    #[test]
    fn verifier_soundness(
        t in arb_language(),
        c in arb_language(),
        bound in 0u64..20,
        seen in proptest::collection::vec(0u64..64, 0..5),
    ) {
        for s in CexStrategy::ALL_DEFAULT {
            if let Some(w) = check(&t, &c, s) {
                prop_assert!(c.contains(w) && !t.contains(w));
            } else {
                prop_assert!(c.subset_of(&t), "check is complete");
            }
        }
        match mincheck(&t, &c) {
            Some(w) => prop_assert!(c.contains(w) && !t.contains(w)),
            None => prop_assert!(c.subset_of(&t), "mincheck is complete"),
        }
        if let Some(w) = bcheck(bound, &t, &c) {
            prop_assert!(c.contains(w) && !t.contains(w) && w < bound);
        }
        if let Some(w) = hcheck(&t, &c, &seen) {
            let max = seen.iter().copied().max().unwrap();
            prop_assert!(c.contains(w) && !t.contains(w) && w < max);
        }
    }

    #[test]
    fn pow32_values_round_trip(j in 0u8..2, i in 0u32..40) {
        let v = pow32_value(j, i);
        prop_assert_eq!(ogis_lab::lang::pow32_decompose(v), Some((j, i)));
    }
}
