use proptest::prelude::*;
use proptest::sample::subsequence;

use vincycle::enumerator::{
    avoiders_by_filter, count_avoiders, count_by_filter, enumerate_avoiders, SearchConfig,
};
use vincycle::matcher::avoids_set;
use vincycle::pattern::{Pattern, PatternSet};
use vincycle::verify::all_cyclic_patterns;

fn pool(k: usize) -> Vec<Pattern> {
    all_cyclic_patterns(k)
}

fn totally_vincular(k: usize) -> Vec<Pattern> {
    pool(k)
        .into_iter()
        .filter(|p| p.is_totally_vincular())
        .collect()
}

/// A nonempty set of cyclic patterns of length 3 or 4.
fn pattern_set() -> impl Strategy<Value = PatternSet> {
    (3usize..=4)
        .prop_flat_map(|k| {
            let p = pool(k);
            let len = p.len();
            subsequence(p, 1..=3.min(len))
        })
        .prop_map(|ps| PatternSet::new(ps).unwrap())
}

/// Two nested sets `small ⊆ large` of totally vincular patterns.
fn nested_sets() -> impl Strategy<Value = (PatternSet, PatternSet)> {
    (3usize..=4)
        .prop_flat_map(|k| {
            let p = totally_vincular(k);
            let len = p.len();
            subsequence(p, 1..=len).prop_flat_map(|large| {
                let l = large.len();
                (Just(large.clone()), subsequence(large, 0..=l))
            })
        })
        .prop_map(|(large, small)| {
            (
                PatternSet::new(small).unwrap(),
                PatternSet::new(large).unwrap(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pruned_count_matches_filter(set in pattern_set(), n in 1usize..=7) {
        let cfg = SearchConfig::default();
        prop_assert_eq!(count_avoiders(&set, n, &cfg).unwrap(), count_by_filter(&set, n));
    }

    #[test]
    fn enumeration_matches_filter(set in pattern_set(), n in 1usize..=7) {
        let got: Vec<_> = enumerate_avoiders(&set, n, &SearchConfig::sequential()).unwrap().collect();
        prop_assert_eq!(got, avoiders_by_filter(&set, n));
    }

    #[test]
    fn execution_paths_agree(set in pattern_set(), n in 5usize..=8) {
        let par = count_avoiders(&set, n, &SearchConfig::default()).unwrap();
        let seq = count_avoiders(&set, n, &SearchConfig::sequential()).unwrap();
        let raw = count_avoiders(&set, n, &SearchConfig::default().unpruned()).unwrap();
        prop_assert_eq!(par, seq);
        prop_assert_eq!(par, raw);
    }

    #[test]
    fn avoidance_is_monotone_in_the_set((small, large) in nested_sets(), n in 3usize..=8) {
        let cfg = SearchConfig::default();
        let big: Vec<_> = enumerate_avoiders(&large, n, &cfg).unwrap().collect();
        prop_assert!(big.len() as u64 <= count_avoiders(&small, n, &cfg).unwrap());
        for sigma in &big {
            prop_assert!(avoids_set(sigma, &small), "{} avoids {:?} but not {:?}", sigma, large, small);
        }
    }
}

#[test]
fn pools_have_expected_sizes() {
    assert_eq!(totally_vincular(3).len(), 6);
    assert_eq!(totally_vincular(4).len(), 24);
}
