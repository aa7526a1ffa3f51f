//! Randomized invariants over the public API. Each strategy stays small
//! enough that a full proptest run finishes in seconds.

use proptest::prelude::*;
use qdt::check::{CheckResult, Witness};
use qdt::dtree::{check_level_covaluation, ScanMode};
use qdt::rat::rat;
use qdt::semival::{level_metrics_on_tree, QuasiForm};
use qdt::treecore::{tree_from_seq, PathLenSeq};

/// Leaf profiles of random full binary trees, produced by the growth
/// process itself: start from a lone root and repeatedly split one leaf
/// into two children one level deeper.
fn full_tree_profiles() -> impl Strategy<Value = PathLenSeq> {
    proptest::collection::vec(any::<prop::sample::Index>(), 0..9).prop_map(|splits| {
        let mut depths = vec![0u32];
        for pick in splits {
            let i = pick.index(depths.len());
            let d = depths.swap_remove(i);
            depths.push(d + 1);
            depths.push(d + 1);
        }
        PathLenSeq::new(depths).expect("bounded growth stays in range")
    })
}

proptest! {
    #[test]
    fn constructor_sorts_and_display_round_trips(
        mut raw in proptest::collection::vec(0u32..=20, 1..=16)
    ) {
        let seq = PathLenSeq::new(raw.clone()).unwrap();
        prop_assert!(seq.depths().windows(2).all(|w| w[0] <= w[1]));
        raw.sort_unstable();
        prop_assert_eq!(seq.depths(), raw.as_slice());

        let round: PathLenSeq = seq.to_string().parse().unwrap();
        prop_assert_eq!(&round, &seq);
        // The ASCII spelling parses to the same value.
        let ascii = seq.to_string().replace('⟨', "<").replace('⟩', ">");
        let round: PathLenSeq = ascii.parse().unwrap();
        prop_assert_eq!(&round, &seq);
        // Serde uses the bare array form.
        let json = serde_json::to_string(&seq).unwrap();
        prop_assert_eq!(serde_json::from_str::<PathLenSeq>(&json).unwrap(), seq);
    }

    #[test]
    fn grown_trees_are_valid_and_round_trip(seq in full_tree_profiles()) {
        prop_assert!(seq.is_valid(), "grown profile {} breaks the Kraft equality", seq);
        prop_assert_eq!(
            u64::from(seq.depths().iter().sum::<u32>()), seq.epl()
        );
        let tree = tree_from_seq(&seq).unwrap();
        prop_assert_eq!(tree.path_len_seq(), seq.clone());
        prop_assert!(tree.is_full());
        prop_assert_eq!(tree.leaves().len(), seq.len());
    }

    #[test]
    fn grown_trees_satisfy_the_level_inequality(seq in full_tree_profiles()) {
        let tree = tree_from_seq(&seq).unwrap();
        let mode = ScanMode::Sampled { samples: 500, seed: 0 };
        let verdict = check_level_covaluation(&tree, mode);
        prop_assert!(verdict.is_pass(), "{}: {}", seq, verdict);
    }

    #[test]
    fn grown_trees_carry_lawful_level_metrics(seq in full_tree_profiles()) {
        let tree = tree_from_seq(&seq).unwrap();
        let (q, w, p) = level_metrics_on_tree(&tree, QuasiForm::Conjugate).unwrap();
        prop_assert!(q.verify_axioms().is_pass());
        prop_assert!(p.verify_axioms().is_pass());
        // The partial metric is the weighted completion of the
        // quasi-metric: p(x,y) = q(x,y) + w(x), pointwise and exact.
        for (x, &wx) in w.iter().enumerate() {
            for y in 0..w.len() {
                prop_assert_eq!(p.dist(x, y), q.dist(x, y) + wx);
            }
        }
    }

    #[test]
    fn verdicts_survive_serde(
        elements in proptest::collection::vec("[a-z]{1,8}", 1..4),
        law in "[a-z ]{1,20}",
        ln in -50i64..50, ld in 1i64..10,
        rn in -50i64..50, rd in 1i64..10,
    ) {
        let witness = Witness::new(elements, law, rat(ln, ld), rat(rn, rd));
        let fail = CheckResult::fail(witness);
        let json = serde_json::to_string(&fail).unwrap();
        prop_assert_eq!(serde_json::from_str::<CheckResult>(&json).unwrap(), fail);

        let pass = CheckResult::pass();
        let json = serde_json::to_string(&pass).unwrap();
        prop_assert_eq!(serde_json::from_str::<CheckResult>(&json).unwrap(), pass);
    }
}
