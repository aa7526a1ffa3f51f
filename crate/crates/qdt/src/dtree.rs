//! Decision trees of comparison sorts, built by exhaustive trace merging.
//!
//! For a fixed algorithm and input size `n`, every one of the `n!` input
//! permutations is run through an instrumented comparator; the recorded
//! outcome sequences are merged into a tree whose internal nodes are
//! comparisons (`left child = "<=" branch`), whose leaves are input
//! classes, and whose leaf levels are exact comparison counts. Worst case,
//! average case, and external path length then come straight from the leaf
//! level profile — no formulas are trusted, everything is counted.
//!
//! The node level function of any such tree satisfies the join
//! co-valuation inequality `l(x∨z) >= l(x∨y) + l(y∨z) - l(y)` with the
//! join taken at the lowest common ancestor; [`check_level_covaluation`]
//! verifies it exhaustively or by seeded sampling, and
//! [`complexity_pmetric`] turns the level function into a partial metric
//! on the tree's nodes whose self-distance at a node is the number of
//! comparisons spent reaching it.

use crate::check::{CheckResult, Witness};
use crate::rat::{rat, rat_int, rat_string, Rat};
use crate::semival::{level_metrics_on_tree, DistanceStructure, QuasiForm, SemivalError};
use crate::treecore::{BinTree, NodeId, PathLenSeq};
use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest `n` the builder accepts unless the caller raises the bound
/// explicitly (the tree has `n!` leaves; 8 keeps builds under a second).
pub const DEFAULT_MAX_N: usize = 8;

/// Default sample count for [`ScanMode::Sampled`].
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

/// Default seed for [`ScanMode::Sampled`].
pub const DEFAULT_SEED: u64 = 0;

/// The two pinned comparison sorts.
///
/// * `Insertion`: classic binary insertion into a sorted prefix by scanning
///   right-to-left, comparing `a[j-1] <= a[j]` and swapping on failure.
/// * `Merge`: top-down mergesort splitting at `⌈len/2⌉` (left half never
///   smaller), merging head-to-head and emitting the left head on ties.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortAlgorithm {
    Insertion,
    Merge,
}

impl SortAlgorithm {
    pub const ALL: [SortAlgorithm; 2] = [SortAlgorithm::Insertion, SortAlgorithm::Merge];
}

impl fmt::Display for SortAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortAlgorithm::Insertion => write!(f, "insertion"),
            SortAlgorithm::Merge => write!(f, "merge"),
        }
    }
}

impl FromStr for SortAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "insertion" => Ok(SortAlgorithm::Insertion),
            "merge" => Ok(SortAlgorithm::Merge),
            other => Err(format!("unknown algorithm {other:?} (expected insertion|merge)")),
        }
    }
}

/// Errors from decision-tree construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DtreeError {
    ZeroItems,
    /// `n` exceeds the explicit bound (tree size is factorial in `n`).
    ExceedsBound { n: usize, bound: usize },
}

impl fmt::Display for DtreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DtreeError::ZeroItems => write!(f, "cannot sort zero items"),
            DtreeError::ExceedsBound { n, bound } => {
                write!(f, "n = {n} exceeds the bound {bound}; the tree would have n! leaves")
            }
        }
    }
}

impl std::error::Error for DtreeError {}

/// One recorded comparison: "is input[i] <= input[j]?" and its outcome.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Step {
    i: usize,
    j: usize,
    le: bool,
}

/// Runs the pinned insertion sort on `input` (a permutation of `0..n`),
/// recording each comparison against the original input positions.
/// Returns the sorted `(value, origin)` array for verification.
fn insertion_steps(input: &[usize], steps: &mut Vec<Step>) -> Vec<(usize, usize)> {
    // (value, origin position in the input)
    let mut a: Vec<(usize, usize)> = input.iter().copied().zip(0..).collect();
    for k in 1..a.len() {
        let mut j = k;
        while j > 0 {
            let le = a[j - 1].0 <= a[j].0;
            steps.push(Step { i: a[j - 1].1, j: a[j].1, le });
            if le {
                break;
            }
            a.swap(j - 1, j);
            j -= 1;
        }
    }
    a
}

/// Runs the pinned top-down mergesort, recording comparisons the same way.
/// Returns the sorted `(value, origin)` array for verification.
fn merge_steps(input: &[usize], steps: &mut Vec<Step>) -> Vec<(usize, usize)> {
    fn msort(mut v: Vec<(usize, usize)>, steps: &mut Vec<Step>) -> Vec<(usize, usize)> {
        if v.len() <= 1 {
            return v;
        }
        let right = v.split_off(v.len().div_ceil(2));
        let left = msort(v, steps);
        let right = msort(right, steps);
        let mut out = Vec::with_capacity(left.len() + right.len());
        let (mut i, mut j) = (0, 0);
        while i < left.len() && j < right.len() {
            let le = left[i].0 <= right[j].0;
            steps.push(Step { i: left[i].1, j: right[j].1, le });
            if le {
                out.push(left[i]);
                i += 1;
            } else {
                out.push(right[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&left[i..]);
        out.extend_from_slice(&right[j..]);
        out
    }
    let tagged: Vec<(usize, usize)> = input.iter().copied().zip(0..).collect();
    msort(tagged, steps)
}

/// The merged decision tree of one algorithm at one input size.
#[derive(Clone, Debug)]
pub struct DecisionTree {
    algorithm: SortAlgorithm,
    n: usize,
    tree: BinTree,
    /// Comparison at each internal node, `None` at leaves.
    compare: Vec<Option<(usize, usize)>>,
    /// Input permutation classified by each leaf, `None` at internal nodes.
    leaf_perm: Vec<Option<Vec<usize>>>,
}

/// Builds the decision tree with the default size bound.
pub fn build_decision_tree(alg: SortAlgorithm, n: usize) -> Result<DecisionTree, DtreeError> {
    build_decision_tree_with_bound(alg, n, DEFAULT_MAX_N)
}

/// Builds the decision tree, allowing the caller to raise or lower the
/// factorial-growth guard.
pub fn build_decision_tree_with_bound(
    alg: SortAlgorithm,
    n: usize,
    bound: usize,
) -> Result<DecisionTree, DtreeError> {
    if n == 0 {
        return Err(DtreeError::ZeroItems);
    }
    if n > bound {
        return Err(DtreeError::ExceedsBound { n, bound });
    }
    let mut tree = BinTree::new();
    let mut compare: Vec<Option<(usize, usize)>> = vec![None];
    let mut leaf_perm: Vec<Option<Vec<usize>>> = vec![None];
    let mut steps = Vec::new();
    for perm in (0..n).permutations(n) {
        steps.clear();
        match alg {
            SortAlgorithm::Insertion => insertion_steps(&perm, &mut steps),
            SortAlgorithm::Merge => merge_steps(&perm, &mut steps),
        };
        let mut cur = tree.root();
        for step in &steps {
            match compare[cur.index()] {
                None => compare[cur.index()] = Some((step.i, step.j)),
                Some(pair) => assert_eq!(
                    pair,
                    (step.i, step.j),
                    "the comparator is deterministic: a node's comparison is fixed by the path"
                ),
            }
            let existing = if step.le {
                tree.left(cur).expect("own id")
            } else {
                tree.right(cur).expect("own id")
            };
            cur = match existing {
                Some(child) => child,
                None => {
                    let child = if step.le {
                        tree.add_left(cur).expect("fresh slot")
                    } else {
                        tree.add_right(cur).expect("fresh slot")
                    };
                    compare.push(None);
                    leaf_perm.push(None);
                    child
                }
            };
        }
        assert!(
            compare[cur.index()].is_none() && leaf_perm[cur.index()].is_none(),
            "no trace is a prefix of another: each input ends at its own fresh leaf"
        );
        leaf_perm[cur.index()] = Some(perm);
    }
    Ok(DecisionTree { algorithm: alg, n, tree, compare, leaf_perm })
}

impl DecisionTree {
    pub fn algorithm(&self) -> SortAlgorithm {
        self.algorithm
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The underlying tree (levels are comparison counts).
    pub fn tree(&self) -> &BinTree {
        &self.tree
    }

    /// The comparison asked at an internal node, as input positions
    /// `(i, j)` of "is input[i] <= input[j]?".
    pub fn comparison(&self, id: NodeId) -> Option<(usize, usize)> {
        self.compare.get(id.index()).copied().flatten()
    }

    /// The input permutation classified by a leaf.
    pub fn leaf_permutation(&self, id: NodeId) -> Option<&[usize]> {
        self.leaf_perm.get(id.index()).and_then(|p| p.as_deref())
    }

    /// Nodes with exactly one child — possible in principle when a
    /// comparison's outcome is forced by earlier answers; reported so the
    /// profile's Kraft sum can be interpreted.
    pub fn single_child_count(&self) -> usize {
        self.tree.single_child_count()
    }

    /// Verifies the join co-valuation law of this tree's level function.
    pub fn check_level_covaluation(&self, mode: ScanMode) -> CheckResult {
        check_level_covaluation(&self.tree, mode)
    }

    /// Graphviz rendering: internal nodes show their comparison, leaves
    /// (boxes) show the input permutation they classify, and edges are
    /// labeled `y`/`n`. Deterministic for a fixed tree.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph decisions {\n");
        for id in self.tree.node_ids() {
            match self.comparison(id) {
                Some((i, j)) => {
                    out.push_str(&format!("  {id} [label=\"a{i} <= a{j}?\"];\n"));
                }
                None => {
                    let perm = self
                        .leaf_permutation(id)
                        .expect("nodes are comparisons or classified inputs");
                    let body = perm.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                    out.push_str(&format!("  {id} [shape=box, label=\"({body})\"];\n"));
                }
            }
        }
        for id in self.tree.node_ids() {
            if let Some(l) = self.tree.left(id).expect("own id") {
                out.push_str(&format!("  {id} -> {l} [label=\"y\"];\n"));
            }
            if let Some(r) = self.tree.right(id).expect("own id") {
                out.push_str(&format!("  {id} -> {r} [label=\"n\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Exact complexity figures read off a decision tree's leaf levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexityReport {
    pub alg: SortAlgorithm,
    pub n: usize,
    /// Maximum comparisons over all inputs.
    pub worst: u32,
    /// Mean comparisons over the uniform input distribution, exact.
    #[serde(with = "rat_string")]
    pub average: Rat,
    /// External path length: total comparisons over all `n!` inputs.
    pub epl: u64,
    /// Sorted multiset of leaf levels.
    pub profile: PathLenSeq,
}

/// Reads worst case, exact average, external path length, and the leaf
/// profile off a decision tree.
pub fn complexity_report(dt: &DecisionTree) -> ComplexityReport {
    let profile = dt.tree.path_len_seq();
    let worst = *profile.depths().last().expect("at least one leaf");
    let epl = profile.epl();
    let count = profile.len();
    let average = rat(epl as i64, count as i64);
    ComplexityReport { alg: dt.algorithm, n: dt.n, worst, average, epl, profile }
}

/// How to scan triples when checking the level inequality.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScanMode {
    /// Every ordered node triple (cubic in tree size).
    Exhaustive,
    /// `samples` independent triples from a seeded generator; the same
    /// seed always scans the same triples.
    Sampled { samples: u64, seed: u64 },
}

/// Checks `l(x∨z) >= l(x∨y) + l(y∨z) - l(y)` over node triples of a tree,
/// where `l` is the level and `∨` the lowest common ancestor.
///
/// This is the join co-valuation law of the level function, checked in
/// integer arithmetic; it is what makes the level-based quasi- and partial
/// metrics on the tree obey their triangle inequalities.
pub fn check_level_covaluation(tree: &BinTree, mode: ScanMode) -> CheckResult {
    let ids: Vec<NodeId> = tree.node_ids().collect();
    let level = |id: NodeId| i64::from(tree.level(id).expect("own id"));
    let lca = |a: NodeId, b: NodeId| tree.lca(a, b).expect("own ids");
    let check_triple = |x: NodeId, y: NodeId, z: NodeId| -> Option<Witness> {
        let lhs = level(lca(x, z));
        let rhs = level(lca(x, y)) + level(lca(y, z)) - level(y);
        if lhs >= rhs {
            None
        } else {
            Some(Witness::new(
                [x.to_string(), y.to_string(), z.to_string()],
                "l(x∨z) >= l(x∨y) + l(y∨z) - l(y)",
                rat_int(lhs),
                rat_int(rhs),
            ))
        }
    };
    match mode {
        ScanMode::Exhaustive => {
            for &x in &ids {
                for &y in &ids {
                    for &z in &ids {
                        if let Some(w) = check_triple(x, y, z) {
                            return CheckResult::fail(w);
                        }
                    }
                }
            }
        }
        ScanMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let x = ids[rng.random_range(0..ids.len())];
                let y = ids[rng.random_range(0..ids.len())];
                let z = ids[rng.random_range(0..ids.len())];
                if let Some(w) = check_triple(x, y, z) {
                    return CheckResult::fail(w);
                }
            }
        }
    }
    CheckResult::pass()
}

/// The partial metric induced on a decision tree's nodes by its level
/// function: `p(x,y) = l(x) + l(y) - l(x∨y)`, with weight `l` itself.
///
/// Built through the co-valuation route (precondition checked, weight
/// solved, weighting identity verified), not by writing the formula down;
/// `p(x,x)` is the number of comparisons spent reaching `x`.
pub fn complexity_pmetric(dt: &DecisionTree) -> Result<DistanceStructure, SemivalError> {
    let (_q, _w, p) = level_metrics_on_tree(&dt.tree, QuasiForm::Conjugate)?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: comparison counts straight from the instrumented sorts,
    /// bypassing tree construction entirely.
    fn count_comparisons(alg: SortAlgorithm, input: &[usize]) -> usize {
        let mut steps = Vec::new();
        match alg {
            SortAlgorithm::Insertion => insertion_steps(input, &mut steps),
            SortAlgorithm::Merge => merge_steps(input, &mut steps),
        };
        steps.len()
    }

    /// Oracle: both instrumented sorts actually sort, and each recorded
    /// step's outcome matches the values at the recorded origins.
    #[test]
    fn instrumented_sorts_sort() {
        let want: fn(usize) -> Vec<usize> = |n| (0..n).collect();
        for n in 1..=6usize {
            for perm in (0..n).permutations(n) {
                for run in [insertion_steps, merge_steps] {
                    let mut steps = Vec::new();
                    let sorted = run(&perm, &mut steps);
                    assert_eq!(
                        sorted.iter().map(|&(v, _)| v).collect::<Vec<_>>(),
                        want(n)
                    );
                    for s in &steps {
                        assert_eq!(s.le, perm[s.i] <= perm[s.j], "outcome vs origins");
                    }
                }
            }
        }
    }

    #[test]
    fn frozen_complexity_figures() {
        // Desk-checked values for the pinned variants.
        let report = |alg, n| complexity_report(&build_decision_tree(alg, n).unwrap());

        let ins3 = report(SortAlgorithm::Insertion, 3);
        assert_eq!((ins3.worst, ins3.epl), (3, 16));
        assert_eq!(ins3.average, rat(8, 3));
        assert_eq!(ins3.profile.to_string(), "⟨2,2,3,3,3,3⟩");

        let mrg3 = report(SortAlgorithm::Merge, 3);
        assert_eq!((mrg3.worst, mrg3.epl), (3, 16), "merge equals insertion at n = 3");

        let ins4 = report(SortAlgorithm::Insertion, 4);
        assert_eq!((ins4.worst, ins4.epl), (6, 118));
        assert_eq!(ins4.average, rat(59, 12));

        let mrg4 = report(SortAlgorithm::Merge, 4);
        assert_eq!((mrg4.worst, mrg4.epl), (5, 112));
        assert_eq!(mrg4.average, rat(14, 3));
        // Profile: eight leaves at level 4, sixteen at level 5.
        let depths = mrg4.profile.depths();
        assert_eq!(depths.iter().filter(|&&d| d == 4).count(), 8);
        assert_eq!(depths.iter().filter(|&&d| d == 5).count(), 16);
    }

    #[test]
    fn closed_forms_up_to_seven() {
        for n in 2..=7usize {
            let ins = complexity_report(&build_decision_tree(SortAlgorithm::Insertion, n).unwrap());
            assert_eq!(u64::from(ins.worst), (n * (n - 1) / 2) as u64, "insertion worst n={n}");
            let mrg = complexity_report(&build_decision_tree(SortAlgorithm::Merge, n).unwrap());
            let lg = u64::from(n.next_power_of_two().trailing_zeros()); // ⌈lg n⌉
            assert_eq!(
                u64::from(mrg.worst),
                n as u64 * lg - (1u64 << lg) + 1,
                "merge worst n={n}"
            );
        }
        let epl = |alg, n| complexity_report(&build_decision_tree(alg, n).unwrap()).epl;
        assert_eq!(
            (5..=7).map(|n| epl(SortAlgorithm::Insertion, n)).collect::<Vec<_>>(),
            vec![926, 7956, 75132]
        );
        assert_eq!(
            (5..=7).map(|n| epl(SortAlgorithm::Merge, n)).collect::<Vec<_>>(),
            vec![860, 7080, 64176]
        );
    }

    #[test]
    fn tree_structure_is_consistent() {
        for alg in SortAlgorithm::ALL {
            for n in 1..=5usize {
                let dt = build_decision_tree(alg, n).unwrap();
                let factorial: usize = (1..=n).product();
                let leaves = dt.tree().leaves();
                assert_eq!(leaves.len(), factorial, "{alg} n={n}: one leaf per input");
                // Every leaf classifies a distinct permutation; its level
                // equals the oracle's comparison count for that input.
                let mut seen = std::collections::BTreeSet::new();
                for leaf in leaves {
                    let perm = dt.leaf_permutation(leaf).unwrap().to_vec();
                    assert!(seen.insert(perm.clone()));
                    assert_eq!(
                        dt.tree().level(leaf).unwrap() as usize,
                        count_comparisons(alg, &perm),
                        "{alg} n={n}: leaf level is the comparison count"
                    );
                }
                // Internal nodes carry comparisons, leaves carry inputs.
                for id in dt.tree().node_ids() {
                    let is_leaf = dt.tree().is_leaf(id).unwrap();
                    assert_eq!(dt.comparison(id).is_none(), is_leaf);
                    assert_eq!(dt.leaf_permutation(id).is_some(), is_leaf);
                }
                // Both pinned variants compare only undetermined pairs, so
                // no outcome is ever forced and the trees come out full.
                assert_eq!(dt.single_child_count(), 0, "{alg} n={n}");
                assert!(dt.tree().path_len_seq().is_valid(), "Kraft equality {alg} n={n}");
            }
        }
    }

    #[test]
    fn builder_guards() {
        assert_eq!(build_decision_tree(SortAlgorithm::Merge, 0).unwrap_err(), DtreeError::ZeroItems);
        assert_eq!(
            build_decision_tree(SortAlgorithm::Merge, 9).unwrap_err(),
            DtreeError::ExceedsBound { n: 9, bound: DEFAULT_MAX_N }
        );
        assert!(build_decision_tree_with_bound(SortAlgorithm::Merge, 3, 3).is_ok());
    }

    #[test]
    fn level_covaluation_holds_on_decision_trees() {
        for alg in SortAlgorithm::ALL {
            for n in 1..=4usize {
                let dt = build_decision_tree(alg, n).unwrap();
                assert!(
                    dt.check_level_covaluation(ScanMode::Exhaustive).is_pass(),
                    "{alg} n={n} exhaustive"
                );
            }
            let dt = build_decision_tree(alg, 5).unwrap();
            let mode = ScanMode::Sampled { samples: 20_000, seed: DEFAULT_SEED };
            assert!(dt.check_level_covaluation(mode).is_pass(), "{alg} n=5 sampled");
        }
    }

    #[test]
    fn sampled_scan_is_deterministic() {
        let dt = build_decision_tree(SortAlgorithm::Insertion, 4).unwrap();
        let mode = ScanMode::Sampled { samples: 10_000, seed: 42 };
        assert_eq!(
            check_level_covaluation(dt.tree(), mode),
            check_level_covaluation(dt.tree(), mode),
            "same seed, same verdict"
        );
        assert!(check_level_covaluation(dt.tree(), mode).is_pass());
    }

    #[test]
    fn complexity_pmetric_spends_comparisons_on_the_diagonal() {
        let dt = build_decision_tree(SortAlgorithm::Merge, 3).unwrap();
        let p = complexity_pmetric(&dt).unwrap();
        assert!(p.verify_axioms().is_pass());
        for id in dt.tree().node_ids() {
            assert_eq!(
                p.dist(id.index(), id.index()),
                rat_int(i64::from(dt.tree().level(id).unwrap())),
                "self-distance is the comparison count so far"
            );
        }
    }

    #[test]
    fn report_serde_matches_the_documented_shape() {
        let dt = build_decision_tree(SortAlgorithm::Merge, 4).unwrap();
        let report = complexity_report(&dt);
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["alg"], "merge");
        assert_eq!(v["n"], 4);
        assert_eq!(v["worst"], 5);
        assert_eq!(v["average"], "14/3");
        assert_eq!(v["epl"], 112);
        assert!(v["profile"].is_array());
        let back: ComplexityReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn dot_labels_comparisons_and_leaves() {
        let dt = build_decision_tree(SortAlgorithm::Insertion, 2).unwrap();
        let dot = dt.to_dot();
        assert!(dot.contains("a0 <= a1?"));
        assert!(dot.contains("(0 1)"));
        assert!(dot.contains("(1 0)"));
        assert!(dot.contains("[label=\"y\"]"));
        assert!(dot.contains("[label=\"n\"]"));
    }
}
