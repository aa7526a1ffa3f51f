//! The balance order on binary trees with a fixed number of leaves.
//!
//! Trees with the same number of leaves are compared by external path
//! length: the tree with the smaller leaf-level total is the more balanced
//! one. The comparison is a total preorder on path-length sequences — it is
//! reflexive, transitive, and total, but *not* antisymmetric once distinct
//! sequences share an external path length, which first happens at seven
//! leaves. [`BalancePoset::verify_lattice`] audits exactly that: it reports
//! the antisymmetry witnesses and checks the lattice laws on the quotient
//! by equal external path length, which is always a finite chain.
//!
//! The quotient chain carries a weightable quasi-metric built through the
//! co-valuation machinery ([`chain_pmetric`]); its induced partial metric
//! is `p(C,D) = max(rank(C), rank(D))`.

use crate::check::CheckResult;
use crate::dtree::{
    build_decision_tree_with_bound, complexity_report, ComplexityReport, DtreeError,
    SortAlgorithm, DEFAULT_MAX_N,
};
use crate::rat::{rat_int, Rat};
use crate::semival::{
    partial_metric_from, quasi_metric_from_covaluation, solve_weight, verify_lattice_laws,
    DistanceStructure, FiniteOrder, FunctionOnPoset, QuasiForm, SemivalError,
};
use crate::treecore::{enumerate_tn, PathLenSeq, TreeError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Errors from balance comparisons and poset construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImbalanceError {
    /// Balance only compares trees with the same number of leaves.
    LengthMismatch { left: usize, right: usize },
    Tree(TreeError),
    Dtree(DtreeError),
    Semival(SemivalError),
}

impl fmt::Display for ImbalanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImbalanceError::LengthMismatch { left, right } => {
                write!(f, "cannot compare balance of trees with {left} and {right} leaves")
            }
            ImbalanceError::Tree(e) => write!(f, "{e}"),
            ImbalanceError::Dtree(e) => write!(f, "{e}"),
            ImbalanceError::Semival(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ImbalanceError {}

impl From<TreeError> for ImbalanceError {
    fn from(e: TreeError) -> Self {
        ImbalanceError::Tree(e)
    }
}

impl From<DtreeError> for ImbalanceError {
    fn from(e: DtreeError) -> Self {
        ImbalanceError::Dtree(e)
    }
}

impl From<SemivalError> for ImbalanceError {
    fn from(e: SemivalError) -> Self {
        ImbalanceError::Semival(e)
    }
}

/// Is the first tree at least as balanced as the second — that is, is its
/// external path length no larger? Requires equal leaf counts.
pub fn more_balanced(a: &PathLenSeq, b: &PathLenSeq) -> Result<bool, ImbalanceError> {
    if a.len() != b.len() {
        return Err(ImbalanceError::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.epl() <= b.epl())
}

/// One equivalence class of the balance preorder: all sequences with a
/// given external path length, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EplClass {
    pub epl: u64,
    pub members: Vec<PathLenSeq>,
}

impl EplClass {
    /// Label used in quotient orders and metric structures.
    pub fn label(&self) -> String {
        format!("EPL={} ({} trees)", self.epl, self.members.len())
    }
}

/// All `n`-leaf sequences grouped by external path length, ascending — so
/// rank 0 is the most balanced class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalancePoset {
    pub n: usize,
    pub classes: Vec<EplClass>,
}

/// Groups the full enumeration of `n`-leaf sequences by external path
/// length.
pub fn build_balance_poset(n: usize) -> Result<BalancePoset, ImbalanceError> {
    let mut by_epl: BTreeMap<u64, Vec<PathLenSeq>> = BTreeMap::new();
    for seq in enumerate_tn(n)? {
        by_epl.entry(seq.epl()).or_default().push(seq);
    }
    let classes = by_epl
        .into_iter()
        .map(|(epl, members)| EplClass { epl, members })
        .collect();
    Ok(BalancePoset { n, classes })
}

impl BalancePoset {
    /// Total number of sequences across all classes.
    pub fn sequence_count(&self) -> usize {
        self.classes.iter().map(|c| c.members.len()).sum()
    }

    /// All sequences, most balanced class first, lexicographic within.
    pub fn sequences(&self) -> impl Iterator<Item = &PathLenSeq> {
        self.classes.iter().flat_map(|c| c.members.iter())
    }

    /// Index of the class containing `seq`, if any.
    pub fn class_of(&self, seq: &PathLenSeq) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(seq))
    }

    /// Pairs of distinct sequences related in both directions (equal
    /// external path length), each pair in lexicographic order.
    pub fn antisymmetry_witnesses(&self) -> Vec<(PathLenSeq, PathLenSeq)> {
        let mut out = Vec::new();
        for class in &self.classes {
            for (i, a) in class.members.iter().enumerate() {
                for b in &class.members[i + 1..] {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    /// The quotient of the balance preorder by equal external path length:
    /// a chain with one element per class, most balanced at the bottom.
    pub fn quotient_order(&self) -> FiniteOrder {
        let k = self.classes.len();
        let labels = self.classes.iter().map(EplClass::label).collect();
        let leq = (0..k).map(|i| (0..k).map(|j| i <= j).collect()).collect();
        let join = Some((0..k).map(|i| (0..k).map(|j| i.max(j)).collect()).collect());
        let meet = Some((0..k).map(|i| (0..k).map(|j| i.min(j)).collect()).collect());
        FiniteOrder::from_parts(labels, leq, join, meet)
    }

    /// Audits the balance relation on this carrier: totality and
    /// transitivity of the raw preorder, its antisymmetry failures, and
    /// the lattice laws of the quotient chain.
    pub fn verify_lattice(&self) -> Result<LatticeCheck, ImbalanceError> {
        // The raw relation is defined by comparing external path lengths,
        // so totality and transitivity are checked directly on sequences.
        let seqs: Vec<&PathLenSeq> = self.sequences().collect();
        let rel = |a: &PathLenSeq, b: &PathLenSeq| a.epl() <= b.epl();
        let mut total_and_transitive = true;
        'scan: for &a in &seqs {
            for &b in &seqs {
                if !rel(a, b) && !rel(b, a) {
                    total_and_transitive = false;
                    break 'scan;
                }
                for &c in &seqs {
                    if rel(a, b) && rel(b, c) && !rel(a, c) {
                        total_and_transitive = false;
                        break 'scan;
                    }
                }
            }
        }
        let antisymmetry_witnesses = self.antisymmetry_witnesses();
        let raw_is_partial_order = total_and_transitive && antisymmetry_witnesses.is_empty();
        let quotient_laws = verify_lattice_laws(&self.quotient_order())?;
        Ok(LatticeCheck { raw_is_partial_order, antisymmetry_witnesses, quotient_laws })
    }
}

/// Result of [`BalancePoset::verify_lattice`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeCheck {
    /// Whether the raw balance relation is a partial order on sequences
    /// (it always fails once two distinct sequences share an external path
    /// length — first at seven leaves).
    pub raw_is_partial_order: bool,
    /// The offending pairs, if any.
    pub antisymmetry_witnesses: Vec<(PathLenSeq, PathLenSeq)>,
    /// Lattice laws of the quotient chain.
    pub quotient_laws: CheckResult,
}

/// The quasi-metric and partial metric on the quotient chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMetrics {
    /// `q(C,D) = max(0, rank(D) - rank(C))`, built through the
    /// co-valuation construction rather than from the formula.
    pub quasi: DistanceStructure,
    /// Solved weights; equal to the ranks.
    #[serde(with = "crate::rat::rat_vec")]
    pub weight: Vec<Rat>,
    /// `p(C,D) = max(rank(C), rank(D))`.
    pub partial: DistanceStructure,
}

/// Builds the canonical distance structures on the quotient chain.
///
/// The function `f(C) = (k-1) - rank(C)` is decreasing and modular on a
/// chain, hence a join co-valuation; its literal quasi-metric is exactly
/// `max(0, rank(D) - rank(C))` and its solved weight is the rank itself.
/// Both facts are consequences here, not inputs: the construction goes
/// through the generic machinery and verifies each precondition.
pub fn chain_pmetric(poset: &BalancePoset) -> Result<ChainMetrics, ImbalanceError> {
    let order = poset.quotient_order();
    let k = order.len();
    let f = FunctionOnPoset::new(
        (0..k).map(|r| rat_int((k - 1 - r) as i64)).collect(),
    )?;
    let quasi = quasi_metric_from_covaluation(&order, &f, QuasiForm::Literal)?;
    let weight = solve_weight(&quasi)?;
    let partial = partial_metric_from(&quasi, &weight)?;
    Ok(ChainMetrics { quasi, weight, partial })
}

/// Side-by-side complexity comparison of two sorting algorithms at one
/// input size, phrased through the balance order of their decision trees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalanceReport {
    pub first: ComplexityReport,
    pub second: ComplexityReport,
    /// Is the first tree at least as balanced (epl no larger)?
    pub first_more_balanced: bool,
    /// Strictly more balanced?
    pub strictly: bool,
    /// The average-comparison ordering must coincide with the epl
    /// ordering (same denominator `n!`); recorded as a checked fact.
    pub averages_agree: bool,
}

/// Builds both decision trees and compares their balance.
pub fn balance_compare(
    first: SortAlgorithm,
    second: SortAlgorithm,
    n: usize,
    bound: Option<usize>,
) -> Result<BalanceReport, ImbalanceError> {
    let bound = bound.unwrap_or(DEFAULT_MAX_N);
    let a = complexity_report(&build_decision_tree_with_bound(first, n, bound)?);
    let b = complexity_report(&build_decision_tree_with_bound(second, n, bound)?);
    let first_more_balanced = more_balanced(&a.profile, &b.profile)?;
    let strictly = first_more_balanced && a.epl != b.epl;
    let averages_agree = (a.average <= b.average) == (a.epl <= b.epl);
    Ok(BalanceReport { first: a, second: b, first_more_balanced, strictly, averages_agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn more_balanced_basics() {
        let bushy: PathLenSeq = "⟨2,2,2,2⟩".parse().unwrap();
        let lanky: PathLenSeq = "⟨1,2,3,3⟩".parse().unwrap();
        assert!(more_balanced(&bushy, &lanky).unwrap(), "epl 8 vs 9");
        assert!(!more_balanced(&lanky, &bushy).unwrap());
        assert!(more_balanced(&bushy, &bushy).unwrap(), "reflexive");
        let three: PathLenSeq = "⟨1,2,2⟩".parse().unwrap();
        assert_eq!(
            more_balanced(&bushy, &three).unwrap_err(),
            ImbalanceError::LengthMismatch { left: 4, right: 3 }
        );
    }

    #[test]
    fn class_structure_small_n() {
        let epls = |n: usize| -> Vec<(u64, usize)> {
            build_balance_poset(n)
                .unwrap()
                .classes
                .iter()
                .map(|c| (c.epl, c.members.len()))
                .collect()
        };
        assert_eq!(epls(4), vec![(8, 1), (9, 1)]);
        assert_eq!(epls(5), vec![(12, 1), (13, 1), (14, 1)]);
        assert_eq!(epls(6), vec![(16, 1), (17, 1), (18, 1), (19, 1), (20, 1)]);
        // Seven leaves: nine sequences, eight classes, one collision.
        let p7 = build_balance_poset(7).unwrap();
        assert_eq!(p7.sequence_count(), 9);
        assert_eq!(p7.classes.len(), 8);
        let collision: Vec<&EplClass> =
            p7.classes.iter().filter(|c| c.members.len() > 1).collect();
        assert_eq!(collision.len(), 1);
        assert_eq!(collision[0].epl, 23);
        assert_eq!(
            collision[0].members.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            vec!["⟨1,3,3,4,4,4,4⟩", "⟨2,2,2,3,4,5,5⟩"]
        );
    }

    #[test]
    fn antisymmetry_fails_first_at_seven_leaves() {
        for n in 1..=6 {
            let check = build_balance_poset(n).unwrap().verify_lattice().unwrap();
            assert!(check.raw_is_partial_order, "n={n}");
            assert!(check.antisymmetry_witnesses.is_empty(), "n={n}");
            assert!(check.quotient_laws.is_pass(), "n={n}");
        }
        let check = build_balance_poset(7).unwrap().verify_lattice().unwrap();
        assert!(!check.raw_is_partial_order);
        assert_eq!(check.antisymmetry_witnesses.len(), 1);
        let (a, b) = &check.antisymmetry_witnesses[0];
        assert_eq!(a.to_string(), "⟨1,3,3,4,4,4,4⟩");
        assert_eq!(b.to_string(), "⟨2,2,2,3,4,5,5⟩");
        assert!(check.quotient_laws.is_pass(), "quotient is still a chain lattice");
    }

    #[test]
    fn quotient_laws_hold_up_to_ten_leaves() {
        for n in 1..=10 {
            let poset = build_balance_poset(n).unwrap();
            let check = poset.verify_lattice().unwrap();
            assert!(check.quotient_laws.is_pass(), "n={n}");
            // Classes are strictly ascending in epl.
            for w in poset.classes.windows(2) {
                assert!(w[0].epl < w[1].epl);
            }
        }
    }

    #[test]
    fn chain_metrics_match_the_rank_formulas() {
        let poset = build_balance_poset(6).unwrap();
        let k = poset.classes.len();
        assert_eq!(k, 5);
        let m = chain_pmetric(&poset).unwrap();
        assert!(m.quasi.verify_axioms().is_pass());
        assert!(m.partial.verify_axioms().is_pass());
        for i in 0..k {
            assert_eq!(m.weight[i], rat_int(i as i64), "weight is the rank");
            for j in 0..k {
                let (ri, rj) = (i as i64, j as i64);
                assert_eq!(m.quasi.dist(i, j), rat_int(0.max(rj - ri)));
                assert_eq!(m.partial.dist(i, j), rat_int(ri.max(rj)));
            }
        }
        // Distance from the most balanced class to the least balanced.
        assert_eq!(m.quasi.dist(0, k - 1), rat_int(4));
        assert_eq!(m.quasi.dist(k - 1, 0), rat_int(0));
    }

    #[test]
    fn merge_is_more_balanced_than_insertion() {
        // Equal at n = 3, strictly more balanced from n = 4 on.
        let r3 = balance_compare(SortAlgorithm::Merge, SortAlgorithm::Insertion, 3, None).unwrap();
        assert!(r3.first_more_balanced && !r3.strictly);
        assert_eq!(r3.first.average, rat(8, 3));

        for n in 4..=7 {
            let r = balance_compare(SortAlgorithm::Merge, SortAlgorithm::Insertion, n, None)
                .unwrap();
            assert!(r.first_more_balanced && r.strictly, "n={n}");
            assert!(r.averages_agree);
            let rev =
                balance_compare(SortAlgorithm::Insertion, SortAlgorithm::Merge, n, None).unwrap();
            assert!(!rev.first_more_balanced, "n={n}");
        }
    }

    #[test]
    fn report_serde_round_trip() {
        let poset = build_balance_poset(7).unwrap();
        let check = poset.verify_lattice().unwrap();
        for json in [
            serde_json::to_string(&poset).unwrap(),
            serde_json::to_string(&check).unwrap(),
        ] {
            assert!(!json.is_empty());
        }
        let back: BalancePoset =
            serde_json::from_str(&serde_json::to_string(&poset).unwrap()).unwrap();
        assert_eq!(back, poset);
        let m = chain_pmetric(&poset).unwrap();
        let back: ChainMetrics = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        let r = balance_compare(SortAlgorithm::Merge, SortAlgorithm::Insertion, 4, None).unwrap();
        let back: BalanceReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
