//! Finite ordered sets, semivaluation laws, and the distance structures a
//! semivaluation induces.
//!
//! A *semivaluation* is a non-negative function on a semilattice satisfying
//! a three-point inequality; which inequality depends on whether the
//! operation is join or meet and on the inequality's direction:
//!
//! * join valuation:      `f(x∨z) <= f(x∨y) + f(y∨z) - f(y)`
//! * join co-valuation:   `f(x∨z) >= f(x∨y) + f(y∨z) - f(y)`
//! * meet valuation:      `f(x∧z) >= f(x∧y) + f(y∧z) - f(y)`
//! * meet co-valuation:   `f(x∧z) <= f(x∧y) + f(y∧z) - f(y)`
//!
//! On a lattice each law is equivalent to a monotonicity condition plus one
//! modular inequality; [`check_valuation_characterization`] and
//! [`check_covaluation_characterization`] verify that equivalence rather
//! than assume it, by running both routes and demanding the same verdict.
//!
//! From a join co-valuation one builds a quasi-metric `f(·) - f(· ∨ ·)`
//! ([`quasi_metric_from_covaluation`]); solving the weighting identity
//! `q(x,y) + w(x) = q(y,x) + w(y)` ([`solve_weight`]) then upgrades it to a
//! partial metric `p = q + w` ([`partial_metric_from`]). All three steps
//! check their preconditions and hand back exact counterexamples on
//! failure.

use crate::check::{CheckResult, Witness};
use crate::rat::{rat_int, rat_matrix, rat_vec_opt, Rat};
use crate::treecore::{BinTree, Orientation};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Errors from building a [`FiniteOrder`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderError {
    EmptyCarrier,
    /// Carrier too large for the brute-force table derivations.
    TooLarge { size: usize, max: usize },
    DuplicateLabel { label: String },
    /// `leq` is not square with one row per label.
    ShapeMismatch { labels: usize, rows: usize },
    NotReflexive { x: String },
    NotAntisymmetric { x: String, y: String },
    NotTransitive { x: String, y: String, z: String },
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::EmptyCarrier => write!(f, "an order needs at least one element"),
            OrderError::TooLarge { size, max } => {
                write!(f, "carrier of {size} elements exceeds the supported maximum {max}")
            }
            OrderError::DuplicateLabel { label } => write!(f, "duplicate label {label:?}"),
            OrderError::ShapeMismatch { labels, rows } => {
                write!(f, "relation shape mismatch: {labels} labels but {rows} rows")
            }
            OrderError::NotReflexive { x } => write!(f, "relation is not reflexive at {x}"),
            OrderError::NotAntisymmetric { x, y } => {
                write!(f, "relation is not antisymmetric: {x} <= {y} and {y} <= {x}")
            }
            OrderError::NotTransitive { x, y, z } => {
                write!(f, "relation is not transitive: {x} <= {y} <= {z} but not {x} <= {z}")
            }
        }
    }
}

impl std::error::Error for OrderError {}

/// Errors from semivaluation checks and metric constructions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemivalError {
    /// Function or weight vector length differs from the carrier size.
    CarrierMismatch { expected: usize, got: usize },
    /// The order lacks a join for some pair, but the operation needs all.
    MissingJoin,
    /// The order lacks a meet for some pair, but the operation needs all.
    MissingMeet,
    /// Functions on posets must be non-negative.
    NegativeValue { index: usize },
    /// A distance matrix is not square over its labels.
    RaggedMatrix,
    EmptyCarrier,
    /// The function is not a join co-valuation, so no quasi-metric arises.
    NotCovaluation { witness: Witness },
    /// No weight function satisfies the weighting identity.
    Unweightable { witness: Witness },
    /// The supplied weight does not satisfy the weighting identity.
    WeightMismatch { witness: Witness },
}

impl fmt::Display for SemivalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemivalError::CarrierMismatch { expected, got } => {
                write!(f, "expected {expected} values, got {got}")
            }
            SemivalError::MissingJoin => write!(f, "the order does not have all joins"),
            SemivalError::MissingMeet => write!(f, "the order does not have all meets"),
            SemivalError::NegativeValue { index } => {
                write!(f, "value at index {index} is negative")
            }
            SemivalError::RaggedMatrix => write!(f, "distance matrix is not square"),
            SemivalError::EmptyCarrier => write!(f, "carrier is empty"),
            SemivalError::NotCovaluation { witness } => {
                write!(f, "not a join co-valuation: {witness}")
            }
            SemivalError::Unweightable { witness } => {
                write!(f, "quasi-metric is not weightable: {witness}")
            }
            SemivalError::WeightMismatch { witness } => {
                write!(f, "weight fails the weighting identity: {witness}")
            }
        }
    }
}

impl std::error::Error for SemivalError {}

/// Largest carrier accepted by the generic (quartic-time) table derivation.
const MAX_GENERIC_CARRIER: usize = 512;

/// A finite partially ordered set with optional total join/meet tables.
///
/// The join table is present exactly when every pair has a least upper
/// bound, and likewise for meets; an order with both tables is a lattice.
/// Tables built by the named constructors are derived from the relation
/// (or, for trees, from ancestor structure), never assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteOrder {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Option<Vec<Vec<usize>>>,
    meet: Option<Vec<Vec<usize>>>,
}

impl FiniteOrder {
    /// Builds an order from an explicit relation matrix (`leq[i][j]` means
    /// element `i` is below element `j`), validating the poset axioms and
    /// deriving join/meet tables where they exist.
    ///
    /// The table derivation scans all pairs against all candidates, so this
    /// constructor is quartic in the carrier size and capped at
    /// 512 elements; the specialised constructors below avoid that cost.
    pub fn from_leq(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, OrderError> {
        let k = labels.len();
        if k == 0 {
            return Err(OrderError::EmptyCarrier);
        }
        if k > MAX_GENERIC_CARRIER {
            return Err(OrderError::TooLarge { size: k, max: MAX_GENERIC_CARRIER });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(OrderError::DuplicateLabel { label: l.clone() });
            }
        }
        if leq.len() != k || leq.iter().any(|row| row.len() != k) {
            return Err(OrderError::ShapeMismatch { labels: k, rows: leq.len() });
        }
        for i in 0..k {
            if !leq[i][i] {
                return Err(OrderError::NotReflexive { x: labels[i].clone() });
            }
        }
        for i in 0..k {
            for j in 0..k {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(OrderError::NotAntisymmetric {
                        x: labels[i].clone(),
                        y: labels[j].clone(),
                    });
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                if !leq[i][j] {
                    continue;
                }
                for l in 0..k {
                    if leq[j][l] && !leq[i][l] {
                        return Err(OrderError::NotTransitive {
                            x: labels[i].clone(),
                            y: labels[j].clone(),
                            z: labels[l].clone(),
                        });
                    }
                }
            }
        }
        let join = derive_bound_table(&leq, Bound::Least);
        let meet = derive_bound_table(&leq, Bound::Greatest);
        Ok(FiniteOrder { labels, leq, join, meet })
    }

    /// The total order `c0 < c1 < … < c{k-1}`.
    pub fn chain(k: usize) -> Result<Self, OrderError> {
        if k == 0 {
            return Err(OrderError::EmptyCarrier);
        }
        let labels = (0..k).map(|i| format!("c{i}")).collect();
        let leq = (0..k).map(|i| (0..k).map(|j| i <= j).collect()).collect();
        let join = Some((0..k).map(|i| (0..k).map(|j| i.max(j)).collect()).collect());
        let meet = Some((0..k).map(|i| (0..k).map(|j| i.min(j)).collect()).collect());
        Ok(FiniteOrder { labels, leq, join, meet })
    }

    /// `k` pairwise incomparable elements `a0 … a{k-1}`.
    pub fn antichain(k: usize) -> Result<Self, OrderError> {
        if k == 0 {
            return Err(OrderError::EmptyCarrier);
        }
        let labels = (0..k).map(|i| format!("a{i}")).collect();
        let leq: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| i == j).collect()).collect();
        let identity: Vec<Vec<usize>> = (0..k).map(|i| vec![i; k]).collect();
        let (join, meet) = if k == 1 {
            (Some(identity.clone()), Some(identity))
        } else {
            (None, None)
        };
        Ok(FiniteOrder { labels, leq, join, meet })
    }

    /// The lattice of subsets of `atoms` named letters, ordered by
    /// inclusion; element `i` is the subset with bitmask `i`.
    pub fn powerset(atoms: usize) -> Result<Self, OrderError> {
        const MAX_ATOMS: usize = 6;
        if atoms > MAX_ATOMS {
            return Err(OrderError::TooLarge { size: atoms, max: MAX_ATOMS });
        }
        let k = 1usize << atoms;
        let label = |mask: usize| -> String {
            let names: Vec<String> = (0..atoms)
                .filter(|a| mask >> a & 1 == 1)
                .map(|a| ((b'a' + a as u8) as char).to_string())
                .collect();
            format!("{{{}}}", names.join(","))
        };
        let labels = (0..k).map(label).collect();
        let leq = (0..k).map(|i| (0..k).map(|j| i & j == i).collect()).collect();
        let join = Some((0..k).map(|i| (0..k).map(|j| i | j).collect()).collect());
        let meet = Some((0..k).map(|i| (0..k).map(|j| i & j).collect()).collect());
        Ok(FiniteOrder { labels, leq, join, meet })
    }

    /// The divisors of `m` ordered by divisibility: join is lcm, meet is
    /// gcd. `m` must be positive.
    pub fn divisors(m: u64) -> Result<Self, OrderError> {
        if m == 0 {
            return Err(OrderError::EmptyCarrier);
        }
        let divs: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
        let k = divs.len();
        let idx_of = |v: u64| divs.iter().position(|&d| d == v).expect("closed under lcm/gcd");
        let labels = divs.iter().map(|d| d.to_string()).collect();
        let leq = (0..k)
            .map(|i| (0..k).map(|j| divs[j].is_multiple_of(divs[i])).collect())
            .collect();
        let join = Some(
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| idx_of(divs[i] / gcd(divs[i], divs[j]) * divs[j]))
                        .collect()
                })
                .collect(),
        );
        let meet = Some(
            (0..k)
                .map(|i| (0..k).map(|j| idx_of(gcd(divs[i], divs[j]))).collect())
                .collect(),
        );
        Ok(FiniteOrder { labels, leq, join, meet })
    }

    /// The ancestor order of a tree's nodes, labeled `n0, n1, …`.
    ///
    /// With [`Orientation::RootAsTop`], `x <= y` when `y` is an ancestor of
    /// `x`; every pair then joins at its lowest common ancestor, and meets
    /// exist for all pairs only when the tree is a single path. The mirror
    /// orientation swaps the two tables.
    pub fn from_tree(tree: &BinTree, orientation: Orientation) -> Self {
        let k = tree.len();
        let ids: Vec<_> = tree.node_ids().collect();
        let labels = ids.iter().map(|id| id.to_string()).collect();
        let ancestor: Vec<Vec<bool>> = ids
            .iter()
            .map(|&a| {
                ids.iter()
                    .map(|&x| tree.is_ancestor(a, x).expect("ids are from this tree"))
                    .collect()
            })
            .collect();
        // leq[x][y] per orientation.
        let leq: Vec<Vec<bool>> = match orientation {
            Orientation::RootAsTop => (0..k).map(|x| (0..k).map(|y| ancestor[y][x]).collect()).collect(),
            Orientation::RootAsBottom => {
                (0..k).map(|x| (0..k).map(|y| ancestor[x][y]).collect()).collect()
            }
        };
        let lca_table: Vec<Vec<usize>> = ids
            .iter()
            .map(|&x| {
                ids.iter()
                    .map(|&y| tree.lca(x, y).expect("ids are from this tree").index())
                    .collect()
            })
            .collect();
        // Along a single path every pair is comparable, so the bound on the
        // "far" side of the lca exists too and is simply the deeper node.
        let is_path = tree.node_ids().all(|id| {
            let has_two = tree.left(id).unwrap().is_some() && tree.right(id).unwrap().is_some();
            !has_two
        });
        let comparable_bound: Option<Vec<Vec<usize>>> = is_path.then(|| {
            (0..k)
                .map(|x| {
                    (0..k)
                        .map(|y| {
                            let (lx, ly) = (
                                tree.level(ids[x]).unwrap(),
                                tree.level(ids[y]).unwrap(),
                            );
                            if lx >= ly {
                                x
                            } else {
                                y
                            }
                        })
                        .collect()
                })
                .collect()
        });
        let (join, meet) = match orientation {
            Orientation::RootAsTop => (Some(lca_table), comparable_bound),
            Orientation::RootAsBottom => (comparable_bound, Some(lca_table)),
        };
        FiniteOrder { labels, leq, join, meet }
    }

    /// Trusted constructor for callers that already hold consistent tables
    /// (validated in debug builds and by `validate` in the test suite).
    pub(crate) fn from_parts(
        labels: Vec<String>,
        leq: Vec<Vec<bool>>,
        join: Option<Vec<Vec<usize>>>,
        meet: Option<Vec<Vec<usize>>>,
    ) -> Self {
        let order = FiniteOrder { labels, leq, join, meet };
        debug_assert_eq!(order.validate(), Ok(()));
        order
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructors reject empty carriers
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Is element `i` below element `j`?
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn has_all_joins(&self) -> bool {
        self.join.is_some()
    }

    pub fn has_all_meets(&self) -> bool {
        self.meet.is_some()
    }

    pub fn is_lattice(&self) -> bool {
        self.join.is_some() && self.meet.is_some()
    }

    /// Least upper bound of `i` and `j`, if the order has all joins.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        self.join.as_ref().map(|t| t[i][j])
    }

    /// Greatest lower bound of `i` and `j`, if the order has all meets.
    pub fn meet(&self, i: usize, j: usize) -> Option<usize> {
        self.meet.as_ref().map(|t| t[i][j])
    }

    /// Re-checks every stored invariant from scratch: poset axioms plus
    /// agreement of the join/meet tables with brute-force bounds. Intended
    /// for tests and debug assertions; quartic in the carrier size.
    pub fn validate(&self) -> Result<(), OrderError> {
        let rebuilt = FiniteOrder::from_leq(self.labels.clone(), self.leq.clone())?;
        let mismatch = |side: &str| OrderError::NotTransitive {
            // Table disagreements indicate internal corruption; reuse the
            // closest error shape with a synthetic marker label.
            x: format!("<{side} table disagrees with the relation>"),
            y: String::new(),
            z: String::new(),
        };
        if rebuilt.join != self.join {
            return Err(mismatch("join"));
        }
        if rebuilt.meet != self.meet {
            return Err(mismatch("meet"));
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Bound {
    Least,
    Greatest,
}

/// Brute-force least-upper/greatest-lower bound table; `None` if any pair
/// lacks one.
fn derive_bound_table(leq: &[Vec<bool>], which: Bound) -> Option<Vec<Vec<usize>>> {
    let k = leq.len();
    let below = |i: usize, j: usize| match which {
        Bound::Least => leq[i][j],
        Bound::Greatest => leq[j][i],
    };
    let mut table = vec![vec![0usize; k]; k];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let candidates: Vec<usize> =
                (0..k).filter(|&c| below(i, c) && below(j, c)).collect();
            let best = candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&u| below(c, u)))?;
            *cell = best;
        }
    }
    Some(table)
}

/// A non-negative rational function on the carrier of a [`FiniteOrder`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionOnPoset {
    values: Vec<Rat>,
}

impl FunctionOnPoset {
    pub fn new(values: Vec<Rat>) -> Result<Self, SemivalError> {
        if values.is_empty() {
            return Err(SemivalError::EmptyCarrier);
        }
        if let Some(index) = values.iter().position(|v| *v < rat_int(0)) {
            return Err(SemivalError::NegativeValue { index });
        }
        Ok(FunctionOnPoset { values })
    }

    /// The level function of a tree (indexed like the node ids, matching
    /// [`FiniteOrder::from_tree`] labels).
    pub fn levels(tree: &BinTree) -> Self {
        let values = tree
            .node_ids()
            .map(|id| rat_int(i64::from(tree.level(id).expect("own id"))))
            .collect();
        FunctionOnPoset { values }
    }

    pub fn constant(len: usize, c: Rat) -> Result<Self, SemivalError> {
        FunctionOnPoset::new(vec![c; len])
    }

    /// The same function shifted by a constant (the shift must keep every
    /// value non-negative).
    pub fn shifted(&self, c: Rat) -> Result<Self, SemivalError> {
        FunctionOnPoset::new(self.values.iter().map(|v| *v + c).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty carriers
    }

    pub fn get(&self, i: usize) -> Rat {
        self.values[i]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }
}

/// The four semivaluation laws.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemivalKind {
    JoinValuation,
    JoinCovaluation,
    MeetValuation,
    MeetCovaluation,
}

impl SemivalKind {
    pub const ALL: [SemivalKind; 4] = [
        SemivalKind::JoinValuation,
        SemivalKind::JoinCovaluation,
        SemivalKind::MeetValuation,
        SemivalKind::MeetCovaluation,
    ];

    fn law_text(self) -> &'static str {
        match self {
            SemivalKind::JoinValuation => "f(x∨z) <= f(x∨y) + f(y∨z) - f(y)",
            SemivalKind::JoinCovaluation => "f(x∨z) >= f(x∨y) + f(y∨z) - f(y)",
            SemivalKind::MeetValuation => "f(x∧z) >= f(x∧y) + f(y∧z) - f(y)",
            SemivalKind::MeetCovaluation => "f(x∧z) <= f(x∧y) + f(y∧z) - f(y)",
        }
    }
}

impl fmt::Display for SemivalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemivalKind::JoinValuation => write!(f, "join valuation"),
            SemivalKind::JoinCovaluation => write!(f, "join co-valuation"),
            SemivalKind::MeetValuation => write!(f, "meet valuation"),
            SemivalKind::MeetCovaluation => write!(f, "meet co-valuation"),
        }
    }
}

fn require_carrier(order: &FiniteOrder, f: &FunctionOnPoset) -> Result<(), SemivalError> {
    if order.len() != f.len() {
        return Err(SemivalError::CarrierMismatch { expected: order.len(), got: f.len() });
    }
    Ok(())
}

/// Checks one semivaluation law over every ordered triple, in ascending
/// index order, reporting the first violation.
pub fn check_semivaluation(
    order: &FiniteOrder,
    f: &FunctionOnPoset,
    kind: SemivalKind,
) -> Result<CheckResult, SemivalError> {
    require_carrier(order, f)?;
    let op: &dyn Fn(usize, usize) -> Option<usize> = match kind {
        SemivalKind::JoinValuation | SemivalKind::JoinCovaluation => &|i, j| order.join(i, j),
        SemivalKind::MeetValuation | SemivalKind::MeetCovaluation => &|i, j| order.meet(i, j),
    };
    let missing = match kind {
        SemivalKind::JoinValuation | SemivalKind::JoinCovaluation => SemivalError::MissingJoin,
        SemivalKind::MeetValuation | SemivalKind::MeetCovaluation => SemivalError::MissingMeet,
    };
    if op(0, 0).is_none() {
        return Err(missing);
    }
    let k = order.len();
    for x in 0..k {
        for y in 0..k {
            for z in 0..k {
                let xz = op(x, z).expect("total table");
                let xy = op(x, y).expect("total table");
                let yz = op(y, z).expect("total table");
                let lhs = f.get(xz);
                let rhs = f.get(xy) + f.get(yz) - f.get(y);
                let holds = match kind {
                    SemivalKind::JoinValuation | SemivalKind::MeetCovaluation => lhs <= rhs,
                    SemivalKind::JoinCovaluation | SemivalKind::MeetValuation => lhs >= rhs,
                };
                if !holds {
                    return Ok(CheckResult::fail(Witness::new(
                        [order.label(x), order.label(y), order.label(z)],
                        kind.law_text(),
                        lhs,
                        rhs,
                    )));
                }
            }
        }
    }
    Ok(CheckResult::pass())
}

/// `x <= y` implies `f(x) <= f(y)`, first violation in index order.
pub fn is_increasing(order: &FiniteOrder, f: &FunctionOnPoset) -> Result<CheckResult, SemivalError> {
    monotone(order, f, true)
}

/// `x <= y` implies `f(x) >= f(y)`.
pub fn is_decreasing(order: &FiniteOrder, f: &FunctionOnPoset) -> Result<CheckResult, SemivalError> {
    monotone(order, f, false)
}

fn monotone(
    order: &FiniteOrder,
    f: &FunctionOnPoset,
    increasing: bool,
) -> Result<CheckResult, SemivalError> {
    require_carrier(order, f)?;
    let k = order.len();
    for x in 0..k {
        for y in 0..k {
            if !order.leq(x, y) {
                continue;
            }
            let (ok, law) = if increasing {
                (f.get(x) <= f.get(y), "x <= y implies f(x) <= f(y)")
            } else {
                (f.get(x) >= f.get(y), "x <= y implies f(x) >= f(y)")
            };
            if !ok {
                return Ok(CheckResult::fail(Witness::new(
                    [order.label(x), order.label(y)],
                    law,
                    f.get(x),
                    f.get(y),
                )));
            }
        }
    }
    Ok(CheckResult::pass())
}

/// Direction of a modular inequality over all pairs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Modularity {
    /// `f(x∨z) + f(x∧z) <= f(x) + f(z)`
    Sub,
    /// `f(x∨z) + f(x∧z) >= f(x) + f(z)`
    Super,
    /// equality
    Exact,
}

/// Checks a modular inequality on a lattice, first violation in index
/// order.
pub fn check_modularity(
    order: &FiniteOrder,
    f: &FunctionOnPoset,
    direction: Modularity,
) -> Result<CheckResult, SemivalError> {
    require_carrier(order, f)?;
    if !order.has_all_joins() {
        return Err(SemivalError::MissingJoin);
    }
    if !order.has_all_meets() {
        return Err(SemivalError::MissingMeet);
    }
    let k = order.len();
    for x in 0..k {
        for z in 0..k {
            let j = order.join(x, z).expect("lattice");
            let m = order.meet(x, z).expect("lattice");
            let lhs = f.get(j) + f.get(m);
            let rhs = f.get(x) + f.get(z);
            let (ok, law) = match direction {
                Modularity::Sub => (lhs <= rhs, "f(x∨z) + f(x∧z) <= f(x) + f(z)"),
                Modularity::Super => (lhs >= rhs, "f(x∨z) + f(x∧z) >= f(x) + f(z)"),
                Modularity::Exact => (lhs == rhs, "f(x∨z) + f(x∧z) = f(x) + f(z)"),
            };
            if !ok {
                return Ok(CheckResult::fail(Witness::new(
                    [order.label(x), order.label(z)],
                    law,
                    lhs,
                    rhs,
                )));
            }
        }
    }
    Ok(CheckResult::pass())
}

/// Builds the meta-verdict "two check routes agree".
fn routes_agree(name: &str, direct: bool, indirect: bool) -> CheckResult {
    CheckResult::from_condition(direct == indirect, || {
        Witness::new(
            Vec::<String>::new(),
            format!("{name}: three-point law verdict must match monotone+modular verdict"),
            rat_int(i64::from(direct)),
            rat_int(i64::from(indirect)),
        )
    })
}

/// On a lattice, the join-valuation law must hold exactly when `f` is
/// increasing and submodular, and the meet-valuation law exactly when `f`
/// is increasing and supermodular. Both equivalences are checked by
/// running the two routes independently and comparing verdicts.
pub fn check_valuation_characterization(
    order: &FiniteOrder,
    f: &FunctionOnPoset,
) -> Result<CheckResult, SemivalError> {
    let inc = is_increasing(order, f)?.is_pass();
    let join_direct = check_semivaluation(order, f, SemivalKind::JoinValuation)?.is_pass();
    let join_indirect = inc && check_modularity(order, f, Modularity::Sub)?.is_pass();
    let meet_direct = check_semivaluation(order, f, SemivalKind::MeetValuation)?.is_pass();
    let meet_indirect = inc && check_modularity(order, f, Modularity::Super)?.is_pass();
    Ok(routes_agree("join valuation", join_direct, join_indirect)
        .and(routes_agree("meet valuation", meet_direct, meet_indirect)))
}

/// Mirror of [`check_valuation_characterization`] for co-valuations:
/// join co-valuation ⟺ decreasing + supermodular, meet co-valuation ⟺
/// decreasing + submodular.
pub fn check_covaluation_characterization(
    order: &FiniteOrder,
    f: &FunctionOnPoset,
) -> Result<CheckResult, SemivalError> {
    let dec = is_decreasing(order, f)?.is_pass();
    let join_direct = check_semivaluation(order, f, SemivalKind::JoinCovaluation)?.is_pass();
    let join_indirect = dec && check_modularity(order, f, Modularity::Super)?.is_pass();
    let meet_direct = check_semivaluation(order, f, SemivalKind::MeetCovaluation)?.is_pass();
    let meet_indirect = dec && check_modularity(order, f, Modularity::Sub)?.is_pass();
    Ok(routes_agree("join co-valuation", join_direct, join_indirect)
        .and(routes_agree("meet co-valuation", meet_direct, meet_indirect)))
}

/// A function is a valuation (both join and meet laws) exactly when it is
/// increasing and exactly modular — and a co-valuation exactly when it is
/// decreasing and exactly modular. Verified by running both routes.
pub fn check_valuation_decomposition(
    order: &FiniteOrder,
    f: &FunctionOnPoset,
) -> Result<CheckResult, SemivalError> {
    let both_val = check_semivaluation(order, f, SemivalKind::JoinValuation)?.is_pass()
        && check_semivaluation(order, f, SemivalKind::MeetValuation)?.is_pass();
    let val_indirect = is_increasing(order, f)?.is_pass()
        && check_modularity(order, f, Modularity::Exact)?.is_pass();
    let both_coval = check_semivaluation(order, f, SemivalKind::JoinCovaluation)?.is_pass()
        && check_semivaluation(order, f, SemivalKind::MeetCovaluation)?.is_pass();
    let coval_indirect = is_decreasing(order, f)?.is_pass()
        && check_modularity(order, f, Modularity::Exact)?.is_pass();
    Ok(routes_agree("valuation", both_val, val_indirect)
        .and(routes_agree("co-valuation", both_coval, coval_indirect)))
}

/// Which distance axioms a [`DistanceStructure`] claims.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceKind {
    QuasiMetric,
    PartialMetric,
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceKind::QuasiMetric => write!(f, "quasi-metric"),
            DistanceKind::PartialMetric => write!(f, "partial metric"),
        }
    }
}

/// A labeled distance matrix with a claimed axiom set and an optional
/// weight vector. Nothing is assumed: [`DistanceStructure::verify_axioms`]
/// re-checks the claim and returns the first counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceStructure {
    pub kind: DistanceKind,
    pub labels: Vec<String>,
    #[serde(with = "rat_matrix")]
    pub d: Vec<Vec<Rat>>,
    #[serde(with = "rat_vec_opt", default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<Rat>>,
}

impl DistanceStructure {
    pub fn new(
        kind: DistanceKind,
        labels: Vec<String>,
        d: Vec<Vec<Rat>>,
        weight: Option<Vec<Rat>>,
    ) -> Result<Self, SemivalError> {
        let k = labels.len();
        if k == 0 {
            return Err(SemivalError::EmptyCarrier);
        }
        if d.len() != k || d.iter().any(|row| row.len() != k) {
            return Err(SemivalError::RaggedMatrix);
        }
        if let Some(w) = &weight {
            if w.len() != k {
                return Err(SemivalError::CarrierMismatch { expected: k, got: w.len() });
            }
        }
        Ok(DistanceStructure { kind, labels, d, weight })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty carriers
    }

    pub fn dist(&self, i: usize, j: usize) -> Rat {
        self.d[i][j]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Verifies the axioms claimed by `kind`, plus non-negativity, in a
    /// fixed order so the first witness is deterministic.
    ///
    /// Quasi-metric: `d >= 0`; `d(x,x) = 0`; the triangle inequality; and
    /// separation (`d(x,y) = d(y,x) = 0` only for `x = y`).
    ///
    /// Partial metric: `p >= 0`; symmetry; small self-distances
    /// (`p(x,x) <= p(x,y)`); the sharp triangle inequality
    /// (`p(x,z) <= p(x,y) + p(y,z) - p(y,y)`); and separation last, so a
    /// structure failing only separation (e.g. the zero matrix on two
    /// points) is reported for exactly that axiom.
    pub fn verify_axioms(&self) -> CheckResult {
        let k = self.len();
        let lab = |i: usize| self.labels[i].clone();
        // Non-negativity first, shared by both kinds.
        for x in 0..k {
            for y in 0..k {
                if self.d[x][y] < rat_int(0) {
                    return CheckResult::fail(Witness::new(
                        [lab(x), lab(y)],
                        "d(x,y) >= 0",
                        self.d[x][y],
                        rat_int(0),
                    ));
                }
            }
        }
        match self.kind {
            DistanceKind::QuasiMetric => self.verify_quasi(),
            DistanceKind::PartialMetric => self.verify_partial(),
        }
    }

    fn verify_quasi(&self) -> CheckResult {
        let k = self.len();
        let lab = |i: usize| self.labels[i].clone();
        for x in 0..k {
            if self.d[x][x] != rat_int(0) {
                return CheckResult::fail(Witness::new(
                    [lab(x)],
                    "d(x,x) = 0",
                    self.d[x][x],
                    rat_int(0),
                ));
            }
        }
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    let lhs = self.d[x][z];
                    let rhs = self.d[x][y] + self.d[y][z];
                    if lhs > rhs {
                        return CheckResult::fail(Witness::new(
                            [lab(x), lab(y), lab(z)],
                            "d(x,z) <= d(x,y) + d(y,z)",
                            lhs,
                            rhs,
                        ));
                    }
                }
            }
        }
        for x in 0..k {
            for y in 0..k {
                if x != y && self.d[x][y] == rat_int(0) && self.d[y][x] == rat_int(0) {
                    return CheckResult::fail(Witness::new(
                        [lab(x), lab(y)],
                        "d(x,y) = d(y,x) = 0 only when x = y",
                        self.d[x][y],
                        self.d[y][x],
                    ));
                }
            }
        }
        CheckResult::pass()
    }

    fn verify_partial(&self) -> CheckResult {
        let k = self.len();
        let lab = |i: usize| self.labels[i].clone();
        for x in 0..k {
            for y in 0..k {
                if self.d[x][y] != self.d[y][x] {
                    return CheckResult::fail(Witness::new(
                        [lab(x), lab(y)],
                        "p(x,y) = p(y,x)",
                        self.d[x][y],
                        self.d[y][x],
                    ));
                }
            }
        }
        for x in 0..k {
            for y in 0..k {
                if self.d[x][x] > self.d[x][y] {
                    return CheckResult::fail(Witness::new(
                        [lab(x), lab(y)],
                        "p(x,x) <= p(x,y)",
                        self.d[x][x],
                        self.d[x][y],
                    ));
                }
            }
        }
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    let lhs = self.d[x][z];
                    let rhs = self.d[x][y] + self.d[y][z] - self.d[y][y];
                    if lhs > rhs {
                        return CheckResult::fail(Witness::new(
                            [lab(x), lab(y), lab(z)],
                            "p(x,z) <= p(x,y) + p(y,z) - p(y,y)",
                            lhs,
                            rhs,
                        ));
                    }
                }
            }
        }
        for x in 0..k {
            for y in 0..k {
                if x != y
                    && self.d[x][x] == self.d[x][y]
                    && self.d[x][y] == self.d[y][y]
                {
                    return CheckResult::fail(Witness::new(
                        [lab(x), lab(y)],
                        "p(x,x) = p(x,y) = p(y,y) only when x = y",
                        self.d[x][x],
                        self.d[y][y],
                    ));
                }
            }
        }
        CheckResult::pass()
    }
}

/// Which argument of `d(x,y) = f(·) - f(x∨y)` supplies the numerator.
///
/// The two forms are conjugates of each other (`literal(x,y) =
/// conjugate(y,x)`); both are quasi-metrics, and they weight to different
/// — but both valid — partial metrics.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuasiForm {
    /// `d(x,y) = f(x) - f(x∨y)`
    Literal,
    /// `d(x,y) = f(y) - f(x∨y)`
    Conjugate,
}

/// Builds the quasi-metric induced by a join co-valuation.
///
/// The co-valuation law is a precondition, not an assumption: it is checked
/// first and its failure is returned as [`SemivalError::NotCovaluation`].
/// (The law forces `f` to be decreasing, which is what makes every entry
/// non-negative.)
pub fn quasi_metric_from_covaluation(
    order: &FiniteOrder,
    f: &FunctionOnPoset,
    form: QuasiForm,
) -> Result<DistanceStructure, SemivalError> {
    require_carrier(order, f)?;
    if !order.has_all_joins() {
        return Err(SemivalError::MissingJoin);
    }
    match check_semivaluation(order, f, SemivalKind::JoinCovaluation)? {
        CheckResult::Pass => {}
        CheckResult::Fail { witness } => return Err(SemivalError::NotCovaluation { witness }),
    }
    let k = order.len();
    let d: Vec<Vec<Rat>> = (0..k)
        .map(|x| {
            (0..k)
                .map(|y| {
                    let j = order.join(x, y).expect("total join table");
                    match form {
                        QuasiForm::Literal => f.get(x) - f.get(j),
                        QuasiForm::Conjugate => f.get(y) - f.get(j),
                    }
                })
                .collect()
        })
        .collect();
    DistanceStructure::new(DistanceKind::QuasiMetric, order.labels().to_vec(), d, None)
}

/// Solves the weighting identity `q(x,y) + w(x) = q(y,x) + w(y)` for `w`,
/// normalized so the smallest weight is 0.
///
/// The candidate is pinned by the identity against element 0
/// (`w(y) = q(x0,y) - q(y,x0)` up to a shift) and then verified on every
/// pair; if any pair fails, the structure is not weightable and the failing
/// pair is the witness.
pub fn solve_weight(q: &DistanceStructure) -> Result<Vec<Rat>, SemivalError> {
    let k = q.len();
    let mut w: Vec<Rat> = (0..k).map(|y| q.dist(0, y) - q.dist(y, 0)).collect();
    let min = *w.iter().min().expect("non-empty carrier");
    for v in &mut w {
        *v -= min;
    }
    for x in 0..k {
        for y in 0..k {
            let lhs = q.dist(x, y) + w[x];
            let rhs = q.dist(y, x) + w[y];
            if lhs != rhs {
                return Err(SemivalError::Unweightable {
                    witness: Witness::new(
                        [q.label(x), q.label(y)],
                        "q(x,y) + w(x) = q(y,x) + w(y)",
                        lhs,
                        rhs,
                    ),
                });
            }
        }
    }
    Ok(w)
}

/// Builds the partial metric `p(x,y) = q(x,y) + w(x)` from a weighted
/// quasi-metric. The weighting identity is verified first — it is exactly
/// what makes `p` symmetric — and a failing pair aborts the construction.
pub fn partial_metric_from(
    q: &DistanceStructure,
    w: &[Rat],
) -> Result<DistanceStructure, SemivalError> {
    let k = q.len();
    if w.len() != k {
        return Err(SemivalError::CarrierMismatch { expected: k, got: w.len() });
    }
    for x in 0..k {
        for y in 0..k {
            let lhs = q.dist(x, y) + w[x];
            let rhs = q.dist(y, x) + w[y];
            if lhs != rhs {
                return Err(SemivalError::WeightMismatch {
                    witness: Witness::new(
                        [q.label(x), q.label(y)],
                        "q(x,y) + w(x) = q(y,x) + w(y)",
                        lhs,
                        rhs,
                    ),
                });
            }
        }
    }
    let d: Vec<Vec<Rat>> = (0..k)
        .map(|x| (0..k).map(|y| q.dist(x, y) + w[x]).collect())
        .collect();
    DistanceStructure::new(
        DistanceKind::PartialMetric,
        q.labels.clone(),
        d,
        Some(w.to_vec()),
    )
}

/// Verifies the lattice laws of an order's join/meet tables:
/// commutativity, associativity, idempotence, absorption, and consistency
/// with the relation (`x <= y` iff `x∨y = y` iff `x∧y = x`).
///
/// Witness values for element-valued laws are the element *indices* (as
/// rationals); the law text names the labels involved.
pub fn verify_lattice_laws(order: &FiniteOrder) -> Result<CheckResult, SemivalError> {
    if !order.has_all_joins() {
        return Err(SemivalError::MissingJoin);
    }
    if !order.has_all_meets() {
        return Err(SemivalError::MissingMeet);
    }
    let k = order.len();
    let join = |i: usize, j: usize| order.join(i, j).expect("lattice");
    let meet = |i: usize, j: usize| order.meet(i, j).expect("lattice");
    let idx = |i: usize| rat_int(i as i64);
    for x in 0..k {
        if join(x, x) != x || meet(x, x) != x {
            return Ok(CheckResult::fail(Witness::new(
                [order.label(x)],
                "x∨x = x and x∧x = x",
                idx(join(x, x)),
                idx(meet(x, x)),
            )));
        }
        for y in 0..k {
            if join(x, y) != join(y, x) {
                return Ok(CheckResult::fail(Witness::new(
                    [order.label(x), order.label(y)],
                    "x∨y = y∨x",
                    idx(join(x, y)),
                    idx(join(y, x)),
                )));
            }
            if meet(x, y) != meet(y, x) {
                return Ok(CheckResult::fail(Witness::new(
                    [order.label(x), order.label(y)],
                    "x∧y = y∧x",
                    idx(meet(x, y)),
                    idx(meet(y, x)),
                )));
            }
            if join(x, meet(x, y)) != x || meet(x, join(x, y)) != x {
                return Ok(CheckResult::fail(Witness::new(
                    [order.label(x), order.label(y)],
                    "absorption: x∨(x∧y) = x and x∧(x∨y) = x",
                    idx(join(x, meet(x, y))),
                    idx(meet(x, join(x, y))),
                )));
            }
            let consistent = (order.leq(x, y) == (join(x, y) == y))
                && (order.leq(x, y) == (meet(x, y) == x));
            if !consistent {
                return Ok(CheckResult::fail(Witness::new(
                    [order.label(x), order.label(y)],
                    "x <= y iff x∨y = y iff x∧y = x",
                    idx(join(x, y)),
                    idx(meet(x, y)),
                )));
            }
            for z in 0..k {
                if join(x, join(y, z)) != join(join(x, y), z) {
                    return Ok(CheckResult::fail(Witness::new(
                        [order.label(x), order.label(y), order.label(z)],
                        "x∨(y∨z) = (x∨y)∨z",
                        idx(join(x, join(y, z))),
                        idx(join(join(x, y), z)),
                    )));
                }
                if meet(x, meet(y, z)) != meet(meet(x, y), z) {
                    return Ok(CheckResult::fail(Witness::new(
                        [order.label(x), order.label(y), order.label(z)],
                        "x∧(y∧z) = (x∧y)∧z",
                        idx(meet(x, meet(y, z))),
                        idx(meet(meet(x, y), z)),
                    )));
                }
            }
        }
    }
    Ok(CheckResult::pass())
}

/// Convenience: the tree order, its level function, the conjugate-form
/// quasi-metric, the solved weight, and the resulting partial metric, in
/// one call. Fails if any construction step rejects its precondition.
pub fn level_metrics_on_tree(
    tree: &BinTree,
    form: QuasiForm,
) -> Result<(DistanceStructure, Vec<Rat>, DistanceStructure), SemivalError> {
    let order = FiniteOrder::from_tree(tree, Orientation::RootAsTop);
    let f = FunctionOnPoset::levels(tree);
    let q = quasi_metric_from_covaluation(&order, &f, form)?;
    let w = solve_weight(&q)?;
    let p = partial_metric_from(&q, &w)?;
    Ok((q, w, p))
}
