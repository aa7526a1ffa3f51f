//! Binary trees, leaf path-length sequences, and the Kraft criterion.
//!
//! The objects here are finite binary trees in which every node carries its
//! level (distance from the root). A tree's *path-length sequence* is the
//! sorted multiset of its leaf levels, written `⟨1,2,3,3⟩`. A sorted sequence
//! of non-negative integers arises from a full binary tree exactly when its
//! Kraft sum `Σ 2^(-d_i)` equals 1, and in that case the sequence determines
//! the tree up to sibling order. This module makes both directions
//! computable: extract the sequence from a tree, rebuild a canonical tree
//! from a valid sequence, and enumerate all sequences with a given number of
//! leaves.

use num_rational::Ratio;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// Deepest admissible leaf. Keeps every Kraft computation exact: with levels
/// capped at 62 and sequences capped at [`MAX_LEAVES`] entries, the sum
/// `Σ 2^(62-d_i)` stays below `2^82`, comfortably inside `i128`.
pub const MAX_DEPTH: u32 = 62;

/// Largest admissible sequence length (2^20 leaves).
pub const MAX_LEAVES: usize = 1 << 20;

/// Index of a node within one [`BinTree`]. Only meaningful for the tree that
/// issued it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    /// Position of this node in the tree's storage, usable as a dense index.
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Which child slot of an internal node.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

/// How a tree is read as an ordered set.
///
/// * `RootAsTop`: the root is the greatest element; `x <= y` means `y` lies
///   on the path from `x` to the root. Any two nodes then have a join —
///   their lowest common ancestor — so the tree is a join-semilattice.
/// * `RootAsBottom`: the mirror order; down-closed sets are exactly the
///   "initial subtrees" that contain the root.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    RootAsTop,
    RootAsBottom,
}

/// Errors from tree and sequence construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeError {
    /// Enumeration or construction asked for a tree with no leaves.
    ZeroLeaves,
    /// A path-length sequence must contain at least one entry.
    EmptySequence,
    /// A level exceeded [`MAX_DEPTH`].
    DepthTooDeep { depth: u32 },
    /// A sequence exceeded [`MAX_LEAVES`] entries.
    TooManyLeaves { len: usize },
    /// The Kraft sum differs from 1, so no full binary tree has this
    /// sequence. Carries the exact sum as an `"a/b"` string.
    InvalidKraft { sum: String },
    /// A node id from a different or older tree.
    UnknownNode { id: NodeId },
    /// Attempt to add a child where one already exists.
    SlotOccupied { parent: NodeId, side: Side },
    /// Unparseable sequence literal.
    ParseSeq { input: String, reason: String },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::ZeroLeaves => write!(f, "a binary tree needs at least one leaf"),
            TreeError::EmptySequence => write!(f, "path-length sequence is empty"),
            TreeError::DepthTooDeep { depth } => {
                write!(f, "level {depth} exceeds the supported maximum {MAX_DEPTH}")
            }
            TreeError::TooManyLeaves { len } => {
                write!(f, "{len} leaves exceed the supported maximum {MAX_LEAVES}")
            }
            TreeError::InvalidKraft { sum } => {
                write!(f, "Kraft sum is {sum}, not 1/1: no full binary tree has this leaf profile")
            }
            TreeError::UnknownNode { id } => write!(f, "node {id} does not belong to this tree"),
            TreeError::SlotOccupied { parent, side } => {
                write!(f, "node {parent} already has a {side} child")
            }
            TreeError::ParseSeq { input, reason } => {
                write!(f, "cannot parse {input:?} as a path-length sequence: {reason}")
            }
        }
    }
}

impl std::error::Error for TreeError {}

/// Sorted multiset of leaf levels of a binary tree, e.g. `⟨1,2,3,3⟩`.
///
/// Entries are kept in ascending order regardless of input order, so two
/// sequences compare equal exactly when the multisets agree. The derived
/// `Ord` is lexicographic on the sorted entries; enumeration output and all
/// reports list sequences in that order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PathLenSeq(Vec<u32>);

impl PathLenSeq {
    /// Builds a sequence from leaf levels in any order.
    pub fn new(mut depths: Vec<u32>) -> Result<Self, TreeError> {
        if depths.is_empty() {
            return Err(TreeError::EmptySequence);
        }
        if depths.len() > MAX_LEAVES {
            return Err(TreeError::TooManyLeaves { len: depths.len() });
        }
        if let Some(&d) = depths.iter().find(|&&d| d > MAX_DEPTH) {
            return Err(TreeError::DepthTooDeep { depth: d });
        }
        depths.sort_unstable();
        Ok(PathLenSeq(depths))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // an existing sequence always has at least one entry
    }

    /// Ascending leaf levels.
    pub fn depths(&self) -> &[u32] {
        &self.0
    }

    /// Exact Kraft sum `Σ 2^(-d_i)`.
    ///
    /// Returned over `i128` because wildly invalid inputs (many shallow
    /// leaves next to depth-62 ones) can need more than 63 bits even in
    /// lowest terms; every value representable under the constructor caps
    /// fits `i128` exactly.
    pub fn kraft_sum(&self) -> Ratio<i128> {
        let numer: i128 = self.0.iter().map(|&d| 1i128 << (MAX_DEPTH - d)).sum();
        Ratio::new(numer, 1i128 << MAX_DEPTH)
    }

    /// Does a full binary tree with this leaf profile exist?
    pub fn is_valid(&self) -> bool {
        self.kraft_sum() == Ratio::from_integer(1)
    }

    /// External path length: the sum of all leaf levels.
    pub fn epl(&self) -> u64 {
        self.0.iter().map(|&d| u64::from(d)).sum()
    }
}

impl fmt::Display for PathLenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "⟩")
    }
}

impl FromStr for PathLenSeq {
    type Err = TreeError;

    /// Accepts `⟨1,2,3,3⟩`, ASCII `<1,2,3,3>`, and bare `1 2 3 3`;
    /// separators may be commas, whitespace, or both.
    fn from_str(s: &str) -> Result<Self, TreeError> {
        let parse_err = |reason: &str| TreeError::ParseSeq {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let mut body = s.trim();
        let had_open = {
            let stripped = body.strip_prefix('⟨').or_else(|| body.strip_prefix('<'));
            if let Some(rest) = stripped {
                body = rest;
                true
            } else {
                false
            }
        };
        let had_close = {
            let stripped = body.strip_suffix('⟩').or_else(|| body.strip_suffix('>'));
            if let Some(rest) = stripped {
                body = rest;
                true
            } else {
                false
            }
        };
        if had_open != had_close {
            return Err(parse_err("unbalanced angle brackets"));
        }
        let mut depths = Vec::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let d: u32 = tok
                .parse()
                .map_err(|_| parse_err(&format!("{tok:?} is not a non-negative integer")))?;
            depths.push(d);
        }
        if depths.is_empty() {
            return Err(parse_err("no entries"));
        }
        PathLenSeq::new(depths)
    }
}

impl Serialize for PathLenSeq {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PathLenSeq {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let depths = Vec::<u32>::deserialize(de)?;
        PathLenSeq::new(depths).map_err(de::Error::custom)
    }
}

/// Growable rooted binary tree; every node tracks its level.
///
/// A tree starts as a single root (level 0) and only ever gains nodes, so
/// ids stay valid for the lifetime of the tree and the parent/child/level
/// tables are consistent by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinTree {
    parents: Vec<Option<NodeId>>,
    lefts: Vec<Option<NodeId>>,
    rights: Vec<Option<NodeId>>,
    levels: Vec<u32>,
}

impl BinTree {
    /// A tree consisting of a single root node.
    pub fn new() -> Self {
        BinTree {
            parents: vec![None],
            lefts: vec![None],
            rights: vec![None],
            levels: vec![0],
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // there is always at least the root
    }

    /// All node ids, in creation order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len()).map(NodeId)
    }

    fn check_id(&self, id: NodeId) -> Result<usize, TreeError> {
        if id.0 < self.len() {
            Ok(id.0)
        } else {
            Err(TreeError::UnknownNode { id })
        }
    }

    pub fn level(&self, id: NodeId) -> Result<u32, TreeError> {
        Ok(self.levels[self.check_id(id)?])
    }

    pub fn parent(&self, id: NodeId) -> Result<Option<NodeId>, TreeError> {
        Ok(self.parents[self.check_id(id)?])
    }

    pub fn left(&self, id: NodeId) -> Result<Option<NodeId>, TreeError> {
        Ok(self.lefts[self.check_id(id)?])
    }

    pub fn right(&self, id: NodeId) -> Result<Option<NodeId>, TreeError> {
        Ok(self.rights[self.check_id(id)?])
    }

    pub fn is_leaf(&self, id: NodeId) -> Result<bool, TreeError> {
        let i = self.check_id(id)?;
        Ok(self.lefts[i].is_none() && self.rights[i].is_none())
    }

    fn add_child(&mut self, parent: NodeId, side: Side) -> Result<NodeId, TreeError> {
        let p = self.check_id(parent)?;
        let slot_filled = match side {
            Side::Left => self.lefts[p].is_some(),
            Side::Right => self.rights[p].is_some(),
        };
        if slot_filled {
            return Err(TreeError::SlotOccupied { parent, side });
        }
        let level = self.levels[p] + 1;
        if level > MAX_DEPTH {
            return Err(TreeError::DepthTooDeep { depth: level });
        }
        let id = NodeId(self.len());
        self.parents.push(Some(parent));
        self.lefts.push(None);
        self.rights.push(None);
        self.levels.push(level);
        match side {
            Side::Left => self.lefts[p] = Some(id),
            Side::Right => self.rights[p] = Some(id),
        }
        Ok(id)
    }

    /// Adds a left child to `parent`; the parent must not already have one.
    pub fn add_left(&mut self, parent: NodeId) -> Result<NodeId, TreeError> {
        self.add_child(parent, Side::Left)
    }

    /// Adds a right child to `parent`; the parent must not already have one.
    pub fn add_right(&mut self, parent: NodeId) -> Result<NodeId, TreeError> {
        self.add_child(parent, Side::Right)
    }

    /// Adds both children of `parent` at once, left id first.
    pub fn add_pair(&mut self, parent: NodeId) -> Result<(NodeId, NodeId), TreeError> {
        let l = self.add_left(parent)?;
        let r = self.add_right(parent)?;
        Ok((l, r))
    }

    /// Leaves in id (creation) order.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.node_ids()
            .filter(|&id| self.lefts[id.0].is_none() && self.rights[id.0].is_none())
            .collect()
    }

    /// Does every node have zero or two children?
    pub fn is_full(&self) -> bool {
        self.single_child_count() == 0
    }

    /// Number of nodes with exactly one child.
    pub fn single_child_count(&self) -> usize {
        self.node_ids()
            .filter(|&id| self.lefts[id.0].is_some() != self.rights[id.0].is_some())
            .count()
    }

    /// Lowest common ancestor of `x` and `y`.
    pub fn lca(&self, x: NodeId, y: NodeId) -> Result<NodeId, TreeError> {
        self.check_id(x)?;
        self.check_id(y)?;
        let (mut a, mut b) = (x, y);
        while self.levels[a.0] > self.levels[b.0] {
            a = self.parents[a.0].expect("non-root node has a parent");
        }
        while self.levels[b.0] > self.levels[a.0] {
            b = self.parents[b.0].expect("non-root node has a parent");
        }
        while a != b {
            a = self.parents[a.0].expect("non-root node has a parent");
            b = self.parents[b.0].expect("non-root node has a parent");
        }
        Ok(a)
    }

    /// Is `a` an ancestor of `x` (including `a == x`)?
    pub fn is_ancestor(&self, a: NodeId, x: NodeId) -> Result<bool, TreeError> {
        self.check_id(a)?;
        let mut cur = x;
        self.check_id(cur)?;
        while self.levels[cur.0] > self.levels[a.0] {
            cur = self.parents[cur.0].expect("non-root node has a parent");
        }
        Ok(cur == a)
    }

    /// `x`, its parent, …, the root.
    pub fn ancestors_inclusive(&self, x: NodeId) -> Result<Vec<NodeId>, TreeError> {
        self.check_id(x)?;
        let mut out = vec![x];
        let mut cur = x;
        while let Some(p) = self.parents[cur.0] {
            out.push(p);
            cur = p;
        }
        Ok(out)
    }

    /// The sorted multiset of leaf levels.
    pub fn path_len_seq(&self) -> PathLenSeq {
        let depths = self
            .leaves()
            .iter()
            .map(|&id| self.levels[id.0])
            .collect::<Vec<_>>();
        PathLenSeq::new(depths).expect("a tree always has a representable leaf profile")
    }

    /// Graphviz rendering: internal nodes are points, leaves are labeled
    /// with their level. Output is deterministic (nodes and edges in id
    /// order, left edges before right).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n");
        for id in self.node_ids() {
            let line = if self.lefts[id.0].is_none() && self.rights[id.0].is_none() {
                format!("  {id} [label=\"{}\"];\n", self.levels[id.0])
            } else {
                format!("  {id} [shape=point];\n")
            };
            out.push_str(&line);
        }
        for id in self.node_ids() {
            for child in [self.lefts[id.0], self.rights[id.0]].into_iter().flatten() {
                out.push_str(&format!("  {id} -> {child};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl Default for BinTree {
    fn default() -> Self {
        BinTree::new()
    }
}

/// Builds the canonical full binary tree with the given leaf profile.
///
/// Fails with [`TreeError::InvalidKraft`] unless the Kraft sum is exactly 1.
/// The canonical shape puts deeper leaves leftmost: at each internal node
/// the remaining leaf levels are scanned deepest-first and the left subtree
/// takes the shortest such prefix of Kraft mass exactly one half. That
/// prefix always exists for a valid profile, so construction never
/// backtracks, and rebuilding from `tree.path_len_seq()` reproduces the
/// same structure whenever `tree` itself is canonical.
pub fn tree_from_seq(seq: &PathLenSeq) -> Result<BinTree, TreeError> {
    if !seq.is_valid() {
        let sum = seq.kraft_sum();
        return Err(TreeError::InvalidKraft {
            sum: format!("{}/{}", sum.numer(), sum.denom()),
        });
    }
    let mut depths = seq.depths().to_vec();
    depths.reverse(); // deepest first
    let mut tree = BinTree::new();
    build_canonical(&mut tree, NodeId(0), &depths)?;
    Ok(tree)
}

/// Recursive worker for [`tree_from_seq`]; `depths` are absolute leaf
/// levels, descending, whose Kraft mass equals `2^(-level(node))`.
fn build_canonical(tree: &mut BinTree, node: NodeId, depths: &[u32]) -> Result<(), TreeError> {
    let level = tree.level(node)?;
    if depths == [level] {
        return Ok(()); // this node is the leaf
    }
    // Split off the prefix of Kraft mass 2^-(level+1); entries are measured
    // against the fixed denominator 2^MAX_DEPTH so the scan is integral.
    let target: u128 = 1u128 << (MAX_DEPTH - level - 1);
    let mut acc: u128 = 0;
    let mut split = None;
    for (i, &d) in depths.iter().enumerate() {
        acc += 1u128 << (MAX_DEPTH - d);
        if acc == target {
            split = Some(i + 1);
            break;
        }
        if acc > target {
            break;
        }
    }
    let split = split.expect("descending Kraft prefix sums of a valid profile hit every dyadic");
    let (l, r) = tree.add_pair(node)?;
    build_canonical(tree, l, &depths[..split])?;
    build_canonical(tree, r, &depths[split..])
}

/// All path-length sequences of full binary trees with exactly `n` leaves,
/// in ascending lexicographic order.
///
/// Computed by the shape recursion — a tree with `n > 1` leaves is a root
/// over subtrees with `k` and `n-k` leaves — with results deduplicated per
/// leaf count, so the cost tracks the number of distinct *sequences*
/// (which still grows exponentially in `n`).
pub fn enumerate_tn(n: usize) -> Result<Vec<PathLenSeq>, TreeError> {
    if n == 0 {
        return Err(TreeError::ZeroLeaves);
    }
    if n > MAX_DEPTH as usize + 1 {
        // A full binary tree with n leaves has a leaf at level >= n-1 only
        // in the caterpillar case, but level n-1 must be representable.
        return Err(TreeError::TooManyLeaves { len: n });
    }
    // table[m] = sorted set of sequences for m leaves (1-indexed).
    let mut table: Vec<BTreeSet<Vec<u32>>> = vec![BTreeSet::new(); n + 1];
    table[1].insert(vec![0]);
    for m in 2..=n {
        let mut out = BTreeSet::new();
        for k in 1..=m / 2 {
            for left in &table[k] {
                for right in &table[m - k] {
                    let mut merged: Vec<u32> =
                        left.iter().chain(right.iter()).map(|&d| d + 1).collect();
                    merged.sort_unstable();
                    out.insert(merged);
                }
            }
        }
        table[m] = out;
    }
    Ok(table[n]
        .iter()
        .map(|v| PathLenSeq::new(v.clone()).expect("enumerated profiles respect the caps"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The running seven-leaf example: root → leaf at level 1 on one side,
    /// and a three-level spine on the other with leaves at ⟨3,3,4,4,4,4⟩.
    pub(crate) fn seven_leaf_tree() -> BinTree {
        tree_from_seq(&"⟨1,3,3,4,4,4,4⟩".parse().unwrap()).unwrap()
    }

    #[test]
    fn kraft_sums() {
        let k = |s: &str| s.parse::<PathLenSeq>().unwrap().kraft_sum();
        assert_eq!(k("⟨0⟩"), Ratio::from_integer(1));
        assert_eq!(k("⟨1,3,3,4,4,4,4⟩"), Ratio::from_integer(1));
        assert_eq!(k("⟨1,1,1⟩"), Ratio::new(3, 2));
        assert_eq!(k("⟨2,2⟩"), Ratio::new(1, 2));
        assert!(!"⟨1,1,1⟩".parse::<PathLenSeq>().unwrap().is_valid());
    }

    #[test]
    fn kraft_sum_is_exact_in_nasty_ranges() {
        // 2 + 2^-62 in lowest terms does not fit a 64-bit numerator; the
        // i128 representation keeps it exact.
        let s = PathLenSeq::new(vec![1, 1, 1, 1, 62]).unwrap();
        let sum = s.kraft_sum();
        assert_eq!(*sum.numer(), (1i128 << 63) + 1);
        assert_eq!(*sum.denom(), 1i128 << 62);
    }

    #[test]
    fn seq_parsing_accepts_the_documented_spellings() {
        let want = PathLenSeq::new(vec![1, 2, 3, 3]).unwrap();
        for s in ["⟨1,2,3,3⟩", "<1,2,3,3>", "1 2 3 3", "⟨1, 2, 3, 3⟩", "  3,3,2,1 "] {
            assert_eq!(s.parse::<PathLenSeq>().unwrap(), want, "input {s:?}");
        }
    }

    #[test]
    fn seq_parsing_rejects_malformed_input() {
        for s in ["", "⟨⟩", "⟨1,2", "1,x", "⟨-1⟩", "⟨1.5⟩"] {
            assert!(s.parse::<PathLenSeq>().is_err(), "input {s:?}");
        }
    }

    #[test]
    fn seq_display_round_trips() {
        let s = PathLenSeq::new(vec![4, 1, 3, 4, 3, 4, 4]).unwrap();
        assert_eq!(s.to_string(), "⟨1,3,3,4,4,4,4⟩");
        assert_eq!(s.to_string().parse::<PathLenSeq>().unwrap(), s);
    }

    #[test]
    fn seq_json_is_a_bare_array() {
        let s = PathLenSeq::new(vec![2, 1, 3, 3]).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,2,3,3]");
        let back: PathLenSeq = serde_json::from_str("[3,3,2,1]").unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn single_node_tree() {
        let t = BinTree::new();
        assert_eq!(t.len(), 1);
        assert!(t.is_leaf(t.root()).unwrap());
        assert_eq!(t.path_len_seq().to_string(), "⟨0⟩");
        assert_eq!(t.lca(t.root(), t.root()).unwrap(), t.root());
    }

    #[test]
    fn growth_errors() {
        let mut t = BinTree::new();
        let root = t.root();
        t.add_left(root).unwrap();
        assert_eq!(
            t.add_left(root).unwrap_err(),
            TreeError::SlotOccupied { parent: root, side: Side::Left }
        );
        assert_eq!(
            t.level(NodeId(99)).unwrap_err(),
            TreeError::UnknownNode { id: NodeId(99) }
        );
    }

    #[test]
    fn seven_leaf_example_structure() {
        let t = seven_leaf_tree();
        assert_eq!(t.len(), 13); // 7 leaves + 6 internal nodes
        assert!(t.is_full());
        assert_eq!(t.single_child_count(), 0);
        assert_eq!(t.path_len_seq().to_string(), "⟨1,3,3,4,4,4,4⟩");
        let leaves = t.leaves();
        assert_eq!(leaves.len(), 7);

        // Deeper leaves sit leftmost: leaf levels in id order are produced
        // left subtree first, so the level-4 leaves come before the level-1.
        let mut levels: Vec<u32> = leaves.iter().map(|&l| t.level(l).unwrap()).collect();
        levels.sort_unstable();
        assert_eq!(levels, vec![1, 3, 3, 4, 4, 4, 4]);
    }

    #[test]
    fn lca_basics_on_the_seven_leaf_example() {
        let t = seven_leaf_tree();
        let leaves = t.leaves();
        let by_level = |lvl: u32| -> Vec<NodeId> {
            leaves
                .iter()
                .copied()
                .filter(|&l| t.level(l).unwrap() == lvl)
                .collect()
        };
        let deep = by_level(4);
        let shallow = by_level(1)[0];

        // Two level-4 siblings meet at their level-3 parent.
        let sibs = (deep[0], deep[1]);
        if t.parent(sibs.0).unwrap() == t.parent(sibs.1).unwrap() {
            let m = t.lca(sibs.0, sibs.1).unwrap();
            assert_eq!(t.level(m).unwrap(), 3);
        }
        // Any deep leaf and the level-1 leaf meet at the root.
        assert_eq!(t.lca(deep[0], shallow).unwrap(), t.root());
        // lca is idempotent and absorbs ancestors.
        assert_eq!(t.lca(deep[0], deep[0]).unwrap(), deep[0]);
        let p = t.parent(deep[0]).unwrap().unwrap();
        assert_eq!(t.lca(deep[0], p).unwrap(), p);
        assert!(t.is_ancestor(t.root(), deep[0]).unwrap());
        assert!(!t.is_ancestor(deep[0], t.root()).unwrap());
    }

    #[test]
    fn lca_is_a_semilattice_join_on_small_trees() {
        // Commutativity, associativity, idempotence, and the level bound,
        // exhaustively on every full tree with up to 6 leaves.
        for n in 1..=6 {
            for seq in enumerate_tn(n).unwrap() {
                let t = tree_from_seq(&seq).unwrap();
                let ids: Vec<NodeId> = t.node_ids().collect();
                for &x in &ids {
                    assert_eq!(t.lca(x, x).unwrap(), x);
                    for &y in &ids {
                        let xy = t.lca(x, y).unwrap();
                        assert_eq!(xy, t.lca(y, x).unwrap());
                        assert!(t.level(xy).unwrap() <= t.level(x).unwrap().min(t.level(y).unwrap()));
                        for &z in &ids {
                            let a = t.lca(xy, z).unwrap();
                            let b = t.lca(x, t.lca(y, z).unwrap()).unwrap();
                            assert_eq!(a, b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tree_from_seq_rejects_invalid_kraft() {
        let seq = "⟨1,1,1⟩".parse::<PathLenSeq>().unwrap();
        assert_eq!(
            tree_from_seq(&seq).unwrap_err(),
            TreeError::InvalidKraft { sum: "3/2".to_string() }
        );
    }

    #[test]
    fn tree_from_seq_round_trips_and_is_deterministic() {
        for n in 1..=8 {
            for seq in enumerate_tn(n).unwrap() {
                let t1 = tree_from_seq(&seq).unwrap();
                assert!(t1.is_full());
                assert_eq!(t1.path_len_seq(), seq, "round trip for {seq}");
                let t2 = tree_from_seq(&seq).unwrap();
                assert_eq!(t1, t2, "rebuild must be structurally identical");
            }
        }
    }

    #[test]
    fn enumeration_matches_known_small_tables() {
        let as_strings = |n: usize| -> Vec<String> {
            enumerate_tn(n).unwrap().iter().map(|s| s.to_string()).collect()
        };
        assert_eq!(as_strings(1), vec!["⟨0⟩"]);
        assert_eq!(as_strings(2), vec!["⟨1,1⟩"]);
        assert_eq!(as_strings(3), vec!["⟨1,2,2⟩"]);
        assert_eq!(as_strings(4), vec!["⟨1,2,3,3⟩", "⟨2,2,2,2⟩"]);
        assert_eq!(
            as_strings(5),
            vec!["⟨1,2,3,4,4⟩", "⟨1,3,3,3,3⟩", "⟨2,2,2,3,3⟩"]
        );
        let counts: Vec<usize> = (1..=10).map(|n| enumerate_tn(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 5, 9, 16, 28, 50]);
    }

    #[test]
    fn enumeration_yields_only_valid_sorted_sequences() {
        for n in 1..=9 {
            let seqs = enumerate_tn(n).unwrap();
            for w in seqs.windows(2) {
                assert!(w[0] < w[1], "strictly ascending lexicographic order");
            }
            for seq in seqs {
                assert_eq!(seq.len(), n);
                assert!(seq.is_valid(), "{seq} must satisfy Kraft equality");
            }
        }
        assert_eq!(enumerate_tn(0).unwrap_err(), TreeError::ZeroLeaves);
    }

    #[test]
    fn dot_output_shape() {
        let t = tree_from_seq(&"⟨1,2,2⟩".parse().unwrap()).unwrap();
        let dot = t.to_dot();
        assert!(dot.starts_with("digraph tree {\n"));
        assert!(dot.ends_with("}\n"));
        assert!(dot.contains("[shape=point];"));
        assert!(dot.contains("[label=\"2\"];"));
        assert_eq!(dot.matches(" -> ").count(), t.len() - 1);
        assert_eq!(t.to_dot(), dot, "rendering is deterministic");
    }
}
