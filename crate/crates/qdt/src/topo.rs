//! Topologies of finite ordered sets and the chain-open down-sets of
//! trees.
//!
//! Carriers are small (at most [`MAX_TOPO_CARRIER`] points), so a set of
//! points is a `u64` bitmask and a topology is an explicit, sorted list of
//! open masks. Everything is enumerated and verified rather than assumed:
//! the Alexandrov (up-set and down-set) topologies of an order are found
//! by scanning all `2^k` subsets, the topology axioms are re-checked on
//! the result, and the discreteness of the join of the two topologies is
//! decided from the families' own minimal neighborhoods.
//!
//! For a tree read with the root at the bottom, the down-closed sets are
//! the initial subtrees. A member is *chain-open* when its down-closed
//! subsets form an inclusion chain; the maximal chain-open sets are
//! exactly the root-to-leaf paths, so their sizes recover the tree's
//! path-length sequence. Whether those maximal sets form a base of the
//! whole family is a checked question — the answer is no as soon as the
//! tree has two leaves — and is reported, never asserted.

use crate::check::{CheckResult, Witness};
use crate::rat::rat_int;
use crate::semival::FiniteOrder;
use crate::treecore::{BinTree, PathLenSeq, TreeError};
use serde::{de, Deserialize, Deserializer, Serialize};
use std::fmt;

/// Largest carrier for subset enumeration (`2^k` masks are scanned).
pub const MAX_TOPO_CARRIER: usize = 22;

/// Errors from topology construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopoError {
    CarrierTooLarge { size: usize, max: usize },
    EmptyCarrier,
    /// A set mask refers to points outside the carrier.
    InvalidMask { mask: u64 },
    Tree(TreeError),
}

impl fmt::Display for TopoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopoError::CarrierTooLarge { size, max } => {
                write!(f, "carrier of {size} points exceeds the enumeration maximum {max}")
            }
            TopoError::EmptyCarrier => write!(f, "carrier is empty"),
            TopoError::InvalidMask { mask } => {
                write!(f, "set {mask:#x} uses points outside the carrier")
            }
            TopoError::Tree(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TopoError {}

impl From<TreeError> for TopoError {
    fn from(e: TreeError) -> Self {
        TopoError::Tree(e)
    }
}

/// Serde adapter rendering masks as `"0x…"` hex strings.
mod hex_masks {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u64], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(|m| format!("{m:#x}")))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<u64>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| {
                let body = s
                    .strip_prefix("0x")
                    .ok_or_else(|| de::Error::custom(format!("expected 0x-prefixed mask, got {s:?}")))?;
                u64::from_str_radix(body, 16).map_err(de::Error::custom)
            })
            .collect()
    }
}

fn check_carrier(labels: &[String]) -> Result<(), TopoError> {
    if labels.is_empty() {
        return Err(TopoError::EmptyCarrier);
    }
    if labels.len() > MAX_TOPO_CARRIER {
        return Err(TopoError::CarrierTooLarge { size: labels.len(), max: MAX_TOPO_CARRIER });
    }
    Ok(())
}

fn full_mask(k: usize) -> u64 {
    (1u64 << k) - 1
}

/// Renders a mask as a set of labels, e.g. `{n0,n2}`.
fn format_set(labels: &[String], mask: u64) -> String {
    let names: Vec<&str> = (0..labels.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| labels[i].as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

/// A family of subsets of a labeled carrier, claimed to be a topology.
///
/// Masks are kept sorted ascending and deduplicated; bit `i` of a mask is
/// the point labeled `labels[i]`. [`Topology::verify`] re-checks the
/// axioms (whole space, empty set, unions, intersections) and returns the
/// first counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Topology {
    labels: Vec<String>,
    #[serde(with = "hex_masks")]
    opens: Vec<u64>,
}

impl<'de> Deserialize<'de> for Topology {
    fn deserialize<D: Deserializer<'de>>(deser: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            labels: Vec<String>,
            #[serde(with = "hex_masks")]
            opens: Vec<u64>,
        }
        let raw = Raw::deserialize(deser)?;
        Topology::new(raw.labels, raw.opens).map_err(de::Error::custom)
    }
}

impl Topology {
    pub fn new(labels: Vec<String>, mut opens: Vec<u64>) -> Result<Self, TopoError> {
        check_carrier(&labels)?;
        let full = full_mask(labels.len());
        if let Some(&bad) = opens.iter().find(|&&m| m & !full != 0) {
            return Err(TopoError::InvalidMask { mask: bad });
        }
        opens.sort_unstable();
        opens.dedup();
        Ok(Topology { labels, opens })
    }

    pub fn carrier_len(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Open sets, ascending as masks.
    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.opens.binary_search(&mask).is_ok()
    }

    /// Checks the finite topology axioms, quadratic in the family size.
    /// Witness values carry the offending masks (as integers).
    pub fn verify(&self) -> CheckResult {
        let full = full_mask(self.carrier_len());
        let named = |m: u64| format_set(&self.labels, m);
        if !self.contains(0) {
            return CheckResult::fail(Witness::new(
                [named(0)],
                "the empty set is open",
                rat_int(0),
                rat_int(0),
            ));
        }
        if !self.contains(full) {
            return CheckResult::fail(Witness::new(
                [named(full)],
                "the whole carrier is open",
                rat_int(full as i64),
                rat_int(full as i64),
            ));
        }
        for &a in &self.opens {
            for &b in &self.opens {
                for (combined, law) in
                    [(a | b, "unions of opens are open"), (a & b, "intersections of opens are open")]
                {
                    if !self.contains(combined) {
                        return CheckResult::fail(Witness::new(
                            [named(a), named(b), named(combined)],
                            law,
                            rat_int(a as i64),
                            rat_int(b as i64),
                        ));
                    }
                }
            }
        }
        CheckResult::pass()
    }

    /// Is every subset open? Under the axioms this is equivalent to every
    /// singleton being open, which is what is checked.
    pub fn is_discrete(&self) -> bool {
        (0..self.carrier_len()).all(|i| self.contains(1 << i))
    }

    /// Smallest open set containing point `i` — the intersection of all
    /// opens containing it (open in any finite topology).
    pub fn minimal_open(&self, i: usize) -> u64 {
        let bit = 1u64 << i;
        self.opens
            .iter()
            .filter(|&&o| o & bit != 0)
            .fold(full_mask(self.carrier_len()), |acc, &o| acc & o)
    }
}

/// The up-set and down-set (Alexandrov) topologies of a finite order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlexandrovPair {
    /// Opens are the up-closed sets.
    pub upper: Topology,
    /// Opens are the down-closed sets.
    pub lower: Topology,
}

/// Enumerates both Alexandrov topologies of an order by scanning all
/// `2^k` subsets for closure under the relation.
pub fn alexandrov_topologies(order: &FiniteOrder) -> Result<AlexandrovPair, TopoError> {
    let k = order.len();
    check_carrier(order.labels())?;
    // up_of[x] = mask of everything above x; down_of[x] below x.
    let mut up_of = vec![0u64; k];
    let mut down_of = vec![0u64; k];
    for (x, up) in up_of.iter_mut().enumerate() {
        for (y, down) in down_of.iter_mut().enumerate() {
            if order.leq(x, y) {
                *up |= 1 << y;
                *down |= 1 << x;
            }
        }
    }
    let closed_under = |wanted: &[u64]| -> Vec<u64> {
        (0..=full_mask(k))
            .filter(|&s| {
                (0..k).all(|x| s >> x & 1 == 0 || wanted[x] & !s == 0)
            })
            .collect()
    };
    let upper = Topology::new(order.labels().to_vec(), closed_under(&up_of))?;
    let lower = Topology::new(order.labels().to_vec(), closed_under(&down_of))?;
    Ok(AlexandrovPair { upper, lower })
}

/// Checks that the join of the two Alexandrov topologies is discrete.
///
/// In the join, a point's minimal neighborhood is the intersection of its
/// minimal neighborhoods in the two factors; the join is discrete exactly
/// when that intersection is the singleton for every point. Both minimal
/// neighborhoods are computed from the enumerated families themselves.
pub fn lawson_check(order: &FiniteOrder) -> Result<CheckResult, TopoError> {
    let pair = alexandrov_topologies(order)?;
    for i in 0..order.len() {
        let joint = pair.upper.minimal_open(i) & pair.lower.minimal_open(i);
        if joint != 1 << i {
            return Ok(CheckResult::fail(Witness::new(
                [order.label(i).to_string(), format_set(order.labels(), joint)],
                "minimal joint neighborhood of x is {x}",
                rat_int(joint as i64),
                rat_int(1 << i),
            )));
        }
    }
    Ok(CheckResult::pass())
}

/// All down-closed node sets of a tree read with the root at the bottom —
/// the initial subtrees, plus the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DownSetFamily {
    labels: Vec<String>,
    #[serde(with = "hex_masks")]
    sets: Vec<u64>,
}

/// Enumerates the down-closed sets of a tree directly: a mask is
/// down-closed exactly when it contains the parent of each of its nodes.
pub fn down_sets(tree: &BinTree) -> Result<DownSetFamily, TopoError> {
    let k = tree.len();
    if k > MAX_TOPO_CARRIER {
        return Err(TopoError::CarrierTooLarge { size: k, max: MAX_TOPO_CARRIER });
    }
    let labels: Vec<String> = tree.node_ids().map(|id| id.to_string()).collect();
    let parent_bit: Vec<u64> = tree
        .node_ids()
        .map(|id| match tree.parent(id).expect("own id") {
            Some(p) => 1u64 << p.index(),
            None => 0,
        })
        .collect();
    let sets: Vec<u64> = (0..=full_mask(k))
        .filter(|&s| (0..k).all(|x| s >> x & 1 == 0 || s & parent_bit[x] == parent_bit[x]))
        .collect();
    Ok(DownSetFamily { labels, sets })
}

impl DownSetFamily {
    pub fn carrier_len(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Members, ascending as masks (the empty set is always first).
    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    /// Is `t` a member whose down-closed subsets form an inclusion chain?
    ///
    /// The empty set qualifies vacuously. For nonempty members this holds
    /// exactly when `t` is a root-to-node path.
    pub fn is_chain_open(&self, t: u64) -> bool {
        if !self.contains(t) {
            return false;
        }
        let subs: Vec<u64> = self.sets.iter().copied().filter(|&s| s & !t == 0).collect();
        subs.iter()
            .all(|&a| subs.iter().all(|&b| a & !b == 0 || b & !a == 0))
    }
}

/// The maximal chain-open sets of a tree's down-set family, what they say
/// about the tree, and whether they form a base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainOpenReport {
    /// Maximal chain-open sets, ascending as masks.
    #[serde(with = "hex_masks")]
    pub maximal: Vec<u64>,
    /// Path-length sequence recovered as `|member| - 1` over the maximal
    /// sets; equals the tree's own sequence.
    pub recovered: PathLenSeq,
    /// Is every family member a union of maximal chain-open sets? This
    /// fails for every tree with at least two leaves (witness: a proper
    /// initial subtree that is not a union of full root-to-leaf paths);
    /// reported as data, not asserted.
    pub base_check: CheckResult,
}

/// Finds the maximal chain-open sets and audits them against the family.
pub fn maximal_chain_open(tree: &BinTree) -> Result<ChainOpenReport, TopoError> {
    let family = down_sets(tree)?;
    let chain_open: Vec<u64> = family
        .sets()
        .iter()
        .copied()
        .filter(|&t| family.is_chain_open(t))
        .collect();
    let maximal: Vec<u64> = chain_open
        .iter()
        .copied()
        .filter(|&t| !chain_open.iter().any(|&u| u != t && t & !u == 0))
        .collect();
    let depths: Vec<u32> = maximal.iter().map(|&m| m.count_ones() - 1).collect();
    let recovered = PathLenSeq::new(depths).map_err(TopoError::from)?;
    let mut base_check = CheckResult::pass();
    for &member in family.sets() {
        let union_of_contained: u64 = maximal
            .iter()
            .copied()
            .filter(|&m| m & !member == 0)
            .fold(0, |acc, m| acc | m);
        if union_of_contained != member {
            base_check = CheckResult::fail(Witness::new(
                [format_set(family.labels(), member)],
                "every down-set is a union of maximal chain-open sets",
                rat_int(member as i64),
                rat_int(union_of_contained as i64),
            ));
            break;
        }
    }
    Ok(ChainOpenReport { maximal, recovered, base_check })
}
