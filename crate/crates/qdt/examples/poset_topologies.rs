//! Topologies of finite orders, and what the chain-open down-sets of a
//! tree know about its shape.
//!
//! Every finite order has two Alexandrov topologies (up-sets and
//! down-sets); their join is always discrete on a finite poset — checked
//! here, not assumed. Reading a tree with the root at the bottom, the
//! down-sets are the initial subtrees, the maximal chain-open ones are
//! exactly the root-to-leaf paths, and their sizes recover the leaf
//! profile — while failing, for any tree with two or more leaves, to
//! form a base of the whole family.
//!
//! Run with: `cargo run --example poset_topologies`

use qdt::semival::FiniteOrder;
use qdt::topo::{alexandrov_topologies, down_sets, lawson_check, maximal_chain_open};
use qdt::treecore::{tree_from_seq, Orientation};

fn main() {
    // Start small: the 3-element chain.
    let chain = FiniteOrder::chain(3).expect("in range");
    let pair = alexandrov_topologies(&chain).expect("in range");
    println!("3-element chain c0 < c1 < c2:");
    println!("  up-set opens:   {:?}", mask_strings(pair.upper.opens()));
    println!("  down-set opens: {:?}", mask_strings(pair.lower.opens()));
    println!("  upper discrete: {}, lower discrete: {}", pair.upper.is_discrete(), pair.lower.is_discrete());
    println!("  join of the two is discrete: {}", lawson_check(&chain).expect("in range"));

    // Now a seven-leaf tree, root as bottom: 13 nodes, so the down-set
    // family is carved out of 2^13 candidate masks.
    let seq = "⟨1,3,3,4,4,4,4⟩".parse().expect("well-formed");
    let tree = tree_from_seq(&seq).expect("valid profile");
    let family = down_sets(&tree).expect("13 nodes is within the carrier cap");
    println!("\ntree {seq} with the root at the bottom:");
    println!("  nodes: {}", tree.len());
    println!("  down-sets (initial subtrees + empty): {}", family.sets().len());

    let chain_open: Vec<u64> =
        family.sets().iter().copied().filter(|&t| family.is_chain_open(t)).collect();
    println!("  chain-open members (root-to-node paths + empty): {}", chain_open.len());

    let report = maximal_chain_open(&tree).expect("in range");
    println!("  maximal chain-open sets: {} (one per leaf)", report.maximal.len());
    println!("  recovered profile: {}", report.recovered);
    println!("  they form a base of the family: {}", report.base_check);

    // The down-set family coincides with the lower Alexandrov topology of
    // the same order, and the Lawson join is discrete in both readings.
    let bottom = FiniteOrder::from_tree(&tree, Orientation::RootAsBottom);
    let pair = alexandrov_topologies(&bottom).expect("in range");
    println!("\n  down-sets equal the lower Alexandrov opens: {}", family.sets() == pair.lower.opens());
    println!("  Lawson join discrete (root as bottom): {}", lawson_check(&bottom).expect("in range"));
    let top = FiniteOrder::from_tree(&tree, Orientation::RootAsTop);
    println!("  Lawson join discrete (root as top): {}", lawson_check(&top).expect("in range"));
}

fn mask_strings(masks: &[u64]) -> Vec<String> {
    masks.iter().map(|m| format!("{m:#05b}")).collect()
}
