//! The level function of a decision tree is a join co-valuation for the
//! lowest-common-ancestor join, which makes d(x,y) = l(y) − l(x∨y) a
//! weightable quasi-metric with the level itself as the weight — and
//! p(x,y) = l(x) + l(y) − l(x∨y) the induced partial metric.
//!
//! Self-distance p(x,x) = l(x) is the *remaining* work at node x: leaves
//! of a decision tree sit at depth "comparisons used", so the partial
//! metric prices partial progress of the computation.
//!
//! Run with: `cargo run --example complexity_pmetric`

use qdt::dtree::{build_decision_tree, check_level_covaluation, complexity_pmetric, ScanMode, SortAlgorithm};
use qdt::rat::format_rat;

fn main() {
    let dt = build_decision_tree(SortAlgorithm::Merge, 3).expect("in range");
    let tree = dt.tree();

    // First the hypothesis behind the construction, checked exhaustively:
    // l(x∨z) >= l(x∨y) + l(y∨z) − l(y) over all node triples.
    let law = check_level_covaluation(tree, ScanMode::Exhaustive);
    println!("level co-valuation law on the merge-sort tree for 3 items: {law}");

    let p = complexity_pmetric(&dt).expect("the level law holds, so every step verifies");
    println!("partial-metric axioms: {}", p.verify_axioms());

    // Distances between the leaves: p(leaf_i, leaf_j) counts comparisons
    // spent on the shared prefix plus both completions; p(x,x) is the
    // leaf's own comparison count.
    let leaves = tree.leaves();
    println!("\np on the {} leaves (rows/cols in leaf order):", leaves.len());
    print!("      ");
    for y in &leaves {
        print!("{:>6}", y.to_string());
    }
    println!();
    for &x in &leaves {
        print!("{:>6}", x.to_string());
        for &y in &leaves {
            print!("{:>6}", format_rat(&p.dist(x.index(), y.index())));
        }
        println!();
    }

    println!("\nself-distances p(x,x) equal each leaf's comparison count:");
    for &x in &leaves {
        let perm = dt.leaf_permutation(x).expect("every leaf is labeled");
        println!(
            "  {}: input {:?} sorted in {} comparisons",
            x,
            perm,
            format_rat(&p.dist(x.index(), x.index())),
        );
    }
}
