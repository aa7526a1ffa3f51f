//! The balance order on binary trees: smaller external path length means
//! more balanced. At seven leaves two distinct shapes tie, so the raw
//! relation is only a preorder; the quotient by equal EPL is a genuine
//! chain, and it carries a natural quasi-metric and partial metric.
//!
//! Run with: `cargo run --example balance_order`

use qdt::dtree::SortAlgorithm;
use qdt::imbalance::{balance_compare, build_balance_poset, chain_pmetric};
use qdt::rat::format_rat;

fn main() {
    let poset = build_balance_poset(7).expect("seven is in range");
    println!("seven-leaf shapes grouped by external path length:");
    for (rank, class) in poset.classes.iter().enumerate() {
        let members: Vec<String> = class.members.iter().map(|s| s.to_string()).collect();
        println!("  rank {rank}: {}  [{}]", class.label(), members.join(", "));
    }

    let lat = poset.verify_lattice().expect("carrier in range");
    println!("\nraw relation is a partial order: {}", lat.raw_is_partial_order);
    for (a, b) in &lat.antisymmetry_witnesses {
        println!("  tie: {a} and {b} (both epl {})", a.epl());
    }
    println!("quotient chain lattice laws: {}", lat.quotient_laws);

    // The chain carries q(C,D) = max(0, rank(D) − rank(C)) with the rank
    // as weight, built through the co-valuation machinery rather than by
    // decree.
    let metrics = chain_pmetric(&poset).expect("chain construction verifies");
    println!("\nquotient chain metrics (ranks as weights):");
    println!("  weights: {:?}", metrics.weight.iter().map(format_rat).collect::<Vec<_>>());
    println!("  q(most balanced -> least) = {}", format_rat(&metrics.quasi.dist(0, poset.classes.len() - 1)));
    println!("  q(least -> most balanced) = {}", format_rat(&metrics.quasi.dist(poset.classes.len() - 1, 0)));
    println!("  p(rank 2, rank 5)         = {}", format_rat(&metrics.partial.dist(2, 5)));
    println!("  quasi-metric axioms: {}", metrics.quasi.verify_axioms());
    println!("  partial-metric axioms: {}", metrics.partial.verify_axioms());

    // Merge sort's decision tree is the more balanced one at every size
    // where they differ — that is the balance-order reading of its better
    // average-case comparison count.
    println!("\nmerge vs insertion through the balance order:");
    for n in 2..=8 {
        let report =
            balance_compare(SortAlgorithm::Merge, SortAlgorithm::Insertion, n, None).expect("in range");
        println!(
            "  n={n}: epl {} vs {} — merge {} balanced (averages {} vs {})",
            report.first.epl,
            report.second.epl,
            if report.strictly { "strictly more" } else { "at least as" },
            format_rat(&report.first.average),
            format_rat(&report.second.average),
        );
    }
}
