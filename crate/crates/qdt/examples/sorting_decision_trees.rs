//! Build the decision trees of insertion sort and merge sort and read
//! exact complexity figures off their shapes: the worst case is the
//! deepest leaf, the average is external path length over n!.
//!
//! Run with: `cargo run --example sorting_decision_trees`

use qdt::dtree::{build_decision_tree, complexity_report, SortAlgorithm};
use qdt::rat::format_rat;

fn main() {
    println!("exact comparison counts, straight from the decision trees\n");
    println!("{:>2}  {:<10} {:>6} {:>9} {:>8}  leaf profile", "n", "algorithm", "worst", "average", "epl");
    for n in 2..=6 {
        for alg in SortAlgorithm::ALL {
            let dt = build_decision_tree(alg, n).expect("n is within the default bound");
            let report = complexity_report(&dt);
            let profile = report.profile.to_string();
            let shown = if profile.chars().count() > 34 {
                format!("{}…", profile.chars().take(33).collect::<String>())
            } else {
                profile
            };
            println!(
                "{n:>2}  {:<10} {:>6} {:>9} {:>8}  {shown}",
                alg.to_string(),
                report.worst,
                format_rat(&report.average),
                report.epl,
            );
        }
    }

    // The trees themselves are ordinary binary trees; internal nodes ask
    // "a_i <= a_j?", leaves hold the input permutation that reaches them.
    let dt = build_decision_tree(SortAlgorithm::Insertion, 3).expect("in range");
    println!("\ninsertion sort on 3 items, as DOT (leaves are input orders):\n");
    println!("{}", dt.to_dot());

    // Every decision tree is full — no internal node with one child — so
    // its leaf profile satisfies the Kraft equality on the nose.
    let profile = dt.tree().path_len_seq();
    println!("profile {profile}, kraft sum = {}/{}", profile.kraft_sum().numer(), profile.kraft_sum().denom());
}
