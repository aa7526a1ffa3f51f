//! Enumerate every full binary tree with up to eight leaves, as leaf
//! profiles, and show the Kraft equality doing its job as the validity
//! criterion.
//!
//! Run with: `cargo run --example enumerate_trees`

use qdt::treecore::{enumerate_tn, tree_from_seq, PathLenSeq};

fn main() {
    println!("full binary trees by leaf count (each line is one shape class)");
    for n in 1..=8 {
        let seqs = enumerate_tn(n).expect("n is in range");
        println!("\n{n} leaves: {} shapes", seqs.len());
        for seq in &seqs {
            let tree = tree_from_seq(seq).expect("enumerated profiles are valid");
            println!(
                "  {seq}  epl={:<3} kraft={}  nodes={}",
                seq.epl(),
                format_ratio(seq.kraft_sum()),
                tree.len(),
            );
        }
    }

    // The Kraft sum is exactly 1 for realizable profiles and something
    // else otherwise; ⟨1,1,1⟩ asks for three depth-1 leaves, one too many.
    let junk: PathLenSeq = "⟨1,1,1⟩".parse().expect("parses fine; validity is separate");
    println!("\n⟨1,1,1⟩ has kraft={}, so no full binary tree matches it:", format_ratio(junk.kraft_sum()));
    println!("  tree_from_seq says: {}", tree_from_seq(&junk).unwrap_err());
}

fn format_ratio(r: num_rational::Ratio<i128>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
