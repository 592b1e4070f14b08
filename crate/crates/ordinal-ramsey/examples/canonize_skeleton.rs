//! Canonizing a coloured truncated tree: inside a fan-width-W tree of
//! given rank, find a full-width-w sub-tree on which the colouring
//! depends only on ranks, and relabel it compactly.
//!
//! Run with: cargo run --example canonize_skeleton

use ordinal_ramsey::canonize::{
    canonize_truncated, seeded_random_colouring, CanonizeError, TruncatedTree,
};
use ordinal_ramsey::Ordinal;

fn main() {
    // A structured colouring first: colour by parity of the lower
    // point's final coefficient.  The canonizer keeps even positions.
    let tree = TruncatedTree::new(2, 8).unwrap();
    let parity = |below: &Ordinal, _above: &Ordinal| (below.n_of().unwrap() % 2) as u8;
    let skeleton = canonize_truncated(&tree, &parity, 2, 4, 0).unwrap();
    println!("parity colouring on rank-2, width-8 tree, keeping width 4:");
    println!("  kept nodes: {}", skeleton.kept.len());
    println!("  realised rank table:");
    for line in skeleton.table.to_text().lines() {
        println!("    {line}");
    }
    let w4 = Ordinal::parse("w*4").unwrap();
    println!(
        "  relabelling example: old w*4 -> new {}",
        skeleton.to_new[&w4]
    );
    println!("  verified: {}", skeleton.check(&parity).unwrap());

    // Random colourings: wide fans canonize reliably.
    let tree = TruncatedTree::new(2, 64).unwrap();
    let mut successes = 0;
    for seed in 0..10 {
        let colouring = seeded_random_colouring(&tree, 2, seed).unwrap();
        match canonize_truncated(&tree, &colouring, 2, 3, 0) {
            Ok(sk) => {
                assert!(sk.check(&colouring).unwrap());
                successes += 1;
            }
            Err(CanonizeError::WidthExhausted { .. }) => {}
            Err(e) => panic!("unexpected failure: {e}"),
        }
    }
    println!("\nrandom 2-colourings, rank 2, fan width 64, keep 3: {successes}/10 canonized");

    // Narrow fans can genuinely run out of width; the failure is
    // reported, not papered over.
    let narrow = TruncatedTree::new(2, 4).unwrap();
    let colouring = seeded_random_colouring(&narrow, 3, 1).unwrap();
    match canonize_truncated(&narrow, &colouring, 3, 3, 0) {
        Err(CanonizeError::WidthExhausted {
            keep_width,
            tables_tried,
        }) => println!(
            "3-colouring on fan width 4: width {keep_width} exhausted after {tables_tried} tables"
        ),
        Ok(_) => println!("3-colouring on fan width 4: canonized (lucky seed)"),
        Err(e) => panic!("unexpected failure: {e}"),
    }
}
