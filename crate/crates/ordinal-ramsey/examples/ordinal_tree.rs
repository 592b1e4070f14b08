//! Tour of ordinal arithmetic below w^w and the anti-tree order:
//! parsing, canonical forms, comparison, ranks, covers, subfans, and
//! the layer decomposition of a bounded universe.
//!
//! Run with: cargo run --example ordinal_tree

use ordinal_ramsey::ordinal::LayerId;
use ordinal_ramsey::{Ordinal, Window};

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).expect("valid ordinal expression")
}

fn main() {
    // Parsing normalises: terms merge and order by exponent.
    for text in ["w^3+w^2*4", "w*2+w^2", "w^1*1+3", "0"] {
        println!("parse {text:>12} -> {}", o(text));
    }

    // Left addition absorbs lower terms.
    let sum = o("w^2*2+w*5").add(&o("w^3"));
    println!("\nw^2*2+w*5 + w^3 = {sum}");

    // Rank (least exponent) and final coefficient drive the anti-tree.
    for text in ["w^3+w^2*4", "w^2", "7"] {
        let a = o(text);
        println!(
            "{:>10}: rank={} n={}",
            text,
            a.cb_rank().unwrap(),
            a.n_of().unwrap()
        );
    }

    // The anti-tree: each point's unique path upward goes through its
    // covers; branches downward are the subfans.
    let a = o("w^2*3+w");
    println!("\ncover chain from {a}:");
    let mut cur = a.clone();
    for _ in 0..3 {
        let next = cur.cover().unwrap();
        println!("  {cur} is covered by {next}");
        cur = next;
    }

    println!("\nsubfan of w^3 (first 4 branches):");
    for child in o("w^3").subfan(4).unwrap() {
        println!("  {child}  (tree_leq w^3: {})", child.tree_leq(&o("w^3")).unwrap());
    }

    // Siblings in a fan are incomparable.
    let (s1, s2) = (o("w^3+w^2"), o("w^3+w^2*2"));
    println!(
        "\n{s1} vs {s2}: tree_leq={} / {} (siblings below {})",
        s1.tree_leq(&s2).unwrap(),
        s2.tree_leq(&s1).unwrap(),
        s1.cover().unwrap()
    );

    // A bounded universe decomposes into components and ranks.
    let delta = o("w^3*2");
    let window = Window::new(delta.clone(), 2);
    println!(
        "\nwindow below {delta} with coefficients <= 2: {} points",
        window.enumerate().len()
    );
    for i in 1..=delta.k_delta().unwrap() as usize {
        let sup = delta.component_sup(i).unwrap();
        for rank in 0..=sup.cb_rank().unwrap() {
            let members = window.layer_members(LayerId::new(i, rank)).unwrap();
            if !members.is_empty() {
                println!(
                    "  L({i},{rank}): {} members, least {}",
                    members.len(),
                    members[0]
                );
            }
        }
    }
}
