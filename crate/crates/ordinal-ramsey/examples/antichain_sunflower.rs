//! Extracting pairwise-distinguished sets from an antichain of finite
//! sets, via repeated majority-vote sunflower refinement.
//!
//! Run with: cargo run --example antichain_sunflower

use ordinal_ramsey::antichain::{distinguish, sunflowerize, FinSetFamily};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn main() {
    // A small family sharing the kernel {1}.
    let family = FinSetFamily::parse_text(
        "# four sets through the common element 1\n\
         1 2\n\
         1 3\n\
         1 4\n\
         1 5\n",
    )
    .unwrap();
    family.ensure_antichain().unwrap();

    let sun = sunflowerize(&family, 3).unwrap();
    println!("sunflower pass over {{1,2}},{{1,3}},{{1,4}},{{1,5}}:");
    for (idx, core) in sun.selected.iter().zip(&sun.cores) {
        println!("  set #{idx} {:?}  core {:?}", family.sets()[*idx], core);
    }

    let dist = distinguish(&family, 3).unwrap();
    println!("distinguished witnesses:");
    for (idx, w) in dist.indices.iter().zip(&dist.witnesses) {
        println!("  set #{idx} is the only selected set containing {w}");
    }

    // A larger random family of equal-size sets: every set has the same
    // cardinality, so no containments can occur, and the majority-vote
    // refinement must dig the common kernel out on its own.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let kernel: BTreeSet<u64> = [3, 9].into_iter().collect();
    let mut sets = Vec::new();
    let mut seen = BTreeSet::new();
    while sets.len() < 150 {
        let mut s = kernel.clone();
        while s.len() < 6 {
            s.insert(rng.gen_range(100..10_000));
        }
        if seen.insert(s.clone()) {
            sets.push(s);
        }
    }
    sets.shuffle(&mut rng);
    let family = FinSetFamily::new(sets);
    family.ensure_antichain().unwrap();

    let dist = distinguish(&family, 10).unwrap();
    println!("\nrandom family: 150 six-element sets sharing kernel {{3, 9}}");
    println!(
        "  distinguished {} sets; witnesses: {:?}",
        dist.indices.len(),
        dist.witnesses
    );
    // Each witness is private to its own selected set.
    for (pos, (idx, w)) in dist.indices.iter().zip(&dist.witnesses).enumerate() {
        assert!(family.sets()[*idx].contains(w));
        for (other_pos, other_idx) in dist.indices.iter().enumerate() {
            if other_pos != pos {
                assert!(!family.sets()[*other_idx].contains(w));
            }
        }
    }
    println!("  privacy of every witness re-checked externally: ok");

    // Containment is detected up front.
    let nested = FinSetFamily::parse_text("1 2\n1 2 3\n").unwrap();
    println!("\nnested family rejected: {}", nested.ensure_antichain().unwrap_err());
}
