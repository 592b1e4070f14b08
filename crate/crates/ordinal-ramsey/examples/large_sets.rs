//! The filtered level sets F(root)^r_level and the largeness decision:
//! membership, least members, monotonicity in r, and exact accept /
//! reject verdicts for predicate-described subsets.
//!
//! Run with: cargo run --example large_sets

use ordinal_ramsey::fsets::{large_decide, FSet, SubsetSpec};
use ordinal_ramsey::Ordinal;

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).expect("valid ordinal expression")
}

fn main() {
    // F(w^3)^1_1: level-1 points below w^3 every step of whose cover
    // chain keeps final coefficient above 1.
    let fset = FSet::new(o("w^3"), 1, 1).unwrap();
    println!("least member of F(w^3)^1_1: {}", fset.min_member().unwrap());
    println!("members with coefficients <= 3:");
    for m in fset.members_upto(3).unwrap() {
        println!("  {m}");
    }

    // Raising r thins the set: F^{r+1} is contained in F^r.
    for r in 0..3 {
        let f = FSet::new(o("w^2"), r, 0).unwrap();
        println!(
            "F(w^2)^{r}_0 least member: {}",
            f.min_member().unwrap()
        );
    }

    // Largeness: a subset is large at (root, level) when it meets every
    // F(root)^r_level.  The whole level is large...
    let spec = SubsetSpec::predicate(&[]).unwrap();
    let d = large_decide(&o("w^2"), 0, &spec, 10).unwrap();
    println!(
        "\nfull level below w^2: large={} witness={}",
        d.is_large,
        d.counterexample.is_none()
    );

    // ... as is any eventually-true coefficient constraint ...
    let spec = SubsetSpec::predicate(&["l >= 1", "m >= 1"]).unwrap();
    let d = large_decide(&o("w^2"), 0, &spec, 10).unwrap();
    println!("{{l>=1, m>=1}} below w^2: large={}", d.is_large);

    // ... but a constraint pitting one coefficient against another
    // fails: every filter contains a point with m <= l.
    let spec = SubsetSpec::predicate(&["m > l"]).unwrap();
    let d = large_decide(&o("w^2"), 0, &spec, 10).unwrap();
    println!(
        "{{m > l}} below w^2: large={} counterexample={}",
        d.is_large,
        d.counterexample.unwrap()
    );
}
