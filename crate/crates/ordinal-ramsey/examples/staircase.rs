//! Building staircases: embedded point systems whose blocks climb
//! through prescribed ranks, drawing each pick from a large subset of
//! its level.  Shows the text serialisation and the validator.
//!
//! Run with: cargo run --example staircase

use ordinal_ramsey::fsets::{staircase, Staircase, StaircaseShape, SubsetSpec};

fn main() {
    // One level of rank 0, width 3: the first three naturals.
    let shape = StaircaseShape::new(vec![0], 3).unwrap();
    let full = [SubsetSpec::predicate(&[]).unwrap()];
    let sc = staircase(&shape, &full).unwrap();
    println!("shape (0), width 3: {:?}", texts(&sc));

    // Two levels: each rank-1 pick carries a rank-0 block below it.
    let shape = StaircaseShape::new(vec![0, 1], 2).unwrap();
    let full = [
        SubsetSpec::predicate(&[]).unwrap(),
        SubsetSpec::predicate(&[]).unwrap(),
    ];
    let sc = staircase(&shape, &full).unwrap();
    println!("shape (0,1), width 2: {:?}", texts(&sc));

    // Constraining the bottom level shifts its picks.
    let constrained = [
        SubsetSpec::predicate(&["m >= 5"]).unwrap(),
        SubsetSpec::predicate(&[]).unwrap(),
    ];
    let sc5 = staircase(&shape, &constrained).unwrap();
    println!("bottom set {{m >= 5}}:     {:?}", texts(&sc5));

    // Serialise, re-parse, validate.
    let text = sc5.to_text();
    println!("\nserialised:\n{text}");
    let back = Staircase::parse_text(&text).unwrap();
    println!("validate(constrained) = {}", back.validate(&constrained).unwrap());
    println!("validate(full)        = {}", back.validate(&full).unwrap());

    // Tampering is caught.
    let mut bad = back.clone();
    bad.points[0] = ordinal_ramsey::Ordinal::parse("4").unwrap();
    println!("tampered first point  = {}", bad.validate(&constrained).unwrap());

    // A subset that is not large is rejected with a counterexample.
    let narrow = [
        SubsetSpec::predicate(&["m < 2"]).unwrap(),
        SubsetSpec::predicate(&[]).unwrap(),
    ];
    match staircase(&shape, &narrow) {
        Err(e) => println!("\nbottom set {{m < 2}} rejected: {e}"),
        Ok(_) => unreachable!("a bounded subset of a level is never large"),
    }
}

fn texts(sc: &Staircase) -> Vec<String> {
    sc.points.iter().map(|p| p.to_string()).collect()
}
