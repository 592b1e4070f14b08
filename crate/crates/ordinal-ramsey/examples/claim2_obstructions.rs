//! The template obstruction suite: every way an increasing copy of the
//! doubled order type could sit inside w^3 + w^2*n is enumerated and
//! ruled out by one of three mechanisms.
//!
//! Run with: cargo run --example claim2_obstructions

use std::collections::BTreeMap;

use ordinal_ramsey::graph::{standard_graph, ClauseGraph};
use ordinal_ramsey::schema::claim2_suite;
use ordinal_ramsey::Ordinal;

fn main() {
    let g = standard_graph();
    let theta = Ordinal::parse("w^3+w^2*2").unwrap();
    let report = claim2_suite(&g, &theta, 6).unwrap();

    println!("universe {theta}: {} templates", report.templates.len());
    for line in report.lines() {
        println!("  {line}");
    }
    println!("all resolved: {}", report.all_resolved());

    let mut by_kind: BTreeMap<String, usize> = BTreeMap::new();
    for t in &report.templates {
        *by_kind.entry(t.outcome.to_string()).or_default() += 1;
    }
    println!("\noutcome counts:");
    for (kind, n) in by_kind {
        println!("  {kind}: {n}");
    }

    // Control: with no edges at all, the very first template (the top
    // fan rule) already fails.
    let empty = ClauseGraph::new(g.delta.clone(), false, Vec::new()).unwrap();
    let control = claim2_suite(&empty, &theta, 6).unwrap();
    println!(
        "\nempty graph control: first template -> {}",
        control.templates[0].outcome
    );
}
