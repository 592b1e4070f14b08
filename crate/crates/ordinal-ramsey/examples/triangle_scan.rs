//! Triangle-freeness of the distinguished clause graph on w^3*2, and
//! how a single weakened clause breaks it.
//!
//! Run with: cargo run --example triangle_scan

use std::time::Instant;

use ordinal_ramsey::graph::{full_pair_mutant, standard_graph};
use ordinal_ramsey::Window;

fn main() {
    let g = standard_graph();
    println!("graph universe: {}", g.delta);
    println!("clauses: {}", g.clauses.len());

    for bound in [1, 2, 3, 4] {
        let window = Window::new(g.delta.clone(), bound);
        let start = Instant::now();
        let triangles = g.scan_triangles(&window).unwrap();
        println!(
            "coefficients <= {bound}: {:>5} points, {} triangles  ({:?})",
            window.enumerate().len(),
            triangles.len(),
            start.elapsed()
        );
    }

    // Joining the (2,1)->(2,0) layer pair completely — a pair the
    // distinguished graph leaves without a clause — creates triangles
    // immediately.
    let mutant = full_pair_mutant();
    let window = Window::new(mutant.delta.clone(), 3);
    let triangles = mutant.scan_triangles(&window).unwrap();
    println!("\nmutant with a blanket (2,1)->(2,0) clause:");
    println!("  {} triangles at coefficient bound 3; first:", triangles.len());
    let t = &triangles[0];
    println!("  {{{}, {}, {}}}", t[0], t[1], t[2]);
}
