//! Exact combinatorics of ordinals below `w^w`: Cantor-normal-form
//! arithmetic, the anti-tree partial order, large-set filters, explicit
//! pair colourings with verified structure tables, an obstruction suite
//! showing a distinguished colouring admits no increasing copy of certain
//! order types, and finite antichain/sunflower utilities.
//!
//! Entry points:
//! - [`ordinal::Ordinal`]: parsing, arithmetic, the anti-tree order,
//!   fans, cut components, and window enumeration.
//! - [`fsets`]: membership filters `F(a)^r_n`, largeness decisions, and
//!   staircase embeddings.
//! - [`graph`]: the clause-defined pair colouring on `w^3*2`, edge
//!   justification, and triangle scanning.
//! - [`colouring`]: normality/goodness/canonicity checks and the
//!   descent/domination structure tables.
//! - [`canonize`]: width-truncated trees and the canonical-subtree
//!   extraction procedure.
//! - [`schema`]: affine families of ordinals, symbolic suprema, and the
//!   template obstruction suite.
//! - [`antichain`]: sunflower refinement and distinguishing elements for
//!   finite set families.

pub mod antichain;
pub mod canonize;
pub mod colouring;
pub mod fsets;
pub mod graph;
pub mod linear;
pub mod ordinal;
pub mod report;
pub mod schema;

pub use ordinal::{Ordinal, OrdinalError, Window};
