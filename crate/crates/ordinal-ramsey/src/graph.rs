//! The clause-defined graph (pair colouring) on an ordinal universe.
//!
//! Vertices are the ordinals strictly between 0 and a bound `delta`.
//! A pair `a < b` is an edge exactly when `b` covers `a` in the
//! anti-tree, or when the clause attached to the layer pair
//! `(layer(a), layer(b))` holds on the normal-form coefficients of the
//! two points (unprimed variables read `a`, primed ones read `b`).
//! The distinguished instance [`standard_graph`] on `w^3*2` is
//! triangle-free while every large stack of levels meets its edges —
//! the two facts the rest of the crate verifies.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::linear::{format_list, Constraint, ConstraintError};
use crate::ordinal::{LayerId, Ordinal, OrdinalError, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("layer {layer} does not exist under {delta}")]
    BadLayer { layer: LayerId, delta: String },
    #[error("duplicate clause for layer pair {src} -> {dst}")]
    DuplicateClause { src: LayerId, dst: LayerId },
}

/// One edge clause: applies to pairs `(lo, hi)` with `lo < hi`, `lo` in
/// layer `src` and `hi` in layer `dst`; the pair is an edge when every
/// constraint holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClause {
    pub src: LayerId,
    pub dst: LayerId,
    pub constraints: Vec<Constraint>,
}

impl fmt::Display for EdgeClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EDGE ({},{})->({},{}):",
            self.src.component, self.src.rank, self.dst.component, self.dst.rank
        )?;
        if !self.constraints.is_empty() {
            write!(f, " {}", format_list(&self.constraints))?;
        }
        Ok(())
    }
}

/// Why a pair is an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeJustification {
    /// The higher point covers the lower in the anti-tree.
    Cover,
    /// Clause at this index in `ClauseGraph::clauses` holds.
    Clause(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGraph {
    pub delta: Ordinal,
    pub cover_rule: bool,
    pub clauses: Vec<EdgeClause>,
}

impl ClauseGraph {
    pub fn new(
        delta: Ordinal,
        cover_rule: bool,
        clauses: Vec<EdgeClause>,
    ) -> Result<Self, GraphError> {
        let k = delta.k_delta()?;
        let mut seen = BTreeSet::new();
        for c in &clauses {
            for layer in [c.src, c.dst] {
                let in_range = layer.component >= 1
                    && layer.component as u64 <= k
                    && layer.rank <= delta.component_sup(layer.component)?.cb_rank()?;
                if !in_range {
                    return Err(GraphError::BadLayer {
                        layer,
                        delta: delta.to_string(),
                    });
                }
            }
            if !seen.insert((c.src, c.dst)) {
                return Err(GraphError::DuplicateClause {
                    src: c.src,
                    dst: c.dst,
                });
            }
        }
        Ok(ClauseGraph {
            delta,
            cover_rule,
            clauses,
        })
    }

    /// Layer of a point of this universe (which is open at the top:
    /// `delta` itself is not a vertex).
    pub fn layer_of(&self, a: &Ordinal) -> Result<LayerId, GraphError> {
        if *a >= self.delta {
            return Err(GraphError::Ordinal(OrdinalError::OutOfUniverse {
                point: a.to_string(),
                delta: self.delta.to_string(),
            }));
        }
        Ok(LayerId::new(self.delta.cnf_cut(a)?, a.cb_rank()?))
    }

    /// All justifications for the unordered pair — empty means non-edge.
    pub fn justify(&self, a: &Ordinal, b: &Ordinal) -> Result<Vec<EdgeJustification>, GraphError> {
        if a == b {
            return Ok(Vec::new());
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut out = Vec::new();
        if self.cover_rule && lo.cover()? == *hi {
            out.push(EdgeJustification::Cover);
        }
        let src = self.layer_of(lo)?;
        let dst = self.layer_of(hi)?;
        for (i, c) in self.clauses.iter().enumerate() {
            if c.src == src && c.dst == dst && c.constraints.iter().all(|k| k.eval_pair(lo, hi)) {
                out.push(EdgeJustification::Clause(i));
            }
        }
        Ok(out)
    }

    /// Edge relation on unordered pairs (false on the diagonal).
    pub fn edge(&self, a: &Ordinal, b: &Ordinal) -> Result<bool, GraphError> {
        if a == b {
            return Ok(false);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if self.cover_rule && lo.cover()? == *hi {
            return Ok(true);
        }
        let src = self.layer_of(lo)?;
        let dst = self.layer_of(hi)?;
        Ok(self.clauses.iter().any(|c| {
            c.src == src && c.dst == dst && c.constraints.iter().all(|k| k.eval_pair(lo, hi))
        }))
    }

    /// Pair colour: 1 for edges, 0 for non-edges.
    pub fn colour(&self, a: &Ordinal, b: &Ordinal) -> Result<u8, GraphError> {
        Ok(self.edge(a, b)? as u8)
    }

    /// All triangles among the window's points, each as an increasing
    /// triple.
    pub fn scan_triangles(&self, window: &Window) -> Result<Vec<[Ordinal; 3]>, GraphError> {
        let pts = window.enumerate();
        let n = pts.len();
        // Adjacency as bitsets; triangles by intersecting neighbour rows.
        let words = n.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; n];
        for i in 0..n {
            for j in i + 1..n {
                if self.edge(&pts[i], &pts[j])? {
                    adj[i][j / 64] |= 1 << (j % 64);
                    adj[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if adj[i][j / 64] & (1 << (j % 64)) == 0 {
                    continue;
                }
                for w in 0..words {
                    let mut common = adj[i][w] & adj[j][w];
                    // Only count k > j to emit each triangle once.
                    while common != 0 {
                        let bit = common.trailing_zeros() as usize;
                        common &= common - 1;
                        let k = w * 64 + bit;
                        if k > j {
                            out.push([pts[i].clone(), pts[j].clone(), pts[k].clone()]);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// True when no two of the given points form an edge.
    pub fn independent_check(&self, points: &[Ordinal]) -> Result<bool, GraphError> {
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                if self.edge(a, b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Replaces (or inserts) the clause for one layer pair; used to
    /// build perturbed variants in tests.
    pub fn with_clause(&self, clause: EdgeClause) -> Result<Self, GraphError> {
        let mut clauses: Vec<EdgeClause> = self
            .clauses
            .iter()
            .filter(|c| (c.src, c.dst) != (clause.src, clause.dst))
            .cloned()
            .collect();
        clauses.push(clause);
        ClauseGraph::new(self.delta.clone(), self.cover_rule, clauses)
    }

    /// Canonical text form (the shape `parse_text` reads).
    pub fn to_text(&self) -> String {
        let mut out = format!("DELTA {}\n", self.delta);
        if self.cover_rule {
            out.push_str("COVER\n");
        }
        for c in &self.clauses {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the clause DSL: a `DELTA <ordinal>` line, an optional
    /// `COVER` line, then `EDGE (i,j)->(i,j): constraints` lines.
    /// `#` comments and blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self, GraphError> {
        let mut delta = None;
        let mut cover_rule = false;
        let mut clauses = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("DELTA") {
                if delta.is_some() {
                    return Err(GraphError::Parse {
                        line: lineno,
                        msg: "duplicate DELTA line".into(),
                    });
                }
                delta = Some(Ordinal::parse(rest.trim())?);
            } else if line == "COVER" {
                cover_rule = true;
            } else if let Some(rest) = line.strip_prefix("EDGE") {
                clauses.push(parse_edge_line(rest.trim(), lineno)?);
            } else {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("unrecognised line `{line}`"),
                });
            }
        }
        let Some(delta) = delta else {
            return Err(GraphError::Parse {
                line: 0,
                msg: "missing DELTA line".into(),
            });
        };
        ClauseGraph::new(delta, cover_rule, clauses)
    }
}

fn parse_layer_pair(s: &str, line: usize) -> Result<LayerId, GraphError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| GraphError::Parse {
            line,
            msg: format!("expected `(component,rank)`, found `{s}`"),
        })?;
    let mut parts = inner.splitn(2, ',');
    let parse_num = |p: Option<&str>| {
        p.and_then(|x| x.trim().parse::<u32>().ok())
            .ok_or_else(|| GraphError::Parse {
                line,
                msg: format!("bad layer `{s}`"),
            })
    };
    let component = parse_num(parts.next())? as usize;
    let rank = parse_num(parts.next())?;
    Ok(LayerId::new(component, rank))
}

fn parse_edge_line(rest: &str, line: usize) -> Result<EdgeClause, GraphError> {
    let (head, tail) = match rest.split_once(':') {
        Some((h, t)) => (h, t),
        None => {
            return Err(GraphError::Parse {
                line,
                msg: "missing `:` after layer pair".into(),
            })
        }
    };
    let (src_s, dst_s) = head.split_once("->").ok_or_else(|| GraphError::Parse {
        line,
        msg: "missing `->` between layers".into(),
    })?;
    let src = parse_layer_pair(src_s, line)?;
    let dst = parse_layer_pair(dst_s, line)?;
    let constraints = Constraint::parse_list(tail).map_err(|e| GraphError::Parse {
        line,
        msg: e.to_string(),
    })?;
    Ok(EdgeClause {
        src,
        dst,
        constraints,
    })
}

/// The distinguished triangle-free graph on `w^3*2`: the anti-tree cover
/// rule plus nine layer-pair clauses.  Unprimed variables read the
/// ordinal-lower point of a pair, primed ones the higher; `k`, `l`, `m`
/// are the coefficients of `w^2`, `w`, `1` (the `w^3` coefficient is
/// fixed by the component).
pub fn standard_graph() -> ClauseGraph {
    let clause = |src: (usize, u32), dst: (usize, u32), text: &str| EdgeClause {
        src: LayerId::new(src.0, src.1),
        dst: LayerId::new(dst.0, dst.1),
        constraints: Constraint::parse_list(text).expect("static clause"),
    };
    ClauseGraph::new(
        Ordinal::parse("w^3*2").unwrap(),
        true,
        vec![
            clause((1, 3), (2, 0), ""),
            clause((1, 2), (1, 0), "0 < k, k <= k'"),
            clause((1, 0), (1, 2), "k + l + 1 < k'"),
            clause((1, 0), (2, 1), "k + l < l'"),
            clause((2, 2), (2, 0), "k <= k'"),
            clause((1, 1), (2, 1), "l' < k"),
            clause((1, 0), (1, 1), "k' - k > 0, k' - k < l, l' < l"),
            clause((1, 0), (2, 0), "l' < l"),
            clause((2, 0), (2, 1), "k < k', l' < l"),
        ],
    )
    .expect("static graph is well formed")
}

/// The standard graph with the `(2,1)->(2,0)` layer pair joined
/// completely — a deliberately broken variant containing triangles.
pub fn full_pair_mutant() -> ClauseGraph {
    standard_graph()
        .with_clause(EdgeClause {
            src: LayerId::new(2, 1),
            dst: LayerId::new(2, 0),
            constraints: Vec::new(),
        })
        .expect("mutant is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn layer_lookup() {
        let g = standard_graph();
        assert_eq!(g.layer_of(&o("w^3")).unwrap(), LayerId::new(1, 3));
        assert_eq!(g.layer_of(&o("w^2*2")).unwrap(), LayerId::new(1, 2));
        assert_eq!(g.layer_of(&o("w^3+w^2+w")).unwrap(), LayerId::new(2, 1));
        assert_eq!(g.layer_of(&o("w^3+5")).unwrap(), LayerId::new(2, 0));
        assert!(g.layer_of(&o("w^3*2")).is_err());
    }

    #[test]
    fn cover_pairs_are_edges() {
        let g = standard_graph();
        assert!(g.edge(&o("w^2+w"), &o("w^2*2")).unwrap());
        assert!(g.edge(&o("w^3+w"), &o("w^3+w^2")).unwrap());
        assert!(g.edge(&o("3"), &o("w")).unwrap());
        // Same fan, not a cover pair: the clause table has no
        // same-layer entry, so no edge.  (The top fan members
        // w^3+w^2*p are siblings — their cover is the bound itself.)
        assert!(!g.edge(&o("w"), &o("w*2")).unwrap());
        assert!(!g.edge(&o("w^3+w^2"), &o("w^3+w^2*2")).unwrap());
    }

    #[test]
    fn clause_edges_fixtures() {
        let g = standard_graph();
        // (1,3)->(2,0): always.
        assert!(g.edge(&o("w^3"), &o("w^3+5")).unwrap());
        assert!(g.edge(&o("w^3"), &o("w^3+w^2*4+1")).unwrap());
        // (1,2)->(1,0): 0 < k, k <= k' (both hold automatically for
        // increasing pairs of these layers, so the pair is complete).
        assert!(g.edge(&o("w^2*2"), &o("w^2*3+1")).unwrap());
        assert!(g.edge(&o("w^2*2"), &o("w^2*2+1")).unwrap());
        // (1,0)->(1,2): k + l + 1 < k'.
        assert!(g.edge(&o("w^2+1"), &o("w^2*3")).unwrap());
        assert!(!g.edge(&o("w^2*2+1"), &o("w^2*3")).unwrap());
        // (1,0)->(2,1): k + l < l'.
        assert!(g.edge(&o("w^2+w+1"), &o("w^3+w*3")).unwrap());
        assert!(!g.edge(&o("w^2+w*2+1"), &o("w^3+w*3")).unwrap());
        // (1,1)->(2,1): l' < k.
        assert!(g.edge(&o("w^2*2+w"), &o("w^3+w")).unwrap());
        // A rank-0 source falls under (1,0)->(2,1) instead and fails it.
        assert!(!g.edge(&o("w+1"), &o("w^3+w")).unwrap());
        // (2,0)->(2,1): k < k', l' < l.
        assert!(g.edge(&o("w^3+w*2+1"), &o("w^3+w^2+w")).unwrap());
        assert!(!g.edge(&o("w^3+w+1"), &o("w^3+w^2+w")).unwrap());
    }

    #[test]
    fn edge_is_symmetric_and_irreflexive() {
        let g = standard_graph();
        let w = Window::new(g.delta.clone(), 2);
        let pts = w.enumerate();
        for a in &pts {
            assert!(!g.edge(a, a).unwrap());
            for b in &pts {
                assert_eq!(g.edge(a, b).unwrap(), g.edge(b, a).unwrap());
            }
        }
    }

    #[test]
    fn justification_is_unique_on_windows() {
        let g = standard_graph();
        let w = Window::new(g.delta.clone(), 4);
        let pts = w.enumerate();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                let just = g.justify(a, b).unwrap();
                assert!(
                    just.len() <= 1,
                    "pair ({a}, {b}) justified {} times: {just:?}",
                    just.len()
                );
                assert_eq!(!just.is_empty(), g.edge(a, b).unwrap());
            }
        }
    }

    #[test]
    fn standard_graph_triangle_free_small() {
        let g = standard_graph();
        let triangles = g.scan_triangles(&Window::new(g.delta.clone(), 3)).unwrap();
        assert_eq!(triangles, Vec::<[Ordinal; 3]>::new());
    }

    #[test]
    fn full_pair_mutant_has_triangles() {
        let g = full_pair_mutant();
        let triangles = g.scan_triangles(&Window::new(g.delta.clone(), 3)).unwrap();
        assert!(!triangles.is_empty());
        // The known witness: a cover edge into (2,2), a (2,2)->(2,0)
        // clause edge, and the mutant's blanket (2,1)->(2,0) edge.
        let witness = [o("w^3+w"), o("w^3+w^2"), o("w^3+w^2+1")];
        assert!(triangles.contains(&witness), "{triangles:?}");
    }

    #[test]
    fn top_fan_is_independent() {
        let g = standard_graph();
        assert!(g
            .independent_check(&[o("w^3+w^2"), o("w^3+w^2*2")])
            .unwrap());
        assert!(!g
            .independent_check(&[o("w^3+w^2"), o("w^3+w^2*2"), o("w^3+w^2+w")])
            .unwrap());
    }

    #[test]
    fn dsl_round_trip_and_fixture() {
        let g = standard_graph();
        let text = g.to_text();
        let reparsed = ClauseGraph::parse_text(&text).unwrap();
        assert_eq!(g, reparsed);

        let fixture = include_str!("../fixtures/standard_graph.txt");
        assert_eq!(ClauseGraph::parse_text(fixture).unwrap(), g);
    }

    #[test]
    fn dsl_rejects_malformed_input() {
        assert!(ClauseGraph::parse_text("COVER\n").is_err());
        assert!(ClauseGraph::parse_text("DELTA w^3*2\nEDGE (1,3)(2,0):\n").is_err());
        assert!(ClauseGraph::parse_text("DELTA w^3*2\nEDGE (9,3)->(2,0):\n").is_err());
        assert!(ClauseGraph::parse_text("DELTA w^3*2\nGARBAGE\n").is_err());
        assert!(ClauseGraph::parse_text(
            "DELTA w^3*2\nEDGE (1,3)->(2,0):\nEDGE (1,3)->(2,0): k < k'\n"
        )
        .is_err());
    }
}
