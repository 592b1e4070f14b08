//! Width-truncated anti-trees and extraction of a canonical (normal)
//! sub-skeleton from an arbitrary colouring of their tree pairs.
//!
//! `TruncatedTree { rank: k, fan_width: W }` is the anti-tree below
//! `w^k` with every fan cut to its first `W` members.  Given any
//! colouring of the pairs (node, ancestor), `canonize_truncated`
//! searches for a rank table `d(j, l)` and a sub-skeleton keeping
//! `keep_width` children per node so that every kept pair's colour is
//! `d(rank of upper, rank of lower)` — the colouring restricted to the
//! skeleton is normal.  Kept nodes are relabelled to compact fan
//! positions and the result is re-verified through the generic
//! normality check.

use std::collections::HashMap;

use thiserror::Error;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colouring::{check_normal, ColouringError, DescTable, PairColouring};
use crate::ordinal::{Ordinal, OrdinalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonizeError {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error("tree parameters out of range: rank {rank}, fan width {fan_width}")]
    BadTree { rank: u32, fan_width: u64 },
    #[error("keep width {keep_width} (with mandatory prefix {mandatory_prefix}) exceeds fan width {fan_width}")]
    BadWidth {
        keep_width: u64,
        mandatory_prefix: u64,
        fan_width: u64,
    },
    #[error("no rank table admits a width-{keep_width} skeleton ({tables_tried} tables tried)")]
    WidthExhausted { keep_width: u64, tables_tried: u64 },
}

/// The anti-tree below `w^rank`, every fan truncated to `fan_width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncatedTree {
    pub rank: u32,
    pub fan_width: u64,
}

impl TruncatedTree {
    pub fn new(rank: u32, fan_width: u64) -> Result<Self, CanonizeError> {
        if rank == 0 || fan_width == 0 {
            return Err(CanonizeError::BadTree { rank, fan_width });
        }
        Ok(TruncatedTree { rank, fan_width })
    }

    pub fn root(&self) -> Ordinal {
        Ordinal::omega_pow(self.rank, 1)
    }

    /// Children of an internal node: its subfan cut to the tree width.
    pub fn children(&self, v: &Ordinal) -> Result<Vec<Ordinal>, CanonizeError> {
        Ok(v.subfan(self.fan_width)?)
    }

    /// Ancestor chain of a node, nearest first, ending at the root.
    pub fn ancestors(&self, v: &Ordinal) -> Result<Vec<Ordinal>, CanonizeError> {
        let mut out = Vec::new();
        let mut cur = v.clone();
        let root = self.root();
        while cur != root {
            cur = cur.cover()?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// All nodes grouped by rank, `by_rank[rho]` listing rank `rho` in
    /// increasing ordinal order.
    pub fn nodes_by_rank(&self) -> Result<Vec<Vec<Ordinal>>, CanonizeError> {
        let mut by_rank: Vec<Vec<Ordinal>> = vec![Vec::new(); self.rank as usize + 1];
        by_rank[self.rank as usize].push(self.root());
        for rho in (1..=self.rank).rev() {
            let parents = by_rank[rho as usize].clone();
            for p in &parents {
                let kids = self.children(p)?;
                by_rank[rho as usize - 1].extend(kids);
            }
        }
        Ok(by_rank)
    }

    /// `1 + W + W^2 + ... + W^rank`.
    pub fn node_count(&self) -> u64 {
        let mut total = 1u64;
        let mut layer = 1u64;
        for _ in 0..self.rank {
            layer *= self.fan_width;
            total += layer;
        }
        total
    }
}

/// A colouring of the tree pairs (node, strict ancestor).
pub trait TreeColouring {
    fn colour(&self, below: &Ordinal, above: &Ordinal) -> u8;
}

impl<F: Fn(&Ordinal, &Ordinal) -> u8> TreeColouring for F {
    fn colour(&self, below: &Ordinal, above: &Ordinal) -> u8 {
        self(below, above)
    }
}

/// A stored random colouring of all tree pairs, reproducible by seed.
#[derive(Debug, Clone)]
pub struct SeededTreeColouring {
    map: HashMap<(Ordinal, Ordinal), u8>,
}

impl TreeColouring for SeededTreeColouring {
    fn colour(&self, below: &Ordinal, above: &Ordinal) -> u8 {
        *self
            .map
            .get(&(below.clone(), above.clone()))
            .expect("pair belongs to the generated tree")
    }
}

/// Colours every (node, ancestor) pair of the tree uniformly at random
/// among `n_colours` values, deterministically in `seed`.
pub fn seeded_random_colouring(
    tree: &TruncatedTree,
    n_colours: u8,
    seed: u64,
) -> Result<SeededTreeColouring, CanonizeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut map = HashMap::new();
    for level in tree.nodes_by_rank()? {
        for v in level {
            for a in tree.ancestors(&v)? {
                map.insert((v.clone(), a), rng.gen_range(0..n_colours));
            }
        }
    }
    Ok(SeededTreeColouring { map })
}

/// A canonical sub-skeleton: kept original nodes, the compact
/// relabelling, and the rank table realised on it.
#[derive(Debug, Clone)]
pub struct TruncatedSkeleton {
    pub tree: TruncatedTree,
    pub keep_width: u64,
    pub mandatory_prefix: u64,
    /// Kept original nodes in increasing order.
    pub kept: Vec<Ordinal>,
    pub to_new: HashMap<Ordinal, Ordinal>,
    pub to_old: HashMap<Ordinal, Ordinal>,
    /// `d(upper rank, lower rank)` realised by every kept pair.
    pub table: DescTable,
}

struct RelabelledColouring<'a> {
    skeleton: &'a TruncatedSkeleton,
    colouring: &'a dyn TreeColouring,
}

impl PairColouring for RelabelledColouring<'_> {
    fn colour_pair(&self, a: &Ordinal, b: &Ordinal) -> Result<u8, ColouringError> {
        let old_a = self.skeleton.to_old.get(a);
        let old_b = self.skeleton.to_old.get(b);
        let (Some(old_a), Some(old_b)) = (old_a, old_b) else {
            return Err(ColouringError::MissingPair(a.to_string(), b.to_string()));
        };
        let (below, above) = if old_a.cb_rank()? < old_b.cb_rank()? {
            (old_a, old_b)
        } else {
            (old_b, old_a)
        };
        Ok(self.colouring.colour(below, above))
    }
}

impl TruncatedSkeleton {
    /// Re-verifies every invariant against the original colouring:
    /// the relabelling is a tree-order isomorphism onto a compact
    /// truncated tree, each internal kept node keeps `keep_width`
    /// children including the mandatory prefix, and the relabelled
    /// colouring passes the generic normality check (inside the
    /// single-component universe `w^rank + 1`) with exactly the stated
    /// rank table.
    pub fn check(&self, colouring: &dyn TreeColouring) -> Result<bool, CanonizeError> {
        let root = self.tree.root();
        if !self.kept.contains(&root) || self.to_new.get(&root) != Some(&root) {
            return Ok(false);
        }
        if self.to_new.len() != self.kept.len() || self.to_old.len() != self.kept.len() {
            return Ok(false);
        }
        // Order isomorphism in both directions.
        for a in &self.kept {
            let na = &self.to_new[a];
            if self.to_old.get(na) != Some(a) {
                return Ok(false);
            }
            for b in &self.kept {
                if a.tree_lt(b)? != self.to_new[a].tree_lt(&self.to_new[b])? {
                    return Ok(false);
                }
            }
        }
        // Width and prefix: every kept internal node keeps exactly
        // keep_width children, relabelled to fan positions 1..=keep_width,
        // and the first `mandatory_prefix` kept ones are the original fan
        // prefix.
        for a in &self.kept {
            if a.cb_rank()? == 0 {
                continue;
            }
            let kept_children: Vec<&Ordinal> = self
                .kept
                .iter()
                .filter(|c| c.cover().map(|cv| cv == *a).unwrap_or(false))
                .collect();
            if kept_children.len() as u64 != self.keep_width {
                return Ok(false);
            }
            for c in kept_children.iter().take(self.mandatory_prefix as usize) {
                if c.n_of()? > self.mandatory_prefix {
                    return Ok(false);
                }
            }
            let mut new_positions: Vec<u64> = kept_children
                .iter()
                .map(|c| self.to_new[*c].n_of())
                .collect::<Result<_, _>>()?;
            new_positions.sort_unstable();
            if new_positions != (1..=self.keep_width).collect::<Vec<u64>>() {
                return Ok(false);
            }
        }
        // Normality of the relabelled skeleton, and agreement with the
        // stated table.
        let relabelled: Vec<Ordinal> = self.kept.iter().map(|a| self.to_new[a].clone()).collect();
        let ambient = root.add(&Ordinal::nat(1));
        let adapter = RelabelledColouring {
            skeleton: self,
            colouring,
        };
        let report = check_normal(&adapter, &ambient, &relabelled)?;
        if !report.ok {
            return Ok(false);
        }
        Ok(report.table.as_ref() == Some(&self.table))
    }
}

/// Searches rank tables in lexicographic order (entries ordered by
/// `(upper rank, lower rank)`, lower colours first) for one admitting a
/// `keep_width`-wide skeleton; keeps, per node, the mandatory fan
/// prefix plus the lowest-position feasible children.
pub fn canonize_truncated(
    tree: &TruncatedTree,
    colouring: &dyn TreeColouring,
    n_colours: u8,
    keep_width: u64,
    mandatory_prefix: u64,
) -> Result<TruncatedSkeleton, CanonizeError> {
    if keep_width == 0 || mandatory_prefix > keep_width || keep_width > tree.fan_width {
        return Err(CanonizeError::BadWidth {
            keep_width,
            mandatory_prefix,
            fan_width: tree.fan_width,
        });
    }
    let k = tree.rank;
    let by_rank = tree.nodes_by_rank()?;
    // Cache each node's (ancestor rank, colour) vector once.
    let mut anc_colours: HashMap<Ordinal, Vec<(u32, u8)>> = HashMap::new();
    for level in &by_rank {
        for v in level {
            let vec = tree
                .ancestors(v)?
                .into_iter()
                .map(|a| Ok::<_, CanonizeError>((a.cb_rank()?, colouring.colour(v, &a))))
                .collect::<Result<Vec<_>, _>>()?;
            anc_colours.insert(v.clone(), vec);
        }
    }

    // Rank-pair keys (j, l), l < j <= k, in ascending order.
    let keys: Vec<(u32, u32)> = (1..=k)
        .flat_map(|j| (0..j).map(move |l| (j, l)))
        .collect();
    let mut assignment = vec![0u8; keys.len()];
    let mut tables_tried = 0u64;

    loop {
        tables_tried += 1;
        let d: HashMap<(u32, u32), u8> = keys
            .iter()
            .copied()
            .zip(assignment.iter().copied())
            .collect();

        if let Some(skeleton) =
            try_table(tree, &by_rank, &anc_colours, &d, keep_width, mandatory_prefix)?
        {
            let table = DescTable {
                entries: d
                    .into_iter()
                    .map(|((j, l), c)| ((1usize, j, l), c))
                    .collect(),
            };
            return Ok(TruncatedSkeleton {
                tree: *tree,
                keep_width,
                mandatory_prefix,
                kept: skeleton.0,
                to_new: skeleton.1,
                to_old: skeleton.2,
                table,
            });
        }

        // Next assignment in lexicographic order: last key varies fastest.
        let mut i = keys.len();
        loop {
            if i == 0 {
                return Err(CanonizeError::WidthExhausted {
                    keep_width,
                    tables_tried,
                });
            }
            i -= 1;
            if assignment[i] + 1 < n_colours {
                assignment[i] += 1;
                assignment[i + 1..].fill(0);
                break;
            }
        }
    }
}

type Selection = (
    Vec<Ordinal>,
    HashMap<Ordinal, Ordinal>,
    HashMap<Ordinal, Ordinal>,
);

/// Feasibility pass for one rank table, then top-down selection and
/// relabelling when the root is feasible.
fn try_table(
    tree: &TruncatedTree,
    by_rank: &[Vec<Ordinal>],
    anc_colours: &HashMap<Ordinal, Vec<(u32, u8)>>,
    d: &HashMap<(u32, u32), u8>,
    keep_width: u64,
    mandatory_prefix: u64,
) -> Result<Option<Selection>, CanonizeError> {
    let mut feasible: HashMap<&Ordinal, bool> = HashMap::new();
    for rho in 0..=tree.rank {
        for v in &by_rank[rho as usize] {
            // Own colours to every ancestor must match the table.
            let own_ok = anc_colours[v]
                .iter()
                .all(|&(j, c)| d.get(&(j, rho)) == Some(&c));
            let ok = own_ok
                && (rho == 0 || {
                    let kids = v.subfan(tree.fan_width)?;
                    let prefix_ok = kids
                        .iter()
                        .take(mandatory_prefix as usize)
                        .all(|c| feasible[c]);
                    let count = kids.iter().filter(|c| feasible[*c]).count() as u64;
                    prefix_ok && count >= keep_width
                });
            feasible.insert(v, ok);
        }
    }
    let root = tree.root();
    if !feasible[&root] {
        return Ok(None);
    }

    // Select top-down: mandatory prefix plus lowest feasible positions.
    let mut kept = Vec::new();
    let mut to_new = HashMap::new();
    let mut to_old = HashMap::new();
    let mut stack = vec![(root.clone(), root.clone())];
    to_new.insert(root.clone(), root.clone());
    to_old.insert(root.clone(), root.clone());
    while let Some((old_v, new_v)) = stack.pop() {
        kept.push(old_v.clone());
        if old_v.cb_rank()? == 0 {
            continue;
        }
        let kids = old_v.subfan(tree.fan_width)?;
        let chosen = kids
            .iter()
            .enumerate()
            .filter(|&(i, c)| (i as u64) < mandatory_prefix || feasible[c])
            .map(|(_, c)| c)
            .take(keep_width as usize);
        for (new_pos, old_child) in chosen.enumerate() {
            let new_child_fan = new_v.subfan(new_pos as u64 + 1)?;
            let new_child = new_child_fan.last().expect("positive position").clone();
            to_new.insert(old_child.clone(), new_child.clone());
            to_old.insert(new_child.clone(), old_child.clone());
            stack.push((old_child.clone(), new_child));
        }
    }
    kept.sort();
    Ok(Some((kept, to_new, to_old)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn node_counts() {
        let t = TruncatedTree::new(2, 64).unwrap();
        assert_eq!(t.node_count(), 4161);
        assert_eq!(
            t.nodes_by_rank()
                .unwrap()
                .iter()
                .map(|l| l.len() as u64)
                .sum::<u64>(),
            4161
        );
        let t = TruncatedTree::new(3, 16).unwrap();
        assert_eq!(t.node_count(), 4369);
    }

    #[test]
    fn ancestors_run_to_root() {
        let t = TruncatedTree::new(3, 4).unwrap();
        let leaf = o("w^2*2+w+3");
        assert_eq!(
            t.ancestors(&leaf).unwrap(),
            vec![o("w^2*2+w*2"), o("w^2*3"), o("w^3")]
        );
        assert!(t.ancestors(&t.root()).unwrap().is_empty());
    }

    #[test]
    fn constant_colouring_keeps_fan_prefixes() {
        let t = TruncatedTree::new(2, 8).unwrap();
        let constant = |_: &Ordinal, _: &Ordinal| 0u8;
        let sk = canonize_truncated(&t, &constant, 2, 3, 2).unwrap();
        assert!(sk.check(&constant).unwrap());
        // With everything feasible, selection keeps positions 1..3 of
        // each fan, already compact.
        assert!(sk.kept.contains(&o("w*2")));
        assert!(sk.kept.contains(&o("w+3")));
        assert_eq!(sk.kept.len(), 1 + 3 + 9);
        for (old, new) in &sk.to_new {
            assert_eq!(old, new, "identity relabelling expected");
        }
        // All-zero table.
        assert!(sk.table.entries.values().all(|&c| c == 0));
    }

    #[test]
    fn parity_colouring_keeps_even_positions() {
        // Colour = fan position parity of the lower point.  The first
        // feasible table in lexicographic order is all-zero, which keeps
        // even positions everywhere.
        let t = TruncatedTree::new(2, 8).unwrap();
        let parity = |below: &Ordinal, _: &Ordinal| (below.n_of().unwrap() % 2) as u8;
        let sk = canonize_truncated(&t, &parity, 2, 4, 0).unwrap();
        assert!(sk.check(&parity).unwrap());
        assert!(sk.table.entries.values().all(|&c| c == 0));
        // Kept rank-1 nodes are the even fan positions, compacted.
        let kept_rank1: Vec<&Ordinal> = sk
            .kept
            .iter()
            .filter(|v| v.cb_rank().unwrap() == 1)
            .collect();
        assert_eq!(
            kept_rank1,
            vec![&o("w*2"), &o("w*4"), &o("w*6"), &o("w*8")]
        );
        assert_eq!(sk.to_new[&o("w*4")], o("w*2"));
        // Relabelled leaf under a relabelled parent: original w*2 maps
        // to w, whose fan is the naturals, so its first kept child
        // (old w+2) becomes 1.
        assert_eq!(sk.to_new[&o("w+2")], o("1"));
    }

    #[test]
    fn mandatory_prefix_can_be_unsatisfiable() {
        // Position-parity colouring again: positions 1 and 2 have
        // different colours, so no table accommodates a mandatory
        // prefix of 2.
        let t = TruncatedTree::new(2, 8).unwrap();
        let parity = |below: &Ordinal, _: &Ordinal| (below.n_of().unwrap() % 2) as u8;
        let err = canonize_truncated(&t, &parity, 2, 4, 2).unwrap_err();
        assert!(matches!(err, CanonizeError::WidthExhausted { .. }), "{err}");
    }

    #[test]
    fn seeded_colouring_is_reproducible_and_canonizable() {
        let t = TruncatedTree::new(2, 64).unwrap();
        let c1 = seeded_random_colouring(&t, 2, 12345).unwrap();
        let c2 = seeded_random_colouring(&t, 2, 12345).unwrap();
        assert_eq!(
            c1.colour(&o("w*17+5"), &o("w*18")),
            c2.colour(&o("w*17+5"), &o("w*18"))
        );
        // Wide fans over few colours always admit a skeleton (counting:
        // some leaf signature repeats >= 3 times per fan, some rank-1
        // signature bucket repeats >= 3 times at the root).
        let sk = canonize_truncated(&t, &c1, 2, 3, 0).unwrap();
        assert!(sk.check(&c1).unwrap());
    }

    #[test]
    fn check_rejects_tampered_skeletons() {
        let t = TruncatedTree::new(2, 8).unwrap();
        let constant = |_: &Ordinal, _: &Ordinal| 0u8;
        let mut sk = canonize_truncated(&t, &constant, 2, 3, 0).unwrap();
        sk.table.entries.insert((1, 2, 1), 1); // claim a wrong table
        assert!(!sk.check(&constant).unwrap());
    }

    #[test]
    fn width_validation() {
        let t = TruncatedTree::new(2, 4).unwrap();
        let constant = |_: &Ordinal, _: &Ordinal| 0u8;
        assert!(matches!(
            canonize_truncated(&t, &constant, 2, 5, 0),
            Err(CanonizeError::BadWidth { .. })
        ));
        assert!(matches!(
            canonize_truncated(&t, &constant, 2, 3, 4),
            Err(CanonizeError::BadWidth { .. })
        ));
    }
}
