//! Sunflowers and distinguishing elements in antichains of finite sets.
//!
//! Given finitely many finite sets no one of which contains another,
//! the majority pigeonhole repeatedly refines the family into a
//! sunflower-like chain: at every stage the least remaining index is
//! selected and the rest of the pool is cut down to the largest group
//! sharing one intersection (the stage's core) with it.  Cores grow
//! monotonically along the chain, and because the family is an
//! antichain each selected set keeps a private element outside its
//! core — an element belonging to no other selected set.  That element
//! is what [`distinguish`] extracts and re-verifies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AntichainError {
    #[error("family is empty")]
    EmptyFamily,
    #[error("not an antichain: set {inner} is contained in set {outer}")]
    NotAntichain { inner: usize, outer: usize },
    #[error("set {index} has no element outside its core")]
    CoreEscape { index: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A family of finite sets of naturals, indexed by position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FinSetFamily {
    sets: Vec<BTreeSet<u64>>,
}

impl FinSetFamily {
    pub fn new(sets: Vec<BTreeSet<u64>>) -> Self {
        FinSetFamily { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn get(&self, i: usize) -> &BTreeSet<u64> {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[BTreeSet<u64>] {
        &self.sets
    }

    /// Errors with the first containment found, if any.
    pub fn ensure_antichain(&self) -> Result<(), AntichainError> {
        for i in 0..self.sets.len() {
            for j in 0..self.sets.len() {
                if i != j && self.sets[i].is_subset(&self.sets[j]) {
                    return Err(AntichainError::NotAntichain { inner: i, outer: j });
                }
            }
        }
        Ok(())
    }

    /// One set per line, elements space-separated; blank lines and
    /// `#` comments are skipped.
    pub fn parse_text(input: &str) -> Result<Self, AntichainError> {
        let mut sets = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut set = BTreeSet::new();
            for tok in line.split_whitespace() {
                let n = tok.parse::<u64>().map_err(|_| AntichainError::Parse {
                    line: lineno + 1,
                    msg: format!("bad element `{tok}`"),
                })?;
                set.insert(n);
            }
            sets.push(set);
        }
        Ok(FinSetFamily { sets })
    }
}

impl fmt::Display for FinSetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for set in &self.sets {
            let elems: Vec<String> = set.iter().map(u64::to_string).collect();
            writeln!(f, "{}", elems.join(" "))?;
        }
        Ok(())
    }
}

/// Result of the majority-pigeonhole refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sunflower {
    /// Selected indices, strictly increasing.
    pub selected: Vec<usize>,
    /// Core fixed at each selection stage; nondecreasing under
    /// inclusion.
    pub cores: Vec<BTreeSet<u64>>,
    /// True when the pool ran out before `count` selections.
    pub exhausted: bool,
}

/// Runs the refinement until `count` indices are selected or the pool
/// is exhausted.  At each stage the least pool index is selected, the
/// remaining indices are grouped by their intersection with it, and the
/// pool becomes the largest group (ties broken towards the smaller
/// core).  The final index selected from a singleton pool keeps the
/// previous stage's core.
pub fn sunflowerize(family: &FinSetFamily, count: usize) -> Result<Sunflower, AntichainError> {
    if family.is_empty() {
        return Err(AntichainError::EmptyFamily);
    }
    let mut pool: Vec<usize> = (0..family.len()).collect();
    let mut selected = Vec::new();
    let mut cores: Vec<BTreeSet<u64>> = Vec::new();
    while selected.len() < count && !pool.is_empty() {
        let head = pool[0];
        if pool.len() == 1 {
            selected.push(head);
            cores.push(cores.last().cloned().unwrap_or_default());
            pool.clear();
            break;
        }
        let mut groups: BTreeMap<BTreeSet<u64>, Vec<usize>> = BTreeMap::new();
        for &j in &pool[1..] {
            let core: BTreeSet<u64> = family.get(head).intersection(family.get(j)).copied().collect();
            groups.entry(core).or_default().push(j);
        }
        // Majority group; ties towards the smaller core (fewer
        // elements, then lexicographically earlier).
        let (core, members) = groups
            .into_iter()
            .max_by(|(c1, m1), (c2, m2)| {
                m1.len()
                    .cmp(&m2.len())
                    .then_with(|| c2.len().cmp(&c1.len()))
                    .then_with(|| c2.cmp(c1))
            })
            .unwrap();
        selected.push(head);
        cores.push(core);
        pool = members;
    }
    Ok(Sunflower {
        exhausted: selected.len() < count,
        selected,
        cores,
    })
}

/// Selected indices with pairwise-distinguishing witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distinguished {
    pub indices: Vec<usize>,
    /// `witnesses[n]` belongs to set `indices[n]` and to no other
    /// selected set.
    pub witnesses: Vec<u64>,
    pub exhausted: bool,
}

/// Picks `count` sets (fewer if the refinement exhausts the family)
/// and, for each, an element of it lying in none of the other picked
/// sets: the least element outside the stage core.  Requires an
/// antichain; the distinguishing property is re-verified before
/// returning.
pub fn distinguish(family: &FinSetFamily, count: usize) -> Result<Distinguished, AntichainError> {
    family.ensure_antichain()?;
    let sunflower = sunflowerize(family, count)?;
    let mut witnesses = Vec::new();
    for (&i, core) in sunflower.selected.iter().zip(&sunflower.cores) {
        let k = family
            .get(i)
            .iter()
            .find(|e| !core.contains(e))
            .copied()
            .ok_or(AntichainError::CoreEscape { index: i })?;
        witnesses.push(k);
    }
    // Re-verify: each witness lies in its own set and escapes every
    // other selected set.
    for (n, &i) in sunflower.selected.iter().enumerate() {
        let k = witnesses[n];
        if !family.get(i).contains(&k) {
            return Err(AntichainError::CoreEscape { index: i });
        }
        for (m, &j) in sunflower.selected.iter().enumerate() {
            if m != n && family.get(j).contains(&k) {
                return Err(AntichainError::CoreEscape { index: i });
            }
        }
    }
    Ok(Distinguished {
        indices: sunflower.selected,
        witnesses,
        exhausted: sunflower.exhausted,
    })
}
