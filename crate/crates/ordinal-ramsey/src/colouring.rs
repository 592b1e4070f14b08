//! Structure checks for pair colourings: normality along the anti-tree,
//! goodness of point colourings against the large-set filters, and the
//! canonical descent/domination tables.
//!
//! A pair colouring is *normal* when its value on tree-related pairs
//! depends only on the layer data `(component of the upper point, rank
//! of the upper point, rank of the lower point)` — the descent table.
//! It is *canonical* when, in addition, the colour between a point and
//! the far tail of every other component's level stabilises: for each
//! point `a` and each cross-component level, some filter `F(sup)^r_l`
//! is monochromatic against `a`, and all points of a layer stabilise to
//! the same colour — the domination table.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::fsets::{FSet, FsetError};
use crate::graph::{ClauseGraph, GraphError};
use crate::ordinal::{LayerId, Ordinal, OrdinalError, Window};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColouringError {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fset(#[from] FsetError),
    #[error("no colour recorded for pair ({0}, {1})")]
    MissingPair(String, String),
    #[error("bad table text at line {line}: {msg}")]
    BadTableText { line: usize, msg: String },
}

/// A two-place colouring of ordinal pairs.
pub trait PairColouring {
    fn colour_pair(&self, a: &Ordinal, b: &Ordinal) -> Result<u8, ColouringError>;
}

impl PairColouring for ClauseGraph {
    fn colour_pair(&self, a: &Ordinal, b: &Ordinal) -> Result<u8, ColouringError> {
        Ok(self.colour(a, b)?)
    }
}

/// An explicit pair-to-colour table (unordered pairs keyed low-high),
/// with an optional default for missing pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableColouring {
    pub delta: Ordinal,
    pub pairs: BTreeMap<(Ordinal, Ordinal), u8>,
    pub default: Option<u8>,
}

impl TableColouring {
    pub fn new(delta: Ordinal, default: Option<u8>) -> Self {
        TableColouring {
            delta,
            pairs: BTreeMap::new(),
            default,
        }
    }

    /// Records a colour for the unordered pair.
    pub fn set(&mut self, a: Ordinal, b: Ordinal, colour: u8) {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.pairs.insert(key, colour);
    }

    /// Captures a colouring's restriction to all pairs of a window.
    pub fn capture(
        source: &dyn PairColouring,
        delta: &Ordinal,
        window: &Window,
    ) -> Result<Self, ColouringError> {
        let mut table = TableColouring::new(delta.clone(), None);
        let pts = window.enumerate();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                table.set(a.clone(), b.clone(), source.colour_pair(a, b)?);
            }
        }
        Ok(table)
    }

    /// `DELTA` header plus one `pair <a> <b> <colour>` line per entry.
    pub fn to_text(&self) -> String {
        let mut out = format!("DELTA {}\n", self.delta);
        if let Some(d) = self.default {
            out.push_str(&format!("DEFAULT {d}\n"));
        }
        for ((a, b), c) in &self.pairs {
            out.push_str(&format!("pair {a} {b} {c}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, ColouringError> {
        let mut delta = None;
        let mut default = None;
        let mut pairs = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("DELTA") {
                delta = Some(Ordinal::parse(rest.trim())?);
            } else if let Some(rest) = line.strip_prefix("DEFAULT") {
                default =
                    Some(
                        rest.trim()
                            .parse::<u8>()
                            .map_err(|e| ColouringError::BadTableText {
                                line: lineno,
                                msg: e.to_string(),
                            })?,
                    );
            } else if let Some(rest) = line.strip_prefix("pair") {
                let mut parts = rest.split_whitespace();
                let (Some(a), Some(b), Some(c)) = (parts.next(), parts.next(), parts.next())
                else {
                    return Err(ColouringError::BadTableText {
                        line: lineno,
                        msg: "expected `pair <ordinal> <ordinal> <colour>`".into(),
                    });
                };
                let a = Ordinal::parse(a)?;
                let b = Ordinal::parse(b)?;
                let c = c.parse::<u8>().map_err(|e| ColouringError::BadTableText {
                    line: lineno,
                    msg: e.to_string(),
                })?;
                let key = if a <= b { (a, b) } else { (b, a) };
                pairs.insert(key, c);
            } else {
                return Err(ColouringError::BadTableText {
                    line: lineno,
                    msg: format!("unrecognised line `{line}`"),
                });
            }
        }
        let Some(delta) = delta else {
            return Err(ColouringError::BadTableText {
                line: 0,
                msg: "missing DELTA line".into(),
            });
        };
        Ok(TableColouring {
            delta,
            pairs,
            default,
        })
    }
}

impl PairColouring for TableColouring {
    fn colour_pair(&self, a: &Ordinal, b: &Ordinal) -> Result<u8, ColouringError> {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        match self.pairs.get(&key).copied().or(self.default) {
            Some(c) => Ok(c),
            None => Err(ColouringError::MissingPair(a.to_string(), b.to_string())),
        }
    }
}

/// Either concrete colouring, with the resolution path appropriate to
/// each: clause graphs are resolved symbolically on unbounded filter
/// tails, tables at their window scale.
#[derive(Debug, Clone)]
pub enum AnyColouring {
    Clause(ClauseGraph),
    Table(TableColouring),
}

impl AnyColouring {
    pub fn delta(&self) -> &Ordinal {
        match self {
            AnyColouring::Clause(g) => &g.delta,
            AnyColouring::Table(t) => &t.delta,
        }
    }
}

impl PairColouring for AnyColouring {
    fn colour_pair(&self, a: &Ordinal, b: &Ordinal) -> Result<u8, ColouringError> {
        match self {
            AnyColouring::Clause(g) => g.colour_pair(a, b),
            AnyColouring::Table(t) => t.colour_pair(a, b),
        }
    }
}

/// Descent table: colour of tree-related pairs keyed by
/// `(component of upper, rank of upper, rank of lower)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DescTable {
    pub entries: BTreeMap<(usize, u32, u32), u8>,
}

impl DescTable {
    pub fn get(&self, component: usize, upper_rank: u32, lower_rank: u32) -> Option<u8> {
        self.entries.get(&(component, upper_rank, lower_rank)).copied()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&(i, j, l), &c) in &self.entries {
            out.push_str(&format!("desc {i} {j} {l} {c}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, ColouringError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = (|| {
                if fields.len() != 5 || fields[0] != "desc" {
                    return None;
                }
                Some((
                    fields[1].parse::<usize>().ok()?,
                    fields[2].parse::<u32>().ok()?,
                    fields[3].parse::<u32>().ok()?,
                    fields[4].parse::<u8>().ok()?,
                ))
            })();
            let Some((i, j, l, c)) = parsed else {
                return Err(ColouringError::BadTableText {
                    line: idx + 1,
                    msg: format!("expected `desc i j l colour`, found `{line}`"),
                });
            };
            entries.insert((i, j, l), c);
        }
        Ok(DescTable { entries })
    }
}

/// Domination table: stabilised colour between the points of layer
/// `(i1, j1)` and the deep tail of level `l` of component `i2`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DomTable {
    pub entries: BTreeMap<(usize, u32, usize, u32), u8>,
}

impl DomTable {
    pub fn get(&self, i1: usize, j1: u32, i2: usize, l: u32) -> Option<u8> {
        self.entries.get(&(i1, j1, i2, l)).copied()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&(i1, j1, i2, l), &c) in &self.entries {
            out.push_str(&format!("dom {i1} {j1} {i2} {l} {c}\n"));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, ColouringError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = (|| {
                if fields.len() != 6 || fields[0] != "dom" {
                    return None;
                }
                Some((
                    fields[1].parse::<usize>().ok()?,
                    fields[2].parse::<u32>().ok()?,
                    fields[3].parse::<usize>().ok()?,
                    fields[4].parse::<u32>().ok()?,
                    fields[5].parse::<u8>().ok()?,
                ))
            })();
            let Some((i1, j1, i2, l, c)) = parsed else {
                return Err(ColouringError::BadTableText {
                    line: idx + 1,
                    msg: format!("expected `dom i1 j1 i2 l colour`, found `{line}`"),
                });
            };
            entries.insert((i1, j1, i2, l), c);
        }
        Ok(DomTable { entries })
    }
}

/// Two same-key tree pairs with different colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalViolation {
    pub key: (usize, u32, u32),
    pub pair_a: (Ordinal, Ordinal),
    pub colour_a: u8,
    pub pair_b: (Ordinal, Ordinal),
    pub colour_b: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalReport {
    pub ok: bool,
    /// Per-key colour over the witnessed keys (when ok).
    pub table: Option<DescTable>,
    pub violation: Option<NormalViolation>,
}

/// Scans every tree-related pair among `points` and checks the colour
/// is a function of `(component(upper), rank(upper), rank(lower))`.
pub fn check_normal(
    colouring: &dyn PairColouring,
    delta: &Ordinal,
    points: &[Ordinal],
) -> Result<NormalReport, ColouringError> {
    let mut seen: BTreeMap<(usize, u32, u32), ((Ordinal, Ordinal), u8)> = BTreeMap::new();
    for lower in points {
        for upper in points {
            if !lower.tree_lt(upper)? {
                continue;
            }
            let key = (
                delta.cnf_cut(upper)?,
                upper.cb_rank()?,
                lower.cb_rank()?,
            );
            let colour = colouring.colour_pair(lower, upper)?;
            match seen.get(&key) {
                None => {
                    seen.insert(key, ((lower.clone(), upper.clone()), colour));
                }
                Some((first_pair, first_colour)) if *first_colour != colour => {
                    return Ok(NormalReport {
                        ok: false,
                        table: None,
                        violation: Some(NormalViolation {
                            key,
                            pair_a: first_pair.clone(),
                            colour_a: *first_colour,
                            pair_b: (lower.clone(), upper.clone()),
                            colour_b: colour,
                        }),
                    });
                }
                Some(_) => {}
            }
        }
    }
    Ok(NormalReport {
        ok: true,
        table: Some(DescTable {
            entries: seen.into_iter().map(|(k, (_, c))| (k, c)).collect(),
        }),
        violation: None,
    })
}

/// One goodness failure: the filter trace of `(theta, level)` inside
/// the window meets two colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RGoodFailure {
    pub theta: Ordinal,
    pub level: u32,
    pub witness_a: (Ordinal, u8),
    pub witness_b: (Ordinal, u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RGoodReport {
    pub ok: bool,
    pub failures: Vec<RGoodFailure>,
    /// `(theta, level)` whose filter trace in the window was empty.
    pub skipped: Vec<(Ordinal, u32)>,
}

/// Checks a point colouring is `r`-good at window scale: for every
/// window member `theta` of positive rank and every level below it,
/// the window trace of `F(theta)^r_level` is monochromatic.
pub fn check_r_good(
    colour: &mut dyn FnMut(&Ordinal) -> u8,
    window: &Window,
    r: u64,
) -> Result<RGoodReport, ColouringError> {
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    for theta in window.enumerate() {
        let rank = theta.cb_rank()?;
        for level in 0..rank {
            let fset = FSet::new(theta.clone(), r, level)?;
            let trace: Vec<Ordinal> = fset
                .members_upto(window.coeff_bound + 1)?
                .into_iter()
                .filter(|b| window.contains(b))
                .collect();
            if trace.is_empty() {
                skipped.push((theta.clone(), level));
                continue;
            }
            let first = colour(&trace[0]);
            if let Some(other) = trace[1..].iter().find(|b| colour(b) != first) {
                failures.push(RGoodFailure {
                    theta: theta.clone(),
                    level,
                    witness_a: (trace[0].clone(), first),
                    witness_b: (other.clone(), colour(other)),
                });
            }
        }
    }
    Ok(RGoodReport {
        ok: failures.is_empty(),
        failures,
        skipped,
    })
}

/// Resolution of one `(point, cross component, level)` cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// Least `r` at which the filter is monochromatic against the point.
    Resolved { colour: u8, witness_r: u64 },
    /// Mixed colours at every `r <= r_max`.
    Unresolved,
}

/// Key of a domination cell that no layer point resolved.
pub type DomKey = (usize, u32, usize, u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomConflict {
    pub key: DomKey,
    pub point_a: Ordinal,
    pub colour_a: u8,
    pub point_b: Ordinal,
    pub colour_b: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalReport {
    pub ok: bool,
    pub normal: NormalReport,
    pub dom: DomTable,
    /// Cells `(point, i2, l)` that stayed mixed at every `r`.
    pub unresolved: Vec<(Ordinal, usize, u32)>,
    /// Dom keys with no resolved witness at all.
    pub unwitnessed: Vec<DomKey>,
    pub conflicts: Vec<DomConflict>,
}

/// Resolves one cell: the least `r <= r_max` at which every member of
/// `F(theta2)^r_level` takes one colour against `alpha`.
///
/// For clause colourings membership is scanned symbolically: the colour
/// of `(alpha, member)` depends on the member's free coefficients only
/// through affine comparisons against `alpha`'s fixed coefficients, so
/// any colour change shows up within `r + (sum of alpha's coefficients)
/// + 2` — coefficients beyond that box compare identically.  Table
/// colourings are resolved on their window members instead.
pub fn resolve_cell(
    colouring: &AnyColouring,
    window: &Window,
    alpha: &Ordinal,
    theta2: &Ordinal,
    level: u32,
    r_max: u64,
) -> Result<Resolution, ColouringError> {
    for r in 0..=r_max {
        let fset = FSet::new(theta2.clone(), r, level)?;
        let members: Vec<Ordinal> = match colouring {
            AnyColouring::Clause(_) => {
                let coeff_sum: u64 = alpha.terms().iter().map(|&(_, c)| c).sum();
                fset.members_upto(r + coeff_sum + 2)?
            }
            AnyColouring::Table(_) => fset
                .members_upto(window.coeff_bound)?
                .into_iter()
                .filter(|b| window.contains(b))
                .collect(),
        };
        let mut colour_seen: Option<u8> = None;
        let mut mixed = false;
        for b in &members {
            if b == alpha {
                continue;
            }
            let c = colouring.colour_pair(alpha, b)?;
            match colour_seen {
                None => colour_seen = Some(c),
                Some(prev) if prev != c => {
                    mixed = true;
                    break;
                }
                Some(_) => {}
            }
        }
        if let (false, Some(colour)) = (mixed, colour_seen) {
            return Ok(Resolution::Resolved {
                colour,
                witness_r: r,
            });
        }
    }
    Ok(Resolution::Unresolved)
}

/// Extracts the descent and domination tables of a colouring at window
/// scale and checks canonicity: normality, plus every cross-component
/// domination cell witnessed by at least one layer point with all
/// witnesses agreeing.  Points whose cells stay mixed (their witness
/// would exceed `r_max`) are reported but do not falsify.
pub fn extract_tables(
    colouring: &AnyColouring,
    window: &Window,
    r_max: u64,
) -> Result<CanonicalReport, ColouringError> {
    let delta = colouring.delta().clone();
    let points = window.enumerate();
    let normal = check_normal(colouring, &delta, &points)?;

    let k = delta.k_delta()? as usize;
    let mut dom_cells: BTreeMap<DomKey, (Ordinal, u8, u64)> = BTreeMap::new();
    let mut unresolved = Vec::new();
    let mut unwitnessed = Vec::new();
    let mut conflicts = Vec::new();

    for alpha in &points {
        let i1 = delta.cnf_cut(alpha)?;
        let j1 = alpha.cb_rank()?;
        for i2 in 1..=k {
            if i2 == i1 {
                continue;
            }
            let theta2 = delta.component_sup(i2)?;
            for level in 0..theta2.cb_rank()? {
                match resolve_cell(colouring, window, alpha, &theta2, level, r_max)? {
                    Resolution::Resolved { colour, witness_r } => {
                        let key = (i1, j1, i2, level);
                        match dom_cells.get(&key) {
                            None => {
                                dom_cells.insert(key, (alpha.clone(), colour, witness_r));
                            }
                            Some((first, prev, _)) if *prev != colour => {
                                conflicts.push(DomConflict {
                                    key,
                                    point_a: first.clone(),
                                    colour_a: *prev,
                                    point_b: alpha.clone(),
                                    colour_b: colour,
                                });
                            }
                            Some(_) => {}
                        }
                    }
                    Resolution::Unresolved => unresolved.push((alpha.clone(), i2, level)),
                }
            }
        }
    }

    // Every dom key with layer points in the window needs a witness.
    let mut layers_present: BTreeMap<(usize, u32), ()> = BTreeMap::new();
    for p in &points {
        layers_present.insert((delta.cnf_cut(p)?, p.cb_rank()?), ());
    }
    for &(i1, j1) in layers_present.keys() {
        for i2 in 1..=k {
            if i2 == i1 {
                continue;
            }
            let theta2 = delta.component_sup(i2)?;
            for level in 0..theta2.cb_rank()? {
                if !dom_cells.contains_key(&(i1, j1, i2, level)) {
                    unwitnessed.push((i1, j1, i2, level));
                }
            }
        }
    }

    let ok = normal.ok && unwitnessed.is_empty() && conflicts.is_empty();
    Ok(CanonicalReport {
        ok,
        normal,
        dom: DomTable {
            entries: dom_cells
                .into_iter()
                .map(|(k, (_, c, _))| (k, c))
                .collect(),
        },
        unresolved,
        unwitnessed,
        conflicts,
    })
}

/// A scarcity rule violation: more than one colour-1 entry in a slice
/// of a table that admits at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScarcityViolation {
    /// Two descent levels `l` coloured 1 under one `(component, rank)`.
    DescLevels { component: usize, rank: u32, l_a: u32, l_b: u32 },
    /// Two domination levels coloured 1 under one `(i1, j1, i2)`.
    DomLevels { i1: usize, j1: u32, i2: usize, l_a: u32, l_b: u32 },
    /// Two source ranks coloured 1 under one `(i1, i2, l)`.
    DomRanks { i1: usize, i2: usize, l: u32, j_a: u32, j_b: u32 },
}

/// Checks the scarcity rules: per `(i, j)` at most one descent level is
/// coloured 1; per `(i1, j1, i2)` at most one domination level is
/// coloured 1; per `(i1, i2, l)` at most one source rank is coloured 1.
pub fn scarcity_check(desc: &DescTable, dom: &DomTable) -> Vec<ScarcityViolation> {
    let mut out = Vec::new();
    let mut desc_ones: BTreeMap<(usize, u32), u32> = BTreeMap::new();
    for (&(i, j, l), &c) in &desc.entries {
        if c != 1 {
            continue;
        }
        if let Some(&prev) = desc_ones.get(&(i, j)) {
            out.push(ScarcityViolation::DescLevels {
                component: i,
                rank: j,
                l_a: prev,
                l_b: l,
            });
        } else {
            desc_ones.insert((i, j), l);
        }
    }
    let mut dom_levels: BTreeMap<(usize, u32, usize), u32> = BTreeMap::new();
    let mut dom_ranks: BTreeMap<(usize, usize, u32), u32> = BTreeMap::new();
    for (&(i1, j1, i2, l), &c) in &dom.entries {
        if c != 1 {
            continue;
        }
        if let Some(&prev) = dom_levels.get(&(i1, j1, i2)) {
            out.push(ScarcityViolation::DomLevels {
                i1,
                j1,
                i2,
                l_a: prev,
                l_b: l,
            });
        } else {
            dom_levels.insert((i1, j1, i2), l);
        }
        if let Some(&prev) = dom_ranks.get(&(i1, i2, l)) {
            out.push(ScarcityViolation::DomRanks {
                i1,
                i2,
                l,
                j_a: prev,
                j_b: j1,
            });
        } else {
            dom_ranks.insert((i1, i2, l), j1);
        }
    }
    out
}

impl fmt::Display for ScarcityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScarcityViolation::DescLevels {
                component,
                rank,
                l_a,
                l_b,
            } => write!(
                f,
                "desc({component},{rank},*): levels {l_a} and {l_b} both coloured 1"
            ),
            ScarcityViolation::DomLevels { i1, j1, i2, l_a, l_b } => write!(
                f,
                "dom({i1},{j1},{i2},*): levels {l_a} and {l_b} both coloured 1"
            ),
            ScarcityViolation::DomRanks { i1, i2, l, j_a, j_b } => write!(
                f,
                "dom({i1},*,{i2},{l}): ranks {j_a} and {j_b} both coloured 1"
            ),
        }
    }
}

/// Convenience: layer of a point relative to a universe bound.
pub fn layer_in(delta: &Ordinal, a: &Ordinal) -> Result<LayerId, ColouringError> {
    Ok(LayerId::new(delta.cnf_cut(a)?, a.cb_rank()?))
}
