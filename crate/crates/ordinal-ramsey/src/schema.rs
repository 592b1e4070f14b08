//! Affine families of ordinals, symbolic suprema, family-level edge
//! verdicts, and the template obstruction suite.
//!
//! An [`AffineSeq`] is a sequence `i -> sum w^e * (a_e * i + b_e)` of
//! ordinals indexed by naturals `i >= i_min`.  These describe layer
//! tails, fan enumerations, and candidate vertex families; their
//! suprema are computed symbolically and their pairwise edge behaviour
//! under a clause graph is decided by interval analysis of the affine
//! constraint forms.
//!
//! The obstruction suite ([`claim2_suite`]) enumerates, for a universe
//! `w^3 + w^2*n`, every template `(tau layer, A-rank, B-layer)` a
//! hypothetical increasing copy of the doubled order type would have to
//! realise, and rules each out by one of three mechanisms: the B-tail
//! is wholly joined to `tau` itself, or to every A-candidate below
//! `tau`, or the A-fan's deep members dominate the B-tail (driver
//! analysis).  A template none of the mechanisms covers is reported
//! unresolved — on the distinguished graph there are none.

use std::fmt;

use thiserror::Error;

use crate::graph::{ClauseGraph, EdgeClause, GraphError};
use crate::linear::{NormRel, Side};
use crate::ordinal::{LayerId, Ordinal, OrdinalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemaError {
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("syntax error in family at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("family term w^{exp} has coefficient {a}*i{b:+} which is not positive at i = {i_min}")]
    NonPositiveCoeff { exp: u32, a: u64, b: i64, i_min: u64 },
    #[error("family has duplicate exponent {0}")]
    DuplicateExp(u32),
    #[error("family is constant (no coefficient grows with i), its supremum is not a limit of the family")]
    NotIncreasing,
    #[error("families collide: member {0} appears in both")]
    FamilyCollision(String),
    #[error("families are not uniformly ordered; pointwise analysis unsupported")]
    NotUniformlyOrdered,
    #[error("unsupported universe {0}: expected w^3 + w^2*n with n >= 1")]
    UnsupportedUniverse(String),
}

/// Coefficient `a*i + b`, constant when `a == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineCoeff {
    pub a: u64,
    pub b: i64,
}

impl AffineCoeff {
    pub fn constant(b: u64) -> Self {
        AffineCoeff { a: 0, b: b as i64 }
    }

    pub fn at(&self, i: u64) -> u64 {
        (self.a as i64 * i as i64 + self.b) as u64
    }
}

/// A family of ordinals `i -> sum w^e * (a_e * i + b_e)`, `i >= i_min`,
/// with every present coefficient positive throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSeq {
    /// `(exponent, coefficient)`, exponents strictly decreasing.
    pub terms: Vec<(u32, AffineCoeff)>,
    pub i_min: u64,
}

impl AffineSeq {
    pub fn new(
        terms: impl IntoIterator<Item = (u32, AffineCoeff)>,
        i_min: u64,
    ) -> Result<Self, SchemaError> {
        let mut terms: Vec<(u32, AffineCoeff)> = terms.into_iter().collect();
        terms.sort_by(|x, y| y.0.cmp(&x.0));
        for pair in terms.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(SchemaError::DuplicateExp(pair[0].0));
            }
        }
        for &(exp, c) in &terms {
            if c.a as i64 * i_min as i64 + c.b < 1 {
                return Err(SchemaError::NonPositiveCoeff {
                    exp,
                    a: c.a,
                    b: c.b,
                    i_min,
                });
            }
        }
        Ok(AffineSeq { terms, i_min })
    }

    pub fn instantiate(&self, i: u64) -> Ordinal {
        debug_assert!(i >= self.i_min);
        Ordinal::from_terms(self.terms.iter().map(|&(e, c)| (e, c.at(i))))
    }

    /// Exact supremum: with `h` the highest exponent whose coefficient
    /// grows with `i`, the members are cofinal in `P + w^(h+1)` where
    /// `P` collects the constant terms above `h` (everything at or
    /// below `h` is absorbed in the limit).
    pub fn symbolic_sup(&self) -> Result<Ordinal, SchemaError> {
        let h = self
            .terms
            .iter()
            .filter(|&&(_, c)| c.a > 0)
            .map(|&(e, _)| e)
            .max()
            .ok_or(SchemaError::NotIncreasing)?;
        let prefix = Ordinal::from_terms(
            self.terms
                .iter()
                .filter(|&&(e, _)| e > h)
                .map(|&(e, c)| (e, c.at(self.i_min))),
        );
        Ok(prefix.add(&Ordinal::omega_pow(h + 1, 1)))
    }

    /// Parses `w^2*(i+1)+w*1`-style text: terms as in the ordinal
    /// grammar but with `( [NAT *] i [+|- NAT] )` coefficients allowed;
    /// an optional trailing `| i >= N` sets `i_min` (default 1).
    pub fn parse(input: &str) -> Result<Self, SchemaError> {
        let (body, i_min) = match input.split_once('|') {
            None => (input, 1),
            Some((body, cond)) => {
                let cond = cond.trim();
                let n = cond
                    .strip_prefix("i")
                    .map(str::trim_start)
                    .and_then(|s| s.strip_prefix(">="))
                    .and_then(|s| s.trim().parse::<u64>().ok())
                    .ok_or_else(|| SchemaError::Syntax {
                        pos: input.len() - cond.len(),
                        msg: format!("expected `i >= N` after `|`, found `{cond}`"),
                    })?;
                (body, n)
            }
        };
        let mut p = SeqParser {
            bytes: body.as_bytes(),
            pos: 0,
        };
        let mut terms = Vec::new();
        terms.push(p.parse_term()?);
        loop {
            p.skip_ws();
            match p.peek() {
                None => break,
                Some(b'+') => {
                    p.pos += 1;
                    terms.push(p.parse_term()?);
                }
                Some(c) => {
                    return Err(SchemaError::Syntax {
                        pos: p.pos,
                        msg: format!("expected `+` or end of family, found `{}`", c as char),
                    })
                }
            }
        }
        AffineSeq::new(terms, i_min)
    }
}

impl fmt::Display for AffineSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, &(e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, "+")?;
            }
            let coeff = if c.a == 0 {
                if c.b == 1 && e > 0 {
                    None
                } else {
                    Some(format!("{}", c.b))
                }
            } else {
                let mut s = String::from("(");
                if c.a != 1 {
                    s.push_str(&format!("{}*", c.a));
                }
                s.push('i');
                match c.b.cmp(&0) {
                    std::cmp::Ordering::Greater => s.push_str(&format!("+{}", c.b)),
                    std::cmp::Ordering::Less => s.push_str(&format!("{}", c.b)),
                    std::cmp::Ordering::Equal => {}
                }
                s.push(')');
                Some(s)
            };
            match (e, coeff) {
                (0, Some(s)) => write!(f, "{s}")?,
                (0, None) => write!(f, "1")?,
                (1, None) => write!(f, "w")?,
                (1, Some(s)) => write!(f, "w*{s}")?,
                (e, None) => write!(f, "w^{e}")?,
                (e, Some(s)) => write!(f, "w^{e}*{s}")?,
            }
        }
        if self.i_min != 1 {
            write!(f, " | i >= {}", self.i_min)?;
        }
        Ok(())
    }
}

struct SeqParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> SeqParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse_nat(&mut self) -> Result<u64, SchemaError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(SchemaError::Syntax {
                pos: self.pos,
                msg: "expected a number".into(),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| SchemaError::Syntax {
                pos: start,
                msg: "number too large".into(),
            })
    }

    /// `NAT | "(" [NAT "*"] "i" [("+"|"-") NAT] ")" `
    fn parse_coeff(&mut self) -> Result<AffineCoeff, SchemaError> {
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Ok(AffineCoeff::constant(self.parse_nat()?));
        }
        self.pos += 1;
        self.skip_ws();
        let a = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.parse_nat()?;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                n
            } else {
                // constant inside parens
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    return Ok(AffineCoeff::constant(n));
                }
                return Err(SchemaError::Syntax {
                    pos: self.pos,
                    msg: "expected `*i` or `)`".into(),
                });
            }
        } else {
            1
        };
        if self.peek() != Some(b'i') {
            return Err(SchemaError::Syntax {
                pos: self.pos,
                msg: "expected `i`".into(),
            });
        }
        self.pos += 1;
        self.skip_ws();
        let b = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                self.parse_nat()? as i64
            }
            Some(b'-') => {
                self.pos += 1;
                -(self.parse_nat()? as i64)
            }
            _ => 0,
        };
        self.skip_ws();
        if self.peek() != Some(b')') {
            return Err(SchemaError::Syntax {
                pos: self.pos,
                msg: "expected `)`".into(),
            });
        }
        self.pos += 1;
        Ok(AffineCoeff { a, b })
    }

    fn parse_term(&mut self) -> Result<(u32, AffineCoeff), SchemaError> {
        self.skip_ws();
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                self.skip_ws();
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.parse_nat()? as u32
                } else {
                    1
                };
                self.skip_ws();
                let coeff = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.parse_coeff()?
                } else {
                    AffineCoeff::constant(1)
                };
                Ok((exp, coeff))
            }
            _ => Ok((0, self.parse_coeff()?)),
        }
    }
}

/// Quantifier pattern for a family-pair edge check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// Every sampled pair is an edge.
    ForallForall,
    /// Every left member among the first `bound/2` sampled is joined to
    /// a final segment of the sampled right range (the left sample is
    /// halved so tails that start later for later members still fit in
    /// the window).
    ForallExistsTail,
    /// Every right member in the second quarter of the sampled range
    /// has at least one edge partner in the left sample (a bounded
    /// stand-in for "infinitely many right members participate"; the
    /// band leaves window headroom for partners of diagonal-shaped
    /// relations).
    ExistsInfinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyEdgeReport {
    pub mode: FamilyMode,
    pub bound: u64,
    pub verdict: bool,
    /// Failing `(left index, right index)` under ForallForall, or the
    /// failing index on the relevant side otherwise.
    pub counterexample: Option<(u64, u64)>,
    /// Under ForallExistsTail: per left index, the first right index
    /// from which edges hold to the end of the sample.
    pub tail_starts: Option<Vec<(u64, u64)>>,
}

/// Checks edges between two families by pointwise instantiation over
/// `bound` sampled indices per side.
pub fn edge_on_families(
    g: &ClauseGraph,
    s: &AffineSeq,
    t: &AffineSeq,
    mode: FamilyMode,
    bound: u64,
) -> Result<FamilyEdgeReport, SchemaError> {
    let is_: Vec<u64> = (0..bound).map(|r| s.i_min + r).collect();
    let js: Vec<u64> = (0..bound).map(|r| t.i_min + r).collect();
    let sp: Vec<Ordinal> = is_.iter().map(|&i| s.instantiate(i)).collect();
    let tp: Vec<Ordinal> = js.iter().map(|&j| t.instantiate(j)).collect();
    for a in &sp {
        if tp.contains(a) {
            return Err(SchemaError::FamilyCollision(a.to_string()));
        }
    }
    let edge = |ai: usize, bj: usize| -> Result<bool, SchemaError> {
        Ok(g.edge(&sp[ai], &tp[bj])?)
    };
    match mode {
        FamilyMode::ForallForall => {
            for (ai, &i) in is_.iter().enumerate() {
                for (bj, &j) in js.iter().enumerate() {
                    if !edge(ai, bj)? {
                        return Ok(FamilyEdgeReport {
                            mode,
                            bound,
                            verdict: false,
                            counterexample: Some((i, j)),
                            tail_starts: None,
                        });
                    }
                }
            }
            Ok(FamilyEdgeReport {
                mode,
                bound,
                verdict: true,
                counterexample: None,
                tail_starts: None,
            })
        }
        FamilyMode::ForallExistsTail => {
            let mut tails = Vec::new();
            let left_count = (is_.len() / 2).max(1);
            for (ai, &i) in is_.iter().enumerate().take(left_count) {
                let mut start = None;
                for bj in (0..js.len()).rev() {
                    if edge(ai, bj)? {
                        start = Some(js[bj]);
                    } else {
                        break;
                    }
                }
                match start {
                    Some(j0) => tails.push((i, j0)),
                    None => {
                        return Ok(FamilyEdgeReport {
                            mode,
                            bound,
                            verdict: false,
                            counterexample: Some((i, *js.last().unwrap())),
                            tail_starts: Some(tails),
                        })
                    }
                }
            }
            Ok(FamilyEdgeReport {
                mode,
                bound,
                verdict: true,
                counterexample: None,
                tail_starts: Some(tails),
            })
        }
        FamilyMode::ExistsInfinite => {
            let band = (js.len() / 4).max(1);
            for (bj, &j) in js.iter().enumerate().skip(band).take(band) {
                let mut hit = false;
                for ai in 0..is_.len() {
                    if edge(ai, bj)? {
                        hit = true;
                        break;
                    }
                }
                if !hit {
                    return Ok(FamilyEdgeReport {
                        mode,
                        bound,
                        verdict: false,
                        counterexample: Some((0, j)),
                        tail_starts: None,
                    });
                }
            }
            Ok(FamilyEdgeReport {
                mode,
                bound,
                verdict: true,
                counterexample: None,
                tail_starts: None,
            })
        }
    }
}

/// Outcome of the exact family-domination analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OppressDecision {
    /// Every right member is joined to a cofinite set of left members.
    pub oppress: bool,
    /// Every left member is joined to a cofinite set of right members.
    pub harass: bool,
    /// Failing member's index (right side for oppress, left for
    /// harass), when either verdict is false.
    pub counterexample: Option<(OppressSide, u64)>,
    /// Clause justifying the verdicts, if one applies.
    pub via_clause: Option<EdgeClause>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OppressSide {
    Left,
    Right,
}

/// Decides, exactly, whether the left family eventually dominates each
/// right member (`oppress`) and vice versa (`harass`), by interval
/// analysis of the affine clause constraints composed with the family
/// coefficients.  Requires the families to be uniformly ordered (one
/// family's supremum at or below the other's first member); cover
/// edges join at most one partner per member and cannot affect
/// cofiniteness, so only the clause matters.
pub fn decide_oppress(
    g: &ClauseGraph,
    left: &AffineSeq,
    right: &AffineSeq,
    _bound: u64,
) -> Result<OppressDecision, SchemaError> {
    // Uniform orientation: lo family entirely below hi family.
    let (lo, hi, left_is_lo) = if left.symbolic_sup()? <= right.instantiate(right.i_min) {
        (left, right, true)
    } else if right.symbolic_sup()? <= left.instantiate(left.i_min) {
        (right, left, false)
    } else {
        return Err(SchemaError::NotUniformlyOrdered);
    };
    let lo_layer = g.layer_of(&lo.instantiate(lo.i_min))?;
    let hi_layer = g.layer_of(&hi.instantiate(hi.i_min))?;
    let clause = g
        .clauses
        .iter()
        .find(|c| c.src == lo_layer && c.dst == hi_layer);

    // Index variables: u = lo index, v = hi index.  Compose each
    // constraint into alpha*u + beta*v + gamma REL 0.
    let composed: Option<Vec<(i64, i64, i64, NormRel)>> = clause.map(|c| {
        c.constraints
            .iter()
            .map(|k| {
                let (form, rel) = k.normalized();
                let mut alpha = 0i64;
                let mut beta = 0i64;
                let mut gamma = form.constant;
                for (&var, &scale) in &form.coeffs {
                    let fam = match var.side {
                        Side::Lo => lo,
                        Side::Hi => hi,
                    };
                    let coeff = fam
                        .terms
                        .iter()
                        .find(|&&(e, _)| e == var.exp)
                        .map(|&(_, c)| c)
                        .unwrap_or(AffineCoeff::constant(0));
                    gamma += scale * coeff.b;
                    if var.side == Side::Lo {
                        alpha += scale * coeff.a as i64;
                    } else {
                        beta += scale * coeff.a as i64;
                    }
                }
                (alpha, beta, gamma, rel)
            })
            .collect()
    });

    // "Lo dominates each hi member": for every v, { u : edge } cofinite.
    let lo_dominates = |constraints: &Option<Vec<(i64, i64, i64, NormRel)>>| -> (bool, Option<u64>) {
        let Some(cs) = constraints else {
            return (false, Some(hi.i_min));
        };
        for &(alpha, beta, gamma, rel) in cs {
            if rel == NormRel::Zero {
                if alpha != 0 || beta != 0 || gamma != 0 {
                    return (false, Some(hi.i_min));
                }
                continue;
            }
            if alpha > 0 {
                // Upper bound on u: never cofinite.
                return (false, Some(hi.i_min));
            }
            if alpha == 0 {
                // Must hold for every v >= v_min; the form is beta*v+gamma.
                let worst = |v: i64| beta * v + gamma;
                let holds = |x: i64| match rel {
                    NormRel::Neg => x < 0,
                    NormRel::NonPos => x <= 0,
                    NormRel::Zero => unreachable!(),
                };
                if beta > 0 {
                    // Fails from some v on.
                    let v_bad = (hi.i_min as i64).max(-gamma / beta - 1);
                    let mut v = v_bad;
                    while holds(worst(v)) {
                        v += 1;
                    }
                    return (false, Some(v as u64));
                }
                if !holds(worst(hi.i_min as i64)) {
                    return (false, Some(hi.i_min));
                }
            }
            // alpha < 0: eventually true in u for every v.
        }
        (true, None)
    };
    // "Hi dominates each lo member": for every u, { v : edge } cofinite.
    let hi_dominates = |constraints: &Option<Vec<(i64, i64, i64, NormRel)>>| -> (bool, Option<u64>) {
        let Some(cs) = constraints else {
            return (false, Some(lo.i_min));
        };
        for &(alpha, beta, gamma, rel) in cs {
            if rel == NormRel::Zero {
                if alpha != 0 || beta != 0 || gamma != 0 {
                    return (false, Some(lo.i_min));
                }
                continue;
            }
            if beta > 0 {
                return (false, Some(lo.i_min));
            }
            if beta == 0 {
                let worst = |u: i64| alpha * u + gamma;
                let holds = |x: i64| match rel {
                    NormRel::Neg => x < 0,
                    NormRel::NonPos => x <= 0,
                    NormRel::Zero => unreachable!(),
                };
                if alpha > 0 {
                    let mut u = (lo.i_min as i64).max(-gamma / alpha - 1);
                    while holds(worst(u)) {
                        u += 1;
                    }
                    return (false, Some(u as u64));
                }
                if !holds(worst(lo.i_min as i64)) {
                    return (false, Some(lo.i_min));
                }
            }
        }
        (true, None)
    };

    // oppress: left dominates each right member; harass: right-ward.
    let (oppress, opp_cex) = if left_is_lo {
        lo_dominates(&composed)
    } else {
        hi_dominates(&composed)
    };
    let (harass, har_cex) = if left_is_lo {
        hi_dominates(&composed)
    } else {
        lo_dominates(&composed)
    };
    let counterexample = if !oppress {
        opp_cex.map(|v| (OppressSide::Right, v))
    } else if !harass {
        har_cex.map(|v| (OppressSide::Left, v))
    } else {
        None
    };
    Ok(OppressDecision {
        oppress,
        harass,
        counterexample,
        via_clause: clause.cloned(),
    })
}

// ---------------------------------------------------------------------
// Template obstruction suite
// ---------------------------------------------------------------------

/// How a template was ruled out (or not).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateOutcome {
    /// Rank-0 layers have no fan; rank handled structurally.
    RankExcludedStructural,
    /// The fan directly below `tau` is wholly joined to `tau`.
    RankExcludedFan,
    /// Every B-layer point above `tau` is joined to `tau` itself.
    BTailDominatedByTau,
    /// Every A-candidate below `tau` is joined to a cofinite set of the
    /// (one-parameter) B-layer.
    BTailDominatedByEveryA,
    /// Deep A-fan members (driver analysis) dominate every B-point.
    AOppressesB,
    /// No mechanism applied.
    TemplateUnresolved,
}

impl fmt::Display for TemplateOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TemplateOutcome::RankExcludedStructural | TemplateOutcome::RankExcludedFan => {
                "RankExcluded"
            }
            TemplateOutcome::BTailDominatedByTau => "BTailDominatedByTau",
            TemplateOutcome::BTailDominatedByEveryA => "BTailDominatedByEveryA",
            TemplateOutcome::AOppressesB => "AOppressesB",
            TemplateOutcome::TemplateUnresolved => "TemplateUnresolved",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateReport {
    pub tau_layer: LayerId,
    /// Generic form of the tau layer, e.g. `w^2*(i)` or a single point.
    pub tau_text: String,
    pub j_a: u32,
    /// 0 for the collapsed fan/structural templates.
    pub i_b: usize,
    pub l_b: u32,
    pub outcome: TemplateOutcome,
    pub bound: u64,
}

impl TemplateReport {
    pub fn line(&self) -> String {
        format!(
            "TEMPLATE tau={} jA={} iB={} lB={} => {} bound={}",
            self.tau_text, self.j_a, self.i_b, self.l_b, self.outcome, self.bound
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim2Report {
    pub theta: Ordinal,
    pub templates: Vec<TemplateReport>,
}

impl Claim2Report {
    pub fn all_resolved(&self) -> bool {
        self.templates
            .iter()
            .all(|t| t.outcome != TemplateOutcome::TemplateUnresolved)
    }

    pub fn lines(&self) -> Vec<String> {
        self.templates.iter().map(|t| t.line()).collect()
    }
}

/// A layer's generic point: fixed terms plus free coefficient slots
/// (exponent, minimum value).
#[derive(Debug, Clone)]
struct SymbolicLayer {
    layer: LayerId,
    fixed: Vec<(u32, u64)>,
    free: Vec<(u32, u64)>,
}

impl SymbolicLayer {
    fn instances(&self, bound: u64) -> Vec<Ordinal> {
        let mut out = Vec::new();
        let width = self.free.len();
        if width == 0 {
            out.push(Ordinal::from_terms(self.fixed.iter().copied()));
            return out;
        }
        let mut coeffs: Vec<u64> = self.free.iter().map(|&(_, m)| m).collect();
        loop {
            out.push(Ordinal::from_terms(
                self.fixed
                    .iter()
                    .copied()
                    .chain(self.free.iter().zip(&coeffs).map(|(&(e, _), &c)| (e, c))),
            ));
            let mut i = width;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if coeffs[i] < bound {
                    coeffs[i] += 1;
                    for j in i + 1..width {
                        coeffs[j] = self.free[j].1;
                    }
                    break;
                }
            }
        }
    }

    /// Smallest member (every free slot at its floor).
    fn min_instance(&self) -> Ordinal {
        Ordinal::from_terms(
            self.fixed
                .iter()
                .copied()
                .chain(self.free.iter().map(|&(e, m)| (e, m))),
        )
    }

    fn text(&self) -> String {
        let terms: Vec<String> = self
            .fixed
            .iter()
            .map(|&(e, c)| match (e, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "w".into(),
                (1, c) => format!("w*{c}"),
                (e, 1) => format!("w^{e}"),
                (e, c) => format!("w^{e}*{c}"),
            })
            .chain(self.free.iter().map(|&(e, m)| {
                let var = if m > 0 { "(i)" } else { "(i-1)" };
                match e {
                    0 => var.to_string(),
                    1 => format!("w*{var}"),
                    e => format!("w^{e}*{var}"),
                }
            }))
            .collect();
        terms.join("+")
    }
}

/// The universe `w^3 + w^2*n` presented by components.
struct ThetaShape {
    n: u64,
}

impl ThetaShape {
    fn of(theta: &Ordinal) -> Result<Self, SchemaError> {
        match theta.terms() {
            [(3, 1), (2, n)] if *n >= 1 => Ok(ThetaShape { n: *n }),
            _ => Err(SchemaError::UnsupportedUniverse(theta.to_string())),
        }
    }

    fn component_count(&self) -> usize {
        1 + self.n as usize
    }

    /// Rank of the component's supremum.
    fn sup_rank(&self, i: usize) -> u32 {
        if i == 1 {
            3
        } else {
            2
        }
    }

    /// Layers `(i, rank)` of the open universe, rank descending then
    /// component ascending; the final component's supremum is the
    /// universe bound and is excluded.
    fn tau_layers(&self) -> Vec<SymbolicLayer> {
        let k = self.component_count();
        let mut out = Vec::new();
        for rank in (0..=3u32).rev() {
            for i in 1..=k {
                let layer = LayerId::new(i, rank);
                let sym = match (i, rank) {
                    (1, 3) => SymbolicLayer {
                        layer,
                        fixed: vec![(3, 1)],
                        free: vec![],
                    },
                    (1, 2) => SymbolicLayer {
                        layer,
                        fixed: vec![],
                        free: vec![(2, 1)],
                    },
                    (1, 1) => SymbolicLayer {
                        layer,
                        fixed: vec![],
                        free: vec![(2, 0), (1, 1)],
                    },
                    (1, 0) => SymbolicLayer {
                        layer,
                        fixed: vec![],
                        free: vec![(2, 0), (1, 0), (0, 1)],
                    },
                    (_, 3) => continue,
                    (i, 2) => {
                        // The component's sup; a universe member only
                        // below the last component.
                        if i == k {
                            continue;
                        }
                        SymbolicLayer {
                            layer,
                            fixed: vec![(3, 1), (2, i as u64 - 1)],
                            free: vec![],
                        }
                    }
                    (i, 1) => SymbolicLayer {
                        layer,
                        fixed: prefix_terms(i),
                        free: vec![(1, 1)],
                    },
                    (i, 0) => SymbolicLayer {
                        layer,
                        fixed: prefix_terms(i),
                        free: vec![(1, 0), (0, 1)],
                    },
                    _ => unreachable!(),
                };
                out.push(sym);
            }
        }
        out
    }

    /// Generic B-layer `(i_b, l_b)` point.
    fn b_layer(&self, i_b: usize, l_b: u32) -> SymbolicLayer {
        let layer = LayerId::new(i_b, l_b);
        if i_b == 1 {
            let free: Vec<(u32, u64)> = (l_b..=2)
                .rev()
                .map(|e| (e, if e == l_b { 1 } else { 0 }))
                .collect();
            SymbolicLayer {
                layer,
                fixed: vec![],
                free,
            }
        } else {
            let free: Vec<(u32, u64)> = (l_b..=1)
                .rev()
                .map(|e| (e, if e == l_b { 1 } else { 0 }))
                .collect();
            SymbolicLayer {
                layer,
                fixed: prefix_terms(i_b),
                free,
            }
        }
    }
}

/// Fixed prefix of component `i >= 2` of `w^3 + w^2*n`: `w^3 + w^2*(i-2)`.
fn prefix_terms(i: usize) -> Vec<(u32, u64)> {
    if i == 2 {
        vec![(3, 1)]
    } else {
        vec![(3, 1), (2, i as u64 - 2)]
    }
}

/// Runs the obstruction suite for `g` on the universe
/// `theta = w^3 + w^2*n`, ruling out every copy template.
pub fn claim2_suite(
    g: &ClauseGraph,
    theta: &Ordinal,
    bound: u64,
) -> Result<Claim2Report, SchemaError> {
    let shape = ThetaShape::of(theta)?;
    let k = shape.component_count();
    let mut templates = Vec::new();

    for tau in shape.tau_layers() {
        let (i_t, j_t) = (tau.layer.component, tau.layer.rank);
        if j_t == 0 {
            templates.push(TemplateReport {
                tau_layer: tau.layer,
                tau_text: tau.text(),
                j_a: 0,
                i_b: 0,
                l_b: 0,
                outcome: TemplateOutcome::RankExcludedStructural,
                bound,
            });
            continue;
        }
        // Collapsed fan template: the fan below tau joins tau.
        let fan_ok = tau.instances(bound).iter().try_fold(true, |acc, t| {
            if !acc {
                return Ok::<bool, SchemaError>(false);
            }
            for child in t.subfan(bound)? {
                if !g.edge(&child, t)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        templates.push(TemplateReport {
            tau_layer: tau.layer,
            tau_text: tau.text(),
            j_a: j_t - 1,
            i_b: 0,
            l_b: 0,
            outcome: if fan_ok {
                TemplateOutcome::RankExcludedFan
            } else {
                TemplateOutcome::TemplateUnresolved
            },
            bound,
        });
        if j_t < 2 {
            continue;
        }
        // Substantive templates.
        for j_a in 0..=j_t - 2 {
            for i_b in i_t..=k {
                if i_b == i_t && j_t >= shape.sup_rank(i_t) {
                    continue;
                }
                for l_b in 0..shape.sup_rank(i_b) {
                    let b = shape.b_layer(i_b, l_b);
                    let outcome = decide_template(g, &tau, j_a, &b, bound)?;
                    templates.push(TemplateReport {
                        tau_layer: tau.layer,
                        tau_text: tau.text(),
                        j_a,
                        i_b,
                        l_b,
                        outcome,
                        bound,
                    });
                }
            }
        }
    }
    Ok(Claim2Report {
        theta: theta.clone(),
        templates,
    })
}

fn decide_template(
    g: &ClauseGraph,
    tau: &SymbolicLayer,
    j_a: u32,
    b: &SymbolicLayer,
    bound: u64,
) -> Result<TemplateOutcome, SchemaError> {
    // O1: every B point above tau joins tau itself.
    let mut o1 = true;
    'o1: for t in tau.instances(bound) {
        for beta in b.instances(bound) {
            if beta <= t {
                continue;
            }
            if !g.edge(&t, &beta)? {
                o1 = false;
                break 'o1;
            }
        }
    }
    if o1 {
        return Ok(TemplateOutcome::BTailDominatedByTau);
    }

    // O2: one-parameter B-layers; every A-candidate joins a cofinite
    // set of the B-layer (exact in the single B-variable).
    if b.free.len() == 1 {
        let b_exp = b.free[0].0;
        let mut o2 = true;
        'o2: for t in tau.instances(bound) {
            for a in a_instances(t.clone(), j_a, bound)? {
                if !a_joins_b_cofinitely(g, &a, b, b_exp)? {
                    o2 = false;
                    break 'o2;
                }
            }
        }
        if o2 {
            return Ok(TemplateOutcome::BTailDominatedByEveryA);
        }
    }

    // O3: driver analysis — deep A-fan members dominate every B-point.
    if o3_driver_analysis(g, tau, j_a, b, bound)? {
        return Ok(TemplateOutcome::AOppressesB);
    }
    Ok(TemplateOutcome::TemplateUnresolved)
}

/// All rank `j_a` points tree-below `tau_instance` with free
/// coefficients up to `bound`: the fan prefix of the instance plus free
/// slots at exponents `j_a .. rank(tau)-1`.
fn a_instances(tau_instance: Ordinal, j_a: u32, bound: u64) -> Result<Vec<Ordinal>, SchemaError> {
    let j_t = tau_instance.cb_rank()?;
    let prefix = tau_instance.fan_prefix()?;
    let sym = SymbolicLayer {
        layer: LayerId::new(0, j_a),
        fixed: prefix.terms().to_vec(),
        free: (j_a..j_t)
            .rev()
            .map(|e| (e, if e == j_a { 1 } else { 0 }))
            .collect(),
    };
    Ok(sym.instances(bound))
}

/// Whether `{ x : edge(a, b(x)) }` is cofinite, decided exactly from
/// the affine constraints (the clause graph's cover rule joins at most
/// one fan, which cannot affect cofiniteness).
fn a_joins_b_cofinitely(
    g: &ClauseGraph,
    a: &Ordinal,
    b: &SymbolicLayer,
    b_exp: u32,
) -> Result<bool, SchemaError> {
    let a_layer = g.layer_of(a)?;
    // The clause table is indexed by the graph's own layers; the B
    // description uses universe components, so re-derive its layer.
    let b_layer = g.layer_of(&b.min_instance())?;
    let Some(clause) = g
        .clauses
        .iter()
        .find(|c| c.src == a_layer && c.dst == b_layer)
    else {
        return Ok(false);
    };
    for k in &clause.constraints {
        let (form, rel) = k.normalized();
        // alpha * x + q
        let mut alpha = 0i64;
        let mut q = form.constant;
        for (&var, &scale) in &form.coeffs {
            match var.side {
                Side::Lo => q += scale * a.coeff(var.exp) as i64,
                Side::Hi => {
                    if var.exp == b_exp {
                        alpha += scale;
                    } else {
                        q += scale
                            * b.fixed
                                .iter()
                                .find(|&&(e, _)| e == var.exp)
                                .map(|&(_, c)| c as i64)
                                .unwrap_or(0);
                    }
                }
            }
        }
        match rel {
            NormRel::Zero => {
                if alpha != 0 || q != 0 {
                    return Ok(false);
                }
            }
            _ => {
                if alpha > 0 {
                    // Upper bound on x: edge region bounded.
                    return Ok(false);
                }
                if alpha == 0 {
                    let holds = match rel {
                        NormRel::Neg => q < 0,
                        NormRel::NonPos => q <= 0,
                        NormRel::Zero => unreachable!(),
                    };
                    if !holds {
                        return Ok(false);
                    }
                }
                // alpha < 0: eventually true.
            }
        }
    }
    Ok(true)
}

/// O3: with `D` the A-point's driver (its highest free coefficient,
/// just below `tau`'s rank), every constraint of the matching clause
/// must — for every bounded choice of the nuisance parameters — either
/// become true for large `D` (pure-A forms and driver-lowered bounds)
/// or bound its single B-coordinate above by a form growing in `D`;
/// constant lower bounds on a B-coordinate are only allowed when the
/// B-tail's own floor already meets them.
fn o3_driver_analysis(
    g: &ClauseGraph,
    tau: &SymbolicLayer,
    j_a: u32,
    b: &SymbolicLayer,
    bound: u64,
) -> Result<bool, SchemaError> {
    for t in tau.instances(bound) {
        let j_t = t.cb_rank()?;
        let driver_exp = j_t - 1;
        let prefix = t.fan_prefix()?;
        // Nuisance slots: A's free exponents strictly below the driver.
        let nuisance: Vec<(u32, u64)> = (j_a..driver_exp)
            .rev()
            .map(|e| (e, if e == j_a { 1 } else { 0 }))
            .collect();
        // Clause lookup from a representative A-instance.
        let a_repr = Ordinal::from_terms(
            prefix
                .terms()
                .iter()
                .copied()
                .chain(std::iter::once((driver_exp, 1)))
                .chain(nuisance.iter().copied()),
        );
        let a_layer = g.layer_of(&a_repr)?;
        let b_layer = g.layer_of(&b.min_instance())?;
        let Some(clause) = g
            .clauses
            .iter()
            .find(|c| c.src == a_layer && c.dst == b_layer)
        else {
            return Ok(false);
        };

        // B floors: the layer minimum, raised by the above-tau
        // requirement when B shares tau's component.
        let b_floor = |exp: u32| -> i64 {
            let base = b
                .free
                .iter()
                .find(|&&(e, _)| e == exp)
                .map(|&(_, m)| m as i64)
                .unwrap_or(0);
            if b.layer.component == tau.layer.component {
                // Same component: beta > tau forces the driver-exponent
                // coefficient of beta to reach tau's.
                if exp == j_t {
                    let tau_top = t.coeff(j_t) as i64;
                    let strictly = b.layer.rank == j_t;
                    return base.max(tau_top + strictly as i64);
                }
            }
            base
        };

        let mut nuisance_box = NuisanceBox::new(&nuisance, bound);
        while let Some(assign) = nuisance_box.next_assignment() {
            for k in &clause.constraints {
                let (form, rel) = k.normalized();
                let mut d_coeff = 0i64;
                let mut q = form.constant;
                let mut b_vars: Vec<(u32, i64)> = Vec::new();
                for (&var, &scale) in &form.coeffs {
                    match var.side {
                        Side::Lo => {
                            if var.exp == driver_exp {
                                d_coeff += scale;
                            } else if let Some(&(_, val)) =
                                assign.iter().find(|&&(e, _)| e == var.exp)
                            {
                                q += scale * val as i64;
                            } else {
                                q += scale * prefix.coeff(var.exp) as i64;
                            }
                        }
                        Side::Hi => {
                            if b.free.iter().any(|&(e, _)| e == var.exp) {
                                b_vars.push((var.exp, scale));
                            } else {
                                q += scale
                                    * b.fixed
                                        .iter()
                                        .find(|&&(e, _)| e == var.exp)
                                        .map(|&(_, c)| c as i64)
                                        .unwrap_or(0);
                            }
                        }
                    }
                }
                b_vars.sort();
                b_vars.dedup();
                let ok = match (b_vars.len(), rel) {
                    (0, NormRel::Zero) => d_coeff == 0 && q == 0,
                    (0, _) => {
                        // Pure-A: eventually true in D.
                        d_coeff < 0
                            || (d_coeff == 0
                                && match rel {
                                    NormRel::Neg => q < 0,
                                    NormRel::NonPos => q <= 0,
                                    NormRel::Zero => unreachable!(),
                                })
                    }
                    (1, NormRel::Zero) => false,
                    (1, _) => {
                        let (exp, alpha) = b_vars[0];
                        if alpha > 0 {
                            // Upper bound on the B-coordinate; admissible
                            // only when it grows with the driver.
                            d_coeff < 0
                        } else {
                            // Lower bound: admissible if it sinks with the
                            // driver, or is already met at the B floor.
                            let at_floor = alpha * b_floor(exp) + q;
                            d_coeff < 0
                                || (d_coeff == 0
                                    && match rel {
                                        NormRel::Neg => at_floor < 0,
                                        NormRel::NonPos => at_floor <= 0,
                                        NormRel::Zero => unreachable!(),
                                    })
                        }
                    }
                    _ => false,
                };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Odometer over nuisance coefficient assignments.
struct NuisanceBox {
    slots: Vec<(u32, u64)>,
    bound: u64,
    current: Vec<u64>,
    done: bool,
    started: bool,
}

impl NuisanceBox {
    fn new(slots: &[(u32, u64)], bound: u64) -> Self {
        NuisanceBox {
            slots: slots.to_vec(),
            bound,
            current: slots.iter().map(|&(_, m)| m).collect(),
            done: false,
            started: false,
        }
    }

    fn next_assignment(&mut self) -> Option<Vec<(u32, u64)>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.snapshot());
        }
        let width = self.slots.len();
        let mut i = width;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] < self.bound {
                self.current[i] += 1;
                for j in i + 1..width {
                    self.current[j] = self.slots[j].1;
                }
                return Some(self.snapshot());
            }
        }
    }

    fn snapshot(&self) -> Vec<(u32, u64)> {
        self.slots
            .iter()
            .zip(&self.current)
            .map(|(&(e, _), &v)| (e, v))
            .collect()
    }
}
