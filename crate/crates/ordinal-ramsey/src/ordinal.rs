//! Ordinals below `w^w` in Cantor normal form, the anti-tree order, and
//! window/layer enumeration.
//!
//! An ordinal is kept as its Cantor normal form `w^g1*m1 + ... + w^gl*ml`
//! with strictly decreasing natural exponents and positive coefficients;
//! the empty list is 0.  Two derived quantities drive everything else:
//! `cb_rank` (the last exponent, the Cantor–Bendixson rank of the point
//! inside any closed interval of ordinals) and `n_of` (the last
//! coefficient, the 1-based position of the point inside its fan).

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("operation `{0}` is undefined on the ordinal 0")]
    ZeroOrdinal(&'static str),
    #[error("operation `{op}` needs cb_rank >= 1, got rank 0 point {point}")]
    RankZero { op: &'static str, point: String },
    #[error("{point} is not below the universe bound {delta}")]
    OutOfUniverse { point: String, delta: String },
    #[error("component index {index} out of range 1..={count}")]
    ComponentRange { index: usize, count: usize },
    #[error("coefficient overflow in {0}")]
    Overflow(&'static str),
}

/// An ordinal `< w^w` in Cantor normal form.
///
/// Terms are `(exponent, coefficient)` pairs with exponents strictly
/// decreasing and coefficients positive.  The derived `Ord` on the term
/// vector coincides with the ordinal order, so it is used directly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    /// `w^exp * coeff`; zero when `coeff == 0`.
    pub fn omega_pow(exp: u32, coeff: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(exp, coeff)] }
        }
    }

    /// Builds from `(exponent, coefficient)` pairs in any order; merges
    /// duplicate exponents by ordinary addition of coefficients and drops
    /// zero coefficients.  This is a constructor, not ordinal addition.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u64)>) -> Self {
        let mut v: Vec<(u32, u64)> = terms.into_iter().filter(|&(_, c)| c != 0).collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let mut merged: Vec<(u32, u64)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match merged.last_mut() {
                Some(last) if last.0 == e => {
                    last.1 = last.1.checked_add(c).expect("coefficient overflow");
                }
                _ => merged.push((e, c)),
            }
        }
        Ordinal { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms of the normal form, highest exponent first.
    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    /// Leading exponent; 0 for naturals and for 0 itself.
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |&(e, _)| e)
    }

    /// Coefficient at a given exponent (0 when the term is absent).
    pub fn coeff(&self, exp: u32) -> u64 {
        self.terms
            .iter()
            .find(|&&(e, _)| e == exp)
            .map_or(0, |&(_, c)| c)
    }

    /// Cantor–Bendixson rank: the last (smallest) exponent of the normal
    /// form.  Undefined on 0.
    pub fn cb_rank(&self) -> Result<u32, OrdinalError> {
        self.terms
            .last()
            .map(|&(e, _)| e)
            .ok_or(OrdinalError::ZeroOrdinal("cb_rank"))
    }

    /// Position in its fan: the last coefficient of the normal form.
    /// Undefined on 0.
    pub fn n_of(&self) -> Result<u64, OrdinalError> {
        self.terms
            .last()
            .map(|&(_, c)| c)
            .ok_or(OrdinalError::ZeroOrdinal("n_of"))
    }

    /// Ordinal addition (left absorption below the leading exponent of
    /// `rhs`).
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(&(e, c)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut out: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .take_while(|&(ex, _)| ex > e)
            .collect();
        let merged = if self.terms.iter().any(|&(ex, _)| ex == e) {
            self.coeff(e).checked_add(c).expect("coefficient overflow")
        } else {
            c
        };
        out.push((e, merged));
        out.extend(rhs.terms.iter().skip(1).copied());
        Ordinal { terms: out }
    }

    /// Three-way ordinal comparison (same as the derived `Ord`).
    pub fn compare(&self, rhs: &Ordinal) -> Ordering {
        self.cmp(rhs)
    }

    /// `self` with the last coefficient decremented (term dropped when it
    /// reaches zero).  This is the parent prefix shared by the whole fan
    /// containing `self`.  Undefined on 0.
    pub fn fan_prefix(&self) -> Result<Ordinal, OrdinalError> {
        let mut t = self.terms.clone();
        let last = t.last_mut().ok_or(OrdinalError::ZeroOrdinal("fan_prefix"))?;
        if last.1 == 1 {
            t.pop();
        } else {
            last.1 -= 1;
        }
        Ok(Ordinal { terms: t })
    }

    /// Reflexive anti-tree order: true iff `self == above`, or
    /// `above = self + w^g` for some natural `g > cb_rank(self)`.
    /// Errors on 0 (which the order virtually omits).
    pub fn tree_leq(&self, above: &Ordinal) -> Result<bool, OrdinalError> {
        if self.is_zero() || above.is_zero() {
            return Err(OrdinalError::ZeroOrdinal("tree_leq"));
        }
        if self == above {
            return Ok(true);
        }
        // If above = self + w^g with g > cb_rank(self), then g is forced to
        // be the last exponent of `above`, so one addition decides it.
        let g = above.cb_rank()?;
        if g <= self.cb_rank()? {
            return Ok(false);
        }
        Ok(self.add(&Ordinal::omega_pow(g, 1)) == *above)
    }

    /// Strict anti-tree order.
    pub fn tree_lt(&self, above: &Ordinal) -> Result<bool, OrdinalError> {
        Ok(self != above && self.tree_leq(above)?)
    }

    /// The unique immediate anti-tree successor: `self + w^(cb_rank+1)`.
    pub fn cover(&self) -> Result<Ordinal, OrdinalError> {
        let r = self
            .terms
            .last()
            .map(|&(e, _)| e)
            .ok_or(OrdinalError::ZeroOrdinal("cover"))?;
        Ok(self.add(&Ordinal::omega_pow(r + 1, 1)))
    }

    /// First `count` members of the fan directly below `self`: the points
    /// whose cover is `self`.  They are `fan_prefix(self) + w^(r-1)*(i+1)`
    /// where `r = cb_rank(self)`, which must be at least 1.
    pub fn subfan(&self, count: u64) -> Result<Vec<Ordinal>, OrdinalError> {
        let r = self.cb_rank()?;
        if r == 0 {
            return Err(OrdinalError::RankZero {
                op: "subfan",
                point: self.to_string(),
            });
        }
        let prefix = self.fan_prefix()?;
        let mut out = Vec::with_capacity(count as usize);
        for i in 1..=count {
            out.push(prefix.add(&Ordinal::omega_pow(r - 1, i)));
        }
        Ok(out)
    }

    /// First `count` members of the fan containing `self`
    /// (`subfan(cover(self))`); `self` is its `n_of`-th member.
    pub fn fan_of(&self, count: u64) -> Result<Vec<Ordinal>, OrdinalError> {
        self.cover()?.subfan(count)
    }

    /// Walks the cover chain from `self` upward and returns the chain
    /// `[self, cover(self), ...]` up to and including `top`, or `None`
    /// when `self` is not tree-below `top`.
    pub fn cover_chain_to(&self, top: &Ordinal) -> Result<Option<Vec<Ordinal>>, OrdinalError> {
        if self.is_zero() || top.is_zero() {
            return Err(OrdinalError::ZeroOrdinal("cover_chain_to"));
        }
        let mut chain = vec![self.clone()];
        let mut cur = self.clone();
        while cur != *top {
            if cur > *top || cur.cb_rank()? >= top.cb_rank()? {
                return Ok(None);
            }
            cur = cur.cover()?;
            chain.push(cur.clone());
        }
        Ok(Some(chain))
    }

    /// Number of terms of the first-form (expanded) normal form, i.e. the
    /// sum of all coefficients.  Undefined on 0.
    pub fn k_delta(&self) -> Result<u64, OrdinalError> {
        if self.is_zero() {
            return Err(OrdinalError::ZeroOrdinal("k_delta"));
        }
        Ok(self.terms.iter().map(|&(_, c)| c).sum())
    }

    /// Partial sums of the expanded normal form: `prefix(i)` for
    /// `i = 1..=k_delta`, so `prefix(k_delta) = self`.
    pub fn expanded_prefixes(&self) -> Result<Vec<Ordinal>, OrdinalError> {
        if self.is_zero() {
            return Err(OrdinalError::ZeroOrdinal("expanded_prefixes"));
        }
        let mut out = Vec::new();
        let mut acc = Ordinal::zero();
        for &(e, c) in &self.terms {
            for _ in 0..c {
                acc = acc.add(&Ordinal::omega_pow(e, 1));
                out.push(acc.clone());
            }
        }
        Ok(out)
    }

    /// `cnf_cut(delta, beta)`: least `i >= 1` with `beta <= prefix(i)` of
    /// the expanded normal form of `delta`.  Requires `0 < beta < delta`
    /// or `beta <= delta` for the top prefix; errors when `beta` exceeds
    /// `delta`.
    pub fn cnf_cut(&self, beta: &Ordinal) -> Result<usize, OrdinalError> {
        if beta.is_zero() {
            return Err(OrdinalError::ZeroOrdinal("cnf_cut"));
        }
        for (i, p) in self.expanded_prefixes()?.iter().enumerate() {
            if beta <= p {
                return Ok(i + 1);
            }
        }
        Err(OrdinalError::OutOfUniverse {
            point: beta.to_string(),
            delta: self.to_string(),
        })
    }

    /// Bounds `(lo, hi)` of the `i`-th cut component of this universe:
    /// membership is `lo < beta <= hi`, except that the last component is
    /// open at the top (`beta < hi = delta`).
    pub fn component(&self, i: usize) -> Result<(Ordinal, Ordinal), OrdinalError> {
        let prefixes = self.expanded_prefixes()?;
        if i == 0 || i > prefixes.len() {
            return Err(OrdinalError::ComponentRange {
                index: i,
                count: prefixes.len(),
            });
        }
        let lo = if i == 1 {
            Ordinal::zero()
        } else {
            prefixes[i - 2].clone()
        };
        Ok((lo, prefixes[i - 1].clone()))
    }

    /// Supremum of the `i`-th cut component (`prefix(i)`); it is a member
    /// of the component for `i < k_delta` and equals the universe bound
    /// for `i = k_delta`.
    pub fn component_sup(&self, i: usize) -> Result<Ordinal, OrdinalError> {
        Ok(self.component(i)?.1)
    }

    /// Parses the textual grammar:
    /// `expr := term ("+" term)* | "0"`,
    /// `term := "w" ("^" NAT)? ("*" POSNAT)? | POSNAT`, whitespace ignored.
    /// Terms may appear in any order and are normalised by ordinal
    /// addition left to right.
    pub fn parse(input: &str) -> Result<Ordinal, OrdinalError> {
        let mut p = Parser {
            bytes: input.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        if p.peek() == Some(b'0') {
            let save = p.pos;
            p.pos += 1;
            p.skip_ws();
            if p.pos == p.bytes.len() {
                return Ok(Ordinal::zero());
            }
            p.pos = save;
        }
        let mut acc = p.parse_term()?;
        loop {
            p.skip_ws();
            match p.peek() {
                None => return Ok(acc),
                Some(b'+') => {
                    p.pos += 1;
                    let t = p.parse_term()?;
                    acc = acc.add(&t);
                }
                Some(c) => {
                    return Err(OrdinalError::Syntax {
                        pos: p.pos,
                        msg: format!("expected `+` or end of input, found `{}`", c as char),
                    })
                }
            }
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse_nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(OrdinalError::Syntax {
                pos: self.pos,
                msg: "expected a number".into(),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| OrdinalError::Overflow("parse"))
    }

    fn parse_term(&mut self) -> Result<Ordinal, OrdinalError> {
        self.skip_ws();
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                self.skip_ws();
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let e = self.parse_nat()?;
                    u32::try_from(e).map_err(|_| OrdinalError::Overflow("exponent"))?
                } else {
                    1
                };
                self.skip_ws();
                let coeff = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let c = self.parse_nat()?;
                    if c == 0 {
                        return Err(OrdinalError::Syntax {
                            pos: self.pos,
                            msg: "coefficient must be positive".into(),
                        });
                    }
                    c
                } else {
                    1
                };
                Ok(Ordinal::omega_pow(exp, coeff))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_nat()?;
                if n == 0 {
                    return Err(OrdinalError::Syntax {
                        pos: self.pos,
                        msg: "0 is only valid as the whole expression".into(),
                    });
                }
                Ok(Ordinal::nat(n))
            }
            other => Err(OrdinalError::Syntax {
                pos: self.pos,
                msg: format!(
                    "expected `w` or a number, found {}",
                    other.map_or("end of input".to_string(), |c| format!("`{}`", c as char))
                ),
            }),
        }
    }
}

impl fmt::Display for Ordinal {
    /// Canonical output: highest exponent first, `^1` and `*1` omitted,
    /// `w^0*m` printed as `m`, zero printed as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

/// Identifies a layer: the points of cut component `component` whose
/// cb_rank is `rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LayerId {
    pub component: usize,
    pub rank: u32,
}

impl LayerId {
    pub fn new(component: usize, rank: u32) -> Self {
        LayerId { component, rank }
    }
}

impl fmt::Display for LayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.component, self.rank)
    }
}

/// A finite enumeration scale: the points `0 < a < delta` all of whose
/// normal-form coefficients are at most `coeff_bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub delta: Ordinal,
    pub coeff_bound: u64,
}

impl Window {
    pub fn new(delta: Ordinal, coeff_bound: u64) -> Self {
        Window { delta, coeff_bound }
    }

    pub fn contains(&self, a: &Ordinal) -> bool {
        !a.is_zero()
            && *a < self.delta
            && a.terms().iter().all(|&(_, c)| c <= self.coeff_bound)
    }

    /// All window members in increasing ordinal order.
    pub fn enumerate(&self) -> Vec<Ordinal> {
        let max_exp = self.delta.degree();
        let width = (max_exp + 1) as usize;
        let mut coeffs = vec![0u64; width];
        let mut out = Vec::new();
        loop {
            // Advance the odometer: coeffs[i] is the coefficient of w^i.
            let mut i = 0;
            loop {
                if i == width {
                    out.sort();
                    return out;
                }
                if coeffs[i] < self.coeff_bound {
                    coeffs[i] += 1;
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            let cand = Ordinal::from_terms(
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(e, &c)| (e as u32, c)),
            );
            if !cand.is_zero() && cand < self.delta {
                out.push(cand);
            }
        }
    }

    /// Window members of one layer of `delta`, in increasing order.
    pub fn layer_members(&self, layer: LayerId) -> Result<Vec<Ordinal>, OrdinalError> {
        let mut out = Vec::new();
        for a in self.enumerate() {
            if a.cb_rank()? == layer.rank && self.delta.cnf_cut(&a)? == layer.component {
                out.push(a);
            }
        }
        Ok(out)
    }
}
