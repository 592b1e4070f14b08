//! A small affine-constraint language over the normal-form coefficients
//! of one or two ordinals.
//!
//! Variables name coefficient slots by exponent: `m` is the coefficient
//! of `w^0`, `l` of `w^1`, `k` of `w^2`, and `cN` of `w^N` in general.
//! A trailing apostrophe (`k'`) addresses the second (ordinal-higher)
//! point of a pair; unprimed variables address the first (lower) point.
//! Constraints compare two affine forms with one of `<`, `<=`, `=`,
//! `>=`, `>`, e.g. `k + l + 1 < k'`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ordinal::Ordinal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("syntax error in constraint at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("constraint `{0}` mentions a primed variable but applies to a single point")]
    PrimedInSinglePoint(String),
}

/// Which point of a pair a variable addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Lo,
    Hi,
}

/// A coefficient slot: the coefficient of `w^exp` in the `side` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub side: Side,
    pub exp: u32,
}

impl Var {
    pub fn lo(exp: u32) -> Self {
        Var { side: Side::Lo, exp }
    }

    pub fn hi(exp: u32) -> Self {
        Var { side: Side::Hi, exp }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exp {
            0 => write!(f, "m")?,
            1 => write!(f, "l")?,
            2 => write!(f, "k")?,
            e => write!(f, "c{e}")?,
        }
        if self.side == Side::Hi {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// An affine form: an integer constant plus integer multiples of
/// coefficient variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinForm {
    pub constant: i64,
    pub coeffs: BTreeMap<Var, i64>,
}

impl LinForm {
    pub fn constant(c: i64) -> Self {
        LinForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(v: Var) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(v, 1);
        LinForm { constant: 0, coeffs }
    }

    pub fn add_term(&mut self, v: Var, scale: i64) {
        let entry = self.coeffs.entry(v).or_insert(0);
        *entry += scale;
        if *entry == 0 {
            self.coeffs.remove(&v);
        }
    }

    /// `self - rhs`.
    pub fn sub(&self, rhs: &LinForm) -> LinForm {
        let mut out = self.clone();
        out.constant -= rhs.constant;
        for (&v, &s) in &rhs.coeffs {
            out.add_term(v, -s);
        }
        out
    }

    pub fn coeff_of(&self, v: Var) -> i64 {
        self.coeffs.get(&v).copied().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn eval_with(&self, value: &mut dyn FnMut(Var) -> i64) -> i64 {
        self.constant
            + self
                .coeffs
                .iter()
                .map(|(&v, &s)| s * value(v))
                .sum::<i64>()
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&v, &s) in &self.coeffs {
            if s == 0 {
                continue;
            }
            if first {
                if s < 0 {
                    write!(f, "-")?;
                }
            } else if s < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if s.abs() != 1 {
                write!(f, "{}*", s.abs())?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        match (first, self.constant.cmp(&0)) {
            (true, _) => write!(f, "{}", self.constant)?,
            (false, Ordering::Greater) => write!(f, " + {}", self.constant)?,
            (false, Ordering::Less) => write!(f, " - {}", -self.constant)?,
            (false, Ordering::Equal) => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Eq => lhs == rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

/// One comparison between two affine forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: LinForm,
    pub op: CmpOp,
    pub rhs: LinForm,
}

/// The relation of a normalised constraint `form REL 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormRel {
    /// `form < 0`
    Neg,
    /// `form <= 0`
    NonPos,
    /// `form = 0`
    Zero,
}

impl Constraint {
    pub fn new(lhs: LinForm, op: CmpOp, rhs: LinForm) -> Self {
        Constraint { lhs, op, rhs }
    }

    /// Rewrites as `form REL 0` with REL one of `<`, `<=`, `=` (swapping
    /// sides for `>` and `>=`).
    pub fn normalized(&self) -> (LinForm, NormRel) {
        match self.op {
            CmpOp::Lt => (self.lhs.sub(&self.rhs), NormRel::Neg),
            CmpOp::Le => (self.lhs.sub(&self.rhs), NormRel::NonPos),
            CmpOp::Eq => (self.lhs.sub(&self.rhs), NormRel::Zero),
            CmpOp::Gt => (self.rhs.sub(&self.lhs), NormRel::Neg),
            CmpOp::Ge => (self.rhs.sub(&self.lhs), NormRel::NonPos),
        }
    }

    pub fn eval_with(&self, value: &mut dyn FnMut(Var) -> i64) -> bool {
        self.op
            .holds(self.lhs.eval_with(value), self.rhs.eval_with(value))
    }

    /// Evaluates on a pair of ordinals: unprimed variables read `lo`,
    /// primed variables read `hi`.
    pub fn eval_pair(&self, lo: &Ordinal, hi: &Ordinal) -> bool {
        self.eval_with(&mut |v: Var| {
            let point = match v.side {
                Side::Lo => lo,
                Side::Hi => hi,
            };
            point.coeff(v.exp) as i64
        })
    }

    /// Evaluates on a single ordinal (all variables must be unprimed).
    pub fn eval_point(&self, point: &Ordinal) -> Result<bool, ConstraintError> {
        self.ensure_single_point()?;
        Ok(self.eval_pair(point, point))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lhs.vars().chain(self.rhs.vars())
    }

    pub fn ensure_single_point(&self) -> Result<(), ConstraintError> {
        if self.vars().any(|v| v.side == Side::Hi) {
            return Err(ConstraintError::PrimedInSinglePoint(self.to_string()));
        }
        Ok(())
    }

    /// Parses `form (<|<=|=|>=|>) form` where
    /// `form := ["-"] item (("+"|"-") item)*` and
    /// `item := NAT | NAT "*" var | var ["*" NAT]`.
    pub fn parse(input: &str) -> Result<Constraint, ConstraintError> {
        let mut p = CParser {
            bytes: input.as_bytes(),
            pos: 0,
        };
        let lhs = p.parse_form()?;
        let op = p.parse_op()?;
        let rhs = p.parse_form()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(ConstraintError::Syntax {
                pos: p.pos,
                msg: "trailing input after constraint".into(),
            });
        }
        Ok(Constraint { lhs, op, rhs })
    }

    /// Parses a comma-separated conjunction of constraints; the empty
    /// string denotes the empty (always-true) conjunction.
    pub fn parse_list(input: &str) -> Result<Vec<Constraint>, ConstraintError> {
        let trimmed = input.trim();
        if trimmed.is_empty() {
            return Ok(Vec::new());
        }
        trimmed.split(',').map(Constraint::parse).collect()
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

/// Formats a conjunction the way `Constraint::parse_list` reads it.
pub fn format_list(constraints: &[Constraint]) -> String {
    constraints
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

struct CParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> CParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse_nat(&mut self) -> Result<i64, ConstraintError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ConstraintError::Syntax {
                pos: self.pos,
                msg: "expected a number".into(),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| ConstraintError::Syntax {
                pos: start,
                msg: "number too large".into(),
            })
    }

    fn parse_var(&mut self) -> Result<Var, ConstraintError> {
        let exp = match self.peek() {
            Some(b'm') => {
                self.pos += 1;
                0
            }
            Some(b'l') => {
                self.pos += 1;
                1
            }
            Some(b'k') => {
                self.pos += 1;
                2
            }
            Some(b'c') => {
                self.pos += 1;
                self.parse_nat()? as u32
            }
            other => {
                return Err(ConstraintError::Syntax {
                    pos: self.pos,
                    msg: format!(
                        "expected a variable (m, l, k, or cN), found {}",
                        other.map_or("end of input".to_string(), |c| format!("`{}`", c as char))
                    ),
                })
            }
        };
        let side = if self.peek() == Some(b'\'') {
            self.pos += 1;
            Side::Hi
        } else {
            Side::Lo
        };
        Ok(Var { side, exp })
    }

    /// item := NAT | NAT "*" var | var ["*" NAT]
    fn parse_item(&mut self, form: &mut LinForm, sign: i64) -> Result<(), ConstraintError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_nat()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    let v = self.parse_var()?;
                    form.add_term(v, sign * n);
                } else {
                    form.constant += sign * n;
                }
            }
            _ => {
                let v = self.parse_var()?;
                self.skip_ws();
                let scale = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    self.parse_nat()?
                } else {
                    1
                };
                form.add_term(v, sign * scale);
            }
        }
        Ok(())
    }

    fn parse_form(&mut self) -> Result<LinForm, ConstraintError> {
        let mut form = LinForm::default();
        self.skip_ws();
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        }
        self.parse_item(&mut form, sign)?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.parse_item(&mut form, 1)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.parse_item(&mut form, -1)?;
                }
                _ => return Ok(form),
            }
        }
    }

    fn parse_op(&mut self) -> Result<CmpOp, ConstraintError> {
        self.skip_ws();
        let op = match (self.peek(), self.bytes.get(self.pos + 1).copied()) {
            (Some(b'<'), Some(b'=')) => {
                self.pos += 2;
                CmpOp::Le
            }
            (Some(b'<'), _) => {
                self.pos += 1;
                CmpOp::Lt
            }
            (Some(b'>'), Some(b'=')) => {
                self.pos += 2;
                CmpOp::Ge
            }
            (Some(b'>'), _) => {
                self.pos += 1;
                CmpOp::Gt
            }
            (Some(b'='), _) => {
                self.pos += 1;
                CmpOp::Eq
            }
            _ => {
                return Err(ConstraintError::Syntax {
                    pos: self.pos,
                    msg: "expected a comparison operator".into(),
                })
            }
        };
        Ok(op)
    }
}
