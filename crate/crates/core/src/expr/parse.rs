//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr     := term (("+"|"-") term)*
//! term     := factor (("*"|"/") factor)*
//! factor   := base ("^" uint)?
//! base     := rational | var | func "(" expr ")" | "(" expr ")" | "-" base
//! var      := "x" | "y" | "z" | "xi"
//! func     := "sin" | "cos" | "exp" | "sinh" | "cosh"
//! rational := int ("/" uint)?
//! ```
//!
//! Two extra atoms are accepted so that everything the engine prints can be
//! read back: the constant `pi` and `sqrt(<uint>)`. Named parameters are
//! only accepted through [`parse_with_params`].
//!
//! Note that `-` applies to a `base`, so `-x^2` means `(-x)^2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{ChartVar, Func, Node, ScalarExpr, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                *offset
            }
        }
    }
}

/// Largest product of nested exponents accepted by the parser; expansion
/// cost grows with it.
pub const MAX_POWER: u64 = 32;

/// Largest product of exponents along any path of nested powers.
fn power_depth(e: &ScalarExpr) -> u64 {
    match e.node() {
        Node::Rat(_) | Node::Sym(_) | Node::Pi | Node::Sqrt(_) => 1,
        Node::Pow(a, n) => power_depth(a).saturating_mul(u64::from(*n)),
        Node::Neg(a) | Node::Func(_, a) => power_depth(a),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            power_depth(a).max(power_depth(b))
        }
    }
}

/// Parses an expression in the chart variables `x, y, z, xi`.
pub fn parse(source: &str) -> Result<ScalarExpr, ParseError> {
    parse_with_params(source, &[])
}

/// Parses an expression that may also mention the named constant parameters.
pub fn parse_with_params(source: &str, params: &[&str]) -> Result<ScalarExpr, ParseError> {
    let mut parser = Parser {
        src: source,
        pos: 0,
        params,
    };
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos < source.len() {
        return Err(parser.error(format!(
            "unexpected `{}`",
            parser.peek_char().unwrap_or(' ')
        )));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    params: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    /// Skips whitespace and consumes `c` if it is next.
    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek_char() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else if self.pos >= self.src.len() {
            Err(self.error(format!("expected `{c}`, found end of input")))
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                lhs = ScalarExpr::from_node(Node::Add(lhs, rhs));
            } else if self.eat('-') {
                let rhs = self.term()?;
                lhs = ScalarExpr::from_node(Node::Sub(lhs, rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                let rhs = self.factor()?;
                lhs = ScalarExpr::from_node(Node::Mul(lhs, rhs));
            } else if self.eat('/') {
                let rhs = self.factor()?;
                lhs = ScalarExpr::from_node(Node::Div(lhs, rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr, ParseError> {
        let base = self.base()?;
        if self.eat('^') {
            self.skip_ws();
            let n = self.uint()?;
            let n = u32::try_from(&n)
                .ok()
                .filter(|n| power_depth(&base).saturating_mul(u64::from(*n)) <= MAX_POWER);
            let n = n.ok_or_else(|| self.error(format!("total exponent exceeds {MAX_POWER}")))?;
            Ok(ScalarExpr::from_node(Node::Pow(base, n)))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<ScalarExpr, ParseError> {
        self.skip_ws();
        match self.peek_char() {
            None => Err(self.error("unexpected end of input")),
            Some('-') => {
                self.pos += 1;
                let inner = self.base()?;
                Ok(ScalarExpr::from_node(Node::Neg(inner)))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_alphabetic() || c == '_' => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        Ok(self.src[start..self.pos]
            .parse()
            .expect("digits parse as an integer"))
    }

    fn rational(&mut self) -> Result<ScalarExpr, ParseError> {
        let numer = self.uint()?;
        // `/` belongs to the literal only when digits follow; otherwise it
        // is the division operator of the enclosing term.
        let save = self.pos;
        self.skip_ws();
        if self.peek_char() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            if self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
                let denom_at = self.pos;
                let denom = self.uint()?;
                if denom.is_zero() {
                    return Err(ParseError::Syntax {
                        offset: denom_at,
                        message: "zero denominator in rational literal".into(),
                    });
                }
                return Ok(ScalarExpr::rational(BigRational::new(numer, denom)));
            }
        }
        self.pos = save;
        Ok(ScalarExpr::rational(BigRational::from_integer(numer)))
    }

    fn identifier(&mut self) -> Result<ScalarExpr, ParseError> {
        let start = self.pos;
        while self
            .peek_char()
            .is_some_and(|c| c.is_alphanumeric() || c == '_')
        {
            self.pos += self.peek_char().map_or(1, char::len_utf8);
        }
        let name = &self.src[start..self.pos];
        let var = match name {
            "x" => Some(ChartVar::X),
            "y" => Some(ChartVar::Y),
            "z" => Some(ChartVar::Z),
            "xi" | "ξ" => Some(ChartVar::Xi),
            _ => None,
        };
        if let Some(v) = var {
            return Ok(ScalarExpr::var(v));
        }
        if name == "pi" {
            return Ok(ScalarExpr::pi());
        }
        if name == "sqrt" {
            self.expect('(')?;
            self.skip_ws();
            let arg_at = self.pos;
            let n = self.uint()?;
            self.expect(')')?;
            let n = u32::try_from(&n)
                .ok()
                .filter(|n| *n > 0)
                .ok_or(ParseError::Syntax {
                    offset: arg_at,
                    message: "sqrt argument out of range".into(),
                })?;
            return Ok(ScalarExpr::sqrt_of(n));
        }
        if let Some(f) = Func::from_name(name) {
            self.expect('(')?;
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(ScalarExpr::func(f, arg));
        }
        if self.params.contains(&name) {
            return Ok(ScalarExpr::symbol(Symbol::param(name)));
        }
        Err(ParseError::UnknownIdentifier {
            offset: start,
            name: name.to_string(),
        })
    }
}

/// Reads a decimal literal such as `-0.25` or `1.5e-3` as the exact
/// rational it spells. Returns `None` for anything else.
pub fn parse_decimal(src: &str) -> Option<BigRational> {
    let s = src.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit())
    {
        return None;
    }
    if exp.unsigned_abs() > 4096 {
        return None;
    }
    let numer: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - i32::try_from(frac.len()).ok()?;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let q = if shift >= 0 {
        BigRational::from_integer(numer * scale)
    } else {
        BigRational::new(numer, scale)
    };
    Some(if neg { -q } else { q })
}
