//! Exact scalar fields on the chart `(x, y, z, ξ)`.
//!
//! A [`ScalarExpr`] is an immutable expression tree over rational constants,
//! the four chart variables, named parameters, `+ − × ÷`, non-negative integer
//! powers and the functions `sin cos exp sinh cosh`. Trees are reference
//! counted, so cloning is cheap and values can be shared across threads.
//!
//! Zero decisions go through [`normalize`](ScalarExpr::normalize), which maps
//! an expression to a canonical sum of `coefficient · monomial · exp(P)`
//! terms (see [`canon`]). Anything the normal form cannot decide falls back
//! to deterministic sampling in [`zero`].

mod canon;
mod diff;
mod eval;
mod parse;
mod zero;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use eval::{EvalError, Point4};
pub use parse::{parse, parse_decimal, parse_with_params, ParseError};
pub use zero::{
    sample_points, Witness, ZeroOptions, ZeroVerdict, SAMPLE_COUNT, SAMPLE_SEED, ZERO_TOLERANCE,
};

/// One of the four chart coordinates. `Xi` is `ξ = ct`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChartVar {
    X,
    Y,
    Z,
    Xi,
}

impl ChartVar {
    pub const ALL: [ChartVar; 4] = [ChartVar::X, ChartVar::Y, ChartVar::Z, ChartVar::Xi];

    /// Zero-based position in `(x, y, z, ξ)`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<ChartVar> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ChartVar::X => "x",
            ChartVar::Y => "y",
            ChartVar::Z => "z",
            ChartVar::Xi => "xi",
        }
    }
}

/// A free symbol: a chart coordinate or a named constant parameter
/// (flow parameters, rotation angles).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Chart(ChartVar),
    Param(Arc<str>),
}

impl Symbol {
    pub fn param(name: &str) -> Symbol {
        Symbol::Param(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        match self {
            Symbol::Chart(v) => v.name(),
            Symbol::Param(p) => p,
        }
    }
}

impl From<ChartVar> for Symbol {
    fn from(v: ChartVar) -> Self {
        Symbol::Chart(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Sin, Func::Cos, Func::Exp, Func::Sinh, Func::Cosh];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn apply_f64(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
        }
    }
}

/// Expression node. Build trees through the [`ScalarExpr`] constructors;
/// the raw variants are public for pattern matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Rat(BigRational),
    Sym(Symbol),
    /// The constant π.
    Pi,
    /// Square root of a prime.
    Sqrt(u32),
    Neg(ScalarExpr),
    Add(ScalarExpr, ScalarExpr),
    Sub(ScalarExpr, ScalarExpr),
    Mul(ScalarExpr, ScalarExpr),
    Div(ScalarExpr, ScalarExpr),
    Pow(ScalarExpr, u32),
    Func(Func, ScalarExpr),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr(Arc<Node>);

impl ScalarExpr {
    /// Wraps a node without any simplification.
    pub fn from_node(node: Node) -> Self {
        ScalarExpr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(q: BigRational) -> Self {
        Self::from_node(Node::Rat(q))
    }

    pub fn var(v: ChartVar) -> Self {
        Self::from_node(Node::Sym(Symbol::Chart(v)))
    }

    pub fn x() -> Self {
        Self::var(ChartVar::X)
    }
    pub fn y() -> Self {
        Self::var(ChartVar::Y)
    }
    pub fn z() -> Self {
        Self::var(ChartVar::Z)
    }
    pub fn xi() -> Self {
        Self::var(ChartVar::Xi)
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::from_node(Node::Sym(s))
    }

    pub fn param(name: &str) -> Self {
        Self::symbol(Symbol::param(name))
    }

    pub fn pi() -> Self {
        Self::from_node(Node::Pi)
    }

    /// `√n` for a positive integer, split into an integer factor times
    /// square roots of primes.
    pub fn sqrt_of(n: u32) -> Self {
        assert!(n > 0, "sqrt of zero or negative is not representable");
        let mut rest = n;
        let mut outside = 1i64;
        let mut radicals = Vec::new();
        let mut p = 2u32;
        while p * p <= rest {
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            outside *= i64::from(p).pow(k / 2);
            if k % 2 == 1 {
                radicals.push(p);
            }
            p += 1;
        }
        if rest > 1 {
            radicals.push(rest);
        }
        radicals.into_iter().fold(Self::int(outside), |acc, p| {
            acc * Self::from_node(Node::Sqrt(p))
        })
    }

    pub fn func(f: Func, arg: ScalarExpr) -> Self {
        Self::from_node(Node::Func(f, arg))
    }
    pub fn sin(arg: ScalarExpr) -> Self {
        Self::func(Func::Sin, arg)
    }
    pub fn cos(arg: ScalarExpr) -> Self {
        Self::func(Func::Cos, arg)
    }
    pub fn exp(arg: ScalarExpr) -> Self {
        Self::func(Func::Exp, arg)
    }
    pub fn sinh(arg: ScalarExpr) -> Self {
        Self::func(Func::Sinh, arg)
    }
    pub fn cosh(arg: ScalarExpr) -> Self {
        Self::func(Func::Cosh, arg)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Rat(q) => Some(q),
            _ => None,
        }
    }

    /// Structural zero: the literal `0`. Use [`is_zero`](Self::is_zero) for
    /// the mathematical question.
    pub fn is_literal_zero(&self) -> bool {
        self.as_rational().is_some_and(Zero::is_zero)
    }

    pub fn is_literal_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    pub fn pow(&self, n: u32) -> Self {
        match (self.node(), n) {
            (_, 0) => Self::one(),
            (_, 1) => self.clone(),
            (Node::Rat(q), n) => Self::rational(num_traits::pow(q.clone(), n as usize)),
            _ => Self::from_node(Node::Pow(self.clone(), n)),
        }
    }

    /// Quotient with constant folding; division by a literal zero is kept
    /// in the tree and reported as a pole by evaluation.
    pub fn div(&self, rhs: &ScalarExpr) -> Self {
        match (self.node(), rhs.node()) {
            (_, Node::Rat(d)) if d.is_one() => self.clone(),
            (Node::Rat(n), _) if n.is_zero() && !rhs.is_literal_zero() => Self::zero(),
            (Node::Rat(n), Node::Rat(d)) if !d.is_zero() => Self::rational(n / d),
            _ => Self::from_node(Node::Div(self.clone(), rhs.clone())),
        }
    }

    /// Sum of an iterator of terms.
    pub fn sum<I: IntoIterator<Item = ScalarExpr>>(terms: I) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, t| acc + t)
    }

    /// Replaces symbols according to `f`; symbols mapped to `None` are kept.
    pub fn substitute(&self, f: &dyn Fn(&Symbol) -> Option<ScalarExpr>) -> ScalarExpr {
        match self.node() {
            Node::Rat(_) | Node::Pi | Node::Sqrt(_) => self.clone(),
            Node::Sym(s) => f(s).unwrap_or_else(|| self.clone()),
            Node::Neg(a) => -a.substitute(f),
            Node::Add(a, b) => a.substitute(f) + b.substitute(f),
            Node::Sub(a, b) => a.substitute(f) - b.substitute(f),
            Node::Mul(a, b) => a.substitute(f) * b.substitute(f),
            Node::Div(a, b) => a.substitute(f).div(&b.substitute(f)),
            Node::Pow(a, n) => a.substitute(f).pow(*n),
            Node::Func(g, a) => ScalarExpr::func(*g, a.substitute(f)),
        }
    }

    /// Simultaneous substitution of the four chart variables.
    pub fn substitute_chart(&self, images: &[ScalarExpr; 4]) -> ScalarExpr {
        self.substitute(&|s| match s {
            Symbol::Chart(v) => Some(images[v.index()].clone()),
            Symbol::Param(_) => None,
        })
    }

    /// Free symbols in first-occurrence order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        match self.node() {
            Node::Sym(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Node::Rat(_) | Node::Pi | Node::Sqrt(_) => {}
            Node::Neg(a) | Node::Pow(a, _) | Node::Func(_, a) => a.collect_symbols(out),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }

    /// Whether the tree contains a quotient with a non-constant denominator.
    pub fn has_division(&self) -> bool {
        match self.node() {
            Node::Div(a, b) => b.as_rational().is_none() || a.has_division(),
            Node::Rat(_) | Node::Sym(_) | Node::Pi | Node::Sqrt(_) => false,
            Node::Neg(a) | Node::Pow(a, _) | Node::Func(_, a) => a.has_division(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                a.has_division() || b.has_division()
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Rat(_) | Node::Sym(_) | Node::Pi | Node::Sqrt(_) => 1,
            Node::Neg(a) | Node::Pow(a, _) | Node::Func(_, a) => 1 + a.size(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: ScalarExpr) -> ScalarExpr {
        match (self.node(), rhs.node()) {
            (Node::Rat(a), Node::Rat(b)) => ScalarExpr::rational(a + b),
            (Node::Rat(a), _) if a.is_zero() => rhs,
            (_, Node::Rat(b)) if b.is_zero() => self,
            (_, Node::Neg(b)) => self - b.clone(),
            _ => ScalarExpr::from_node(Node::Add(self, rhs)),
        }
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: ScalarExpr) -> ScalarExpr {
        match (self.node(), rhs.node()) {
            (Node::Rat(a), Node::Rat(b)) => ScalarExpr::rational(a - b),
            (_, Node::Rat(b)) if b.is_zero() => self,
            (Node::Rat(a), _) if a.is_zero() => -rhs,
            (_, Node::Neg(b)) => self + b.clone(),
            _ => ScalarExpr::from_node(Node::Sub(self, rhs)),
        }
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: ScalarExpr) -> ScalarExpr {
        match (self.node(), rhs.node()) {
            (Node::Rat(a), Node::Rat(b)) => ScalarExpr::rational(a * b),
            (Node::Rat(a), _) if a.is_zero() => self,
            (_, Node::Rat(b)) if b.is_zero() => rhs,
            (Node::Rat(a), _) if a.is_one() => rhs,
            (_, Node::Rat(b)) if b.is_one() => self,
            (Node::Rat(a), _) if (-a).is_one() => -rhs,
            (_, Node::Rat(b)) if (-b).is_one() => -self,
            (Node::Neg(a), Node::Neg(b)) => a.clone() * b.clone(),
            (Node::Neg(a), _) => -(a.clone() * rhs),
            (_, Node::Neg(b)) => -(self * b.clone()),
            _ => ScalarExpr::from_node(Node::Mul(self, rhs)),
        }
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        match self.node() {
            Node::Rat(a) => ScalarExpr::rational(-a),
            Node::Neg(a) => a.clone(),
            _ => ScalarExpr::from_node(Node::Neg(self)),
        }
    }
}

impl<'a> Add<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        self.clone() + rhs.clone()
    }
}

impl<'a> Sub<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a ScalarExpr> for &'a ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        self.clone() * rhs.clone()
    }
}

impl Add<&ScalarExpr> for ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, rhs: &ScalarExpr) -> ScalarExpr {
        self + rhs.clone()
    }
}

impl Sub<&ScalarExpr> for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, rhs: &ScalarExpr) -> ScalarExpr {
        self - rhs.clone()
    }
}

impl Mul<&ScalarExpr> for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, rhs: &ScalarExpr) -> ScalarExpr {
        self * rhs.clone()
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -self.clone()
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::int(n)
    }
}

impl From<BigRational> for ScalarExpr {
    fn from(q: BigRational) -> Self {
        ScalarExpr::rational(q)
    }
}

// Rendering follows the input grammar so that emitted text parses back.
// Precedence levels: 0 = sum, 1 = product, 2 = power base / unary operand.

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational, level: u8) -> fmt::Result {
    let body = if q.is_integer() {
        q.numer().abs().to_string()
    } else {
        format!("{}/{}", q.numer().abs(), q.denom())
    };
    let needs_parens = (q.is_negative() && level > 0) || (!q.is_integer() && level > 1);
    let sign = if q.is_negative() { "-" } else { "" };
    if needs_parens {
        write!(f, "({sign}{body})")
    } else {
        write!(f, "{sign}{body}")
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &ScalarExpr, level: u8) -> fmt::Result {
    let wrap = |f: &mut fmt::Formatter<'_>,
                own: u8,
                body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
        if own < level {
            write!(f, "(")?;
            body(f)?;
            write!(f, ")")
        } else {
            body(f)
        }
    };
    match e.node() {
        Node::Rat(q) => write_rational(f, q, level),
        Node::Sym(s) => write!(f, "{}", s.name()),
        Node::Pi => write!(f, "pi"),
        Node::Sqrt(p) => write!(f, "sqrt({p})"),
        Node::Func(g, a) => {
            write!(f, "{}(", g.name())?;
            write_expr(f, a, 0)?;
            write!(f, ")")
        }
        // A leading minus binds tighter than `^` in the grammar, so the
        // operand is always parenthesised unless it is atomic.
        Node::Neg(a) => wrap(f, 1, &|f| {
            write!(f, "-")?;
            write_expr(f, a, 3)
        }),
        Node::Add(a, b) => wrap(f, 0, &|f| {
            write_expr(f, a, 0)?;
            write!(f, " + ")?;
            write_expr(f, b, 1)
        }),
        Node::Sub(a, b) => wrap(f, 0, &|f| {
            write_expr(f, a, 0)?;
            write!(f, " - ")?;
            write_expr(f, b, 1)
        }),
        Node::Mul(a, b) => wrap(f, 1, &|f| {
            // A leading literal needs no parentheses: `-3/2*x` reads back
            // as `(-(3/2))*x`.
            match a.node() {
                Node::Rat(q) => write_rational(f, q, 0)?,
                _ => write_expr(f, a, 1)?,
            }
            write!(f, "*")?;
            write_expr(f, b, 2)
        }),
        Node::Div(a, b) => wrap(f, 1, &|f| {
            write_expr(f, a, 1)?;
            write!(f, "/")?;
            write_expr(f, b, 2)
        }),
        Node::Pow(a, n) => wrap(f, 2, &|f| {
            write_expr(f, a, 3)?;
            write!(f, "^{n}")
        }),
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}
