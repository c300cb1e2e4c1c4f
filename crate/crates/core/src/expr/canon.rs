//! Canonical form used for exact zero tests.
//!
//! Every expression is mapped to a quotient `num / den` of [`Poly`]s. A
//! `Poly` is a finite sum `Σ c · g₁^k₁ ⋯ gₙ^kₙ · exp(P)` with Gaussian
//! rational coefficients `c`, generators `gᵢ` (symbols, `π`, square roots of
//! primes, opaque function atoms) and an exponent `P` that is itself a `Poly`.
//! The trigonometric and hyperbolic functions are rewritten through complex
//! exponentials:
//!
//! ```text
//! sin u = (e^{iu} − e^{−iu}) / 2i      sinh u = (e^u − e^{−u}) / 2
//! cos u = (e^{iu} + e^{−iu}) / 2       cosh u = (e^u + e^{−u}) / 2
//! ```
//!
//! so `sin²+cos²=1`, `cosh²−sinh²=1` and the addition theorems hold by
//! construction. For polynomial exponents the functions `x^α e^{P}` with
//! distinct `(α, P)` are linearly independent, which makes the form
//! canonical on that class: an expression is identically zero exactly when
//! its numerator has no terms. `e^{iqπ}` with `12q ∈ ℤ` is evaluated in
//! `ℚ(i, √2, √3)`.
//!
//! Arguments with a non-constant denominator become opaque atoms; the form
//! stays sound there but is no longer complete.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Func, Node, ScalarExpr, Symbol};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Gaussian rational `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Gauss {
    re: BigRational,
    im: BigRational,
}

impl Gauss {
    fn new(re: BigRational, im: BigRational) -> Self {
        Gauss { re, im }
    }

    fn real(re: BigRational) -> Self {
        Gauss {
            re,
            im: BigRational::zero(),
        }
    }

    fn int(n: i64) -> Self {
        Self::real(q(n, 1))
    }

    fn i() -> Self {
        Gauss::new(BigRational::zero(), BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn add(&self, o: &Gauss) -> Gauss {
        Gauss::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn mul(&self, o: &Gauss) -> Gauss {
        Gauss::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn neg(&self) -> Gauss {
        Gauss::new(-&self.re, -&self.im)
    }

    fn conj(&self) -> Gauss {
        Gauss::new(self.re.clone(), -&self.im)
    }

    fn inv(&self) -> Gauss {
        let n = &self.re * &self.re + &self.im * &self.im;
        Gauss::new(&self.re / &n, -&self.im / &n)
    }
}

/// Polynomial generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Gen {
    Sym(Symbol),
    Pi,
    /// `√p` for a prime `p`; its power is always 1.
    Sqrt(u32),
    Opaque(Arc<(Func, Frac)>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Monomial {
    powers: Vec<(Gen, u32)>,
    exponent: Option<Arc<Poly>>,
}

impl Monomial {
    fn one() -> Self {
        Monomial {
            powers: Vec::new(),
            exponent: None,
        }
    }

    fn is_one(&self) -> bool {
        self.powers.is_empty() && self.exponent.is_none()
    }

    /// Product of two monomials; reducing `√p·√p = p` can produce a scalar.
    fn mul(&self, o: &Monomial) -> (Monomial, BigRational) {
        let mut merged: BTreeMap<Gen, u32> = self.powers.iter().cloned().collect();
        for (g, k) in &o.powers {
            *merged.entry(g.clone()).or_insert(0) += k;
        }
        let mut scalar = BigRational::one();
        let mut powers = Vec::with_capacity(merged.len());
        for (g, k) in merged {
            if let Gen::Sqrt(p) = g {
                scalar *= num_traits::pow(q(i64::from(p), 1), (k / 2) as usize);
                if k % 2 == 1 {
                    powers.push((g, 1));
                }
            } else {
                powers.push((g, k));
            }
        }
        let exponent = match (&self.exponent, &o.exponent) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => {
                let s = a.add(b);
                (!s.is_zero()).then(|| Arc::new(s))
            }
        };
        (Monomial { powers, exponent }, scalar)
    }

    fn conj(&self) -> Monomial {
        Monomial {
            powers: self.powers.clone(),
            exponent: self.exponent.as_ref().map(|p| Arc::new(p.conj())),
        }
    }

    /// A monomial whose only generators are square roots is invertible.
    fn is_unit(&self) -> bool {
        self.powers.iter().all(|(g, _)| matches!(g, Gen::Sqrt(_)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Poly {
    terms: BTreeMap<Monomial, Gauss>,
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly::default()
    }

    fn constant(c: Gauss) -> Self {
        let mut p = Poly::zero();
        p.push(Monomial::one(), c);
        p
    }

    fn one() -> Self {
        Self::constant(Gauss::int(1))
    }

    fn gen(g: Gen) -> Self {
        let mut p = Poly::zero();
        p.push(
            Monomial {
                powers: vec![(g, 1)],
                exponent: None,
            },
            Gauss::int(1),
        );
        p
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    fn push(&mut self, m: Monomial, c: Gauss) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }

    fn add_assign(&mut self, o: &Poly, negate: bool) {
        for (m, c) in &o.terms {
            self.push(m.clone(), if negate { c.neg() } else { c.clone() });
        }
    }

    fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    fn scale(&self, s: &Gauss) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(s)))
                .collect(),
        }
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let (m, s) = ma.mul(mb);
                out.push(m, ca.mul(cb).mul(&Gauss::real(s)));
            }
        }
        out
    }

    fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    fn conj(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.push(m.conj(), c.conj());
        }
        out
    }

    fn has_generator(&self, pred: &dyn Fn(&Gen) -> bool) -> bool {
        self.terms.keys().any(|m| {
            m.powers.iter().any(|(g, _)| pred(g))
                || m.exponent.as_ref().is_some_and(|e| e.has_generator(pred))
        })
    }

    fn leading(&self) -> Option<(&Monomial, &Gauss)> {
        self.terms.iter().next()
    }

    /// `e^{P}`, with `e^{iqπ}` evaluated exactly when `12q ∈ ℤ`.
    fn exp_of(p: &Poly) -> Poly {
        let pi_monomial = Monomial {
            powers: vec![(Gen::Pi, 1)],
            exponent: None,
        };
        let mut rest = p.clone();
        let mut factor = Poly::one();
        if let Some(c) = p.terms.get(&pi_monomial) {
            let twelfths = &c.im * q(12, 1);
            if twelfths.is_integer() && !c.im.is_zero() {
                factor = unit_root_24(twelfths.to_integer());
                rest.terms.remove(&pi_monomial);
                if !c.re.is_zero() {
                    rest.push(pi_monomial, Gauss::real(c.re.clone()));
                }
            }
        }
        if rest.is_zero() {
            return factor;
        }
        let mut e = Poly::zero();
        e.push(
            Monomial {
                powers: Vec::new(),
                exponent: Some(Arc::new(rest)),
            },
            Gauss::int(1),
        );
        factor.mul(&e)
    }

    /// `(P + P̄)/2` and `(P − P̄)/2i`.
    fn real_imag(&self) -> (Poly, Poly) {
        let c = self.conj();
        let re = self.add(&c).scale(&Gauss::real(q(1, 2)));
        let im = self
            .sub(&c)
            .scale(&Gauss::new(BigRational::zero(), q(-1, 2)));
        (re, im)
    }

    fn single_unit_term(&self) -> Option<(&Monomial, &Gauss)> {
        if self.terms.len() != 1 {
            return None;
        }
        self.leading().filter(|(m, _)| m.is_unit())
    }
}

/// `e^{iπk/12}` as an element of `ℚ(i, √2, √3)`.
fn unit_root_24(k: BigInt) -> Poly {
    let k = k.mod_floor(&BigInt::from(24));
    let k: i64 = k.try_into().expect("residue fits in i64");
    // cos and sin of kπ/12 for k = 0..=6 as (rational, √2, √3, √6) coordinates.
    const FIRST_QUADRANT: [[(i64, i64); 4]; 7] = [
        [(1, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 4), (0, 1), (1, 4)],
        [(0, 1), (0, 1), (1, 2), (0, 1)],
        [(0, 1), (1, 2), (0, 1), (0, 1)],
        [(1, 2), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (-1, 4), (0, 1), (1, 4)],
        [(0, 1), (0, 1), (0, 1), (0, 1)],
    ];
    let algebraic = |coords: &[(i64, i64); 4], sign: i64| -> Poly {
        let s2 = Poly::gen(Gen::Sqrt(2));
        let s3 = Poly::gen(Gen::Sqrt(3));
        let basis = [Poly::one(), s2.clone(), s3.clone(), s2.mul(&s3)];
        coords
            .iter()
            .zip(basis.iter())
            .fold(Poly::zero(), |acc, ((n, d), b)| {
                acc.add(&b.scale(&Gauss::real(q(sign * n, *d))))
            })
    };
    // Reduce to the first quadrant: cos(π−θ) = −cos θ, sin(π−θ) = sin θ,
    // and a half turn flips both signs.
    let (half_turn, k) = if k >= 12 { (-1, k - 12) } else { (1, k) };
    let (cos, sin) = if k <= 6 {
        (
            algebraic(&FIRST_QUADRANT[k as usize], half_turn),
            algebraic(&FIRST_QUADRANT[(6 - k) as usize], half_turn),
        )
    } else {
        let r = (12 - k) as usize;
        (
            algebraic(&FIRST_QUADRANT[r], -half_turn),
            algebraic(&FIRST_QUADRANT[6 - r], half_turn),
        )
    };
    cos.add(&sin.scale(&Gauss::i()))
}

/// `num / den`; `den` is never zero and, unless it is `1`, has leading
/// coefficient `1` and is not a unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Frac {
    pub(crate) num: Poly,
    pub(crate) den: Poly,
}

impl Frac {
    fn from_poly(p: Poly) -> Frac {
        Frac {
            num: p,
            den: Poly::one(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(num: Poly, den: Poly) -> Frac {
        if num.is_zero() {
            return Frac::from_poly(Poly::zero());
        }
        if num == den {
            return Frac::from_poly(Poly::one());
        }
        if let Some((m, c)) = den.single_unit_term() {
            // 1/(c·√p₁⋯√pₖ·e^P) = c⁻¹·Π(√pᵢ/pᵢ)·e^{−P}
            let mut inv = Poly::constant(c.inv());
            for (g, _) in &m.powers {
                if let Gen::Sqrt(p) = g {
                    inv = inv
                        .mul(&Poly::gen(g.clone()))
                        .scale(&Gauss::real(q(1, i64::from(*p))));
                }
            }
            if let Some(e) = &m.exponent {
                inv = inv.mul(&Poly::exp_of(&e.neg()));
            }
            return Frac::from_poly(num.mul(&inv));
        }
        let lead = den
            .leading()
            .map(|(_, c)| c.clone())
            .expect("denominator is nonzero");
        if lead.is_one() {
            Frac { num, den }
        } else {
            let s = lead.inv();
            Frac {
                num: num.scale(&s),
                den: den.scale(&s),
            }
        }
    }

    fn add(&self, o: &Frac) -> Frac {
        if self.den == o.den {
            Frac::normalized(self.num.add(&o.num), self.den.clone())
        } else {
            Frac::normalized(
                self.num.mul(&o.den).add(&o.num.mul(&self.den)),
                self.den.mul(&o.den),
            )
        }
    }

    fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn div(&self, o: &Frac) -> Option<Frac> {
        if o.num.is_zero() {
            return None;
        }
        Some(Frac::normalized(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    fn pow(&self, n: u32) -> Frac {
        Frac::normalized(self.num.pow(n), self.den.pow(n))
    }

    pub(crate) fn has_generator(&self, pred: &dyn Fn(&Gen) -> bool) -> bool {
        self.num.has_generator(pred) || self.den.has_generator(pred)
    }
}

/// Converts an expression tree, sharing work across repeated subtrees.
#[derive(Default)]
pub(crate) struct Canonicalizer {
    memo: HashMap<usize, Frac>,
    // Keeps memoised nodes alive so their addresses stay unique.
    pins: Vec<ScalarExpr>,
}

impl Canonicalizer {
    /// Canonical form of `e`, or `None` when `e` divides by an identically
    /// zero expression.
    pub(crate) fn canonical(&mut self, e: &ScalarExpr) -> Option<Frac> {
        let key = Arc::as_ptr(&e.0) as usize;
        if let Some(f) = self.memo.get(&key) {
            return Some(f.clone());
        }
        let f = self.convert(e)?;
        self.memo.insert(key, f.clone());
        self.pins.push(e.clone());
        Some(f)
    }

    fn convert(&mut self, e: &ScalarExpr) -> Option<Frac> {
        Some(match e.node() {
            Node::Rat(r) => Frac::from_poly(Poly::constant(Gauss::real(r.clone()))),
            Node::Sym(s) => Frac::from_poly(Poly::gen(Gen::Sym(s.clone()))),
            Node::Pi => Frac::from_poly(Poly::gen(Gen::Pi)),
            Node::Sqrt(p) => Frac::from_poly(Poly::gen(Gen::Sqrt(*p))),
            Node::Neg(a) => self.canonical(a)?.neg(),
            Node::Add(..) | Node::Sub(..) => self.sum(e)?,
            Node::Mul(a, b) => self.canonical(a)?.mul(&self.canonical(b)?),
            Node::Div(a, b) => self.canonical(a)?.div(&self.canonical(b)?)?,
            Node::Pow(a, n) => self.canonical(a)?.pow(*n),
            Node::Func(f, a) => {
                let arg = self.canonical(a)?;
                if !arg.den.is_one() {
                    Frac::from_poly(Poly::gen(Gen::Opaque(Arc::new((*f, arg)))))
                } else {
                    Frac::from_poly(apply_func(*f, &arg.num))
                }
            }
        })
    }
}

impl Canonicalizer {
    /// Sums a whole chain of `+`/`−` nodes into per-denominator
    /// accumulators instead of materializing every partial sum.
    fn sum(&mut self, e: &ScalarExpr) -> Option<Frac> {
        let mut groups: Vec<(Poly, Poly)> = Vec::new();
        let mut stack = vec![(e.clone(), false)];
        while let Some((t, neg)) = stack.pop() {
            match t.node() {
                Node::Add(a, b) => {
                    stack.push((b.clone(), neg));
                    stack.push((a.clone(), neg));
                }
                Node::Sub(a, b) => {
                    stack.push((b.clone(), !neg));
                    stack.push((a.clone(), neg));
                }
                Node::Neg(a) if matches!(a.node(), Node::Add(..) | Node::Sub(..)) => {
                    stack.push((a.clone(), !neg))
                }
                _ => {
                    let f = self.canonical(&t)?;
                    match groups.iter_mut().find(|(den, _)| *den == f.den) {
                        Some((_, num)) => num.add_assign(&f.num, neg),
                        None => {
                            let mut num = Poly::zero();
                            num.add_assign(&f.num, neg);
                            groups.push((f.den, num));
                        }
                    }
                }
            }
        }
        let mut parts = groups
            .into_iter()
            .map(|(den, num)| Frac::normalized(num, den));
        let first = parts
            .next()
            .unwrap_or_else(|| Frac::from_poly(Poly::zero()));
        Some(parts.fold(first, |acc, f| acc.add(&f)))
    }
}

fn apply_func(f: Func, p: &Poly) -> Poly {
    let half = Gauss::real(q(1, 2));
    match f {
        Func::Exp => Poly::exp_of(p),
        Func::Sinh | Func::Cosh => {
            let plus = Poly::exp_of(p);
            let minus = Poly::exp_of(&p.neg());
            let sum = if f == Func::Sinh {
                plus.sub(&minus)
            } else {
                plus.add(&minus)
            };
            sum.scale(&half)
        }
        Func::Sin | Func::Cos => {
            let ip = p.scale(&Gauss::i());
            let plus = Poly::exp_of(&ip);
            let minus = Poly::exp_of(&ip.neg());
            if f == Func::Cos {
                plus.add(&minus).scale(&half)
            } else {
                // 1/(2i) = −i/2
                plus.sub(&minus)
                    .scale(&Gauss::new(BigRational::zero(), q(-1, 2)))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Rendering back to a real expression tree.

fn render_gen(g: &Gen) -> ScalarExpr {
    match g {
        Gen::Sym(s) => ScalarExpr::symbol(s.clone()),
        Gen::Pi => ScalarExpr::pi(),
        Gen::Sqrt(p) => ScalarExpr::from_node(Node::Sqrt(*p)),
        Gen::Opaque(atom) => ScalarExpr::func(atom.0, render_frac(&atom.1)),
    }
}

fn render_powers(m: &Monomial) -> ScalarExpr {
    m.powers
        .iter()
        .map(|(g, k)| render_gen(g).pow(*k))
        .reduce(|a, b| a * b)
        .unwrap_or_else(ScalarExpr::one)
}

fn leading_sign_positive(p: &Poly) -> bool {
    p.leading().is_some_and(|(_, c)| {
        if c.re.is_zero() {
            c.im.is_positive()
        } else {
            c.re.is_positive()
        }
    })
}

/// Renders a conjugation-invariant polynomial as a real expression.
fn render_real(p: &Poly) -> ScalarExpr {
    let mut consumed: BTreeSet<&Monomial> = BTreeSet::new();
    let mut paired = Vec::new();
    let mut out = Vec::new();
    for (m, c) in &p.terms {
        if consumed.contains(m) {
            continue;
        }
        let mc = m.conj();
        if mc == *m {
            debug_assert!(
                c.im.is_zero(),
                "non-real coefficient on a self-conjugate term"
            );
            let body = render_powers(m);
            let body = match &m.exponent {
                Some(e) => body * ScalarExpr::exp(render_real(e)),
                None => body,
            };
            out.push(signed_term(&c.re, body));
        } else {
            let Some((key, _)) = p.terms.get_key_value(&mc) else {
                debug_assert!(false, "unpaired complex term in a real expression");
                continue;
            };
            consumed.insert(key);
            paired.push((m, c));
        }
    }
    for (m, c) in paired {
        // 2·Re(c · g · e^{A+iB}) = 2·g·e^A·(Re c · cos B − Im c · sin B)
        let exponent = m
            .exponent
            .as_ref()
            .expect("complex monomials carry an exponent");
        let (mut re_part, mut im_part) = exponent.real_imag();
        let mut c = c.clone();
        if !leading_sign_positive(&im_part) {
            im_part = im_part.neg();
            c = c.conj();
        }
        let mut factor = render_powers(m);
        if !re_part.is_zero() {
            factor = factor * ScalarExpr::exp(render_real(&std::mem::take(&mut re_part)));
        }
        let angle = render_real(&im_part);
        let two = q(2, 1);
        let cos = signed_term(&(&c.re * &two), ScalarExpr::cos(angle.clone()));
        let sin = signed_term(&(-&c.im * &two), ScalarExpr::sin(angle));
        out.push(match (cos.is_literal_zero(), sin.is_literal_zero()) {
            (false, true) => signed_product(cos, factor),
            (true, false) => signed_product(sin, factor),
            _ => factor * (cos + sin),
        });
    }
    ScalarExpr::sum(out)
}

/// `c·body` with the sign of `c` pulled out front and the coefficient
/// placed leftmost in the product chain.
fn signed_term(c: &BigRational, body: ScalarExpr) -> ScalarExpr {
    fn prepend(c: ScalarExpr, body: &ScalarExpr) -> ScalarExpr {
        match body.node() {
            Node::Mul(a, b) if !c.is_literal_one() => prepend(c, a) * b.clone(),
            _ => c * body.clone(),
        }
    }
    if c.is_negative() {
        -prepend(ScalarExpr::rational(-c), &body)
    } else {
        prepend(ScalarExpr::rational(c.clone()), &body)
    }
}

/// `term·factor` with a leading minus of `term` kept outermost.
fn signed_product(term: ScalarExpr, factor: ScalarExpr) -> ScalarExpr {
    match term.node() {
        Node::Neg(t) => -(t.clone() * factor),
        _ => term * factor,
    }
}

pub(crate) fn render_frac(f: &Frac) -> ScalarExpr {
    let num = render_real(&f.num);
    if f.den.is_one() {
        num
    } else {
        num.div(&render_real(&f.den))
    }
}
