//! Graded exterior algebra on the charts ℝ³ and ℝ⁴.
//!
//! Basis tuples are stored as bitmasks (bit `k−1` for index `k`), so the
//! numeric order of the mask is the basis order used throughout:
//! `12, 13, 23, 14, 24, 34` for 2-forms and `123, 124, 134, 234` for
//! 3-forms.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use thiserror::Error;

use crate::expr::{ChartVar, ScalarExpr, ZeroOptions, ZeroVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}; only 3 and 4 are supported")]
    UnsupportedDimension(usize),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// Strictly increasing tuple of 1-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTuple(u8);

impl IndexTuple {
    pub const EMPTY: IndexTuple = IndexTuple(0);

    pub fn from_bits(bits: u8) -> Self {
        IndexTuple(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Sorts `indices`, returning the tuple and the permutation sign, or
    /// `None` if an index repeats.
    pub fn sorted(indices: &[usize]) -> Option<(IndexTuple, i32)> {
        let mut bits = 0u8;
        let mut sign = 1;
        for &i in indices {
            assert!((1..=8).contains(&i), "index {i} out of range");
            let bit = 1u8 << (i - 1);
            if bits & bit != 0 {
                return None;
            }
            // Each already placed index above `i` is one transposition.
            if (bits & !((bit << 1).wrapping_sub(1))).count_ones() % 2 == 1 {
                sign = -sign;
            }
            bits |= bit;
        }
        Some((IndexTuple(bits), sign))
    }

    pub fn single(i: usize) -> Self {
        IndexTuple(1 << (i - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    pub fn max_index(self) -> usize {
        8 - self.0.leading_zeros() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (1..=8).filter(|&i| self.contains(i)).collect()
    }

    pub fn is_disjoint(self, o: IndexTuple) -> bool {
        self.0 & o.0 == 0
    }

    pub fn union(self, o: IndexTuple) -> IndexTuple {
        IndexTuple(self.0 | o.0)
    }

    pub fn without(self, o: IndexTuple) -> IndexTuple {
        IndexTuple(self.0 & !o.0)
    }

    /// Complement in `1..=dim`.
    pub fn complement(self, dim: usize) -> IndexTuple {
        IndexTuple(!self.0 & ((1u16 << dim) - 1) as u8)
    }

    /// Sign of the permutation sorting the concatenation `(self, o)`.
    pub fn concat_sign(self, o: IndexTuple) -> i32 {
        debug_assert!(self.is_disjoint(o));
        let inversions: u32 = o
            .indices()
            .iter()
            .map(|&i| (self.0 >> i).count_ones())
            .sum();
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All tuples of length `p` in `1..=dim`, in basis order.
    pub fn all(dim: usize, p: usize) -> Vec<IndexTuple> {
        (0u16..(1 << dim))
            .map(|b| IndexTuple(b as u8))
            .filter(|t| t.len() == p)
            .collect()
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Marker for covariant objects (forms).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lower {}
/// Marker for contravariant objects (multivectors).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Upper {}

pub trait Variance: 'static {
    const BASIS: fn(usize, usize) -> &'static str;
}

impl Variance for Lower {
    const BASIS: fn(usize, usize) -> &'static str =
        |dim, i| basis_name(dim, i, ["dx", "dy", "dz", "dxi"]);
}

impl Variance for Upper {
    const BASIS: fn(usize, usize) -> &'static str =
        |dim, i| basis_name(dim, i, ["Dx", "Dy", "Dz", "Dxi"]);
}

fn basis_name(_dim: usize, i: usize, names: [&'static str; 4]) -> &'static str {
    names[i - 1]
}

/// Sparse graded object with exact coefficients.
pub struct Multi<V> {
    dim: usize,
    grade: usize,
    coeffs: BTreeMap<IndexTuple, ScalarExpr>,
    _variance: PhantomData<fn() -> V>,
}

pub type PForm = Multi<Lower>;
pub type PVector = Multi<Upper>;

impl<V> Clone for Multi<V> {
    fn clone(&self) -> Self {
        Multi {
            dim: self.dim,
            grade: self.grade,
            coeffs: self.coeffs.clone(),
            _variance: PhantomData,
        }
    }
}

impl<V> PartialEq for Multi<V> {
    fn eq(&self, o: &Self) -> bool {
        self.dim == o.dim && self.grade == o.grade && self.coeffs == o.coeffs
    }
}

impl<V> Eq for Multi<V> {}

fn check_dim(dim: usize) -> Result<(), FormError> {
    if dim == 3 || dim == 4 {
        Ok(())
    } else {
        Err(FormError::UnsupportedDimension(dim))
    }
}

fn same_dim(a: usize, b: usize) -> Result<(), FormError> {
    if a == b {
        Ok(())
    } else {
        Err(FormError::DimensionMismatch { left: a, right: b })
    }
}

fn sign_expr(sign: i32, e: ScalarExpr) -> ScalarExpr {
    if sign < 0 {
        -e
    } else {
        e
    }
}

impl<V> Multi<V> {
    /// The zero object; grade `dim + 1` is allowed and always empty.
    pub fn zero(dim: usize, grade: usize) -> Self {
        assert!(dim == 3 || dim == 4, "unsupported dimension {dim}");
        assert!(grade <= dim + 1, "grade {grade} exceeds dimension {dim}");
        Multi {
            dim,
            grade,
            coeffs: BTreeMap::new(),
            _variance: PhantomData,
        }
    }

    /// Builds from `(indices, coefficient)` pairs in any order; unsorted
    /// indices have their permutation sign folded into the coefficient and
    /// repeated indices contribute nothing.
    pub fn from_terms<I>(dim: usize, grade: usize, terms: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = (Vec<usize>, ScalarExpr)>,
    {
        check_dim(dim)?;
        let mut acc: BTreeMap<IndexTuple, Vec<ScalarExpr>> = BTreeMap::new();
        for (indices, c) in terms {
            if indices.len() != grade {
                return Err(FormError::GradeMismatch {
                    expected: grade,
                    found: indices.len(),
                });
            }
            if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > dim) {
                return Err(FormError::IndexOutOfRange { index: bad, dim });
            }
            if let Some((t, sign)) = IndexTuple::sorted(&indices) {
                acc.entry(t).or_default().push(sign_expr(sign, c));
            }
        }
        Ok(Self::from_parts(
            dim,
            grade,
            acc.into_iter().map(|(t, cs)| (t, ScalarExpr::sum(cs))),
        ))
    }

    fn from_parts<I: IntoIterator<Item = (IndexTuple, ScalarExpr)>>(
        dim: usize,
        grade: usize,
        parts: I,
    ) -> Self {
        let mut m = Self::zero(dim, grade);
        for (t, c) in parts {
            debug_assert_eq!(t.len(), grade);
            let c = c.normalize();
            if !c.is_literal_zero() {
                m.coeffs.insert(t, c);
            }
        }
        m
    }

    fn from_sums(dim: usize, grade: usize, acc: BTreeMap<IndexTuple, Vec<ScalarExpr>>) -> Self {
        Self::from_parts(
            dim,
            grade,
            acc.into_iter().map(|(t, cs)| (t, ScalarExpr::sum(cs))),
        )
    }

    /// Unit basis element.
    pub fn basis(dim: usize, t: IndexTuple) -> Self {
        Self::from_parts(dim, t.len(), [(t, ScalarExpr::one())])
    }

    /// Grade-0 object with value `f`.
    pub fn scalar(dim: usize, f: ScalarExpr) -> Self {
        Self::from_parts(dim, 0, [(IndexTuple::EMPTY, f)])
    }

    /// Grade-1 object from its components.
    pub fn from_components(components: &[ScalarExpr]) -> Self {
        let dim = components.len();
        Self::from_parts(
            dim,
            1,
            components
                .iter()
                .enumerate()
                .map(|(i, c)| (IndexTuple::single(i + 1), c.clone())),
        )
    }

    /// `dim`-graded volume element `1 ⋯ n`.
    pub fn volume(dim: usize) -> Self {
        Self::basis(dim, IndexTuple::EMPTY.complement(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeff(&self, t: IndexTuple) -> ScalarExpr {
        self.coeffs
            .get(&t)
            .cloned()
            .unwrap_or_else(ScalarExpr::zero)
    }

    /// Coefficient on the tuple given by 1-based indices in any order.
    pub fn component(&self, indices: &[usize]) -> ScalarExpr {
        match IndexTuple::sorted(indices) {
            Some((t, sign)) => sign_expr(sign, self.coeff(t)),
            None => ScalarExpr::zero(),
        }
    }

    /// Grade-1 components as an array indexed from 0.
    pub fn components(&self) -> Vec<ScalarExpr> {
        (1..=self.dim)
            .map(|i| self.coeff(IndexTuple::single(i)))
            .collect()
    }

    /// Value of a grade-0 object.
    pub fn scalar_value(&self) -> ScalarExpr {
        self.coeff(IndexTuple::EMPTY)
    }

    /// Coefficient on the volume element.
    pub fn top_coeff(&self) -> ScalarExpr {
        self.coeff(IndexTuple::EMPTY.complement(self.dim))
    }

    pub fn iter(&self) -> impl Iterator<Item = (IndexTuple, &ScalarExpr)> {
        self.coeffs.iter().map(|(t, c)| (*t, c))
    }

    /// No stored coefficients.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Combined verdict over all coefficients.
    pub fn is_zero_with(&self, opts: &ZeroOptions) -> ZeroVerdict {
        ZeroVerdict::combine(self.coeffs.values().map(|c| c.is_zero_with(opts)))
    }

    pub fn is_zero(&self) -> ZeroVerdict {
        self.is_zero_with(&ZeroOptions::default())
    }

    pub fn map(&self, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Self {
        Self::from_parts(
            self.dim,
            self.grade,
            self.coeffs.iter().map(|(t, c)| (*t, f(c))),
        )
    }

    pub fn scale(&self, s: &ScalarExpr) -> Self {
        self.map(|c| s * c)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    pub fn partial(&self, v: ChartVar) -> Self {
        self.map(|c| c.diff(v))
    }

    fn check_same_shape(&self, o: &Self) -> Result<(), FormError> {
        same_dim(self.dim, o.dim)?;
        if self.grade != o.grade {
            return Err(FormError::GradeMismatch {
                expected: self.grade,
                found: o.grade,
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, FormError> {
        self.check_same_shape(o)?;
        let mut acc: BTreeMap<IndexTuple, Vec<ScalarExpr>> = BTreeMap::new();
        for (t, c) in self.coeffs.iter().chain(o.coeffs.iter()) {
            acc.entry(*t).or_default().push(c.clone());
        }
        Ok(Self::from_sums(self.dim, self.grade, acc))
    }

    pub fn sub(&self, o: &Self) -> Result<Self, FormError> {
        self.add(&o.neg())
    }

    /// Exterior product with the sign of the index-sorting permutation.
    pub fn wedge(&self, o: &Self) -> Result<Self, FormError> {
        same_dim(self.dim, o.dim)?;
        let grade = self.grade + o.grade;
        if grade > self.dim {
            return Ok(Self::zero(self.dim, self.dim + 1));
        }
        let mut acc: BTreeMap<IndexTuple, Vec<ScalarExpr>> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                if a.is_disjoint(*b) {
                    acc.entry(a.union(*b))
                        .or_default()
                        .push(sign_expr(a.concat_sign(*b), ca * cb));
                }
            }
        }
        Ok(Self::from_sums(self.dim, grade, acc))
    }

    /// Contraction of `target` by `self`: components
    /// `Σ_K self^K · target_{K I}` over ordered `K`.
    pub fn contract<W>(&self, target: &Multi<W>) -> Result<Multi<W>, FormError> {
        same_dim(self.dim, target.dim)?;
        if self.grade > target.grade {
            return Ok(Multi::zero(target.dim, 0));
        }
        let grade = target.grade - self.grade;
        let mut acc: BTreeMap<IndexTuple, Vec<ScalarExpr>> = BTreeMap::new();
        for (k, ck) in &self.coeffs {
            for (j, cj) in &target.coeffs {
                if j.0 & k.0 == k.0 {
                    let rest = j.without(*k);
                    acc.entry(rest)
                        .or_default()
                        .push(sign_expr(k.concat_sign(rest), ck * cj));
                }
            }
        }
        Ok(Multi::from_sums(target.dim, grade, acc))
    }
}

impl PForm {
    /// Coordinate 1-form `dx^i`.
    pub fn dx(dim: usize, i: usize) -> Self {
        Self::basis(dim, IndexTuple::single(i))
    }

    /// Exterior derivative over the chart coordinates `1..=dim`.
    pub fn d(&self) -> PForm {
        if self.grade >= self.dim {
            return PForm::zero(self.dim, self.dim + 1);
        }
        let mut acc: BTreeMap<IndexTuple, Vec<ScalarExpr>> = BTreeMap::new();
        for (t, c) in &self.coeffs {
            for k in 1..=self.dim {
                if t.contains(k) {
                    continue;
                }
                let dc = c.diff(ChartVar::from_index(k - 1).expect("chart index"));
                if dc.is_literal_zero() {
                    continue;
                }
                let kt = IndexTuple::single(k);
                acc.entry(kt.union(*t))
                    .or_default()
                    .push(sign_expr(kt.concat_sign(*t), dc));
            }
        }
        PForm::from_sums(self.dim, self.grade + 1, acc)
    }

    /// Dual pairing `⟨α, t⟩`.
    pub fn pairing(&self, t: &PVector) -> Result<ScalarExpr, FormError> {
        same_dim(self.dim, t.dim)?;
        if self.grade != t.grade {
            return Err(FormError::GradeMismatch {
                expected: self.grade,
                found: t.grade,
            });
        }
        let terms = self
            .coeffs
            .iter()
            .filter_map(|(k, c)| t.coeffs.get(k).map(|d| c * d));
        Ok(ScalarExpr::sum(terms).normalize())
    }
}

impl PVector {
    /// Coordinate vector `∂_i`.
    pub fn partial_basis(dim: usize, i: usize) -> Self {
        Self::basis(dim, IndexTuple::single(i))
    }

    /// `i(x)α` for a vector `x`.
    pub fn insert(&self, a: &PForm) -> Result<PForm, FormError> {
        if self.grade != 1 {
            return Err(FormError::GradeMismatch {
                expected: 1,
                found: self.grade,
            });
        }
        if a.grade == 0 {
            return Ok(PForm::zero(a.dim, 0));
        }
        self.contract(a)
    }

    /// `i(t)α` by the component formula.
    pub fn insert_multi(&self, a: &PForm) -> Result<PForm, FormError> {
        self.contract(a)
    }

    /// Lie bracket `[X, Y]` of vector fields.
    pub fn bracket(&self, o: &PVector) -> Result<PVector, FormError> {
        same_dim(self.dim, o.dim)?;
        let (x, y) = (self.components(), o.components());
        let apply = |v: &[ScalarExpr], f: &ScalarExpr| {
            ScalarExpr::sum(
                v.iter()
                    .enumerate()
                    .map(|(k, vk)| vk * &f.diff(ChartVar::from_index(k).expect("chart index"))),
            )
        };
        let c: Vec<ScalarExpr> = (0..self.dim)
            .map(|i| apply(&x, &y[i]) - apply(&y, &x[i]))
            .collect();
        Ok(PVector::from_components(&c))
    }

    /// Divergence of a vector field.
    pub fn divergence(&self) -> ScalarExpr {
        let c = self.components();
        ScalarExpr::sum(
            c.iter()
                .enumerate()
                .map(|(k, ck)| ck.diff(ChartVar::from_index(k).expect("chart index"))),
        )
        .normalize()
    }

    /// Cartan's formula `L_X α = i(X) dα + d i(X) α`.
    pub fn lie_derivative(&self, a: &PForm) -> Result<PForm, FormError> {
        let first = if a.grade < a.dim {
            self.insert(&a.d())?
        } else {
            PForm::zero(a.dim, a.grade)
        };
        let second = if a.grade > 0 {
            self.insert(a)?.d()
        } else {
            PForm::zero(a.dim, a.grade)
        };
        first.add(&second)
    }
}

impl<V: Variance> fmt::Display for Multi<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (t, c)) in self.coeffs.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            let names: Vec<&str> = t
                .indices()
                .into_iter()
                .map(|i| (V::BASIS)(self.dim, i))
                .collect();
            if !names.is_empty() {
                write!(f, " {}", names.join("^"))?;
            }
        }
        Ok(())
    }
}

impl<V: Variance> fmt::Debug for Multi<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={} p={}] {}", self.dim, self.grade, self)
    }
}

/// Form with values in ℝ² written on the basis `ε¹, ε²`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VValuedForm {
    pub e1: PForm,
    pub e2: PForm,
}

/// 2×2 matrix acting on the value space ℝ².
pub type Mat2 = [[ScalarExpr; 2]; 2];

impl VValuedForm {
    pub fn new(e1: PForm, e2: PForm) -> Result<Self, FormError> {
        e1.check_same_shape(&e2)?;
        Ok(VValuedForm { e1, e2 })
    }

    pub fn dim(&self) -> usize {
        self.e1.dim
    }

    pub fn grade(&self) -> usize {
        self.e1.grade
    }

    pub fn map_forms(&self, f: impl Fn(&PForm) -> PForm) -> Self {
        VValuedForm {
            e1: f(&self.e1),
            e2: f(&self.e2),
        }
    }

    pub fn d(&self) -> Self {
        self.map_forms(PForm::d)
    }

    pub fn add(&self, o: &Self) -> Result<Self, FormError> {
        Ok(VValuedForm {
            e1: self.e1.add(&o.e1)?,
            e2: self.e2.add(&o.e2)?,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, FormError> {
        Ok(VValuedForm {
            e1: self.e1.sub(&o.e1)?,
            e2: self.e2.sub(&o.e2)?,
        })
    }

    /// Push-forward `ψ∗Ω` by a linear map of the value space.
    pub fn push(&self, m: &Mat2) -> Self {
        let row = |r: &[ScalarExpr; 2]| {
            self.e1
                .scale(&r[0])
                .add(&self.e2.scale(&r[1]))
                .expect("components share shape")
        };
        VValuedForm {
            e1: row(&m[0]),
            e2: row(&m[1]),
        }
    }

    /// `∧(a, b)`: the `ε¹∧ε²` coefficient `a¹∧b² − a²∧b¹`.
    pub fn vwedge(&self, o: &Self) -> Result<PForm, FormError> {
        self.e1.wedge(&o.e2)?.sub(&self.e2.wedge(&o.e1)?)
    }

    pub fn is_zero_with(&self, opts: &ZeroOptions) -> ZeroVerdict {
        ZeroVerdict::combine([self.e1.is_zero_with(opts), self.e2.is_zero_with(opts)])
    }
}

impl fmt::Display for VValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] e1 + [{}] e2", self.e1, self.e2)
    }
}

/// The Euclidean identification of a vector field on ℝ³ with a 1-form.
pub fn vector_to_one_form(v: &[ScalarExpr; 3]) -> PForm {
    PForm::from_components(v)
}

pub fn one_form_to_vector(a: &PForm) -> Result<[ScalarExpr; 3], FormError> {
    same_dim(a.dim, 3)?;
    if a.grade != 1 {
        return Err(FormError::GradeMismatch {
            expected: 1,
            found: a.grade,
        });
    }
    let c = a.components();
    Ok([c[0].clone(), c[1].clone(), c[2].clone()])
}

/// Euclidean Hodge star on ℝ³: `*e^I = sign(I, Iᶜ) e^{Iᶜ}`.
pub fn euclid_star(a: &PForm) -> Result<PForm, FormError> {
    same_dim(a.dim, 3)?;
    let parts = a.coeffs.iter().map(|(t, c)| {
        let comp = t.complement(3);
        (comp, sign_expr(t.concat_sign(comp), c.clone()))
    });
    Ok(PForm::from_parts(3, 3 - a.grade, parts))
}

/// Euclidean codifferential on ℝ³, `δ = (−1)^{n(p+1)+1} * d *`.
pub fn euclid_codifferential(a: &PForm) -> Result<PForm, FormError> {
    if a.grade == 0 {
        return Ok(PForm::zero(3, 0));
    }
    let r = euclid_star(&euclid_star(a)?.d())?;
    Ok(if (3 * (a.grade + 1) + 1) % 2 == 1 {
        r.neg()
    } else {
        r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn dx(i: usize) -> PForm {
        PForm::dx(4, i)
    }

    fn del(i: usize) -> PVector {
        PVector::partial_basis(4, i)
    }

    fn t(idx: &[usize]) -> IndexTuple {
        IndexTuple::sorted(idx).unwrap().0
    }

    #[test]
    fn basis_order() {
        let two: Vec<String> = IndexTuple::all(4, 2)
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(two, ["12", "13", "23", "14", "24", "34"]);
        let three: Vec<String> = IndexTuple::all(4, 3)
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(three, ["123", "124", "134", "234"]);
        assert_eq!(IndexTuple::sorted(&[2, 1]), Some((t(&[1, 2]), -1)));
        assert_eq!(IndexTuple::sorted(&[3, 1, 2]), Some((t(&[1, 2, 3]), 1)));
        assert_eq!(IndexTuple::sorted(&[1, 1]), None);
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(dx(1).wedge(&dx(2)).unwrap(), PForm::basis(4, t(&[1, 2])));
        assert_eq!(
            dx(2).wedge(&dx(1)).unwrap(),
            PForm::basis(4, t(&[1, 2])).neg()
        );
        let vol = dx(1)
            .wedge(&dx(2))
            .unwrap()
            .wedge(&dx(3).wedge(&dx(4)).unwrap())
            .unwrap();
        assert_eq!(vol, PForm::volume(4));
        let over = PForm::volume(4).wedge(&dx(1)).unwrap();
        assert!(over.is_empty());
        assert_eq!(over.grade(), 5);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            PForm::dx(3, 1).wedge(&dx(1)),
            Err(FormError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn derivative_of_function_is_gradient() {
        let u = PForm::scalar(4, parse("x^2*y + sin(xi)").unwrap());
        let du = u.d();
        assert_eq!(du.coeff(t(&[1])), parse("2*x*y").unwrap().normalize());
        assert_eq!(du.coeff(t(&[2])), parse("x^2").unwrap().normalize());
        assert!(du.coeff(t(&[3])).is_literal_zero());
        assert_eq!(du.coeff(t(&[4])), parse("cos(xi)").unwrap().normalize());
        assert!(du.d().is_empty());
    }

    #[test]
    fn d_squared_on_travelling_wave() {
        let a = PForm::basis(4, t(&[1, 4])).scale(&parse("cos(z - xi)").unwrap());
        let da = a.d();
        assert_eq!(
            da.coeff(t(&[1, 3, 4])),
            parse("sin(z - xi)").unwrap().normalize()
        );
        assert!(da.d().is_empty());
    }

    #[test]
    fn pairing_examples() {
        let dxdy = PForm::basis(4, t(&[1, 2]));
        assert!(dxdy
            .pairing(&PVector::basis(4, t(&[1, 2])))
            .unwrap()
            .is_literal_one());
        assert!(dxdy
            .pairing(&PVector::basis(4, t(&[1, 3])))
            .unwrap()
            .is_literal_zero());
        assert!(PForm::volume(4)
            .pairing(&PVector::volume(4))
            .unwrap()
            .is_literal_one());
        assert!(dxdy.pairing(&del(1)).is_err());
    }

    #[test]
    fn insertion_examples() {
        let dxdy = PForm::basis(4, t(&[1, 2]));
        assert_eq!(del(1).insert(&dxdy).unwrap(), dx(2));
        assert_eq!(del(2).insert(&dxdy).unwrap(), dx(1).neg());
        assert!(del(3).insert(&dxdy).unwrap().is_empty());
        let dxdydz = PForm::basis(4, t(&[1, 2, 3]));
        let dxdy_v = PVector::basis(4, t(&[1, 2]));
        assert!(dxdy_v
            .insert_multi(&dxdy)
            .unwrap()
            .scalar_value()
            .is_literal_one());
        assert_eq!(dxdy_v.insert_multi(&dxdydz).unwrap(), dx(3));
        assert_eq!(
            dxdy_v.insert_multi(&dxdydz).unwrap(),
            del(2).insert(&del(1).insert(&dxdydz).unwrap()).unwrap()
        );
        assert!(dxdy_v
            .insert_multi(&PForm::basis(4, t(&[3, 4])))
            .unwrap()
            .is_empty());
        assert!(dxdy_v.insert_multi(&dx(1)).unwrap().is_empty());
    }

    #[test]
    fn euclidean_star_and_codifferential() {
        let a = vector_to_one_form(&[
            parse("x^2").unwrap(),
            parse("x*y").unwrap(),
            parse("z*xi").unwrap(),
        ]);
        let star = euclid_star(&a).unwrap();
        assert_eq!(star.coeff(t(&[2, 3])), parse("x^2").unwrap().normalize());
        assert_eq!(star.coeff(t(&[1, 3])), parse("-(x*y)").unwrap().normalize());
        assert_eq!(euclid_star(&star).unwrap(), a);
        let delta = euclid_codifferential(&a).unwrap().scalar_value();
        assert!((delta + parse("3*x + xi").unwrap()).is_zero().is_symbolic());
    }

    #[test]
    fn vwedge_of_equal_components_vanishes() {
        let f = PForm::basis(4, t(&[1, 2])).scale(&parse("cos(z - xi)").unwrap());
        let omega = VValuedForm::new(f.clone(), f).unwrap();
        assert!(omega.vwedge(&omega).unwrap().is_empty());
    }

    #[test]
    fn lie_bracket_of_rotations() {
        let rz = PVector::from_components(&[
            -ScalarExpr::y(),
            ScalarExpr::x(),
            ScalarExpr::zero(),
            ScalarExpr::zero(),
        ]);
        let rx = PVector::from_components(&[
            ScalarExpr::zero(),
            -ScalarExpr::z(),
            ScalarExpr::y(),
            ScalarExpr::zero(),
        ]);
        let b = rz.bracket(&rx).unwrap();
        let expected = PVector::from_components(&[
            ScalarExpr::z(),
            ScalarExpr::zero(),
            -ScalarExpr::x(),
            ScalarExpr::zero(),
        ]);
        assert_eq!(b, expected.neg());
    }
}
