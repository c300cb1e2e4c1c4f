//! Linear structures on ℝ⁴ generated by the complex structure `Φ`.
//!
//! On the 2-form basis `e¹…e⁶ = dx∧dy, dx∧dz, dy∧dz, dx∧dξ, dy∧dξ, dz∧dξ`
//! the complex structure acts as `Φ(eᵏ) = (−1)ᵏ e⁷⁻ᵏ`. Everything else is
//! built from `Φ`, the Poincaré isomorphisms and the diagonal map
//! `φ(dxᵘ) = λᵘ ∂ᵤ` with `λ = (−1, −1, −1, 1)`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::expr::ScalarExpr;
use crate::forms::{FormError, IndexTuple, PForm, PVector};

/// Eigenvalues of `φ`.
pub const LAMBDA: [i64; 4] = [-1, -1, -1, 1];

fn require_dim4(dim: usize) -> Result<(), FormError> {
    if dim == 4 {
        Ok(())
    } else {
        Err(FormError::DimensionMismatch {
            left: dim,
            right: 4,
        })
    }
}

fn require_grade(found: usize, range: std::ops::RangeInclusive<usize>) -> Result<(), FormError> {
    if range.contains(&found) {
        Ok(())
    } else {
        Err(FormError::GradeMismatch {
            expected: *range.start(),
            found,
        })
    }
}

/// `ω* = dx∧dy∧dz∧dξ`.
pub fn volume_form() -> PForm {
    PForm::volume(4)
}

/// `ω = ∂x∧∂y∧∂z∧∂ξ`.
pub fn volume_vector() -> PVector {
    PVector::volume(4)
}

/// The complex structure on 2-forms.
pub fn phi(a: &PForm) -> Result<PForm, FormError> {
    require_dim4(a.dim())?;
    require_grade(a.grade(), 2..=2)?;
    let basis = IndexTuple::all(4, 2);
    let terms = a.iter().map(|(t, c)| {
        let k = basis.iter().position(|b| *b == t).expect("2-form basis") + 1;
        let c = if k % 2 == 1 { -c.clone() } else { c.clone() };
        (basis[6 - k].indices(), c)
    });
    PForm::from_terms(4, 2, terms)
}

/// `𝔓_p(t)`: iterated insertion of `t` into `ω*`.
pub fn poincare_down(t: &PVector) -> Result<PForm, FormError> {
    require_dim4(t.dim())?;
    require_grade(t.grade(), 1..=4)?;
    t.contract(&volume_form())
}

/// `𝔓^p(α)`: iterated insertion of `α` into `ω`.
pub fn poincare_up(a: &PForm) -> Result<PVector, FormError> {
    require_dim4(a.dim())?;
    require_grade(a.grade(), 1..=4)?;
    a.contract(&volume_vector())
}

/// `𝔇 = −𝔓∘Φ` on 2-forms.
pub fn d_operator(a: &PForm) -> Result<PVector, FormError> {
    Ok(poincare_up(&phi(a)?)?.neg())
}

/// `∧ᵖφ` with a given eigenvalue vector.
pub fn varphi_with(lambda: &[ScalarExpr; 4], a: &PForm) -> Result<PVector, FormError> {
    require_dim4(a.dim())?;
    let terms = a.iter().map(|(t, c)| {
        let factor = t
            .indices()
            .iter()
            .fold(ScalarExpr::one(), |acc, &i| acc * lambda[i - 1].clone());
        (t.indices(), factor * c.clone())
    });
    PVector::from_terms(4, a.grade(), terms)
}

/// `∧ᵖφ` for `1 ≤ p ≤ 4`.
pub fn varphi(a: &PForm) -> Result<PVector, FormError> {
    require_grade(a.grade(), 1..=4)?;
    varphi_with(&LAMBDA.map(ScalarExpr::int), a)
}

/// `hᵖ(α, β) = ⟨∧ᵖφ α, β⟩`.
pub fn h_form(a: &PForm, b: &PForm) -> Result<ScalarExpr, FormError> {
    if a.grade() != b.grade() {
        return Err(FormError::GradeMismatch {
            expected: a.grade(),
            found: b.grade(),
        });
    }
    b.pairing(&varphi(a)?)
}

/// `h̃²(α, β)`, defined by `α∧Φβ = −h̃²(α, β) ω*`.
pub fn h_tilde2(a: &PForm, b: &PForm) -> Result<ScalarExpr, FormError> {
    require_grade(a.grade(), 2..=2)?;
    let top = a.wedge(&phi(b)?)?;
    Ok((-top.coeff(IndexTuple::all(4, 4)[0])).normalize())
}

/// `⊛_p = −𝔓∘∧ᵖφ`, extended to functions by `⊛₀ f = f ω*`.
pub fn circledast(a: &PForm) -> Result<PForm, FormError> {
    require_dim4(a.dim())?;
    if a.grade() == 0 {
        return Ok(volume_form().scale(&a.scalar_value()));
    }
    Ok(poincare_down(&varphi(a)?)?.neg())
}

/// Inverse of [`circledast`]; maps `(4−p)`-forms back to `p`-forms.
pub fn circledast_inv(a: &PForm) -> Result<PForm, FormError> {
    require_dim4(a.dim())?;
    let p = 4 - a.grade();
    // ⊛ sends each basis element to ± one basis element, so the inverse
    // is read off the table.
    let mut terms = Vec::new();
    for t in IndexTuple::all(4, p) {
        let image = circledast(&PForm::basis(4, t))?;
        let (target, sign) = image
            .iter()
            .next()
            .map(|(u, s)| (u, s.clone()))
            .expect("⊛ is invertible");
        let c = a.coeff(target);
        if !c.is_literal_zero() {
            terms.push((t.indices(), c * sign));
        }
    }
    PForm::from_terms(4, p, terms)
}

/// Codifferential `δ = (−1)ᵖ ⊛⁻¹ d ⊛` on `p`-forms, `1 ≤ p ≤ 4`.
pub fn codifferential(a: &PForm) -> Result<PForm, FormError> {
    require_grade(a.grade(), 1..=4)?;
    let r = circledast_inv(&circledast(a)?.d())?;
    Ok(if a.grade() % 2 == 1 { r.neg() } else { r })
}

/// Diagonal eigenvalue vectors over `{±1, ±2, ±1/2}⁴` with `∧²φ = 𝔇`.
pub fn diagonal_roots_of_d() -> Vec<[BigRational; 4]> {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let candidates = [q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(1, 2), q(-1, 2)];
    let d_diag: Vec<(usize, usize, BigRational)> = IndexTuple::all(4, 2)
        .into_iter()
        .map(|t| {
            let image = d_operator(&PForm::basis(4, t)).expect("basis 2-form");
            let v = image
                .coeff(t)
                .as_rational()
                .cloned()
                .expect("rational table");
            let idx = t.indices();
            (idx[0] - 1, idx[1] - 1, v)
        })
        .collect();
    let mut out = Vec::new();
    let n = candidates.len();
    for code in 0..n.pow(4) {
        let lambda: [BigRational; 4] =
            std::array::from_fn(|i| candidates[(code / n.pow(i as u32)) % n].clone());
        if d_diag
            .iter()
            .all(|(a, b, v)| &lambda[*a] * &lambda[*b] == *v)
        {
            out.push(lambda);
        }
    }
    out
}

/// Operator matrix: `rows[i][j]` is the coefficient of output basis `i` in
/// the image of input basis `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub grade: usize,
    pub rows: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTables {
    /// Basis labels per grade, e.g. `"12"` for `dx∧dy`.
    pub basis: Vec<Vec<String>>,
    pub lambda: [i64; 4],
    pub phi: Table,
    pub d_operator: Table,
    pub h_tilde2: Table,
    pub poincare_down: Vec<Table>,
    pub poincare_up: Vec<Table>,
    pub wedge_phi: Vec<Table>,
    pub circledast: Vec<Table>,
    pub h: Vec<Table>,
    pub signatures: Vec<Vec<i64>>,
}

fn int(e: &ScalarExpr) -> i64 {
    let q = e.as_rational().expect("structure tables are rational");
    assert!(q.is_integer(), "structure tables are integral");
    q.to_integer().to_i64().expect("small entry")
}

fn matrix<W>(
    grade: usize,
    out_grade: usize,
    op: impl Fn(&PForm) -> Result<crate::forms::Multi<W>, FormError>,
) -> Table {
    let inputs = IndexTuple::all(4, grade);
    let outputs = IndexTuple::all(4, out_grade);
    let images: Vec<_> = inputs
        .iter()
        .map(|t| op(&PForm::basis(4, *t)).expect("basis input"))
        .collect();
    let rows = outputs
        .iter()
        .map(|o| images.iter().map(|img| int(&img.coeff(*o))).collect())
        .collect();
    Table { grade, rows }
}

fn bilinear(grade: usize, f: impl Fn(&PForm, &PForm) -> Result<ScalarExpr, FormError>) -> Table {
    let basis = IndexTuple::all(4, grade);
    let rows = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| int(&f(&PForm::basis(4, *a), &PForm::basis(4, *b)).expect("basis pair")))
                .collect()
        })
        .collect();
    Table { grade, rows }
}

impl StructureTables {
    fn build() -> Self {
        let grades = 1..=4usize;
        let h: Vec<Table> = grades.clone().map(|p| bilinear(p, h_form)).collect();
        let signatures = h
            .iter()
            .map(|t| (0..t.rows.len()).map(|i| t.rows[i][i]).collect())
            .collect();
        StructureTables {
            basis: (0..=4)
                .map(|p| {
                    IndexTuple::all(4, p)
                        .iter()
                        .map(|t| t.to_string())
                        .collect()
                })
                .collect(),
            lambda: LAMBDA,
            phi: matrix(2, 2, phi),
            d_operator: matrix(2, 2, d_operator),
            h_tilde2: bilinear(2, h_tilde2),
            poincare_down: grades
                .clone()
                .map(|p| {
                    let inputs = IndexTuple::all(4, p);
                    let outputs = IndexTuple::all(4, 4 - p);
                    let images: Vec<_> = inputs
                        .iter()
                        .map(|t| poincare_down(&PVector::basis(4, *t)).expect("basis"))
                        .collect();
                    let rows = outputs
                        .iter()
                        .map(|o| images.iter().map(|i| int(&i.coeff(*o))).collect())
                        .collect();
                    Table { grade: p, rows }
                })
                .collect(),
            poincare_up: grades
                .clone()
                .map(|p| matrix(p, 4 - p, poincare_up))
                .collect(),
            wedge_phi: grades.clone().map(|p| matrix(p, p, varphi)).collect(),
            circledast: grades.map(|p| matrix(p, 4 - p, circledast)).collect(),
            h,
            signatures,
        }
    }
}

/// The tables, computed once.
pub fn tables() -> &'static StructureTables {
    static TABLES: OnceLock<StructureTables> = OnceLock::new();
    TABLES.get_or_init(StructureTables::build)
}
