//! Vacuum Maxwell theory in three formulations: the classical 3-d
//! equations, the ℝ²-valued 1-form `ω = E⊗ε¹ + B⊗ε²` with the complex
//! structure `𝓘`, and the 4-d pair `dF = 0, d(ΦF) = 0`.
//!
//! Units are Gaussian with `c = 1` absorbed into `ξ = ct`.

use std::fmt;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use thiserror::Error;

use crate::expr::{
    parse_decimal, parse_with_params, ChartVar, ScalarExpr, ZeroOptions, ZeroVerdict,
};
use crate::forms::{
    euclid_codifferential, euclid_star, FormError, IndexTuple, Mat2, PForm, VValuedForm,
};
use crate::structures;

pub type Vec3 = [ScalarExpr; 3];

const SPACE: [ChartVar; 3] = [ChartVar::X, ChartVar::Y, ChartVar::Z];

pub fn curl(v: &Vec3) -> Vec3 {
    let d = |i: usize, j: usize| v[i].diff(SPACE[j]);
    [d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1)]
}

pub fn div(v: &Vec3) -> ScalarExpr {
    ScalarExpr::sum((0..3).map(|i| v[i].diff(SPACE[i])))
}

pub fn dot(a: &Vec3, b: &Vec3) -> ScalarExpr {
    ScalarExpr::sum((0..3).map(|i| &a[i] * &b[i]))
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn map3(v: &Vec3, f: impl Fn(&ScalarExpr) -> ScalarExpr) -> Vec3 {
    [f(&v[0]), f(&v[1]), f(&v[2])]
}

fn zip3(a: &Vec3, b: &Vec3, f: impl Fn(&ScalarExpr, &ScalarExpr) -> ScalarExpr) -> Vec3 {
    [f(&a[0], &b[0]), f(&a[1], &b[1]), f(&a[2], &b[2])]
}

fn dxi(v: &Vec3) -> Vec3 {
    map3(v, |c| c.diff(ChartVar::Xi))
}

fn normalize3(v: Vec3) -> Vec3 {
    map3(&v, ScalarExpr::normalize)
}

fn verdict3(v: &Vec3, opts: &ZeroOptions) -> ZeroVerdict {
    ZeroVerdict::combine(v.iter().map(|c| c.is_zero_with(opts)))
}

/// Electromagnetic field `(E, B)` as functions of `x, y, z, ξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EMField3 {
    pub e: Vec3,
    pub b: Vec3,
}

impl EMField3 {
    pub fn new(e: Vec3, b: Vec3) -> Self {
        EMField3 { e, b }
    }

    pub fn zero() -> Self {
        let z = || [ScalarExpr::zero(), ScalarExpr::zero(), ScalarExpr::zero()];
        EMField3 { e: z(), b: z() }
    }

    /// `E = (cos(z−ξ), 0, 0)`, `B = (0, cos(z−ξ), 0)`.
    pub fn plane_wave() -> Self {
        let phase = ScalarExpr::cos(ScalarExpr::z() - ScalarExpr::xi());
        EMField3 {
            e: [phase.clone(), ScalarExpr::zero(), ScalarExpr::zero()],
            b: [ScalarExpr::zero(), phase, ScalarExpr::zero()],
        }
    }

    pub fn normalized(&self) -> Self {
        EMField3 {
            e: normalize3(self.e.clone()),
            b: normalize3(self.b.clone()),
        }
    }

    /// `(E, B) ↦ (aE + mB, bE + nB)`.
    pub fn linear_mix(
        &self,
        a: &ScalarExpr,
        b: &ScalarExpr,
        m: &ScalarExpr,
        n: &ScalarExpr,
    ) -> Self {
        EMField3 {
            e: zip3(&self.e, &self.b, |e, bb| a * e + m * bb),
            b: zip3(&self.e, &self.b, |e, bb| b * e + n * bb),
        }
        .normalized()
    }

    /// `Ẽ = E cos α − B sin α`, `B̃ = E sin α + B cos α`.
    pub fn duality_rotate(&self, alpha: &Angle) -> Self {
        let (c, s) = (alpha.cos(), alpha.sin());
        self.linear_mix(&c, &s, &-s.clone(), &c)
    }

    /// The special duality `(E, B) ↦ (−B, E)`.
    pub fn special_duality(&self) -> Self {
        EMField3 {
            e: map3(&self.b, |c| -c),
            b: self.e.clone(),
        }
        .normalized()
    }

    pub fn residual_3d(&self) -> Maxwell3dResidual {
        Maxwell3dResidual {
            faraday: normalize3(zip3(&curl(&self.e), &dxi(&self.b), |a, b| a + b)),
            gauss_b: div(&self.b).normalize(),
            ampere: normalize3(zip3(&curl(&self.b), &dxi(&self.e), |a, b| a - b)),
            gauss_e: div(&self.e).normalize(),
        }
    }

    pub fn omega(&self) -> VValuedForm {
        VValuedForm::new(
            PForm::from_components(&self.e),
            PForm::from_components(&self.b),
        )
        .expect("two 1-forms on R3")
    }

    /// `I₁ = B² − E²`, `I₂ = 2E·B`.
    pub fn invariants(&self) -> Invariants {
        Invariants {
            i1: (dot(&self.b, &self.b) - dot(&self.e, &self.e)).normalize(),
            i2: (ScalarExpr::int(2) * dot(&self.e, &self.b)).normalize(),
        }
    }

    /// `w = (E² + B²)/8π`, `S = E×B/4π`.
    pub fn energy_momentum(&self) -> EnergyMomentum {
        let eight_pi = ScalarExpr::int(8) * ScalarExpr::pi();
        let four_pi = ScalarExpr::int(4) * ScalarExpr::pi();
        EnergyMomentum {
            w: (dot(&self.e, &self.e) + dot(&self.b, &self.b))
                .div(&eight_pi)
                .normalize(),
            s: normalize3(map3(&cross(&self.e, &self.b), |c| c.div(&four_pi))),
        }
    }

    /// The 2-form `F` with `F₁₂ = B³, F₁₃ = −B², F₂₃ = B¹, F_{k4} = Eᵏ`.
    pub fn build_f(&self) -> PForm {
        let [e1, e2, e3] = self.e.clone();
        let [b1, b2, b3] = self.b.clone();
        PForm::from_terms(
            4,
            2,
            [
                (vec![1, 2], b3),
                (vec![1, 3], -b2),
                (vec![2, 3], b1),
                (vec![1, 4], e1),
                (vec![2, 4], e2),
                (vec![3, 4], e3),
            ],
        )
        .expect("valid 2-form")
    }

    /// Reads `(E, B)` back from a 2-form through the same dictionary.
    pub fn from_f(f: &PForm) -> Self {
        let c = |i: &[usize]| f.component(i);
        EMField3 {
            e: [c(&[1, 4]), c(&[2, 4]), c(&[3, 4])],
            b: [c(&[2, 3]), -c(&[1, 3]), c(&[1, 2])],
        }
    }

    /// All eight residual checks of the three formulations.
    pub fn checks(&self, opts: &ZeroOptions) -> Vec<NamedResidual> {
        let r3 = self.residual_3d();
        let omega = omega_residual(&self.omega(), &istar_matrix());
        let f = self.build_f();
        let (df, dphif) = residual_4d(&f).expect("2-form on R4");
        let v3 = |name: &str, v: &Vec3| {
            NamedResidual::decide(name, format_vec3(v), || verdict3(v, opts))
        };
        let s = |name: &str, e: &ScalarExpr| {
            NamedResidual::decide(name, e.to_string(), || e.is_zero_with(opts))
        };
        vec![
            v3("3d.faraday", &r3.faraday),
            s("3d.gauss_b", &r3.gauss_b),
            v3("3d.ampere", &r3.ampere),
            s("3d.gauss_e", &r3.gauss_e),
            NamedResidual::decide("omega.curl", omega.curl.to_string(), || {
                omega.curl.is_zero_with(opts)
            }),
            NamedResidual::decide("omega.delta", omega.delta.to_string(), || {
                omega.delta.is_zero_with(opts)
            }),
            NamedResidual::decide("4d.dF", df.to_string(), || df.is_zero_with(opts)),
            NamedResidual::decide("4d.dPhiF", dphif.to_string(), || dphif.is_zero_with(opts)),
        ]
    }
}

pub fn format_vec3(v: &Vec3) -> String {
    format!("({}, {}, {})", v[0], v[1], v[2])
}

/// A residual with its rendering and zero verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedResidual {
    pub name: String,
    pub residual: String,
    pub verdict: ZeroVerdict,
    /// Time spent deciding the verdict.
    pub elapsed: Duration,
}

impl NamedResidual {
    pub fn new(name: &str, residual: String, verdict: ZeroVerdict) -> Self {
        NamedResidual {
            name: name.to_string(),
            residual,
            verdict,
            elapsed: Duration::ZERO,
        }
    }

    /// Runs the zero test and records how long it took.
    pub fn decide(name: &str, residual: String, judge: impl FnOnce() -> ZeroVerdict) -> Self {
        let start = Instant::now();
        let verdict = judge();
        NamedResidual {
            name: name.to_string(),
            residual,
            verdict,
            elapsed: start.elapsed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Maxwell3dResidual {
    /// `curl E + ∂B/∂ξ`
    pub faraday: Vec3,
    pub gauss_b: ScalarExpr,
    /// `curl B − ∂E/∂ξ`
    pub ampere: Vec3,
    pub gauss_e: ScalarExpr,
}

impl Maxwell3dResidual {
    pub fn verdict(&self, opts: &ZeroOptions) -> ZeroVerdict {
        ZeroVerdict::combine([
            verdict3(&self.faraday, opts),
            self.gauss_b.is_zero_with(opts),
            verdict3(&self.ampere, opts),
            self.gauss_e.is_zero_with(opts),
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub i1: ScalarExpr,
    pub i2: ScalarExpr,
}

impl Invariants {
    /// `Ĩ₁ = I₁ cos 2α + I₂ sin 2α`, `Ĩ₂ = −I₁ sin 2α + I₂ cos 2α`.
    pub fn rotate(&self, alpha: &Angle) -> Invariants {
        let (c, s) = (alpha.double().cos(), alpha.double().sin());
        Invariants {
            i1: (&self.i1 * &c + &self.i2 * &s).normalize(),
            i2: (-(&self.i1 * &s) + &self.i2 * &c).normalize(),
        }
    }

    pub fn sum_of_squares(&self) -> ScalarExpr {
        (self.i1.pow(2) + self.i2.pow(2)).normalize()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyMomentum {
    pub w: ScalarExpr,
    pub s: Vec3,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AngleError {
    #[error("cannot read angle `{0}`: {1}")]
    Invalid(String, String),
    #[error("angle `{0}` must be a constant")]
    NotConstant(String),
}

/// Duality rotation angle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Angle {
    /// A constant expression such as `pi/6`; multiples of `π/12` are exact.
    Exact(ScalarExpr),
    /// A named symbolic constant.
    Symbolic(String),
}

impl Angle {
    pub const SYMBOL: &'static str = "alpha";

    pub fn pi_twelfths(k: i64) -> Angle {
        Angle::Exact((ScalarExpr::ratio(k, 12) * ScalarExpr::pi()).normalize())
    }

    pub fn symbolic() -> Angle {
        Angle::Symbolic(Self::SYMBOL.to_string())
    }

    /// A float is taken as the exact rational it denotes.
    pub fn from_f64(v: f64) -> Option<Angle> {
        BigRational::from_f64(v).map(|q| Angle::Exact(ScalarExpr::rational(q)))
    }

    /// Reads `pi/4`, `5*pi/12`, `0.3` or `alpha`.
    pub fn parse(src: &str) -> Result<Angle, AngleError> {
        let trimmed = src.trim();
        if let Some(q) = parse_decimal(trimmed) {
            return Ok(Angle::Exact(ScalarExpr::rational(q)));
        }
        let e = parse_with_params(trimmed, &[Self::SYMBOL])
            .map_err(|e| AngleError::Invalid(src.into(), e.to_string()))?;
        let symbols = e.symbols();
        if symbols.is_empty() {
            return Ok(Angle::Exact(e));
        }
        if e == ScalarExpr::param(Self::SYMBOL) {
            return Ok(Angle::symbolic());
        }
        Err(AngleError::NotConstant(src.into()))
    }

    pub fn expr(&self) -> ScalarExpr {
        match self {
            Angle::Exact(e) => e.clone(),
            Angle::Symbolic(name) => ScalarExpr::param(name),
        }
    }

    pub fn cos(&self) -> ScalarExpr {
        ScalarExpr::cos(self.expr()).normalize()
    }

    pub fn sin(&self) -> ScalarExpr {
        ScalarExpr::sin(self.expr()).normalize()
    }

    pub fn double(&self) -> Angle {
        Angle::Exact((ScalarExpr::int(2) * self.expr()).normalize())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr())
    }
}

/// The complex structure of ℝ²: `𝓘(ε¹) = ε²`, `𝓘(ε²) = −ε¹`.
pub fn istar_matrix() -> Mat2 {
    [
        [ScalarExpr::zero(), ScalarExpr::int(-1)],
        [ScalarExpr::one(), ScalarExpr::zero()],
    ]
}

/// `𝓘∗ω`.
pub fn istar(w: &VValuedForm) -> VValuedForm {
    w.push(&istar_matrix())
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (&a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]).normalize())
    })
}

/// Inverse of a constant 2×2 matrix, if its determinant is a nonzero rational.
pub fn mat2_inverse(m: &Mat2) -> Option<Mat2> {
    let det = (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]).normalize();
    let det = det.as_rational().filter(|d| !d.is_zero())?.clone();
    let inv = ScalarExpr::rational(BigRational::from_integer(1.into()) / det);
    let s = |e: &ScalarExpr| (&inv * e).normalize();
    Some([
        [s(&m[1][1]), s(&-m[0][1].clone())],
        [s(&-m[1][0].clone()), s(&m[0][0])],
    ])
}

/// Residuals of `*dω − ∂ξ 𝓘∗ω = 0` and `δω = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaResidual {
    pub curl: VValuedForm,
    pub delta: VValuedForm,
}

impl OmegaResidual {
    pub fn verdict(&self, opts: &ZeroOptions) -> ZeroVerdict {
        ZeroVerdict::combine([self.curl.is_zero_with(opts), self.delta.is_zero_with(opts)])
    }
}

/// Residuals of the ℝ²-valued equations with a given complex structure.
pub fn omega_residual(w: &VValuedForm, complex: &Mat2) -> OmegaResidual {
    let star_d = w.d().map_forms(|f| euclid_star(f).expect("form on R3"));
    let dt = w.push(complex).map_forms(|f| f.partial(ChartVar::Xi));
    OmegaResidual {
        curl: star_d.sub(&dt).expect("1-forms on R3"),
        delta: w.map_forms(|f| euclid_codifferential(f).expect("1-form on R3")),
    }
}

/// `∧(ω, dω − *∂ξ 𝓘∗ω)`, the `ε¹∧ε²` coefficient.
pub fn poynting_balance(w: &VValuedForm) -> PForm {
    let dt = istar(w).map_forms(|f| euclid_star(&f.partial(ChartVar::Xi)).expect("form on R3"));
    w.vwedge(&w.d().sub(&dt).expect("2-forms on R3"))
        .expect("forms on R3")
}

/// `∧(ω, *𝓘∗ω)`.
pub fn energy_form(w: &VValuedForm) -> PForm {
    let s = istar(w).map_forms(|f| euclid_star(f).expect("form on R3"));
    w.vwedge(&s).expect("forms on R3")
}

/// `∧(ω, ω)`, whose star is `2 E×B`.
pub fn momentum_form(w: &VValuedForm) -> PForm {
    w.vwedge(w).expect("forms on R3")
}

/// `(dF, d(ΦF))`.
pub fn residual_4d(f: &PForm) -> Result<(PForm, PForm), FormError> {
    Ok((f.d(), structures::phi(f)?.d()))
}

/// `Ω = F⊗ε¹ + ΦF⊗ε²`.
pub fn equivariant_omega(f: &PForm) -> Result<VValuedForm, FormError> {
    VValuedForm::new(f.clone(), structures::phi(f)?)
}

/// `(Φ, 𝓘)`-equivariance of `Ω = F₁⊗ε¹ + F₂⊗ε²`: `ΦF₁ = F₂` and `ΦF₂ = −F₁`.
pub fn equivariance_defect(w: &VValuedForm) -> Result<VValuedForm, FormError> {
    let first = structures::phi(&w.e1)?.sub(&w.e2)?;
    let second = structures::phi(&w.e2)?.add(&w.e1)?;
    VValuedForm::new(first, second)
}

/// The map `f: Λ¹ → Λ³` with `f(dx) = −dy∧dz∧dξ`, `f(dy) = dx∧dz∧dξ`,
/// `f(dz) = −dx∧dy∧dξ`, `f(dξ) = −dx∧dy∧dz`.
pub fn f_map(a: &PForm) -> Result<PForm, FormError> {
    if a.dim() != 4 || a.grade() != 1 {
        return Err(FormError::GradeMismatch {
            expected: 1,
            found: a.grade(),
        });
    }
    let images: [(i64, [usize; 3]); 4] = [
        (-1, [2, 3, 4]),
        (1, [1, 3, 4]),
        (-1, [1, 2, 4]),
        (-1, [1, 2, 3]),
    ];
    let terms = (1..=4).map(|i| {
        let (sign, idx) = images[i - 1];
        (
            idx.to_vec(),
            ScalarExpr::int(sign) * a.coeff(IndexTuple::single(i)),
        )
    });
    PForm::from_terms(4, 3, terms)
}

/// `d f(dU)`, whose `ω*` coefficient is `−U_xx − U_yy − U_zz + U_ξξ`.
pub fn wave_f_map(u: &ScalarExpr) -> PForm {
    f_map(&PForm::scalar(4, u.clone()).d())
        .expect("1-form on R4")
        .d()
}
