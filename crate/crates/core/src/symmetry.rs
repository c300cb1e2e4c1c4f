//! Infinitesimal symmetries of the complex structure `Φ`.
//!
//! A vector field `X` is a symmetry when `L_X Φ = 0`, which is equivalent to
//! the conformal condition `L_X h² = −div X · h²` on the bilinear form `h²`.
//! The fifteen conformal generators and their closed-form flows live here,
//! together with numerical and symbolic cross-checks of the flows.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::{ChartVar, EvalError, Point4, ScalarExpr, ZeroOptions, ZeroVerdict};
use crate::forms::{FormError, IndexTuple, PForm, PVector};
use crate::maxwell::{residual_4d, NamedResidual};
use crate::structures::{h_form, phi};

/// Diagonal of `h¹`.
pub const H1: [i64; 4] = [-1, -1, -1, 1];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("flow is singular at {point}")]
    Singular { point: Point4 },
    #[error("flow is singular at {point}")]
    SingularExact { point: Point4<BigRational> },
    #[error("cannot evaluate flow: {0}")]
    Eval(#[from] EvalError),
    #[error("unknown flow family `{0}`")]
    UnknownFamily(String),
    #[error("flow family `{family}` takes {expected} parameter(s), got {found}")]
    Arity {
        family: String,
        expected: usize,
        found: usize,
    },
}

/// A vector field `X¹∂x + X²∂y + X³∂z + X⁴∂ξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField4(pub [ScalarExpr; 4]);

impl VectorField4 {
    pub fn new(c: [ScalarExpr; 4]) -> Self {
        VectorField4(c.map(|e| e.normalize()))
    }

    pub fn zero() -> Self {
        VectorField4(std::array::from_fn(|_| ScalarExpr::zero()))
    }

    /// `∂_μ` for `μ = 1..4`.
    pub fn partial(mu: usize) -> Self {
        VectorField4(std::array::from_fn(|i| {
            if i + 1 == mu {
                ScalarExpr::one()
            } else {
                ScalarExpr::zero()
            }
        }))
    }

    pub fn components(&self) -> &[ScalarExpr; 4] {
        &self.0
    }

    pub fn to_pvector(&self) -> PVector {
        PVector::from_components(&self.0)
    }

    pub fn from_pvector(v: &PVector) -> Result<Self, FormError> {
        if v.dim() != 4 || v.grade() != 1 {
            return Err(FormError::GradeMismatch {
                expected: 1,
                found: v.grade(),
            });
        }
        let c = v.components();
        Ok(VectorField4(std::array::from_fn(|i| c[i].clone())))
    }

    pub fn scale(&self, s: &ScalarExpr) -> Self {
        VectorField4::new(std::array::from_fn(|i| s * &self.0[i]))
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorField4::new(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        VectorField4::new(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    /// Jacobian `A[a][c] = ∂X^a/∂x^c`.
    pub fn jacobian(&self) -> [[ScalarExpr; 4]; 4] {
        std::array::from_fn(|a| self.0[a].gradient())
    }

    pub fn divergence(&self) -> ScalarExpr {
        self.to_pvector().divergence()
    }

    pub fn bracket(&self, o: &Self) -> Self {
        let b = self
            .to_pvector()
            .bracket(&o.to_pvector())
            .expect("vector fields on R4");
        VectorField4::from_pvector(&b).expect("bracket is a vector field")
    }

    /// `L_X α` by Cartan's formula.
    pub fn lie_form(&self, a: &PForm) -> Result<PForm, FormError> {
        self.to_pvector().lie_derivative(a)
    }

    pub fn eval(&self, p: &Point4) -> Result<[f64; 4], EvalError> {
        let mut out = [0.0; 4];
        for (o, c) in out.iter_mut().zip(&self.0) {
            *o = c.eval(p)?;
        }
        Ok(out)
    }

    pub fn is_zero_with(&self, opts: &ZeroOptions) -> ZeroVerdict {
        ZeroVerdict::combine(self.0.iter().map(|c| c.is_zero_with(opts)))
    }
}

impl fmt::Display for VectorField4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.0[0], self.0[1], self.0[2], self.0[3]
        )
    }
}

/// A 6×6 table on the bivector basis `12, 13, 23, 14, 24, 34`; holds both
/// `h²`-type bilinear forms and endomorphisms of 2-forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor22(pub [[ScalarExpr; 6]; 6]);

impl Tensor22 {
    pub fn from_fn(f: impl Fn(usize, usize) -> ScalarExpr) -> Self {
        Tensor22(std::array::from_fn(|i| {
            std::array::from_fn(|j| f(i, j).normalize())
        }))
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarExpr {
        &self.0[i][j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &ScalarExpr> {
        self.0.iter().flatten()
    }

    pub fn is_zero_with(&self, opts: &ZeroOptions) -> ZeroVerdict {
        ZeroVerdict::combine(self.entries().map(|e| e.is_zero_with(opts)))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..6).all(|i| (0..6).all(|j| (&self.0[i][j] - &self.0[j][i]).is_zero().is_zero()))
    }
}

impl fmt::Display for Tensor22 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn bivector_basis() -> Vec<IndexTuple> {
    IndexTuple::all(4, 2)
}

/// `h²` as a 6×6 table.
pub fn h2_table() -> Tensor22 {
    let basis = bivector_basis();
    Tensor22::from_fn(|i, j| {
        h_form(&PForm::basis(4, basis[i]), &PForm::basis(4, basis[j])).expect("2-forms on R4")
    })
}

/// Matrix of the derivation induced on bivectors by a 4×4 matrix `A`:
/// `Â(∂k∧∂l) = (A∂k)∧∂l + ∂k∧(A∂l)`.
fn induced_on_bivectors(a: &[[ScalarExpr; 4]; 4]) -> [[ScalarExpr; 6]; 6] {
    let basis = bivector_basis();
    let mut out: [[ScalarExpr; 6]; 6] =
        std::array::from_fn(|_| std::array::from_fn(|_| ScalarExpr::zero()));
    for (col, t) in basis.iter().enumerate() {
        let kl = t.indices();
        for slot in 0..2 {
            for m in 1..=4 {
                let mut idx = kl.clone();
                idx[slot] = m;
                let Some((target, sign)) = IndexTuple::sorted(&idx) else {
                    continue;
                };
                let row = basis
                    .iter()
                    .position(|b| *b == target)
                    .expect("bivector basis");
                let c = &a[m - 1][kl[slot] - 1];
                out[row][col] = if sign > 0 {
                    &out[row][col] + c
                } else {
                    &out[row][col] - c
                };
            }
        }
    }
    out
}

/// Coordinate Lie derivative of the contravariant form `h²` along `X`:
/// `(L_X H)^{IJ} = X(H^{IJ}) − Â^I_K H^{KJ} − H^{IK} Â^J_K`.
pub fn lie_derivative_h2(x: &VectorField4) -> Tensor22 {
    let h = h2_table();
    let a = induced_on_bivectors(&x.jacobian());
    Tensor22::from_fn(|i, j| {
        let transport =
            ScalarExpr::sum((0..6).map(|k| &a[i][k] * &h.0[k][j] + &h.0[i][k] * &a[j][k]));
        let along = ScalarExpr::sum((0..4).map(|c| &x.0[c] * &h.0[i][j].diff(ChartVar::ALL[c])));
        along - transport
    })
}

/// `L_X h² + div X · h²`; vanishes exactly for symmetries of `Φ`.
pub fn conformal_residual(x: &VectorField4) -> Tensor22 {
    let l = lie_derivative_h2(x);
    let h = h2_table();
    let div = x.divergence();
    Tensor22::from_fn(|i, j| &l.0[i][j] + &(&div * &h.0[i][j]))
}

/// `L_X Φ` as an endomorphism table: column `J` holds `(L_X Φ)(e^J)`.
pub fn lie_derivative_phi(x: &VectorField4) -> Result<Tensor22, FormError> {
    let basis = bivector_basis();
    let mut cols = Vec::with_capacity(6);
    for t in &basis {
        let e = PForm::basis(4, *t);
        cols.push(x.lie_form(&phi(&e)?)?.sub(&phi(&x.lie_form(&e)?)?)?);
    }
    Ok(Tensor22::from_fn(|i, j| cols[j].coeff(basis[i])))
}

const AXIS: [&str; 4] = ["x", "y", "z", "xi"];

/// The twelve component equations of the conformal condition, as
/// `(name, residual)` pairs. Six balance the divergence, six are
/// off-diagonal.
pub fn symmetry_pde_residuals(x: &VectorField4) -> Vec<(String, ScalarExpr)> {
    let a = x.jacobian();
    let div = x.divergence();
    let d = |i: usize, j: usize| a[i][j].clone();
    let mut out = Vec::with_capacity(12);
    for (i, j) in [(0, 1), (0, 3), (0, 2), (1, 3), (1, 2), (2, 3)] {
        let r = ScalarExpr::int(2) * (d(i, i) + d(j, j)) - div.clone();
        out.push((format!("balance.{}{}", AXIS[i], AXIS[j]), r.normalize()));
    }
    for (i, j) in [(0, 1), (0, 3), (0, 2), (1, 3), (1, 2), (2, 3)] {
        let r = if j == 3 {
            d(3, i) - d(i, 3)
        } else {
            d(j, i) + d(i, j)
        };
        out.push((format!("mixed.{}{}", AXIS[i], AXIS[j]), r.normalize()));
    }
    out
}

/// The 12 residual verdicts followed by the verdict of the full table
/// condition, as named residuals.
pub fn symmetry_checks(x: &VectorField4, opts: &ZeroOptions) -> Vec<NamedResidual> {
    let mut out: Vec<NamedResidual> = symmetry_pde_residuals(x)
        .into_iter()
        .map(|(name, r)| {
            NamedResidual::decide(&format!("pde.{name}"), r.to_string(), || {
                r.is_zero_with(opts)
            })
        })
        .collect();
    let table = conformal_residual(x);
    let rendered = table
        .entries()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    out.push(NamedResidual::decide(
        "conformal",
        format!("[{rendered}]"),
        || table.is_zero_with(opts),
    ));
    out
}

/// Classes of conformal generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorFamily {
    Translation,
    SpatialRotation,
    SpacetimeRotation,
    Dilatation,
    SpecialConformal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub family: GeneratorFamily,
    pub field: VectorField4,
}

fn coord(i: usize) -> ScalarExpr {
    ScalarExpr::var(ChartVar::ALL[i])
}

fn field(c: [ScalarExpr; 4]) -> VectorField4 {
    VectorField4::new(c)
}

/// `h¹(x, x) = −x² − y² − z² + ξ²`.
pub fn h1_square() -> ScalarExpr {
    ScalarExpr::sum((0..4).map(|i| ScalarExpr::int(H1[i]) * coord(i).pow(2)))
}

/// `X_μ = h¹(x,x)∂_μ − 2h¹_{μν}x^ν (x^σ∂_σ)`.
pub fn special_conformal_generator(mu: usize) -> VectorField4 {
    let q = h1_square();
    let lowered = ScalarExpr::int(2 * H1[mu - 1]) * coord(mu - 1);
    field(std::array::from_fn(|a| {
        let delta = if a + 1 == mu {
            q.clone()
        } else {
            ScalarExpr::zero()
        };
        delta - &lowered * &coord(a)
    }))
}

/// The fifteen generators: 4 translations, 3 spatial rotations, 3
/// space-time rotations, the dilatation and 4 special conformal fields.
pub fn conformal_generators() -> Vec<Generator> {
    use GeneratorFamily::*;
    let z = ScalarExpr::zero;
    let (x, y, zz, xi) = (coord(0), coord(1), coord(2), coord(3));
    let mut out = Vec::with_capacity(15);
    for mu in 1..=4 {
        out.push(Generator {
            name: format!("translation.{}", AXIS[mu - 1]),
            family: Translation,
            field: VectorField4::partial(mu),
        });
    }
    let rotations = [
        ("rotation.xy", [y.clone(), -x.clone(), z(), z()]),
        ("rotation.yz", [z(), zz.clone(), -y.clone(), z()]),
        ("rotation.zx", [-zz.clone(), z(), x.clone(), z()]),
    ];
    for (name, c) in rotations {
        out.push(Generator {
            name: name.into(),
            family: SpatialRotation,
            field: field(c),
        });
    }
    for i in 0..3 {
        let mut c: [ScalarExpr; 4] = std::array::from_fn(|_| z());
        c[i] = xi.clone();
        c[3] = coord(i);
        out.push(Generator {
            name: format!("boost.{}", AXIS[i]),
            family: SpacetimeRotation,
            field: field(c),
        });
    }
    out.push(Generator {
        name: "dilatation".into(),
        family: Dilatation,
        field: field(std::array::from_fn(coord)),
    });
    for mu in 1..=4 {
        out.push(Generator {
            name: format!("special_conformal.{}", AXIS[mu - 1]),
            family: SpecialConformal,
            field: special_conformal_generator(mu),
        });
    }
    out
}

/// Vector fields that are not symmetries of `Φ`.
pub fn non_symmetry_corpus() -> Vec<(String, VectorField4)> {
    let z = ScalarExpr::zero;
    let (x, y, zz, xi) = (coord(0), coord(1), coord(2), coord(3));
    let entries: Vec<(&str, [ScalarExpr; 4])> = vec![
        ("shear.x_dy", [z(), x.clone(), z(), z()]),
        ("quadratic.x", [x.pow(2), z(), z(), z()]),
        ("stretch.x", [x.clone(), z(), z(), z()]),
        ("stretch.xi", [z(), z(), z(), xi.clone()]),
        ("euclidean_boost.xy", [y.clone(), x.clone(), z(), z()]),
        ("compact_rotation.x_xi", [xi.clone(), z(), z(), -x.clone()]),
        ("sine.x", [ScalarExpr::sin(x.clone()), z(), z(), z()]),
        ("shear.z_dx", [zz.clone(), z(), z(), z()]),
        ("product.xy_dz", [z(), z(), &x * &y, z()]),
        (
            "exponential.xi",
            [z(), z(), z(), ScalarExpr::exp(xi.clone())],
        ),
    ];
    entries
        .into_iter()
        .map(|(n, c)| (n.to_string(), field(c)))
        .collect()
}

/// Solves `v = Σ cₖ bₖ` for linear vector fields with constant
/// Jacobians. Returns `None` if a field is not linear or `v` is outside
/// the span.
pub fn linear_decomposition(v: &VectorField4, basis: &[VectorField4]) -> Option<Vec<BigRational>> {
    let origin = Point4::<BigRational>::from_ints([0; 4]);
    let flatten = |f: &VectorField4| -> Option<Vec<BigRational>> {
        let jac = f.jacobian();
        let mut out = Vec::with_capacity(20);
        for a in 0..4 {
            out.push(f.0[a].eval_exact(&origin).ok()?);
            for c in 0..4 {
                if !jac[a][c]
                    .gradient()
                    .iter()
                    .all(|g| g.is_zero().is_symbolic())
                {
                    return None;
                }
                out.push(jac[a][c].eval_exact(&origin).ok()?);
            }
        }
        Some(out)
    };
    let target = flatten(v)?;
    let cols: Vec<Vec<BigRational>> = basis.iter().map(flatten).collect::<Option<_>>()?;
    let n = cols.len();
    let rows = target.len();
    // Augmented matrix, row-reduced over the rationals.
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            cols.iter()
                .map(|c| c[r].clone())
                .chain([target[r].clone()])
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..=n {
                    let sub = f.clone() * m[r][k].clone();
                    m[i][k] = m[i][k].clone() - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for (i, c) in pivots.into_iter().enumerate() {
        coeffs[c] = m[i][n].clone();
    }
    Some(coeffs)
}

/// A coordinate map `x^μ ↦ x^{μ'}`, possibly depending on parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowMap {
    pub images: [ScalarExpr; 4],
    /// Common denominator whose zeros make the map singular.
    pub denominator: Option<ScalarExpr>,
}

impl FlowMap {
    pub fn identity() -> Self {
        FlowMap {
            images: std::array::from_fn(coord),
            denominator: None,
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FlowMap) -> FlowMap {
        let images =
            std::array::from_fn(|i| self.images[i].substitute_chart(&inner.images).normalize());
        let denominator = match (&self.denominator, &inner.denominator) {
            (None, None) => None,
            (Some(d), None) => Some(d.substitute_chart(&inner.images)),
            (None, Some(d)) => Some(d.clone()),
            (Some(a), Some(b)) => Some(a.substitute_chart(&inner.images) * b.clone()),
        };
        FlowMap {
            images,
            denominator,
        }
    }

    pub fn apply(&self, p: &Point4) -> Result<Point4, FlowError> {
        if let Some(d) = &self.denominator {
            let v = d.eval(p)?;
            if v.abs() < 1e-12 {
                return Err(FlowError::Singular { point: p.clone() });
            }
        }
        let mut out = [0.0; 4];
        for (o, e) in out.iter_mut().zip(&self.images) {
            *o = e.eval(p).map_err(|err| match err {
                EvalError::Pole => FlowError::Singular { point: p.clone() },
                other => FlowError::Eval(other),
            })?;
        }
        Ok(Point4::from_array(out))
    }

    /// Exact image of a rational point for rational maps.
    pub fn apply_exact(&self, p: &Point4<BigRational>) -> Result<Point4<BigRational>, FlowError> {
        let singular = || FlowError::SingularExact { point: p.clone() };
        if let Some(d) = &self.denominator {
            if d.eval_exact(p)?.is_zero() {
                return Err(singular());
            }
        }
        let mut out = Vec::with_capacity(4);
        for e in &self.images {
            out.push(e.eval_exact(p).map_err(|err| match err {
                EvalError::Pole => singular(),
                other => FlowError::Eval(other),
            })?);
        }
        let [a, b, c, d]: [BigRational; 4] = out.try_into().expect("four images");
        Ok(Point4::new(a, b, c, d))
    }

    /// Pullback of a form through the map.
    pub fn pullback(&self, a: &PForm) -> Result<PForm, FormError> {
        if a.dim() != 4 {
            return Err(FormError::DimensionMismatch {
                left: a.dim(),
                right: 4,
            });
        }
        let differentials: Vec<PForm> = self
            .images
            .iter()
            .map(|e| PForm::scalar(4, e.clone()).d())
            .collect();
        let mut out = PForm::zero(4, a.grade());
        for (t, c) in a.iter() {
            let mut term = PForm::scalar(4, c.substitute_chart(&self.images));
            for i in t.indices() {
                term = term.wedge(&differentials[i - 1])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Display for FlowMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.images;
        write!(f, "x' = {a}, y' = {b}, z' = {c}, xi' = {d}")
    }
}

/// Coordinate planes of the spatial rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Plane {
    Xy,
    Xz,
    Yz,
}

impl Plane {
    fn axes(self) -> (usize, usize) {
        match self {
            Plane::Xy => (0, 1),
            Plane::Xz => (0, 2),
            Plane::Yz => (1, 2),
        }
    }
}

/// A one-parameter flow or a constant-parameter transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flow {
    /// `x^μ + a^μ`.
    Translation([ScalarExpr; 4]),
    /// `u' = u cos s + v sin s`, `v' = −u sin s + v cos s` in the plane `(u, v)`.
    Rotation(Plane, ScalarExpr),
    /// `u' = u ch s + ξ sh s`, `ξ' = u sh s + ξ ch s` for spatial axis `u`.
    Boost(usize, ScalarExpr),
    /// `x^μ e^s`.
    Dilatation(ScalarExpr),
    /// The rational special conformal map with constants `d^μ`.
    SpecialConformal([ScalarExpr; 4]),
}

impl Flow {
    pub fn map(&self) -> FlowMap {
        let mut images: [ScalarExpr; 4] = std::array::from_fn(coord);
        match self {
            Flow::Translation(a) => {
                for (img, ai) in images.iter_mut().zip(a) {
                    *img = img.clone() + ai.clone();
                }
            }
            Flow::Rotation(plane, s) => {
                let (u, v) = plane.axes();
                let (c, sn) = (ScalarExpr::cos(s.clone()), ScalarExpr::sin(s.clone()));
                images[u] = &coord(u) * &c + &coord(v) * &sn;
                images[v] = -(&coord(u) * &sn) + &coord(v) * &c;
            }
            Flow::Boost(u, s) => {
                let (c, sh) = (ScalarExpr::cosh(s.clone()), ScalarExpr::sinh(s.clone()));
                images[*u] = &coord(*u) * &c + &coord(3) * &sh;
                images[3] = &coord(*u) * &sh + &coord(3) * &c;
            }
            Flow::Dilatation(s) => {
                let a = ScalarExpr::exp(s.clone());
                images = std::array::from_fn(|i| &a * &coord(i));
            }
            Flow::SpecialConformal(d) => {
                let q = h1_square();
                let hdx =
                    ScalarExpr::sum((0..4).map(|i| ScalarExpr::int(H1[i]) * (&d[i] * &coord(i))));
                let hdd = ScalarExpr::sum((0..4).map(|i| ScalarExpr::int(H1[i]) * d[i].pow(2)));
                let den = ScalarExpr::one() + ScalarExpr::int(2) * hdx + &q * &hdd;
                images = std::array::from_fn(|i| (coord(i) + &d[i] * &q).div(&den));
                return FlowMap {
                    images,
                    denominator: Some(den),
                };
            }
        }
        FlowMap {
            images: images.map(|e| e.normalize()),
            denominator: None,
        }
    }

    /// The vector field whose time-one flow is this map.
    pub fn generator(&self) -> VectorField4 {
        match self {
            Flow::Translation(a) => VectorField4::new(a.clone()),
            Flow::Rotation(plane, s) => {
                let (u, v) = plane.axes();
                let mut c: [ScalarExpr; 4] = std::array::from_fn(|_| ScalarExpr::zero());
                c[u] = coord(v);
                c[v] = -coord(u);
                VectorField4::new(c).scale(s)
            }
            Flow::Boost(u, s) => {
                let mut c: [ScalarExpr; 4] = std::array::from_fn(|_| ScalarExpr::zero());
                c[*u] = coord(3);
                c[3] = coord(*u);
                VectorField4::new(c).scale(s)
            }
            Flow::Dilatation(s) => VectorField4::new(std::array::from_fn(coord)).scale(s),
            Flow::SpecialConformal(d) => (1..=4)
                .map(|mu| special_conformal_generator(mu).scale(&d[mu - 1]))
                .fold(VectorField4::zero(), |acc, f| acc.add(&f)),
        }
    }

    /// Whether the map stays inside the normal-form expression class.
    pub fn is_polynomial(&self) -> bool {
        !matches!(self, Flow::SpecialConformal(_))
    }
}

/// Family names accepted by [`Flow::parse`].
pub const FLOW_FAMILIES: [&str; 9] = [
    "translation",
    "rotation-xy",
    "rotation-xz",
    "rotation-yz",
    "boost-x",
    "boost-y",
    "boost-z",
    "dilatation",
    "special-conformal",
];

impl Flow {
    /// Builds a flow from a family name and its parameters: four constants
    /// for translations and special conformal maps, one `s` otherwise.
    pub fn parse(family: &str, params: &[ScalarExpr]) -> Result<Flow, FlowError> {
        let arity = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(FlowError::Arity {
                    family: family.to_string(),
                    expected: n,
                    found: params.len(),
                })
            }
        };
        let four = || -> [ScalarExpr; 4] { std::array::from_fn(|i| params[i].clone()) };
        Ok(match family {
            "translation" => {
                arity(4)?;
                Flow::Translation(four())
            }
            "special-conformal" => {
                arity(4)?;
                Flow::SpecialConformal(four())
            }
            _ => {
                let kind = match family {
                    "rotation-xy" => |s| Flow::Rotation(Plane::Xy, s),
                    "rotation-xz" => |s| Flow::Rotation(Plane::Xz, s),
                    "rotation-yz" => |s| Flow::Rotation(Plane::Yz, s),
                    "boost-x" => |s| Flow::Boost(0, s),
                    "boost-y" => |s| Flow::Boost(1, s),
                    "boost-z" => |s| Flow::Boost(2, s),
                    "dilatation" => Flow::Dilatation as fn(ScalarExpr) -> Flow,
                    other => return Err(FlowError::UnknownFamily(other.to_string())),
                };
                arity(1)?;
                kind(params[0].clone())
            }
        })
    }
}

impl FromStr for Plane {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "xy" => Ok(Plane::Xy),
            "xz" => Ok(Plane::Xz),
            "yz" => Ok(Plane::Yz),
            other => Err(FlowError::UnknownFamily(other.to_string())),
        }
    }
}

/// Step of the fixed-step integrator.
pub const RK4_STEP: f64 = 1e-3;

/// Integrates `dx/ds = X(x)` from `p` over `s ∈ [0, 1]` with classical RK4.
pub fn integrate(x: &VectorField4, p: &Point4, step: f64) -> Result<Point4, FlowError> {
    let n = (1.0 / step).ceil().max(1.0) as usize;
    let h = 1.0 / n as f64;
    let eval = |q: [f64; 4]| -> Result<[f64; 4], FlowError> {
        let pt = Point4::from_array(q);
        let v = x.eval(&pt).map_err(|e| match e {
            EvalError::Pole => FlowError::Singular { point: pt.clone() },
            other => FlowError::Eval(other),
        })?;
        if v.iter().all(|c| c.is_finite()) {
            Ok(v)
        } else {
            Err(FlowError::Singular { point: pt })
        }
    };
    let axpy =
        |a: [f64; 4], k: [f64; 4], t: f64| -> [f64; 4] { std::array::from_fn(|i| a[i] + t * k[i]) };
    let mut q = p.to_array();
    for _ in 0..n {
        let k1 = eval(q)?;
        let k2 = eval(axpy(q, k1, h / 2.0))?;
        let k3 = eval(axpy(q, k2, h / 2.0))?;
        let k4 = eval(axpy(q, k3, h))?;
        q = std::array::from_fn(|i| q[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    Ok(Point4::from_array(q))
}

/// Max-abs difference between the closed-form map and the integrated
/// generator at `p`.
pub fn flow_consistency_check(flow: &Flow, p: &Point4) -> Result<f64, FlowError> {
    let closed = flow.map().apply(p)?;
    let numeric = integrate(&flow.generator(), p, RK4_STEP)?;
    Ok(closed
        .to_array()
        .iter()
        .zip(numeric.to_array())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Pulls `F` back through the flow and re-runs the 4-dimensional Maxwell
/// residuals on the result.
pub fn pullback_symmetry_check(
    map: &FlowMap,
    f: &PForm,
    opts: &ZeroOptions,
) -> Result<ZeroVerdict, FormError> {
    let pulled = map.pullback(f)?;
    let (df, dphif) = residual_4d(&pulled)?;
    Ok(ZeroVerdict::combine([
        df.is_zero_with(opts),
        dphif.is_zero_with(opts),
    ]))
}
