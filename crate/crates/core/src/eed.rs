//! Nonlinear vacuum equations extending `dF = 0`, `d(ΦF) = 0`.
//!
//! Three formulations are provided: contraction of the raised field with
//! the derivatives (the component form of `F∧⊛dF` and its partners), the
//! insertion form built from `𝔇F` and `𝔓F`, and the generalized Lie form
//! `𝔏_T α = i(T)dα + d i(T)α` with its two algebraic constraints.

use crate::expr::{ScalarExpr, ZeroOptions, ZeroVerdict};
use crate::forms::{FormError, PForm, PVector};
use crate::maxwell::{EMField3, NamedResidual};
use crate::structures::{circledast, d_operator, phi, poincare_up, varphi};

/// `i(𝔇F)F = I1_FACTOR · I₁` with `I₁ = B² − E²`.
pub const I1_FACTOR: i64 = 1;
/// `i(𝔇F)ΦF = I2_FACTOR · I₂` with `I₂ = 2E·B`.
pub const I2_FACTOR: i64 = 1;

/// Three 1-form residuals of one formulation.
pub type Triple = [PForm; 3];

fn require_two_form(f: &PForm) -> Result<(), FormError> {
    if f.dim() != 4 {
        return Err(FormError::DimensionMismatch {
            left: f.dim(),
            right: 4,
        });
    }
    if f.grade() != 2 {
        return Err(FormError::GradeMismatch {
            expected: 2,
            found: f.grade(),
        });
    }
    Ok(())
}

/// Index raising through `h²`: `F^{μν}` with `h²(α, F) = ⟨α, F♯⟩`.
pub fn raise(f: &PForm) -> Result<PVector, FormError> {
    varphi(f)
}

/// `F^{μν}(dF)_{μνσ}`, `(⊛F)^{μν}(d⊛F)_{μνσ}` and
/// `F^{μν}(d⊛F)_{μνσ} + (⊛F)^{μν}(dF)_{μνσ}`.
pub fn eed_residuals_star(f: &PForm) -> Result<Triple, FormError> {
    require_two_form(f)?;
    let g = circledast(f)?;
    let (up_f, up_g) = (raise(f)?, raise(&g)?);
    let (df, dg) = (f.d(), g.d());
    Ok([
        up_f.contract(&df)?,
        up_g.contract(&dg)?,
        up_f.contract(&dg)?.add(&up_g.contract(&df)?)?,
    ])
}

/// `i(𝔇F)dF`, `i(𝔓F)d(ΦF)` and `i(𝔇F)d(ΦF) + i(𝔓F)dF`.
pub fn eed_residuals_insertion(f: &PForm) -> Result<Triple, FormError> {
    require_two_form(f)?;
    let (df_up, pf_up) = (d_operator(f)?, poincare_up(f)?);
    let (df, dphif) = (f.d(), phi(f)?.d());
    Ok([
        df_up.insert_multi(&df)?,
        pf_up.insert_multi(&dphif)?,
        df_up.insert_multi(&dphif)?.add(&pf_up.insert_multi(&df)?)?,
    ])
}

/// `𝔏_T α = i(T)dα + d i(T)α`, and zero when `T` has higher grade than `α`.
pub fn generalized_lie(t: &PVector, a: &PForm) -> Result<PForm, FormError> {
    if t.dim() != a.dim() {
        return Err(FormError::DimensionMismatch {
            left: t.dim(),
            right: a.dim(),
        });
    }
    let (q, p) = (t.grade(), a.grade());
    if q > p {
        return Ok(PForm::zero(a.dim(), 0));
    }
    let first = if p < a.dim() {
        t.insert_multi(&a.d())?
    } else {
        PForm::zero(a.dim(), p + 1 - q)
    };
    let second = t.insert_multi(a)?.d();
    first.add(&second)
}

/// Generalized Lie formulation: three 1-form equations and two scalar
/// constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieResiduals {
    pub equations: Triple,
    pub constraints: [ScalarExpr; 2],
}

/// `𝔏_{𝔇F}F`, `𝔏_{𝔓F}ΦF`, `𝔏_{𝔇F}ΦF + 𝔏_{𝔓F}F`, `i(𝔇F)F`, `i(𝔇F)ΦF`.
pub fn eed_residuals_lie(f: &PForm) -> Result<LieResiduals, FormError> {
    require_two_form(f)?;
    let (df_up, pf_up, pf) = (d_operator(f)?, poincare_up(f)?, phi(f)?);
    let equations = [
        generalized_lie(&df_up, f)?,
        generalized_lie(&pf_up, &pf)?,
        generalized_lie(&df_up, &pf)?.add(&generalized_lie(&pf_up, f)?)?,
    ];
    let constraints = [
        df_up.insert_multi(f)?.scalar_value().normalize(),
        df_up.insert_multi(&pf)?.scalar_value().normalize(),
    ];
    Ok(LieResiduals {
        equations,
        constraints,
    })
}

pub fn triple_verdicts(t: &Triple, opts: &ZeroOptions) -> [ZeroVerdict; 3] {
    std::array::from_fn(|i| t[i].is_zero_with(opts))
}

/// Zero/nonzero pattern of a verdict vector; indeterminate entries map to
/// `None`.
pub fn zero_pattern(v: &[ZeroVerdict]) -> Vec<Option<bool>> {
    v.iter()
        .map(|x| {
            if x.is_indeterminate() {
                None
            } else {
                Some(x.is_zero())
            }
        })
        .collect()
}

/// All residuals of the three formulations for one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EedResiduals {
    pub star: Triple,
    pub insertion: Triple,
    pub lie: LieResiduals,
}

impl EedResiduals {
    pub fn compute(f: &PForm) -> Result<Self, FormError> {
        Ok(EedResiduals {
            star: eed_residuals_star(f)?,
            insertion: eed_residuals_insertion(f)?,
            lie: eed_residuals_lie(f)?,
        })
    }

    pub fn checks(&self, opts: &ZeroOptions) -> Vec<NamedResidual> {
        let mut out = Vec::with_capacity(11);
        for (family, t) in [
            ("star", &self.star),
            ("insertion", &self.insertion),
            ("lie", &self.lie.equations),
        ] {
            for (i, r) in t.iter().enumerate() {
                out.push(NamedResidual::decide(
                    &format!("eed.{family}.{}", i + 1),
                    r.to_string(),
                    || r.is_zero_with(opts),
                ));
            }
        }
        for (name, c) in ["eed.lie.i_df_f", "eed.lie.i_df_phif"]
            .iter()
            .zip(&self.lie.constraints)
        {
            out.push(NamedResidual::decide(name, c.to_string(), || {
                c.is_zero_with(opts)
            }));
        }
        out
    }
}

/// EED residuals of an `(E, B)` field through the standard dictionary.
pub fn eed_checks(field: &EMField3, opts: &ZeroOptions) -> Vec<NamedResidual> {
    EedResiduals::compute(&field.build_f())
        .expect("2-form on R4")
        .checks(opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::forms::IndexTuple;

    fn p(s: &str) -> ScalarExpr {
        parse(s).unwrap()
    }

    fn field(e: [&str; 3], b: [&str; 3]) -> EMField3 {
        EMField3::new(e.map(p), b.map(p))
    }

    fn all_zero(t: &Triple) -> bool {
        t.iter().all(|r| r.is_zero().is_symbolic())
    }

    #[test]
    fn plane_wave_passes_all() {
        let f = EMField3::plane_wave().build_f();
        let r = EedResiduals::compute(&f).unwrap();
        assert!(all_zero(&r.star) && all_zero(&r.insertion) && all_zero(&r.lie.equations));
        assert!(r.lie.constraints.iter().all(|c| c.is_zero().is_symbolic()));
    }

    #[test]
    fn xi_dx_dy_fails_at_sigma_four() {
        let f = PForm::from_terms(4, 2, [(vec![1, 2], p("xi"))]).unwrap();
        let star = eed_residuals_star(&f).unwrap();
        assert!(star[0].is_zero().is_nonzero());
        assert!(star[0].coeff(IndexTuple::single(4)).is_zero().is_nonzero());
        let ins = eed_residuals_insertion(&f).unwrap();
        assert!(ins[0].is_zero().is_nonzero());
        let zero = eed_residuals_star(&PForm::zero(4, 2)).unwrap();
        assert!(all_zero(&zero));
    }

    #[test]
    fn generalized_lie_examples() {
        let t = PVector::from_terms(4, 2, [(vec![1, 2], ScalarExpr::one())]).unwrap();
        let a = PForm::from_terms(4, 2, [(vec![1, 2], ScalarExpr::one())]).unwrap();
        assert!(generalized_lie(&t, &a).unwrap().is_empty());
        let co = PForm::from_terms(4, 2, [(vec![3, 4], ScalarExpr::one())]).unwrap();
        assert!(generalized_lie(&t, &co).unwrap().is_empty());
        let x = PVector::from_components(&[p("y"), p("x*xi"), ScalarExpr::zero(), p("z")]);
        let b = PForm::from_components(&[p("x*y"), p("sin(z)"), p("xi"), p("x")]);
        assert_eq!(
            generalized_lie(&x, &b).unwrap(),
            x.lie_derivative(&b).unwrap()
        );
        assert!(generalized_lie(&t, &PForm::dx(4, 1)).unwrap().is_empty());
    }

    #[test]
    fn constraints_are_multiples_of_the_invariants() {
        let names = ["e1", "e2", "e3", "b1", "b2", "b3"];
        let ps: Vec<ScalarExpr> = names.iter().map(|n| ScalarExpr::param(n)).collect();
        let f = EMField3::new(
            [ps[0].clone(), ps[1].clone(), ps[2].clone()],
            [ps[3].clone(), ps[4].clone(), ps[5].clone()],
        );
        let inv = f.invariants();
        let lie = eed_residuals_lie(&f.build_f()).unwrap();
        let c1 = lie.constraints[0].clone() - ScalarExpr::int(I1_FACTOR) * inv.i1;
        let c2 = lie.constraints[1].clone() - ScalarExpr::int(I2_FACTOR) * inv.i2;
        assert!(c1.is_zero().is_symbolic(), "{}", lie.constraints[0]);
        assert!(c2.is_zero().is_symbolic(), "{}", lie.constraints[1]);
    }

    #[test]
    fn constant_fields() {
        let single = eed_residuals_lie(&field(["1", "0", "0"], ["0", "0", "0"]).build_f()).unwrap();
        assert!(single.constraints[0].is_zero().is_nonzero());
        assert_eq!(single.constraints[0], ScalarExpr::int(-I1_FACTOR));
        let crossed =
            eed_residuals_lie(&field(["1", "0", "0"], ["0", "1", "0"]).build_f()).unwrap();
        assert!(all_zero(&crossed.equations));
        assert!(crossed
            .constraints
            .iter()
            .all(|c| c.is_zero().is_symbolic()));
    }

    #[test]
    fn star_and_insertion_agree_off_shell() {
        let f = field(["x*xi", "sin(y)", "0"], ["z", "0", "cos(x - xi)"]).build_f();
        let s = triple_verdicts(&eed_residuals_star(&f).unwrap(), &ZeroOptions::default());
        let i = triple_verdicts(
            &eed_residuals_insertion(&f).unwrap(),
            &ZeroOptions::default(),
        );
        assert_eq!(zero_pattern(&s), zero_pattern(&i));
    }

    /// A Maxwell solution that is not null: the insertion form vanishes,
    /// the Lie form picks up `d` of the invariants.
    #[test]
    fn standing_wave_separates_the_lie_form() {
        let f = field(["cos(z)*cos(xi)", "0", "0"], ["0", "sin(z)*sin(xi)", "0"]);
        let r = EedResiduals::compute(&f.build_f()).unwrap();
        assert!(all_zero(&r.star) && all_zero(&r.insertion));
        assert!(r.lie.equations[0].is_zero().is_nonzero());
    }
}
