//! Zero testing with a symbolic first pass and a seeded numeric fallback.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::canon::{render_frac, Canonicalizer, Frac, Gen};
use super::{Point4, ScalarExpr, Symbol};

/// Number of sample points used by the numeric fallback.
pub const SAMPLE_COUNT: usize = 16;
/// Seed of the sampling generator.
pub const SAMPLE_SEED: u64 = 0x5eed_0f_4d1f;
/// Absolute tolerance of the numeric fallback.
pub const ZERO_TOLERANCE: f64 = 1e-9;
const SAMPLE_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZeroOptions {
    /// Skip normalization and decide from samples alone.
    pub numeric_only: bool,
}

/// A sample point where an expression was evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Point4,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ZeroVerdict {
    SymbolicZero,
    NumericZero {
        tolerance: f64,
        max_abs: f64,
    },
    /// `witness` is the sample of largest magnitude, absent when every
    /// sample hit a pole.
    NonZero {
        witness: Option<Witness>,
    },
    Indeterminate,
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        matches!(
            self,
            ZeroVerdict::SymbolicZero | ZeroVerdict::NumericZero { .. }
        )
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ZeroVerdict::SymbolicZero)
    }

    pub fn is_nonzero(&self) -> bool {
        matches!(self, ZeroVerdict::NonZero { .. })
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, ZeroVerdict::Indeterminate)
    }

    /// Verdict for a collection of expressions that must all vanish: the
    /// first nonzero wins, then indeterminate, then the weakest zero.
    pub fn combine<I: IntoIterator<Item = ZeroVerdict>>(verdicts: I) -> ZeroVerdict {
        let mut out = ZeroVerdict::SymbolicZero;
        for v in verdicts {
            out = match (out, v) {
                (nz @ ZeroVerdict::NonZero { .. }, _) => return nz,
                (_, nz @ ZeroVerdict::NonZero { .. }) => return nz,
                (ZeroVerdict::Indeterminate, _) | (_, ZeroVerdict::Indeterminate) => {
                    ZeroVerdict::Indeterminate
                }
                (
                    ZeroVerdict::NumericZero {
                        tolerance,
                        max_abs: a,
                    },
                    ZeroVerdict::NumericZero { max_abs: b, .. },
                ) => ZeroVerdict::NumericZero {
                    tolerance,
                    max_abs: a.max(b),
                },
                (n @ ZeroVerdict::NumericZero { .. }, ZeroVerdict::SymbolicZero)
                | (ZeroVerdict::SymbolicZero, n @ ZeroVerdict::NumericZero { .. }) => n,
                (ZeroVerdict::SymbolicZero, ZeroVerdict::SymbolicZero) => ZeroVerdict::SymbolicZero,
            };
        }
        out
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::SymbolicZero => "SymbolicZero",
            ZeroVerdict::NumericZero { .. } => "NumericZero",
            ZeroVerdict::NonZero { .. } => "NonZero",
            ZeroVerdict::Indeterminate => "Indeterminate",
        }
    }
}

impl fmt::Display for ZeroVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroVerdict::NumericZero { max_abs, .. } => {
                write!(f, "NumericZero (max |e| = {max_abs:e})")
            }
            ZeroVerdict::NonZero { witness: Some(w) } => {
                write!(f, "NonZero (e = {} at {})", w.value, w.point)
            }
            other => f.write_str(other.label()),
        }
    }
}

/// The fixed sample points, with one value per parameter name at each point.
pub fn sample_points(params: &[String]) -> Vec<(Point4, BTreeMap<String, f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut draw = move || rng.gen_range(-SAMPLE_RADIUS..=SAMPLE_RADIUS);
    (0..SAMPLE_COUNT)
        .map(|_| {
            let point = Point4::new(draw(), draw(), draw(), draw());
            let values = params.iter().map(|p| (p.clone(), draw())).collect();
            (point, values)
        })
        .collect()
}

fn samples(e: &ScalarExpr) -> Vec<Witness> {
    let params: Vec<String> = e
        .symbols()
        .into_iter()
        .filter_map(|s| match s {
            Symbol::Param(name) => Some(name.to_string()),
            Symbol::Chart(_) => None,
        })
        .collect();
    sample_points(&params)
        .into_iter()
        .filter_map(|(point, params)| {
            let value = e
                .eval_with(&point, &params)
                .ok()
                .filter(|v| v.is_finite())?;
            Some(Witness {
                point,
                params,
                value,
            })
        })
        .collect()
}

fn largest(samples: Vec<Witness>) -> Option<Witness> {
    samples
        .into_iter()
        .max_by(|a, b| a.value.abs().total_cmp(&b.value.abs()))
}

fn numeric_verdict(e: &ScalarExpr) -> ZeroVerdict {
    match largest(samples(e)) {
        None => ZeroVerdict::Indeterminate,
        Some(w) if w.value.abs() <= ZERO_TOLERANCE => ZeroVerdict::NumericZero {
            tolerance: ZERO_TOLERANCE,
            max_abs: w.value.abs(),
        },
        Some(w) => ZeroVerdict::NonZero { witness: Some(w) },
    }
}

/// Whether a nonzero normal form proves the function nonzero.
fn normal_form_is_decisive(f: &Frac) -> bool {
    !f.has_generator(&|g| matches!(g, Gen::Opaque(_)))
}

impl ScalarExpr {
    /// Canonical representative; identically equal expressions in the
    /// supported class share it, and identically zero ones map to `0`.
    pub fn normalize(&self) -> ScalarExpr {
        match Canonicalizer::default().canonical(self) {
            Some(f) => render_frac(&f),
            None => self.clone(),
        }
    }

    pub fn is_zero(&self) -> ZeroVerdict {
        self.is_zero_with(&ZeroOptions::default())
    }

    pub fn is_zero_with(&self, opts: &ZeroOptions) -> ZeroVerdict {
        if let Some(q) = self.as_rational() {
            return if num_traits::Zero::is_zero(q) {
                ZeroVerdict::SymbolicZero
            } else {
                let value = num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN);
                ZeroVerdict::NonZero {
                    witness: Some(Witness {
                        point: Point4::new(0.0, 0.0, 0.0, 0.0),
                        params: BTreeMap::new(),
                        value,
                    }),
                }
            };
        }
        if opts.numeric_only {
            return numeric_verdict(self);
        }
        match Canonicalizer::default().canonical(self) {
            // Division by an identically vanishing expression: every point is a pole.
            None => ZeroVerdict::Indeterminate,
            Some(f) if f.is_zero() => ZeroVerdict::SymbolicZero,
            Some(f) if normal_form_is_decisive(&f) => ZeroVerdict::NonZero {
                witness: largest(samples(self)),
            },
            Some(_) => numeric_verdict(self),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse, parse_with_params};
    use super::*;

    #[test]
    fn documented_examples() {
        assert_eq!(
            parse("sin(x)^2 + cos(x)^2 - 1").unwrap().is_zero(),
            ZeroVerdict::SymbolicZero
        );
        assert!(parse("x - y").unwrap().is_zero().is_nonzero());
        let hyperbolic = parse_with_params("cosh(s)^2 - sinh(s)^2 - 1", &["s"]).unwrap();
        assert_eq!(hyperbolic.is_zero(), ZeroVerdict::SymbolicZero);
    }

    #[test]
    fn numeric_only_agrees_on_identities() {
        let opts = ZeroOptions { numeric_only: true };
        let v = parse("sin(x)^2 + cos(x)^2 - 1")
            .unwrap()
            .is_zero_with(&opts);
        assert!(matches!(v, ZeroVerdict::NumericZero { .. }), "{v:?}");
        assert!(parse("x - y").unwrap().is_zero_with(&opts).is_nonzero());
    }

    #[test]
    fn all_poles_is_indeterminate() {
        assert_eq!(
            parse("1/(x - x)").unwrap().is_zero(),
            ZeroVerdict::Indeterminate
        );
        let opts = ZeroOptions { numeric_only: true };
        assert_eq!(
            parse("1/(x - x)").unwrap().is_zero_with(&opts),
            ZeroVerdict::Indeterminate
        );
    }

    #[test]
    fn opaque_arguments_fall_back_to_samples() {
        let v = parse("sin(1/(1 + x^2))^2 + cos(1/(1 + x^2))^2 - 1")
            .unwrap()
            .is_zero();
        assert!(v.is_zero(), "{v:?}");
        let w = parse("sin(1/(1 + x^2)) - sin(1/(2 + x^2))")
            .unwrap()
            .is_zero();
        assert!(w.is_nonzero(), "{w:?}");
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_points(&[]), sample_points(&[]));
        let pts = sample_points(&["a".to_string()]);
        assert_eq!(pts.len(), SAMPLE_COUNT);
        assert!(pts.iter().all(|(p, v)| p
            .to_array()
            .iter()
            .chain(v.values())
            .all(|c| c.abs() <= SAMPLE_RADIUS)));
    }

    #[test]
    fn normalize_is_idempotent_on_examples() {
        for src in [
            "cos(z - xi)",
            "sin(x)*cosh(y) + x^2/3",
            "exp(2*x)*sin(pi/3)",
            "1/(x + 1) + y",
        ] {
            let n = parse(src).unwrap().normalize();
            assert_eq!(n.normalize(), n, "{src}");
            assert_eq!(
                (n.clone() - parse(src).unwrap()).is_zero(),
                ZeroVerdict::SymbolicZero
            );
        }
        assert_eq!(
            parse("sin(x)^2 + cos(x)^2 - 1").unwrap().normalize(),
            ScalarExpr::zero()
        );
    }
}
