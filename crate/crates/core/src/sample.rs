//! Seeded generators of expressions, forms and field configurations used by
//! the property suites and the acceptance run.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::expr::{ChartVar, ScalarExpr};
use crate::forms::{IndexTuple, Multi, PForm};
use crate::maxwell::{cross, EMField3, Vec3};

fn var<R: Rng>(rng: &mut R, dim: usize) -> ScalarExpr {
    ScalarExpr::var(ChartVar::ALL[rng.gen_range(0..dim)])
}

fn nonzero_int<R: Rng>(rng: &mut R, bound: i64) -> i64 {
    let v = rng.gen_range(1..=bound);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

/// A linear combination of one or two chart variables.
fn linear<R: Rng>(rng: &mut R, dim: usize) -> ScalarExpr {
    let mut out = ScalarExpr::int(nonzero_int(rng, 2)) * var(rng, dim);
    if rng.gen_bool(0.5) {
        out = out + ScalarExpr::int(nonzero_int(rng, 2)) * var(rng, dim);
    }
    out
}

fn factor<R: Rng>(rng: &mut R, dim: usize) -> ScalarExpr {
    match rng.gen_range(0..6) {
        0 | 1 => var(rng, dim),
        2 => var(rng, dim).pow(2),
        3 => ScalarExpr::sin(linear(rng, dim)),
        4 => ScalarExpr::cos(linear(rng, dim)),
        _ => ScalarExpr::exp(linear(rng, dim)),
    }
}

/// A small polynomial/trigonometric expression in the first `dim` chart
/// variables.
pub fn random_expr<R: Rng>(rng: &mut R, dim: usize) -> ScalarExpr {
    let terms = rng.gen_range(1..=3);
    ScalarExpr::sum((0..terms).map(|_| {
        let k = rng.gen_range(0..=2);
        (0..k).fold(ScalarExpr::int(nonzero_int(rng, 3)), |acc, _| {
            acc * factor(rng, dim)
        })
    }))
}

/// A random polynomial in all four chart variables of degree at most 4.
pub fn random_polynomial<R: Rng>(rng: &mut R) -> ScalarExpr {
    let terms = rng.gen_range(1..=4);
    ScalarExpr::sum((0..terms).map(|_| {
        let deg = rng.gen_range(0..=4);
        (0..deg).fold(ScalarExpr::int(nonzero_int(rng, 4)), |acc, _| {
            acc * var(rng, 4)
        })
    }))
}

/// A `p`-form or `p`-vector with about half the components populated.
pub fn random_multi<V, R: Rng>(rng: &mut R, dim: usize, grade: usize) -> Multi<V> {
    let mut terms: Vec<(Vec<usize>, ScalarExpr)> = Vec::new();
    for t in IndexTuple::all(dim, grade) {
        if rng.gen_bool(0.5) {
            terms.push((t.indices(), random_expr(rng, dim)));
        }
    }
    Multi::from_terms(dim, grade, terms).expect("indices in range")
}

pub fn random_form<R: Rng>(rng: &mut R, dim: usize, grade: usize) -> PForm {
    random_multi(rng, dim, grade)
}

fn q(n: i64, d: i64) -> ScalarExpr {
    ScalarExpr::ratio(n, d)
}

/// Rational unit directions with a rational unit polarization orthogonal
/// to each.
fn directions() -> Vec<([ScalarExpr; 3], [ScalarExpr; 3])> {
    let v = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| [q(a.0, a.1), q(b.0, b.1), q(c.0, c.1)];
    vec![
        (v((0, 1), (0, 1), (1, 1)), v((1, 1), (0, 1), (0, 1))),
        (v((1, 1), (0, 1), (0, 1)), v((0, 1), (1, 1), (0, 1))),
        (v((0, 1), (-1, 1), (0, 1)), v((0, 1), (0, 1), (1, 1))),
        (v((3, 5), (4, 5), (0, 1)), v((-4, 5), (3, 5), (0, 1))),
        (v((0, 1), (3, 5), (4, 5)), v((1, 1), (0, 1), (0, 1))),
        (v((2, 3), (1, 3), (2, 3)), v((1, 3), (2, 3), (-2, 3))),
        (v((-2, 3), (2, 3), (1, 3)), v((2, 3), (1, 3), (2, 3))),
    ]
}

fn profile<R: Rng>(rng: &mut R, u: ScalarExpr) -> ScalarExpr {
    match rng.gen_range(0..6) {
        0 => ScalarExpr::cos(u),
        1 => ScalarExpr::sin(ScalarExpr::int(2) * u),
        2 => u.pow(2),
        3 => u.pow(3) - u,
        4 => ScalarExpr::exp(u),
        _ => ScalarExpr::cosh(u),
    }
}

/// `E = p f(n·x − ξ)`, `B = n × E`: a null solution of the vacuum
/// equations for any profile `f`.
pub fn random_plane_wave<R: Rng>(rng: &mut R) -> EMField3 {
    let dirs = directions();
    let (n, p) = dirs.choose(rng).expect("nonempty").clone();
    let coords = [ScalarExpr::x(), ScalarExpr::y(), ScalarExpr::z()];
    let phase = ScalarExpr::sum(n.iter().zip(&coords).map(|(a, b)| a * b)) - ScalarExpr::xi()
        + q(rng.gen_range(0..=2), 2);
    let f = ScalarExpr::int(nonzero_int(rng, 2)) * profile(rng, phase);
    let e: Vec3 = p.map(|c| &c * &f);
    let b = cross(&n, &e);
    EMField3::new(e, b).normalized()
}

fn harmonic<R: Rng>(rng: &mut R) -> ScalarExpr {
    let pool = [
        "x^2 - y^2",
        "x*y",
        "y*z",
        "x^2 + y^2 - 2*z^2",
        "x^3 - 3*x*y^2",
        "x*y*z",
        "exp(x)*cos(y)",
        "z",
    ];
    let src = pool.choose(rng).expect("nonempty");
    ScalarExpr::int(nonzero_int(rng, 2)) * crate::expr::parse(src).expect("valid")
}

/// `E = ∇φ`, `B = ∇ψ` for harmonic `φ`, `ψ`: a static solution that is
/// generally not null.
pub fn random_static<R: Rng>(rng: &mut R) -> EMField3 {
    let grad = |f: ScalarExpr| -> Vec3 { std::array::from_fn(|i| f.diff(ChartVar::ALL[i])) };
    let phi = harmonic(rng);
    let psi = if rng.gen_bool(0.5) {
        harmonic(rng)
    } else {
        ScalarExpr::zero()
    };
    EMField3::new(grad(phi), grad(psi)).normalized()
}

/// A solution with one component perturbed by a random term.
pub fn random_perturbation<R: Rng>(rng: &mut R) -> EMField3 {
    let mut f = if rng.gen_bool(0.5) {
        random_plane_wave(rng)
    } else {
        random_static(rng)
    };
    let pool = [
        "x*xi",
        "y^2",
        "sin(x)",
        "y*z",
        "xi^2",
        "exp(y)",
        "cos(x + xi)",
        "z*xi",
    ];
    let term = ScalarExpr::int(nonzero_int(rng, 3))
        * crate::expr::parse(pool.choose(rng).expect("nonempty")).expect("valid");
    let slot = rng.gen_range(0..6);
    let target = if slot < 3 {
        &mut f.e[slot]
    } else {
        &mut f.b[slot - 3]
    };
    *target = (target.clone() + term).normalize();
    f
}

/// One entry of a field corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusField {
    pub name: String,
    pub field: EMField3,
    /// Whether the field was built to solve the vacuum equations.
    pub solution: bool,
}

/// `n` fields alternating between solutions (plane waves and statics) and
/// perturbed solutions.
pub fn random_fields<R: Rng>(rng: &mut R, n: usize) -> Vec<CorpusField> {
    (0..n)
        .map(|i| {
            let (field, solution, kind) = if i % 2 == 1 {
                (random_perturbation(rng), false, "perturbed")
            } else if i % 4 == 0 {
                (random_plane_wave(rng), true, "wave")
            } else {
                (random_static(rng), true, "static")
            };
            CorpusField {
                name: format!("random.{i:02}.{kind}"),
                field,
                solution,
            }
        })
        .collect()
}

/// The plane-wave family `E = (f, 0, 0)`, `B = (0, f, 0)` for several
/// profiles `f(z − ξ)`.
pub fn plane_wave_family() -> Vec<CorpusField> {
    [
        "cos(z - xi)",
        "sin(3*(z - xi))",
        "(z - xi)^2",
        "exp(z - xi)",
        "cos(z - xi) + sin(2*(z - xi))",
    ]
    .into_iter()
    .enumerate()
    .map(|(i, src)| {
        let f = crate::expr::parse(src).expect("valid");
        CorpusField {
            name: format!("plane_wave.{i}"),
            field: EMField3::new(
                [f.clone(), ScalarExpr::zero(), ScalarExpr::zero()],
                [ScalarExpr::zero(), f, ScalarExpr::zero()],
            ),
            solution: true,
        }
    })
    .collect()
}
