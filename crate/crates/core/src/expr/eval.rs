use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ChartVar, Node, ScalarExpr, Symbol};

/// A point of the chart, `ξ = ct`. Coordinates are either exact rationals or
/// floats.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point4<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub xi: T,
}

impl<T: Clone> Point4<T> {
    pub fn new(x: T, y: T, z: T, xi: T) -> Self {
        Point4 { x, y, z, xi }
    }

    pub fn from_array(c: [T; 4]) -> Self {
        let [x, y, z, xi] = c;
        Point4 { x, y, z, xi }
    }

    pub fn to_array(&self) -> [T; 4] {
        [
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
            self.xi.clone(),
        ]
    }

    pub fn get(&self, v: ChartVar) -> &T {
        match v {
            ChartVar::X => &self.x,
            ChartVar::Y => &self.y,
            ChartVar::Z => &self.z,
            ChartVar::Xi => &self.xi,
        }
    }
}

impl Point4<f64> {
    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

impl Point4<BigRational> {
    pub fn from_ints(c: [i64; 4]) -> Self {
        Point4::from_array(c.map(|n| BigRational::from_integer(BigInt::from(n))))
    }

    pub fn to_f64(&self) -> Point4<f64> {
        Point4::from_array(self.to_array().map(|q| q.to_f64().unwrap_or(f64::NAN)))
    }
}

impl<T: fmt::Display> fmt::Display for Point4<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.x, self.y, self.z, self.xi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    Pole,
    #[error("no value bound for parameter `{0}`")]
    Unbound(String),
    #[error("expression is not rational-valued at this point ({0})")]
    NotRational(&'static str),
}

impl ScalarExpr {
    /// Floating-point value at a chart point. Parameters must be absent.
    pub fn eval(&self, p: &Point4<f64>) -> Result<f64, EvalError> {
        self.eval_with(p, &BTreeMap::new())
    }

    /// Floating-point value with explicit parameter bindings.
    pub fn eval_with(
        &self,
        p: &Point4<f64>,
        params: &BTreeMap<String, f64>,
    ) -> Result<f64, EvalError> {
        let v = match self.node() {
            Node::Rat(q) => q.to_f64().unwrap_or(f64::NAN),
            Node::Sym(Symbol::Chart(v)) => *p.get(*v),
            Node::Sym(Symbol::Param(name)) => *params
                .get(&**name)
                .ok_or_else(|| EvalError::Unbound(name.to_string()))?,
            Node::Pi => std::f64::consts::PI,
            Node::Sqrt(n) => f64::from(*n).sqrt(),
            Node::Neg(a) => -a.eval_with(p, params)?,
            Node::Add(a, b) => a.eval_with(p, params)? + b.eval_with(p, params)?,
            Node::Sub(a, b) => a.eval_with(p, params)? - b.eval_with(p, params)?,
            Node::Mul(a, b) => a.eval_with(p, params)? * b.eval_with(p, params)?,
            Node::Div(a, b) => {
                let d = b.eval_with(p, params)?;
                if d == 0.0 {
                    return Err(EvalError::Pole);
                }
                a.eval_with(p, params)? / d
            }
            Node::Pow(a, n) => a.eval_with(p, params)?.powi(*n as i32),
            Node::Func(f, a) => f.apply_f64(a.eval_with(p, params)?),
        };
        Ok(v)
    }

    /// Exact value at a rational point, for expressions built from rational
    /// constants, chart variables and field operations only.
    pub fn eval_exact(&self, p: &Point4<BigRational>) -> Result<BigRational, EvalError> {
        Ok(match self.node() {
            Node::Rat(q) => q.clone(),
            Node::Sym(Symbol::Chart(v)) => p.get(*v).clone(),
            Node::Sym(Symbol::Param(name)) => return Err(EvalError::Unbound(name.to_string())),
            Node::Pi => return Err(EvalError::NotRational("pi")),
            Node::Sqrt(_) => return Err(EvalError::NotRational("square root")),
            Node::Func(_, _) => return Err(EvalError::NotRational("transcendental function")),
            Node::Neg(a) => -a.eval_exact(p)?,
            Node::Add(a, b) => a.eval_exact(p)? + b.eval_exact(p)?,
            Node::Sub(a, b) => a.eval_exact(p)? - b.eval_exact(p)?,
            Node::Mul(a, b) => a.eval_exact(p)? * b.eval_exact(p)?,
            Node::Div(a, b) => {
                let d = b.eval_exact(p)?;
                if d.is_zero() {
                    return Err(EvalError::Pole);
                }
                a.eval_exact(p)? / d
            }
            Node::Pow(a, n) => num_traits::pow(a.eval_exact(p)?, *n as usize),
        })
    }
}
