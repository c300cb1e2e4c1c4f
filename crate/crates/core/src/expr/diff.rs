use super::{ChartVar, Func, Node, ScalarExpr, Symbol};

impl ScalarExpr {
    /// Exact partial derivative with respect to a chart variable.
    pub fn diff(&self, v: ChartVar) -> ScalarExpr {
        self.diff_symbol(&Symbol::Chart(v))
    }

    /// Exact partial derivative with respect to any symbol, parameters
    /// included.
    pub fn diff_symbol(&self, v: &Symbol) -> ScalarExpr {
        match self.node() {
            Node::Rat(_) | Node::Pi | Node::Sqrt(_) => ScalarExpr::zero(),
            Node::Sym(s) => {
                if s == v {
                    ScalarExpr::one()
                } else {
                    ScalarExpr::zero()
                }
            }
            Node::Neg(a) => -a.diff_symbol(v),
            Node::Add(a, b) => a.diff_symbol(v) + b.diff_symbol(v),
            Node::Sub(a, b) => a.diff_symbol(v) - b.diff_symbol(v),
            Node::Mul(a, b) => a.diff_symbol(v) * b.clone() + a.clone() * b.diff_symbol(v),
            Node::Div(a, b) => {
                let da = a.diff_symbol(v);
                let db = b.diff_symbol(v);
                if db.is_literal_zero() {
                    da.div(b)
                } else {
                    (da * b.clone() - a.clone() * db).div(&b.pow(2))
                }
            }
            Node::Pow(a, n) => {
                let da = a.diff_symbol(v);
                if da.is_literal_zero() {
                    return ScalarExpr::zero();
                }
                ScalarExpr::int(i64::from(*n)) * a.pow(n - 1) * da
            }
            Node::Func(f, a) => {
                let da = a.diff_symbol(v);
                if da.is_literal_zero() {
                    return ScalarExpr::zero();
                }
                let outer = match f {
                    Func::Sin => ScalarExpr::cos(a.clone()),
                    Func::Cos => -ScalarExpr::sin(a.clone()),
                    Func::Exp => self.clone(),
                    Func::Sinh => ScalarExpr::cosh(a.clone()),
                    Func::Cosh => ScalarExpr::sinh(a.clone()),
                };
                outer * da
            }
        }
    }

    /// Gradient components `(∂x, ∂y, ∂z, ∂ξ)`.
    pub fn gradient(&self) -> [ScalarExpr; 4] {
        ChartVar::ALL.map(|v| self.diff(v))
    }
}
