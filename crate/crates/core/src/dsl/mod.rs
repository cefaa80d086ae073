//! Scenario description language: analytic field expressions and the
//! scenario documents that bundle them.

mod expr;
mod parser;
mod scenario;

pub use expr::{BinOp, Expr, Func, COORDINATE_NAMES};
pub use parser::{parse_expression, parse_expression_with, ParseError, ParseErrorKind};
pub use scenario::{
    builtin, builtin_names, builtin_source, load_scenario, Region, Scenario,
    DEFAULT_MIN_COEFFICIENT,
};

/// Jet of `expr` at `point`.
pub fn eval_jet(expr: &Expr, point: [f64; 4], order: usize) -> crate::Result<crate::Jet> {
    expr.eval_jet(point, order)
}
