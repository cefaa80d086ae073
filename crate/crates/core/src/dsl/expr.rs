use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{Jet, Primitive};

pub const COORDINATE_NAMES: [&str; 4] = ["t", "x", "y", "z"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }

    fn primitive(self) -> Primitive {
        match self {
            Func::Exp => Primitive::Exp,
            Func::Log => Primitive::Log,
            Func::Sin => Primitive::Sin,
            Func::Cos => Primitive::Cos,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Expression tree of an analytic field `f(t, x, y, z)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Real(f64),
    ImagUnit,
    /// Coordinate by axis index, `0 = t`.
    Var(usize),
    Neg(Box<Expr>),
    Func(Func, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// Jet of the expression at `point` by structural recursion.
    pub fn eval_jet(&self, point: [f64; 4], order: usize) -> Result<Jet> {
        Ok(match self {
            Expr::Real(v) => Jet::constant(*v, order),
            Expr::ImagUnit => Jet::constant(Complex64::i(), order),
            Expr::Var(axis) => Jet::variable(*axis, point[*axis], order)?,
            Expr::Neg(a) => -a.eval_jet(point, order)?,
            Expr::Func(f, a) => a.eval_jet(point, order)?.compose(f.primitive())?,
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval_jet(point, order)?, b.eval_jet(point, order)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.checked_div(&b)?,
                }
            }
            Expr::Pow(a, n) => a.eval_jet(point, order)?.powi(*n)?,
        })
    }

    /// Plain complex evaluation, independent of the jet machinery.
    pub fn eval(&self, point: [f64; 4]) -> Result<Complex64> {
        Ok(match self {
            Expr::Real(v) => Complex64::new(*v, 0.0),
            Expr::ImagUnit => Complex64::i(),
            Expr::Var(axis) => Complex64::new(point[*axis], 0.0),
            Expr::Neg(a) => -a.eval(point)?,
            Expr::Func(f, a) => {
                let v = a.eval(point)?;
                match f {
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Log => {
                        if v == Complex64::new(0.0, 0.0) {
                            return Err(Error::SingularComposition {
                                primitive: "log",
                                value: v,
                            });
                        }
                        v.ln()
                    }
                }
            }
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.eval(point)?, b.eval(point)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == Complex64::new(0.0, 0.0) {
                            return Err(Error::SingularComposition {
                                primitive: "reciprocal",
                                value: b,
                            });
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(a, n) => {
                let v = a.eval(point)?;
                if *n < 0 && v == Complex64::new(0.0, 0.0) {
                    return Err(Error::SingularComposition {
                        primitive: "reciprocal",
                        value: v,
                    });
                }
                v.powi(*n)
            }
        })
    }

    /// True when the expression contains no imaginary unit.
    pub fn is_manifestly_real(&self) -> bool {
        match self {
            Expr::Real(_) | Expr::Var(_) => true,
            Expr::ImagUnit => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_manifestly_real(),
            // log of a negative real is complex
            Expr::Func(f, a) => *f != Func::Log && a.is_manifestly_real(),
            Expr::Binary(_, a, b) => a.is_manifestly_real() && b.is_manifestly_real(),
        }
    }

    fn is_atom(&self) -> bool {
        matches!(self, Expr::Real(v) if *v >= 0.0) || matches!(self, Expr::ImagUnit | Expr::Var(_) | Expr::Func(..))
    }
}

struct Child<'a>(&'a Expr);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_atom() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "({})", self.0)
        }
    }
}

/// Pretty-printer whose output re-parses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Real(v) if *v < 0.0 => write!(f, "-{:?}", -v),
            Expr::Real(v) => write!(f, "{v:?}"),
            Expr::ImagUnit => write!(f, "i"),
            Expr::Var(axis) => write!(f, "{}", COORDINATE_NAMES[*axis]),
            Expr::Neg(a) => write!(f, "-{}", Child(a)),
            Expr::Func(func, a) => write!(f, "{}({})", func.name(), a),
            Expr::Binary(op, a, b) => write!(f, "{} {} {}", Child(a), op.symbol(), Child(b)),
            Expr::Pow(a, n) => write!(f, "{}^{}", Child(a), n),
        }
    }
}
