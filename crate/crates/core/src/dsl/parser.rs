//! Recursive-descent parser for the field expression grammar.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' '-'? integer)*
//! primary := number | name | func '(' sum ')' | '(' sum ')'
//! ```
//!
//! Names are the coordinates `t x y z`, the imaginary unit `i`, the constant
//! `pi`, and any caller-supplied named constants.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::expr::{BinOp, Expr, Func, COORDINATE_NAMES};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnknownIdentifier(String),
    NonIntegerExponent(String),
    InvalidNumber(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found `{found}`")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::UnknownIdentifier(name) => write!(f, "unknown identifier `{name}`"),
            ParseErrorKind::NonIntegerExponent(text) => {
                write!(f, "exponent `{text}` is not an integer literal")
            }
            ParseErrorKind::InvalidNumber(text) => write!(f, "invalid number `{text}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(s) | Tok::Ident(s) => write!(f, "{s}"),
            Tok::Op(c) => write!(f, "{c}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        let c = chars[pos];
        let start = pos;
        if c.is_whitespace() {
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '.') {
                pos += 1;
            }
            // exponent part: 1e-3, 2E+4
            if pos < chars.len() && (chars[pos] == 'e' || chars[pos] == 'E') {
                let mut look = pos + 1;
                if look < chars.len() && (chars[look] == '+' || chars[look] == '-') {
                    look += 1;
                }
                if look < chars.len() && chars[look].is_ascii_digit() {
                    pos = look;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
            }
            toks.push((start, Tok::Num(chars[start..pos].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            while pos < chars.len() && (chars[pos].is_alphanumeric() || chars[pos] == '_') {
                pos += 1;
            }
            toks.push((start, Tok::Ident(chars[start..pos].iter().collect())));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(ParseError {
                        position: pos,
                        kind: ParseErrorKind::UnexpectedChar(c),
                    })
                }
            };
            toks.push((start, tok));
            pos += 1;
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    constants: &'a BTreeMap<String, f64>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn error(&self, expected: &'static str) -> ParseError {
        ParseError {
            position: self.offset(),
            kind: match self.peek() {
                Some(t) => ParseErrorKind::UnexpectedToken {
                    found: t.to_string(),
                    expected,
                },
                None => ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.product()?);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let position = self.offset();
            let negative = if let Some(Tok::Op('-')) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let text = match self.next() {
                Some(Tok::Num(s)) => s,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("integer exponent"));
                }
            };
            let n: i32 = text.parse().map_err(|_| ParseError {
                position,
                kind: ParseErrorKind::NonIntegerExponent(text.clone()),
            })?;
            base = Expr::Pow(Box::new(base), if negative { -n } else { n });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let position = self.offset();
        match self.next() {
            Some(Tok::Num(s)) => s.parse::<f64>().map(Expr::Real).map_err(|_| ParseError {
                position,
                kind: ParseErrorKind::InvalidNumber(s),
            }),
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if let Some(func) = Func::from_name(&name) {
                    if self.peek() != Some(&Tok::LParen) {
                        return Err(self.error("`(` after function name"));
                    }
                    self.pos += 1;
                    let arg = self.sum()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Func(func, Box::new(arg)));
                }
                if let Some(axis) = COORDINATE_NAMES.iter().position(|c| *c == name) {
                    return Ok(Expr::Var(axis));
                }
                match name.as_str() {
                    "i" => Ok(Expr::ImagUnit),
                    "pi" => Ok(Expr::Real(std::f64::consts::PI)),
                    _ => match self.constants.get(&name) {
                        Some(&v) if v < 0.0 => Ok(Expr::Neg(Box::new(Expr::Real(-v)))),
                        Some(&v) => Ok(Expr::Real(v)),
                        None => Err(ParseError {
                            position,
                            kind: ParseErrorKind::UnknownIdentifier(name),
                        }),
                    },
                }
            }
            _ => {
                self.pos -= 1;
                Err(self.error("number, name or `(`"))
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error("`)`"))
        }
    }
}

/// Parse an expression with no named constants beyond `pi`.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    parse_expression_with(text, &BTreeMap::new())
}

/// Parse an expression, resolving extra names from `constants`.
pub fn parse_expression_with(
    text: &str,
    constants: &BTreeMap<String, f64>,
) -> Result<Expr, ParseError> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: text.chars().count(),
        constants,
    };
    let e = parser.sum()?;
    if parser.peek().is_some() {
        return Err(parser.error("operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::jet::MultiIndex;

    fn var(axis: usize) -> Box<Expr> {
        Box::new(Expr::Var(axis))
    }

    #[test]
    fn negated_product_with_constant() {
        let consts = BTreeMap::from([("E".to_string(), 1.0)]);
        let e = parse_expression_with("-E*x", &consts).unwrap();
        assert_eq!(
            e,
            Expr::binary(BinOp::Mul, Expr::Neg(Box::new(Expr::Real(1.0))), Expr::Var(1))
        );
    }

    #[test]
    fn exp_of_product() {
        let e = parse_expression("exp(i*t)").unwrap();
        assert_eq!(
            e,
            Expr::Func(Func::Exp, Box::new(Expr::binary(BinOp::Mul, Expr::ImagUnit, Expr::Var(0))))
        );
    }

    #[test]
    fn polynomial_taylor_shift() {
        let e = parse_expression("x^2 + 2*x").unwrap();
        let j = e.eval_jet([0.0, 1.0, 0.0, 0.0], 2).unwrap();
        assert_eq!(j.value(), Complex64::new(3.0, 0.0));
        assert_eq!(j.coeff(&MultiIndex::new(0, 1, 0, 0)), Complex64::new(4.0, 0.0));
        assert_eq!(j.coeff(&MultiIndex::new(0, 2, 0, 0)), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn precedence() {
        // unary minus binds looser than ^
        assert_eq!(
            parse_expression("-x^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(var(1), 2)))
        );
        // left associativity
        assert_eq!(
            parse_expression("t - x - y").unwrap(),
            Expr::binary(
                BinOp::Sub,
                Expr::binary(BinOp::Sub, Expr::Var(0), Expr::Var(1)),
                Expr::Var(2)
            )
        );
        assert_eq!(
            parse_expression("t / x * y").unwrap(),
            Expr::binary(
                BinOp::Mul,
                Expr::binary(BinOp::Div, Expr::Var(0), Expr::Var(1)),
                Expr::Var(2)
            )
        );
        assert_eq!(
            parse_expression("t + x*y").unwrap(),
            Expr::binary(BinOp::Add, Expr::Var(0), Expr::binary(BinOp::Mul, Expr::Var(1), Expr::Var(2)))
        );
        assert_eq!(parse_expression("x^-1").unwrap(), Expr::Pow(var(1), -1));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(
            parse_expression("  sin ( x )*2").unwrap(),
            parse_expression("sin(x)*2").unwrap()
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expression("x + * y").unwrap_err();
        assert_eq!(err.position, 4);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedToken { .. }));

        let err = parse_expression("x + foo").unwrap_err();
        assert_eq!(err.position, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("foo".into()));

        let err = parse_expression("x^2.5").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonIntegerExponent("2.5".into()));

        let err = parse_expression("x^y").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedToken { .. }));

        let err = parse_expression("(x + 1").unwrap_err();
        assert_eq!(err.position, 6);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedEnd { .. }));

        assert!(matches!(
            parse_expression("x $ 1").unwrap_err().kind,
            ParseErrorKind::UnexpectedChar('$')
        ));
        assert!(parse_expression("exp x").is_err());
        assert!(parse_expression("x y").is_err());
        assert!(parse_expression("").is_err());
    }

    #[test]
    fn scientific_literals_and_pi() {
        assert_eq!(parse_expression("1.5e-3").unwrap(), Expr::Real(1.5e-3));
        assert_eq!(parse_expression("pi").unwrap(), Expr::Real(std::f64::consts::PI));
    }
}
