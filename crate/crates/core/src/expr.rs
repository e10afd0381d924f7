//! Infix expressions over named symbols.
//!
//! Grammar: sums and differences of products and quotients of powers;
//! atoms are integers, identifiers and parenthesized expressions. Exponents
//! are integers (`x^-2`, `x^(-2)`) or parenthesized fractions (`q^(1/2)`).
//! Juxtaposition is not multiplication.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{ArithError, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("exponent {0} is not allowed here")]
    BadExponent(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ExprError::Parse { pos: i, msg: format!("unexpected character `{}`", c) });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ExprError> {
        Err(ExprError::Parse { pos: self.here(), msg: msg.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rational, ExprError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let p = self.integer()?;
            let q = if self.eat('/') { self.integer()? } else { BigInt::one() };
            if q.is_zero() {
                return self.err("zero denominator in exponent");
            }
            if !self.eat(')') {
                return self.err("expected `)`");
            }
            let r = Rational::new(p, q);
            return Ok(if neg { -r } else { r });
        }
        let neg = self.eat('-');
        let p = self.integer()?;
        Ok(Rational::from_integer(if neg { -p } else { p }))
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(_) => self.err("expected a number, symbol or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len() };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// A ring the expression language can be evaluated into.
pub trait Evaluate: Sized {
    fn constant(c: &Rational) -> Result<Self, ExprError>;
    fn symbol(name: &str) -> Result<Self, ExprError>;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Result<Self, ExprError>;
    fn pow(&self, e: &Rational) -> Result<Self, ExprError>;
}

impl Expr {
    pub fn eval<T: Evaluate>(&self) -> Result<T, ExprError> {
        Ok(match self {
            Expr::Num(c) => T::constant(c)?,
            Expr::Sym(s) => T::symbol(s)?,
            Expr::Neg(a) => a.eval::<T>()?.neg(),
            Expr::Add(a, b) => a.eval::<T>()?.add(&b.eval()?),
            Expr::Sub(a, b) => a.eval::<T>()?.add(&b.eval::<T>()?.neg()),
            Expr::Mul(a, b) => a.eval::<T>()?.mul(&b.eval()?),
            Expr::Div(a, b) => a.eval::<T>()?.div(&b.eval()?)?,
            Expr::Pow(a, e) => a.eval::<T>()?.pow(e)?,
        })
    }

    /// Symbols in order of first appearance.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_symbols(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{}", c),
            Expr::Sym(s) => write!(f, "{}", s),
            Expr::Neg(a) => write!(f, "-({})", a),
            Expr::Add(a, b) => write!(f, "({} + {})", a, b),
            Expr::Sub(a, b) => write!(f, "({} - {})", a, b),
            Expr::Mul(a, b) => write!(f, "({} * {})", a, b),
            Expr::Div(a, b) => write!(f, "({} / {})", a, b),
            Expr::Pow(a, e) => write!(f, "({})^({})", a, e),
        }
    }
}

fn integer_exponent(e: &Rational) -> Result<i64, ExprError> {
    if !e.is_integer() {
        return Err(ExprError::BadExponent(e.to_string()));
    }
    i64::try_from(e.to_integer()).map_err(|_| ExprError::BadExponent(e.to_string()))
}

impl Evaluate for RatFunc {
    fn constant(c: &Rational) -> Result<Self, ExprError> {
        Ok(RatFunc::from_rational(c.clone()))
    }
    fn symbol(name: &str) -> Result<Self, ExprError> {
        Ok(RatFunc::var(name))
    }
    fn add(&self, other: &Self) -> Self {
        RatFunc::add(self, other)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        RatFunc::mul(self, other)
    }
    fn div(&self, other: &Self) -> Result<Self, ExprError> {
        Ok(RatFunc::div(self, other)?)
    }
    fn pow(&self, e: &Rational) -> Result<Self, ExprError> {
        Ok(RatFunc::pow(self, integer_exponent(e)?)?)
    }
}

/// Parses and evaluates into a rational function; symbols outside
/// `allowed` (when given) are rejected.
pub fn parse_ratfunc(src: &str, allowed: Option<&[String]>) -> Result<RatFunc, ExprError> {
    let e = parse(src)?;
    if let Some(allowed) = allowed {
        if let Some(bad) = e.symbols().into_iter().find(|s| !allowed.contains(s)) {
            return Err(ExprError::UnknownSymbol(bad));
        }
    }
    e.eval()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn precedence_and_powers() {
        let f = parse_ratfunc("1 + x^2*y - x/y", None).unwrap();
        let x = RatFunc::var("x");
        let y = RatFunc::var("y");
        let expected = RatFunc::one().add(&x.pow(2).unwrap().mul(&y)).sub(&x.div(&y).unwrap());
        assert_eq!(f, expected);
        assert_eq!(parse_ratfunc("-x^2", None).unwrap(), x.pow(2).unwrap().neg());
        assert_eq!(parse_ratfunc("x^-1", None).unwrap(), x.inv().unwrap());
        assert_eq!(parse_ratfunc("(x)^(-2)", None).unwrap(), x.pow(-2).unwrap());
        assert_eq!(parse_ratfunc("a/b/c", None).unwrap(), parse_ratfunc("a/(b*c)", None).unwrap());
    }

    #[test]
    fn fractional_exponent_parses_but_does_not_evaluate_to_ratfunc() {
        let e = parse("q^(1/2)").unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::Sym("q".into())), rat(1, 2)));
        assert!(matches!(e.eval::<RatFunc>(), Err(ExprError::BadExponent(_))));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("1 +"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("(x"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("x $ y"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse("x y"), Err(ExprError::Parse { .. })));
        let allowed = vec!["x".to_string()];
        assert_eq!(parse_ratfunc("x + z", Some(&allowed)), Err(ExprError::UnknownSymbol("z".into())));
        assert!(matches!(parse_ratfunc("1/(x - x)", None), Err(ExprError::Arith(ArithError::DivisionByZero))));
    }
}
