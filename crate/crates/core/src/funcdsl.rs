//! A small, total expression language for test functions f(x): literals,
//! the variable x, arithmetic, constant-exponent powers and the unary
//! functions exp, sin, cos, sqrt, log. Supports evaluation, symbolic
//! differentiation up to order 4 and conversion into a certified
//! `FuncHandle`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mtransform::{EvalFn, FuncHandle, GrowthBound};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Base to a constant real exponent.
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Sqrt(Box<Expr>),
    Log(Box<Expr>),
}

impl Expr {
    /// Total evaluation; domain violations (log/sqrt of a negative, division
    /// by zero, 0 to a negative power) surface as errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let d = b.eval(x)?;
                if d == 0.0 {
                    return Err(Error::DomainError(format!("division by zero at x = {x}")));
                }
                a.eval(x)? / d
            }
            Expr::Pow(a, p) => {
                let base = a.eval(x)?;
                if base < 0.0 && p.fract() != 0.0 {
                    return Err(Error::DomainError(format!(
                        "negative base {base} to non-integer power {p}"
                    )));
                }
                if base == 0.0 && *p < 0.0 {
                    return Err(Error::DomainError(format!("0^{p} at x = {x}")));
                }
                base.powf(*p)
            }
            Expr::Exp(a) => a.eval(x)?.exp(),
            Expr::Sin(a) => a.eval(x)?.sin(),
            Expr::Cos(a) => a.eval(x)?.cos(),
            Expr::Sqrt(a) => {
                let b = a.eval(x)?;
                if b < 0.0 {
                    return Err(Error::DomainError(format!("sqrt of negative {b} at x = {x}")));
                }
                b.sqrt()
            }
            Expr::Log(a) => {
                let b = a.eval(x)?;
                if b <= 0.0 {
                    return Err(Error::DomainError(format!("log of non-positive {b} at x = {x}")));
                }
                b.ln()
            }
        };
        Ok(v)
    }
}

// ---------------------------------------------------------------------------
// printing (canonical, fully parenthesized where needed)
// ---------------------------------------------------------------------------

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn fmt_child(e: &Expr, parent_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(e) < parent_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if *c < 0.0 {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var => write!(f, "x"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(a, 4, f)
            }
            Expr::Add(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, "+")?;
                fmt_child(b, 2, f)
            }
            Expr::Sub(a, b) => {
                fmt_child(a, 1, f)?;
                write!(f, "-")?;
                fmt_child(b, 2, f)
            }
            Expr::Mul(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "*")?;
                fmt_child(b, 3, f)
            }
            Expr::Div(a, b) => {
                fmt_child(a, 2, f)?;
                write!(f, "/")?;
                fmt_child(b, 3, f)
            }
            Expr::Pow(a, p) => {
                fmt_child(a, 5, f)?;
                if *p < 0.0 {
                    write!(f, "^({p})")
                } else {
                    write!(f, "^{p}")
                }
            }
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
        }
    }
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(pos: usize, expected: &str) -> Error {
    Error::SyntaxError {
        position: pos,
        expected: expected.into(),
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8, what: &str) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos, what))
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos == start {
            return Err(err(start, "a number"));
        }
        // optional exponent part
        if self.pos < self.src.len() && (self.src[self.pos] | 32) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            let digits_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits_start {
                // not an exponent after all (e.g. "2e" would be "2" then junk)
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| err(start, "a number"))
    }

    fn ident(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        while end < self.src.len() && self.src[end].is_ascii_alphabetic() {
            end += 1;
        }
        if end == start {
            return None;
        }
        self.pos = end;
        Some((
            start,
            std::str::from_utf8(&self.src[start..end]).unwrap().to_string(),
        ))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat(b'-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = Expr::Mul(Box::new(acc), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                acc = Expr::Div(Box::new(acc), Box::new(self.unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    /// atom ('^' exponent)*, right-associative; exponents are constants, so
    /// a^b^c folds to a^(b^c) numerically.
    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let mut exps = Vec::new();
        while self.eat(b'^') {
            exps.push(self.exponent()?);
        }
        if exps.is_empty() {
            return Ok(base);
        }
        let mut p = *exps.last().unwrap();
        for e in exps.iter().rev().skip(1) {
            p = e.powf(p);
        }
        Ok(Expr::Pow(Box::new(base), p))
    }

    /// A constant exponent: optionally signed number, possibly parenthesized.
    fn exponent(&mut self) -> Result<f64> {
        if self.eat(b'(') {
            let v = self.exponent()?;
            self.expect(b')', "')' closing the exponent")?;
            return Ok(v);
        }
        if self.eat(b'-') {
            return Ok(-self.exponent()?);
        }
        self.number()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')', "')'")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expr::Const(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let (start, name) = self.ident().unwrap();
                match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "exp" | "sin" | "cos" | "sqrt" | "log" => {
                        self.expect(b'(', "'(' after function name")?;
                        let arg = Box::new(self.expr()?);
                        self.expect(b')', "')'")?;
                        Ok(match name.as_str() {
                            "exp" => Expr::Exp(arg),
                            "sin" => Expr::Sin(arg),
                            "cos" => Expr::Cos(arg),
                            "sqrt" => Expr::Sqrt(arg),
                            _ => Expr::Log(arg),
                        })
                    }
                    _ => Err(err(start, "one of x, exp, sin, cos, sqrt, log")),
                }
            }
            _ => Err(err(self.pos, "a number, x, a function call or '('")),
        }
    }
}

/// Parses an expression; the whole input must be consumed.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(err(p.pos, "end of input"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

fn is_const(e: &Expr, c: f64) -> bool {
    matches!(e, Expr::Const(v) if *v == c)
}

/// Basic simplification: constant folding and 0/1 elimination.
fn simplify(e: Expr) -> Expr {
    use Expr::*;
    match e {
        Neg(a) => {
            let a = simplify(*a);
            match a {
                Const(c) => Const(-c),
                Neg(inner) => *inner,
                other => Neg(Box::new(other)),
            }
        }
        Add(a, b) => {
            let (a, b) = (simplify(*a), simplify(*b));
            match (a, b) {
                (Const(x), Const(y)) => Const(x + y),
                (a, b) if is_const(&b, 0.0) => a,
                (a, b) if is_const(&a, 0.0) => b,
                (a, b) => Add(Box::new(a), Box::new(b)),
            }
        }
        Sub(a, b) => {
            let (a, b) = (simplify(*a), simplify(*b));
            match (a, b) {
                (Const(x), Const(y)) => Const(x - y),
                (a, b) if is_const(&b, 0.0) => a,
                (a, b) if is_const(&a, 0.0) => simplify(Neg(Box::new(b))),
                (a, b) => Sub(Box::new(a), Box::new(b)),
            }
        }
        Mul(a, b) => {
            let (a, b) = (simplify(*a), simplify(*b));
            match (a, b) {
                (Const(x), Const(y)) => Const(x * y),
                (a, _) if is_const(&a, 0.0) => Const(0.0),
                (_, b) if is_const(&b, 0.0) => Const(0.0),
                (a, b) if is_const(&a, 1.0) => b,
                (a, b) if is_const(&b, 1.0) => a,
                (a, b) => Mul(Box::new(a), Box::new(b)),
            }
        }
        Div(a, b) => {
            let (a, b) = (simplify(*a), simplify(*b));
            match (a, b) {
                (a, _) if is_const(&a, 0.0) => Const(0.0),
                (a, b) if is_const(&b, 1.0) => a,
                (Const(x), Const(y)) if y != 0.0 => Const(x / y),
                (a, b) => Div(Box::new(a), Box::new(b)),
            }
        }
        Pow(a, p) => {
            let a = simplify(*a);
            if p == 0.0 {
                Const(1.0)
            } else if p == 1.0 {
                a
            } else if let Const(c) = a {
                Const(c.powf(p))
            } else {
                Pow(Box::new(a), p)
            }
        }
        Exp(a) => Exp(Box::new(simplify(*a))),
        Sin(a) => Sin(Box::new(simplify(*a))),
        Cos(a) => Cos(Box::new(simplify(*a))),
        Sqrt(a) => Sqrt(Box::new(simplify(*a))),
        Log(a) => Log(Box::new(simplify(*a))),
        other => other,
    }
}

fn d(e: &Expr) -> Expr {
    use Expr::*;
    match e {
        Const(_) => Const(0.0),
        Var => Const(1.0),
        Neg(a) => Neg(Box::new(d(a))),
        Add(a, b) => Add(Box::new(d(a)), Box::new(d(b))),
        Sub(a, b) => Sub(Box::new(d(a)), Box::new(d(b))),
        Mul(a, b) => Add(
            Box::new(Mul(Box::new(d(a)), b.clone())),
            Box::new(Mul(a.clone(), Box::new(d(b)))),
        ),
        Div(a, b) => Div(
            Box::new(Sub(
                Box::new(Mul(Box::new(d(a)), b.clone())),
                Box::new(Mul(a.clone(), Box::new(d(b)))),
            )),
            Box::new(Pow(b.clone(), 2.0)),
        ),
        Pow(a, p) => Mul(
            Box::new(Mul(
                Box::new(Const(*p)),
                Box::new(Pow(a.clone(), p - 1.0)),
            )),
            Box::new(d(a)),
        ),
        Exp(a) => Mul(Box::new(Exp(a.clone())), Box::new(d(a))),
        Sin(a) => Mul(Box::new(Cos(a.clone())), Box::new(d(a))),
        Cos(a) => Neg(Box::new(Mul(Box::new(Sin(a.clone())), Box::new(d(a))))),
        Sqrt(a) => Div(
            Box::new(d(a)),
            Box::new(Mul(Box::new(Const(2.0)), Box::new(Sqrt(a.clone())))),
        ),
        Log(a) => Div(Box::new(d(a)), a.clone()),
    }
}

/// Symbolic derivative of the given order (1 through 4).
pub fn differentiate(e: &Expr, order: u32) -> Result<Expr> {
    if order == 0 || order > 4 {
        return Err(Error::UnsupportedOrder(order));
    }
    let mut cur = e.clone();
    for _ in 0..order {
        cur = simplify(d(&cur));
    }
    Ok(cur)
}

// ---------------------------------------------------------------------------
// handle conversion
// ---------------------------------------------------------------------------

fn as_eval_fn(e: Expr) -> EvalFn {
    std::sync::Arc::new(move |x: f64| match e.eval(x) {
        Ok(v) => Complex64::new(v, 0.0),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    })
}

/// Wraps the expression and its first four derivatives into a `FuncHandle`,
/// spot-checking the growth certificate on a log grid first.
pub fn to_handle(e: &Expr, growth: GrowthBound) -> Result<FuncHandle> {
    let eval = as_eval_fn(e.clone());
    growth.spot_check(&|x| eval(x))?;
    let derivs: Vec<EvalFn> = (1..=4)
        .map(|k| Ok(as_eval_fn(differentiate(e, k)?)))
        .collect::<Result<_>>()?;
    let label = e.to_string();
    Ok(FuncHandle {
        eval,
        growth,
        derivs,
        label,
    })
}
