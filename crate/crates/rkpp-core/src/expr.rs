//! Closed-form coefficient expressions in the time variable `t`.
//!
//! The catalog stores every variable coefficient as expression text. The
//! grammar covers exactly what those coefficients need: arithmetic with the
//! usual precedence, a right-associative power operator, the constant `pi`,
//! the variable `t`, and the functions `exp`, `log`, `sin`, `cos`, `tan`,
//! `sinh`, `cosh`, `tanh`. The reciprocal/ratio helpers `sech`, `csch`,
//! `coth`, `sec`, `csc` and `sqrt` are accepted as sugar and expand at parse
//! time, so the AST and the differentiator only ever see the core set.
//!
//! Domain violations (division by zero, `log` of a non-positive value, ...)
//! surface at evaluation time as [`Error::Domain`], never at parse time.

use std::fmt;

use crate::error::{Error, Result};

/// Primitive function heads kept in the AST.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }
}

/// Expression tree over the single variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    /// Numeric literal.
    Const(f64),
    /// The constant pi.
    Pi,
    /// The time variable `t`.
    Var,
    /// Unary negation.
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Div(Box<Expression>, Box<Expression>),
    /// `Pow(base, exponent)`, right-associative in the grammar.
    Pow(Box<Expression>, Box<Expression>),
    Fun(Func, Box<Expression>),
}

impl Expression {
    /// Constant expression.
    pub fn constant(v: f64) -> Self {
        Expression::Const(v)
    }

    /// The zero expression.
    pub fn zero() -> Self {
        Expression::Const(0.0)
    }

    /// Evaluate at time `t`. See [`eval_expr`].
    pub fn eval(&self, t: f64) -> Result<f64> {
        eval_expr(self, t)
    }

    /// True if the expression is a literal with this exact value.
    fn is_const(&self, v: f64) -> bool {
        matches!(self, Expression::Const(c) if *c == v)
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parse expression text into an [`Expression`].
///
/// Grammar (usual precedence, `^` binds tightest and associates right):
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor (('*' | '/') factor)*
/// factor := '-' factor | power
/// power  := atom ('^' factor)?
/// atom   := number | 'pi' | 't' | name '(' expr ')' | '(' expr ')'
/// ```
///
/// Numbers accept decimals and scientific notation (`1e-3`, `2.5E2`).
pub fn parse_expr(text: &str) -> Result<Expression> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

impl std::str::FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expression::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expression::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expression::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expression::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expression> {
        if self.eat(b'-') {
            return Ok(Expression::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression> {
        let base = self.atom()?;
        if self.eat(b'^') {
            // Right-associative: the exponent is a full factor so `2^3^2`
            // parses as `2^(3^2)` and `2^-3` is accepted.
            let exp = self.factor()?;
            return Ok(Expression::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expression> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.name(),
            _ => Err(self.error("expected a number, name or '('")),
        }
    }

    fn number(&mut self) -> Result<Expression> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            // Only consume the exponent if it is well-formed; otherwise the
            // 'e' belongs to a following name and the literal ends here.
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        let value: f64 = text.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: format!("malformed number literal {text:?}"),
        })?;
        self.skip_ws();
        Ok(Expression::Const(value))
    }

    fn name(&mut self) -> Result<Expression> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        let name = name.to_string();
        self.skip_ws();
        match name.as_str() {
            "t" => return Ok(Expression::Var),
            "pi" => return Ok(Expression::Pi),
            _ => {}
        }
        if !self.eat(b'(') {
            return Err(Error::Parse {
                pos: start,
                msg: format!("unknown name {name:?} (expected a function call, 't' or 'pi')"),
            });
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.error("expected ')' after function argument"));
        }
        let direct = |f: Func| Expression::Fun(f, Box::new(arg.clone()));
        let recip = |f: Func| {
            Expression::Div(
                Box::new(Expression::Const(1.0)),
                Box::new(Expression::Fun(f, Box::new(arg.clone()))),
            )
        };
        Ok(match name.as_str() {
            "exp" => direct(Func::Exp),
            "log" => direct(Func::Log),
            "sin" => direct(Func::Sin),
            "cos" => direct(Func::Cos),
            "tan" => direct(Func::Tan),
            "sinh" => direct(Func::Sinh),
            "cosh" => direct(Func::Cosh),
            "tanh" => direct(Func::Tanh),
            // Sugar: expand so the core AST stays minimal.
            "sech" => recip(Func::Cosh),
            "csch" => recip(Func::Sinh),
            "sec" => recip(Func::Cos),
            "csc" => recip(Func::Sin),
            "coth" => Expression::Div(
                Box::new(Expression::Fun(Func::Cosh, Box::new(arg.clone()))),
                Box::new(Expression::Fun(Func::Sinh, Box::new(arg))),
            ),
            "cot" => Expression::Div(
                Box::new(Expression::Fun(Func::Cos, Box::new(arg.clone()))),
                Box::new(Expression::Fun(Func::Sin, Box::new(arg)))
            ),
            "sqrt" => Expression::Pow(Box::new(arg), Box::new(Expression::Const(0.5))),
            _ => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unknown function {name:?}"),
                })
            }
        })
    }
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Evaluate `e` at time `t`.
///
/// Domain violations return [`Error::Domain`]: division by exact zero,
/// `log` of a non-positive argument, fractional powers of negative bases,
/// `0^negative`, and any operation producing a non-finite value.
pub fn eval_expr(e: &Expression, t: f64) -> Result<f64> {
    let v = eval_inner(e, t)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("non-finite value for {e} at t = {t}")))
    }
}

fn eval_inner(e: &Expression, t: f64) -> Result<f64> {
    Ok(match e {
        Expression::Const(c) => *c,
        Expression::Pi => std::f64::consts::PI,
        Expression::Var => t,
        Expression::Neg(a) => -eval_inner(a, t)?,
        Expression::Add(a, b) => eval_inner(a, t)? + eval_inner(b, t)?,
        Expression::Sub(a, b) => eval_inner(a, t)? - eval_inner(b, t)?,
        Expression::Mul(a, b) => eval_inner(a, t)? * eval_inner(b, t)?,
        Expression::Div(a, b) => {
            let denom = eval_inner(b, t)?;
            if denom == 0.0 {
                return Err(Error::Domain(format!("division by zero in {e} at t = {t}")));
            }
            eval_inner(a, t)? / denom
        }
        Expression::Pow(a, b) => {
            let base = eval_inner(a, t)?;
            let exp = eval_inner(b, t)?;
            let v = base.powf(exp);
            if v.is_nan() {
                return Err(Error::Domain(format!(
                    "invalid power {base}^{exp} in {e} at t = {t}"
                )));
            }
            v
        }
        Expression::Fun(f, a) => {
            let x = eval_inner(a, t)?;
            match f {
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(Error::Domain(format!(
                            "log of non-positive argument {x} at t = {t}"
                        )));
                    }
                    x.ln()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => x.tan(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => x.tanh(),
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

/// Exact derivative of `e` with respect to `t`.
///
/// Results are lightly simplified (constant folding, dropped zero terms and
/// unit factors) which keeps printed derivatives readable and evaluation
/// cheap; no deep algebraic rewriting is attempted.
pub fn differentiate(e: &Expression) -> Expression {
    match e {
        Expression::Const(_) | Expression::Pi => Expression::Const(0.0),
        Expression::Var => Expression::Const(1.0),
        Expression::Neg(a) => neg(differentiate(a)),
        Expression::Add(a, b) => add(differentiate(a), differentiate(b)),
        Expression::Sub(a, b) => sub(differentiate(a), differentiate(b)),
        Expression::Mul(a, b) => add(
            mul(differentiate(a), (**b).clone()),
            mul((**a).clone(), differentiate(b)),
        ),
        Expression::Div(a, b) => {
            // (a/b)' = (a' b - a b') / b^2
            let num = sub(
                mul(differentiate(a), (**b).clone()),
                mul((**a).clone(), differentiate(b)),
            );
            div(num, pow((**b).clone(), Expression::Const(2.0)))
        }
        Expression::Pow(base, exponent) => {
            let f = (**base).clone();
            let fp = differentiate(base);
            if let Expression::Const(c) = **exponent {
                // (f^c)' = c f^(c-1) f'
                return mul(
                    mul(Expression::Const(c), pow(f, Expression::Const(c - 1.0))),
                    fp,
                );
            }
            // General case: f^g * (g' log f + g f'/f)
            let g = (**exponent).clone();
            let gp = differentiate(exponent);
            let inner = add(
                mul(gp, fun(Func::Log, f.clone())),
                mul(g.clone(), div(fp, f.clone())),
            );
            mul(pow(f, g), inner)
        }
        Expression::Fun(f, a) => {
            let x = (**a).clone();
            let xp = differentiate(a);
            let outer = match f {
                Func::Exp => fun(Func::Exp, x),
                Func::Log => return div(xp, x),
                Func::Sin => fun(Func::Cos, x),
                Func::Cos => neg(fun(Func::Sin, x)),
                // tan' = 1 + tan^2 keeps the result inside the core set.
                Func::Tan => add(
                    Expression::Const(1.0),
                    pow(fun(Func::Tan, x), Expression::Const(2.0)),
                ),
                Func::Sinh => fun(Func::Cosh, x),
                Func::Cosh => fun(Func::Sinh, x),
                // tanh' = 1 - tanh^2.
                Func::Tanh => sub(
                    Expression::Const(1.0),
                    pow(fun(Func::Tanh, x), Expression::Const(2.0)),
                ),
            };
            mul(outer, xp)
        }
    }
}

// Smart constructors with constant folding, used by the differentiator.

fn neg(a: Expression) -> Expression {
    match a {
        Expression::Const(c) => Expression::Const(-c),
        Expression::Neg(inner) => *inner,
        other => Expression::Neg(Box::new(other)),
    }
}

fn add(a: Expression, b: Expression) -> Expression {
    if a.is_const(0.0) {
        return b;
    }
    if b.is_const(0.0) {
        return a;
    }
    if let (Expression::Const(x), Expression::Const(y)) = (&a, &b) {
        return Expression::Const(x + y);
    }
    Expression::Add(Box::new(a), Box::new(b))
}

fn sub(a: Expression, b: Expression) -> Expression {
    if b.is_const(0.0) {
        return a;
    }
    if a.is_const(0.0) {
        return neg(b);
    }
    if let (Expression::Const(x), Expression::Const(y)) = (&a, &b) {
        return Expression::Const(x - y);
    }
    Expression::Sub(Box::new(a), Box::new(b))
}

fn mul(a: Expression, b: Expression) -> Expression {
    if a.is_const(0.0) || b.is_const(0.0) {
        return Expression::Const(0.0);
    }
    if a.is_const(1.0) {
        return b;
    }
    if b.is_const(1.0) {
        return a;
    }
    if let (Expression::Const(x), Expression::Const(y)) = (&a, &b) {
        return Expression::Const(x * y);
    }
    Expression::Mul(Box::new(a), Box::new(b))
}

fn div(a: Expression, b: Expression) -> Expression {
    if a.is_const(0.0) {
        return Expression::Const(0.0);
    }
    if b.is_const(1.0) {
        return a;
    }
    Expression::Div(Box::new(a), Box::new(b))
}

fn pow(a: Expression, b: Expression) -> Expression {
    if b.is_const(0.0) {
        return Expression::Const(1.0);
    }
    if b.is_const(1.0) {
        return a;
    }
    Expression::Pow(Box::new(a), Box::new(b))
}

fn fun(f: Func, a: Expression) -> Expression {
    Expression::Fun(f, Box::new(a))
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

impl fmt::Display for Expression {
    /// Prints a form that re-parses to the same values (round-trip is at the
    /// value level, not the tree level). Rust's shortest-round-trip float
    /// formatting keeps literals exact.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    write!(out, "({c})")
                } else {
                    write!(out, "{c}")
                }
            }
            Expression::Pi => write!(out, "pi"),
            Expression::Var => write!(out, "t"),
            Expression::Neg(a) => write!(out, "(-{a})"),
            Expression::Add(a, b) => write!(out, "({a} + {b})"),
            Expression::Sub(a, b) => write!(out, "({a} - {b})"),
            Expression::Mul(a, b) => write!(out, "({a} * {b})"),
            Expression::Div(a, b) => write!(out, "({a} / {b})"),
            Expression::Pow(a, b) => write!(out, "({a} ^ {b})"),
            Expression::Fun(f, a) => write!(out, "{}({a})", f.name()),
        }
    }
}
